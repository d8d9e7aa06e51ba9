"""Invariant Q-divisors on a toric variety: class groups, Q-Cartier data,
nef/ample tests and support functions.

A divisor is a tuple of Fractions, one coefficient per fan ray; the divisor
of the ray rho_i is the i-th standard vector.  The class group is the
cokernel of the character lattice mapping m -> (<m, u_rho>)_rho, presented
by its Smith normal form.
"""

from fractions import Fraction
from math import gcd

from .lattice import (
    ToricomplexError,
    cokernel,
    rank_q,
    solve_rational,
    cartier_scale,
    vec_dot,
)
from .fan import _cone_hforms, _in_hform, locate_max_cone


class NotQCartierError(ToricomplexError):
    def __init__(self, cone_idx):
        self.cone_idx = cone_idx
        super().__init__(f"divisor is not Q-Cartier on maximal cone {cone_idx}")


def as_coeffs(values, nrays):
    coeffs = tuple(Fraction(v) for v in values)
    if len(coeffs) != nrays:
        raise ValueError(f"expected {nrays} coefficients, got {len(coeffs)}")
    return coeffs


def ray_matrix(fan, cone=None):
    """Rays as rows; restricted to a cone's rays (in cone order) if given."""
    idx = cone if cone is not None else range(len(fan.rays))
    return [list(fan.rays[i]) for i in idx]


def class_group(fan):
    """Presentation of the divisor class group Z^rays / M."""
    return cokernel(ray_matrix(fan))


def local_class_group(fan, cone):
    """Class group of the affine germ at the cone's distinguished point.

    Only the rays of the cone carry divisors through the point; the
    presentation's coordinates follow the cone's ray order.
    """
    return cokernel(ray_matrix(fan, cone))


def divisor_class(pres, coeffs):
    """Integral class (free, torsion) of an integer divisor."""
    v = [int(c) for c in coeffs]
    if any(Fraction(c) != iv for c, iv in zip(coeffs, v)):
        raise ValueError("integral class requires integer coefficients")
    return pres.class_of(v)


def q_class(pres, coeffs):
    """Class in Cl tensor Q (free coordinates only)."""
    return pres.q_class_of(list(coeffs))


def q_span_dim(pres, divisors):
    """Dimension over Q of the span of the divisor classes in Cl tensor Q."""
    vecs = [q_class(pres, d) for d in divisors]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return 0
    return rank_q(vecs)


def canonical_coeffs(fan):
    """The invariant canonical divisor: coefficient -1 at every ray."""
    return tuple(Fraction(-1) for _ in fan.rays)


def cartier_data(fan, coeffs):
    """Per-maximal-cone linear data of a Q-Cartier divisor.

    Returns a list of rational vectors m_sigma with <m_sigma, u_rho> =
    -coeff_rho for every ray of sigma.

    Raises:
        NotQCartierError: on the first cone where no such m exists.
    """
    out = []
    for ci, cone in enumerate(fan.max_cones):
        a = [[Fraction(x) for x in fan.rays[i]] for i in cone]
        b = [-coeffs[i] for i in cone]
        m = solve_rational(a, b)
        if m is None:
            raise NotQCartierError(ci)
        out.append(m)
    return out


def is_q_cartier(fan, coeffs):
    try:
        cartier_data(fan, coeffs)
        return True
    except NotQCartierError:
        return False


def cartier_index(fan, coeffs):
    """Smallest k >= 1 such that k * divisor is Cartier.

    Raises NotQCartierError if no multiple is Cartier.
    """
    k_total = 1
    for ci, cone in enumerate(fan.max_cones):
        denom = 1
        for i in cone:
            d = coeffs[i].denominator
            denom = denom * d // gcd(denom, d)
        a = ray_matrix(fan, cone)
        b = [int(-coeffs[i] * denom) for i in cone]
        res = cartier_scale(a, b)
        if res is None:
            raise NotQCartierError(ci)
        k_cone = res[0] * denom
        k_total = k_total * k_cone // gcd(k_total, k_cone)
    return k_total


def support_value(fan, coeffs, v, data=None, hforms=None):
    """Value at v of the support function of a Q-Cartier divisor.

    The support function is linear on each cone with value -coeff_rho at
    u_rho.  v must lie in the support of the fan.
    """
    data = data if data is not None else cartier_data(fan, coeffs)
    ci = locate_max_cone(fan, v, hforms)
    if ci is None:
        raise ValueError(f"{tuple(v)} is not in the support of the fan")
    return sum(m * Fraction(x) for m, x in zip(data[ci], v))


def is_nef(fan, coeffs):
    """Nef test (relative over the affine base for non-complete fans):
    the support function of the divisor is convex across every wall.

    Raises NotQCartierError when the divisor is not Q-Cartier.
    """
    data = cartier_data(fan, coeffs)
    for m in data:
        for i, u in enumerate(fan.rays):
            if vec_dot(m, u) < -coeffs[i]:
                return False
    return True


def is_ample(fan, coeffs):
    """Strict convexity: nef and the linear data of distinct maximal cones
    differ on every ray outside the cone.  On a complete fan this is
    ampleness; on a fan over an affine base it is relative ampleness."""
    data = cartier_data(fan, coeffs)
    for ci, cone in enumerate(fan.max_cones):
        m = data[ci]
        for i, u in enumerate(fan.rays):
            val = vec_dot(m, u)
            if i in cone:
                continue
            if val <= -coeffs[i]:
                return False
    return True


def principal_witness(fan, coeffs):
    """Rational m with div(chi^m) = divisor (i.e. <m, u_rho> = coeff_rho for
    every ray), or None when the divisor is not principal over Q."""
    a = [[Fraction(x) for x in r] for r in fan.rays]
    return solve_rational(a, list(coeffs))


def is_q_principal(fan, coeffs):
    return principal_witness(fan, coeffs) is not None
