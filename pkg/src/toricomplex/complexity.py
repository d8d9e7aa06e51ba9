"""Complexity invariants of toric log pairs and their exact minimization.

Three numbers are attached to a pair ``(X, B)`` together with a
decomposition ``Sigma = sum_j b_j B_j`` of (part of) the boundary:

* complexity      ``dim X + rank_Q Cl - |Sigma|``
* fine complexity ``dim X + dim_Q <Sigma> - |Sigma|``
* orbifold complexity: the fine formula, where the decomposition may
  additionally carry an orbifold structure ``n`` whose "tax"
  ``(1 - 1/n_rho) D_rho`` counts against the budget ``Sigma <= B`` but
  not towards the norm or the span.

``|Sigma|`` is the sum of the weights ``b_j``, and ``<Sigma>`` is the
span of the classes of the parts in the mode's rational class group.

:func:`minimize` computes the infimum of each quantity over invariant
decompositions whose parts are scaled sums of distinct prime divisors
(the search space is documented in the README); all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .divisor import as_coeffs, q_class, q_span_dim
from .fan import cone_dim
from .lattice import ToricomplexError, rank_q, simplex_solve
from .pairmodel import ToricPair, is_log_canonical, pair_class_group


class InvalidDecompositionError(ToricomplexError):
    """The proposed decomposition is not a decomposition of the boundary."""


class IncompatibleOrbifoldError(ToricomplexError):
    """The orbifold structure does not fit the pair's boundary."""


class NotLogCanonicalError(ToricomplexError):
    """Raised by entry points that require a log canonical pair."""


class NotFullDimensionalError(ToricomplexError):
    """Raised when a fixed-point computation is asked at a small cone."""


class InputTooLargeError(ToricomplexError):
    """The exhaustive search would exceed the configured partition limit."""


@dataclass(frozen=True)
class Part:
    """One summand ``weight * divisor`` of a decomposition."""

    weight: Fraction
    coeffs: tuple  # Fraction per ray


@dataclass(frozen=True)
class Decomposition:
    """Weighted parts plus one orbifold index per ray (1 = untwisted)."""

    parts: tuple
    orbifold: tuple

    @property
    def norm(self) -> Fraction:
        return sum((p.weight for p in self.parts), Fraction(0))


def trivial_orbifold(nrays: int) -> tuple:
    return (1,) * nrays


def make_decomposition(nrays: int, parts, orbifold=None) -> Decomposition:
    """Normalize raw (weight, coeffs) pairs into a :class:`Decomposition`."""
    norm_parts = []
    for weight, coeffs in parts:
        norm_parts.append(Part(Fraction(weight), as_coeffs(coeffs, nrays)))
    if orbifold is None:
        orb = trivial_orbifold(nrays)
    else:
        orb = tuple(int(n) for n in orbifold)
        if len(orb) != nrays:
            raise IncompatibleOrbifoldError(
                f"expected {nrays} orbifold indices, got {len(orb)}")
    return Decomposition(parts=tuple(norm_parts), orbifold=orb)


def decomposition_total(dec: Decomposition) -> tuple:
    """Per-ray coefficient of the full divisor Sigma, orbifold tax included."""
    nrays = len(dec.orbifold)
    total = [Fraction(1) - Fraction(1, n) for n in dec.orbifold]
    for p in dec.parts:
        for i, c in enumerate(p.coeffs):
            total[i] += p.weight * c
    return tuple(total)


def validate_decomposition(pair: ToricPair, dec: Decomposition) -> None:
    """Check that ``dec`` decomposes (part of) the pair's boundary.

    Raises :class:`IncompatibleOrbifoldError` for bad orbifold data and
    :class:`InvalidDecompositionError` for bad parts or budget overruns.
    """
    nrays = len(pair.fan.rays)
    if len(dec.orbifold) != nrays:
        raise IncompatibleOrbifoldError(
            f"expected {nrays} orbifold indices, got {len(dec.orbifold)}")
    for i, n in enumerate(dec.orbifold):
        if not isinstance(n, int) or n < 1:
            raise IncompatibleOrbifoldError(f"orbifold index {n!r} at ray {i}")
        if n > 1 and pair.boundary[i] < 1 - Fraction(1, n):
            raise IncompatibleOrbifoldError(
                f"index {n} at ray {i} needs boundary coefficient >= "
                f"{1 - Fraction(1, n)}, found {pair.boundary[i]}")
    local = set(pair.local_rays())
    for j, p in enumerate(dec.parts):
        if p.weight <= 0:
            raise InvalidDecompositionError(f"part {j} has weight {p.weight}")
        if len(p.coeffs) != nrays:
            raise InvalidDecompositionError(
                f"part {j} has {len(p.coeffs)} coefficients, expected {nrays}")
        if all(c == 0 for c in p.coeffs):
            raise InvalidDecompositionError(f"part {j} is the zero divisor")
        for i, c in enumerate(p.coeffs):
            if c < 0:
                raise InvalidDecompositionError(
                    f"part {j} has negative coefficient at ray {i}")
            if (c * dec.orbifold[i]).denominator != 1:
                raise InvalidDecompositionError(
                    f"part {j} is not integral against orbifold index "
                    f"{dec.orbifold[i]} at ray {i}")
        if pair.mode == "local" and not any(p.coeffs[i] > 0 for i in local):
            raise InvalidDecompositionError(
                f"part {j} misses the chosen point (no ray of the cone)")
    total = decomposition_total(dec)
    for i, t in enumerate(total):
        if t > pair.boundary[i]:
            raise InvalidDecompositionError(
                f"total coefficient {t} at ray {i} exceeds boundary "
                f"{pair.boundary[i]}")


def span_dimension(pair: ToricPair, dec: Decomposition) -> int:
    """dim_Q of the span of the part classes in the mode's class group."""
    pres = pair_class_group(pair)
    rays = pair.local_rays()
    return q_span_dim(pres, [[p.coeffs[i] for i in rays] for p in dec.parts])


def _require_trivial_orbifold(dec: Decomposition) -> None:
    if any(n != 1 for n in dec.orbifold):
        raise InvalidDecompositionError(
            "this invariant is defined for untwisted decompositions; "
            "use orbifold_complexity")


def complexity(pair: ToricPair, dec: Decomposition) -> Fraction:
    """dim X + rank_Q Cl - |Sigma| for an untwisted decomposition."""
    _require_trivial_orbifold(dec)
    validate_decomposition(pair, dec)
    return pair.dim + pair_class_group(pair).free_rank - dec.norm


def fine_complexity(pair: ToricPair, dec: Decomposition) -> Fraction:
    """dim X + dim_Q<Sigma> - |Sigma| for an untwisted decomposition."""
    _require_trivial_orbifold(dec)
    validate_decomposition(pair, dec)
    return pair.dim + span_dimension(pair, dec) - dec.norm


def orbifold_complexity(pair: ToricPair, dec: Decomposition) -> Fraction:
    """dim X + dim_Q<Sigma> - |Sigma|; the orbifold tax is budget-only."""
    validate_decomposition(pair, dec)
    return pair.dim + span_dimension(pair, dec) - dec.norm


# ---------------------------------------------------------------------------
# Minimization


@dataclass(frozen=True)
class MinimizeReport:
    """The three minimized values with their realizing decompositions."""

    c: Fraction
    c_fine: Fraction
    c_orb: Fraction
    dec_c: Decomposition
    dec_fine: Decomposition
    dec_orb: Decomposition
    cl_rank: int
    span_fine: int
    span_orb: int


def _orbifold_options(a: Fraction, cap: int):
    """Orbifold indices worth trying for a prime with boundary coefficient a.

    Divisors of the denominator only, capped, and only those leaving a
    positive weight budget ``n(a - 1) + 1`` once the tax is paid.
    """
    den = a.denominator
    out = []
    for n in range(1, min(den, cap) + 1):
        if den % n == 0:
            budget = n * (a - 1) + 1
            if budget > 0:
                out.append((n, budget))
    return out


def _search_fine(fixed_vecs, elems, options):
    """Exhaustive search for the best grouping of the fractional primes.

    ``elems`` is a list of (ray, coefficient, class-vector); ``options``
    gives the (index, weight-budget) choices per element.  Maximizes
    F = |Sigma| - rank over: drop the element, start a new group, or
    join an existing group (branching over orbifold indices as soon as a
    group has two members).  Returns (best F, groups, labels) where
    groups is a list of ([(element, index)...], weight).
    """
    t = len(elems)
    fixed_rank = rank_q(fixed_vecs) if fixed_vecs else 0
    fixed_norm = Fraction(len(fixed_vecs))
    suffix = [Fraction(0)] * (t + 1)
    for i in range(t - 1, -1, -1):
        suffix[i] = suffix[i + 1] + max(b for _, b in options[i])

    best = {"key": None, "F": None, "groups": None}
    groups = []  # mutable: [members list of (elem index, orb index)]

    def group_weight(members):
        return min(dict(options[e])[n] for e, n in members)

    def leaf():
        vecs = list(fixed_vecs)
        snapshot = []
        total = fixed_norm
        for members in groups:
            w = group_weight(members)
            v = None
            for e, n in members:
                scaled = [x / n for x in elems[e][2]]
                v = scaled if v is None else [a + b for a, b in zip(v, scaled)]
            vecs.append(v)
            snapshot.append((list(members), w))
            total += w
        F = total - rank_q(vecs)
        labels = []
        orb = []
        assigned = {}
        for gi, members in enumerate(groups):
            for e, n in members:
                assigned[e] = (gi, n)
        for e in range(t):
            if e in assigned:
                gi, n = assigned[e]
                mates = tuple(sorted(elems[m][0] for m, _ in groups[gi]
                                     if m != e))
                labels.append((0, mates))
                orb.append(n)
            else:
                labels.append((1,))
                orb.append(1)
        key = (-F, tuple(labels), tuple(orb))
        if best["key"] is None or key < best["key"]:
            best["key"] = key
            best["F"] = F
            best["groups"] = snapshot

    def rec(i):
        if i == t:
            leaf()
            return
        if best["F"] is not None:
            potential = fixed_norm + suffix[i] - fixed_rank
            for members in groups:
                potential += group_weight(members)
            if potential < best["F"]:
                return
        # drop the element entirely
        rec(i + 1)
        # join an existing group
        for members in groups:
            if len(members) == 1:
                e0, _ = members[0]
                for n0, _ in options[e0]:
                    for n1, _ in options[i]:
                        members[0] = (e0, n0)
                        members.append((i, n1))
                        rec(i + 1)
                        members.pop()
                members[0] = (e0, 1)
            else:
                for n1, _ in options[i]:
                    members.append((i, n1))
                    rec(i + 1)
                    members.pop()
        # open a new group (index 1 until a second member arrives)
        groups.append([(i, 1)])
        rec(i + 1)
        groups.pop()

    rec(0)
    return best["F"], best["groups"]


def _realizing_decomposition(pair, ones, elems, groups):
    """Assemble the Decomposition realizing a search result."""
    nrays = len(pair.fan.rays)
    parts = []
    for ray in ones:
        coeffs = [Fraction(0)] * nrays
        coeffs[ray] = Fraction(1)
        parts.append((ray, Part(Fraction(1), tuple(coeffs))))
    orb = [1] * nrays
    for members, weight in groups:
        coeffs = [Fraction(0)] * nrays
        first = min(elems[e][0] for e, _ in members)
        for e, n in members:
            ray = elems[e][0]
            coeffs[ray] = Fraction(1, n)
            orb[ray] = n
        parts.append((first, Part(weight, tuple(coeffs))))
    parts.sort(key=lambda item: item[0])
    return Decomposition(parts=tuple(p for _, p in parts), orbifold=tuple(orb))


def minimize(pair: ToricPair, orbifold_cap: int = 12,
             partition_limit: int = 12) -> MinimizeReport:
    """Minimize the three complexities over invariant decompositions.

    The plain complexity is minimized by the prime decomposition of the
    boundary (restricted to the rays through the working locus).  The
    fine and orbifold complexities are minimized by exhaustive search
    over groupings of the boundary primes into parts, with drops
    allowed; a part built from a group carries weight equal to the
    smallest remaining budget among its members, and orbifold indices
    range over divisors of the coefficient denominators up to
    ``orbifold_cap``.  Coefficient-one primes always enter as their own
    untwisted parts (grouping or twisting them never improves any of
    the three values, so the search only branches on fractional primes).

    Raises NotLogCanonicalError for non-lc pairs and InputTooLargeError
    when more than ``partition_limit`` fractional primes would have to
    be grouped exhaustively.
    """
    if not 1 <= partition_limit <= 64:
        raise ValueError("partition_limit must be between 1 and 64")
    if orbifold_cap < 1:
        raise ValueError("orbifold_cap must be at least 1")
    if not is_log_canonical(pair):
        raise NotLogCanonicalError(
            "pair is not log canonical near its working locus")
    nrays = len(pair.fan.rays)
    pres = pair_class_group(pair)
    rays = pair.local_rays()
    support = [i for i in rays if pair.boundary[i] > 0]

    # plain complexity: prime decomposition over the working rays
    prime_parts = []
    for i in support:
        coeffs = [Fraction(0)] * nrays
        coeffs[i] = Fraction(1)
        prime_parts.append((pair.boundary[i], coeffs))
    dec_c = make_decomposition(nrays, prime_parts)
    validate_decomposition(pair, dec_c)
    c = pair.dim + pres.free_rank - dec_c.norm

    def ray_class(i):
        unit = [Fraction(0)] * len(rays)
        unit[rays.index(i)] = Fraction(1)
        return q_class(pres, unit)

    ones = [i for i in support if pair.boundary[i] == 1]
    fixed_vecs = [list(ray_class(i)) for i in ones]
    fracs = [i for i in support if pair.boundary[i] < 1]
    if len(fracs) > partition_limit:
        raise InputTooLargeError(
            f"{len(fracs)} fractional boundary primes exceed the partition "
            f"limit of {partition_limit}")
    elems = [(i, pair.boundary[i], list(ray_class(i))) for i in fracs]

    opts_plain = [[(1, a)] for _, a, _ in elems]
    f_fine, groups_fine = _search_fine(fixed_vecs, elems, opts_plain)
    dec_fine = _realizing_decomposition(pair, ones, elems, groups_fine)
    c_fine = pair.dim - f_fine

    opts_orb = [_orbifold_options(a, orbifold_cap) for _, a, _ in elems]
    f_orb, groups_orb = _search_fine(fixed_vecs, elems, opts_orb)
    dec_orb = _realizing_decomposition(pair, ones, elems, groups_orb)
    c_orb = pair.dim - f_orb

    validate_decomposition(pair, dec_fine)
    validate_decomposition(pair, dec_orb)
    assert fine_complexity(pair, dec_fine) == c_fine
    assert orbifold_complexity(pair, dec_orb) == c_orb
    assert c >= c_fine >= c_orb
    return MinimizeReport(
        c=c, c_fine=c_fine, c_orb=c_orb,
        dec_c=dec_c, dec_fine=dec_fine, dec_orb=dec_orb,
        cl_rank=pres.free_rank,
        span_fine=span_dimension(pair, dec_fine),
        span_orb=span_dimension(pair, dec_orb),
    )


def coefficient_one_rays(pair: ToricPair) -> list:
    """Rays through the working locus whose boundary coefficient is one."""
    return [i for i in pair.local_rays() if pair.boundary[i] == 1]


# ---------------------------------------------------------------------------
# Local complexity of a fixed point


@dataclass(frozen=True)
class LocalComplexityReport:
    value: Fraction
    boundary: tuple  # Fraction per cone ray, in cone order
    witness: tuple  # the linear functional certifying K + B linearly trivial
    components: int  # number of coefficient-one entries


def local_complexity_cloc(fan, cone) -> LocalComplexityReport:
    """Infimum of dim + rank Cl(germ) - sum(coefficients) over invariant
    boundaries that are log canonical at the cone's fixed point.

    Solved as an exact linear program over boundary coefficients in
    [0, 1] tied to a linear witness for K + B; the optimum is attained
    by the full invariant boundary.
    """
    from .divisor import local_class_group

    cone = tuple(sorted(int(i) for i in cone))
    if cone not in fan.max_cones:
        raise ValueError(f"{cone} is not a maximal cone of the fan")
    if cone_dim(fan, cone) != fan.rank:
        raise NotFullDimensionalError(
            "local complexity is computed at the fixed point of a "
            "full-dimensional cone")
    n = fan.rank
    r = len(cone)
    # variables: m+ (n), m- (n), a (r); rows: <m, u> + a = 1, a <= 1
    a_eq, b_eq = [], []
    for pos, i in enumerate(cone):
        u = fan.rays[i]
        row = list(u) + [-x for x in u] + [0] * r
        row[2 * n + pos] = 1
        a_eq.append(row)
        b_eq.append(1)
    a_ub, b_ub = [], []
    for pos in range(r):
        row = [0] * (2 * n + r)
        row[2 * n + pos] = 1
        a_ub.append(row)
        b_ub.append(1)
    objective = [0] * (2 * n) + [1] * r
    status, x, value = simplex_solve(objective, a_ub, b_ub, a_eq, b_eq)
    assert status == "optimal"  # a = 0, m = 0 is always feasible
    pres = local_class_group(fan, cone)
    coeffs = tuple(x[2 * n + pos] for pos in range(r))
    witness = tuple(x[k] - x[n + k] for k in range(n))
    return LocalComplexityReport(
        value=fan.rank + pres.free_rank - value,
        boundary=coeffs,
        witness=witness,
        components=sum(1 for a in coeffs if a == 1),
    )
