"""Fans: rank, primitive rays, maximal cones as ray-index sets.

A fan is purely combinatorial data; geometric questions (validity,
completeness, smoothness, subdivision) are answered exactly through the
cone machinery in lattice.py.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .lattice import (
    ToricomplexError,
    cone_hform,
    cone_intersection,
    cone_is_pointed,
    extremal_rays,
    faces_of_cone,
    is_primitive,
    mat_vec,
    primitive_vector,
    smallest_face_containing,
    snf,
    span_saturation,
    vec_dot,
    vec_gcd,
)


class InvalidFanError(ToricomplexError):
    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"{c}: {d}" for c, d in diagnostics))


@dataclass(frozen=True)
class Fan:
    """rank: ambient lattice rank; rays: tuple of primitive integer tuples;
    max_cones: tuple of sorted ray-index tuples."""

    rank: int
    rays: tuple
    max_cones: tuple

    def cone_rays(self, cone):
        return [self.rays[i] for i in cone]


def make_fan(rank, rays, max_cones):
    """Normalize raw data into a Fan (no validation; see validate_fan)."""
    return Fan(rank=int(rank),
               rays=tuple(tuple(int(x) for x in r) for r in rays),
               max_cones=tuple(tuple(sorted(int(i) for i in c))
                               for c in max_cones))


def validate_fan(fan):
    """Diagnose structural defects.  Returns a list of (code, detail) pairs,
    empty exactly when the data is a valid fan."""
    diags = []
    n = fan.rank
    if n < 1:
        diags.append(("bad-rank", f"rank must be >= 1, got {n}"))
        return diags
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            diags.append(("bad-ray", f"ray {i} has length {len(r)}, want {n}"))
            return diags
        if not any(r):
            diags.append(("bad-ray", f"ray {i} is zero"))
        elif not is_primitive(r):
            diags.append(("nonprimitive-ray", f"ray {i} = {r}"))
    seen = {}
    for i, r in enumerate(fan.rays):
        if r in seen:
            diags.append(("duplicate-ray", f"rays {seen[r]} and {i} coincide"))
        else:
            seen[r] = i
    if diags:
        return diags
    used = set()
    pointed_ok = []
    for ci, cone in enumerate(fan.max_cones):
        if any(i < 0 or i >= len(fan.rays) for i in cone):
            diags.append(("bad-ray-index", f"cone {ci} references a missing ray"))
            continue
        if len(set(cone)) != len(cone):
            diags.append(("duplicate-cone-entry", f"cone {ci} repeats a ray"))
            continue
        used.update(cone)
        gens = fan.cone_rays(cone)
        if gens and not cone_is_pointed(gens):
            diags.append(("nonpointed-cone", f"cone {ci} has a lineality space"))
            continue
        if gens and extremal_rays(gens) != sorted(set(gens)):
            diags.append(("nonextremal-generator",
                          f"cone {ci} lists a non-extremal ray"))
            continue
        pointed_ok.append(ci)
    for i in range(len(fan.rays)):
        if i not in used:
            diags.append(("stray-ray", f"ray {i} appears in no maximal cone"))
    for a in range(len(pointed_ok)):
        for b in range(a + 1, len(pointed_ok)):
            ci, cj = pointed_ok[a], pointed_ok[b]
            si, sj = set(fan.max_cones[ci]), set(fan.max_cones[cj])
            if si <= sj or sj <= si:
                diags.append(("nested-max-cones", f"cones {ci} and {cj}"))
                continue
            gi = fan.cone_rays(fan.max_cones[ci])
            gj = fan.cone_rays(fan.max_cones[cj])
            meet = cone_intersection(gi, gj, n)
            common = si & sj
            common_prims = {fan.rays[i] for i in common}
            if set(meet) != common_prims:
                diags.append(("overlapping-cones",
                              f"cones {ci} and {cj} meet outside a common face"))
                continue
            # the common rays must span a face of each cone
            for s in (si, sj):
                order = sorted(s)
                sub = [order.index(i) for i in sorted(common)]
                face = smallest_face_containing([fan.rays[i] for i in order],
                                                n, sub)
                if face != frozenset(sub):
                    diags.append(("overlapping-cones",
                                  f"cones {ci} and {cj} meet outside a common face"))
                    break
    return diags


def require_valid(fan):
    diags = validate_fan(fan)
    if diags:
        raise InvalidFanError(diags)
    return fan


def _cone_hforms(fan):
    return [cone_hform(fan.cone_rays(c), fan.rank) for c in fan.max_cones]


def _in_hform(hform, v):
    eqs, ineqs = hform
    return all(vec_dot(e, v) == 0 for e in eqs) and \
        all(vec_dot(f, v) >= 0 for f in ineqs)


def locate_max_cone(fan, v, hforms=None):
    """Index of the first maximal cone containing v, or None."""
    hforms = hforms or _cone_hforms(fan)
    for ci, hf in enumerate(hforms):
        if _in_hform(hf, v):
            return ci
    return None


def cone_faces_global(fan, ci):
    """Faces of max cone ci as frozensets of global ray indices."""
    cone = fan.max_cones[ci]
    gens = fan.cone_rays(cone)
    return [frozenset(cone[i] for i in f)
            for f in faces_of_cone(gens, fan.rank)]


def cones_of_dim(fan, d):
    """All d-dimensional cones of the fan, as sorted ray-index tuples."""
    out = set()
    for ci in range(len(fan.max_cones)):
        for f in cone_faces_global(fan, ci):
            if f and len(span_saturation([fan.rays[i] for i in f])[0]) == d:
                out.add(tuple(sorted(f)))
    return sorted(out)


def cone_dim(fan, cone):
    if not cone:
        return 0
    return len(span_saturation([fan.rays[i] for i in cone])[0])


def is_simplicial_cone(fan, cone):
    return cone_dim(fan, cone) == len(cone)


def cone_multiplicity(fan, cone):
    """Index of the sublattice spanned by the cone's rays in the saturated
    lattice of its span (1 iff the cone is smooth).  Simplicial cones only."""
    if not is_simplicial_cone(fan, cone):
        raise ValueError("multiplicity is defined for simplicial cones")
    if not cone:
        return 1
    s = snf([list(fan.rays[i]) for i in cone])
    out = 1
    for d in s.invariants:
        out *= d
    return out


def is_simplicial(fan):
    return all(is_simplicial_cone(fan, c) for c in fan.max_cones)


def is_smooth(fan):
    return all(is_simplicial_cone(fan, c) and cone_multiplicity(fan, c) == 1
               for c in fan.max_cones)


_SAMPLE_COORDS = (Fraction(-1), Fraction(-2, 3), Fraction(-1, 5),
                  Fraction(1, 7), Fraction(1, 2), Fraction(1))


def is_complete(fan):
    """Exact completeness test: every maximal cone full-dimensional and every
    facet shared by exactly two maximal cones, cross-checked by locating a
    fixed dense set of rational sample points."""
    if not fan.max_cones:
        return False
    n = fan.rank
    for c in fan.max_cones:
        if cone_dim(fan, c) != n:
            return False
    facet_count = {}
    for ci in range(len(fan.max_cones)):
        for f in cone_faces_global(fan, ci):
            if f and cone_dim(fan, tuple(f)) == n - 1:
                key = frozenset(fan.rays[i] for i in f)
                facet_count[key] = facet_count.get(key, 0) + 1
        if n == 1:
            # facets of a 1-dim cone: the origin
            facet_count[frozenset()] = facet_count.get(frozenset(), 0) + 1
    if any(v != 2 for v in facet_count.values()):
        return False
    hforms = _cone_hforms(fan)
    for pt in product(_SAMPLE_COORDS, repeat=n):
        if locate_max_cone(fan, pt, hforms) is None:
            return False
    return True


def star_subdivision(fan, v):
    """Star subdivision at a primitive vector v in the fan's support.

    Cones containing v are replaced by joins of v with their facets not
    containing v; the new ray is appended after the existing ones.  If v
    already is a ray, the fan is returned unchanged.
    """
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("cannot subdivide at the origin")
    if not is_primitive(v):
        raise ValueError(f"subdivision vector {v} is not primitive")
    if v in fan.rays:
        return fan
    hforms = _cone_hforms(fan)
    hit = [ci for ci, hf in enumerate(hforms) if _in_hform(hf, v)]
    if not hit:
        raise ValueError(f"{v} is not in the support of the fan")
    new_rays = fan.rays + (v,)
    vi = len(fan.rays)
    new_cones = []
    for ci, cone in enumerate(fan.max_cones):
        if ci not in hit:
            new_cones.append(cone)
            continue
        gens = fan.cone_rays(cone)
        d = cone_dim(fan, cone)
        for f in faces_of_cone(gens, fan.rank):
            if not f or cone_dim(fan, tuple(cone[i] for i in f)) != d - 1:
                continue
            fgens = [gens[i] for i in f]
            if _in_hform(cone_hform(fgens, fan.rank), v):
                continue
            new_cones.append(tuple(sorted(cone[i] for i in f)) + (vi,))
    return make_fan(fan.rank, new_rays, sorted(set(new_cones)))


@dataclass(frozen=True)
class StarFan:
    """Fan of the orbit closure of a ray (an invariant prime divisor).

    fan: the quotient fan in N / Z u_center (rank drops by one).
    center: index of the distinguished ray of the source fan.
    partners: global indices of source rays spanning a two-dimensional cone
      with the center; partner i maps to star ray partner_star[i].
    multiplicity: for each partner, the lattice index of the wall
      cone(center, partner) — the Cartier index of the divisor along that
      codimension-one orbit.
    proj: (rank-1) x rank integer matrix realizing N -> N / Z u_center.
    """

    fan: Fan
    center: int
    partners: tuple
    partner_star: dict
    multiplicity: dict
    proj: tuple

    def star_ray_of(self, partner):
        return self.partner_star[partner]


def star_fan(fan, ray_idx):
    """Quotient fan seen by the invariant divisor at ray_idx."""
    n = fan.rank
    if n < 2:
        raise ValueError("star fan needs ambient rank >= 2")
    u = list(fan.rays[ray_idx])
    s = snf([[x] for x in u])
    assert s.diag[0][0] == 1, "fan rays must be primitive"
    # s.left * u = e_1, so rows 1.. of s.left realize N / Z u
    proj = [list(s.left[i]) for i in range(1, n)]
    partners = []
    for ci, cone in enumerate(fan.max_cones):
        if ray_idx not in cone:
            continue
        for f in cone_faces_global(fan, ci):
            if ray_idx in f and cone_dim(fan, tuple(f)) == 2:
                for j in f:
                    if j != ray_idx:
                        partners.append(j)
    partners = sorted(set(partners))
    star_rays = []
    partner_star = {}
    multiplicity = {}
    for p in partners:
        img = mat_vec(proj, list(fan.rays[p]))
        ell = vec_gcd(img)
        w = primitive_vector(img)
        partner_star[p] = len(star_rays)
        multiplicity[p] = ell
        star_rays.append(w)
    star_cones = set()
    for ci, cone in enumerate(fan.max_cones):
        if ray_idx not in cone:
            continue
        members = []
        for f in cone_faces_global(fan, ci):
            if ray_idx in f and cone_dim(fan, tuple(f)) == 2:
                members.extend(j for j in f if j != ray_idx)
        star_cones.add(tuple(sorted(partner_star[j] for j in set(members))))
    sf = make_fan(n - 1, star_rays, sorted(star_cones))
    return StarFan(fan=sf, center=ray_idx, partners=tuple(partners),
                   partner_star=partner_star, multiplicity=multiplicity,
                   proj=tuple(tuple(r) for r in proj))
