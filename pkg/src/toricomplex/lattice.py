"""Exact lattice linear algebra: Smith normal form, finitely generated
abelian group presentations, rational cones and their Hilbert bases, and a
small exact-rational simplex solver.

Everything here is exact: matrices are lists of lists of Python ints,
rational data uses fractions.Fraction.  No floats anywhere.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd


class ToricomplexError(Exception):
    """Base class for all errors raised by this package."""


class NotPointedError(ToricomplexError):
    """Raised when a cone expected to be pointed has a lineality space."""


# ---------------------------------------------------------------------------
# basic integer matrix helpers
# ---------------------------------------------------------------------------

def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    nr, nm, nc = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * nc for _ in range(nr)]
    for i in range(nr):
        ai = a[i]
        for k in range(nm):
            aik = ai[k]
            if aik:
                bk = b[k]
                oi = out[i]
                for j in range(nc):
                    oi[j] += aik * bk[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def transpose(a):
    return [list(col) for col in zip(*a)]


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v):
    """Divide an integer vector by the gcd of its entries (direction kept).

    Raises ValueError on the zero vector.
    """
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def is_primitive(v):
    return vec_gcd(v) == 1


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SmithForm:
    """Result of a Smith normal form computation.

    left * original * right == diag, where left and right are unimodular and
    diag has a non-negative diagonal d_1 | d_2 | ... .  left_inv and
    right_inv are the exact integer inverses of the witnesses.
    """

    diag: list
    left: list
    right: list
    left_inv: list
    right_inv: list

    @property
    def invariants(self):
        n = min(len(self.diag), len(self.diag[0]) if self.diag else 0)
        return [self.diag[i][i] for i in range(n) if self.diag[i][i] != 0]

    @property
    def rank(self):
        return len(self.invariants)


def snf(m):
    """Smith normal form with transformation witnesses.

    Pivot selection: the entry of smallest non-zero absolute value in the
    remaining submatrix, ties broken lexicographically by (row, col).

    Args:
        m: integer matrix as list of rows (may be empty or ragged-free).

    Returns:
        SmithForm with left*m*right == diag.
    """
    a = [list(row) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    left = identity_matrix(nr)
    left_inv = identity_matrix(nr)
    right = identity_matrix(nc)
    right_inv = identity_matrix(nc)

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for r in left_inv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def row_add(i, j, c):
        # row_i += c * row_j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        left[i] = [x + c * y for x, y in zip(left[i], left[j])]
        for r in left_inv:
            r[j] -= c * r[i]

    def col_add(j, i, c):
        # col_j += c * col_i
        for r in a:
            r[j] += c * r[i]
        for r in right:
            r[j] += c * r[i]
        right_inv[i] = [x - c * y for x, y in zip(right_inv[i], right_inv[j])]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]
        for r in left_inv:
            r[i] = -r[i]

    def find_pivot(k):
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    k = 0
    while k < min(nr, nc):
        piv = find_pivot(k)
        if piv is None:
            break
        while True:
            _, pi, pj = piv
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            if a[k][k] < 0:
                row_neg(k)
            p = a[k][k]
            dirty = False
            for i in range(k + 1, nr):
                if a[i][k]:
                    row_add(i, k, -(a[i][k] // p))
                    if a[i][k]:
                        dirty = True
            for j in range(k + 1, nc):
                if a[k][j]:
                    col_add(j, k, -(a[k][j] // p))
                    if a[k][j]:
                        dirty = True
            if dirty:
                piv = find_pivot(k)
                continue
            # pivot must divide every entry of the remaining submatrix
            stain = None
            for i in range(k + 1, nr):
                for j in range(k + 1, nc):
                    if a[i][j] % p:
                        stain = i
                        break
                if stain is not None:
                    break
            if stain is None:
                break
            row_add(k, stain, 1)
            piv = find_pivot(k)
        k += 1
    for i in range(min(nr, nc)):
        if a[i][i] < 0:
            row_neg(i)
    return SmithForm(diag=a, left=left, right=right,
                     left_inv=left_inv, right_inv=right_inv)


def kernel_basis(m):
    """Basis of the integer kernel {x : m x = 0} (saturated sublattice).

    Returns a list of integer vectors (possibly empty).
    """
    if not m or not m[0]:
        nc = len(m[0]) if m else 0
        return [tuple(row) for row in identity_matrix(nc)]
    s = snf(m)
    r = s.rank
    nc = len(m[0])
    cols = transpose(s.right)
    return [tuple(cols[j]) for j in range(r, nc)]


def solve_rational(a, b):
    """One exact rational solution x of a x = b, or None if inconsistent.

    Free variables are set to zero.  a is a list of rows, b a vector.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(nr):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if aug[i][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for i, c in enumerate(pivots):
        x[c] = aug[i][nc]
    return x


def rank_q(vectors):
    """Rank over Q of a list of rational vectors."""
    rows = [[Fraction(x) for x in v] for v in vectors if any(v)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rows and col < ncols:
        pr = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            col += 1
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def solve_integral(a, b):
    """One integer solution x of a x = b, or None."""
    res = cartier_scale(a, b)
    if res is None:
        return None
    k, x = res
    return x if k == 1 else None


def cartier_scale(a, b):
    """Smallest k >= 1 such that a x = k b has an integer solution.

    Returns (k, x) with a x = k b, or None when the system is not even
    rationally solvable.
    """
    s = snf(a)
    c = mat_vec(s.left, list(b))
    r = s.rank
    for i in range(r, len(c)):
        if c[i] != 0:
            return None
    k = 1
    for i in range(r):
        d = s.diag[i][i]
        num = c[i]
        if num % d:
            g = gcd(abs(num), d)
            step = d // g
            k = k * step // gcd(k, step)
    y = [0] * (len(a[0]) if a else 0)
    for i in range(r):
        y[i] = k * c[i] // s.diag[i][i]
    x = mat_vec(s.right, y)
    return k, x


# ---------------------------------------------------------------------------
# finitely generated abelian groups (cokernels)
# ---------------------------------------------------------------------------

@dataclass
class AbelianGroupPresentation:
    """Cokernel Z^n / im(m) in Smith-normal coordinates.

    free_rank: number of Z summands.
    torsion: invariant factors d_1 | d_2 | ... (all >= 2).
    free_map / torsion_map: integer functionals on Z^n computing the free and
    torsion coordinates of a class (torsion coordinates live mod torsion[i]).
    """

    free_rank: int
    torsion: list
    free_map: list
    torsion_map: list

    def class_of(self, v):
        free = tuple(vec_dot(row, v) for row in self.free_map)
        tors = tuple(vec_dot(row, v) % d
                     for row, d in zip(self.torsion_map, self.torsion))
        return free, tors

    def q_class_of(self, v):
        """Free coordinates of a rational vector (torsion dies over Q)."""
        return tuple(sum(Fraction(x) * y for x, y in zip(row, v))
                     for row in self.free_map)

    def is_zero_class(self, v):
        free, tors = self.class_of(v)
        return not any(free) and not any(tors)

    def order_of_class(self, v):
        """Order of the class of v (0 means infinite order)."""
        free, tors = self.class_of(v)
        if any(free):
            return 0
        k = 1
        for t, d in zip(tors, self.torsion):
            if t:
                step = d // gcd(t, d)
                k = k * step // gcd(k, step)
        return k


def cokernel(m):
    """Presentation of Z^rows / (column span of m)."""
    nr = len(m)
    s = snf(m)
    r = s.rank
    torsion_idx = [i for i in range(r) if s.diag[i][i] >= 2]
    return AbelianGroupPresentation(
        free_rank=nr - r,
        torsion=[s.diag[i][i] for i in torsion_idx],
        free_map=[list(s.left[i]) for i in range(r, nr)],
        torsion_map=[list(s.left[i]) for i in torsion_idx],
    )


def span_saturation(vectors):
    """Saturated lattice basis of span(vectors) and a left inverse.

    Returns (basis, proj) where basis is a list of integer vectors spanning
    the saturation of the span, and proj is a matrix with proj * basis^T = I,
    so proj maps any lattice vector of the span to its basis coordinates.
    """
    if not vectors:
        return [], []
    cols = transpose(list(map(list, vectors)))
    s = snf(cols)
    r = s.rank
    basis = [tuple(row[i] for row in s.left_inv) for i in range(r)]
    proj = [list(s.left[i]) for i in range(r)]
    return basis, proj


def lift_through_basis(basis, coords):
    """Map small-space coordinates back through a span_saturation basis."""
    dim = len(basis[0]) if basis else 0
    return tuple(sum(b[j] * c for b, c in zip(basis, coords))
                 for j in range(dim))


# ---------------------------------------------------------------------------
# exact simplex (two-phase, Bland's rule)
# ---------------------------------------------------------------------------

def simplex_solve(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None):
    """Maximize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0.

    All data may be int or Fraction; arithmetic is exact.

    Returns:
        (status, x, value) with status one of "optimal", "infeasible",
        "unbounded"; x and value are None unless optimal.
    """
    a_ub = a_ub or []
    b_ub = b_ub or []
    a_eq = a_eq or []
    b_eq = b_eq or []
    n = len(c)
    rows = []
    for row, rhs in zip(a_ub, b_ub):
        rows.append(([Fraction(x) for x in row], Fraction(rhs), "<="))
    for row, rhs in zip(a_eq, b_eq):
        rows.append(([Fraction(x) for x in row], Fraction(rhs), "=="))
    # build standard form with slack and artificial variables
    m = len(rows)
    slack_of = {}
    ncols = n
    for i, (_, rhs, rel) in enumerate(rows):
        if rel == "<=" and rhs >= 0:
            slack_of[i] = ncols
            ncols += 1
    surplus_of = {}
    for i, (_, rhs, rel) in enumerate(rows):
        if rel == "<=" and rhs < 0:
            surplus_of[i] = ncols
            ncols += 1
    art_of = {}
    for i, (_, rhs, rel) in enumerate(rows):
        if rel == "==" or (rel == "<=" and rhs < 0):
            art_of[i] = ncols
            ncols += 1
    tab = []
    basis = []
    for i, (row, rhs, rel) in enumerate(rows):
        line = [Fraction(0)] * (ncols + 1)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        for j, x in enumerate(row):
            line[j] = x
        if i in slack_of:
            line[slack_of[i]] = Fraction(1)
            basis.append(slack_of[i])
        elif i in surplus_of:
            # flipped <= with negative rhs becomes >=, needs surplus
            line[surplus_of[i]] = Fraction(-1)
            line[art_of[i]] = Fraction(1)
            basis.append(art_of[i])
        else:
            line[art_of[i]] = Fraction(1)
            basis.append(art_of[i])
        line[ncols] = rhs
        tab.append(line)

    def pivot(tab, basis, obj, row, col):
        pv = tab[row][col]
        tab[row] = [x / pv for x in tab[row]]
        for i in range(len(tab)):
            if i != row and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[row])]
        if obj[col] != 0:
            f = obj[col]
            for j in range(len(obj)):
                obj[j] -= f * tab[row][j]
        basis[row] = col

    def run(tab, basis, obj, allowed, banned=frozenset()):
        # Bland's rule: smallest improving column, smallest-index tie on rows
        while True:
            col = next((j for j in range(allowed)
                        if j not in banned and obj[j] > 0), None)
            if col is None:
                return "optimal"
            best = None
            for i in range(len(tab)):
                if tab[i][col] > 0:
                    ratio = tab[i][-1] / tab[i][col]
                    if best is None or ratio < best[0] or \
                            (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(tab, basis, obj, best[1], col)

    arts = frozenset(art_of.values())
    if art_of:
        # phase 1: maximize -sum(artificials)
        obj = [Fraction(0)] * (ncols + 1)
        for i in art_of.values():
            obj[i] = Fraction(-1)
        # express objective in terms of non-basic variables
        for i, b in enumerate(basis):
            if obj[b] != 0:
                f = obj[b]
                for j in range(ncols + 1):
                    obj[j] -= f * tab[i][j]
        run(tab, basis, obj, ncols)
        if -obj[-1] != 0:
            return "infeasible", None, None
        # drive leftover artificial variables out of the basis
        for i in range(len(basis)):
            if basis[i] in arts:
                col = next((j for j in range(ncols)
                            if j not in arts and tab[i][j] != 0), None)
                if col is not None:
                    pivot(tab, basis, [Fraction(0)] * (ncols + 1), i, col)
        keep = [i for i in range(len(basis)) if basis[i] not in arts]
        tab = [tab[i] for i in keep]
        basis = [basis[i] for i in keep]

    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        obj[j] = Fraction(c[j])
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            for j in range(ncols + 1):
                obj[j] -= f * tab[i][j]
    status = run(tab, basis, obj, ncols, banned=arts)
    if status != "optimal":
        return status, None, None
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    value = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
    return "optimal", x, value


def lp_feasible(a_eq, b_eq, n):
    """Is {x >= 0 : a_eq x = b_eq} non-empty?  (n = number of variables)."""
    status, _, _ = simplex_solve([0] * n, a_eq=a_eq, b_eq=b_eq)
    return status == "optimal"


# ---------------------------------------------------------------------------
# rational cones
# ---------------------------------------------------------------------------

def cone_member(gens, x):
    """Is x a non-negative rational combination of gens?"""
    gens = list(gens)
    if not gens:
        return not any(x)
    a_eq = [[g[i] for g in gens] for i in range(len(x))]
    return lp_feasible(a_eq, list(x), len(gens))


def cone_is_pointed(gens):
    """A cone is pointed iff 0 is not a non-trivial positive combination."""
    gens = list(gens)
    if not gens:
        return True
    a_eq = [[g[i] for g in gens] for i in range(len(gens[0]))]
    a_eq.append([1] * len(gens))
    b_eq = [0] * len(gens[0]) + [1]
    return not lp_feasible(a_eq, b_eq, len(gens))


def extremal_rays(gens):
    """Extremal rays of a pointed cone, as sorted primitive vectors."""
    prims = sorted({primitive_vector(g) for g in gens if any(g)})
    out = []
    for i, g in enumerate(prims):
        others = prims[:i] + prims[i + 1:]
        if not cone_member(others, g):
            out.append(g)
    return out


def _fulldim_facet_normals(gens, dim):
    """Facet normals of a full-dimensional cone (each normal >= 0 on gens)."""
    if dim == 0:
        return []
    seen = set()
    out = []
    if dim == 1:
        # facets of a full-dim cone in R^1: the origin, normal +-1
        pos = any(g[0] > 0 for g in gens)
        neg = any(g[0] < 0 for g in gens)
        if pos and not neg:
            return [(1,)]
        if neg and not pos:
            return [(-1,)]
        return []
    for subset in combinations(range(len(gens)), dim - 1):
        mat = [list(gens[i]) for i in subset]
        ker = kernel_basis(mat)
        if len(ker) != 1:
            continue
        phi = ker[0]
        vals = [vec_dot(phi, g) for g in gens]
        if all(v >= 0 for v in vals):
            cand = primitive_vector(phi)
        elif all(v <= 0 for v in vals):
            cand = primitive_vector([-x for x in phi])
        else:
            continue
        if any(vec_dot(cand, g) != 0 for g in gens) and cand not in seen:
            seen.add(cand)
            out.append(cand)
    return sorted(out)


def cone_hform(gens, dim):
    """Half-space description of cone(gens) in R^dim.

    Returns (equalities, inequalities): integer functionals with
    cone = {x : e.x == 0 for e in equalities, f.x >= 0 for f in inequalities}.
    """
    gens = [g for g in gens if any(g)]
    if not gens:
        return [tuple(row) for row in identity_matrix(dim)], []
    basis, proj = span_saturation(gens)
    r = len(basis)
    eqs = [tuple(v) for v in kernel_basis([list(g) for g in gens])] if r < dim else []
    if r == dim:
        return [], _fulldim_facet_normals(gens, dim)
    small = [tuple(mat_vec(proj, list(g))) for g in gens]
    small_normals = _fulldim_facet_normals(small, r)
    lifted = []
    for phi in small_normals:
        lifted.append(tuple(sum(phi[i] * proj[i][j] for i in range(r))
                            for j in range(dim)))
    return eqs, lifted


def cone_vform(equalities, inequalities, dim):
    """Extremal rays of {x : eq.x == 0, ineq.x >= 0}.

    Returns (rays, lineality_basis).  rays is sorted; if lineality_basis is
    non-empty the region is not pointed and rays only describes it modulo
    the lineality space.
    """
    normals = []
    seen = set()
    for e in equalities:
        for v in (tuple(e), tuple(-x for x in e)):
            if any(v) and v not in seen:
                seen.add(v)
                normals.append(v)
    ineqs = []
    for f in inequalities:
        t = tuple(f)
        if any(t) and t not in seen:
            seen.add(t)
            normals.append(t)
            ineqs.append(t)
        elif any(t):
            ineqs.append(t)
    lin = kernel_basis([list(nrm) for nrm in normals]) if normals else \
        [tuple(row) for row in identity_matrix(dim)]
    if lin:
        return [], lin

    def ok(v):
        return all(vec_dot(e, v) == 0 for e in equalities) and \
            all(vec_dot(f, v) >= 0 for f in inequalities)

    rays = set()
    if dim == 1:
        for v in ((1,), (-1,)):
            if ok(v):
                rays.add(v)
        return sorted(rays), []
    for subset in combinations(range(len(normals)), dim - 1):
        mat = [list(normals[i]) for i in subset]
        ker = kernel_basis(mat)
        if len(ker) != 1:
            continue
        v = primitive_vector(ker[0])
        if ok(v):
            rays.add(v)
        nv = tuple(-x for x in v)
        if ok(nv):
            rays.add(nv)
    return sorted(rays), []


def cone_intersection(gens1, gens2, dim):
    """Extremal rays of cone(gens1) & cone(gens2)."""
    e1, f1 = cone_hform(gens1, dim)
    e2, f2 = cone_hform(gens2, dim)
    rays, lin = cone_vform(list(e1) + list(e2), list(f1) + list(f2), dim)
    if lin:
        raise NotPointedError("intersection has a lineality space")
    return rays


def faces_of_cone(gens, dim):
    """All faces of a pointed cone as frozensets of generator indices.

    gens must be the extremal rays of the cone (no redundant generators).
    Includes the cone itself and, for pointed cones, the empty face.
    """
    idx_all = frozenset(range(len(gens)))
    if not gens:
        return [idx_all]
    eqs, ineqs = cone_hform(gens, dim)
    faces = {idx_all}
    frontier = {idx_all}
    facet_sets = [frozenset(i for i in idx_all if vec_dot(phi, gens[i]) == 0)
                  for phi in ineqs]
    while frontier:
        nxt = set()
        for f in frontier:
            for fs in facet_sets:
                g = f & fs
                if g not in faces:
                    faces.add(g)
                    nxt.add(g)
        frontier = nxt
    faces.add(frozenset())
    return sorted(faces, key=lambda f: (len(f), sorted(f)))


def smallest_face_containing(gens, dim, sub):
    """Indices of the smallest face of cone(gens) containing the rays at sub."""
    _, ineqs = cone_hform(gens, dim)
    idx = set(range(len(gens)))
    for phi in ineqs:
        if all(vec_dot(phi, gens[i]) == 0 for i in sub):
            idx &= {i for i in idx if vec_dot(phi, gens[i]) == 0}
    return frozenset(idx)


# ---------------------------------------------------------------------------
# Hilbert bases
# ---------------------------------------------------------------------------

def _pulling_triangulation(rays, dim):
    """Triangulate a full-dimensional pointed cone into simplicial subcones.

    Recursive pulling triangulation from the lexicographically smallest
    extremal ray; introduces no new rays.  Returns lists of rays.
    """
    rays = sorted(rays)
    if len(rays) == dim:
        return [rays]
    apex = rays[0]
    pieces = []
    faces = faces_of_cone(rays, dim)
    facets = [f for f in faces
              if f and len(span_saturation([rays[i] for i in f])[0]) == dim - 1]
    for f in facets:
        sub = [rays[i] for i in sorted(f)]
        if apex in sub:
            continue
        basis, proj = span_saturation(sub)
        small = [tuple(mat_vec(proj, list(g))) for g in sub]
        for tri in _pulling_triangulation(small, dim - 1):
            pieces.append([apex] + [lift_through_basis(basis, t) for t in tri])
    return pieces


def _simplicial_box_points(rays):
    """Non-zero lattice points of the half-open parallelepiped of a
    full-rank simplicial cone, via the quotient group Z^n / V Z^n."""
    n = len(rays)
    vmat = transpose([list(r) for r in rays])  # columns are the rays
    s = snf(vmat)
    ds = [s.diag[i][i] for i in range(n)]
    pts = set()

    def rec(i, acc):
        if i == n:
            y = mat_vec(s.left_inv, acc)
            # reduce into the box: subtract the integer parts of V^-1 y
            t = solve_rational(vmat, y)
            floors = [x.numerator // x.denominator for x in t]
            p = tuple(y[j] - sum(vmat[j][k] * floors[k] for k in range(n))
                      for j in range(n))
            if any(p):
                pts.add(p)
            return
        for a in range(ds[i]):
            rec(i + 1, acc + [a])

    rec(0, [])
    return pts


def hilbert_basis(gens, dim=None):
    """Minimal generating set of cone(gens) & Z^dim (the Hilbert basis).

    Simplicial cones are handled by direct parallelepiped enumeration; a
    non-simplicial cone is first pulled apart into simplicial pieces and the
    union of the piece bases is then reduced to the unique minimal set.

    Args:
        gens: integer generators of a pointed rational cone.
        dim: ambient dimension (inferred from gens when omitted).

    Returns:
        Sorted list of primitive-or-not integer tuples; the unique minimal
        generating set of the monoid.

    Raises:
        NotPointedError: if the cone has a non-trivial lineality space.
    """
    gens = [tuple(g) for g in gens if any(g)]
    if dim is None:
        if not gens:
            raise ValueError("cannot infer dimension from an empty generator list")
        dim = len(gens[0])
    if not gens:
        return []
    if not cone_is_pointed(gens):
        raise NotPointedError("Hilbert basis requires a pointed cone")
    basis, proj = span_saturation(gens)
    r = len(basis)
    if r < dim:
        small = [tuple(mat_vec(proj, list(g))) for g in gens]
        hb = hilbert_basis(small, r)
        return sorted(lift_through_basis(basis, h) for h in hb)
    rays = extremal_rays(gens)
    candidates = set(rays)
    for piece in _pulling_triangulation(rays, dim):
        candidates.update(_simplicial_box_points(piece))
    _, ineqs = cone_hform(rays, dim)
    grading = [sum(phi[j] for phi in ineqs) for j in range(dim)]

    def inside(v):
        return all(vec_dot(phi, v) >= 0 for phi in ineqs)

    ordered = sorted(candidates, key=lambda v: (vec_dot(grading, v), v))
    kept = []
    for c in ordered:
        reducible = False
        for h in kept:
            d = tuple(x - y for x, y in zip(c, h))
            if any(d) and inside(d):
                reducible = True
                break
            if not any(d):
                reducible = True
                break
        if not reducible:
            kept.append(c)
    return sorted(kept)
