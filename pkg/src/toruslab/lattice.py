"""Finitely generated free abelian group machinery over ZZ^n.

Group elements are plain int tuples.  Subgroups are generator matrices with a
cached Smith normal form; membership, quotients and coset representatives all
go through the SNF so they stay exact and canonical.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Optional, Sequence

Vec = tuple[int, ...]


class DimensionError(ValueError):
    """Rank mismatch between vectors / matrices and the ambient group."""


class InfiniteQuotientError(ValueError):
    """A finite coset enumeration was requested for an infinite quotient."""


# -- vectors ---------------------------------------------------------------


def vec(coords: Iterable[int]) -> Vec:
    return tuple(int(c) for c in coords)


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(k: int, u: Vec) -> Vec:
    return tuple(k * a for a in u)


def zero_vec(n: int) -> Vec:
    return (0,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(1 if j == i else 0 for j in range(n))


def box(n: int, bound: int) -> Iterator[Vec]:
    """All vectors of [-bound, bound]^n in lexicographic order."""
    return itertools.product(range(-bound, bound + 1), repeat=n)


# -- Smith normal form -------------------------------------------------------


def smith_normal_form(mat: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """U, D, V with U*M*V = D, U and V unimodular, D diagonal with d_i | d_{i+1}.

    Plain integer row/column reduction: repeatedly move a minimal nonzero
    entry to the pivot, clear its row and column by division steps, then fix
    the divisibility chain.  Entries are Python ints, so no overflow.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    d = [list(map(int, row)) for row in mat]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q * row_j
        for k in range(cols):
            d[i][k] -= q * d[j][k]
        for k in range(rows):
            u[i][k] -= q * u[j][k]

    def col_op(i, j, q):  # col_i -= q * col_j
        for k in range(rows):
            d[k][i] -= q * d[k][j]
        for k in range(cols):
            v[k][i] -= q * v[k][j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for k in range(rows):
            d[k][i], d[k][j] = d[k][j], d[k][i]
        for k in range(cols):
            v[k][i], v[k][j] = v[k][j], v[k][i]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] and (best is None or abs(d[i][j]) < best):
                    best = abs(d[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        # clear row and column t; restart if a division leaves a remainder
        # (the new remainder is strictly smaller, so this terminates)
        dirty = False
        for i in range(t + 1, rows):
            if d[i][t]:
                q = d[i][t] // d[t][t]
                row_op(i, t, q)
                if d[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if d[t][j]:
                q = d[t][j] // d[t][t]
                col_op(j, t, q)
                if d[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the block, else absorb a bad row
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if d[i][j] % d[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, -1)  # row_t += row_bad, creates a reducible entry
            continue
        if d[t][t] < 0:
            for k in range(cols):
                d[t][k] = -d[t][k]
            for k in range(rows):
                u[t][k] = -u[t][k]
        t += 1
        if t == rows or t == cols:
            break
    return u, d, v


def _mat_vec(m: Sequence[Sequence[int]], x: Vec) -> Vec:
    return tuple(sum(m[i][j] * x[j] for j in range(len(x))) for i in range(len(m)))


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _mat_inverse_unimodular(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix via integer Gauss-Bareiss."""
    n = len(m)
    u, d, v = smith_normal_form(m)
    # m = u^-1 d v^-1 with d = I for unimodular m, so m^-1 = v u
    for i in range(n):
        if d[i][i] != 1:
            raise ValueError("matrix is not unimodular")
    return _mat_mul(v, u)


class Subgroup:
    """A subgroup of ZZ^rank given by generator vectors (not necessarily a basis)."""

    def __init__(self, rank: int, generators: Sequence[Sequence[int]]):
        self.rank = int(rank)
        self.generators: list[Vec] = [vec(g) for g in generators]
        for g in self.generators:
            if len(g) != self.rank:
                raise DimensionError(f"generator {g} does not have rank {self.rank}")
        # SNF of the rank x k matrix whose columns are the generators
        cols = len(self.generators)
        m = [[self.generators[j][i] for j in range(cols)] for i in range(self.rank)]
        if cols == 0:
            m = [[0] for _ in range(self.rank)] if self.rank else [[]]
        self._u, self._d, self._v = smith_normal_form(m)
        self._diag = [self._d[i][i] if i < len(self._d[0]) else 0 for i in range(self.rank)]

    # -- membership and coordinates -------------------------------------

    def contains(self, x: Vec) -> bool:
        if len(x) != self.rank:
            raise DimensionError(f"vector {x} vs rank {self.rank}")
        w = _mat_vec(self._u, x)
        for i in range(self.rank):
            di = self._diag[i]
            if di == 0:
                if w[i]:
                    return False
            elif w[i] % di:
                return False
        return True

    def __contains__(self, x: Vec) -> bool:
        return self.contains(x)

    def basis(self) -> list[Vec]:
        """A ZZ-basis of the subgroup (columns of U^-1 * D restricted to nonzero d_i)."""
        uinv = _mat_inverse_unimodular(self._u)
        out = []
        for i in range(self.rank):
            di = self._diag[i]
            if di:
                out.append(tuple(uinv[r][i] * di for r in range(self.rank)))
        return out

    def subgroup_rank(self) -> int:
        return sum(1 for di in self._diag if di)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def same_subgroup_as(self, other: "Subgroup") -> bool:
        return self.is_subgroup_of(other) and other.is_subgroup_of(self)

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.generators]

    def __repr__(self):
        return f"Subgroup(rank={self.rank}, generators={self.generators})"

    @staticmethod
    def full(n: int) -> "Subgroup":
        return Subgroup(n, [unit_vec(n, i) for i in range(n)])

    @staticmethod
    def scaled(n: int, k: int) -> "Subgroup":
        """k * ZZ^n."""
        return Subgroup(n, [vscale(k, unit_vec(n, i)) for i in range(n)])


class QuotientDescription:
    """Invariant factors of ZZ^n / H plus the canonical projection.

    factors lists the nontrivial invariant factors (d_i > 1, in divisibility
    order) followed by one 0 per free (infinite) factor.  project(x) is the
    canonical residue tuple, constant exactly on cosets of H.
    """

    def __init__(self, n: int, subgroup: Subgroup):
        if subgroup.rank != n:
            raise DimensionError(f"subgroup rank {subgroup.rank} vs ambient {n}")
        self.n = n
        self.subgroup = subgroup
        self._u = subgroup._u
        self._diag = subgroup._diag
        self.factors: tuple[int, ...] = tuple(
            [d for d in self._diag if d > 1] + [0 for d in self._diag if d == 0]
        )

    @property
    def is_finite(self) -> bool:
        return 0 not in self.factors

    def order(self) -> int:
        if not self.is_finite:
            raise InfiniteQuotientError("quotient is infinite (invariant factor 0)")
        out = 1
        for d in self.factors:
            out *= d
        return out

    def project(self, x: Vec) -> Vec:
        w = _mat_vec(self._u, x)
        return tuple(w[i] % d if (d := self._diag[i]) else w[i] for i in range(self.n))

    def same_coset(self, x: Vec, y: Vec) -> bool:
        return self.project(x) == self.project(y)


def snf_quotient(n: int, subgroup: Subgroup) -> QuotientDescription:
    """Quotient data for ZZ^n / H: invariant factors and canonical projection."""
    return QuotientDescription(n, subgroup)


def coset_reps(n: int, subgroup: Subgroup) -> list[Vec]:
    """Canonical coset representatives of ZZ^n / H; the first one is 0.

    Requires a finite quotient; the error names the infinite invariant factor.
    """
    q = snf_quotient(n, subgroup)
    if not q.is_finite:
        raise InfiniteQuotientError(
            f"ZZ^{n}/H is infinite: invariant factor 0 at position "
            f"{q._diag.index(0)} of the Smith form"
        )
    uinv = _mat_inverse_unimodular(q._u)
    reps = []
    ranges = [range(d) for d in q._diag]
    for residue in itertools.product(*ranges):
        reps.append(tuple(sum(uinv[r][i] * residue[i] for i in range(n)) for r in range(n)))
    reps.sort(key=lambda v: (v != zero_vec(n), v))
    assert reps[0] == zero_vec(n)
    return reps


def lattice_generated_by(n: int, vectors: Iterable[Vec]) -> Subgroup:
    return Subgroup(n, list(vectors))


def generates_full_lattice(n: int, vectors: Iterable[Vec]) -> bool:
    sub = lattice_generated_by(n, list(vectors))
    return all(d == 1 for d in sub._diag)


def solve_congruences(n: int, rows: list[tuple[Vec, int]]) -> Subgroup:
    """The sublattice {x in ZZ^n : row . x == 0 (mod m) for each (row, m)}.

    m = 0 means an exact equation.  Computed as the projection of the integer
    kernel of [rows | diag(m)] onto the x block.
    """
    slack = [m for _, m in rows if m]
    k = len(rows)
    s = len(slack)
    mat = []
    si = 0
    for row, m in rows:
        r = list(row) + [0] * s
        if m:
            r[n + si] = m
            si += 1
        mat.append(r)
    if not mat:
        return Subgroup.full(n)
    u, d, v = smith_normal_form(mat)
    # kernel of the k x (n+s) matrix = columns of V beyond the rank of D
    rank = sum(1 for i in range(min(k, n + s)) if d[i][i])
    gens = []
    for j in range(rank, n + s):
        gens.append(tuple(v[i][j] for i in range(n)))
    return Subgroup(n, gens)


# -- pointed reflection subspaces -------------------------------------------


class CosetUnionSet:
    """S = union over reps r of (r + base); the first rep is always 0."""

    def __init__(self, base: Subgroup, reps: Sequence[Sequence[int]]):
        self.base = base
        self.rank = base.rank
        reps = [vec(r) for r in reps]
        if not reps or reps[0] != zero_vec(self.rank):
            raise ValueError("first coset representative must be 0")
        q = snf_quotient(self.rank, base)
        seen = {}
        for r in reps:
            key = q.project(r)
            if key in seen:
                raise ValueError(f"representatives {seen[key]} and {r} are congruent mod base")
            seen[key] = r
        self.reps: list[Vec] = reps
        self._quot = q

    def contains(self, x: Vec) -> bool:
        key = self._quot.project(x)
        return any(self._quot.project(r) == key for r in self.reps)

    def rep_of(self, x: Vec) -> Optional[Vec]:
        key = self._quot.project(x)
        for r in self.reps:
            if self._quot.project(r) == key:
                return r
        return None

    def window(self, bound: int) -> list[Vec]:
        return [x for x in box(self.rank, bound) if self.contains(x)]

    def __repr__(self):
        return f"CosetUnionSet(base={self.base!r}, reps={self.reps})"


class PrsReport:
    """Result of a pointed-reflection-subspace check."""

    def __init__(self, generates_G: bool, contains_zero: bool, closed: bool,
                 window_verified: bool, witnesses: dict):
        self.generates_G = generates_G
        self.contains_zero = contains_zero
        self.closed_under_s_minus_2s = closed
        self.window_verified = window_verified
        self.witnesses = witnesses

    @property
    def all_ok(self) -> bool:
        return self.generates_G and self.contains_zero and self.closed_under_s_minus_2s

    def to_json(self) -> dict:
        return {
            "generates_G": self.generates_G,
            "contains_zero": self.contains_zero,
            "closed_under_s_minus_2s": self.closed_under_s_minus_2s,
            "window_verified": self.window_verified,
            "witnesses": {k: list(map(list, v)) if isinstance(v, tuple) else v
                          for k, v in self.witnesses.items()},
        }


def prs_check(s, n: Optional[int] = None) -> PrsReport:
    """Check the pointed-reflection-subspace conditions for S.

    For a CosetUnionSet the check is closed-form: S - 2S is again a union of
    cosets, so it suffices that rep_i - 2*rep_j falls in a represented coset
    for every pair.  For a finite set of vectors the conditions are only
    checked inside the bounding window, and the report says so.
    """
    witnesses: dict = {}
    if isinstance(s, CosetUnionSet):
        n = s.rank
        gens = list(s.base.generators) + list(s.reps)
        generates = generates_full_lattice(n, gens)
        if not generates:
            witnesses["generates_G"] = "lattice generated by base and reps is proper"
        closed = True
        for ri in s.reps:
            for rj in s.reps:
                if not s.contains(vsub(ri, vscale(2, rj))):
                    closed = False
                    witnesses["closed"] = (ri, rj)
        return PrsReport(generates, True, closed, False, witnesses)

    pts = [vec(x) for x in s]
    if not pts:
        raise ValueError("empty set")
    if n is None:
        n = len(pts[0])
    bound = max((abs(c) for p in pts for c in p), default=0)
    ptset = set(pts)
    contains_zero = zero_vec(n) in ptset
    if not contains_zero:
        witnesses["contains_zero"] = "0 not in S"
    generates = generates_full_lattice(n, pts)
    if not generates:
        witnesses["generates_G"] = "window points generate a proper sublattice"
    closed = True
    for p in pts:
        for q in pts:
            r = vsub(p, vscale(2, q))
            if all(abs(c) <= bound for c in r) and r not in ptset:
                closed = False
                witnesses["closed"] = (p, q)
    return PrsReport(generates, contains_zero, closed, True, witnesses)


# -- quadratic maps into F_2 -------------------------------------------------


class QuadraticMapF2:
    """q: ZZ^n -> F_2 in canonical form: values on e_i and on e_i + e_j.

    When the associated beta(s, t) = q(s) + q(t) - q(s+t) is biadditive these
    values determine q everywhere:
        q(s) = sum_i c_i s_i + sum_{i<j} beta_ij s_i s_j   (mod 2).
    Arbitrary evaluators should be validated with quadratic_map_check before
    being converted to canonical form.
    """

    def __init__(self, n: int, on_basis: Sequence[int], on_pairs: dict[tuple[int, int], int]):
        self.n = n
        self.on_basis = [int(c) % 2 for c in on_basis]
        if len(self.on_basis) != n:
            raise DimensionError("on_basis length must equal rank")
        self.on_pairs = {}
        for (i, j), val in on_pairs.items():
            if not (0 <= i < j < n):
                raise ValueError(f"pair index ({i},{j}) out of order")
            self.on_pairs[(i, j)] = int(val) % 2
        self._beta = {}
        for i in range(n):
            for j in range(i + 1, n):
                cij = self.on_pairs.get((i, j), (self.on_basis[i] + self.on_basis[j]) % 2)
                self._beta[(i, j)] = (self.on_basis[i] + self.on_basis[j] + cij) % 2

    def __call__(self, x: Vec) -> int:
        out = 0
        for i in range(self.n):
            if x[i] % 2:
                out ^= self.on_basis[i]
        for (i, j), b in self._beta.items():
            if b and (x[i] * x[j]) % 2:
                out ^= 1
        return out

    def beta(self, x: Vec, y: Vec) -> int:
        """beta_q(x, y) = q(x) + q(y) - q(x + y) mod 2 (bilinear in canonical form)."""
        out = 0
        for (i, j), b in self._beta.items():
            if b:
                out ^= (x[i] * y[j] + x[j] * y[i]) % 2
        return out

    @staticmethod
    def zero(n: int) -> "QuadraticMapF2":
        return QuadraticMapF2(n, [0] * n, {})

    @staticmethod
    def from_evaluator(n: int, f: Callable[[Vec], int]) -> "QuadraticMapF2":
        on_basis = [f(unit_vec(n, i)) % 2 for i in range(n)]
        on_pairs = {
            (i, j): f(vadd(unit_vec(n, i), unit_vec(n, j))) % 2
            for i in range(n)
            for j in range(i + 1, n)
        }
        return QuadraticMapF2(n, on_basis, on_pairs)

    def to_json(self) -> dict:
        return {
            "on_basis": list(self.on_basis),
            "on_sums": [[i, j, v] for (i, j), v in sorted(self.on_pairs.items())],
        }


def quadratic_map_check(q: Callable[[Vec], int], n: int, bound: int) -> Optional[tuple]:
    """Verify biadditivity of beta_q on [-bound, bound]^n.

    Returns None on success, else the first counterexample
    (s, t, d, 'left'|'right').  beta is symmetric by construction, so checking
    additivity in the first slot for all windowed triples suffices.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    cache: dict[Vec, int] = {}

    def qv(x: Vec) -> int:
        r = cache.get(x)
        if r is None:
            r = q(x) % 2
            cache[x] = r
        return r

    def beta(x: Vec, y: Vec) -> int:
        return (qv(x) + qv(y) - qv(vadd(x, y))) % 2

    win = list(box(n, bound))
    for s in win:
        for t in win:
            bst = beta(s, t)
            if bst != beta(t, s):
                return (s, t, t, "symmetry")
            for d in win:
                if beta(vadd(s, d), t) != (bst + beta(d, t)) % 2:
                    return (s, d, t, "left-additivity")
    return None
