"""Associative tori: 2-cocycles, twisted group algebras, graded involutions.

A cocycle lambda: G x G -> F^x determines the twisted group algebra with basis
{x^s} and products x^s x^t = lambda(s,t) x^{s+t}.  Three evaluator kinds live
here:

* quantum    -- derived from a quantum matrix via the ordered monomial basis
                y^s = y_1^{s_1} ... y_n^{s_n}, so lambda(s,t) is the product of
                q_ij^{s_i t_j} over i > j (the reordering factors);
* bicharacter -- lambda(s,t) = prod_{i,j} m_ij^{s_i t_j} for an explicit
                matrix m (always a cocycle, since it is biadditive); used for
                conjugation-symmetric cocycles over quadratic extensions;
* table      -- explicit values on a window, mainly for tests and round trips.

The degree-3 cocycle of the Albert construction subclasses Cocycle in
toruslab.albert.
"""

from __future__ import annotations

import random
from typing import Callable, Optional, Sequence

from .lattice import (
    QuadraticMapF2,
    Subgroup,
    Vec,
    box,
    solve_congruences,
    unit_vec,
    vadd,
    vneg,
    zero_vec,
)
from .scalars import Field, Scalar, UnsupportedScalarError, factor_exponents


class HandleMismatchError(TypeError):
    """Two elements from different algebra handles were combined."""


class NotHomogeneousError(ValueError):
    """An inverse was requested for an element that is not a single graded term."""


class CocycleDomainError(ValueError):
    """A cocycle was evaluated outside its support lattice or table window."""


class IncompatibleInvolutionError(ValueError):
    """The (q, lambda) pair violates the sign-compatibility condition."""

    def __init__(self, message: str, witness: tuple[Vec, Vec]):
        super().__init__(message)
        self.witness = witness


# -- cocycles ---------------------------------------------------------------


class Cocycle:
    """lambda: G x G -> F^x with unital normalization lambda(0,.) = lambda(.,0) = 1."""

    kind = "abstract"

    def __init__(self, rank: int, field: Field, support: Optional[Subgroup] = None):
        self.rank = rank
        self.field = field
        self.support = support  # None means all of ZZ^rank

    def eval(self, s: Vec, t: Vec) -> Scalar:
        raise NotImplementedError

    def __call__(self, s: Vec, t: Vec) -> Scalar:
        if len(s) != self.rank or len(t) != self.rank:
            raise CocycleDomainError(f"rank mismatch: {s}, {t} vs rank {self.rank}")
        return self.eval(s, t)

    def canonical_evaluator(self):
        """Optional fast path for windowed sweeps: (key(s,t), mul(k1,k2)) where
        keys are exact canonical forms (equal keys iff equal values).  None
        when the cocycle has no such decomposition."""
        return None

    def in_support(self, s: Vec) -> bool:
        return self.support is None or self.support.contains(s)

    def support_window(self, bound: int) -> list[Vec]:
        return [v for v in box(self.rank, bound) if self.in_support(v)]

    def commutation_basis_matrix(self) -> list[list[Scalar]]:
        """[lambda_t(e_i, e_j)]; requires the basis vectors in the support."""
        es = [unit_vec(self.rank, i) for i in range(self.rank)]
        return [[commutation_factor(self, ei, ej) for ej in es] for ei in es]

    def central_lattice(self) -> Subgroup:
        """The lattice {s : lambda_t(s, .) == 1}, computed exactly.

        lambda_t is a bihomomorphism, so centrality of s reduces to
        lambda_t(s, e_j) = prod_i lambda_t(e_i, e_j)^{s_i} = 1 for every j.
        Decomposing each lambda_t(e_i, e_j) as (-1)^sign w^a r via
        factor_exponents turns that into sign conditions mod 2, w-exponent
        conditions mod 3 and exact prime-exponent equations, i.e. an integer
        kernel problem.
        """
        m = self.commutation_basis_matrix()
        rows: list[tuple[Vec, int]] = []
        primes: set[int] = set()
        decomp = [[factor_exponents(m[i][j]) for j in range(self.rank)] for i in range(self.rank)]
        for i in range(self.rank):
            for j in range(self.rank):
                primes.update(decomp[i][j][2])
        for j in range(self.rank):
            sign_row = tuple(decomp[i][j][0] for i in range(self.rank))
            if any(sign_row):
                rows.append((sign_row, 2))
            w_row = tuple(decomp[i][j][1] for i in range(self.rank))
            if any(w_row):
                rows.append((w_row, 3))
            for p in sorted(primes):
                p_row = tuple(decomp[i][j][2].get(p, 0) for i in range(self.rank))
                if any(p_row):
                    rows.append((p_row, 0))
        lattice = solve_congruences(self.rank, rows)
        _cross_check_central_lattice(self, lattice)
        return lattice


def _cross_check_central_lattice(c: Cocycle, lattice: Subgroup, bound: int = 2) -> None:
    es = [unit_vec(c.rank, i) for i in range(c.rank)]
    for s in box(c.rank, bound):
        in_lat = lattice.contains(s)
        commutes = all(commutation_factor(c, s, e).is_one() for e in es)
        if in_lat and not commutes:
            raise ValueError(f"central lattice cross-check failed: {s} not central")
        if commutes and not in_lat:
            raise ValueError(f"central lattice cross-check failed: {s} missing")


class QuantumMatrix:
    """n x n scalar matrix with q_ii = 1 and q_ij q_ji = 1.

    Entries are restricted to +-w^a * (positive rational) so that centrality
    stays decidable through exponent lattices.
    """

    def __init__(self, entries: Sequence[Sequence[Scalar]]):
        n = len(entries)
        self.n = n
        self.entries = [list(row) for row in entries]
        if any(len(row) != n for row in self.entries):
            raise ValueError("quantum matrix must be square")
        field = self.entries[0][0].field
        self.field = field
        one = field.one()
        for i in range(n):
            if self.entries[i][i] != one:
                raise ValueError(f"q_{i}{i} must be 1")
            for j in range(n):
                if self.entries[i][j].field != field:
                    raise ValueError("mixed fields in quantum matrix")
                if (self.entries[i][j] * self.entries[j][i]) != one:
                    raise ValueError(f"q_{i}{j} * q_{j}{i} must be 1")
                factor_exponents(self.entries[i][j])  # raises if unsupported

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        return self.entries[ij[0]][ij[1]]


def _exponent_evaluator(entries: list[list[Scalar]], pairs: list[tuple[int, int]]):
    """Canonical-form evaluator for lambda(s,t) = prod over pairs of
    m_ij^{s_i t_j}: values become (sign mod 2, w-exp mod 3, prime exponent
    tuple), multiplied by integer addition.  Unique by unique factorization
    and the order-6 torsion of QQ(w)^x."""
    try:
        dec = {(i, j): factor_exponents(entries[i][j]) for i, j in pairs}
    except UnsupportedScalarError:
        return None
    primes = sorted({p for d in dec.values() for p in d[2]})
    p_index = {p: k for k, p in enumerate(primes)}
    np = len(primes)
    rows = {
        (i, j): (d[0], d[1], tuple(d[2].get(p, 0) for p in primes))
        for (i, j), d in dec.items()
    }
    active = [(i, j, rows[(i, j)]) for i, j in pairs
              if rows[(i, j)] != (0, 0, (0,) * np)]

    def key(s: Vec, t: Vec):
        sg = 0
        we = 0
        pe = [0] * np
        for i, j, (dsg, dwe, dpe) in active:
            e = s[i] * t[j]
            if not e:
                continue
            sg += dsg * e
            we += dwe * e
            for k in range(np):
                if dpe[k]:
                    pe[k] += dpe[k] * e
        return (sg & 1, we % 3, tuple(pe))

    def mul(a, b):
        return ((a[0] + b[0]) & 1, (a[1] + b[1]) % 3,
                tuple(x + y for x, y in zip(a[2], b[2])))

    return key, mul


class QuantumCocycle(Cocycle):
    """Cocycle of the quantum torus in the ordered monomial basis.

    Reordering y^s y^t into normal order moves each y_i^{s_i} past y_j^{t_j}
    for i > j, so lambda(s, t) = prod_{i > j} q_ij^{s_i t_j}.
    """

    kind = "quantum"

    def __init__(self, q: QuantumMatrix):
        super().__init__(q.n, q.field)
        self.q = q
        self._pow_cache: dict[tuple[int, int, int], Scalar] = {}

    def canonical_evaluator(self):
        pairs = [(i, j) for i in range(1, self.rank) for j in range(i)]
        return _exponent_evaluator(self.q.entries, pairs)

    def _qpow(self, i: int, j: int, e: int) -> Scalar:
        key = (i, j, e)
        out = self._pow_cache.get(key)
        if out is None:
            out = self.q[i, j] ** e
            self._pow_cache[key] = out
        return out

    def eval(self, s: Vec, t: Vec) -> Scalar:
        out = self.field.one()
        for i in range(1, self.rank):
            si = s[i]
            if not si:
                continue
            for j in range(i):
                if t[j]:
                    out = out * self._qpow(i, j, si * t[j])
        return out


class BicharacterCocycle(Cocycle):
    """lambda(s,t) = prod_{i,j} m_ij^{s_i t_j} for an explicit matrix m."""

    kind = "bicharacter"

    def __init__(self, field: Field, m: Sequence[Sequence[Scalar]]):
        n = len(m)
        super().__init__(n, field)
        self.m = [list(row) for row in m]
        if any(len(row) != n for row in self.m):
            raise ValueError("bicharacter matrix must be square")
        for row in self.m:
            for x in row:
                if x.field != field or x.is_zero():
                    raise ValueError("bicharacter entries must be nonzero field elements")
        self._pow_cache: dict[tuple[int, int, int], Scalar] = {}

    def _mpow(self, i: int, j: int, e: int) -> Scalar:
        key = (i, j, e)
        out = self._pow_cache.get(key)
        if out is None:
            out = self.m[i][j] ** e
            self._pow_cache[key] = out
        return out

    def eval(self, s: Vec, t: Vec) -> Scalar:
        out = self.field.one()
        for i in range(self.rank):
            if not s[i]:
                continue
            for j in range(self.rank):
                if t[j]:
                    out = out * self._mpow(i, j, s[i] * t[j])
        return out

    def canonical_evaluator(self):
        pairs = [(i, j) for i in range(self.rank) for j in range(self.rank)]
        return _exponent_evaluator(self.m, pairs)


class TableCocycle(Cocycle):
    """Explicit cocycle values on a finite window of pairs."""

    kind = "table"

    def __init__(self, rank: int, field: Field, table: dict[tuple[Vec, Vec], Scalar],
                 support: Optional[Subgroup] = None):
        super().__init__(rank, field, support)
        for pair, value in table.items():
            if value.is_zero():
                raise ValueError(f"cocycle values must be nonzero (at {pair})")
        self.table = dict(table)

    def eval(self, s: Vec, t: Vec) -> Scalar:
        try:
            return self.table[(s, t)]
        except KeyError:
            raise CocycleDomainError(f"pair ({s}, {t}) outside the table window") from None

    @staticmethod
    def from_cocycle(c: Cocycle, bound: int) -> "TableCocycle":
        """Tabulate c on all pairs from the bound-window (sums stay evaluable)."""
        win = c.support_window(bound)
        table = {(s, t): c(s, t) for s in win for t in win}
        return TableCocycle(c.rank, c.field, table, c.support)


def cocycle_eval(c: Cocycle, s: Vec, t: Vec) -> Scalar:
    return c(s, t)


def commutation_factor(c: Cocycle, s: Vec, t: Vec) -> Scalar:
    """lambda_t(s,t) = lambda(s,t) / lambda(t,s); governs x^s x^t = lambda_t x^t x^s."""
    return c(s, t) / c(t, s)


class SweepReport:
    """Outcome of a windowed identity sweep."""

    def __init__(self, ok: bool, checked: int, mode: str, witness=None, detail: str = ""):
        self.ok = ok
        self.checked = checked
        self.mode = mode  # "exhaustive" | "sampled"
        self.witness = witness
        self.detail = detail

    def __repr__(self):
        status = "ok" if self.ok else f"FAIL witness={self.witness}"
        return f"SweepReport({status}, {self.checked} {self.mode})"

    def to_json(self) -> dict:
        out = {"ok": self.ok, "checked": self.checked, "mode": self.mode}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, Scalar):
        from .scalars import format_scalar

        return format_scalar(x)
    return x


def cocycle_identity_check(
    c: Cocycle,
    bound: int,
    exhaustive_cutoff: int = 3_000_000,
    sample_size: int = 20_000,
    seed: int = 0,
) -> SweepReport:
    """Check lambda(s+t,d) lambda(s,t) == lambda(s,t+d) lambda(t,d) on a window.

    All triples from the support window are checked when their count stays
    under exhaustive_cutoff, otherwise a seeded random sample (the report says
    which).  Values are interned to integer ids so the sweep is dict lookups.
    """
    win = c.support_window(bound)
    n = len(win)
    total = n * n * n

    canon = c.canonical_evaluator()
    ids: dict = {}
    vals: list = []

    if canon is not None:
        eval_value, mul_value = canon
        key_of = lambda v: v
    else:
        eval_value, mul_value = c.__call__, (lambda a, b: a * b)
        key_of = lambda v: v.key()

    def intern(x) -> int:
        k = key_of(x)
        i = ids.get(k)
        if i is None:
            i = len(vals)
            ids[k] = i
            vals.append(x)
        return i

    def safe_intern(s: Vec, t: Vec) -> Optional[int]:
        # table cocycles may miss far pairs: those triples are skipped, counted
        try:
            return intern(eval_value(s, t))
        except CocycleDomainError:
            return None

    if total <= exhaustive_cutoff:
        # everything indexed by integer position: the triple loop is pure list
        # indexing plus one memoized product per side
        sums_list = sorted({vadd(s, t) for s in win for t in win})
        sum_pos = {v: k for k, v in enumerate(sums_list)}
        add_pos = [[sum_pos[vadd(s, t)] for t in win] for s in win]
        lam_small = [[safe_intern(s, t) for t in win] for s in win]
        lam_big = [[safe_intern(u, t) for t in win] for u in sums_list]
        lam_wide = [[safe_intern(s, u) for u in sums_list] for s in win]
        mul_memo2: dict[int, int] = {}
        nv = len(vals) + 1  # id packing base; ids only grow via products below

        checked = 0
        skipped = 0
        rng_order = range(n)
        for si in rng_order:
            add_s = add_pos[si]
            lam_s = lam_small[si]
            wide_s = lam_wide[si]
            for ti in rng_order:
                c1 = lam_s[ti]
                lam_st = lam_big[add_s[ti]]
                lam_t = lam_small[ti]
                add_t = add_pos[ti]
                if c1 is None:
                    skipped += n
                    continue
                for di in rng_order:
                    a1 = lam_st[di]
                    a2 = wide_s[add_t[di]]
                    a3 = lam_t[di]
                    if a1 is None or a2 is None or a3 is None:
                        skipped += 1
                        continue
                    checked += 1
                    key = (a1 * nv + c1) if a1 >= c1 else (c1 * nv + a1)
                    left = mul_memo2.get(key)
                    if left is None:
                        left = intern(mul_value(vals[a1], vals[c1]))
                        mul_memo2[key] = left
                    key = (a2 * nv + a3) if a2 >= a3 else (a3 * nv + a2)
                    right = mul_memo2.get(key)
                    if right is None:
                        right = intern(mul_value(vals[a2], vals[a3]))
                        mul_memo2[key] = right
                    if left != right:
                        return SweepReport(False, checked, "exhaustive",
                                           witness=(win[si], win[ti], win[di]))
        detail = f"{skipped} triples outside the table window" if skipped else ""
        return SweepReport(True, checked, "exhaustive", detail=detail)

    rng = random.Random(seed)
    checked = 0
    for k in range(sample_size):
        s = rng.choice(win)
        t = rng.choice(win)
        d = rng.choice(win)
        try:
            left = c(vadd(s, t), d) * c(s, t)
            right = c(s, vadd(t, d)) * c(t, d)
        except CocycleDomainError:
            continue
        checked += 1
        if left != right:
            return SweepReport(False, checked, "sampled", witness=(s, t, d))
    return SweepReport(True, checked, "sampled",
                       detail=f"window of {total} triples exceeded cutoff; sampled with seed {seed}")


def coboundary_twist(c: Cocycle, d: Callable[[Vec], Scalar], bound: int) -> TableCocycle:
    """Rescale the basis by d: G -> F^x, giving the equivalent cocycle
    d(s) d(t) d(s+t)^-1 lambda(s,t) tabulated on the bound-window."""
    win = c.support_window(bound)
    table = {}
    for s in win:
        for t in win:
            table[(s, t)] = d(s) * d(t) * d(vadd(s, t)).inverse() * c(s, t)
    return TableCocycle(c.rank, c.field, table, c.support)


def central_grading_group(c: Cocycle) -> Subgroup:
    """Support lattice of the center of the twisted group algebra of c."""
    return c.central_lattice()


# -- twisted group algebra ---------------------------------------------------


class TwistedGroupAlgebra:
    """Handle for the associative torus determined by a cocycle."""

    def __init__(self, cocycle: Cocycle):
        self.cocycle = cocycle
        self.rank = cocycle.rank
        self.field = cocycle.field

    def zero(self) -> "AssocElement":
        return AssocElement(self, {})

    def one(self) -> "AssocElement":
        return AssocElement(self, {zero_vec(self.rank): self.field.one()})

    def basis(self, s: Vec, coeff: Optional[Scalar] = None) -> "AssocElement":
        s = tuple(s)
        if not self.cocycle.in_support(s):
            raise CocycleDomainError(f"{s} is outside the support lattice")
        c = coeff if coeff is not None else self.field.one()
        return AssocElement(self, {s: c} if not c.is_zero() else {})

    def element(self, terms: dict[Vec, Scalar]) -> "AssocElement":
        return AssocElement(self, {tuple(s): c for s, c in terms.items() if not c.is_zero()})

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"TwistedGroupAlgebra({self.cocycle.kind}, rank={self.rank})"


class AssocElement:
    """Finite sparse F-linear combination of basis elements x^s."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: TwistedGroupAlgebra, terms: dict[Vec, Scalar]):
        self.algebra = algebra
        self.terms = terms

    def _check(self, other: "AssocElement") -> None:
        if self.algebra is not other.algebra:
            raise HandleMismatchError("elements belong to different algebra handles")

    def __add__(self, other: "AssocElement") -> "AssocElement":
        self._check(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            acc = out.get(s)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(s, None)
            else:
                out[s] = acc
        return AssocElement(self.algebra, out)

    def __sub__(self, other: "AssocElement") -> "AssocElement":
        return self + (-other)

    def __neg__(self) -> "AssocElement":
        return AssocElement(self.algebra, {s: -c for s, c in self.terms.items()})

    def __mul__(self, other: "AssocElement") -> "AssocElement":
        self._check(other)
        lam = self.algebra.cocycle
        out: dict[Vec, Scalar] = {}
        for s, cs in self.terms.items():
            for t, ct in other.terms.items():
                u = vadd(s, t)
                c = cs * ct * lam(s, t)
                acc = out.get(u)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(u, None)
                else:
                    out[u] = acc
        return AssocElement(self.algebra, out)

    def scale(self, c: Scalar) -> "AssocElement":
        if c.is_zero():
            return AssocElement(self.algebra, {})
        return AssocElement(self.algebra, {s: x * c for s, x in self.terms.items()})

    def __pow__(self, n: int) -> "AssocElement":
        if n < 0:
            return invert_homogeneous(self) ** (-n)
        out = self.algebra.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def commutator(self, other: "AssocElement") -> "AssocElement":
        return self * other - other * self

    def circle(self, other: "AssocElement") -> "AssocElement":
        """Jordan product (1/2)(ab + ba)."""
        return (self * other + other * self).scale_rational(1, 2)

    def scale_rational(self, num: int, den: int = 1) -> "AssocElement":
        from fractions import Fraction

        q = Fraction(num, den)
        if not q:
            return AssocElement(self.algebra, {})
        return AssocElement(self.algebra, {s: c.scale(q) for s, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> set[Vec]:
        return set(self.terms)

    def is_homogeneous(self) -> bool:
        return len(self.terms) == 1

    def homogeneous_part(self) -> tuple[Vec, Scalar]:
        if len(self.terms) != 1:
            raise NotHomogeneousError(f"element has support of size {len(self.terms)}")
        return next(iter(self.terms.items()))

    def coefficient(self, s: Vec) -> Scalar:
        return self.terms.get(tuple(s), self.algebra.field.zero())

    def restrict_support(self, keep: Callable[[Vec], bool]) -> "AssocElement":
        return AssocElement(self.algebra, {s: c for s, c in self.terms.items() if keep(s)})

    def __eq__(self, other):
        return (
            isinstance(other, AssocElement)
            and self.algebra is other.algebra
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.terms.items())))

    def __repr__(self):
        from .scalars import format_scalar

        if not self.terms:
            return "0"
        bits = [f"({format_scalar(c)})x^{list(s)}" for s, c in sorted(self.terms.items())]
        return " + ".join(bits)


def assoc_mul(a: AssocElement, b: AssocElement) -> AssocElement:
    return a * b


def invert_homogeneous(a: AssocElement) -> AssocElement:
    """Inverse of a single-term element: (c x^s)^-1 = c^-1 lambda(s,-s)^-1 x^-s."""
    if a.is_zero():
        raise ZeroDivisionError("zero is not invertible")
    if not a.is_homogeneous():
        raise NotHomogeneousError(
            "only homogeneous elements are certified invertible "
            f"(support size {len(a.terms)})"
        )
    s, c = a.homogeneous_part()
    lam = a.algebra.cocycle(s, vneg(s))
    return a.algebra.basis(vneg(s), (c * lam).inverse())


# -- graded involutions ------------------------------------------------------


class GradedInvolution:
    """theta(c x^s) = sigma_E(c) (-1)^{q(s)} x^s, a graded involution when
    sigma_E(lambda(s,t)) (-1)^{beta_q(s,t)} = lambda(t,s).

    Both sides of the compatibility condition are biadditive in (s, t) for the
    evaluator kinds built here, so validating on basis pairs suffices; table
    cocycles are validated on their whole window instead.
    """

    def __init__(self, algebra: TwistedGroupAlgebra, q: QuadraticMapF2,
                 conjugate_coefficients: bool = False):
        if q.n != algebra.rank:
            raise ValueError("quadratic map rank mismatch")
        if conjugate_coefficients and not algebra.field.is_extension:
            raise ValueError("coefficient conjugation needs a field extension")
        self.algebra = algebra
        self.q = q
        self.conjugate_coefficients = conjugate_coefficients
        self._validate()

    def _validate(self) -> None:
        c = self.algebra.cocycle
        if c.kind == "table":
            pairs = [(s, t) for (s, t) in c.table if c.in_support(s) and c.in_support(t)]
        else:
            es = [unit_vec(c.rank, i) for i in range(c.rank)]
            pairs = [(ei, ej) for ei in es for ej in es if c.in_support(ei) and c.in_support(ej)]
        for s, t in pairs:
            lhs = c(s, t)
            if self.conjugate_coefficients:
                lhs = lhs.conjugate()
            if self.q.beta(s, t):
                lhs = -lhs
            if lhs != c(t, s):
                raise IncompatibleInvolutionError(
                    f"involution incompatible with the cocycle at ({s}, {t}): "
                    f"got {lhs!r}, need {c(t, s)!r}",
                    witness=(s, t),
                )

    def apply(self, a: AssocElement) -> AssocElement:
        if a.algebra is not self.algebra:
            raise HandleMismatchError("element from a different algebra handle")
        out = {}
        for s, c in a.terms.items():
            if self.conjugate_coefficients:
                c = c.conjugate()
            if self.q(s):
                c = -c
            out[s] = c
        return AssocElement(self.algebra, out)

    def is_fixed(self, a: AssocElement) -> bool:
        return self.apply(a) == a

    def fixed_basis_element(self, s: Vec) -> Optional[AssocElement]:
        """Basis of the theta-fixed part of the graded component at s, if any.

        Plain theta_q fixes x^s exactly when q(s) = 0.  With coefficient
        conjugation the q(s) = 1 components contribute the trace-zero line
        instead, so every component meets the fixed space.
        """
        if not self.algebra.cocycle.in_support(s):
            return None
        if self.q(s) == 0:
            return self.algebra.basis(s)
        if self.conjugate_coefficients:
            return self.algebra.basis(s, self.algebra.field.trace_zero_gen())
        return None


def involution_apply(theta: GradedInvolution, a: AssocElement) -> AssocElement:
    return theta.apply(a)


def hermitian_part_basis(theta: GradedInvolution, bound: int) -> list[AssocElement]:
    """F-basis of H(A, theta) restricted to the bound-window of the support."""
    out = []
    for s in theta.algebra.cocycle.support_window(bound):
        b = theta.fixed_basis_element(s)
        if b is not None:
            out.append(b)
    return out


def involution_antiautomorphism_check(theta: GradedInvolution, bound: int,
                                      random_sums: int = 25, seed: int = 0) -> SweepReport:
    """Period 2 and theta(ab) = theta(b) theta(a) on windowed basis pairs plus
    seeded random small sums."""
    alg = theta.algebra
    win = alg.cocycle.support_window(bound)
    checked = 0
    for s in win:
        xs = alg.basis(s)
        if theta.apply(theta.apply(xs)) != xs:
            return SweepReport(False, checked, "exhaustive", witness=("period", s))
        for t in win:
            xt = alg.basis(t)
            checked += 1
            if theta.apply(xs * xt) != theta.apply(xt) * theta.apply(xs):
                return SweepReport(False, checked, "exhaustive", witness=(s, t))
    rng = random.Random(seed)
    for _ in range(random_sums):
        a = _random_element(alg, win, rng)
        b = _random_element(alg, win, rng)
        checked += 1
        if theta.apply(a * b) != theta.apply(b) * theta.apply(a):
            return SweepReport(False, checked, "exhaustive", witness=("sum-pair",))
        if theta.apply(theta.apply(a)) != a:
            return SweepReport(False, checked, "exhaustive", witness=("sum-period",))
    return SweepReport(True, checked, "exhaustive")


def _random_element(alg: TwistedGroupAlgebra, win: Sequence[Vec], rng: random.Random,
                    max_terms: int = 3) -> AssocElement:
    out = alg.zero()
    for _ in range(rng.randrange(1, max_terms + 1)):
        s = rng.choice(win)
        c = alg.field.scalar(rng.randrange(-3, 4))
        if alg.field.kind == Field.CYCLOTOMIC3 and rng.randrange(2):
            c = c + alg.field.omega().scale(rng.randrange(-2, 3))
        if not c.is_zero():
            out = out + alg.basis(s, c)
    return out


def commutation_bihomomorphism_check(c: Cocycle, bound: int) -> SweepReport:
    """lambda_t(s+s', t) = lambda_t(s,t) lambda_t(s',t) on the window."""
    win = c.support_window(bound)
    canon = c.canonical_evaluator()
    sums = sorted({vadd(s, s2) for s in win for s2 in win})
    if canon is not None:
        key, mul = canon

        def inv(k):
            return (k[0], (-k[1]) % 3, tuple(-x for x in k[2]))

        def lt(s, t):
            return mul(key(s, t), inv(key(t, s)))

        lt_win = {(s, t): lt(s, t) for s in win for t in win}
        lt_sum = {(u, t): lt(u, t) for u in sums for t in win}
        checked = 0
        for s in win:
            for s2 in win:
                u = vadd(s, s2)
                for t in win:
                    checked += 1
                    if lt_sum[(u, t)] != mul(lt_win[(s, t)], lt_win[(s2, t)]):
                        return SweepReport(False, checked, "exhaustive", witness=(s, s2, t))
        return SweepReport(True, checked, "exhaustive")

    cf_win = {(s, t): commutation_factor(c, s, t) for s in win for t in win}
    cf_sum = {(u, t): commutation_factor(c, u, t) for u in sums for t in win}
    checked = 0
    for s in win:
        for s2 in win:
            u = vadd(s, s2)
            for t in win:
                checked += 1
                if cf_sum[(u, t)] != cf_win[(s, t)] * cf_win[(s2, t)]:
                    return SweepReport(False, checked, "exhaustive", witness=(s, s2, t))
    return SweepReport(True, checked, "exhaustive")


# -- structure constants ------------------------------------------------------


def structure_constant_rows(c: Cocycle, bound: int) -> list[tuple[Vec, Vec, Vec, Scalar]]:
    """Rows (s, t, s+t, lambda(s,t)) in lexicographic (s, t) order."""
    win = sorted(c.support_window(bound))
    return [(s, t, vadd(s, t), c(s, t)) for s in win for t in win]
