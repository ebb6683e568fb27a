"""Clifford triples and the associated spin-factor torus J = Z + V.

Z is the group algebra of Gamma (basis z^g), V the free Z-module on symbols
t_e for the nonzero coset representatives e of S over Gamma, and products are

    (z1 + v1)(z2 + v2) = (z1 z2 + f(v1, v2)) + (z1 v2 + z2 v1)

with f(t_e, t_h) = a_e z^{2e} when e = h and 0 otherwise.  S is stored
intrinsically as reps over Gamma, so S + Gamma = S holds by construction.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .lattice import (
    CosetUnionSet,
    Subgroup,
    Vec,
    box,
    generates_full_lattice,
    prs_check,
    unit_vec,
    vadd,
    vneg,
    vscale,
    vsub,
    zero_vec,
)
from .scalars import Field, Scalar


class TripleError(ValueError):
    """A Clifford triple clause failed at construction time."""


class CliffordTriple:
    """(S, Gamma, {a_e}) with 2G in Gamma, Gamma proper in S, <S> = G."""

    def __init__(self, field: Field, gamma: Subgroup, reps: Sequence[Vec],
                 a: dict[Vec, Scalar], check: bool = True):
        self.field = field
        self.rank = gamma.rank
        self.gamma = gamma
        self.s = CosetUnionSet(gamma, reps)
        self.a = {tuple(k): v for k, v in a.items()}
        if check:
            report = validate_triple(self)
            if not report.ok:
                raise TripleError(f"invalid Clifford triple: {report.failures}")

    def nonzero_reps(self) -> list[Vec]:
        return self.s.reps[1:]

    def a_of(self, rep: Vec) -> Scalar:
        try:
            return self.a[rep]
        except KeyError:
            raise TripleError(f"no a value supplied for representative {rep}") from None

    def __repr__(self):
        return f"CliffordTriple(rank={self.rank}, reps={self.s.reps})"


class TripleReport:
    def __init__(self):
        self.clauses: dict[str, bool] = {}
        self.witnesses: dict[str, object] = {}

    def record(self, name: str, ok: bool, witness=None):
        self.clauses[name] = ok
        if not ok and witness is not None:
            self.witnesses[name] = witness

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.clauses.items() if not v]

    def to_json(self) -> dict:
        return {"clauses": self.clauses,
                "witnesses": {k: str(v) for k, v in self.witnesses.items()}}


def validate_triple(t: CliffordTriple) -> TripleReport:
    """Check every clause of the triple definition, with witnesses."""
    report = TripleReport()
    n = t.rank
    bad = next((unit_vec(n, i) for i in range(n)
                if not t.gamma.contains(vscale(2, unit_vec(n, i)))), None)
    report.record("2G_in_gamma", bad is None, witness=bad and vscale(2, bad))
    report.record("gamma_proper_in_S", len(t.s.reps) > 1,
                  witness="S has no coset beyond Gamma")
    gens = list(t.gamma.generators) + list(t.s.reps)
    report.record("S_generates_G", generates_full_lattice(n, gens),
                  witness="Gamma generators plus reps span a proper sublattice")
    prs = prs_check(t.s)
    report.record("S_is_prs", prs.all_ok, witness=prs.witnesses or None)
    missing = [r for r in t.nonzero_reps() if tuple(r) not in t.a]
    report.record("a_supplied_for_all_reps", not missing, witness=missing or None)
    zero_a = [r for r in t.nonzero_reps() if tuple(r) in t.a and t.a[tuple(r)].is_zero()]
    report.record("a_values_nonzero", not zero_a, witness=zero_a or None)
    return report


class CliffordElement:
    """zpart: sparse Gamma -> F;  vpart: sparse (rep, gamma) -> F."""

    __slots__ = ("triple", "zpart", "vpart")

    def __init__(self, triple: CliffordTriple, zpart: dict[Vec, Scalar],
                 vpart: dict[tuple[Vec, Vec], Scalar]):
        self.triple = triple
        self.zpart = zpart
        self.vpart = vpart

    def _check(self, other: "CliffordElement"):
        if self.triple is not other.triple:
            raise TripleError("elements from different Clifford triples")

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._check(other)
        z = dict(self.zpart)
        for k, c in other.zpart.items():
            acc = z.get(k)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                z.pop(k, None)
            else:
                z[k] = acc
        v = dict(self.vpart)
        for k, c in other.vpart.items():
            acc = v.get(k)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                v.pop(k, None)
            else:
                v[k] = acc
        return CliffordElement(self.triple, z, v)

    def __neg__(self):
        return CliffordElement(
            self.triple,
            {k: -c for k, c in self.zpart.items()},
            {k: -c for k, c in self.vpart.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "CliffordElement":
        if c.is_zero():
            return CliffordElement(self.triple, {}, {})
        return CliffordElement(
            self.triple,
            {k: x * c for k, x in self.zpart.items()},
            {k: x * c for k, x in self.vpart.items()},
        )

    def scale_rational(self, num: int, den: int = 1) -> "CliffordElement":
        from fractions import Fraction

        return self.scale(self.triple.field.scalar(Fraction(num, den)))

    def __mul__(self, other: "CliffordElement") -> "CliffordElement":
        self._check(other)
        t = self.triple
        z: dict[Vec, Scalar] = {}
        v: dict[tuple[Vec, Vec], Scalar] = {}

        def zacc(key, c):
            acc = z.get(key)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                z.pop(key, None)
            else:
                z[key] = acc

        def vacc(key, c):
            acc = v.get(key)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                v.pop(key, None)
            else:
                v[key] = acc

        for g1, c1 in self.zpart.items():
            for g2, c2 in other.zpart.items():
                zacc(vadd(g1, g2), c1 * c2)
            for (e2, g2), c2 in other.vpart.items():
                vacc((e2, vadd(g1, g2)), c1 * c2)
        for (e1, g1), c1 in self.vpart.items():
            for g2, c2 in other.zpart.items():
                vacc((e1, vadd(g1, g2)), c1 * c2)
            for (e2, g2), c2 in other.vpart.items():
                if e1 == e2:
                    zacc(vadd(vadd(g1, g2), vscale(2, e1)), c1 * c2 * t.a_of(e1))
        return CliffordElement(self.triple, z, v)

    def is_zero(self) -> bool:
        return not self.zpart and not self.vpart

    def __eq__(self, other):
        return (
            isinstance(other, CliffordElement)
            and self.triple is other.triple
            and self.zpart == other.zpart
            and self.vpart == other.vpart
        )

    def __hash__(self):
        return hash((id(self.triple), frozenset(self.zpart.items()), frozenset(self.vpart.items())))

    def support(self) -> set[Vec]:
        out = set(self.zpart)
        out.update(vadd(e, g) for (e, g) in self.vpart)
        return out

    def is_homogeneous(self) -> bool:
        return len(self.zpart) + len(self.vpart) == 1

    def __repr__(self):
        from .scalars import format_scalar

        bits = [f"({format_scalar(c)})z^{list(g)}" for g, c in sorted(self.zpart.items())]
        bits += [f"({format_scalar(c)})z^{list(g)}t_{list(e)}"
                 for (e, g), c in sorted(self.vpart.items())]
        return " + ".join(bits) if bits else "0"


def clifford_one(t: CliffordTriple) -> CliffordElement:
    return CliffordElement(t, {zero_vec(t.rank): t.field.one()}, {})


def clifford_zero(t: CliffordTriple) -> CliffordElement:
    return CliffordElement(t, {}, {})


def z_element(t: CliffordTriple, g: Vec, coeff: Optional[Scalar] = None) -> CliffordElement:
    if not t.gamma.contains(g):
        raise TripleError(f"{g} is not in Gamma")
    return CliffordElement(t, {tuple(g): coeff or t.field.one()}, {})


def v_element(t: CliffordTriple, rep: Vec, g: Vec, coeff: Optional[Scalar] = None) -> CliffordElement:
    rep = tuple(rep)
    if rep not in set(t.nonzero_reps()):
        raise TripleError(f"{rep} is not a nonzero coset representative")
    if not t.gamma.contains(g):
        raise TripleError(f"{g} is not in Gamma")
    return CliffordElement(t, {}, {(rep, tuple(g)): coeff or t.field.one()})


def bilinear_f(t: CliffordTriple, v1: CliffordElement, v2: CliffordElement) -> CliffordElement:
    """The Z-bilinear form on V, extended from f(t_e, t_h) = delta a_e z^{2e}."""
    if v1.zpart or v2.zpart:
        raise TripleError("bilinear form is only defined on the V part")
    return v1 * v2


def clifford_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return a * b


def grading_component(t: CliffordTriple, s: Vec) -> Optional[CliffordElement]:
    """Basis element of J_s: z^{s-e_s} t_{e_s} for s in S (t_0 = 1), else None."""
    rep = t.s.rep_of(tuple(s))
    if rep is None:
        return None
    g = vsub(tuple(s), rep)
    if rep == zero_vec(t.rank):
        return z_element(t, g)
    return v_element(t, rep, g)


def rep_index(t: CliffordTriple, s: Vec) -> Optional[Vec]:
    """The unique representative e_s with s - e_s in Gamma, for s in S."""
    return t.s.rep_of(tuple(s))


def clifford_invert(u: CliffordElement) -> CliffordElement:
    """(c z^g)^-1 = c^-1 z^-g;  (c z^g t_e)^-1 = (c a_e)^-1 z^{-g-2e} t_e.

    Only homogeneous elements are certified; the formula comes from
    (z^g t_e)^2 = a_e z^{2g+2e} 1.
    """
    t = u.triple
    if u.is_zero():
        raise ZeroDivisionError("zero is not invertible")
    if not u.is_homogeneous():
        from .assoc import NotHomogeneousError

        raise NotHomogeneousError("inverse formula applies to homogeneous elements only")
    if u.zpart:
        g, c = next(iter(u.zpart.items()))
        return z_element(t, vneg(g), c.inverse())
    (e, g), c = next(iter(u.vpart.items()))
    coeff = (c * t.a_of(e)).inverse()
    return v_element(t, e, vneg(vadd(g, vscale(2, e))), coeff)


def support_window(t: CliffordTriple, bound: int) -> list[Vec]:
    return [s for s in box(t.rank, bound) if t.s.contains(s)]


def grading_case_check(t: CliffordTriple, bound: int):
    """The product case law on windowed pairs of homogeneous components:
    J_s J_t = J_{s+t} when e_s = e_t or either residue is 0, and {0} when the
    residues are distinct and both nonzero.  Returns (ok, witness, zero_pairs).
    """
    win = support_window(t, bound)
    zero_pairs = []
    for s in win:
        bs = grading_component(t, s)
        es = rep_index(t, s)
        for u in win:
            bu = grading_component(t, u)
            eu = rep_index(t, u)
            prod = bs * bu
            zero_expected = es != eu and es != zero_vec(t.rank) and eu != zero_vec(t.rank)
            if zero_expected:
                if not prod.is_zero():
                    return False, (s, u, "expected zero product"), zero_pairs
                zero_pairs.append((s, u))
            else:
                target = grading_component(t, vadd(s, u))
                if prod.is_zero() or target is None:
                    return False, (s, u, "expected nonzero product"), zero_pairs
                if prod.support() != target.support():
                    return False, (s, u, "product off the graded component"), zero_pairs
    return True, None, zero_pairs


def center_support_window(t: CliffordTriple, bound: int) -> list[Vec]:
    """Window support of the center: s such that the basis element of J_s has
    vanishing associator [b, x, y] against all windowed homogeneous pairs.
    Commutativity is automatic, so centrality is exactly associating."""
    win = support_window(t, bound)
    basis = {s: grading_component(t, s) for s in win}
    out = []
    for s in win:
        b = basis[s]
        central = True
        for x in win:
            if not central:
                break
            for y in win:
                bx, by = basis[x], basis[y]
                if (b * bx) * by != b * (bx * by):
                    central = False
                    break
        if central:
            out.append(s)
    return out
