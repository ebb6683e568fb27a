"""Jordan layer: graded views over the associative, Clifford and Albert carriers.

A view exposes a uniform protocol -- unit, graded basis enumerator, product,
inverse -- and the checkers (Jordan identity, torus axioms, strong type) work
against that protocol only, so the same sweeps run over every construction.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .assoc import (
    AssocElement,
    Cocycle,
    GradedInvolution,
    NotHomogeneousError,
    SweepReport,
    TwistedGroupAlgebra,
    invert_homogeneous,
)
from .clifford import (
    CliffordTriple,
    clifford_invert,
    clifford_one,
    grading_component,
    support_window as clifford_support_window,
)
from .lattice import QuadraticMapF2, Vec, box, generates_full_lattice, vadd, zero_vec
from .scalars import Scalar


class ViewMismatchError(TypeError):
    """Two Jordan elements from different views were combined."""


class CarrierError(ValueError):
    """An operand does not belong to the view's carrier (e.g. not theta-fixed)."""


class JordanElement:
    """A view handle plus the kind-specific payload."""

    __slots__ = ("view", "payload")

    def __init__(self, view: "JordanView", payload):
        self.view = view
        self.payload = payload

    def _check(self, other: "JordanElement"):
        if self.view is not other.view:
            raise ViewMismatchError("elements from different Jordan views")

    def __mul__(self, other: "JordanElement") -> "JordanElement":
        self._check(other)
        return JordanElement(self.view, self.view.mul(self.payload, other.payload))

    def __add__(self, other: "JordanElement") -> "JordanElement":
        self._check(other)
        return JordanElement(self.view, self.view.add(self.payload, other.payload))

    def __sub__(self, other: "JordanElement") -> "JordanElement":
        self._check(other)
        return JordanElement(self.view, self.view.add(self.payload, self.view.neg(other.payload)))

    def __neg__(self):
        return JordanElement(self.view, self.view.neg(self.payload))

    def scale(self, c: Scalar) -> "JordanElement":
        return JordanElement(self.view, self.view.scale(self.payload, c))

    def scale_rational(self, num: int, den: int = 1) -> "JordanElement":
        return self.scale(self.view.field.scalar(Fraction(num, den)))

    def square(self) -> "JordanElement":
        return self * self

    def is_zero(self) -> bool:
        return self.view.is_zero(self.payload)

    def __eq__(self, other):
        return (
            isinstance(other, JordanElement)
            and self.view is other.view
            and self.payload == other.payload
        )

    def __hash__(self):
        return hash((id(self.view), self.payload))

    def __repr__(self):
        return f"J[{self.view.kind}]({self.payload!r})"


class JordanView:
    """Protocol shared by the four construction kinds."""

    kind = "abstract"

    def __init__(self, rank: int, field):
        self.rank = rank
        self.field = field

    # payload-level operations
    def mul(self, a, b):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, a, c: Scalar):
        return a.scale(c)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def one(self) -> JordanElement:
        raise NotImplementedError

    def zero(self) -> JordanElement:
        raise NotImplementedError

    def graded_basis(self, s: Vec) -> Optional[JordanElement]:
        raise NotImplementedError

    def invert_payload(self, a):
        raise NotImplementedError

    def support_window(self, bound: int) -> list[Vec]:
        return [s for s in box(self.rank, bound) if self.graded_basis(s) is not None]

    def element(self, payload) -> JordanElement:
        return JordanElement(self, payload)

    def proportion(self, a, basis_payload) -> Optional[Scalar]:
        """c with a == c * basis_payload, or None when a is not proportional."""
        raise NotImplementedError


class PlusView(JordanView):
    """A^+ of a twisted group algebra: a o b = (ab + ba)/2."""

    kind = "plus"

    def __init__(self, algebra: TwistedGroupAlgebra):
        super().__init__(algebra.rank, algebra.field)
        self.algebra = algebra

    def mul(self, a: AssocElement, b: AssocElement) -> AssocElement:
        return a.circle(b)

    def one(self):
        return JordanElement(self, self.algebra.one())

    def zero(self):
        return JordanElement(self, self.algebra.zero())

    def graded_basis(self, s):
        if not self.algebra.cocycle.in_support(s):
            return None
        return JordanElement(self, self.algebra.basis(s))

    def invert_payload(self, a):
        return invert_homogeneous(a)

    def proportion(self, a, basis_payload):
        return _assoc_proportion(a, basis_payload)


class HermitianView(JordanView):
    """H(A, theta) inside A^+; carrier = theta-fixed elements."""

    kind = "hermitian"

    def __init__(self, algebra: TwistedGroupAlgebra, theta: GradedInvolution):
        super().__init__(algebra.rank, algebra.field)
        self.algebra = algebra
        self.theta = theta

    def mul(self, a: AssocElement, b: AssocElement) -> AssocElement:
        if not self.theta.is_fixed(a) or not self.theta.is_fixed(b):
            raise CarrierError("operand is not theta-fixed")
        return a.circle(b)

    def one(self):
        return JordanElement(self, self.algebra.one())

    def zero(self):
        return JordanElement(self, self.algebra.zero())

    def graded_basis(self, s):
        b = self.theta.fixed_basis_element(s)
        return JordanElement(self, b) if b is not None else None

    def invert_payload(self, a):
        inv = invert_homogeneous(a)
        # theta(a^-1) = theta(a)^-1, so fixed inputs give fixed inverses
        assert self.theta.is_fixed(inv)
        return inv

    def proportion(self, a, basis_payload):
        return _assoc_proportion(a, basis_payload)


class CliffordView(JordanView):
    """The spin-factor torus of a Clifford triple."""

    kind = "clifford"

    def __init__(self, triple: CliffordTriple):
        super().__init__(triple.rank, triple.field)
        self.triple = triple

    def mul(self, a, b):
        return a * b

    def one(self):
        return JordanElement(self, clifford_one(self.triple))

    def zero(self):
        from .clifford import clifford_zero

        return JordanElement(self, clifford_zero(self.triple))

    def graded_basis(self, s):
        b = grading_component(self.triple, s)
        return JordanElement(self, b) if b is not None else None

    def support_window(self, bound: int) -> list[Vec]:
        return clifford_support_window(self.triple, bound)

    def invert_payload(self, a):
        return clifford_invert(a)

    def proportion(self, a, basis_payload):
        keys_a = (set(a.zpart), set(a.vpart))
        keys_b = (set(basis_payload.zpart), set(basis_payload.vpart))
        if keys_a != keys_b:
            return None
        if basis_payload.zpart:
            k, cb = next(iter(basis_payload.zpart.items()))
            c = a.zpart[k] / cb
        else:
            k, cb = next(iter(basis_payload.vpart.items()))
            c = a.vpart[k] / cb
        return c if a == basis_payload.scale(c) else None


def _assoc_proportion(a: AssocElement, b: AssocElement) -> Optional[Scalar]:
    if a.support() != b.support():
        return None
    if a.is_zero():
        return a.algebra.field.zero()
    s, cb = next(iter(b.terms.items()))
    c = a.terms[s] / cb
    return c if a == b.scale(c) else None


def jordan_mul(a: JordanElement, b: JordanElement) -> JordanElement:
    return a * b


def jordan_invert(u: JordanElement) -> JordanElement:
    """Inverse of a homogeneous element via the family formula of its view.

    Raises ZeroDivisionError on zero and NotHomogeneousError on sums: the
    formulas certify homogeneous elements only.
    """
    if u.is_zero():
        raise ZeroDivisionError("zero is not invertible")
    return JordanElement(u.view, u.view.invert_payload(u.payload))


# -- checkers ----------------------------------------------------------------


def _random_jordan_element(view: JordanView, win: Sequence[Vec], rng: random.Random,
                           max_terms: int = 3) -> JordanElement:
    out = view.zero()
    for _ in range(rng.randrange(1, max_terms + 1)):
        b = view.graded_basis(rng.choice(win))
        if b is None:
            continue
        out = out + b.scale(view.field.scalar(rng.randrange(-3, 4)))
    return out


def jordan_identity_check(view: JordanView, bound: int, random_sums: int = 30,
                          seed: int = 0, pair_limit: Optional[int] = None) -> SweepReport:
    """x^2 o (y o x) == (x^2 o y) o x, exact.

    All windowed homogeneous pairs are swept (optionally capped at pair_limit
    seeded samples), then random small sums.  Commutativity is checked on the
    same pairs.
    """
    win = view.support_window(bound)
    basis = [view.graded_basis(s) for s in win]
    pairs = [(x, y) for x in basis for y in basis]
    mode = "exhaustive"
    rng = random.Random(seed)
    if pair_limit is not None and len(pairs) > pair_limit:
        pairs = [pairs[rng.randrange(len(pairs))] for _ in range(pair_limit)]
        mode = "sampled"
    checked = 0
    for x, y in pairs:
        checked += 1
        if x * y != y * x:
            return SweepReport(False, checked, mode, witness=("commutativity", x, y))
        x2 = x * x
        if x2 * (y * x) != (x2 * y) * x:
            return SweepReport(False, checked, mode, witness=(x, y))
    for _ in range(random_sums):
        x = _random_jordan_element(view, win, rng)
        y = _random_jordan_element(view, win, rng)
        checked += 1
        if x * y != y * x:
            return SweepReport(False, checked, mode, witness=("commutativity-sums",))
        x2 = x * x
        if x2 * (y * x) != (x2 * y) * x:
            return SweepReport(False, checked, mode, witness=("sum-pair",))
    return SweepReport(True, checked, mode)


class TorusAxiomsReport:
    def __init__(self, t1: bool, t2: bool, t3: bool, support: list[Vec], witness=None):
        self.t1 = t1
        self.t2 = t2
        self.t3 = t3
        self.support = support
        self.witness = witness

    @property
    def all_ok(self):
        return self.t1 and self.t2 and self.t3

    def to_json(self):
        return {
            "T1_support_generates": self.t1,
            "T2_homogeneous_invertible": self.t2,
            "T3_components_dim_le_1": self.t3,
            "support_size": len(self.support),
            "witness": str(self.witness) if self.witness else None,
        }


def torus_axioms_check(view: JordanView, bound: int) -> TorusAxiomsReport:
    """T1 (support generates, window-verified via SNF), T2 (verified inverses),
    T3 (one basis vector per support point, re-counted)."""
    support = view.support_window(bound)
    t1 = generates_full_lattice(view.rank, support) if support else False
    witness = None
    t2 = True
    one = view.one()
    for s in support:
        u = view.graded_basis(s)
        try:
            v = jordan_invert(u)
        except (NotHomogeneousError, ZeroDivisionError) as exc:
            t2, witness = False, (s, str(exc))
            break
        if u * v != one or (u * u) * v != u:
            t2, witness = False, (s, "inverse identities failed")
            break
    basis_count = sum(1 for s in support if view.graded_basis(s) is not None)
    t3 = basis_count == len(support)
    return TorusAxiomsReport(t1, t2, t3, support, witness)


class StrongTypeReport:
    def __init__(self, holds: bool, failing_pairs: list[tuple[Vec, Vec]], checked: int):
        self.holds = holds
        self.failing_pairs = failing_pairs
        self.checked = checked

    def to_json(self):
        return {
            "strong_type": self.holds,
            "checked_pairs": self.checked,
            "failing_pairs": [list(map(list, p)) for p in self.failing_pairs[:32]],
            "failing_count": len(self.failing_pairs),
        }


def strong_type_check(view: JordanView, bound: int) -> StrongTypeReport:
    """J^s J^t = J^{s+t}: every windowed pair of nonzero components must have a
    nonzero product landing on the s+t component; failing pairs are listed."""
    win = view.support_window(bound)
    failing = []
    checked = 0
    for s in win:
        bs = view.graded_basis(s)
        for t in win:
            bt = view.graded_basis(t)
            checked += 1
            prod = bs * bt
            if prod.is_zero():
                failing.append((s, t))
    return StrongTypeReport(not failing, failing, checked)


def gradedness_check(view: JordanView, bound: int) -> SweepReport:
    """supp(basis(s) o basis(t)) lies inside {s+t} for windowed pairs."""
    win = view.support_window(bound)
    checked = 0
    for s in win:
        bs = view.graded_basis(s)
        for t in win:
            checked += 1
            prod = bs * view.graded_basis(t)
            if prod.is_zero():
                continue
            target = view.graded_basis(vadd(s, t))
            if target is None or view.proportion(prod.payload, target.payload) is None:
                return SweepReport(False, checked, "exhaustive", witness=(s, t))
    return SweepReport(True, checked, "exhaustive")


# -- Hermitian polynomial machinery ------------------------------------------
#
# Inside this block the associative convention is used: x o y means xy + yx
# (no 1/2), [x, y] means xy - yx, and the n-tad is x_1...x_n + x_n...x_1.


def tad(xs: Sequence[AssocElement]) -> AssocElement:
    """n-tad x_1...x_n + x_n...x_1; reversal-symmetric by construction."""
    if len(xs) < 2:
        raise ValueError("tads need at least two factors")
    fwd = xs[0]
    for x in xs[1:]:
        fwd = fwd * x
    bwd = xs[-1]
    for x in reversed(xs[:-1]):
        bwd = bwd * x
    return fwd + bwd


def d_operator(x: AssocElement, y: AssocElement, z: AssocElement) -> AssocElement:
    """D_{x,y}(z) = [[x,y], z], the inner derivation by [x, y]."""
    return x.commutator(y).commutator(z)


def p16(x: AssocElement, y: AssocElement, z: AssocElement, w: AssocElement,
        *, operator_as_element: bool) -> AssocElement:
    """[[D^2(z)^2, D(w)], [x,y]] with D = D_{x,y}.

    The trailing bracket partner is an operator in the source formula; since
    D_{x,y} = ad([x,y]), it is evaluated here as the element [x,y].  Callers
    must acknowledge that reading by passing operator_as_element=True.
    """
    if operator_as_element is not True:
        raise ValueError(
            "p16 requires operator_as_element=True: the trailing bracket is "
            "evaluated against the element [x,y] (the generator of D_{x,y})"
        )
    u = x.commutator(y)
    dz = u.commutator(z)
    d2z = u.commutator(dz)
    dw = u.commutator(w)
    return (d2z * d2z).commutator(dw).commutator(u)


def q48(args: Sequence[AssocElement], *, operator_as_element: bool) -> AssocElement:
    """[[p16(a_1), p16(a_2)], p16(a_3)] on three 4-tuples (12 arguments)."""
    if len(args) != 12:
        raise ValueError("q48 takes exactly 12 arguments")
    p1 = p16(*args[0:4], operator_as_element=operator_as_element)
    p2 = p16(*args[4:8], operator_as_element=operator_as_element)
    p3 = p16(*args[8:12], operator_as_element=operator_as_element)
    return p1.commutator(p2).commutator(p3)


def p16_q48_eval(args: Sequence[AssocElement], *, operator_as_element: bool) -> AssocElement:
    """Dispatch on arity: 4 arguments evaluate p16, 12 evaluate q48."""
    if len(args) == 4:
        return p16(*args, operator_as_element=operator_as_element)
    return q48(args, operator_as_element=operator_as_element)


# -- Hermitian-type constructors ----------------------------------------------


def build_involution_type(cocycle: Cocycle, q: QuadraticMapF2) -> HermitianView:
    """H((F^t[G], lambda), theta_q); fails with a witness pair when the sign
    compatibility between q and lambda is violated."""
    algebra = TwistedGroupAlgebra(cocycle)
    theta = GradedInvolution(algebra, q, conjugate_coefficients=False)
    return HermitianView(algebra, theta)


def build_plus_type(cocycle: Cocycle) -> PlusView:
    """(F^t[G], lambda)^+."""
    return PlusView(TwistedGroupAlgebra(cocycle))


def build_extension_type(cocycle: Cocycle) -> HermitianView:
    """H((E^t[G], lambda), theta) for the semilinear theta fixing every y^s.

    Requires an extension field and the conjugation symmetry
    sigma_E(lambda(g1, g2)) = lambda(g2, g1); violations surface as
    IncompatibleInvolutionError with the witness pair.
    """
    if not cocycle.field.is_extension:
        raise ValueError("extension type needs a quadratic extension field")
    algebra = TwistedGroupAlgebra(cocycle)
    theta = GradedInvolution(algebra, QuadraticMapF2.zero(cocycle.rank),
                             conjugate_coefficients=True)
    return HermitianView(algebra, theta)


def build_hermitian_type(kind: str, cocycle: Cocycle,
                         q: Optional[QuadraticMapF2] = None) -> JordanView:
    """The three constructions: 'involution' (needs q), 'plus', 'extension'."""
    if kind == "involution":
        if q is None:
            raise ValueError("involution type needs a quadratic map")
        return build_involution_type(cocycle, q)
    if kind == "plus":
        return build_plus_type(cocycle)
    if kind == "extension":
        return build_extension_type(cocycle)
    raise ValueError(f"unknown Hermitian construction kind {kind!r}")


# -- structure-constant tables -------------------------------------------------


def jordan_structure_rows(view: JordanView, bound: int) -> list[dict]:
    """Records {"sigma", "tau", "coeff"} with basis(s) o basis(t) =
    coeff * basis(s+t), in lexicographic order."""
    from .scalars import format_scalar

    win = sorted(view.support_window(bound))
    rows = []
    for s in win:
        bs = view.graded_basis(s)
        for t in win:
            prod = bs * view.graded_basis(t)
            target = view.graded_basis(vadd(s, t))
            if prod.is_zero():
                coeff = view.field.zero()
            elif target is None:
                raise ValueError(f"product at ({s},{t}) lands outside the support")
            else:
                coeff = view.proportion(prod.payload, target.payload)
                if coeff is None:
                    raise ValueError(f"product at ({s},{t}) is not graded")
            rows.append({"sigma": list(s), "tau": list(t), "coeff": format_scalar(coeff)})
    return rows


class GradedTableView(JordanView):
    """A Jordan view reconstructed from exported structure constants.

    Payloads are sparse maps from support points to scalars; products follow
    the table.  Used for round-trip tests and deliberate negative controls.
    """

    kind = "table"

    def __init__(self, rank: int, field, rows: Sequence[dict], parse):
        super().__init__(rank, field)
        self.table: dict[tuple[Vec, Vec], Scalar] = {}
        pts = set()
        for row in rows:
            s, t = tuple(row["sigma"]), tuple(row["tau"])
            self.table[(s, t)] = parse(row["coeff"])
            pts.add(s)
            pts.add(t)
        self.points = sorted(pts)
        self._point_set = pts

    def mul(self, a: dict, b: dict) -> dict:
        out: dict[Vec, Scalar] = {}
        for s, cs in a.items():
            for t, ct in b.items():
                lam = self.table.get((s, t))
                if lam is None:
                    raise KeyError(f"pair ({s},{t}) outside the structure table")
                if lam.is_zero():
                    continue
                u = vadd(s, t)
                c = cs * ct * lam
                acc = out.get(u)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(u, None)
                else:
                    out[u] = acc
        return out

    def add(self, a, b):
        out = dict(a)
        for s, c in b.items():
            acc = out.get(s)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(s, None)
            else:
                out[s] = acc
        return out

    def neg(self, a):
        return {s: -c for s, c in a.items()}

    def scale(self, a, c: Scalar):
        if c.is_zero():
            return {}
        return {s: x * c for s, x in a.items()}

    def is_zero(self, a):
        return not a

    def one(self):
        return JordanElement(self, {zero_vec(self.rank): self.field.one()})

    def zero(self):
        return JordanElement(self, {})

    def graded_basis(self, s):
        s = tuple(s)
        if s not in self._point_set:
            return None
        return JordanElement(self, {s: self.field.one()})

    def support_window(self, bound: int):
        return [s for s in self.points if all(abs(c) <= bound for c in s)]

    def proportion(self, a, basis_payload):
        if set(a) != set(basis_payload):
            return None
        s, cb = next(iter(basis_payload.items()))
        c = a[s] / cb
        return c if all(a[t] == basis_payload[t] * c for t in a) else None
