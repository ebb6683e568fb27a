"""Degree-3 tori and the Albert torus via the first Tits construction.

The pieces, bottom up:

* eps/eta arithmetic: eps(n) in {0,1,2} is n mod 3, eta(n) = n - eps(n).
* the degree-3 cocycle on a lattice Delta with distinguished residues
  s1, s2 over Gamma:
      lambda(i s1 + j s2 + g, i' s1 + j' s2 + g') =
          q^{j i'} mu(eta(i+i') s1, eta(j+j') s2) mu(g, g')
                 mu(eta(i+i') s1 + eta(j+j') s2, g + g')
  with q a primitive cube root of unity and mu a normalized symmetric
  2-cocycle on Gamma (mu == 1 by default).
* Deg3Torus: the twisted group algebra of that cocycle, a free rank-9 module
  over its center Z = span of Gamma, with basis x^{i s1 + j s2}.
* CubicNormStructure: trace/spur/norm/adjoint with values in Z.  The running
  formulas use power traces (Newton), and charpoly_cube_check certifies them:
  the characteristic polynomial of left multiplication on the rank-9 basis
  must be a perfect cube m^3, and m recovers the same (T, S, N).
* the first Tits construction on A + A + A and its t_alpha grading over G.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .assoc import (
    AssocElement,
    Cocycle,
    CocycleDomainError,
    NotHomogeneousError,
    SweepReport,
    TwistedGroupAlgebra,
    commutation_factor,
    invert_homogeneous,
)
from .jordan import JordanElement, JordanView, _assoc_proportion
from .lattice import (
    Subgroup,
    Vec,
    box,
    snf_quotient,
    vadd,
    vscale,
    vsub,
    zero_vec,
)
from .scalars import Field, Scalar


class DecompositionError(CocycleDomainError):
    """A group element falls outside the lattice the construction lives on."""


class AlbertTripleError(ValueError):
    """An Albert-triple invariant failed."""


class CubeRootError(ArithmeticError):
    """The characteristic polynomial is not a perfect cube: not degree 3."""


def eps_eta(n: int) -> tuple[int, int]:
    """(eps, eta): the mod-3 residue in {0,1,2} and the multiple-of-3 rest.

    Extended to negative integers by the same residue rule, so
    eps(-1) = 2 and eta(-1) = -3.
    """
    e = n % 3
    return e, n - e


# -- the degree-3 cocycle ------------------------------------------------------


class AlbertCocycle(Cocycle):
    """The cocycle lambda(q, mu) on the lattice Delta over Gamma."""

    kind = "albert"

    def __init__(self, field: Field, delta: Subgroup, gamma: Subgroup,
                 s1: Vec, s2: Vec, q: Optional[Scalar] = None,
                 mu: Optional[Callable[[Vec, Vec], Scalar]] = None):
        super().__init__(delta.rank, field, support=delta)
        self.delta = delta
        self.gamma = gamma
        self.s1 = tuple(s1)
        self.s2 = tuple(s2)
        self.q = q if q is not None else field.omega()
        if (self.q ** 3) != field.one() or self.q.is_one():
            raise ValueError("q must be a primitive cube root of unity")
        self.mu = mu
        if not gamma.is_subgroup_of(delta):
            raise AlbertTripleError("Gamma must lie inside Delta")
        quot = snf_quotient(self.rank, gamma)
        self._project = quot.project
        self._residues: dict[Vec, tuple[int, int]] = {}
        for i in range(3):
            for j in range(3):
                r = vadd(vscale(i, self.s1), vscale(j, self.s2))
                key = quot.project(r)
                if key in self._residues:
                    raise AlbertTripleError(
                        "s1, s2 residues are not independent mod Gamma")
                self._residues[key] = (i, j)
        if mu is not None:
            _validate_symmetric_cocycle(field, gamma, mu)
        self._qpow = [field.one(), self.q, self.q * self.q]

    def decompose(self, s: Vec) -> tuple[int, int, Vec]:
        """(i, j, g) with s = i s1 + j s2 + g, 0 <= i, j <= 2, g in Gamma."""
        try:
            i, j = self._residues[self._project(s)]
        except KeyError:
            raise DecompositionError(f"{s} is not in the Delta lattice") from None
        g = vsub(vsub(s, vscale(i, self.s1)), vscale(j, self.s2))
        return i, j, g

    def in_support(self, s: Vec) -> bool:
        return self._project(s) in self._residues

    def _mu(self, a: Vec, b: Vec) -> Scalar:
        return self.mu(a, b) if self.mu is not None else self.field.one()

    def eval(self, s: Vec, t: Vec) -> Scalar:
        i, j, g = self.decompose(s)
        i2, j2, g2 = self.decompose(t)
        out = self._qpow[(j * i2) % 3]
        if self.mu is not None:
            r = vadd(vscale(eps_eta(i + i2)[1], self.s1), vscale(eps_eta(j + j2)[1], self.s2))
            out = out * self._mu(vscale(eps_eta(i + i2)[1], self.s1),
                                 vscale(eps_eta(j + j2)[1], self.s2))
            out = out * self._mu(g, g2)
            out = out * self._mu(r, vadd(g, g2))
        return out

    def central_lattice(self) -> Subgroup:
        """The center is spanned by Gamma: lambda_t(s, t) = q^{j i' - j' i}
        vanishes for all t exactly when i = j = 0 mod 3, i.e. s in Gamma."""
        _cross_check_albert_center(self)
        return self.gamma

    def canonical_evaluator(self):
        # with mu == 1 every value is a power of q: the exponent mod 3 is a
        # perfect canonical form (packed into the sweep's shared key shape)
        if self.mu is not None:
            return None
        decompose = self.decompose

        def key(s: Vec, t: Vec):
            j = decompose(s)[1]
            i2 = decompose(t)[0]
            return (0, (j * i2) % 3, ())

        def mul(a, b):
            return (0, (a[1] + b[1]) % 3, ())

        return key, mul


def _validate_symmetric_cocycle(field: Field, gamma: Subgroup, mu,
                                triple_samples: int = 400, seed: int = 0) -> None:
    """Normalization, symmetry on basis-combination pairs, cocycle identity on
    seeded sample triples.  The window is built from Gamma's basis so it sees
    genuinely spread lattice points."""
    import itertools

    basis = gamma.basis()
    win: list[Vec] = []
    for coeffs in itertools.product((-1, 0, 1), repeat=len(basis)):
        v = zero_vec(gamma.rank)
        for c, b in zip(coeffs, basis):
            v = vadd(v, vscale(c, b))
        win.append(v)
    zero = zero_vec(gamma.rank)
    if not mu(zero, zero).is_one():
        raise ValueError("mu must be normalized: mu(0,0) = 1")
    for a in win:
        for b in win:
            if mu(a, b) != mu(b, a):
                raise ValueError(f"mu is not symmetric at ({a}, {b})")
    rng = random.Random(seed)
    for _ in range(triple_samples):
        a, b, c = rng.choice(win), rng.choice(win), rng.choice(win)
        if mu(vadd(a, b), c) * mu(a, b) != mu(a, vadd(b, c)) * mu(b, c):
            raise ValueError(f"mu violates the cocycle identity at ({a}, {b}, {c})")


def _cross_check_albert_center(c: AlbertCocycle, bound: int = 1) -> None:
    win = c.support_window(bound)
    for s in win:
        commutes = all(commutation_factor(c, s, t).is_one() for t in (c.s1, c.s2))
        if commutes != c.gamma.contains(s):
            raise ValueError(f"Albert center cross-check failed at {s}")


def lambda_albert(field: Field, delta: Subgroup, gamma: Subgroup, s1: Vec, s2: Vec,
                  s: Vec, t: Vec, q: Optional[Scalar] = None,
                  mu: Optional[Callable[[Vec, Vec], Scalar]] = None) -> Scalar:
    """Evaluate the degree-3 cocycle at a single pair (convenience wrapper)."""
    return AlbertCocycle(field, delta, gamma, s1, s2, q=q, mu=mu)(s, t)


# -- Albert triples ------------------------------------------------------------


class AlbertTriple:
    """(G, Delta, Gamma) with 3G proper in Gamma in Delta in G,
    dim_3(G/Gamma) = 3 and dim_3(Delta/Gamma) = 2, plus the residue basis
    s1, s2 (of Delta/Gamma) and s3 completing a basis of G/Gamma."""

    def __init__(self, rank: int, gamma: Subgroup, delta: Subgroup,
                 s1: Vec, s2: Vec, s3: Vec, check: bool = True):
        self.rank = rank
        self.gamma = gamma
        self.delta = delta
        self.s1, self.s2, self.s3 = tuple(s1), tuple(s2), tuple(s3)
        if check:
            self.validate()
        quot = snf_quotient(rank, gamma)
        self._project = quot.project
        self._residues: dict[Vec, tuple[int, int, int]] = {}
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    r = vadd(vadd(vscale(i, self.s1), vscale(j, self.s2)), vscale(k, self.s3))
                    self._residues[quot.project(r)] = (i, j, k)

    def validate(self) -> None:
        n = self.rank
        three_g = Subgroup.scaled(n, 3)
        if not three_g.is_subgroup_of(self.gamma):
            raise AlbertTripleError("3G must lie inside Gamma")
        if self.gamma.same_subgroup_as(three_g):
            raise AlbertTripleError("Gamma must contain 3G properly")
        if not self.gamma.is_subgroup_of(self.delta):
            raise AlbertTripleError("Gamma must lie inside Delta")
        qg = snf_quotient(n, self.gamma)
        if qg.factors != (3, 3, 3):
            raise AlbertTripleError(
                f"G/Gamma must be a 3-dimensional Z_3 space, got factors {qg.factors}")
        # the 27 residue combinations of s1, s2, s3 must be distinct
        seen = set()
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    r = vadd(vadd(vscale(i, self.s1), vscale(j, self.s2)), vscale(k, self.s3))
                    key = qg.project(r)
                    if key in seen:
                        raise AlbertTripleError("s1, s2, s3 residues are dependent mod Gamma")
                    seen.add(key)
        if not (self.delta.contains(self.s1) and self.delta.contains(self.s2)):
            raise AlbertTripleError("s1 and s2 must lie in Delta")
        if self.delta.contains(self.s3):
            raise AlbertTripleError("s3 must complete a basis outside Delta")
        if quotient_dimension_over_3(self.delta, self.gamma) != 2:
            raise AlbertTripleError("Delta/Gamma must be 2-dimensional over Z_3")

    def decompose(self, s: Vec) -> tuple[int, int, int, Vec]:
        """(i, j, k, g): s = i s1 + j s2 + k s3 + g with g in Gamma."""
        i, j, k = self._residues[self._project(s)]
        g = vsub(s, vadd(vadd(vscale(i, self.s1), vscale(j, self.s2)), vscale(k, self.s3)))
        return i, j, k, g

    def __repr__(self):
        return f"AlbertTriple(rank={self.rank}, s=({self.s1},{self.s2},{self.s3}))"


def quotient_dimension_over_3(delta: Subgroup, gamma: Subgroup) -> int:
    """dim_{Z_3} of Delta/Gamma, via the SNF of Gamma in a basis of Delta."""
    basis = delta.basis()
    coords = [delta_coords(delta, g) for g in gamma.generators]
    if not coords:
        return 0
    sub_in_delta = Subgroup(len(basis), coords)
    q = snf_quotient(len(basis), sub_in_delta)
    if not q.is_finite:
        raise AlbertTripleError("Gamma has lower rank than Delta")
    dims = 0
    for d in q.factors:
        if d == 3:
            dims += 1
        elif d != 1:
            raise AlbertTripleError(f"Delta/Gamma has a non-3 invariant factor {d}")
    return dims


def delta_coords(delta: Subgroup, x: Vec) -> Vec:
    """Coordinates of x in the canonical basis of the subgroup delta."""
    w = delta._u
    from .lattice import _mat_vec

    wx = _mat_vec(w, x)
    coords = []
    for i in range(delta.rank):
        d = delta._diag[i]
        if d:
            if wx[i] % d:
                raise AlbertTripleError(f"{x} is not in the sublattice")
            coords.append(wx[i] // d)
        elif wx[i]:
            raise AlbertTripleError(f"{x} is not in the sublattice")
    return tuple(coords)


# -- the rank-9 degree-3 torus ---------------------------------------------------


class Deg3Torus:
    """(F^t[Delta], lambda(w, mu)) with its distinguished generators.

    u1, u2 generate the 9 residue classes over the center; u3 = x^{3 s3} is a
    central homogeneous element used as the Tits construction scalar.
    """

    def __init__(self, triple: AlbertTriple, field: Field,
                 mu: Optional[Callable[[Vec, Vec], Scalar]] = None):
        self.triple = triple
        self.field = field
        self.cocycle = AlbertCocycle(field, triple.delta, triple.gamma,
                                     triple.s1, triple.s2, mu=mu)
        self.algebra = TwistedGroupAlgebra(self.cocycle)
        self.u1 = self.algebra.basis(triple.s1)
        self.u2 = self.algebra.basis(triple.s2)
        self.u3 = self.algebra.basis(vscale(3, triple.s3))
        self.mu = mu
        # Z-module basis: x^{i s1 + j s2}, row-major in (i, j)
        self.z_basis: list[Vec] = [
            vadd(vscale(i, triple.s1), vscale(j, triple.s2))
            for i in range(3)
            for j in range(3)
        ]
        self._res_index = {self.cocycle.decompose(r)[:2]: n
                           for n, r in enumerate(self.z_basis)}

    def gamma_part(self, x: AssocElement) -> AssocElement:
        return x.restrict_support(self.triple.gamma.contains)

    def z_coordinates(self, x: AssocElement) -> list[AssocElement]:
        """Coordinates of x over Z in the basis x^{i s1 + j s2}.

        x^w for w = i s1 + j s2 + g equals x^g x^{i s1 + j s2} exactly (the
        connecting cocycle values are 1), so the coordinate at (i, j) collects
        x^g over the matching residues."""
        coords = [self.algebra.zero() for _ in range(9)]
        for s, c in x.terms.items():
            i, j, g = self.cocycle.decompose(s)
            coords[self._res_index[(i, j)]] += self.algebra.basis(g, c)
        return coords

    def central_basis_window(self, bound: int) -> list[Vec]:
        return [g for g in box(self.rank, bound) if self.triple.gamma.contains(g)]

    @property
    def rank(self) -> int:
        return self.triple.rank

    def random_element(self, rng: random.Random, terms: int = 2, bound: int = 1,
                       coeff_range: int = 3) -> AssocElement:
        win = self.cocycle.support_window(bound)
        out = self.algebra.zero()
        for _ in range(terms):
            c = self.field.scalar(rng.randrange(-coeff_range, coeff_range + 1))
            if rng.randrange(2):
                c = c + self.field.omega().scale(rng.randrange(-1, 2))
            if not c.is_zero():
                out = out + self.algebra.basis(rng.choice(win), c)
        return out


def build_deg3_torus(triple: AlbertTriple, field: Field,
                     mu: Optional[Callable[[Vec, Vec], Scalar]] = None) -> Deg3Torus:
    """The degree-3 torus of an Albert triple (mu defaults to 1; a symmetric
    mu hook is accepted and validated as a normalized symmetric 2-cocycle)."""
    if field.kind != Field.CYCLOTOMIC3:
        raise ValueError("the degree-3 torus needs a primitive cube root of unity")
    return Deg3Torus(triple, field, mu=mu)


def deg3_center_check(torus: Deg3Torus, bound: int = 1, power_range: int = 5) -> SweepReport:
    """The three central facts: windowed center basis = Gamma window,
    u2 u1 = w u1 u2, and u1^i u2^j central exactly when i = j = 0 mod 3."""
    alg = torus.algebra
    win = torus.cocycle.support_window(bound)
    checked = 0
    for s in win:
        xs = alg.basis(s)
        commutes = all((xs * alg.basis(t)) == (alg.basis(t) * xs) for t in win)
        checked += 1
        if commutes != torus.triple.gamma.contains(s):
            return SweepReport(False, checked, "exhaustive", witness=("center", s))
    w = torus.field.omega()
    if torus.u2 * torus.u1 != (torus.u1 * torus.u2).scale(w):
        return SweepReport(False, checked, "exhaustive", witness=("omega-commutation",))
    gens = [alg.basis(t) for t in win]
    for i in range(power_range):
        for j in range(power_range):
            p = (torus.u1 ** i) * (torus.u2 ** j)
            central = all(p * g == g * p for g in gens)
            checked += 1
            if central != (i % 3 == 0 and j % 3 == 0):
                return SweepReport(False, checked, "exhaustive", witness=("powers", i, j))
    return SweepReport(True, checked, "exhaustive")


# -- cubic norm structure ---------------------------------------------------------


class CubicNormStructure:
    """(T, S, N, #) for a Deg3Torus, with values in the central span of Gamma.

    Running formulas use power traces: T(x) is 3 times the Gamma-part of x
    (= tr of left multiplication / 3), then Newton's identities give
    S(x) = (T(x)^2 - T(x^2)) / 2 and N(x) = (T(x^3) - T(x) T(x^2) + S(x) T(x)) / 3,
    and the adjoint is x# = x^2 - T(x) x + S(x) 1.  charpoly_cube_check
    certifies these against the characteristic polynomial of left
    multiplication, which must equal m^3 for the cubic m they define.
    """

    def __init__(self, torus: Deg3Torus):
        self.torus = torus

    def trace(self, x: AssocElement) -> AssocElement:
        return self.torus.gamma_part(x).scale_rational(3)

    def trace_pair(self, x: AssocElement, y: AssocElement) -> AssocElement:
        return self.trace(x * y)

    def spur(self, x: AssocElement, x2: Optional[AssocElement] = None) -> AssocElement:
        x2 = x2 if x2 is not None else x * x
        t = self.trace(x)
        return (t * t - self.trace(x2)).scale_rational(1, 2)

    def norm(self, x: AssocElement) -> AssocElement:
        x2 = x * x
        x3 = x2 * x
        t1 = self.trace(x)
        t2 = self.trace(x2)
        t3 = self.trace(x3)
        s = self.spur(x, x2)
        return (t3 - t1 * t2 + s * t1).scale_rational(1, 3)

    def sharp(self, x: AssocElement) -> AssocElement:
        x2 = x * x
        return x2 - self.trace(x) * x + self.spur(x, x2)

    def left_mult_matrix(self, x: AssocElement) -> list[list[AssocElement]]:
        """L_x on the rank-9 Z-basis; entries are central elements."""
        torus = self.torus
        alg = torus.algebra
        cols = []
        for r in torus.z_basis:
            cols.append(torus.z_coordinates(x * alg.basis(r)))
        # cols[j][i] = entry (i, j)
        return [[cols[j][i] for j in range(9)] for i in range(9)]

    def charpoly(self, x: AssocElement) -> list[AssocElement]:
        """Monic characteristic polynomial of L_x, low-degree first
        (Faddeev-LeVerrier; the integer divisions are exact in char 0)."""
        a = self.left_mult_matrix(x)
        return _faddeev_leverrier(self.torus.algebra, a)

    def charpoly_cube_check(self, x: AssocElement) -> tuple[AssocElement, AssocElement, AssocElement]:
        """Verify charpoly(L_x) = m^3 and return m's coefficients (a, b, c)
        with m = y^3 + a y^2 + b y + c.  Raises CubeRootError on failure, and
        cross-checks (T, S, N) = (-a, b, -c) against the running formulas."""
        p = self.charpoly(x)
        a, b, c = cube_root_of_monic(self.torus.algebra, p)
        if -a != self.trace(x) or b != self.spur(x) or -c != self.norm(x):
            raise CubeRootError("cube root disagrees with the trace-route cubic data")
        return a, b, c


def cube_root_of_monic(alg: TwistedGroupAlgebra, p: list[AssocElement]):
    """Coefficients (a, b, c) of the monic cubic m with m^3 = p (degree 9,
    low-first).  The top three coefficients of p determine m triangularly
    (p8 = 3a, p7 = 3b + 3a^2, p6 = 3c + 6ab + a^3); the full product m^3 is
    then rechecked exactly, so a wrong cube is always caught."""
    if len(p) != 10 or p[9] != alg.one():
        raise CubeRootError("expected a monic degree-9 polynomial")
    a = p[8].scale_rational(1, 3)
    b = (p[7] - (a * a).scale_rational(3)).scale_rational(1, 3)
    c = (p[6] - (a * b).scale_rational(6) - a * a * a).scale_rational(1, 3)
    m = [c, b, a, alg.one()]
    if _poly_mul(alg, _poly_mul(alg, m, m), m) != p:
        raise CubeRootError("characteristic polynomial is not the cube of a cubic")
    return a, b, c


def _faddeev_leverrier(alg: TwistedGroupAlgebra, a: list[list[AssocElement]]) -> list[AssocElement]:
    n = len(a)
    zero, one = alg.zero(), alg.one()
    m = [[one if i == j else zero for j in range(n)] for i in range(n)]
    coeffs = [one]  # leading coefficient
    for k in range(1, n + 1):
        am = _mat_mul_sparse(zero, a, m)
        tr = zero
        for i in range(n):
            tr += am[i][i]
        ck = (-tr).scale_rational(1, k)
        coeffs.append(ck)
        if k < n:
            m = [[am[i][j] + (ck if i == j else zero) for j in range(n)] for i in range(n)]
    coeffs.reverse()  # low-degree first
    return coeffs


def _mat_mul_sparse(zero: AssocElement, a, b):
    n = len(a)
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        arow = a[i]
        nz = [(k, arow[k]) for k in range(n) if not arow[k].is_zero()]
        for j in range(n):
            acc = zero
            for k, aik in nz:
                bkj = b[k][j]
                if not bkj.is_zero():
                    acc += aik * bkj
            out[i][j] = acc
    return out


def _poly_mul(alg: TwistedGroupAlgebra, p, q):
    zero = alg.zero()
    out = [zero] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi.is_zero():
            continue
        for j, qj in enumerate(q):
            if not qj.is_zero():
                out[i + j] += pi * qj
    return out


def cubic_structure(torus: Deg3Torus) -> CubicNormStructure:
    return CubicNormStructure(torus)


# -- 3x3 splitting representation (cross-check oracle) ------------------------------


class SplittingRep:
    """A -> M_3(Z[s]/(s^3 - u1^3)): the cross-check for the cube-root norm.

    u1 maps to diag(s, w^2 s, w s) and u2 to the cyclic shift twisted by u2^3,
    so the images satisfy rep(u2) rep(u1) = w rep(u1) rep(u2), matching the
    torus relation; central x^g maps to x^g I.  det(rep(x)) lands in Z and
    must equal N(x).  Requires mu == 1.
    """

    def __init__(self, torus: Deg3Torus):
        if torus.mu is not None:
            raise ValueError("splitting representation is implemented for mu == 1")
        self.torus = torus
        alg = torus.algebra
        self.zero = (alg.zero(), alg.zero(), alg.zero())
        self.s_cubed = alg.basis(vscale(3, torus.triple.s1))  # u1^3, central
        self.u2_cubed = alg.basis(vscale(3, torus.triple.s2))
        w = torus.field.omega()
        one = alg.one()
        s = (alg.zero(), one, alg.zero())
        ws = (alg.zero(), one.scale(w), alg.zero())
        w2s = (alg.zero(), one.scale(w * w), alg.zero())
        z = self.zero
        self.rep_u1 = [[s, z, z], [z, w2s, z], [z, z, ws]]
        u2c = (self.u2_cubed, alg.zero(), alg.zero())
        e = (one, alg.zero(), alg.zero())
        self.rep_u2 = [[z, z, u2c], [e, z, z], [z, e, z]]

    # ring R = Z[s]/(s^3 - u1^3); elements are coefficient triples over Z

    def radd(self, a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2])

    def rmul(self, a, b):
        alg = self.torus.algebra
        out = [alg.zero()] * 5
        for i in range(3):
            if a[i].is_zero():
                continue
            for j in range(3):
                if not b[j].is_zero():
                    out[i + j] += a[i] * b[j]
        return (out[0] + out[3] * self.s_cubed,
                out[1] + out[4] * self.s_cubed,
                out[2])

    def rneg(self, a):
        return (-a[0], -a[1], -a[2])

    def rep(self, x: AssocElement) -> list[list[tuple]]:
        """Matrix image of x: x^s = x^g u1^i u2^j maps to (x^g I) D^i P^j."""
        alg = self.torus.algebra
        out = [[self.zero for _ in range(3)] for _ in range(3)]
        for s, c in x.terms.items():
            i, j, g = self.torus.cocycle.decompose(s)
            m = self._scalar_matrix(alg.basis(g, c))
            for _ in range(i):
                m = self.mat_mul(m, self.rep_u1)
            for _ in range(j):
                m = self.mat_mul(m, self.rep_u2)
            out = self.mat_add(out, m)
        return out

    def _scalar_matrix(self, z: AssocElement):
        zz = self.torus.algebra.zero()
        diag = (z, zz, zz)
        return [[diag if i == j else self.zero for j in range(3)] for i in range(3)]

    def mat_mul(self, a, b):
        out = [[self.zero for _ in range(3)] for _ in range(3)]
        for i in range(3):
            for j in range(3):
                acc = self.zero
                for k in range(3):
                    acc = self.radd(acc, self.rmul(a[i][k], b[k][j]))
                out[i][j] = acc
        return out

    def mat_add(self, a, b):
        return [[self.radd(a[i][j], b[i][j]) for j in range(3)] for i in range(3)]

    def det(self, m) -> tuple:
        """Cofactor expansion over the commutative ring R."""
        def mul3(a, b, c):
            return self.rmul(self.rmul(a, b), c)

        pos = self.radd(self.radd(mul3(m[0][0], m[1][1], m[2][2]),
                                  mul3(m[0][1], m[1][2], m[2][0])),
                        mul3(m[0][2], m[1][0], m[2][1]))
        neg = self.radd(self.radd(mul3(m[0][2], m[1][1], m[2][0]),
                                  mul3(m[0][0], m[1][2], m[2][1])),
                        mul3(m[0][1], m[1][0], m[2][2]))
        return self.radd(pos, self.rneg(neg))

    def norm_via_det(self, x: AssocElement) -> AssocElement:
        d = self.det(self.rep(x))
        if not (d[1].is_zero() and d[2].is_zero()):
            raise ValueError("determinant landed outside Z: not a valid representation")
        return d[0]

    def homomorphism_check(self, pairs: Sequence[tuple[AssocElement, AssocElement]]) -> SweepReport:
        checked = 0
        for a, b in pairs:
            checked += 1
            if self.rep(a * b) != self.mat_mul(self.rep(a), self.rep(b)):
                return SweepReport(False, checked, "sampled", witness=("pair", checked))
        return SweepReport(True, checked, "sampled")


# -- first Tits construction --------------------------------------------------------


class TitsElement:
    """(x0, x1, x2) in A + A + A."""

    __slots__ = ("x0", "x1", "x2")

    def __init__(self, x0: AssocElement, x1: AssocElement, x2: AssocElement):
        self.x0 = x0
        self.x1 = x1
        self.x2 = x2

    def __add__(self, other):
        return TitsElement(self.x0 + other.x0, self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other):
        return TitsElement(self.x0 - other.x0, self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self):
        return TitsElement(-self.x0, -self.x1, -self.x2)

    def scale(self, c: Scalar):
        return TitsElement(self.x0.scale(c), self.x1.scale(c), self.x2.scale(c))

    def cscale(self, z: AssocElement):
        """Scale by a central element of the coordinate algebra."""
        return TitsElement(z * self.x0, z * self.x1, z * self.x2)

    def is_zero(self):
        return self.x0.is_zero() and self.x1.is_zero() and self.x2.is_zero()

    def __eq__(self, other):
        return (isinstance(other, TitsElement) and self.x0 == other.x0
                and self.x1 == other.x1 and self.x2 == other.x2)

    def __hash__(self):
        return hash((self.x0, self.x1, self.x2))

    def __repr__(self):
        return f"({self.x0!r}, {self.x1!r}, {self.x2!r})"


class AlbertView(JordanView):
    """The Jordan algebra on A + A + A built from the cubic data of A and the
    invertible central u3, graded over G by the t_alpha dictionary."""

    kind = "albert"

    def __init__(self, torus: Deg3Torus):
        super().__init__(torus.rank, torus.field)
        self.torus = torus
        self.cubic = CubicNormStructure(torus)
        self.u3 = torus.u3
        self.u3_inv = invert_homogeneous(torus.u3)

    # cubic data on the Tits algebra ----------------------------------

    def lin_trace(self, x: TitsElement) -> AssocElement:
        return self.cubic.trace(x.x0)

    def sharp(self, x: TitsElement) -> TitsElement:
        cb = self.cubic
        return TitsElement(
            cb.sharp(x.x0) - x.x1 * x.x2,
            self.u3_inv * cb.sharp(x.x2) - x.x0 * x.x1,
            self.u3 * cb.sharp(x.x1) - x.x2 * x.x0,
        )

    def norm(self, x: TitsElement) -> AssocElement:
        cb = self.cubic
        return (cb.norm(x.x0) + self.u3 * cb.norm(x.x1) + self.u3_inv * cb.norm(x.x2)
                - cb.trace((x.x0 * x.x1) * x.x2))

    def cross(self, x: TitsElement, y: TitsElement) -> TitsElement:
        return self.sharp(x + y) - self.sharp(x) - self.sharp(y)

    def spur(self, x: TitsElement) -> AssocElement:
        return self.lin_trace(self.sharp(x))

    def spur_pair(self, x: TitsElement, y: TitsElement) -> AssocElement:
        return self.lin_trace(self.cross(x, y))

    def trace_pair(self, x: TitsElement, y: TitsElement) -> AssocElement:
        cb = self.cubic
        return cb.trace(x.x0 * y.x0) + cb.trace(x.x1 * y.x2) + cb.trace(x.x2 * y.x1)

    # Jordan view protocol ---------------------------------------------

    def mul(self, x: TitsElement, y: TitsElement) -> TitsElement:
        """x . y = (x cross y + T(x) y + T(y) x - S(x,y) e) / 2; reduces to the
        half anticommutator on the embedded diagonal copy of A."""
        out = self.cross(x, y)
        out = out + y.cscale(self.lin_trace(x))
        out = out + x.cscale(self.lin_trace(y))
        out = out - self.one().payload.cscale(self.spur_pair(x, y))
        return out.scale(self.field.scalar(Fraction(1, 2)))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, a, c: Scalar):
        return a.scale(c)

    def is_zero(self, a):
        return a.is_zero()

    def one(self) -> JordanElement:
        alg = self.torus.algebra
        return JordanElement(self, TitsElement(alg.one(), alg.zero(), alg.zero()))

    def zero(self) -> JordanElement:
        alg = self.torus.algebra
        return JordanElement(self, TitsElement(alg.zero(), alg.zero(), alg.zero()))

    def embed(self, a: AssocElement) -> JordanElement:
        alg = self.torus.algebra
        return JordanElement(self, TitsElement(a, alg.zero(), alg.zero()))

    def t_alpha(self, alpha: Vec) -> JordanElement:
        """The graded basis dictionary: with alpha = i s1 + j s2 + k s3 + g,
        t_alpha = (u_alpha, 0, 0), (0, u_{alpha - s3}, 0) or
        (0, 0, u_{alpha + s3}) as k = 0, 1, 2."""
        alg = self.torus.algebra
        i, j, k, g = self.torus.triple.decompose(alpha)
        if k == 0:
            return JordanElement(self, TitsElement(alg.basis(alpha), alg.zero(), alg.zero()))
        if k == 1:
            return JordanElement(self, TitsElement(
                alg.zero(), alg.basis(vsub(alpha, self.torus.triple.s3)), alg.zero()))
        return JordanElement(self, TitsElement(
            alg.zero(), alg.zero(), alg.basis(vadd(alpha, self.torus.triple.s3))))

    def graded_basis(self, s: Vec) -> Optional[JordanElement]:
        return self.t_alpha(s)

    def support_window(self, bound: int) -> list[Vec]:
        return list(box(self.rank, bound))

    def invert_payload(self, x: TitsElement) -> TitsElement:
        """x^-1 = x# / N(x); certified for homogeneous elements, whose norm is
        an invertible central monomial."""
        parts = [p for p in (x.x0, x.x1, x.x2) if not p.is_zero()]
        if len(parts) != 1 or not parts[0].is_homogeneous():
            raise NotHomogeneousError("Tits inverse formula applies to single graded terms")
        n = self.norm(x)
        return self.sharp(x).cscale(invert_homogeneous(n))

    def proportion(self, a: TitsElement, basis_payload: TitsElement) -> Optional[Scalar]:
        ratio = None
        for pa, pb in ((a.x0, basis_payload.x0), (a.x1, basis_payload.x1), (a.x2, basis_payload.x2)):
            if pb.is_zero():
                if not pa.is_zero():
                    return None
                continue
            r = self.field.zero() if pa.is_zero() else _assoc_proportion(pa, pb)
            if r is None:
                return None
            if ratio is None:
                ratio = r
            elif r != ratio:
                return None
        return ratio if ratio is not None else self.field.zero()


def tits_first(torus: Deg3Torus, u3: Optional[AssocElement] = None) -> AlbertView:
    """First Tits construction view; u3 defaults to the torus generator and
    must be an invertible central homogeneous element."""
    view = AlbertView(torus)
    if u3 is not None:
        if not u3.is_homogeneous():
            raise NotHomogeneousError("u3 must be homogeneous")
        s, _ = u3.homogeneous_part()
        if not torus.triple.gamma.contains(s):
            raise ValueError("u3 must be central (supported on Gamma)")
        view.u3 = u3
        view.u3_inv = invert_homogeneous(u3)
    return view


def t_alpha_basis(view: AlbertView, alpha: Vec) -> JordanElement:
    return view.t_alpha(alpha)


def albert_grading_check(view: AlbertView, bound: int = 1) -> SweepReport:
    """t_a . t_b = r t_{a+b} with r a nonzero scalar, for all windowed pairs."""
    win = view.support_window(bound)
    basis = {s: view.t_alpha(s) for s in win}
    checked = 0
    for a in win:
        ta = basis[a]
        for b in win:
            checked += 1
            prod = ta * basis[b]
            target = view.t_alpha(vadd(a, b))
            r = view.proportion(prod.payload, target.payload)
            if r is None:
                return SweepReport(False, checked, "exhaustive", witness=("off-component", a, b))
            if r.is_zero():
                return SweepReport(False, checked, "exhaustive", witness=("zero-product", a, b))
    return SweepReport(True, checked, "exhaustive")


def coset_cover_check(view: AlbertView, bound: int = 1) -> tuple[bool, int]:
    """The windowed t_alpha dictionary must cover every coset of Gamma in G."""
    quot = snf_quotient(view.rank, view.torus.triple.gamma)
    seen = {quot.project(s) for s in view.support_window(bound)}
    return len(seen) == quot.order(), len(seen)
