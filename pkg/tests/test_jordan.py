import random
from fractions import Fraction

import pytest

from toruslab.assoc import (
    GradedInvolution,
    IncompatibleInvolutionError,
    NotHomogeneousError,
    QuantumCocycle,
    QuantumMatrix,
    BicharacterCocycle,
    TwistedGroupAlgebra,
    central_grading_group,
)
from toruslab.clifford import CliffordTriple
from toruslab.jordan import (
    CarrierError,
    CliffordView,
    GradedTableView,
    HermitianView,
    PlusView,
    ViewMismatchError,
    build_hermitian_type,
    d_operator,
    gradedness_check,
    jordan_identity_check,
    jordan_invert,
    jordan_mul,
    jordan_structure_rows,
    p16,
    p16_q48_eval,
    q48,
    strong_type_check,
    tad,
    torus_axioms_check,
)
from toruslab.lattice import QuadraticMapF2, Subgroup, box, vadd, vscale
from toruslab.scalars import QQ, QW, parse_scalar

E1, E2 = (1, 0), (0, 1)


def quantum(entries, field):
    return QuantumCocycle(
        QuantumMatrix([[field.scalar(x) if not hasattr(x, "field") else x for x in row]
                       for row in entries])
    )


def omega_plus():
    w = QW.omega()
    return PlusView(TwistedGroupAlgebra(quantum([[QW.one(), w], [w * w, QW.one()]], QW)))


def minus_one_hermitian():
    c = quantum([[1, -1], [-1, 1]], QQ)
    alg = TwistedGroupAlgebra(c)
    q = QuadraticMapF2.from_evaluator(2, lambda v: (v[0] * v[1]) % 2)
    return HermitianView(alg, GradedInvolution(alg, q))


def desk_clifford():
    return CliffordView(
        CliffordTriple(QQ, Subgroup.scaled(2, 2), [(0, 0), E1, E2],
                       {E1: QQ.one(), E2: QQ.scalar(-1)})
    )


def test_anticommuting_generators_circle_to_zero():
    c = quantum([[1, -1], [-1, 1]], QQ)
    view = PlusView(TwistedGroupAlgebra(c))
    y1, y2 = view.graded_basis(E1), view.graded_basis(E2)
    assert jordan_mul(y1, y2).is_zero()


def test_unit_and_commutative_case():
    view = omega_plus()
    one = view.one()
    for s in box(2, 1):
        b = view.graded_basis(s)
        assert b * one == b
    triv = PlusView(TwistedGroupAlgebra(quantum([[1, 1], [1, 1]], QQ)))
    a = triv.graded_basis(E1) + triv.graded_basis(E2).scale_rational(3)
    b = triv.graded_basis((1, 1))
    # in the commutative case the Jordan product is the associative product
    assert (a * b).payload == a.payload * b.payload


def test_hermitian_view_rejects_unfixed_operands():
    view = minus_one_hermitian()
    x = view.algebra.basis(E1)  # q(e1) = 0, fixed
    bad = view.algebra.basis((1, 1))  # q = 1, anti-fixed
    with pytest.raises(CarrierError):
        view.mul(x, bad)


def test_view_mismatch():
    v1, v2 = omega_plus(), omega_plus()
    with pytest.raises(ViewMismatchError):
        jordan_mul(v1.one(), v2.one())


def test_jordan_identity_plus_and_hermitian_and_clifford():
    assert jordan_identity_check(omega_plus(), 2, random_sums=10).ok
    assert jordan_identity_check(minus_one_hermitian(), 2, random_sums=10).ok
    assert jordan_identity_check(desk_clifford(), 2, random_sums=10).ok


def test_jordan_identity_negative_control():
    # symmetrically perturb one structure constant of a commutative table;
    # the product stays commutative but the Jordan identity breaks
    triv = PlusView(TwistedGroupAlgebra(quantum([[1, 1], [1, 1]], QQ)))
    rows = jordan_structure_rows(triv, 4)
    parse = lambda s: parse_scalar(s, QQ)
    for row in rows:
        if {tuple(row["sigma"]), tuple(row["tau"])} == {(1, 0), (0, 1)}:
            row["coeff"] = "7"
    bad = GradedTableView(2, QQ, rows, parse)
    report = jordan_identity_check(bad, 1, random_sums=0)
    assert not report.ok and report.witness is not None


def test_torus_axioms_plus_view():
    report = torus_axioms_check(omega_plus(), 2)
    assert report.all_ok
    assert len(report.support) == 25


def test_torus_axioms_clifford_support_is_S():
    view = desk_clifford()
    report = torus_axioms_check(view, 2)
    assert report.all_ok
    assert set(report.support) == {s for s in box(2, 2) if (s[0] % 2, s[1] % 2) != (1, 1)}


def test_torus_axioms_hermitian_support_omits_q1():
    view = minus_one_hermitian()
    report = torus_axioms_check(view, 2)
    assert report.all_ok
    assert (1, 1) not in set(report.support)
    assert E1 in set(report.support)


def test_strong_type_plus_passes():
    report = strong_type_check(omega_plus(), 2)
    assert report.holds and not report.failing_pairs


def test_strong_type_clifford_fails_exactly_on_mixed_pairs():
    view = desk_clifford()
    report = strong_type_check(view, 2)
    assert not report.holds
    t = view.triple
    for s, u in report.failing_pairs:
        es, eu = t.s.rep_of(s), t.s.rep_of(u)
        assert es != eu and es != (0, 0) and eu != (0, 0)
    # and those are the only failures
    win = view.support_window(2)
    expected = [
        (s, u) for s in win for u in win
        if (es := t.s.rep_of(s)) != (eu := t.s.rep_of(u)) and es != (0, 0) and eu != (0, 0)
    ]
    assert sorted(report.failing_pairs) == sorted(expected)


def test_gradedness():
    assert gradedness_check(omega_plus(), 2).ok
    assert gradedness_check(minus_one_hermitian(), 2).ok
    assert gradedness_check(desk_clifford(), 2).ok


def test_jordan_invert_across_views():
    for view in (omega_plus(), minus_one_hermitian(), desk_clifford()):
        one = view.one()
        for s in view.support_window(2):
            u = view.graded_basis(s)
            v = jordan_invert(u)
            assert u * v == one
            assert (u * u) * v == u
        with pytest.raises(ZeroDivisionError):
            jordan_invert(view.zero())


def test_jordan_invert_rejects_sums():
    view = omega_plus()
    u = view.graded_basis(E1) + view.graded_basis(E2)
    with pytest.raises(NotHomogeneousError):
        jordan_invert(u)


def test_hermitian_closure_under_circle():
    view = minus_one_hermitian()
    for s in view.support_window(1):
        for t in view.support_window(1):
            prod = view.graded_basis(s) * view.graded_basis(t)
            if not prod.is_zero():
                assert view.theta.is_fixed(prod.payload)


def test_2G_in_central_grading_for_involution_type():
    view = minus_one_hermitian()
    gamma = central_grading_group(view.algebra.cocycle)
    for s in box(2, 2):
        assert gamma.contains(vscale(2, s))


# -- tads, D, p16, q48 --------------------------------------------------------


def test_tad_pair_is_twice_circle():
    view = omega_plus()
    alg = view.algebra
    a = alg.basis(E1) + alg.basis((1, 1), QW.scalar(2))
    b = alg.basis(E2)
    assert tad([a, b]) == a.circle(b).scale_rational(2)


def test_tad_reversal_symmetry():
    alg = omega_plus().algebra
    rng = random.Random(5)
    win = list(box(2, 1))
    for _ in range(10):
        xs = [alg.basis(rng.choice(win), QW.scalar(rng.randrange(1, 4))) for _ in range(4)]
        assert tad(xs) == tad(list(reversed(xs)))


def test_tetrad_of_fixed_elements_is_fixed():
    view = minus_one_hermitian()
    theta = view.theta
    fixed = [view.graded_basis(s).payload for s in view.support_window(1)]
    for i in range(len(fixed)):
        for j in range(len(fixed)):
            t = tad([fixed[i], fixed[j], fixed[(i + j) % len(fixed)], fixed[0]])
            assert theta.is_fixed(t)


def d_oracle(x, y, z):
    # [[x,y],z] expanded to the four associative words
    return (x * y) * z - (y * x) * z - z * (x * y) + z * (y * x)


def test_d_operator_matches_word_expansion():
    alg = omega_plus().algebra
    rng = random.Random(9)
    win = list(box(2, 1))
    for _ in range(15):
        x = alg.basis(rng.choice(win), QW.scalar(rng.randrange(1, 3)))
        y = alg.basis(rng.choice(win))
        z = alg.basis(rng.choice(win))
        assert d_operator(x, y, z) == d_oracle(x, y, z)


def test_d_operator_derivation_property():
    alg = omega_plus().algebra
    rng = random.Random(3)
    win = list(box(2, 1))
    for _ in range(10):
        x, y = alg.basis(rng.choice(win)), alg.basis(rng.choice(win))
        z, w = alg.basis(rng.choice(win)), alg.basis(rng.choice(win))
        lhs = d_operator(x, y, z * w)
        rhs = d_operator(x, y, z) * w + z * d_operator(x, y, w)
        assert lhs == rhs


def test_d_trivial_cases():
    alg = omega_plus().algebra
    x = alg.basis(E1)
    assert d_operator(x, x, alg.basis(E2)).is_zero()  # commuting pair [x,x]=0
    assert d_operator(x, alg.basis(E2), alg.one()).is_zero()


def test_p16_requires_flag():
    alg = omega_plus().algebra
    xs = [alg.basis(E1), alg.basis(E2), alg.basis(E1), alg.basis(E2)]
    with pytest.raises(ValueError):
        p16(*xs, operator_as_element=False)


def test_p16_commutative_torus_vanishes():
    alg = PlusView(TwistedGroupAlgebra(quantum([[1, 1], [1, 1]], QQ))).algebra
    xs = [alg.basis(E1), alg.basis(E2), alg.basis((1, 1)), alg.basis((-1, 0))]
    assert p16(*xs, operator_as_element=True).is_zero()
    assert q48(xs * 3, operator_as_element=True).is_zero()


def test_p16_homogeneous_degree_bookkeeping():
    alg = omega_plus().algebra
    a, b, c, d = E1, E2, (1, 1), (0, -1)
    val = p16(alg.basis(a), alg.basis(b), alg.basis(c), alg.basis(d),
              operator_as_element=True)
    if not val.is_zero():
        expected = vadd(vadd(vscale(6, a), vscale(6, b)), vadd(vscale(2, c), d))
        assert val.support() == {expected}


def test_p16_nonzero_on_generic_omega_torus():
    alg = omega_plus().algebra
    val = p16(alg.basis(E1), alg.basis(E2), alg.basis(E1), alg.basis(E2),
              operator_as_element=True)
    assert not val.is_zero()
    assert val.support() == {(8, 7)}


def test_q48_on_generic_rational_torus_computed_fact():
    """Exhaustive small-window evaluation, recorded as a computed fact.

    With q_12 = 2 the tuple below is a frozen nonzero witness; on the w-torus
    the same sweep gives 0 for every monomial tuple (cube roots of unity make
    all p16 degrees commute mod 3).
    """
    alg2 = PlusView(TwistedGroupAlgebra(quantum([[1, 2], [Fraction(1, 2), 1]], QQ))).algebra
    tup = [alg2.basis(E1), alg2.basis(E2), alg2.basis(E1), alg2.basis(E1),
           alg2.basis(E1), alg2.basis(E2), alg2.basis(E1), alg2.basis(E2),
           alg2.basis(E1), alg2.basis(E2), alg2.basis(E1), alg2.basis(E1)]
    val = q48(tup, operator_as_element=True)
    assert not val.is_zero()
    assert val.support() == {(26, 19)}

    algw = omega_plus().algebra
    win = [E1, E2, (1, 1)]
    found_nonzero = False
    for z1 in win:
        for w1 in win:
            for z3 in win:
                tup = [algw.basis(E1), algw.basis(E2), algw.basis(z1), algw.basis(w1),
                       algw.basis(E1), algw.basis(E2), algw.basis(E2), algw.basis(E1),
                       algw.basis(E1), algw.basis(E2), algw.basis(z3), algw.basis(E2)]
                if not q48(tup, operator_as_element=True).is_zero():
                    found_nonzero = True
    assert not found_nonzero  # computed fact for this window on the w-torus


def test_p16_q48_eval_dispatch():
    alg = omega_plus().algebra
    xs4 = [alg.basis(E1), alg.basis(E2), alg.basis(E1), alg.basis(E2)]
    assert p16_q48_eval(xs4, operator_as_element=True) == p16(*xs4, operator_as_element=True)
    with pytest.raises(ValueError):
        p16_q48_eval(xs4 * 2, operator_as_element=True)


# -- constructors --------------------------------------------------------------


def test_build_plus_type_from_q_omega():
    w = QW.omega()
    c = quantum([[QW.one(), w], [w * w, QW.one()]], QW)
    view = build_hermitian_type("plus", c)
    assert torus_axioms_check(view, 2).all_ok
    gamma = central_grading_group(c)
    assert gamma.same_subgroup_as(Subgroup.scaled(2, 3))


def test_build_involution_type_desk():
    c = quantum([[1, -1], [-1, 1]], QQ)
    q = QuadraticMapF2.from_evaluator(2, lambda v: (v[0] * v[1]) % 2)
    view = build_hermitian_type("involution", c, q)
    assert torus_axioms_check(view, 2).all_ok
    assert set(view.support_window(1)) == {s for s in box(2, 1) if (s[0] * s[1]) % 2 == 0}


def test_build_extension_type_desk():
    w = QW.omega()
    lam = BicharacterCocycle(QW, [[QW.one(), w], [w * w, QW.one()]])
    view = build_hermitian_type("extension", lam)
    assert torus_axioms_check(view, 2).all_ok
    # fixed basis spans an F-structure: circle products have rational coefficients
    for s in box(2, 1):
        for t in box(2, 1):
            prod = view.graded_basis(s) * view.graded_basis(t)
            assert all(c.is_rational() for c in prod.payload.terms.values())


def test_build_extension_type_real_quadratic_field():
    # E = QQ(sqrt 2): conjugation-symmetric bicharacter with irrational values
    from toruslab.scalars import Field

    e = Field(Field.QUADRATIC, 2)
    one = e.one()
    m12 = e.scalar(1, 1)   # 1 + sqrt 2
    m21 = e.scalar(1, -1)  # its conjugate
    lam = BicharacterCocycle(e, [[one, m12], [m21, one]])
    view = build_hermitian_type("extension", lam)
    assert torus_axioms_check(view, 2).all_ok
    for s in box(2, 1):
        for t in box(2, 1):
            prod = view.graded_basis(s) * view.graded_basis(t)
            assert all(c.is_rational() for c in prod.payload.terms.values())
    # the identity sweep runs through the scalar route (no exponent form)
    assert lam.canonical_evaluator() is None
    from toruslab.assoc import cocycle_identity_check

    assert cocycle_identity_check(lam, 1).ok


def test_build_extension_type_rejects_asymmetric_cocycle():
    w = QW.omega()
    lam = BicharacterCocycle(QW, [[QW.one(), w], [w, QW.one()]])
    with pytest.raises(IncompatibleInvolutionError) as exc:
        build_hermitian_type("extension", lam)
    assert exc.value.witness in (((1, 0), (0, 1)), ((0, 1), (1, 0)))


def test_build_involution_requires_q():
    c = quantum([[1, -1], [-1, 1]], QQ)
    with pytest.raises(ValueError):
        build_hermitian_type("involution", c)


# -- structure tables -----------------------------------------------------------


def test_structure_rows_roundtrip_products():
    view = desk_clifford()
    rows = jordan_structure_rows(view, 2)
    parse = lambda s: parse_scalar(s, QQ)
    table = GradedTableView(2, QQ, rows, parse)
    for s in view.support_window(1):
        for t in view.support_window(1):
            p_view = view.graded_basis(s) * view.graded_basis(t)
            p_tab = table.graded_basis(s) * table.graded_basis(t)
            if p_view.is_zero():
                assert p_tab.is_zero()
            else:
                target = view.graded_basis(vadd(s, t))
                c = view.proportion(p_view.payload, target.payload)
                assert p_tab.payload == {vadd(s, t): c}
