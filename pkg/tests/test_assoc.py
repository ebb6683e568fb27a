import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toruslab.assoc import (
    BicharacterCocycle,
    CocycleDomainError,
    GradedInvolution,
    HandleMismatchError,
    IncompatibleInvolutionError,
    NotHomogeneousError,
    QuantumCocycle,
    QuantumMatrix,
    TableCocycle,
    TwistedGroupAlgebra,
    central_grading_group,
    coboundary_twist,
    cocycle_identity_check,
    commutation_bihomomorphism_check,
    commutation_factor,
    hermitian_part_basis,
    invert_homogeneous,
    involution_antiautomorphism_check,
    structure_constant_rows,
)
from toruslab.lattice import QuadraticMapF2, Subgroup, box, unit_vec, vadd
from toruslab.scalars import QQ, QW, Scalar


def quantum(entries, field):
    def to_scalar(x):
        return x if isinstance(x, Scalar) else field.scalar(x)

    return QuantumCocycle(QuantumMatrix([[to_scalar(x) for x in row] for row in entries]))


def omega_torus():
    """Rank-2 quantum torus with q_12 = w (so q_21 = w^2)."""
    w = QW.omega()
    return quantum([[1, w], [w * w, 1]], QW)


def trivial_torus(n=2):
    one = QQ.one()
    return quantum([[1] * n for _ in range(n)], QQ)


E1, E2 = (1, 0), (0, 1)


def test_quantum_eval_normal_ordering():
    # q_21 = w: reordering y^e2 y^e1 = q_21 y^e1 y^e2 gives lambda(e2,e1) = w
    w = QW.omega()
    c = quantum([[1, w * w], [w, 1]], QW)
    assert c(E1, E2) == QW.one()
    assert c(E2, E1) == w


def test_unital_normalization():
    c = omega_torus()
    for s in box(2, 2):
        assert c((0, 0), s).is_one()
        assert c(s, (0, 0)).is_one()


def test_group_algebra_is_trivial_cocycle():
    c = trivial_torus()
    for s in box(2, 2):
        for t in box(2, 2):
            assert c(s, t).is_one()


def test_quantum_matrix_validation():
    w = QW.omega()
    with pytest.raises(ValueError):
        QuantumMatrix([[w, QW.one()], [QW.one(), QW.one()]])  # q_11 != 1
    with pytest.raises(ValueError):
        QuantumMatrix([[QW.one(), w], [w, QW.one()]])  # q_12 q_21 != 1


def test_commutation_factor_is_quantum_entry():
    c = omega_torus()
    w = QW.omega()
    assert commutation_factor(c, E1, E2) == w
    assert commutation_factor(c, E2, E1) == w * w
    for s in box(2, 2):
        assert commutation_factor(c, s, s).is_one()
        for t in box(2, 2):
            lt = commutation_factor(c, s, t)
            assert lt * commutation_factor(c, t, s) == QW.one()


def test_commutation_governs_reordering():
    c = omega_torus()
    alg = TwistedGroupAlgebra(c)
    for s in box(2, 1):
        for t in box(2, 1):
            xs, xt = alg.basis(s), alg.basis(t)
            assert xs * xt == (xt * xs).scale(commutation_factor(c, s, t))


def test_cocycle_identity_exhaustive_pass():
    report = cocycle_identity_check(omega_torus(), 2)
    assert report.ok and report.mode == "exhaustive"
    assert report.checked == 25 ** 3


def test_cocycle_identity_window_three():
    report = cocycle_identity_check(omega_torus(), 3)
    assert report.ok and report.mode == "exhaustive"
    assert report.checked == 49 ** 3


def test_cocycle_identity_rational_entries():
    c = quantum([[1, Fraction(1, 3)], [3, 1]], QQ)
    assert cocycle_identity_check(c, 2).ok


def test_cocycle_identity_table_perturbation_fails_with_witness():
    table = TableCocycle.from_cocycle(trivial_torus(), 2)
    table.table[((1, 0), (0, 1))] = QQ.scalar(5)
    report = cocycle_identity_check(table, 1)
    assert not report.ok
    assert report.witness is not None
    s, t, d = report.witness
    # recheck the witness directly
    left = table(vadd(s, t), d) * table(s, t)
    right = table(s, vadd(t, d)) * table(t, d)
    assert left != right


def test_cocycle_identity_sampled_mode():
    report = cocycle_identity_check(omega_torus(), 2, exhaustive_cutoff=10, sample_size=500)
    assert report.ok and report.mode == "sampled"


def test_bicharacter_is_always_a_cocycle():
    w = QW.omega()
    c = BicharacterCocycle(QW, [[QW.one(), w], [w * w, QW.one()]])
    assert cocycle_identity_check(c, 2).ok
    assert commutation_bihomomorphism_check(c, 1).ok


def test_commutation_bihomomorphism():
    assert commutation_bihomomorphism_check(omega_torus(), 2).ok


def test_coboundary_leaves_commutation_factor_unchanged():
    c = omega_torus()
    rng = random.Random(11)
    values = {}

    def d(s):
        if s not in values:
            values[s] = QW.scalar(rng.choice([1, 2, 3, Fraction(1, 2)])) * QW.omega() ** rng.randrange(3)
        return values[s]

    twisted = coboundary_twist(c, d, 2)
    assert cocycle_identity_check(twisted, 1).ok
    for s in box(2, 1):
        for t in box(2, 1):
            assert commutation_factor(twisted, s, t) == commutation_factor(c, s, t)


def test_assoc_mul_single_terms_and_associativity():
    alg = TwistedGroupAlgebra(omega_torus())
    x1, x2 = alg.basis(E1), alg.basis(E2)
    prod = x1 * x2
    assert prod.support() == {(1, 1)}
    assert prod.coefficient((1, 1)) == alg.cocycle(E1, E2)
    # associativity on all windowed basis triples
    for s in box(2, 1):
        for t in box(2, 1):
            for d in box(2, 1):
                a, b, c = alg.basis(s), alg.basis(t), alg.basis(d)
                assert (a * b) * c == a * (b * c)


def test_unit_and_bilinearity():
    alg = TwistedGroupAlgebra(omega_torus())
    one = alg.one()
    a = alg.basis(E1, QW.scalar(2)) + alg.basis((1, -1), QW.omega())
    b = alg.basis(E2) - alg.basis((0, 0), QW.scalar(Fraction(1, 2)))
    assert one * a == a and a * one == a
    assert (a + b) * b == a * b + b * b
    assert a * (a + b) == a * a + a * b


def test_support_of_product_contained_in_sumset():
    alg = TwistedGroupAlgebra(omega_torus())
    a = alg.basis(E1) + alg.basis(E2)
    b = alg.basis((1, 1)) + alg.basis((-1, 0))
    sumset = {vadd(s, t) for s in a.support() for t in b.support()}
    assert (a * b).support() <= sumset


def test_invert_homogeneous_trivial_cocycle():
    alg = TwistedGroupAlgebra(trivial_torus())
    x = alg.basis(E1)
    assert invert_homogeneous(x) == alg.basis((-1, 0))


def test_invert_homogeneous_with_coefficient():
    alg = TwistedGroupAlgebra(omega_torus())
    a = alg.basis(E1, QW.scalar(2))
    inv = invert_homogeneous(a)
    assert a * inv == alg.one()
    assert inv * a == alg.one()


def test_invert_homogeneous_window_sweep():
    alg = TwistedGroupAlgebra(omega_torus())
    for s in box(2, 2):
        a = alg.basis(s, QW.scalar(Fraction(3, 7)))
        assert a * invert_homogeneous(a) == alg.one()


def test_invert_rejects_sums_and_zero():
    alg = TwistedGroupAlgebra(omega_torus())
    with pytest.raises(NotHomogeneousError):
        invert_homogeneous(alg.basis(E1) + alg.basis(E2))
    with pytest.raises(ZeroDivisionError):
        invert_homogeneous(alg.zero())


def test_handle_mismatch_raises():
    a1 = TwistedGroupAlgebra(omega_torus())
    a2 = TwistedGroupAlgebra(omega_torus())
    with pytest.raises(HandleMismatchError):
        a1.basis(E1) * a2.basis(E2)


def test_central_grading_group_omega_torus():
    # lambda_t(s, e2) = w^{s_1}, lambda_t(s, e1) = w^{-s_2}  =>  3Z x 3Z
    gamma = central_grading_group(omega_torus())
    expected = Subgroup.scaled(2, 3)
    assert gamma.same_subgroup_as(expected)


def test_central_grading_group_trivial_and_elementary():
    assert central_grading_group(trivial_torus()).same_subgroup_as(Subgroup.full(2))
    c = quantum([[1, -1], [-1, 1]], QQ)
    assert central_grading_group(c).same_subgroup_as(Subgroup.scaled(2, 2))


def test_central_grading_group_mixed_entries():
    # q_12 = 2: exact condition s_1 = s_2 = 0 ... brute-force windowed oracle
    c = quantum([[1, 2], [Fraction(1, 2), 1]], QQ)
    gamma = central_grading_group(c)
    es = [unit_vec(2, i) for i in range(2)]
    for s in box(2, 3):
        commutes = all(commutation_factor(c, s, e).is_one() for e in es)
        assert gamma.contains(s) == commutes


def test_central_element_commutes_with_window():
    c = omega_torus()
    alg = TwistedGroupAlgebra(c)
    gamma = central_grading_group(c)
    for g in box(2, 3):
        if not gamma.contains(g):
            continue
        xg = alg.basis(g)
        for s in box(2, 2):
            xs = alg.basis(s)
            assert xg * xs == xs * xg


# -- involutions -------------------------------------------------------------


def elementary_theta():
    """q_12 = -1 with q(s) = s_1 s_2: the compatible desk pair."""
    c = quantum([[1, -1], [-1, 1]], QQ)
    alg = TwistedGroupAlgebra(c)
    q = QuadraticMapF2.from_evaluator(2, lambda v: (v[0] * v[1]) % 2)
    return alg, GradedInvolution(alg, q)


def test_involution_desk_example():
    alg, theta = elementary_theta()
    y1y2 = alg.basis(E1) * alg.basis(E2)
    y2y1 = alg.basis(E2) * alg.basis(E1)
    assert theta.apply(y1y2) == -y1y2
    assert -y1y2 == y2y1
    assert theta.apply(alg.one()) == alg.one()


def test_involution_is_period2_antiautomorphism():
    _, theta = elementary_theta()
    assert involution_antiautomorphism_check(theta, 2).ok


def test_involution_incompatible_pair_rejected_with_witness():
    c = quantum([[1, -1], [-1, 1]], QQ)
    alg = TwistedGroupAlgebra(c)
    with pytest.raises(IncompatibleInvolutionError) as exc:
        GradedInvolution(alg, QuadraticMapF2.zero(2))
    assert exc.value.witness in (((1, 0), (0, 1)), ((0, 1), (1, 0)))


def test_hermitian_part_basis_window():
    alg, theta = elementary_theta()
    basis = hermitian_part_basis(theta, 1)
    supports = {next(iter(b.terms)) for b in basis}
    assert supports == {s for s in box(2, 1) if (s[0] * s[1]) % 2 == 0}
    # closed under the Jordan product inside the window
    for a in basis:
        for b in basis:
            assert theta.is_fixed(a.circle(b))


def test_hermitian_part_commutative_case():
    alg = TwistedGroupAlgebra(trivial_torus())
    theta = GradedInvolution(alg, QuadraticMapF2.zero(2))
    basis = hermitian_part_basis(theta, 1)
    assert len(basis) == 9  # whole window is fixed


def test_extension_type_involution_all_basis_fixed():
    w = QW.omega()
    lam = BicharacterCocycle(QW, [[QW.one(), w], [w * w, QW.one()]])
    alg = TwistedGroupAlgebra(lam)
    theta = GradedInvolution(alg, QuadraticMapF2.zero(2), conjugate_coefficients=True)
    for s in box(2, 2):
        assert theta.is_fixed(alg.basis(s))
    # w-multiples are moved off the fixed space
    assert not theta.is_fixed(alg.basis(E1, w))
    assert involution_antiautomorphism_check(theta, 2).ok


def test_extension_type_symmetry_violation_rejected():
    w = QW.omega()
    lam = BicharacterCocycle(QW, [[QW.one(), w], [w, QW.one()]])
    alg = TwistedGroupAlgebra(lam)
    with pytest.raises(IncompatibleInvolutionError):
        GradedInvolution(alg, QuadraticMapF2.zero(2), conjugate_coefficients=True)


def test_theta_squares_are_central_for_compatible_pairs():
    # (x^s)^2 lands on 2s, and lambda_t(2s, .) = beta-parity 0  =>  central
    c = quantum([[1, -1], [-1, 1]], QQ)
    gamma = central_grading_group(c)
    for s in box(2, 2):
        assert gamma.contains(vadd(s, s))


def test_structure_constant_rows_ordering_and_roundtrip():
    c = omega_torus()
    rows = structure_constant_rows(c, 1)
    assert len(rows) == 81
    assert rows == sorted(rows, key=lambda r: (r[0], r[1]))
    table = TableCocycle(2, QW, {(s, t): lam for s, t, _, lam in rows})
    alg1, alg2 = TwistedGroupAlgebra(c), TwistedGroupAlgebra(table)
    for s in box(2, 1):
        for t in box(2, 1):
            p1 = alg1.basis(s) * alg1.basis(t)
            p2 = alg2.basis(s) * alg2.basis(t)
            assert list(p1.terms.values()) == list(p2.terms.values())
            assert p1.support() == p2.support()


def test_table_cocycle_out_of_window_errors():
    table = TableCocycle.from_cocycle(omega_torus(), 1)
    with pytest.raises(CocycleDomainError):
        table((5, 5), (0, 0))


def test_canonical_evaluator_agrees_with_scalar_route():
    # the exponent-form fast path must match value equality exactly
    c = quantum([[1, Scalar(QW, 0, 1).scale(Fraction(-2, 3))],
                 [Scalar(QW, 0, 1).scale(Fraction(-3, 2)) * QW.omega(), 1]], QW)
    key, mul = c.canonical_evaluator()
    win = list(box(2, 2))
    seen = {}
    for s in win:
        for t in win:
            k = key(s, t)
            v = c(s, t)
            if k in seen:
                assert seen[k] == v
            seen[k] = v
    # distinct keys give distinct values
    by_key = {}
    for s in win:
        for t in win:
            by_key.setdefault(key(s, t), set()).add(c(s, t).key())
    values_seen = [next(iter(v)) for v in by_key.values()]
    assert len(values_seen) == len(set(values_seen))
    # multiplication of keys matches multiplication of values
    pairs = [((1, 0), (0, 1)), ((1, 1), (-1, 2)), ((2, -1), (1, 1))]
    for (s1, t1), (s2, t2) in zip(pairs, reversed(pairs)):
        k = mul(key(s1, t1), key(s2, t2))
        v = c(s1, t1) * c(s2, t2)
        assert seen.get(k, v) == v


def test_canonical_evaluator_none_for_table():
    assert TableCocycle.from_cocycle(omega_torus(), 1).canonical_evaluator() is None


_LITS = ["1", "-1", "w", "w^-1", "w^2", "2", "1/3", "-2"]
_RECIP = {"1": "1", "-1": "-1", "w": "w^-1", "w^-1": "w", "w^2": "w",
          "2": "1/2", "1/3": "3", "-2": "-1/2"}


@st.composite
def quantum_matrices(draw):
    from toruslab.scalars import parse_scalar

    n = draw(st.integers(2, 3))
    entries = [[QW.one() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lit = draw(st.sampled_from(_LITS))
            entries[i][j] = parse_scalar(lit, QW)
            entries[j][i] = parse_scalar(_RECIP[lit], QW)
    return QuantumMatrix(entries)


@settings(max_examples=25, deadline=None)
@given(quantum_matrices())
def test_random_quantum_matrices_satisfy_cocycle_identity(q):
    c = QuantumCocycle(q)
    assert cocycle_identity_check(c, 1).ok
    # lambda_t diagonal is 1 and entries reappear on basis pairs
    for i in range(q.n):
        for j in range(q.n):
            ei = unit_vec(q.n, i)
            ej = unit_vec(q.n, j)
            assert commutation_factor(c, ei, ej) == q[i, j]


@settings(max_examples=15, deadline=None)
@given(quantum_matrices())
def test_random_quantum_central_lattice_matches_window_scan(q):
    c = QuantumCocycle(q)
    gamma = central_grading_group(c)
    es = [unit_vec(q.n, i) for i in range(q.n)]
    for s in box(q.n, 2):
        commutes = all(commutation_factor(c, s, e).is_one() for e in es)
        assert gamma.contains(s) == commutes
