import numpy as np
import pytest
import sympy

from signpat.errors import CapExceededError, NumericalFailure, PreconditionError
from signpat.fixtures import example
from signpat.pattern import Sign, parse_pattern, pattern_from_edges, tridiagonal_from_word
from signpat.spectral import (
    CoeffSignVector,
    CoeffStatus,
    EigenFrequency,
    Exactly,
    Range,
    char_poly_coeffs,
    coeff_sign_vector,
    eigen_frequency,
    exact_real_eigenvalue_count,
    forced_real_root_count,
    inertia,
    sign_changes,
    structural_zero_count,
)

P, M, Z, Q = CoeffStatus.PLUS, CoeffStatus.MINUS, CoeffStatus.ZERO, CoeffStatus.INDETERMINATE


def _w(s):
    return tuple(Sign.of(c) for c in s)


def test_frequency_of_trivial_matrices():
    assert eigen_frequency(np.zeros((1, 1)))[0] == EigenFrequency(1, 0)
    assert eigen_frequency(np.eye(3))[0] == EigenFrequency(3, 0)
    assert eigen_frequency([[0, -1], [1, 0]])[0] == EigenFrequency(0, 2)


def test_frequency_rejects_bad_input():
    with pytest.raises(PreconditionError):
        eigen_frequency(np.zeros((2, 3)))
    with pytest.raises(NumericalFailure):
        eigen_frequency([[np.nan]])


def test_structural_zeros_deflated():
    # odd path: one zero eigenvalue in every member, never split into a pair
    p = tridiagonal_from_word(_w("+-+-"))
    assert structural_zero_count(p) == 1
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = p.array * 10.0 ** rng.uniform(-2, 2, size=p.shape)
        freq, eigs = eigen_frequency(v, structural_zeros=1)
        assert freq.i_r % 2 == 1
        assert np.min(np.abs(eigs)) < 1e-8


def test_defective_double_zero_resolved_exactly():
    _, (_, b) = example("cycle4_two_minus_split").qmatrices()
    freq, _ = eigen_frequency(b)
    assert freq.as_tuple() == (2, 2)
    assert freq.exact and not freq.borderline


def test_exact_count_matches_sympy():
    rng = np.random.default_rng(7)
    x = sympy.symbols("x")
    for _ in range(40):
        n = int(rng.integers(1, 6))
        a = rng.integers(-3, 4, size=(n, n))
        cp = sympy.Matrix(a.tolist()).charpoly(x).as_expr()
        want = len(sympy.real_roots(cp))
        assert exact_real_eigenvalue_count(a) == want, a


def test_exact_count_with_repeated_roots():
    assert exact_real_eigenvalue_count(np.eye(3)) == 3
    assert exact_real_eigenvalue_count([[0, 1], [0, 0]]) == 2
    assert exact_real_eigenvalue_count([[0, -1], [1, 0]]) == 0
    assert exact_real_eigenvalue_count([[0.5, 0.25], [0, 0.5]]) == 2


def test_inertia_examples():
    assert inertia([[0, -1], [1, 0]]).as_tuple() == (0, 0, 2)
    assert inertia([[0, 1], [1, 0]]).as_tuple() == (1, 1, 0)
    assert inertia(np.eye(3)).as_tuple() == (3, 0, 0)


def test_char_poly_examples():
    a = [[0, -1, 0, -1], [1, 0, -1, 0], [0, 1, 0, -1], [1, 0, 1, 0]]
    np.testing.assert_allclose(char_poly_coeffs(a), [1, 0, 4, 0, 4], atol=1e-12)
    np.testing.assert_allclose(char_poly_coeffs(np.diag([1.0, 2.0, 3.0])), [1, 6, 11, 6])


def test_char_poly_routes_agree():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(7, 7))
    np.testing.assert_allclose(char_poly_coeffs(a, "minors"), char_poly_coeffs(a, "traces"), rtol=1e-8, atol=1e-10)
    big = rng.normal(size=(18, 18))
    with pytest.raises(CapExceededError):
        char_poly_coeffs(big, "minors")
    assert char_poly_coeffs(big).shape == (19,)


def test_coeff_sign_vector_examples():
    v = coeff_sign_vector(tridiagonal_from_word(_w("++-")))
    assert v.statuses == (Z, Q, Z, M)
    assert str(v) == "(0,?,0,-)"
    cyc5 = pattern_from_edges(5, {(i, (i + 1) % 5): "-" for i in range(5)})
    assert coeff_sign_vector(cyc5).statuses == (Z, P, Z, P, Q)
    nil = parse_pattern("0 + +; 0 0 +; 0 0 0")
    assert coeff_sign_vector(nil).statuses == (Z, Z, Z)


def test_forced_count_examples():
    assert forced_real_root_count(CoeffSignVector((Z, Z, Z))).unique == (0, 0, 3)
    rc = forced_real_root_count(CoeffSignVector((Z, Q, Z, M)), 4)
    assert isinstance(rc, Exactly) and rc.unique == (1, 1, 0)
    with pytest.raises(PreconditionError):
        forced_real_root_count(CoeffSignVector((Z, Q)), 3)
    with pytest.raises(CapExceededError):
        forced_real_root_count(CoeffSignVector((Q,) * 5), cap=4)


def test_forced_count_on_odd_mixed_path_includes_zero_root():
    # the characteristic polynomial is x times an even quartic with one
    # positive and one negative root
    rc = forced_real_root_count(coeff_sign_vector(tridiagonal_from_word(_w("++--"))), 5)
    assert isinstance(rc, Exactly) and rc.unique == (1, 1, 1)
    assert rc.real_count == 3


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_forced_count_on_uniform_paths(n):
    rng = np.random.default_rng(n)
    pos = tridiagonal_from_word((Sign.PLUS,) * (n - 1))
    neg = tridiagonal_from_word((Sign.MINUS,) * (n - 1))
    truth_pos = n
    truth_neg = n % 2
    rc = forced_real_root_count(coeff_sign_vector(neg), n)
    assert isinstance(rc, Exactly) and rc.real_count == truth_neg
    rc = forced_real_root_count(coeff_sign_vector(pos), n)
    if isinstance(rc, Exactly):
        assert rc.real_count == truth_pos
    else:
        assert isinstance(rc, Range)
        assert rc.positive[0] + rc.negative[0] + rc.zero[0] <= truth_pos
        assert truth_pos <= rc.positive[1] + rc.negative[1] + rc.zero[1]
    v = pos.array * 10.0 ** rng.uniform(-1, 1, size=pos.shape)
    assert eigen_frequency(v)[0].i_r == truth_pos


def test_sign_changes_ignores_zeros():
    assert sign_changes([1, 0, -1, 0, 1]) == 2
    assert sign_changes([0, 0]) == 0
