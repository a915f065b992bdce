import numpy as np
import pytest

from signpat.errors import CapExceededError, PatternParseError, PreconditionError
from signpat.pattern import (
    Negate,
    Permute,
    QMatrix,
    Sign,
    SignatureSimilarity,
    SignPattern,
    SingularityClass,
    StructuralClass,
    Transpose,
    apply_equivalence,
    canonical_words,
    edge_signs,
    is_irreducible,
    max_zero_submatrix,
    negate_tree_edges,
    parse_pattern,
    parse_patterns,
    path_order,
    pattern_from_edges,
    render_pattern,
    singularity_class,
    structural_class,
    submatrix,
    tridiagonal_canonical_form,
    tridiagonal_from_word,
)


def _w(s):
    return tuple(Sign.of(c) for c in s)


def test_sign_arithmetic_and_order():
    assert Sign.MINUS * Sign.MINUS is Sign.PLUS
    assert -Sign.PLUS is Sign.MINUS
    assert Sign.ZERO < Sign.PLUS < Sign.MINUS
    assert Sign.of(-2.5) is Sign.MINUS
    assert Sign.of("0") is Sign.ZERO
    with pytest.raises(ValueError):
        Sign.of("x")


def test_parse_round_trip():
    text = "0 + 0\n- 0 +\n0 - 0"
    p = parse_pattern(text)
    assert render_pattern(p) == text
    assert parse_pattern("0 + 0; - 0 +; 0 - 0  # comment") == p
    assert p[1, 0] is Sign.MINUS


def test_parse_reports_location():
    with pytest.raises(PatternParseError) as exc:
        parse_pattern("0 +\n+ x")
    assert (exc.value.row, exc.value.col) == (2, 2)
    with pytest.raises(PatternParseError):
        parse_pattern("0 + 0\n+ 0")
    with pytest.raises(PatternParseError):
        parse_pattern("0 +\n+ 0\n0 0")
    with pytest.raises(PatternParseError):
        parse_pattern("  # nothing\n")


def test_parse_patterns_splits_on_blank_lines():
    ps = parse_patterns("0 +\n+ 0\n\n+\n")
    assert [p.n for p in ps] == [2, 1]


def test_qmatrix_rejects_wrong_signs():
    p = parse_pattern("0 +; - 0")
    QMatrix(p, [[0, 2], [-3, 0]])
    with pytest.raises(PreconditionError, match=r"entry \(2, 1\)"):
        QMatrix(p, [[0, 2], [3, 0]])
    with pytest.raises(PreconditionError):
        QMatrix(p, [[0, np.inf], [-1, 0]])


def test_patterns_are_hashable_values():
    a = parse_pattern("+ -; 0 +")
    b = SignPattern([[1, -1], [0, 1]])
    assert a == b and hash(a) == hash(b)
    with pytest.raises(ValueError):
        a.array[0, 0] = 0


def test_structural_classes():
    assert structural_class(tridiagonal_from_word(_w("+-+"))) is StructuralClass.TRIDIAGONAL_0DIAG
    star = pattern_from_edges(4, {(0, 1): "+", (0, 2): "+", (0, 3): "-"})
    assert structural_class(star) is StructuralClass.TREE_0DIAG
    cyc = pattern_from_edges(4, {(0, 1): "+", (1, 2): "+", (2, 3): "+", (0, 3): "-"})
    assert structural_class(cyc) is StructuralClass.CYCLE_0DIAG
    uni = pattern_from_edges(4, {(0, 1): "+", (1, 2): "+", (0, 2): "+", (2, 3): "-"})
    assert structural_class(uni) is StructuralClass.UNICYCLIC_0DIAG
    assert structural_class(parse_pattern("+ +; + 0")) is StructuralClass.GENERAL


def test_path_order_of_relabelled_path():
    p = pattern_from_edges(4, {(2, 0): "+", (0, 3): "-", (3, 1): "+"})
    assert path_order(p) == [1, 3, 0, 2]
    assert path_order(tridiagonal_from_word(_w("++"))) == [0, 1, 2]


def test_irreducibility():
    assert is_irreducible(parse_pattern("0 +; + 0"))
    assert not is_irreducible(parse_pattern("+ +; 0 +"))


def test_edge_signs_are_products():
    p = parse_pattern("0 -; - 0")
    assert edge_signs(p) == {(0, 1): Sign.PLUS}


def test_equivalence_operations():
    p = parse_pattern("+ - 0; 0 0 +; + 0 -")
    q = apply_equivalence(p, Permute((2, 0, 1)))
    assert q[0, 0] is Sign.MINUS
    assert apply_equivalence(p, Negate()) == SignPattern(-p.array)
    assert apply_equivalence(p, Transpose()) == SignPattern(p.array.T)
    s = apply_equivalence(p, SignatureSimilarity((1, -1, 1)))
    assert s[0, 1] is Sign.PLUS and s[0, 0] is Sign.PLUS
    with pytest.raises(PreconditionError):
        Permute((0, 0, 1))
    with pytest.raises(PreconditionError):
        apply_equivalence(p, Permute((1, 0)))


def test_equivalence_on_qmatrix_keeps_spectrum():
    m = QMatrix.from_values([[1.0, -2.0, 0.0], [0.0, 0.0, 3.0], [4.0, 0.0, -5.0]])
    r = apply_equivalence(m, Permute((1, 2, 0)), SignatureSimilarity((1, -1, -1)), Transpose())
    np.testing.assert_allclose(np.sort_complex(np.linalg.eigvals(m.values)), np.sort_complex(np.linalg.eigvals(r.values)))


def test_negate_tree_edges():
    p = tridiagonal_from_word(_w("+-"))
    assert tridiagonal_canonical_form(negate_tree_edges(p)) == _w("+-")
    assert edge_signs(negate_tree_edges(p)) == {(0, 1): Sign.MINUS, (1, 2): Sign.PLUS}
    with pytest.raises(PreconditionError):
        negate_tree_edges(parse_pattern("+ +; + +"))


def test_submatrix():
    p = parse_pattern("+ - 0; 0 0 +; + 0 -")
    assert submatrix(p, [0, 2], [0, 2]) == parse_pattern("+ 0; + -")
    with pytest.raises(PreconditionError):
        submatrix(p, [3], [0])


def test_singularity_classes():
    assert singularity_class(parse_pattern("0 +; + 0")) is SingularityClass.SIGN_NONSINGULAR
    assert singularity_class(parse_pattern("+ +; + +")) is SingularityClass.ALLOWS_SINGULARITY
    assert singularity_class(parse_pattern("0 +; 0 +")) is SingularityClass.SIGN_SINGULAR
    # odd zero-diagonal paths have no perfect matching
    assert singularity_class(tridiagonal_from_word(_w("++"))) is SingularityClass.SIGN_SINGULAR
    with pytest.raises(CapExceededError):
        singularity_class(tridiagonal_from_word(_w("+" * 13)))


def test_canonical_words_counts():
    # words up to reversal: (2^(n-1) + 2^ceil((n-1)/2)) / 2
    for n in range(2, 8):
        expect = (2 ** (n - 1) + 2 ** ((n) // 2)) // 2
        assert len(canonical_words(n)) == expect
    assert tridiagonal_canonical_form(tridiagonal_from_word(_w("-++"))) == _w("++-")


def test_max_zero_submatrix_threshold():
    p = parse_pattern("+ 0 0 0; + 0 0 0; + 0 0 0; + + + +")
    assert max_zero_submatrix(p)[0] == 6
    q = parse_pattern("0 0 0 0; 0 0 0 0; 0 0 0 0; + + + +")
    best, rows, cols = max_zero_submatrix(q)
    assert best == 7
    assert all(q[i, j] is Sign.ZERO for i in rows for j in cols)
