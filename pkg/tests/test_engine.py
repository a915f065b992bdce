import numpy as np
import pytest

from signpat.checks import CHECKS, PatternContext, Role, Status, cover_interval_plan, run_checks
from signpat.errors import CapExceededError, PreconditionError
from signpat.engine import (
    ConsistentProven,
    InconsistentProven,
    Undetermined,
    classify_small_tridiagonal,
    census_mismatches,
    find_equivalence,
    realize_plan,
    sample_frequencies,
    verdict,
)
from signpat.fixtures import EXAMPLES, SMALL_PATH_TABLE, example
from signpat.pattern import (
    Negate,
    Permute,
    Sign,
    SignatureSimilarity,
    Transpose,
    apply_equivalence,
    negate_tree_edges,
    parse_pattern,
    tridiagonal_from_word,
)


def _w(s):
    return tuple(Sign.of(c) for c in s)


def _status(p, cid):
    return run_checks(PatternContext(p), [cid])[0]


# --------------------------------------------------------------------------
# individual checks


def test_check_ids_are_descriptive_and_unique():
    assert len(CHECKS) == len(set(CHECKS))
    assert all(cid.replace("_", "").isalpha() for cid in CHECKS)
    with pytest.raises(PreconditionError):
        run_checks(PatternContext(tridiagonal_from_word(_w("+"))), ["no_such_check"])


def test_odd_maximal_paths():
    r = _status(tridiagonal_from_word(_w("++-+")), "odd_maximal_paths")
    assert r.status is Status.VIOLATED and r.plan is not None
    assert _status(tridiagonal_from_word(_w("++--")), "odd_maximal_paths").status is Status.SATISFIED
    assert _status(example("star5_mixed").pattern, "odd_maximal_paths").status is Status.NOT_APPLICABLE


def test_forbidden_submatrices_plan_separates():
    p = example("path6_mixed").pattern
    r = _status(p, "forbidden_submatrices")
    assert r.status is Status.VIOLATED
    assert r.evidence["occurrences"][0] == {"subword": "+-+", "vertices": [2, 3, 4, 5]}
    (lo1, hi1), (lo2, hi2) = r.plan.predicted
    assert hi1 < lo2 or hi2 < lo1
    w1, w2 = realize_plan(p, r.plan)
    assert {w1.frequency.as_tuple(), w2.frequency.as_tuple()} == {(4, 2), (0, 6)}


def test_forbidden_long_subword():
    p = tridiagonal_from_word(_w("-+++-+"))
    r = _status(p, "forbidden_submatrices")
    assert r.status is Status.VIOLATED
    w1, w2 = realize_plan(p, r.plan)
    assert w1.frequency != w2.frequency


def test_zero_multiplicity_on_odd_paths():
    r = _status(example("path5_two_covers").pattern, "zero_multiplicity")
    assert r.status is Status.VIOLATED
    assert _status(tridiagonal_from_word(_w("++--")), "zero_multiplicity").status is Status.SATISFIED
    assert _status(tridiagonal_from_word(_w("+++")), "zero_multiplicity").status is Status.NOT_APPLICABLE


def test_adjacent_leaves():
    r = _status(example("star5_mixed").pattern, "adjacent_leaves")
    assert r.status is Status.VIOLATED
    assert r.evidence["centre"] == 1
    assert _status(example("star5_positive").pattern, "adjacent_leaves").status is Status.SATISFIED


def test_cycle_graph_check():
    for name in ("octagon", "cycle4_plus", "cycle4_one_plus", "cycle3_plus", "cycle9_three_odd_runs"):
        assert _status(example(name).pattern, "cycle_graph").status is Status.VIOLATED, name
    assert _status(example("cycle4_minus_tight").pattern, "cycle_graph").status is Status.SATISFIED


def test_sufficient_conditions_report_k():
    r = _status(example("star5_positive").pattern, "tree_symmetrization")
    assert r.role is Role.SUFFICIENT and r.status is Status.SATISFIED and r.proven_k == 5
    r = _status(tridiagonal_from_word(_w("----")), "tree_symmetrization")
    assert r.proven_k == 1
    r = _status(tridiagonal_from_word(_w("++-")), "small_path_table")
    assert r.status is Status.SATISFIED and r.proven_k == 2
    cyc = parse_pattern("0 - 0 0 +; + 0 - 0 0; 0 + 0 - 0; 0 0 + 0 -; - 0 0 + 0")
    r = _status(cyc, "all_negative_odd_cycle")
    assert r.status is Status.SATISFIED and r.proven_k == 1


def test_unicyclic_and_multicycle_checks():
    for name in ("unicyclic10_plus_cycle", "unicyclic10_odd_runs", "unicyclic9_plus_triangle"):
        r = _status(example(name).pattern, "unicyclic")
        assert r.status is Status.VIOLATED, name
    for name in ("bicycle7", "bicycle8"):
        assert _status(example(name).pattern, "multicycle").status is Status.VIOLATED, name
    assert _status(example("bicycle7").pattern, "unicyclic").status is Status.NOT_APPLICABLE


def test_cover_search_finds_split_cycle_plan():
    ctx = PatternContext(example("cycle4_minus_split").pattern)
    plan = cover_interval_plan(ctx)
    assert plan is not None
    w1, w2 = realize_plan(ctx.p, plan)
    assert w1.frequency != w2.frequency


def test_record_round_trip_fields():
    r = _status(example("star5_mixed").pattern, "adjacent_leaves")
    rec = r.to_record()
    assert rec["check_id"] == "adjacent_leaves"
    assert rec["status"] == "Violated"
    assert "plan" in rec


# --------------------------------------------------------------------------
# sampling


def test_sampling_is_deterministic_and_worker_independent():
    p = tridiagonal_from_word(_w("++-++"))
    a = sample_frequencies(p, 200, seed=5)
    b = sample_frequencies(p, 200, seed=5)
    c = sample_frequencies(p, 200, seed=5, workers=2)
    assert a.histogram == b.histogram == c.histogram
    assert sum(a.histogram.values()) == 200
    for k, m in a.exemplars.items():
        np.testing.assert_array_equal(m.values, c.exemplars[k].values)


def test_sampling_rejects_empty_count():
    with pytest.raises(PreconditionError):
        sample_frequencies(tridiagonal_from_word(_w("+")), 0)


def test_sampling_members_are_in_class():
    p = example("bicycle7").pattern
    s = sample_frequencies(p, 64)
    for m in s.exemplars.values():
        assert np.array_equal(np.sign(m.values), p.array)
        assert m.values[m.values != 0].__abs__().min() >= 1e-2


# --------------------------------------------------------------------------
# verdicts


def test_verdict_kinds_on_examples():
    kinds = {}
    for name, e in EXAMPLES.items():
        if "delta" in e.tags:
            continue
        kinds[name] = verdict(e.pattern, samples=100).verdict
    for name, v in kinds.items():
        tags = EXAMPLES[name].tags
        if "consistent" in tags:
            assert isinstance(v, ConsistentProven), name
        if "inconsistent" in tags:
            assert isinstance(v, InconsistentProven), name
    assert kinds["star5_positive"].frequency == (5, 0)
    assert kinds["cycle4_minus_tight"].frequency == (0, 4)
    assert kinds["cycle4_two_minus_tight"].frequency == (2, 2)


def test_verdict_without_sampling_or_fixtures_can_stay_open():
    v = verdict(tridiagonal_from_word(_w("++++-")), samples=0).verdict
    assert isinstance(v, Undetermined)
    assert v.summary["histogram"] == []
    assert "odd_maximal_paths" in v.summary["satisfied"]


def test_verdict_with_check_filter():
    rep = verdict(example("path6_mixed").pattern, samples=0, checks=["odd_maximal_paths"])
    assert [c.check_id for c in rep.checks] == ["odd_maximal_paths"]
    assert isinstance(rep.verdict, InconsistentProven)


def test_verdict_record_is_serialisable():
    import json

    rep = verdict(example("star5_mixed").pattern, samples=64)
    text = json.dumps(rep.to_record())
    assert "elapsed_seconds" not in text
    assert "elapsed_seconds" in json.dumps(rep.to_record(timing=True))


def test_verdict_beyond_cap_does_not_guess():
    p = tridiagonal_from_word(_w("+-" * 7))
    rep = verdict(p, samples=0, cap=10)
    assert rep.root_count is None
    assert not isinstance(rep.verdict, ConsistentProven)


# --------------------------------------------------------------------------
# census


def test_census_small_orders():
    for n in (2, 3, 4):
        rows = classify_small_tridiagonal(n, samples=100)
        assert not census_mismatches(rows)
        consistent = {r.word: r.report.verdict.frequency for r in rows if r.consistent}
        assert consistent == SMALL_PATH_TABLE[n]


def test_census_order_bounds():
    with pytest.raises(PreconditionError):
        classify_small_tridiagonal(7)


# --------------------------------------------------------------------------
# equivalence


def test_find_equivalence_recovers_operations():
    p = example("bicycle7").pattern
    ops = [Permute((3, 0, 6, 2, 5, 1, 4)), SignatureSimilarity((1, -1, 1, 1, -1, -1, 1)), Transpose(), Negate()]
    q = apply_equivalence(parse_pattern(str(p)), *ops)
    with pytest.raises(CapExceededError):
        find_equivalence(p, q)
    small = example("tree5").pattern
    q = apply_equivalence(small, Permute((4, 2, 0, 1, 3)), SignatureSimilarity((1, -1, -1, 1, 1)), Negate())
    found = find_equivalence(small, q)
    assert found is not None
    assert apply_equivalence(small, *found) == q


def test_tree_and_flipped_tree_are_not_equivalent():
    p = example("tree5").pattern
    assert find_equivalence(p, negate_tree_edges(p)) is None
    assert negate_tree_edges(p) == example("tree5_flipped").pattern
