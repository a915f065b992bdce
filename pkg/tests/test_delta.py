import json

import pytest

from signpat.checks import Status
from signpat.delta import (
    DeltaOutcome,
    delta_allows_singularity,
    delta_core_lemmas,
    delta_sign_nonsingular,
    delta_sign_singular,
    delta_verdict,
)
from signpat.fixtures import example
from signpat.pattern import Sign, SingularityClass, parse_pattern, singularity_class, tridiagonal_from_word

BATTERIES = {
    "sign_singular": "delta_singular_",
    "allows_singularity": "delta_allows_",
    "sign_nonsingular": "delta_nonsingular_",
}


def _statuses(results):
    return {r.check_id: r.status for r in results}


def test_battery_ids_and_sizes():
    p = example("singular4").pattern
    assert len(delta_core_lemmas(p)) == 2
    assert len(delta_sign_singular(p)) == 6
    assert len(delta_allows_singularity(p)) == 4
    assert len(delta_sign_nonsingular(p)) == 4
    for fn, prefix in (
        (delta_sign_singular, "delta_singular_"),
        (delta_allows_singularity, "delta_allows_"),
        (delta_sign_nonsingular, "delta_nonsingular_"),
        (delta_core_lemmas, "delta_core_"),
    ):
        assert all(r.check_id.startswith(prefix) for r in fn(p))


@pytest.mark.parametrize(
    "name,cls",
    [
        ("singular4", SingularityClass.SIGN_SINGULAR),
        ("allows4", SingularityClass.ALLOWS_SINGULARITY),
        ("nonsingular4", SingularityClass.SIGN_NONSINGULAR),
    ],
)
def test_routing_is_exclusive(name, cls):
    p = example(name).pattern
    assert singularity_class(p) is cls
    rep = delta_verdict(p, samples=0)
    assert rep.singularity is cls
    prefixes = {pre for b, pre in BATTERIES.items() if b != rep.battery}
    for c in rep.conditions:
        assert not any(c.check_id.startswith(pre) for pre in prefixes)
    assert any(c.check_id.startswith(BATTERIES[rep.battery]) for c in rep.conditions)


def test_nonsingular_fixture_fails_positive_even_cover():
    rep = delta_verdict(example("nonsingular4").pattern, samples=0)
    st = _statuses(rep.conditions)
    assert st["delta_core_positive_even_cover"] is Status.VIOLATED
    assert rep.outcome is DeltaOutcome.NOT_IN_DELTA
    assert rep.evidence.startswith("delta_core_positive_even_cover")
    assert rep.witness.frequency.i_r != 2


def test_tabulated_members_settle_singular_fixtures():
    for name in ("singular4", "allows4"):
        rep = delta_verdict(example(name).pattern, samples=0)
        assert all(c.status is Status.SATISFIED for c in rep.conditions)
        assert rep.outcome is DeltaOutcome.NOT_IN_DELTA
        assert rep.witness.frequency.as_tuple() == (4, 0)


def test_mixed_path_of_order_four_may_be_in_delta():
    p = tridiagonal_from_word((Sign.PLUS, Sign.PLUS, Sign.MINUS))
    rep = delta_verdict(p, samples=200)
    assert rep.outcome is DeltaOutcome.POSSIBLY_IN_DELTA
    assert set(rep.histogram) == {(2, 2)}
    assert rep.witness is None


def test_single_positive_entry_is_not_in_delta():
    rep = delta_verdict(parse_pattern("+"), samples=64)
    assert rep.battery == "sign_nonsingular"
    assert rep.outcome is DeltaOutcome.NOT_IN_DELTA
    assert rep.witness.frequency.as_tuple() == (1, 0)


def test_zero_submatrix_threshold():
    # a 3x3 zero block in order 4 sits exactly on the bound
    on_bound = parse_pattern("0 0 0 +; 0 0 0 +; 0 0 0 +; + + + +")
    r = [c for c in delta_sign_singular(on_bound) if c.check_id == "delta_singular_zero_submatrix"][0]
    assert r.status is Status.SATISFIED and r.evidence["max_p_plus_q"] == 6
    over = parse_pattern("0 0 0 0; 0 0 0 0; 0 0 0 0; + + + +")
    r = [c for c in delta_sign_singular(over) if c.check_id == "delta_singular_zero_submatrix"][0]
    assert r.status is Status.VIOLATED and r.evidence["max_p_plus_q"] == 7


def test_zero_pattern_is_not_in_delta():
    rep = delta_verdict(parse_pattern("0 0 0; 0 0 0; 0 0 0"), samples=0)
    assert rep.battery == "sign_singular"
    assert rep.outcome is DeltaOutcome.NOT_IN_DELTA
    assert rep.witness.frequency.as_tuple() == (3, 0)


def test_record_tags_core_conditions():
    rec = delta_verdict(example("nonsingular4").pattern, samples=0).to_record()
    json.dumps(rec)
    assert rec["type"] == "delta" and rec["outcome"] == "NotInDelta"
    batteries = {c["check_id"]: c["battery"] for c in rec["conditions"]}
    assert batteries["delta_core_positive_even_cover"] == "core"
    assert batteries["delta_nonsingular_full_cover_signs"] == "sign_nonsingular"


def test_beyond_cap_is_not_computed():
    p = tridiagonal_from_word((Sign.PLUS,) * 13)
    rep = delta_verdict(p, samples=0, cap=12)
    assert rep.outcome is DeltaOutcome.NOT_COMPUTED
