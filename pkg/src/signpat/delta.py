"""Necessary conditions for 2-consistency.

A pattern is 2-consistent when every member of its class has exactly two
real eigenvalues. The conditions here are necessary only, so the strongest
positive outcome is ``PossiblyInDelta``. Which battery applies depends on
whether the pattern is sign singular, sign nonsingular, or allows
singularity.

Cycle signs follow the convention of :class:`signpat.graphs.SimpleCycle`:
``(-1)**(l-1)`` times the product of the arc signs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .checks import CheckResult, Role, Status
from .engine import DEFAULT_SAMPLES, DEFAULT_SEED, sample_frequencies
from .errors import CalibrationError, CapExceededError
from .fixtures import known_members
from .graphs import CompositeCycle, SignedDigraph, SimpleCycle, composite_cycles, composite_signs_by_length
from .pattern import QMatrix, SignPattern, SingularityClass, max_zero_submatrix, render_pattern, singularity_class
from .witness import WitnessMatrix, WitnessRecipe, calibrate, composite_recipe, simple_recipe

__all__ = [
    "DeltaOutcome",
    "DeltaReport",
    "delta_core_lemmas",
    "delta_sign_singular",
    "delta_allows_singularity",
    "delta_sign_nonsingular",
    "delta_verdict",
]


class DeltaOutcome(enum.Enum):
    POSSIBLY_IN_DELTA = "PossiblyInDelta"
    NOT_IN_DELTA = "NotInDelta"
    NOT_COMPUTED = "NotComputed"


@dataclass
class DeltaReport:
    pattern: SignPattern
    singularity: SingularityClass | None
    battery: str
    conditions: list[CheckResult]
    outcome: DeltaOutcome
    evidence: str = ""
    witness: WitnessMatrix | None = None
    histogram: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "type": "delta",
            "pattern": render_pattern(self.pattern),
            "singularity": self.singularity.value if self.singularity else None,
            "battery": self.battery,
            "conditions": [dict(c.to_record(), battery=_battery_of(c, self.battery)) for c in self.conditions],
            "outcome": self.outcome.value,
            "evidence": self.evidence,
            "witness": self.witness.to_record() if self.witness else None,
            "histogram": [[list(k), v] for k, v in sorted(self.histogram.items(), reverse=True)],
        }


def _battery_of(c: CheckResult, battery: str) -> str:
    return "core" if c.check_id.startswith("delta_core") else battery


def _cyc(c: SimpleCycle) -> dict:
    return {"cycle": [v + 1 for v in c.vertices], "sign": c.cycle_sign.symbol}


def _ok(cid: str, rule: str, **ev) -> CheckResult:
    return CheckResult(cid, rule, Role.NECESSARY, Status.SATISFIED, ev)


def _bad(cid: str, rule: str, recipe: WitnessRecipe | None = None, **ev) -> CheckResult:
    return CheckResult(cid, rule, Role.NECESSARY, Status.VIOLATED, ev, witness_recipe=recipe)


def _not_computed(cid: str, rule: str, why: str) -> CheckResult:
    return CheckResult(cid, rule, Role.NECESSARY, Status.NOT_COMPUTED, {"reason": why})


def _negative_even(c: SimpleCycle) -> bool:
    return c.length % 2 == 0 and c.cycle_sign.value < 0


def _disjoint_odd_pair(cycles: list[SimpleCycle], same_sign: bool | None = None):
    """First pair of vertex-disjoint odd cycles, optionally of equal or opposite sign."""
    odd = [c for c in cycles if c.is_odd]
    for i, a in enumerate(odd):
        for b in odd[i + 1 :]:
            if a.mask & b.mask:
                continue
            if same_sign is None or (a.cycle_sign == b.cycle_sign) == same_sign:
                return a, b
    return None


def _signs_by_length(d: SignedDigraph, cap: int) -> dict[int, set[int]]:
    return composite_signs_by_length(d, cap)


# --------------------------------------------------------------------------
# core conditions


RULE_COMPLEMENT = "off a negative even cycle there is no negative even cycle and no odd cycle"
RULE_POSITIVE_COVER = "no full-length composite cycle consists only of positive even cycles"


def delta_core_lemmas(p: SignPattern, cap: int = 12) -> list[CheckResult]:
    cid1, cid2 = "delta_core_even_cycle_complement", "delta_core_positive_even_cover"
    if p.n > cap:
        return [_not_computed(cid1, RULE_COMPLEMENT, "order exceeds cap"), _not_computed(cid2, RULE_POSITIVE_COVER, "order exceeds cap")]
    d = SignedDigraph(p)
    out = []
    hit = None
    for g in d.cycles:
        if not _negative_even(g):
            continue
        for a in d.cycles:
            if a.mask & g.mask:
                continue
            if _negative_even(a) or a.is_odd:
                hit = (g, a)
                break
        if hit:
            break
    if hit:
        g, a = hit
        out.append(_bad(cid1, RULE_COMPLEMENT, composite_recipe(CompositeCycle((g, a))), negative_even=_cyc(g), other=_cyc(a)))
    else:
        out.append(_ok(cid1, RULE_COMPLEMENT))
    cover = None
    for gam in composite_cycles(d, exact_len=p.n, cap=cap):
        if all(c.length % 2 == 0 and c.cycle_sign.value > 0 for c in gam.parts):
            cover = gam
            break
    if cover is not None:
        out.append(_bad(cid2, RULE_POSITIVE_COVER, composite_recipe(cover), cover=str(cover)))
    else:
        out.append(_ok(cid2, RULE_POSITIVE_COVER))
    return out


# --------------------------------------------------------------------------
# sign singular


RS1 = "every even cycle is nonnegative"
RS2 = "every p x q zero submatrix has p + q <= n + 2"
RS3 = "off an odd cycle there is no odd cycle"
RS4 = "without composite cycles of length n-1, all cycles are even and nonnegative and some composite has length n-2"
RS5 = "when all composite cycles of length n-1 share a sign, all odd cycles share a sign"
RS6 = "when composite cycles of length n-1 of both signs exist, some composite has length n-2"


def delta_sign_singular(p: SignPattern, cap: int = 12, zero_cap: int = 10) -> list[CheckResult]:
    n = p.n
    ids = [f"delta_singular_{x}" for x in ("even_cycles_nonnegative", "zero_submatrix", "odd_cycle_complement", "no_near_full_cover", "odd_cycle_signs", "opposite_near_covers")]
    if n > cap:
        return [_not_computed(c, r, "order exceeds cap") for c, r in zip(ids, (RS1, RS2, RS3, RS4, RS5, RS6))]
    d = SignedDigraph(p)
    by_len = _signs_by_length(d, cap)
    out = []

    neg_even = next((c for c in d.cycles if _negative_even(c)), None)
    if neg_even:
        out.append(_bad(ids[0], RS1, simple_recipe(neg_even), cycle=_cyc(neg_even)))
    else:
        out.append(_ok(ids[0], RS1))

    try:
        pq, rows, cols = max_zero_submatrix(p, zero_cap)
        ev = {"max_p_plus_q": pq, "rows": [r + 1 for r in rows], "cols": [c + 1 for c in cols]}
        out.append(_bad(ids[1], RS2, **ev) if pq > n + 2 else _ok(ids[1], RS2, **ev))
    except CapExceededError as exc:
        out.append(_not_computed(ids[1], RS2, str(exc)))

    pair = _disjoint_odd_pair(d.cycles)
    if pair:
        out.append(_bad(ids[2], RS3, composite_recipe(CompositeCycle(pair)), odd_cycles=[_cyc(c) for c in pair]))
    else:
        out.append(_ok(ids[2], RS3))

    if n - 1 not in by_len:
        offender = next((c for c in d.cycles if c.is_odd or _negative_even(c)), None)
        if offender is not None:
            out.append(_bad(ids[3], RS4, simple_recipe(offender), cycle=_cyc(offender)))
        elif n - 2 not in by_len:
            out.append(_bad(ids[3], RS4, None, missing_length=n - 2))
        else:
            out.append(_ok(ids[3], RS4))
    else:
        out.append(_ok(ids[3], RS4, hypothesis="a composite cycle of length n-1 exists"))

    near = by_len.get(n - 1, set())
    odd = [c for c in d.cycles if c.is_odd]
    if len(near) == 1 and len({c.cycle_sign for c in odd}) > 1:
        pos = next(c for c in odd if c.cycle_sign.value > 0)
        neg = next(c for c in odd if c.cycle_sign.value < 0)
        out.append(_bad(ids[4], RS5, None, odd_cycles=[_cyc(pos), _cyc(neg)]))
    else:
        out.append(_ok(ids[4], RS5, near_full_signs=sorted(near)))

    if len(near) == 2 and n - 2 not in by_len:
        out.append(_bad(ids[5], RS6, None, missing_length=n - 2))
    else:
        out.append(_ok(ids[5], RS6, near_full_signs=sorted(near)))
    return out


# --------------------------------------------------------------------------
# allows singularity


RA1 = "full-length composite cycles of both signs exist"
RA2 = "without composite cycles of length n-1 some composite has length n-2"
RA3 = "there is a negative even cycle or two disjoint odd cycles of opposite sign"
RA4 = "there are two disjoint odd cycles of the same sign"


def delta_allows_singularity(p: SignPattern, cap: int = 12) -> list[CheckResult]:
    n = p.n
    ids = [f"delta_allows_{x}" for x in ("opposite_full_covers", "cover_gap", "negative_even_or_opposite_odd", "same_sign_odd_pair")]
    if n > cap:
        return [_not_computed(c, r, "order exceeds cap") for c, r in zip(ids, (RA1, RA2, RA3, RA4))]
    d = SignedDigraph(p)
    by_len = _signs_by_length(d, cap)
    out = []
    full = by_len.get(n, set())
    out.append(_ok(ids[0], RA1) if len(full) == 2 else _bad(ids[0], RA1, None, full_signs=sorted(full)))
    if n - 1 not in by_len and n - 2 not in by_len:
        out.append(_bad(ids[1], RA2, None, missing_lengths=[n - 1, n - 2]))
    else:
        out.append(_ok(ids[1], RA2))
    neg_even = next((c for c in d.cycles if _negative_even(c)), None)
    opp = _disjoint_odd_pair(d.cycles, same_sign=False)
    if neg_even:
        out.append(_ok(ids[2], RA3, negative_even=_cyc(neg_even)))
    elif opp:
        out.append(_ok(ids[2], RA3, odd_cycles=[_cyc(c) for c in opp]))
    else:
        out.append(_bad(ids[2], RA3, None))
    same = _disjoint_odd_pair(d.cycles, same_sign=True)
    out.append(_ok(ids[3], RA4, odd_cycles=[_cyc(c) for c in same]) if same else _bad(ids[3], RA4, None))
    return out


# --------------------------------------------------------------------------
# sign nonsingular


RN1 = "all full-length composite cycles share a sign"
RN2 = "there is a negative even cycle or two disjoint odd cycles"
RN3 = "a negative even cycle excludes two disjoint odd cycles of the same sign"
RN4 = "for a full-length composite containing an odd cycle, odd cycles on its vertices share its sign"


def delta_sign_nonsingular(p: SignPattern, cap: int = 12) -> list[CheckResult]:
    n = p.n
    ids = [f"delta_nonsingular_{x}" for x in ("full_cover_signs", "even_or_odd_pair", "even_excludes_odd_pair", "odd_cycle_signs")]
    if n > cap:
        return [_not_computed(c, r, "order exceeds cap") for c, r in zip(ids, (RN1, RN2, RN3, RN4))]
    d = SignedDigraph(p)
    by_len = _signs_by_length(d, cap)
    out = []
    full = by_len.get(n, set())
    out.append(_ok(ids[0], RN1, full_signs=sorted(full)) if len(full) == 1 else _bad(ids[0], RN1, None, full_signs=sorted(full)))
    neg_even = next((c for c in d.cycles if _negative_even(c)), None)
    any_pair = _disjoint_odd_pair(d.cycles)
    if neg_even:
        out.append(_ok(ids[1], RN2, negative_even=_cyc(neg_even)))
    elif any_pair:
        out.append(_ok(ids[1], RN2, odd_cycles=[_cyc(c) for c in any_pair]))
    else:
        out.append(_bad(ids[1], RN2, None))
    same = _disjoint_odd_pair(d.cycles, True)
    if neg_even and same:
        out.append(_bad(ids[2], RN3, None, negative_even=_cyc(neg_even), odd_cycles=[_cyc(c) for c in same]))
    else:
        out.append(_ok(ids[2], RN3))
    found = None
    for gam in composite_cycles(d, exact_len=n, cap=cap):
        for g in gam.parts:
            if not g.is_odd:
                continue
            for c in d.cycles:
                if c.is_odd and not (c.mask & ~g.mask) and c.cycle_sign != g.cycle_sign:
                    found = (gam, g, c)
                    break
            if found:
                break
        if found:
            break
    if found:
        gam, g, c = found
        out.append(_bad(ids[3], RN4, None, cover=str(gam), odd_cycle=_cyc(g), opposite=_cyc(c)))
    else:
        out.append(_ok(ids[3], RN4))
    return out


# --------------------------------------------------------------------------
# verdict


def _witness_from(p: SignPattern, results: list[CheckResult]) -> tuple[WitnessMatrix | None, str, list[str]]:
    failures = []
    for r in results:
        recipe = r.witness_recipe
        if r.status is not Status.VIOLATED or recipe is None:
            continue
        try:
            w = calibrate(p, recipe)
        except CalibrationError as exc:
            failures.append(f"{r.check_id}: {exc}")
            continue
        w.reverify()
        if w.frequency.i_r != 2:
            return w, r.check_id, failures
    if p.n > 0:
        unit = QMatrix(p, p.array.astype(float))
        for r in results:
            if r.status is Status.VIOLATED and r.check_id == "delta_singular_no_near_full_cover":
                w = WitnessMatrix.from_matrix(unit, "unit magnitudes")
                if w.frequency.i_r != 2:
                    return w, r.check_id, failures
    return None, "", failures


def delta_verdict(
    p: SignPattern, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, cap: int = 12, workers: int = 1
) -> DeltaReport:
    """Route to the matching battery, then look for a member with ``i_r != 2``."""
    try:
        sc = singularity_class(p, cap)
    except CapExceededError:
        return DeltaReport(p, None, "none", [], DeltaOutcome.NOT_COMPUTED, "order exceeds cap")
    battery = {
        SingularityClass.SIGN_SINGULAR: ("sign_singular", delta_sign_singular),
        SingularityClass.ALLOWS_SINGULARITY: ("allows_singularity", delta_allows_singularity),
        SingularityClass.SIGN_NONSINGULAR: ("sign_nonsingular", delta_sign_nonsingular),
    }[sc]
    results = delta_core_lemmas(p, cap) + battery[1](p, cap)
    hist = sample_frequencies(p, samples, seed, workers, cap) if samples > 0 else None
    rep = DeltaReport(p, sc, battery[0], results, DeltaOutcome.POSSIBLY_IN_DELTA, histogram=hist.histogram if hist else {})

    w, source, failures = _witness_from(p, results)
    if w is not None:
        rep.outcome, rep.witness = DeltaOutcome.NOT_IN_DELTA, w
        rep.evidence = f"{source}: constructed member with frequency {w.frequency}"
        return rep
    for label, m in known_members(p):
        cand = WitnessMatrix.from_matrix(m, label)
        if cand.frequency.i_r != 2:
            rep.outcome, rep.witness = DeltaOutcome.NOT_IN_DELTA, cand
            rep.evidence = f"tabulated member {label} with frequency {cand.frequency}"
            return rep
    if hist is not None:
        off = [k for k in sorted(hist.histogram, reverse=True) if k[0] != 2]
        if off:
            cand = WitnessMatrix.from_matrix(hist.exemplars[off[0]], f"sample seed={seed}")
            rep.outcome, rep.witness = DeltaOutcome.NOT_IN_DELTA, cand
            rep.evidence = f"sampled member with frequency {cand.frequency}"
            return rep
    violated = [r.check_id for r in results if r.status is Status.VIOLATED]
    if violated:
        rep.outcome = DeltaOutcome.NOT_IN_DELTA
        rep.evidence = "violated: " + ", ".join(violated)
        if failures:
            rep.evidence += "; calibration failures: " + "; ".join(failures)
        return rep
    if any(r.status is Status.NOT_COMPUTED for r in results):
        rep.outcome = DeltaOutcome.NOT_COMPUTED
        rep.evidence = "some conditions were not computed"
    return rep
