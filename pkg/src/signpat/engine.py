"""Verdict pipeline: sufficient conditions, witnesses, sampling.

A verdict is one of

* :class:`ConsistentProven` - a sufficient condition forces ``k`` real
  eigenvalues for every member;
* :class:`InconsistentProven` - two members with different, re-verified
  eigenvalue frequencies;
* :class:`Undetermined` - neither; carries the check summary and the
  sampling histogram.

Sampling alone never proves consistency.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .checks import (
    CheckResult,
    PatternContext,
    Role,
    Status,
    WitnessPlan,
    cover_interval_plan,
    run_checks,
)
from .errors import CalibrationError, CapExceededError, InternalInconsistency, PreconditionError
from .fixtures import SMALL_PATH_TABLE, known_members
from .pattern import (
    Negate,
    Permute,
    QMatrix,
    Sign,
    SignatureSimilarity,
    SignPattern,
    Transpose,
    apply_equivalence,
    canonical_words,
    render_pattern,
    tridiagonal_from_word,
)
from .spectral import (
    Exactly,
    coeff_sign_vector,
    eigen_frequency,
    forced_real_root_count,
    structural_zero_count,
)
from .witness import WitnessMatrix, calibrate

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_SAMPLES",
    "SampleResult",
    "sample_frequencies",
    "ConsistentProven",
    "InconsistentProven",
    "Undetermined",
    "PatternReport",
    "realize_plan",
    "verdict",
    "analyze",
    "ClassificationRow",
    "classify_small_tridiagonal",
    "census_mismatches",
    "find_equivalence",
]

DEFAULT_SEED = 20250101
DEFAULT_SAMPLES = 500
BLOCK = 64


# --------------------------------------------------------------------------
# sampling


@dataclass
class SampleResult:
    """Frequency histogram of random members of Q(p).

    ``exemplars`` keeps the first member seen in each bin.
    ``min_real_gap`` is the smallest distance between two real eigenvalues
    of one sample, relative to its norm; small values hint at members with
    repeated real eigenvalues.
    """

    count: int
    seed: int
    histogram: dict[tuple[int, int], int]
    exemplars: dict[tuple[int, int], QMatrix]
    exact_resolved: int = 0
    resampled: int = 0
    min_real_gap: float | None = None

    def bins(self) -> list[tuple[int, int]]:
        return sorted(self.histogram, reverse=True)

    def to_record(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "histogram": [[list(k), v] for k, v in sorted(self.histogram.items(), reverse=True)],
            "exact_resolved": self.exact_resolved,
            "resampled": self.resampled,
            "min_real_gap": self.min_real_gap,
        }


def _draw(rng: np.random.Generator, signs: np.ndarray) -> np.ndarray:
    mags = 10.0 ** rng.uniform(-2.0, 2.0, size=signs.shape)
    return np.where(signs != 0, signs * mags, 0.0)


def _sample_block(args) -> tuple:
    arr, seed, block, size, zeros = args
    signs = arr.astype(float)
    rng = np.random.default_rng([seed, block])
    hist: dict = {}
    ex: dict = {}
    exact = resampled = 0
    gap = math.inf
    for _ in range(size):
        values = _draw(rng, signs)
        freq, eigs = eigen_frequency(values, structural_zeros=zeros)
        if freq.borderline:
            resampled += 1
            values = _draw(rng, signs)
            freq, eigs = eigen_frequency(values, structural_zeros=zeros)
        exact += freq.exact
        key = freq.as_tuple()
        hist[key] = hist.get(key, 0) + 1
        ex.setdefault(key, values)
        real = np.sort(eigs[np.abs(eigs.imag) == 0].real)
        if real.size > 1:
            scale = max(1.0, float(np.linalg.norm(values)))
            gap = min(gap, float(np.min(np.diff(real))) / scale)
    return hist, ex, exact, resampled, gap


def sample_frequencies(
    p: SignPattern, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, workers: int = 1, cap: int = 12
) -> SampleResult:
    """Histogram of eigenvalue frequencies over random members of Q(p).

    Magnitudes are ``10**u`` with ``u`` uniform on ``[-2, 2]``. Samples are
    drawn in blocks of 64, block ``b`` seeded by ``(seed, b)``, so the result
    does not depend on ``workers``. A borderline classification that exact
    arithmetic cannot settle is replaced by one fresh draw.
    """
    if count < 1:
        raise PreconditionError("sample count must be at least 1")
    zeros = structural_zero_count(p, cap)
    nblocks = math.ceil(count / BLOCK)
    jobs = [(p.array, seed, b, min(BLOCK, count - b * BLOCK), zeros) for b in range(nblocks)]
    if workers > 1 and nblocks > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sample_block, jobs))
    else:
        parts = [_sample_block(j) for j in jobs]
    hist: dict = {}
    ex: dict = {}
    exact = resampled = 0
    gap = math.inf
    for h, e, x, r, g in parts:
        for k, v in h.items():
            hist[k] = hist.get(k, 0) + v
        for k, v in e.items():
            ex.setdefault(k, QMatrix(p, v))
        exact += x
        resampled += r
        gap = min(gap, g)
    return SampleResult(count, seed, hist, ex, exact, resampled, None if gap == math.inf else gap)


# --------------------------------------------------------------------------
# verdicts


@dataclass
class ConsistentProven:
    k: int
    n: int
    reasons: list[str]

    kind = "ConsistentProven"

    @property
    def frequency(self) -> tuple[int, int]:
        return (self.k, self.n - self.k)

    def to_record(self) -> dict:
        return {"kind": self.kind, "frequency": list(self.frequency), "reasons": self.reasons}


@dataclass
class InconsistentProven:
    witnesses: tuple[WitnessMatrix, WitnessMatrix]
    source: str

    kind = "InconsistentProven"

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "source": self.source,
            "frequencies": [list(w.frequency.as_tuple()) for w in self.witnesses],
            "witnesses": [w.to_record() for w in self.witnesses],
        }


@dataclass
class Undetermined:
    summary: dict

    kind = "Undetermined"

    def to_record(self) -> dict:
        return {"kind": self.kind, "summary": self.summary}


Verdict = ConsistentProven | InconsistentProven | Undetermined


@dataclass
class PatternReport:
    pattern: SignPattern
    structural_class: str
    checks: list[CheckResult]
    coefficient_signs: str | None
    root_count: str | None
    verdict: Verdict
    sampling: SampleResult | None
    calibration_failures: list[str] = field(default_factory=list)
    elapsed: float | None = None

    def to_record(self, timing: bool = False) -> dict:
        rec = {
            "type": "consistency",
            "pattern": render_pattern(self.pattern),
            "order": self.pattern.n,
            "structural_class": self.structural_class,
            "coefficient_signs": self.coefficient_signs,
            "sign_rule": self.root_count,
            "checks": [c.to_record() for c in self.checks],
            "verdict": self.verdict.to_record(),
            "sampling": self.sampling.to_record() if self.sampling else None,
            "calibration_failures": self.calibration_failures,
        }
        if timing:
            rec["elapsed_seconds"] = self.elapsed
        return rec


def _distinct_pair(w1: WitnessMatrix, w2: WitnessMatrix) -> bool:
    f1, f2 = w1.reverify(), w2.reverify()
    return f1 != f2


def realize_plan(p: SignPattern, plan: WitnessPlan) -> tuple[WitnessMatrix, WitnessMatrix]:
    """Calibrate both recipes of a plan; raises if they do not separate."""
    w1 = calibrate(p, plan.recipes[0], plan.predicted[0])
    w2 = calibrate(p, plan.recipes[1], plan.predicted[1])
    if not _distinct_pair(w1, w2):
        raise CalibrationError(
            f"witnesses of '{plan.summary}' share frequency {w1.frequency}", last_frequency=w1.frequency
        )
    return w1, w2


def _render_root_count(rc) -> str:
    if isinstance(rc, Exactly):
        outs = ", ".join(str(o) for o in sorted(rc.outcomes))
        return f"Exactly[{outs}]"
    return f"Range(positive={list(rc.positive)}, negative={list(rc.negative)}, zero={list(rc.zero)})"


def verdict(
    p: SignPattern,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    cap: int = 12,
    checks: list[str] | None = None,
    workers: int = 1,
    use_fixtures: bool = True,
) -> PatternReport:
    """Run the full pipeline on one pattern.

    Order: sufficient conditions, witness plans of violated necessary
    conditions, a composite-cycle interval search, tabulated members, then
    sampling. Disagreement between independent routes raises
    :class:`InternalInconsistency`.
    """
    start = time.perf_counter()
    n = p.n
    ctx = PatternContext(p, cap)
    results = run_checks(ctx, checks)

    coeff = root = None
    proofs: list[tuple[int, str]] = []
    not_computed: list[str] = [r.check_id for r in results if r.status is Status.NOT_COMPUTED]
    if n <= cap:
        vec = coeff_sign_vector(p, cap)
        rc = forced_real_root_count(vec, n, cap)
        coeff, root = str(vec), _render_root_count(rc)
        if rc.real_count is not None:
            proofs.append((rc.real_count, "sign rule on characteristic coefficients"))
    else:
        not_computed.append("sign_rule")
    for r in results:
        if r.role is Role.SUFFICIENT and r.status is Status.SATISFIED:
            proofs.append((r.proven_k, r.check_id))

    sampling = sample_frequencies(p, samples, seed, workers, cap) if samples > 0 else None
    failures: list[str] = []

    def finish(v) -> PatternReport:
        return PatternReport(
            p, ctx.cls.value, results, coeff, root, v, sampling, failures, time.perf_counter() - start
        )

    if proofs:
        ks = sorted({k for k, _ in proofs})
        if len(ks) > 1:
            raise InternalInconsistency(f"sufficient conditions disagree: {proofs}")
        k = ks[0]
        bad = [r.check_id for r in results if r.role is Role.NECESSARY and r.status is Status.VIOLATED]
        if bad:
            raise InternalInconsistency(f"consistency proven yet necessary checks violated: {bad}")
        if sampling is not None and set(sampling.histogram) != {(k, n - k)}:
            raise InternalInconsistency(f"proven frequency {(k, n - k)} but sampled {sampling.histogram}")
        return finish(ConsistentProven(k, n, [reason for _, reason in proofs]))

    for r in results:
        if r.role is not Role.NECESSARY or r.status is not Status.VIOLATED or r.plan is None:
            continue
        try:
            return finish(InconsistentProven(realize_plan(p, r.plan), r.check_id))
        except CalibrationError as exc:
            failures.append(f"{r.check_id}: {exc}")

    if ctx.m is not None:
        plan = cover_interval_plan(ctx)
        if plan is not None:
            try:
                return finish(InconsistentProven(realize_plan(p, plan), "composite_cycle_search"))
            except CalibrationError as exc:
                failures.append(f"composite_cycle_search: {exc}")

    pool: list[WitnessMatrix] = []
    if use_fixtures:
        pool.extend(WitnessMatrix.from_matrix(m, label) for label, m in known_members(p))
    freqs = {w.frequency for w in pool}
    if len(freqs) >= 2:
        lo = min(pool, key=lambda w: w.frequency.i_r)
        hi = max(pool, key=lambda w: w.frequency.i_r)
        if _distinct_pair(lo, hi):
            return finish(InconsistentProven((lo, hi), "tabulated_members"))
    if sampling is not None:
        bins = sampling.bins()
        if len(bins) >= 2:
            w1 = WitnessMatrix.from_matrix(sampling.exemplars[bins[0]], f"sample seed={seed}")
            w2 = WitnessMatrix.from_matrix(sampling.exemplars[bins[-1]], f"sample seed={seed}")
            if _distinct_pair(w1, w2):
                return finish(InconsistentProven((w1, w2), "sampling"))
        if pool and any(w.frequency.as_tuple() not in sampling.histogram for w in pool):
            w1 = next(w for w in pool if w.frequency.as_tuple() not in sampling.histogram)
            w2 = WitnessMatrix.from_matrix(sampling.exemplars[bins[0]], f"sample seed={seed}")
            if _distinct_pair(w1, w2):
                return finish(InconsistentProven((w1, w2), "tabulated_members"))

    summary = {
        "satisfied": [r.check_id for r in results if r.status is Status.SATISFIED],
        "violated": [r.check_id for r in results if r.status is Status.VIOLATED],
        "not_applicable": [r.check_id for r in results if r.status is Status.NOT_APPLICABLE],
        "not_computed": not_computed,
        "sign_rule": root,
        "histogram": sampling.to_record()["histogram"] if sampling else [],
    }
    return finish(Undetermined(summary))


def analyze(patterns, **kwargs) -> list[PatternReport]:
    return [verdict(p, **kwargs) for p in patterns]


# --------------------------------------------------------------------------
# small tridiagonal census


@dataclass
class ClassificationRow:
    word: tuple[Sign, ...]
    report: PatternReport
    sign_rule_exact: bool
    single_bin: bool

    @property
    def word_text(self) -> str:
        return "".join(s.symbol for s in self.word)

    @property
    def consistent(self) -> bool:
        return isinstance(self.report.verdict, ConsistentProven)

    def to_record(self) -> dict:
        v = self.report.verdict
        rec = {
            "type": "classification",
            "order": len(self.word) + 1,
            "word": self.word_text,
            "verdict": v.kind,
            "sign_rule": self.report.root_count,
            "single_bin_histogram": self.single_bin,
        }
        if isinstance(v, ConsistentProven):
            rec["frequency"] = list(v.frequency)
            rec["reasons"] = v.reasons
        elif isinstance(v, InconsistentProven):
            rec["source"] = v.source
            rec["frequencies"] = [list(w.frequency.as_tuple()) for w in v.witnesses]
        return rec


def classify_small_tridiagonal(
    n: int, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, workers: int = 1
) -> list[ClassificationRow]:
    """Verdicts for every canonical edge word of order ``n`` (2 to 6)."""
    if not 2 <= n <= 6:
        raise PreconditionError("classification is available for orders 2 to 6")
    rows = []
    for w in canonical_words(n):
        rep = verdict(tridiagonal_from_word(w), samples=samples, seed=seed, workers=workers)
        exact = rep.root_count is not None and rep.root_count.startswith("Exactly")
        single = rep.sampling is not None and len(rep.sampling.histogram) == 1
        rows.append(ClassificationRow(w, rep, exact, single))
    return rows


def census_mismatches(rows: list[ClassificationRow]) -> list[str]:
    """Differences between a census and the tabulated consistent classes."""
    if not rows:
        return []
    n = len(rows[0].word) + 1
    table = SMALL_PATH_TABLE.get(n)
    if table is None:
        return []
    out = []
    for row in rows:
        want = table.get(row.word)
        v = row.report.verdict
        if want is None and not isinstance(v, InconsistentProven):
            out.append(f"{row.word_text}: expected InconsistentProven, got {v.kind}")
        if want is not None and (not isinstance(v, ConsistentProven) or v.frequency != want):
            got = v.frequency if isinstance(v, ConsistentProven) else v.kind
            out.append(f"{row.word_text}: expected consistent {want}, got {got}")
    return out


# --------------------------------------------------------------------------
# equivalence


def _signature_between(a: np.ndarray, b: np.ndarray) -> tuple[int, ...] | None:
    """``d`` with ``d_i d_j a_ij = b_ij`` for all entries, if one exists."""
    if not np.array_equal(a != 0, b != 0):
        return None
    n = a.shape[0]
    if np.any(np.diag(a) != np.diag(b)):
        return None
    d = [0] * n
    for root in range(n):
        if d[root]:
            continue
        d[root] = 1
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                for x, y in ((a[i, j], b[i, j]), (a[j, i], b[j, i])):
                    if x == 0:
                        continue
                    want = d[i] * int(x) * int(y)
                    if d[j] == 0:
                        d[j] = want
                        stack.append(j)
                    elif d[j] != want:
                        return None
    return tuple(d)


def find_equivalence(p: SignPattern, q: SignPattern, max_order: int = 6):
    """Equivalence operations taking ``p`` to ``q``, or None.

    Searches permutation, transposition and negation exhaustively and
    solves for the signature similarity. Orders above ``max_order`` are
    refused.
    """
    if p.n != q.n:
        return None
    if p.n > max_order:
        raise CapExceededError(f"equivalence search limited to order {max_order}")
    target = q.array.astype(int)
    for sigma in itertools.permutations(range(p.n)):
        for tr in (False, True):
            for neg in (False, True):
                ops = [Permute(sigma)]
                if tr:
                    ops.append(Transpose())
                if neg:
                    ops.append(Negate())
                r = apply_equivalence(p, *ops).array.astype(int)
                d = _signature_between(r, target)
                if d is not None:
                    ops.append(SignatureSimilarity(d))
                    if apply_equivalence(p, *ops) != q:
                        raise InternalInconsistency("equivalence search produced a wrong map")
                    return ops
    return None
