"""Structural conditions bearing on consistency of a sign pattern.

A pattern is *consistent* when every member of its qualitative class has
the same eigenvalue frequency. Each check below decides one structural
condition; necessary conditions come with a witness plan, a pair of
recipes whose calibrated members must have different frequencies when the
condition is violated. Sufficient conditions report the forced number of
real eigenvalues.

Evidence dictionaries use 1-based vertex labels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .errors import CalibrationError, CapExceededError, PreconditionError
from .graphs import (
    CompositeCycle,
    SignedDigraph,
    SignedUGraph,
    SimpleCycle,
    composite_cycles,
    composite_sign_table,
    cycle_edge_sequence,
    graph_metrics,
    matchings,
    max_matching,
    signed_runs,
    walk_cycle,
)
from .pattern import (
    QMatrix,
    Sign,
    SignPattern,
    StructuralClass,
    is_combinatorially_symmetric,
    is_irreducible,
    path_order,
    structural_class,
    submatrix,
)
from .witness import (
    WitnessRecipe,
    calibrate,
    composite_recipe,
    mscaled_recipe,
    predicted_bounds,
    simple_recipe,
)

__all__ = [
    "Status",
    "Role",
    "WitnessPlan",
    "CheckResult",
    "PatternContext",
    "CHECKS",
    "run_checks",
    "cover_interval_plan",
    "mixed_cover_plan",
]

FORBIDDEN_WORDS = ("+-+", "-+-", "+---+", "-+++-")
# Edge products |p_ij p_ji| along each forbidden subword for two members of
# its class; their real eigenvalue counts differ by 4.
FORBIDDEN_MEMBERS = {
    "+-+": ((0.25, 1.0, 4.0), (1.0, 1.0, 1.0)),
    "-+-": ((0.25, 4.0, 1.0), (1.0, 1.0, 1.0)),
    "+---+": ((1.0, 1.0, 1.0, 1.0, 4.0), (1.0, 1.0, 1.0, 1.0, 1.0)),
    "-+++-": ((1.0, 4.0, 1.0, 4.0, 1.0), (1.0, 1.0, 1.0, 1.0, 1.0)),
}
COVER_SEARCH_LIMIT = 20000


class Status(enum.Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"
    NOT_APPLICABLE = "NotApplicable"
    NOT_COMPUTED = "NotComputed"


class Role(enum.Enum):
    NECESSARY = "necessary"
    SUFFICIENT = "sufficient"
    INFORMATIONAL = "informational"


@dataclass
class WitnessPlan:
    """Two recipes whose members provably differ in ``i_r``."""

    recipes: tuple[WitnessRecipe, WitnessRecipe]
    predicted: tuple[tuple[int, int], tuple[int, int]]
    summary: str

    def to_record(self) -> dict:
        return {
            "summary": self.summary,
            "recipes": [r.describe() for r in self.recipes],
            "predicted_real_ranges": [list(x) for x in self.predicted],
        }


@dataclass
class CheckResult:
    check_id: str
    rule: str
    role: Role
    status: Status
    evidence: dict = field(default_factory=dict)
    plan: WitnessPlan | None = None
    proven_k: int | None = None
    witness_recipe: WitnessRecipe | None = None

    def to_record(self) -> dict:
        rec = {
            "check_id": self.check_id,
            "rule": self.rule,
            "role": self.role.value,
            "status": self.status.value,
            "evidence": self.evidence,
        }
        if self.plan is not None:
            rec["plan"] = self.plan.to_record()
        if self.proven_k is not None:
            rec["forced_real_count"] = self.proven_k
        if self.witness_recipe is not None:
            rec["witness_recipe"] = self.witness_recipe.describe()
        return rec


def _v(i: int) -> int:
    return i + 1


def _edge(e: tuple[int, int]) -> list[int]:
    return [e[0] + 1, e[1] + 1]


def _word(signs: Iterable[Sign]) -> str:
    return "".join(s.symbol for s in signs)


def two_cycle_graph(p: SignPattern) -> SignedUGraph:
    """Graph of 2-cycles; an edge is ``+`` when its 2-cycle is negative."""
    a = p.array
    n = p.n
    edges = {
        (i, j): Sign(int(a[i, j]) * int(a[j, i]))
        for i in range(n)
        for j in range(i + 1, n)
        if a[i, j] != 0 and a[j, i] != 0
    }
    return SignedUGraph(n, edges)


def two_cycle(p: SignPattern, e: tuple[int, int]) -> SimpleCycle:
    i, j = min(e), max(e)
    return SimpleCycle((i, j), Sign(int(p.array[i, j]) * int(p.array[j, i])))


def cycle_along(p: SignPattern, order) -> SimpleCycle:
    """Directed cycle following ``order`` (rotated to start at its minimum)."""
    order = list(order)
    k = order.index(min(order))
    order = order[k:] + order[:k]
    prod = 1
    for s in range(len(order)):
        prod *= int(p.array[order[s], order[(s + 1) % len(order)]])
    if prod == 0:
        raise PreconditionError("order does not trace a cycle of the digraph")
    return SimpleCycle(tuple(order), Sign(prod))


def composite_from_edges(p: SignPattern, edges) -> CompositeCycle:
    return CompositeCycle(tuple(two_cycle(p, e) for e in edges))


class PatternContext:
    """Lazily computed structure shared by the checks."""

    def __init__(self, p: SignPattern, cap: int = 12):
        self.p = p
        self.n = p.n
        self.cap = cap
        self.cls = structural_class(p)
        self.comb_sym = is_combinatorially_symmetric(p)
        self.zero_diag = not p.array.diagonal().any()
        self.path = path_order(p)
        self.digraph = SignedDigraph(p)
        self.ugraph = SignedUGraph.from_pattern(p) if self.comb_sym else None

    @cached_property
    def table(self) -> dict[int, set[int]] | None:
        try:
            return composite_sign_table(self.digraph, cap=self.cap)
        except CapExceededError:
            return None

    @cached_property
    def m(self) -> int | None:
        if self.table is None:
            return None
        return max(bin(k).count("1") for k in self.table)

    @cached_property
    def zeros(self) -> int:
        return 0 if self.m is None else self.n - self.m

    @cached_property
    def metrics(self):
        if self.ugraph is None or not self.ugraph.is_connected():
            return None
        return graph_metrics(self.ugraph)

    @cached_property
    def tcg(self) -> SignedUGraph:
        return two_cycle_graph(self.p)

    def longest_composite(self, avoid=()) -> CompositeCycle:
        """A longest composite cycle avoiding ``avoid`` (may be empty)."""
        if self.table is None:
            raise CapExceededError("composite cycles not computed beyond the cap")
        bad = 0
        for v in avoid:
            bad |= 1 << v
        best = 0
        for mask in self.table:
            if mask & bad:
                continue
            if bin(mask).count("1") > bin(best).count("1") or (
                bin(mask).count("1") == bin(best).count("1") and mask < best
            ):
                best = mask
        return self.composite_on(best)

    def composite_on(self, mask: int) -> CompositeCycle:
        """Some composite cycle covering exactly the vertex set ``mask``."""
        parts: list[SimpleCycle] = []
        while mask:
            low = (mask & -mask).bit_length() - 1
            for c in self.digraph.cycles:
                if c.vertices[0] != low or c.mask & ~mask:
                    continue
                if (mask ^ c.mask) in self.table:
                    parts.append(c)
                    mask ^= c.mask
                    break
            else:
                raise PreconditionError("vertex set is not covered by a composite cycle")
        return CompositeCycle(tuple(parts))

    def bounds(self, recipe: WitnessRecipe) -> tuple[int, int]:
        return predicted_bounds(self.p, recipe, zeros=self.zeros)

    def path_edges(self) -> tuple[list[tuple[int, int]], list[Sign]]:
        order = self.path
        edges = [(min(order[k], order[k + 1]), max(order[k], order[k + 1])) for k in range(self.n - 1)]
        return edges, [self.ugraph.edges[e] for e in edges]


# --------------------------------------------------------------------------
# witness plans


def _plan(ctx: PatternContext, r1: WitnessRecipe, r2: WitnessRecipe, summary: str) -> WitnessPlan | None:
    b1, b2 = ctx.bounds(r1), ctx.bounds(r2)
    if b1[1] < b2[0] or b2[1] < b1[0]:
        return WitnessPlan((r1, r2), (b1, b2), summary)
    return None


def mixed_cover_plan(ctx: PatternContext) -> WitnessPlan | None:
    """Negative 2-cycles only versus positive 2-cycles only.

    With ``k1`` disjoint negative 2-cycles and ``k2`` disjoint positive
    ones, the first member has at least ``2 k1 + (n - m)`` real eigenvalues
    and the second at most ``n - 2 k2``.
    """
    if ctx.m is None:
        return None
    m1 = max_matching(ctx.tcg, Sign.PLUS)
    m2 = max_matching(ctx.tcg, Sign.MINUS)
    if not m1 or not m2:
        return None
    return _plan(
        ctx,
        composite_recipe(composite_from_edges(ctx.p, m1)),
        composite_recipe(composite_from_edges(ctx.p, m2)),
        f"{len(m1)} negative and {len(m2)} positive disjoint 2-cycles against longest composite length {ctx.m}",
    )


def cover_interval_plan(ctx: PatternContext, limit: int = COVER_SEARCH_LIMIT) -> WitnessPlan | None:
    """Search composite cycles for two with disjoint predicted ``i_r`` ranges."""
    if ctx.m is None:
        return None
    hi_best = lo_best = None
    for k, g in enumerate(composite_cycles(ctx.digraph, cap=ctx.cap)):
        if k >= limit:
            break
        r = composite_recipe(g)
        lo, hi = ctx.bounds(r)
        if lo_best is None or lo > lo_best[0]:
            lo_best = (lo, r)
        if hi_best is None or hi < hi_best[0]:
            hi_best = (hi, r)
        if lo_best[0] > hi_best[0]:
            break
    if lo_best is None or lo_best[0] <= hi_best[0]:
        return None
    return _plan(ctx, lo_best[1], hi_best[1], "composite cycles with disjoint predicted real-eigenvalue ranges")


def _fallback_plan(ctx: PatternContext) -> WitnessPlan | None:
    return mixed_cover_plan(ctx) or cover_interval_plan(ctx)


# --------------------------------------------------------------------------
# individual checks


def _na(check_id: str, rule: str, role: Role, why: str) -> CheckResult:
    return CheckResult(check_id, rule, role, Status.NOT_APPLICABLE, {"reason": why})


def _odd_runs(ctx: PatternContext):
    edges, signs = ctx.path_edges()
    runs = signed_runs(edges, signs, cyclic=False)
    return runs, [r for r in runs if r.length % 2]


def _runs_record(runs) -> list[dict]:
    return [{"sign": r.sign.symbol, "edges": [_edge(e) for e in r.edges]} for r in runs]


RULE_ODD_PATHS = "a path pattern has at most one maximal signed path of odd length"


def check_odd_maximal_paths(ctx: PatternContext) -> CheckResult:
    cid = "odd_maximal_paths"
    if ctx.path is None:
        return _na(cid, RULE_ODD_PATHS, Role.NECESSARY, "not a path pattern")
    runs, odd = _odd_runs(ctx)
    ev = {"runs": _runs_record(runs), "odd_runs": len(odd)}
    if len(odd) >= 2:
        return CheckResult(cid, RULE_ODD_PATHS, Role.NECESSARY, Status.VIOLATED, ev, _fallback_plan(ctx))
    return CheckResult(cid, RULE_ODD_PATHS, Role.NECESSARY, Status.SATISFIED, ev)


RULE_ODD_PATHS_INERTIA = "a path pattern with unique inertia has at most one odd maximal signed path"


def check_odd_maximal_paths_inertia(ctx: PatternContext) -> CheckResult:
    cid = "odd_maximal_paths_inertia"
    if ctx.path is None:
        return _na(cid, RULE_ODD_PATHS_INERTIA, Role.INFORMATIONAL, "not a path pattern")
    runs, odd = _odd_runs(ctx)
    status = Status.VIOLATED if len(odd) >= 2 else Status.SATISFIED
    return CheckResult(cid, RULE_ODD_PATHS_INERTIA, Role.INFORMATIONAL, status, {"odd_runs": len(odd)})


RULE_FORBIDDEN = "a path pattern has no edge subword +-+, -+-, +---+ or -+++-"


def _forbidden_plan(ctx: PatternContext, verts: list[int], word: str) -> WitnessPlan | None:
    """Two members of the forbidden subword, each M-scaled against one
    longest composite cycle of the rest of the path.

    At most two path vertices stay uncovered, so inner real counts that
    differ by 4 keep the predicted ranges apart.
    """
    if ctx.table is None:
        return None
    subset = sorted(verts)
    pos = {v: i for i, v in enumerate(subset)}
    sub = submatrix(ctx.p, subset, subset)
    a = ctx.p.array
    outer = ctx.longest_composite(avoid=verts)
    recipes = []
    for mags in FORBIDDEN_MEMBERS[word]:
        vals = np.zeros((len(subset), len(subset)))
        for (u, v), q in zip(zip(verts, verts[1:]), mags):
            vals[pos[u], pos[v]] = a[u, v]
            vals[pos[v], pos[u]] = a[v, u] * q
        recipes.append(mscaled_recipe(ctx.p, subset, QMatrix(sub, vals), outer))
    where = ",".join(str(_v(v)) for v in verts)
    rest = f"M-scaled against {outer}" if outer.parts else "no cycle off the subword"
    return _plan(ctx, recipes[0], recipes[1], f"two members of the subword {word} on {where}, {rest}")


def check_forbidden_submatrices(ctx: PatternContext) -> CheckResult:
    cid = "forbidden_submatrices"
    if ctx.path is None:
        return _na(cid, RULE_FORBIDDEN, Role.NECESSARY, "not a path pattern")
    edges, signs = ctx.path_edges()
    word = _word(signs)
    hits = []
    for bad in FORBIDDEN_WORDS:
        start = word.find(bad)
        while start >= 0:
            verts = ctx.path[start : start + len(bad) + 1]
            hits.append({"subword": bad, "vertices": [_v(x) for x in verts]})
            start = word.find(bad, start + 1)
    ev = {"word": word, "occurrences": hits}
    if hits:
        first = hits[0]
        verts = [v - 1 for v in first["vertices"]]
        plan = _forbidden_plan(ctx, verts, first["subword"]) or _fallback_plan(ctx)
        return CheckResult(cid, RULE_FORBIDDEN, Role.NECESSARY, Status.VIOLATED, ev, plan)
    return CheckResult(cid, RULE_FORBIDDEN, Role.NECESSARY, Status.SATISFIED, ev)


RULE_ZERO_MULT = "an odd-order path pattern has all (n-1)-covers by 2-cycles of one sign"


def check_zero_multiplicity(ctx: PatternContext) -> CheckResult:
    cid = "zero_multiplicity"
    if ctx.path is None or ctx.n % 2 == 0:
        return _na(cid, RULE_ZERO_MULT, Role.NECESSARY, "not an odd-order path pattern")
    size = (ctx.n - 1) // 2
    by_parity: dict[int, tuple] = {}
    for mt in matchings(ctx.ugraph):
        if len(mt) != size:
            continue
        neg = sum(1 for e in mt if ctx.ugraph.edges[e] is Sign.PLUS)
        by_parity.setdefault(neg % 2, mt)
        if len(by_parity) == 2:
            break
    ev = {"cover_parities": sorted(by_parity)}
    if len(by_parity) == 2:
        g0 = composite_from_edges(ctx.p, by_parity[0])
        g1 = composite_from_edges(ctx.p, by_parity[1])
        ev["covers"] = [str(g0), str(g1)]
        plan = _plan(ctx, composite_recipe(g0), composite_recipe(g1), "covers by 2-cycles of opposite sign")
        return CheckResult(cid, RULE_ZERO_MULT, Role.NECESSARY, Status.VIOLATED, ev, plan)
    return CheckResult(cid, RULE_ZERO_MULT, Role.NECESSARY, Status.SATISFIED, ev)


RULE_LEAVES = "no vertex has two leaves attached by edges of opposite sign"


def check_adjacent_leaves(ctx: PatternContext) -> CheckResult:
    cid = "adjacent_leaves"
    if not (ctx.comb_sym and ctx.zero_diag and ctx.n >= 3 and is_irreducible(ctx.p)):
        return _na(cid, RULE_LEAVES, Role.NECESSARY, "needs an irreducible combinatorially symmetric zero-diagonal pattern")
    g = ctx.ugraph
    for w in range(ctx.n):
        leaves = [u for u in g.adj[w] if g.degree(u) == 1]
        plus = [u for u in leaves if g.sign(u, w) is Sign.PLUS]
        minus = [u for u in leaves if g.sign(u, w) is Sign.MINUS]
        if plus and minus:
            u, v = plus[0], minus[0]
            ev = {"centre": _v(w), "positive_leaf": _v(u), "negative_leaf": _v(v)}
            plan = None
            if ctx.table is not None:
                rest = ctx.longest_composite(avoid=(u, v, w))
                g1 = CompositeCycle((two_cycle(ctx.p, (u, w)),) + rest.parts)
                g2 = CompositeCycle((two_cycle(ctx.p, (v, w)),) + rest.parts)
                plan = _plan(ctx, composite_recipe(g1), composite_recipe(g2), "swap the leaf 2-cycle in a longest composite cycle")
                plan = plan or _fallback_plan(ctx)
            return CheckResult(cid, RULE_LEAVES, Role.NECESSARY, Status.VIOLATED, ev, plan)
    return CheckResult(cid, RULE_LEAVES, Role.NECESSARY, Status.SATISFIED, {})


def _cycle_conditions(g: SignedUGraph, order: list[int]) -> dict:
    """Evaluate the three cycle conditions on the cycle traced by ``order``."""
    edges, signs = cycle_edge_sequence(g, order)
    runs = signed_runs(edges, signs, cyclic=True)
    odd = [r for r in runs if r.length % 2]
    plus = [e for e, s in zip(edges, signs) if s is Sign.PLUS]
    pair = next(
        ((a, b) for i, a in enumerate(plus) for b in plus[i + 1 :] if not set(a) & set(b)),
        None,
    )
    return {
        "edges": edges,
        "signs": signs,
        "runs": runs,
        "nonadjacent_plus": pair,
        "odd_runs": odd,
        "odd_with_plus": len(order) % 2 == 1 and bool(plus),
        "plus": plus,
    }


def _conditions_record(c: dict) -> dict:
    return {
        "word": _word(c["signs"]),
        "nonadjacent_positive_edges": [_edge(e) for e in c["nonadjacent_plus"]] if c["nonadjacent_plus"] else None,
        "odd_runs": len(c["odd_runs"]),
        "odd_cycle_with_positive_edge": c["odd_with_plus"],
    }


def _violated(c: dict) -> list[str]:
    out = []
    if c["nonadjacent_plus"]:
        out.append("nonadjacent_positive_edges")
    if len(c["odd_runs"]) > 1:
        out.append("several_odd_runs")
    if c["odd_with_plus"]:
        out.append("odd_cycle_with_positive_edge")
    return out


RULE_CYCLE = (
    "a cycle pattern has no two nonadjacent positive edges, at most one odd maximal signed path, "
    "and no positive edge when its order is odd"
)


def check_cycle_graph(ctx: PatternContext) -> CheckResult:
    cid = "cycle_graph"
    if ctx.cls is not StructuralClass.CYCLE_0DIAG:
        return _na(cid, RULE_CYCLE, Role.NECESSARY, "not a zero-diagonal cycle pattern")
    order = walk_cycle(ctx.ugraph)
    cond = _cycle_conditions(ctx.ugraph, order)
    bad = _violated(cond)
    ev = _conditions_record(cond)
    ev["violated"] = bad
    if not bad:
        return CheckResult(cid, RULE_CYCLE, Role.NECESSARY, Status.SATISFIED, ev)
    full = simple_recipe(cycle_along(ctx.p, order))
    plan = None
    if "nonadjacent_positive_edges" in bad:
        two = composite_recipe(composite_from_edges(ctx.p, cond["nonadjacent_plus"]))
        plan = _plan(ctx, two, full, "two negative 2-cycles against the full cycle")
    if plan is None and "several_odd_runs" in bad:
        plan = mixed_cover_plan(ctx)
    if plan is None and "odd_cycle_with_positive_edge" in bad:
        one = simple_recipe(two_cycle(ctx.p, cond["plus"][0]))
        plan = _plan(ctx, one, full, "one negative 2-cycle against the full odd cycle")
    return CheckResult(cid, RULE_CYCLE, Role.NECESSARY, Status.VIOLATED, ev, plan or _fallback_plan(ctx))


RULE_NEG_ODD = "an odd cycle pattern with all edges negative has exactly one real eigenvalue"


def check_all_negative_odd_cycle(ctx: PatternContext) -> CheckResult:
    cid = "all_negative_odd_cycle"
    if ctx.cls is not StructuralClass.CYCLE_0DIAG or ctx.n % 2 == 0:
        return _na(cid, RULE_NEG_ODD, Role.SUFFICIENT, "not an odd cycle pattern")
    if any(s is Sign.PLUS for s in ctx.ugraph.edges.values()):
        return _na(cid, RULE_NEG_ODD, Role.SUFFICIENT, "some edge is positive")
    return CheckResult(cid, RULE_NEG_ODD, Role.SUFFICIENT, Status.SATISFIED, {}, proven_k=1)


RULE_SYM_TREE = "a tree pattern with all edges of one sign is similar to a symmetric or skew-symmetric class"


def check_tree_symmetrization(ctx: PatternContext) -> CheckResult:
    cid = "tree_symmetrization"
    if ctx.cls not in (StructuralClass.TRIDIAGONAL_0DIAG, StructuralClass.TREE_0DIAG):
        return _na(cid, RULE_SYM_TREE, Role.SUFFICIENT, "not a zero-diagonal tree pattern")
    signs = set(ctx.ugraph.edges.values())
    if signs == {Sign.PLUS}:
        return CheckResult(cid, RULE_SYM_TREE, Role.SUFFICIENT, Status.SATISFIED, {"edges": "+"}, proven_k=ctx.n)
    if signs == {Sign.MINUS} and ctx.m is not None:
        ev = {"edges": "-", "structural_zeros": ctx.zeros}
        return CheckResult(cid, RULE_SYM_TREE, Role.SUFFICIENT, Status.SATISFIED, ev, proven_k=ctx.zeros)
    return _na(cid, RULE_SYM_TREE, Role.SUFFICIENT, "edges of both signs")


RULE_TABLE = "tabulated consistent path classes of order at most 5"


def check_small_path_table(ctx: PatternContext) -> CheckResult:
    from .fixtures import SMALL_PATH_TABLE

    cid = "small_path_table"
    if ctx.path is None or ctx.n > 5:
        return _na(cid, RULE_TABLE, Role.SUFFICIENT, "not a path pattern of order at most 5")
    _, signs = ctx.path_edges()
    w = tuple(signs)
    key = min(w, w[::-1])
    entry = SMALL_PATH_TABLE[ctx.n].get(key)
    if entry is None:
        return _na(cid, RULE_TABLE, Role.SUFFICIENT, f"word {_word(key)} is not a tabulated consistent class")
    return CheckResult(cid, RULE_TABLE, Role.SUFFICIENT, Status.SATISFIED, {"word": _word(key), "frequency": list(entry)}, proven_k=entry[0])


def _inner_witness(ctx: PatternContext, cycle_vertices, recipe_for) -> QMatrix:
    """Calibrated member of the principal subclass on a cycle's vertices."""
    verts = sorted(cycle_vertices)
    sub = submatrix(ctx.p, verts, verts)
    return calibrate(sub, recipe_for(sub, {v: k for k, v in enumerate(verts)})).matrix


def _cycle_plans(ctx: PatternContext, order: list[int], cond: dict, bad: list[str]) -> WitnessPlan | None:
    """Witness pairs for a violated cycle inside a larger graph.

    The cycle gets a calibrated inner member and a longest composite cycle
    off it is weighted by powers of a large ``M``.
    """
    if ctx.table is None:
        return None
    verts = sorted(order)
    outer = ctx.longest_composite(avoid=verts)

    def relabel(k_of, seq):
        return [k_of[v] for v in seq]

    def full_cycle(sub, k_of):
        return simple_recipe(cycle_along(sub, relabel(k_of, order)))

    def build_pair(first, second, summary):
        try:
            w1 = _inner_witness(ctx, verts, first)
            w2 = _inner_witness(ctx, verts, second)
        except CalibrationError:
            return None
        r1 = mscaled_recipe(ctx.p, verts, w1, outer)
        r2 = mscaled_recipe(ctx.p, verts, w2, outer)
        return _plan(ctx, r1, r2, summary)

    plan = None
    if "nonadjacent_positive_edges" in bad:
        pair = cond["nonadjacent_plus"]
        plan = build_pair(
            lambda sub, k_of: composite_recipe(composite_from_edges(sub, [tuple(relabel(k_of, e)) for e in pair])),
            full_cycle,
            "two negative 2-cycles on the cycle against the full cycle, scaled cover elsewhere",
        )
    if plan is None and "several_odd_runs" in bad:
        plan = mixed_cover_plan(ctx)
        if plan is None:
            sub_ctx = PatternContext(submatrix(ctx.p, verts, verts), ctx.cap)
            m1 = max_matching(sub_ctx.tcg, Sign.PLUS)
            m2 = max_matching(sub_ctx.tcg, Sign.MINUS)
            if m1 and m2:
                plan = build_pair(
                    lambda sub, k_of: composite_recipe(composite_from_edges(sub, m1)),
                    lambda sub, k_of: composite_recipe(composite_from_edges(sub, m2)),
                    "negative against positive 2-cycles on the cycle, scaled cover elsewhere",
                )
    if plan is None and "odd_cycle_with_positive_edge" in bad:
        e = cond["plus"][0]
        plan = build_pair(
            lambda sub, k_of: simple_recipe(two_cycle(sub, tuple(relabel(k_of, e)))),
            full_cycle,
            "one negative 2-cycle on the odd cycle against the full cycle, scaled cover elsewhere",
        )
    return plan or _fallback_plan(ctx)


RULE_UNICYCLIC = "a unicyclic pattern with every leaf at even distance from the cycle obeys the cycle conditions"


def check_unicyclic(ctx: PatternContext) -> CheckResult:
    cid = "unicyclic"
    if ctx.cls is not StructuralClass.UNICYCLIC_0DIAG:
        return _na(cid, RULE_UNICYCLIC, Role.NECESSARY, "not a zero-diagonal unicyclic pattern")
    met = ctx.metrics
    cyc = met.cycles[0]
    odd_leaves = [leaf for leaf in met.leaves if met.leaf_cycle_distances[(leaf, 0)] % 2]
    if odd_leaves:
        return _na(cid, RULE_UNICYCLIC, Role.NECESSARY, f"leaf {_v(odd_leaves[0])} is at odd distance from the cycle")
    order = walk_cycle(ctx.ugraph, cyc)
    cond = _cycle_conditions(ctx.ugraph, order)
    bad = _violated(cond)
    ev = {"cycle": [_v(x) for x in order], **_conditions_record(cond), "violated": bad}
    if not bad:
        return CheckResult(cid, RULE_UNICYCLIC, Role.NECESSARY, Status.SATISFIED, ev)
    return CheckResult(cid, RULE_UNICYCLIC, Role.NECESSARY, Status.VIOLATED, ev, _cycle_plans(ctx, order, cond, bad))


RULE_MULTICYCLE = (
    "a leafless pattern whose path-adjacent cycles are all at odd distance obeys the cycle conditions on every cycle"
)


def check_multicycle(ctx: PatternContext) -> CheckResult:
    cid = "multicycle"
    if not (ctx.comb_sym and ctx.zero_diag) or ctx.metrics is None:
        return _na(cid, RULE_MULTICYCLE, Role.NECESSARY, "needs a connected combinatorially symmetric zero-diagonal pattern")
    met = ctx.metrics
    if len(met.cycles) < 2:
        return _na(cid, RULE_MULTICYCLE, Role.NECESSARY, "fewer than two cycles")
    if met.leaves:
        return _na(cid, RULE_MULTICYCLE, Role.NECESSARY, f"vertex {_v(met.leaves[0])} is a leaf")
    even = [(a, b, d) for (a, b), d in met.path_adjacent.items() if d % 2 == 0]
    if even:
        a, b, d = even[0]
        return _na(cid, RULE_MULTICYCLE, Role.NECESSARY, f"cycles {a + 1} and {b + 1} are path-adjacent at even distance {d}")
    report = []
    first_bad = None
    for cyc in met.cycles:
        order = walk_cycle(ctx.ugraph, cyc)
        cond = _cycle_conditions(ctx.ugraph, order)
        bad = _violated(cond)
        report.append({"cycle": [_v(x) for x in order], **_conditions_record(cond), "violated": bad})
        if bad and first_bad is None:
            first_bad = (order, cond, bad)
    ev = {"cycles": report}
    if first_bad is None:
        return CheckResult(cid, RULE_MULTICYCLE, Role.NECESSARY, Status.SATISFIED, ev)
    return CheckResult(cid, RULE_MULTICYCLE, Role.NECESSARY, Status.VIOLATED, ev, _cycle_plans(ctx, *first_bad))


RULE_TWO_COVERS = "all longest covers by 2-cycles contain the same number of negative 2-cycles"


def check_two_cycle_covers(ctx: PatternContext) -> CheckResult:
    cid = "two_cycle_covers"
    if ctx.m is None:
        return CheckResult(cid, RULE_TWO_COVERS, Role.NECESSARY, Status.NOT_COMPUTED, {"reason": "order exceeds cap"})
    if ctx.m == 0 or ctx.m % 2:
        return _na(cid, RULE_TWO_COVERS, Role.NECESSARY, f"longest composite length {ctx.m} is not a positive even number")
    size = ctx.m // 2
    by_count: dict[int, tuple] = {}
    for mt in matchings(ctx.tcg):
        if len(mt) == size:
            by_count.setdefault(sum(1 for e in mt if ctx.tcg.edges[e] is Sign.PLUS), mt)
    ev = {"m": ctx.m, "negative_counts": sorted(by_count)}
    if len(by_count) >= 2:
        lo, hi = min(by_count), max(by_count)
        g1 = composite_from_edges(ctx.p, by_count[lo])
        g2 = composite_from_edges(ctx.p, by_count[hi])
        ev["covers"] = [str(g1), str(g2)]
        plan = _plan(ctx, composite_recipe(g1), composite_recipe(g2), f"longest covers with {lo} and {hi} negative 2-cycles")
        return CheckResult(cid, RULE_TWO_COVERS, Role.NECESSARY, Status.VIOLATED, ev, plan)
    return CheckResult(cid, RULE_TWO_COVERS, Role.NECESSARY, Status.SATISFIED, ev)


RULE_MIXED = "2 k1 + 2 k2 <= m for disjoint negative (k1) and positive (k2) 2-cycle families"


def check_mixed_covers(ctx: PatternContext) -> CheckResult:
    cid = "mixed_covers"
    if ctx.m is None:
        return CheckResult(cid, RULE_MIXED, Role.NECESSARY, Status.NOT_COMPUTED, {"reason": "order exceeds cap"})
    m1 = max_matching(ctx.tcg, Sign.PLUS)
    m2 = max_matching(ctx.tcg, Sign.MINUS)
    ev = {"m": ctx.m, "k1": len(m1), "k2": len(m2)}
    if 2 * len(m1) + 2 * len(m2) >= ctx.m + 2:
        ev["negative_2_cycles"] = [_edge(e) for e in m1]
        ev["positive_2_cycles"] = [_edge(e) for e in m2]
        return CheckResult(cid, RULE_MIXED, Role.NECESSARY, Status.VIOLATED, ev, mixed_cover_plan(ctx))
    return CheckResult(cid, RULE_MIXED, Role.NECESSARY, Status.SATISFIED, ev)


CHECKS: dict[str, Callable[[PatternContext], CheckResult]] = {
    "odd_maximal_paths": check_odd_maximal_paths,
    "odd_maximal_paths_inertia": check_odd_maximal_paths_inertia,
    "forbidden_submatrices": check_forbidden_submatrices,
    "zero_multiplicity": check_zero_multiplicity,
    "adjacent_leaves": check_adjacent_leaves,
    "cycle_graph": check_cycle_graph,
    "all_negative_odd_cycle": check_all_negative_odd_cycle,
    "tree_symmetrization": check_tree_symmetrization,
    "small_path_table": check_small_path_table,
    "unicyclic": check_unicyclic,
    "multicycle": check_multicycle,
    "two_cycle_covers": check_two_cycle_covers,
    "mixed_covers": check_mixed_covers,
}


def run_checks(ctx: PatternContext, only: Iterable[str] | None = None) -> list[CheckResult]:
    ids = list(CHECKS) if only is None else list(only)
    unknown = [c for c in ids if c not in CHECKS]
    if unknown:
        raise PreconditionError(f"unknown check ids: {', '.join(unknown)}")
    return [CHECKS[c](ctx) for c in ids]
