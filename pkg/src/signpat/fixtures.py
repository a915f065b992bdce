"""Worked example patterns, explicit members and the small path table.

Vertex labels of graph examples are 0-based here. Graph patterns are built
with :func:`pattern_from_edges` (``+`` above the diagonal, the edge sign
below it) unless the directed entries matter, in which case the full
pattern is spelled out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pattern import QMatrix, Sign, SignPattern, parse_pattern, pattern_from_edges

__all__ = ["Example", "EXAMPLES", "SMALL_PATH_TABLE", "example", "known_members"]


@dataclass(frozen=True)
class Example:
    name: str
    pattern: SignPattern
    members: tuple[tuple[str, np.ndarray], ...] = ()
    note: str = ""
    tags: frozenset = field(default_factory=frozenset)

    def qmatrices(self) -> list[tuple[str, QMatrix]]:
        return [(label, QMatrix(self.pattern, m)) for label, m in self.members]


def _edges(spec: str) -> dict[tuple[int, int], Sign]:
    """Parse ``"1-2:+ 2-3:-"`` (1-based) into an edge dict."""
    out = {}
    for tok in spec.split():
        e, s = tok.split(":")
        i, j = (int(x) - 1 for x in e.split("-"))
        out[(i, j)] = Sign.of(s)
    return out


def _path6(e: float = 1.0) -> np.ndarray:
    return np.array(
        [
            [0, 1, 0, 0, 0, 0],
            [1, 0, 1, 0, 0, 0],
            [0, 1, 0, -1, 0, 0],
            [0, 0, 1, 0, 1, 0],
            [0, 0, 0, 1, 0, 1],
            [0, 0, 0, 0, e, 0],
        ],
        dtype=float,
    )


_LIST = [
    Example(
        "path6_mixed",
        parse_pattern("0 + 0 0 0 0; + 0 + 0 0 0; 0 + 0 - 0 0; 0 0 + 0 + 0; 0 0 0 + 0 +; 0 0 0 0 + 0"),
        (("all-ones", _path6(1.0)), ("last-entry-two", _path6(2.0))),
        "edge word (+,+,-,+,+); members with frequencies (0,6) and (4,2)",
        frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "path5_two_covers",
        parse_pattern("0 + 0 0 0; + 0 + 0 0; 0 + 0 - 0; 0 0 + 0 +; 0 0 0 + 0"),
        note="edge word (+,+,-,+); two 4-covers by 2-cycles with 1 and 2 negative 2-cycles",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "tree5",
        parse_pattern("0 + 0 0 0; - 0 + 0 0; 0 + 0 + +; 0 0 - 0 0; 0 0 - 0 0"),
        note="tree with centre vertex 3",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "tree5_flipped",
        parse_pattern("0 + 0 0 0; + 0 + 0 0; 0 - 0 + +; 0 0 + 0 0; 0 0 + 0 0"),
        note="tree5 with every edge sign negated",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "star5_mixed",
        pattern_from_edges(5, _edges("1-2:+ 1-3:- 1-4:+ 1-5:+")),
        note="star whose centre has leaves on edges of both signs",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "star5_positive",
        pattern_from_edges(5, _edges("1-2:+ 1-3:+ 1-4:+ 1-5:+")),
        note="star with all edges positive; every member is diagonally similar to a symmetric matrix",
        tags=frozenset({"consistent"}),
    ),
    Example(
        "octagon",
        pattern_from_edges(8, _edges("1-2:- 2-3:- 3-4:- 4-5:+ 5-6:+ 6-7:- 7-8:+ 1-8:+")),
        note="8-cycle with runs --- ++ - ++",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "cycle4_plus",
        parse_pattern("0 + 0 +; + 0 + 0; 0 + 0 +; + 0 + 0"),
        note="4-cycle with all edges positive",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "cycle4_one_plus",
        parse_pattern("0 - 0 +; + 0 - 0; 0 + 0 -; + 0 + 0"),
        note="4-cycle with edge signs (-,-,-,+)",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "cycle3_plus",
        parse_pattern("0 + +; + 0 +; + + 0"),
        note="triangle with all edges positive",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "cycle4_minus_split",
        parse_pattern("0 - 0 -; + 0 - 0; 0 + 0 +; + 0 - 0"),
        (
            ("frequency-(2,2)", np.array([[0, -10, 0, -1], [1, 0, -10, 0], [0, 1, 0, 10], [10, 0, -1, 0]], float)),
            ("frequency-(0,4)", np.array([[0, -10, 0, -1], [10, 0, -1, 0], [0, 1, 0, 10], [1, 0, -10, 0]], float)),
        ),
        "4-cycle with all edges negative and positive directed 4-cycle product",
        frozenset({"inconsistent"}),
    ),
    Example(
        "cycle4_minus_tight",
        parse_pattern("0 - 0 -; + 0 - 0; 0 + 0 -; + 0 + 0"),
        note="4-cycle with all edges negative and negative directed 4-cycle product; frequency (0,4)",
        tags=frozenset({"consistent"}),
    ),
    Example(
        "cycle4_two_minus_tight",
        parse_pattern("0 - 0 +; + 0 - 0; 0 + 0 +; + 0 + 0"),
        note="4-cycle with edge signs (-,-,+,+); frequency (2,2)",
        tags=frozenset({"consistent"}),
    ),
    Example(
        "cycle4_two_minus_split",
        parse_pattern("0 + 0 +; - 0 - 0; 0 + 0 +; + 0 + 0"),
        (
            ("frequency-(4,0)", np.array([[0, 1, 0, 1], [-1, 0, -1, 0], [0, 1, 0, 1], [1, 0, 1, 0]], float)),
            ("frequency-(2,2)", np.array([[0, 2, 0, 1], [-1, 0, -1, 0], [0, 1, 0, 1], [1, 0, 1, 0]], float)),
        ),
        "4-cycle with edge signs (-,-,+,+) and split frequencies",
        frozenset({"inconsistent"}),
    ),
    Example(
        "cycle9_three_odd_runs",
        pattern_from_edges(9, _edges("1-2:- 2-3:- 3-4:- 4-5:+ 5-6:+ 6-7:+ 7-8:- 8-9:+ 1-9:+")),
        note="9-cycle with three odd runs",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "unicyclic10_plus_cycle",
        pattern_from_edges(10, _edges("1-2:+ 2-3:+ 3-4:+ 1-4:+ 4-5:+ 5-6:+ 3-7:- 7-8:+ 7-9:+ 7-10:+")),
        note="4-cycle of positive edges with pendant trees; leaves at even distance",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "unicyclic10_odd_runs",
        pattern_from_edges(10, _edges("1-2:- 2-3:- 3-4:- 1-4:+ 4-5:+ 5-6:+ 3-7:- 7-8:+ 7-9:+ 7-10:+")),
        note="4-cycle with two odd runs and pendant trees; leaves at even distance",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "unicyclic9_plus_triangle",
        pattern_from_edges(9, _edges("1-2:+ 2-3:+ 1-3:+ 3-4:+ 4-5:+ 2-6:- 6-7:+ 6-8:+ 6-9:+")),
        note="positive triangle with pendant trees; leaves at even distance",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "bicycle7",
        pattern_from_edges(7, _edges("1-2:+ 2-3:+ 3-4:+ 1-4:+ 4-5:+ 5-6:+ 6-7:+ 5-7:+")),
        note="positive 4-cycle and positive triangle joined by an edge",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "bicycle8",
        pattern_from_edges(8, _edges("1-2:- 2-3:- 3-4:- 1-4:+ 4-5:+ 5-6:+ 6-7:+ 7-8:+ 5-8:+")),
        note="4-cycle with two odd runs joined by an edge to a positive 4-cycle",
        tags=frozenset({"inconsistent", "violated"}),
    ),
    Example(
        "singular4",
        parse_pattern("0 0 0 -; + - + 0; 0 - 0 -; 0 + 0 0"),
        (("eigenvalues-0-1-2-3", np.array([[0, 0, 0, -1], [3, -6, 1, 0], [0, -11, 0, -3], [0, 1, 0, 0]], float)),),
        "sign singular; every necessary condition holds yet a member has four real eigenvalues",
        frozenset({"delta"}),
    ),
    Example(
        "allows4",
        parse_pattern("+ + 0 0; 0 0 + 0; 0 0 - +; + + 0 0"),
        (("all-real", np.array([[7, 6, 0, 0], [0, 0, 1, 0], [0, 0, -5, 1], [2, 4, 0, 0]], float)),),
        "allows singularity; every necessary condition holds yet a member has four real eigenvalues",
        frozenset({"delta"}),
    ),
    Example(
        "nonsingular4",
        parse_pattern("+ + 0 0; 0 0 + 0; 0 0 + +; - + 0 0"),
        (("no-real", np.array([[3, 6, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1], [-2, 4, 0, 0]], float)),),
        "sign nonsingular; every necessary condition holds yet a member has no real eigenvalue",
        frozenset({"delta"}),
    ),
]

EXAMPLES: dict[str, Example] = {e.name: e for e in _LIST}


def example(name: str) -> Example:
    return EXAMPLES[name]


def known_members(p: SignPattern) -> list[tuple[str, QMatrix]]:
    """Tabulated explicit members of Q(p), labelled ``example:label``."""
    out = []
    for e in _LIST:
        if e.pattern == p:
            out.extend((f"{e.name}:{label}", m) for label, m in e.qmatrices())
    return out


def _w(s: str) -> tuple[Sign, ...]:
    return tuple(Sign.of(c) for c in s)


# Consistent tridiagonal classes of order at most 5, keyed by canonical edge
# word, with their eigenvalue frequency (i_r, i_c). Every other word of these
# orders gives an inconsistent class.
SMALL_PATH_TABLE: dict[int, dict[tuple[Sign, ...], tuple[int, int]]] = {
    2: {_w("+"): (2, 0), _w("-"): (0, 2)},
    3: {_w("++"): (3, 0), _w("--"): (1, 2)},
    4: {_w("+++"): (4, 0), _w("---"): (0, 4), _w("++-"): (2, 2), _w("+--"): (2, 2)},
    5: {_w("++++"): (5, 0), _w("----"): (1, 4), _w("++--"): (3, 2)},
}
