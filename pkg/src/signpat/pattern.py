"""Sign patterns, their qualitative classes and equivalence operations.

Indices are 0-based throughout the Python API. Text rendering and the CLI
use the usual 1-based row/column numbering.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import CapExceededError, PatternParseError, PreconditionError

__all__ = [
    "Sign",
    "SignPattern",
    "QMatrix",
    "SingularityClass",
    "StructuralClass",
    "Permute",
    "SignatureSimilarity",
    "Negate",
    "Transpose",
    "parse_pattern",
    "parse_patterns",
    "render_pattern",
    "is_irreducible",
    "is_combinatorially_symmetric",
    "structural_class",
    "apply_equivalence",
    "negate_tree_edges",
    "submatrix",
    "singularity_class",
    "tridiagonal_canonical_form",
    "tridiagonal_from_word",
    "pattern_from_edges",
    "edge_signs",
    "path_order",
    "max_zero_submatrix",
]


class Sign(enum.Enum):
    """Entry sign. Canonical ordering is ``ZERO < PLUS < MINUS``."""

    ZERO = 0
    PLUS = 1
    MINUS = -1

    def __int__(self) -> int:
        return self.value

    def __lt__(self, other: "Sign") -> bool:
        return _RANK[self] < _RANK[other]

    def __le__(self, other: "Sign") -> bool:
        return _RANK[self] <= _RANK[other]

    def __gt__(self, other: "Sign") -> bool:
        return _RANK[self] > _RANK[other]

    def __ge__(self, other: "Sign") -> bool:
        return _RANK[self] >= _RANK[other]

    def __mul__(self, other: "Sign") -> "Sign":
        return Sign(self.value * other.value)

    def __neg__(self) -> "Sign":
        return Sign(-self.value)

    @property
    def symbol(self) -> str:
        return _SYMBOL[self]

    def __str__(self) -> str:
        return self.symbol

    @classmethod
    def of(cls, x) -> "Sign":
        """Sign of a number, symbol or Sign."""
        if isinstance(x, Sign):
            return x
        if isinstance(x, str):
            try:
                return _FROM_SYMBOL[x]
            except KeyError:
                raise ValueError(f"illegal sign symbol {x!r}") from None
        return cls(int(np.sign(x)))


_RANK = {Sign.ZERO: 0, Sign.PLUS: 1, Sign.MINUS: 2}
_SYMBOL = {Sign.ZERO: "0", Sign.PLUS: "+", Sign.MINUS: "-"}
_FROM_SYMBOL = {"0": Sign.ZERO, "+": Sign.PLUS, "-": Sign.MINUS}


def _as_sign_array(entries) -> np.ndarray:
    if isinstance(entries, np.ndarray) and entries.dtype != object:
        arr = np.sign(entries).astype(np.int8)
    else:
        rows = [list(r) for r in entries]
        arr = np.array([[int(Sign.of(x)) for x in r] for r in rows], dtype=np.int8)
    if arr.ndim != 2:
        raise PreconditionError("a sign pattern must be two-dimensional")
    return arr


class SignPattern:
    """Immutable matrix over {+, -, 0}.

    Entries are stored as a read-only ``int8`` array with values in {1, -1, 0}.
    Construct from nested sequences of ``Sign``, symbols or numbers.
    """

    __slots__ = ("_a", "_key")

    def __init__(self, entries):
        a = _as_sign_array(entries).copy()
        a.setflags(write=False)
        self._a = a
        self._key = (a.shape, a.tobytes())

    @property
    def array(self) -> np.ndarray:
        """Read-only integer view with entries in {1, -1, 0}."""
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    @property
    def n(self) -> int:
        r, c = self._a.shape
        if r != c:
            raise PreconditionError("pattern is not square")
        return r

    def __getitem__(self, ij: tuple[int, int]) -> Sign:
        return Sign(int(self._a[ij]))

    def __eq__(self, other) -> bool:
        return isinstance(other, SignPattern) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return "SignPattern(" + render_pattern(self).replace("\n", "; ") + ")"

    def __str__(self) -> str:
        return render_pattern(self)

    def support(self) -> np.ndarray:
        return self._a != 0

    @classmethod
    def from_text(cls, text: str) -> "SignPattern":
        return parse_pattern(text)


class QMatrix:
    """Real matrix together with the sign pattern it realises.

    Construction fails unless ``sign(values) == pattern`` entrywise.
    """

    __slots__ = ("pattern", "values")

    def __init__(self, pattern: SignPattern, values):
        v = np.array(values, dtype=float)
        if v.shape != pattern.shape:
            raise PreconditionError(f"shape {v.shape} does not match pattern shape {pattern.shape}")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("matrix has non-finite entries")
        if not np.array_equal(np.sign(v).astype(np.int8), pattern.array):
            bad = np.argwhere(np.sign(v).astype(np.int8) != pattern.array)[0]
            raise PreconditionError(
                f"entry ({bad[0] + 1}, {bad[1] + 1}) = {v[tuple(bad)]!r} is not sign-compatible "
                f"with pattern entry {pattern[tuple(bad)]}"
            )
        v.setflags(write=False)
        self.pattern = pattern
        self.values = v

    @classmethod
    def from_values(cls, values) -> "QMatrix":
        v = np.asarray(values, dtype=float)
        return cls(SignPattern(v), v)

    @property
    def n(self) -> int:
        return self.pattern.n

    def __repr__(self) -> str:
        return f"QMatrix({self.values.tolist()!r})"


class SingularityClass(enum.Enum):
    SIGN_SINGULAR = "SignSingular"
    SIGN_NONSINGULAR = "SignNonsingular"
    ALLOWS_SINGULARITY = "AllowsSingularity"


class StructuralClass(enum.Enum):
    TRIDIAGONAL_0DIAG = "Tridiagonal0Diag"
    TREE_0DIAG = "Tree0Diag"
    CYCLE_0DIAG = "Cycle0Diag"
    UNICYCLIC_0DIAG = "Unicyclic0Diag"
    GENERAL = "General"


# --------------------------------------------------------------------------
# text I/O


def parse_pattern(text: str) -> SignPattern:
    """Parse a square sign pattern.

    Rows are separated by ``;`` or newlines, entries by whitespace. Legal
    entries are ``+``, ``-`` and ``0``; ``#`` starts a comment that runs to
    the end of the line. Blank rows are ignored.

    Raises
    ------
    PatternParseError
        On an empty, ragged or non-square pattern, or an illegal symbol.
    """
    rows: list[list[int]] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for chunk in line.split(";"):
            tokens = chunk.split()
            if not tokens:
                continue
            row = []
            for j, tok in enumerate(tokens):
                if tok not in _FROM_SYMBOL:
                    raise PatternParseError(f"illegal symbol {tok!r}", len(rows) + 1, j + 1)
                row.append(_FROM_SYMBOL[tok].value)
            if rows and len(row) != len(rows[0]):
                raise PatternParseError(
                    f"ragged row: expected {len(rows[0])} entries, found {len(row)}", len(rows) + 1
                )
            rows.append(row)
    if not rows:
        raise PatternParseError("empty pattern")
    if len(rows) != len(rows[0]):
        raise PatternParseError(f"pattern is not square: {len(rows)} rows of {len(rows[0])} entries")
    return SignPattern(np.array(rows, dtype=np.int8))


def parse_patterns(text: str) -> list[SignPattern]:
    """Parse several patterns separated by blank lines."""
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        if line.strip() == "":
            if blocks[-1]:
                blocks.append([])
        else:
            blocks[-1].append(line)
    out = []
    for block in blocks:
        if all(line.split("#", 1)[0].strip() == "" for line in block):
            continue
        out.append(parse_pattern("\n".join(block)))
    if not out:
        raise PatternParseError("empty pattern")
    return out


def render_pattern(p: SignPattern) -> str:
    """Canonical text: one row per line, entries separated by single spaces."""
    return "\n".join(" ".join(_SYMBOL[Sign(int(x))] for x in row) for row in p.array)


# --------------------------------------------------------------------------
# structure


def _reach(adj: np.ndarray, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_irreducible(p: SignPattern) -> bool:
    """True iff the digraph of ``p`` is strongly connected (n = 1 counts)."""
    n = p.n
    if n == 1:
        return True
    adj = p.support()
    return len(_reach(adj, 0)) == n and len(_reach(adj.T, 0)) == n


def is_combinatorially_symmetric(p: SignPattern) -> bool:
    s = p.support()
    return bool(np.array_equal(s, s.T))


def _undirected_edges(p: SignPattern) -> list[tuple[int, int]]:
    a = p.array
    n = p.n
    return [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j] != 0]


def structural_class(p: SignPattern) -> StructuralClass:
    """Most specific structural family of ``p``."""
    n = p.n
    a = p.array
    if n < 2 or np.any(np.diag(a) != 0) or not is_combinatorially_symmetric(p):
        return StructuralClass.GENERAL
    edges = _undirected_edges(p)
    adj = p.support()
    if len(_reach(adj, 0)) != n:
        return StructuralClass.GENERAL
    if all(a[i, i + 1] != 0 for i in range(n - 1)) and len(edges) == n - 1:
        return StructuralClass.TRIDIAGONAL_0DIAG
    if len(edges) == n - 1:
        return StructuralClass.TREE_0DIAG
    if len(edges) == n:
        deg = adj.sum(axis=1)
        if n >= 3 and np.all(deg == 2):
            return StructuralClass.CYCLE_0DIAG
        return StructuralClass.UNICYCLIC_0DIAG
    return StructuralClass.GENERAL


def path_order(p: SignPattern) -> list[int] | None:
    """Vertex order along the graph of ``p`` when it is a path, else None.

    The walk starts from the smaller-indexed endpoint, so a tridiagonal
    pattern yields ``[0, 1, ..., n-1]``.
    """
    cls = structural_class(p)
    if cls not in (StructuralClass.TRIDIAGONAL_0DIAG, StructuralClass.TREE_0DIAG):
        return None
    adj = p.support()
    deg = adj.sum(axis=1)
    if np.any(deg > 2):
        return None
    start = int(np.flatnonzero(deg == 1).min())
    order = [start]
    prev = -1
    while len(order) < p.n:
        u = order[-1]
        nxt = [int(v) for v in np.flatnonzero(adj[u]) if v != prev]
        prev = u
        order.append(nxt[0])
    return order


def edge_signs(p: SignPattern) -> dict[tuple[int, int], Sign]:
    """Signs ``sgn(p_ij p_ji)`` of the undirected edges ``i < j``.

    Only meaningful for combinatorially symmetric patterns.
    """
    a = p.array
    return {(i, j): Sign(int(a[i, j]) * int(a[j, i])) for i, j in _undirected_edges(p)}


def pattern_from_edges(n: int, edges) -> SignPattern:
    """Zero-diagonal combinatorially symmetric pattern from signed edges.

    ``edges`` maps pairs ``(i, j)`` to an edge sign. The entry above the
    diagonal is ``+`` and the one below carries the edge sign.
    """
    a = np.zeros((n, n), dtype=np.int8)
    items = edges.items() if hasattr(edges, "items") else edges
    for (i, j), s in items:
        if i == j:
            raise PreconditionError("edges must join distinct vertices")
        i, j = min(i, j), max(i, j)
        s = Sign.of(s)
        if s is Sign.ZERO:
            raise PreconditionError("edge signs must be nonzero")
        a[i, j] = 1
        a[j, i] = s.value
    return SignPattern(a)


def tridiagonal_from_word(word: Sequence) -> SignPattern:
    """Tridiagonal zero-diagonal pattern whose edge signs are ``word``."""
    return pattern_from_edges(len(word) + 1, {(i, i + 1): s for i, s in enumerate(word)})


# --------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class Permute:
    """Permutation similarity: entry ``(i, j)`` becomes ``old[sigma[i], sigma[j]]``."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise PreconditionError(f"{self.sigma} is not a permutation")

    def apply_array(self, a: np.ndarray) -> np.ndarray:
        s = np.asarray(self.sigma)
        return a[np.ix_(s, s)]


@dataclass(frozen=True)
class SignatureSimilarity:
    """Similarity by a diagonal matrix with entries ``d_i`` in {1, -1}."""

    d: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if any(x not in (1, -1) for x in self.d):
            raise PreconditionError("signature entries must be +1 or -1")

    def apply_array(self, a: np.ndarray) -> np.ndarray:
        d = np.asarray(self.d, dtype=a.dtype)
        return a * d[:, None] * d[None, :]


@dataclass(frozen=True)
class Negate:
    def apply_array(self, a: np.ndarray) -> np.ndarray:
        return -a


@dataclass(frozen=True)
class Transpose:
    def apply_array(self, a: np.ndarray) -> np.ndarray:
        return a.T.copy()


EquivalenceOp = Union[Permute, SignatureSimilarity, Negate, Transpose]


def apply_equivalence(x, *ops: EquivalenceOp):
    """Apply equivalence operations left to right to a pattern or QMatrix."""
    for op in ops:
        n = x.n
        if isinstance(op, (Permute, SignatureSimilarity)):
            size = len(op.sigma if isinstance(op, Permute) else op.d)
            if size != n:
                raise PreconditionError(f"operation of size {size} applied to order {n}")
        if isinstance(x, QMatrix):
            v = op.apply_array(x.values)
            x = QMatrix(SignPattern(v), v)
        else:
            x = SignPattern(op.apply_array(x.array.astype(np.int8)))
    return x


def negate_tree_edges(x):
    """Flip the sign of every nonzero entry below the diagonal.

    For a tree pattern this negates each edge sign ``p_ij p_ji``. Applies to
    a QMatrix too, giving the magnitude-matched member of the flipped class.
    """
    p = x.pattern if isinstance(x, QMatrix) else x
    trivial = p.n == 1 and p.array[0, 0] == 0
    if not trivial and structural_class(p) not in (StructuralClass.TRIDIAGONAL_0DIAG, StructuralClass.TREE_0DIAG):
        raise PreconditionError("negate_tree_edges requires a zero-diagonal tree pattern")
    flip = np.ones(p.shape)
    flip[np.tril_indices(p.n, -1)] = -1
    if isinstance(x, QMatrix):
        v = x.values * flip
        return QMatrix(SignPattern(v), v)
    return SignPattern((p.array * flip).astype(np.int8))


def submatrix(p: SignPattern, rows: Sequence[int], cols: Sequence[int]) -> SignPattern:
    """Submatrix on the given (0-based) rows and columns, in the given order."""
    rows = list(rows)
    cols = list(cols)
    if not rows or not cols:
        raise PreconditionError("empty index set")
    r, c = p.shape
    if any(not 0 <= i < r for i in rows) or any(not 0 <= j < c for j in cols):
        raise PreconditionError("index out of range")
    return SignPattern(p.array[np.ix_(rows, cols)])


# --------------------------------------------------------------------------
# singularity and canonical forms


def singularity_class(p: SignPattern, cap: int = 12) -> SingularityClass:
    """Classify by the signs of the nonzero terms of the determinant.

    Enumerates permutations supported by ``p`` with backtracking and stops
    as soon as both signs have been seen.

    Raises
    ------
    CapExceededError
        If ``p.n > cap``.
    """
    n = p.n
    if n > cap:
        raise CapExceededError(f"singularity class not computed: order {n} exceeds cap {cap}")
    a = p.array
    cols = [list(np.flatnonzero(a[i])) for i in range(n)]
    seen: set[int] = set()
    used = [False] * n
    used_cols: list[int] = []

    def rec(i: int, sign: int) -> bool:
        if i == n:
            seen.add(sign)
            return len(seen) == 2
        for c in cols[i]:
            c = int(c)
            if used[c]:
                continue
            inv = sum(1 for u in used_cols if u > c)
            used[c] = True
            used_cols.append(c)
            s = sign * int(a[i, c]) * (-1 if inv % 2 else 1)
            stop = rec(i + 1, s)
            used[c] = False
            used_cols.pop()
            if stop:
                return True
        return False

    rec(0, 1)
    if not seen:
        return SingularityClass.SIGN_SINGULAR
    if len(seen) == 1:
        return SingularityClass.SIGN_NONSINGULAR
    return SingularityClass.ALLOWS_SINGULARITY


def tridiagonal_canonical_form(p: SignPattern) -> tuple[Sign, ...]:
    """Edge-sign word of a tridiagonal pattern, minimised over reversal."""
    if structural_class(p) is not StructuralClass.TRIDIAGONAL_0DIAG:
        raise PreconditionError("pattern is not a zero-diagonal tridiagonal pattern")
    a = p.array
    w = tuple(Sign(int(a[i, i + 1]) * int(a[i + 1, i])) for i in range(p.n - 1))
    key = lambda word: [_RANK[s] for s in word]
    return min(w, w[::-1], key=key)


def canonical_words(n: int) -> list[tuple[Sign, ...]]:
    """All canonical edge words of order-``n`` tridiagonal patterns, sorted."""
    out = set()
    for w in itertools.product((Sign.PLUS, Sign.MINUS), repeat=n - 1):
        out.add(tridiagonal_canonical_form(tridiagonal_from_word(w)))
    return sorted(out, key=lambda word: [_RANK[s] for s in word])


def max_zero_submatrix(p: SignPattern, cap: int = 10) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Largest ``p + q`` over ``p x q`` zero submatrices with p, q >= 1.

    Returns ``(p + q, rows, cols)``; ``(0, (), ())`` if no zero entry exists.
    """
    n = p.n
    if n > cap:
        raise CapExceededError(f"zero-submatrix scan not computed: order {n} exceeds cap {cap}")
    a = p.array
    row_masks = [sum(1 << int(j) for j in np.flatnonzero(a[i])) for i in range(n)]
    full = (1 << n) - 1
    best = (0, (), ())
    for r in range(1, 1 << n):
        union = 0
        rows = []
        for i in range(n):
            if r >> i & 1:
                union |= row_masks[i]
                rows.append(i)
        free = full & ~union
        if not free:
            continue
        cols = [j for j in range(n) if free >> j & 1]
        size = len(rows) + len(cols)
        if size > best[0]:
            best = (size, tuple(rows), tuple(cols))
    return best
