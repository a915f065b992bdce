"""Eigenvalue frequency, inertia, characteristic coefficients and sign rules.

Realness of eigenvalues is read off the block structure of the real Schur
form: a 2x2 diagonal block carries a complex conjugate pair, a 1x1 block a
real eigenvalue. No threshold on imaginary parts is involved.

The characteristic polynomial is written

    Ch_B(x) = x^n - E_1 x^(n-1) + E_2 x^(n-2) - ... + (-1)^n E_n

where ``E_k`` is the sum of the k x k principal minors.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import CapExceededError, NumericalFailure, PreconditionError
from .graphs import composite_signs_by_length, max_composite_cycle_length
from .pattern import QMatrix, SignPattern

__all__ = [
    "EigenFrequency",
    "Inertia",
    "CoeffStatus",
    "CoeffSignVector",
    "Exactly",
    "Range",
    "eigen_frequency",
    "structural_zero_count",
    "inertia",
    "char_poly_coeffs",
    "coeff_sign_vector",
    "forced_real_root_count",
    "sign_changes",
    "exact_real_eigenvalue_count",
]

BORDERLINE_REL = 1e-12
MINORS_CAP = 16
EXACT_CAP = 16


@dataclass(frozen=True)
class EigenFrequency:
    """Counts of real (``i_r``) and nonreal (``i_c``) eigenvalues.

    ``borderline`` marks a classification that sat within rounding of the
    real/nonreal boundary; ``exact`` marks one that was then settled by
    exact rational arithmetic. Neither takes part in equality.
    """

    i_r: int
    i_c: int
    borderline: bool = field(default=False, compare=False)
    exact: bool = field(default=False, compare=False)

    def as_tuple(self) -> tuple[int, int]:
        return (self.i_r, self.i_c)

    def __str__(self) -> str:
        return f"({self.i_r},{self.i_c})"


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.negative, self.zero)


class CoeffStatus(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    INDETERMINATE = "?"

    @property
    def options(self) -> tuple[int, ...]:
        return {
            CoeffStatus.PLUS: (1,),
            CoeffStatus.MINUS: (-1,),
            CoeffStatus.ZERO: (0,),
            CoeffStatus.INDETERMINATE: (1, -1, 0),
        }[self]


@dataclass(frozen=True)
class CoeffSignVector:
    """Status of ``E_1, ..., E_n`` over a whole qualitative class."""

    statuses: tuple[CoeffStatus, ...]

    @property
    def n(self) -> int:
        return len(self.statuses)

    def E(self, k: int) -> CoeffStatus:
        """Status of ``E_k`` (1-based; ``E_0`` is always PLUS)."""
        if k == 0:
            return CoeffStatus.PLUS
        return self.statuses[k - 1]

    def __str__(self) -> str:
        return "(" + ",".join(s.value for s in self.statuses) + ")"


@dataclass(frozen=True)
class Exactly:
    """Real root counts pinned by the sign rule in every sign resolution.

    ``outcomes`` holds the triples ``(positive, negative, zero)`` that occur
    over all resolutions of indeterminate coefficients.
    """

    outcomes: frozenset

    @property
    def unique(self) -> tuple[int, int, int] | None:
        return next(iter(self.outcomes)) if len(self.outcomes) == 1 else None

    @property
    def real_count(self) -> int | None:
        totals = {sum(t) for t in self.outcomes}
        return totals.pop() if len(totals) == 1 else None


@dataclass(frozen=True)
class Range:
    """Bounds on the real root counts when the sign rule does not pin them."""

    positive: tuple[int, int]
    negative: tuple[int, int]
    zero: tuple[int, int]

    @property
    def real_count(self) -> None:
        return None


# --------------------------------------------------------------------------
# eigenvalues


def _matrix_values(m) -> np.ndarray:
    a = m.values if isinstance(m, QMatrix) else np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise PreconditionError("expected a square matrix")
    if not np.all(np.isfinite(a)):
        raise NumericalFailure("matrix has non-finite entries")
    return a


def structural_zero_count(p: SignPattern, cap: int = 12) -> int:
    """Number of zero eigenvalues shared by every member of Q(p).

    Equal to ``n`` minus the longest composite cycle length; 0 when the
    order exceeds ``cap``.
    """
    if p.n > cap:
        return 0
    return _zero_count(p, cap)


@functools.lru_cache(maxsize=256)
def _zero_count(p: SignPattern, cap: int) -> int:
    return p.n - max_composite_cycle_length(p, cap=cap)


def _schur_blocks(a: np.ndarray):
    """Diagonal blocks of the real Schur form as ``(size, eigenvalues, disc)``."""
    n = a.shape[0]
    if n == 0:
        return []
    try:
        t = scipy.linalg.schur(a, output="real")[0]
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(f"real Schur reduction failed: {exc}") from exc
    if not np.all(np.isfinite(t)):
        raise NumericalFailure("real Schur reduction produced non-finite values")
    blocks = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            p, q, r, s = t[i, i], t[i, i + 1], t[i + 1, i], t[i + 1, i + 1]
            disc = (p - s) ** 2 + 4.0 * q * r
            mid = 0.5 * (p + s)
            half = 0.5 * math.sqrt(abs(disc))
            if disc < 0:
                ev = (complex(mid, half), complex(mid, -half))
            else:
                ev = (complex(mid + half), complex(mid - half))
            blocks.append((2, ev, disc))
            i += 2
        else:
            blocks.append((1, (complex(t[i, i]),), None))
            i += 1
    return blocks


def eigen_frequency(m, structural_zeros: int | None = None, cap: int = 12, exact: bool = True):
    """Eigenvalue frequency of a real matrix.

    Parameters
    ----------
    m : QMatrix or array_like
        Square real matrix.
    structural_zeros : int, optional
        Number of eigenvalues known to vanish exactly. The blocks of smallest
        modulus are counted as these real zeros, so that rounding cannot
        split a multiple zero into a spurious complex pair. For a QMatrix the
        default is the structural zero count of its pattern; for a bare
        array it is 0.
    exact : bool
        Settle a borderline classification by counting the real roots of
        the exact characteristic polynomial of the stored floats (order at
        most ``EXACT_CAP``).

    Returns
    -------
    (EigenFrequency, numpy.ndarray)
        The frequency and the eigenvalues; deflated zeros are reported as 0.

    Raises
    ------
    NumericalFailure
        If the Schur reduction does not converge.
    """
    a = _matrix_values(m)
    n = a.shape[0]
    if structural_zeros is None:
        structural_zeros = structural_zero_count(m.pattern, cap) if isinstance(m, QMatrix) else 0
    if not 0 <= structural_zeros <= n:
        raise PreconditionError("structural zero count out of range")
    scale = float(np.linalg.norm(a)) or 1.0
    blocks = _schur_blocks(a)

    borderline = False
    zero_idx: set[int] = set()
    need = structural_zeros
    by_size = sorted(range(len(blocks)), key=lambda b: (max(abs(z) for z in blocks[b][1]), b))
    skipped_small = math.inf
    for b in by_size:
        if need == 0:
            break
        size = blocks[b][0]
        if size <= need:
            zero_idx.add(b)
            need -= size
        else:
            skipped_small = min(skipped_small, max(abs(z) for z in blocks[b][1]))
    if zero_idx:
        largest_zero = max(max(abs(z) for z in blocks[b][1]) for b in zero_idx)
        rest = [max(abs(z) for z in blocks[b][1]) for b in range(len(blocks)) if b not in zero_idx]
        smallest_rest = min(rest) if rest else math.inf
        if skipped_small < math.inf or largest_zero > 1e-3 * smallest_rest:
            borderline = True

    i_r = 0
    eigs: list[complex] = []
    for b, (size, ev, disc) in enumerate(blocks):
        if b in zero_idx:
            i_r += size
            eigs.extend([0j] * size)
            continue
        eigs.extend(ev)
        if size == 1:
            i_r += 1
        else:
            if disc >= 0:
                i_r += 2
            if abs(disc) <= BORDERLINE_REL * scale * scale:
                borderline = True
    if borderline and exact and n <= EXACT_CAP:
        i_r = exact_real_eigenvalue_count(a)
        return EigenFrequency(i_r, n - i_r, False, True), np.array(eigs, dtype=complex)
    return EigenFrequency(i_r, n - i_r, borderline), np.array(eigs, dtype=complex)


# --------------------------------------------------------------------------
# exact real-root counting for borderline cases


def _integer_matrix(a: np.ndarray) -> list[list[int]]:
    """Scale a float matrix by a power of two so every entry is an integer."""
    fr = [[Fraction(float(x)) for x in row] for row in a]
    den = 1
    for row in fr:
        for x in row:
            den = max(den, x.denominator)
    return [[int(x * den) for x in row] for row in fr]


def _berkowitz(a: list[list[int]]) -> list[int]:
    """Characteristic polynomial ``det(xI - A)``, highest degree first.

    Division free, so integer input stays integer.
    """
    v = [1]
    for r in range(len(a)):
        col = [a[i][r] for i in range(r)]
        row = a[r][:r]
        t = [1, -a[r][r]]
        vec = col
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(row, vec)))
            vec = [sum(a[i][j] * vec[j] for j in range(r)) for i in range(r)]
        v = [sum(t[i - j] * v[j] for j in range(len(v)) if 0 <= i - j < len(t)) for i in range(r + 2)]
    return v


def _strip(p: list) -> list:
    p = list(p)
    while p and p[0] == 0:
        p.pop(0)
    return p


def _pdivmod(num: list, den: list) -> tuple[list, list]:
    num = [Fraction(x) for x in _strip(num)]
    den = _strip(den)
    if len(num) < len(den):
        return [], num
    quot = []
    while len(num) >= len(den):
        c = num[0] / den[0]
        quot.append(c)
        for k in range(len(den)):
            num[k] -= c * den[k]
        num.pop(0)
    return quot, _strip(num)


def _pderiv(p: list) -> list:
    d = len(p) - 1
    return _strip([c * (d - k) for k, c in enumerate(p[:-1])])


def _psub(a: list, b: list) -> list:
    size = max(len(a), len(b))
    a = [0] * (size - len(a)) + list(a)
    b = [0] * (size - len(b)) + list(b)
    return _strip([x - y for x, y in zip(a, b)])


def _pgcd(a: list, b: list) -> list:
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return [Fraction(c) / a[0] for c in a]


def _sturm_real_roots(g: list) -> int:
    """Distinct real roots of a polynomial by Sturm's theorem."""
    seq = [_strip(g), _pderiv(g)]
    while seq[-1]:
        seq.append([-c for c in _pdivmod(seq[-2], seq[-1])[1]])
    seq = [q for q in seq if q]

    def changes(signs):
        s = [x for x in signs if x != 0]
        return sum(1 for u, v in zip(s, s[1:]) if (u > 0) != (v > 0))

    at_pos = [q[0] for q in seq]
    at_neg = [q[0] * (-1) ** (len(q) - 1) for q in seq]
    return changes(at_neg) - changes(at_pos)


def exact_real_eigenvalue_count(a) -> int:
    """Number of real eigenvalues, with multiplicity, in exact arithmetic.

    The float entries are taken at face value as dyadic rationals; the
    characteristic polynomial is split into square-free factors and the
    real roots of each are counted with a Sturm sequence.
    """
    a = np.asarray(a, dtype=float)
    f = _berkowitz(_integer_matrix(a))
    total = 0
    fp = _pderiv(f)
    if not fp:
        return 0
    g = _pgcd(f, fp)
    b = _pdivmod(f, g)[0]
    c = _pdivmod(fp, g)[0]
    d = _psub(c, _pderiv(b))
    i = 1
    while len(b) > 1:
        factor = _pgcd(b, d)
        b = _pdivmod(b, factor)[0]
        c = _pdivmod(d, factor)[0]
        d = _psub(c, _pderiv(b))
        if len(factor) > 1:
            total += i * _sturm_real_roots(factor)
        i += 1
    return total


def inertia(m, zero_tol: float = 1e-9) -> Inertia:
    """Counts of eigenvalues with positive, negative and zero real part.

    A real part counts as zero when ``|Re| <= zero_tol * (1 + ||m||_F)``.
    Exact zero eigenvalues should be decided by the singularity class of
    the pattern where exactness matters.
    """
    a = _matrix_values(m)
    tol = zero_tol * (1.0 + float(np.linalg.norm(a)))
    pos = neg = zero = 0
    for _, ev, _ in _schur_blocks(a):
        for z in ev:
            if abs(z.real) <= tol:
                zero += 1
            elif z.real > 0:
                pos += 1
            else:
                neg += 1
    return Inertia(pos, neg, zero)


# --------------------------------------------------------------------------
# characteristic polynomial


def _coeffs_by_minors(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    e = np.zeros(n + 1)
    e[0] = 1.0
    for k in range(1, n + 1):
        total = 0.0
        batch = []
        for idx in itertools.combinations(range(n), k):
            batch.append(a[np.ix_(idx, idx)])
            if len(batch) == 4096:
                total += float(np.linalg.det(np.array(batch)).sum())
                batch = []
        if batch:
            total += float(np.linalg.det(np.array(batch)).sum())
        e[k] = total
    return e


def _coeffs_by_traces(a: np.ndarray) -> np.ndarray:
    """Faddeev-LeVerrier recursion; returns ``E_0, ..., E_n``."""
    n = a.shape[0]
    c = np.zeros(n + 1)
    c[0] = 1.0
    mk = np.zeros_like(a)
    ident = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + c[k - 1] * ident
        c[k] = -np.trace(a @ mk) / k
    return np.array([(-1) ** k * c[k] for k in range(n + 1)])


def char_poly_coeffs(m, method: str = "auto") -> np.ndarray:
    """Return ``[E_0, E_1, ..., E_n]`` with ``E_0 = 1``.

    ``method`` is ``"minors"`` (sum of principal minors, order at most 16),
    ``"traces"`` (Faddeev-LeVerrier) or ``"auto"``, which runs both when the
    minors route is available and raises if they disagree.
    """
    a = _matrix_values(m)
    n = a.shape[0]
    if method == "traces":
        return _coeffs_by_traces(a)
    if n > MINORS_CAP:
        if method == "minors":
            raise CapExceededError(f"principal-minor expansion limited to order {MINORS_CAP}")
        return _coeffs_by_traces(a)
    by_minors = _coeffs_by_minors(a)
    if method == "minors":
        return by_minors
    if method != "auto":
        raise PreconditionError(f"unknown method {method!r}")
    by_traces = _coeffs_by_traces(a)
    norm = 1.0 + float(np.linalg.norm(a))
    for k in range(1, n + 1):
        x, y = by_minors[k], by_traces[k]
        if abs(x - y) > 1e-8 * max(abs(x), abs(y)) + 1e-10 * norm**k:
            raise NumericalFailure(f"E_{k} disagrees between minors ({x!r}) and traces ({y!r})")
    return by_minors


# --------------------------------------------------------------------------
# sign rule


def coeff_sign_vector(p: SignPattern, cap: int = 12) -> CoeffSignVector:
    """Status of each ``E_k`` over Q(p) from the signs of composite cycles.

    ``E_k`` sums one signed term per composite cycle of length k, so it has
    a fixed sign when all those cycles share a sign, is identically zero
    when there are none, and is indeterminate otherwise.
    """
    by_len = composite_signs_by_length(p, cap=cap)
    out = []
    for k in range(1, p.n + 1):
        signs = by_len.get(k, set())
        if not signs:
            out.append(CoeffStatus.ZERO)
        elif signs == {1}:
            out.append(CoeffStatus.PLUS)
        elif signs == {-1}:
            out.append(CoeffStatus.MINUS)
        else:
            out.append(CoeffStatus.INDETERMINATE)
    return CoeffSignVector(tuple(out))


def sign_changes(signs) -> int:
    """Sign changes in a sequence after dropping zeros."""
    nz = [s for s in signs if s != 0]
    return sum(1 for x, y in zip(nz, nz[1:]) if x * y < 0)


def _resolution_counts(e: tuple[int, ...]) -> tuple[int, int, int]:
    n = len(e) - 1
    top = max(k for k in range(n + 1) if e[k] != 0)
    zero = n - top
    pos = sign_changes([(-1) ** k * e[k] for k in range(top + 1)])
    neg = sign_changes(e[: top + 1])
    return pos, neg, zero


def forced_real_root_count(v: CoeffSignVector, n: int | None = None, cap: int = 12):
    """Real root counts forced by the rule of signs over a whole class.

    Every indeterminate ``E_k`` is resolved to each of ``+``, ``-`` and
    ``0`` in turn. If in every resolution both half-lines have at most one
    sign change the counts are pinned and :class:`Exactly` is returned;
    otherwise :class:`Range`.

    Raises
    ------
    CapExceededError
        If more than ``cap`` coefficients are indeterminate.
    """
    if n is not None and n != v.n:
        raise PreconditionError(f"sign vector has length {v.n}, expected {n}")
    options = [s.options for s in v.statuses]
    free = sum(1 for s in v.statuses if s is CoeffStatus.INDETERMINATE)
    if free > cap:
        raise CapExceededError(f"{free} indeterminate coefficients exceed the resolution cap {cap}")
    outcomes = set()
    pinned = True
    lo = [math.inf] * 3
    hi = [0] * 3
    for res in itertools.product(*options):
        pos, neg, zero = _resolution_counts((1,) + res)
        if pos > 1 or neg > 1:
            pinned = False
        outcomes.add((pos, neg, zero))
        for i, (a, b) in enumerate(((pos % 2, pos), (neg % 2, neg), (zero, zero))):
            lo[i] = min(lo[i], a)
            hi[i] = max(hi[i], b)
    if pinned:
        return Exactly(frozenset(outcomes))
    return Range((int(lo[0]), hi[0]), (int(lo[1]), hi[1]), (int(lo[2]), hi[2]))
