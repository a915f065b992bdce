"""Explicit members of a qualitative class with controlled spectra.

A recipe fixes the magnitudes of some arcs (the *base* entries); every
other nonzero entry of the pattern receives magnitude ``eps``. With
``eps = 0`` the matrix is block diagonal up to permutation and its spectrum
is known in closed form; small positive ``eps`` keeps each simple base
eigenvalue nearby and therefore keeps its realness.

Recipes
-------
simple cycle
    Unit magnitudes on one simple cycle.
composite powers
    Parts of a composite cycle, ordered by smallest vertex, weighted
    ``10**p`` for ``p = 1, ..., t``; part ``p`` contributes the ``l``-th
    roots of ``+-10**(p*l)``.
M-scaled
    A fixed member of the principal subclass on a vertex set ``S`` plus
    parts of a composite cycle off ``S`` weighted ``M**p``, where ``M``
    exceeds every eigenvalue modulus of the inner block.
interpolated
    ``t`` on arcs of the first composite cycle only, ``1/t`` on arcs of the
    second only and 1 on shared arcs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import CalibrationError, PreconditionError
from .graphs import CompositeCycle, SimpleCycle
from .pattern import QMatrix, SignPattern, render_pattern, submatrix
from .spectral import EigenFrequency, eigen_frequency, structural_zero_count

__all__ = [
    "RecipeKind",
    "WitnessRecipe",
    "WitnessMatrix",
    "simple_recipe",
    "composite_recipe",
    "mscaled_recipe",
    "interpolated_recipe",
    "build_simple",
    "build_composite_powers",
    "build_mscaled",
    "build_interpolated",
    "build",
    "base_spectrum",
    "predicted_bounds",
    "calibrate",
    "bisect_interpolated",
]

MAX_HALVINGS = 48


class RecipeKind(enum.Enum):
    SIMPLE_CYCLE = "SimpleCycle"
    COMPOSITE_POWERS = "CompositePowers"
    MSCALED = "MScaled"
    INTERPOLATED = "Interpolated"


@dataclass(frozen=True)
class WitnessRecipe:
    """Description of a witness family, independent of ``eps``.

    ``cycles`` is the supporting composite cycle (the outer one for
    M-scaled recipes, the first one for interpolated recipes).
    """

    kind: RecipeKind
    cycles: CompositeCycle
    subset: tuple[int, ...] = ()
    inner: tuple[tuple[float, ...], ...] = ()
    inner_frequency: tuple[int, int, int] | None = None
    M: float | None = None
    second: CompositeCycle | None = None
    t: float | None = None

    def describe(self) -> str:
        if self.kind is RecipeKind.MSCALED:
            s = "{" + ",".join(str(v + 1) for v in self.subset) + "}"
            return f"{self.kind.value}(M={self.M:g}) inner on {s} with {self.cycles}"
        if self.kind is RecipeKind.INTERPOLATED:
            return f"{self.kind.value}(t={self.t:g}) {self.cycles} / {self.second}"
        return f"{self.kind.value} {self.cycles}"

    def to_record(self) -> dict:
        rec: dict = {"kind": self.kind.value, "cycles": _cycles_record(self.cycles)}
        if self.kind is RecipeKind.MSCALED:
            rec["subset"] = [v + 1 for v in self.subset]
            rec["M"] = self.M
            rec["inner"] = [list(r) for r in self.inner]
        if self.kind is RecipeKind.INTERPOLATED:
            rec["second"] = _cycles_record(self.second)
            rec["t"] = self.t
        return rec


def _cycles_record(c: CompositeCycle | None):
    if c is None:
        return None
    return [[v + 1 for v in part.vertices] for part in c.parts]


@dataclass
class WitnessMatrix:
    """A concrete member of Q(P) with its verified frequency.

    Recipe-built witnesses carry the recipe, ``epsilon`` and the predicted
    range of ``i_r``; sampled or tabulated members only carry ``origin``.
    """

    pattern: SignPattern
    matrix: QMatrix
    frequency: EigenFrequency
    eigenvalues: np.ndarray
    origin: str
    recipe: WitnessRecipe | None = None
    epsilon: float | None = None
    predicted: tuple[int, int] | None = None
    calibrated: bool = False
    halvings: int = 0
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_matrix(cls, m: QMatrix, origin: str) -> "WitnessMatrix":
        freq, eigs = eigen_frequency(m)
        return cls(m.pattern, m, freq, eigs, origin)

    def reverify(self) -> EigenFrequency:
        """Recompute the frequency from the stored matrix and compare."""
        m = QMatrix(self.pattern, self.matrix.values)
        freq, _ = eigen_frequency(m)
        if freq != self.frequency:
            raise CalibrationError(
                f"re-verification gave {freq}, recorded {self.frequency}", last_frequency=freq
            )
        return freq

    def to_record(self) -> dict:
        rec = {
            "pattern": render_pattern(self.pattern),
            "origin": self.origin,
            "matrix": [[float(x) for x in row] for row in self.matrix.values],
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "frequency": list(self.frequency.as_tuple()),
        }
        if self.recipe is not None:
            rec["recipe"] = self.recipe.to_record()
            rec["epsilon"] = self.epsilon
            rec["predicted_real_range"] = list(self.predicted)
            rec["calibrated"] = self.calibrated
        return rec


# --------------------------------------------------------------------------
# recipes


def _check_cycles(p: SignPattern, c: CompositeCycle) -> None:
    a = p.array
    for i, j in c.arcs:
        if not (0 <= i < p.n and 0 <= j < p.n) or a[i, j] == 0:
            raise PreconditionError(f"arc ({i + 1},{j + 1}) of {c} is not in the digraph")


def _as_composite(c) -> CompositeCycle:
    if isinstance(c, CompositeCycle):
        return c
    if isinstance(c, SimpleCycle):
        return CompositeCycle((c,))
    return CompositeCycle(tuple(c))


def simple_recipe(gamma: SimpleCycle) -> WitnessRecipe:
    return WitnessRecipe(RecipeKind.SIMPLE_CYCLE, CompositeCycle((gamma,)))


def composite_recipe(gamma) -> WitnessRecipe:
    return WitnessRecipe(RecipeKind.COMPOSITE_POWERS, _as_composite(gamma))


def mscaled_recipe(
    p: SignPattern,
    subset: Sequence[int],
    inner: QMatrix,
    outer,
    M: float | None = None,
) -> WitnessRecipe:
    """Embed ``inner`` on ``subset`` and weight the parts of ``outer`` by ``M**p``.

    ``M`` defaults to ``2 * (1 + max |eigenvalue of inner|)`` and must exceed
    ``max(1, max |eigenvalue of inner|)``.
    """
    subset = tuple(sorted(int(v) for v in subset))
    outer = _as_composite(outer)
    if set(subset) & outer.vertices:
        raise PreconditionError("outer composite cycle must avoid the inner vertex set")
    sub = submatrix(p, subset, subset)
    if inner.pattern != sub:
        raise PreconditionError("inner matrix does not realise the principal subpattern")
    freq, eigs = eigen_frequency(inner)
    rho = float(np.max(np.abs(eigs))) if len(eigs) else 0.0
    if M is None:
        M = 2.0 * (1.0 + rho)
    if not M > max(1.0, rho):
        raise PreconditionError(f"M = {M} must exceed max(1, {rho})")
    zeros = structural_zero_count(inner.pattern)
    return WitnessRecipe(
        RecipeKind.MSCALED,
        outer,
        subset=subset,
        inner=tuple(tuple(float(x) for x in row) for row in inner.values),
        inner_frequency=(freq.i_r, freq.i_c, zeros),
        M=float(M),
    )


def interpolated_recipe(gamma1, gamma2, t: float) -> WitnessRecipe:
    if not t > 0:
        raise PreconditionError("interpolation parameter must be positive")
    g1, g2 = _as_composite(gamma1), _as_composite(gamma2)
    if g1.length != g2.length or g1.sign == g2.sign:
        raise PreconditionError("interpolation needs composite cycles of equal length and opposite sign")
    return WitnessRecipe(RecipeKind.INTERPOLATED, g1, second=g2, t=float(t))


def _base_entries(p: SignPattern, r: WitnessRecipe) -> dict[tuple[int, int], float]:
    """Signed base values keyed by arc."""
    a = p.array
    out: dict[tuple[int, int], float] = {}
    if r.kind is RecipeKind.INTERPOLATED:
        first = set(r.cycles.arcs)
        second = set(r.second.arcs)
        for arc in first | second:
            if arc in first and arc in second:
                mag = 1.0
            elif arc in first:
                mag = r.t
            else:
                mag = 1.0 / r.t
            out[arc] = a[arc] * mag
        return out
    if r.kind is RecipeKind.MSCALED:
        for ii, i in enumerate(r.subset):
            for jj, j in enumerate(r.subset):
                if a[i, j] != 0:
                    out[(i, j)] = r.inner[ii][jj]
    for k, part in enumerate(r.cycles.parts, start=1):
        if r.kind is RecipeKind.SIMPLE_CYCLE:
            mag = 1.0
        elif r.kind is RecipeKind.COMPOSITE_POWERS:
            mag = 10.0**k
        else:
            mag = r.M**k
        for arc in part.arcs:
            out[arc] = a[arc] * mag
    return out


def build(p: SignPattern, recipe: WitnessRecipe, eps: float) -> np.ndarray:
    """Matrix of the recipe at perturbation size ``eps`` (``eps = 0`` allowed)."""
    if eps < 0:
        raise PreconditionError("eps must be nonnegative")
    _check_cycles(p, recipe.cycles)
    if recipe.second is not None:
        _check_cycles(p, recipe.second)
    b = p.array.astype(float) * eps
    for arc, v in _base_entries(p, recipe).items():
        b[arc] = v
    return b


def build_simple(p: SignPattern, gamma: SimpleCycle, eps: float) -> np.ndarray:
    return build(p, simple_recipe(gamma), eps)


def build_composite_powers(p: SignPattern, gamma, eps: float) -> np.ndarray:
    return build(p, composite_recipe(gamma), eps)


def build_mscaled(p: SignPattern, subset, inner: QMatrix, outer, eps: float, M: float | None = None) -> np.ndarray:
    return build(p, mscaled_recipe(p, subset, inner, outer, M), eps)


def build_interpolated(p: SignPattern, gamma1, gamma2, t: float, eps: float) -> np.ndarray:
    return build(p, interpolated_recipe(gamma1, gamma2, t), eps)


# --------------------------------------------------------------------------
# predictions


def _part_roots(part: SimpleCycle, weight: float) -> np.ndarray:
    """Roots of ``x**l = product of arc values`` for a weighted cycle."""
    l = part.length
    target = part.product_sign.value
    k = np.arange(l)
    phase = (2 * np.pi * k + (0 if target > 0 else np.pi)) / l
    return weight * np.exp(1j * phase)


def _part_real_count(part: SimpleCycle) -> int:
    if part.length % 2:
        return 1
    return 2 if part.product_sign.value > 0 else 0


def base_spectrum(p: SignPattern, recipe: WitnessRecipe) -> np.ndarray:
    """Closed-form spectrum at ``eps = 0`` for simple and composite recipes."""
    if recipe.kind not in (RecipeKind.SIMPLE_CYCLE, RecipeKind.COMPOSITE_POWERS):
        raise PreconditionError("closed form available only for simple and composite recipes")
    roots = []
    for k, part in enumerate(recipe.cycles.parts, start=1):
        w = 1.0 if recipe.kind is RecipeKind.SIMPLE_CYCLE else 10.0**k
        roots.extend(_part_roots(part, w))
    roots.extend([0.0] * (p.n - recipe.cycles.length))
    return np.array(roots, dtype=complex)


def _parity_clip(lo: int, hi: int, n: int) -> tuple[int, int]:
    if (n - lo) % 2:
        lo += 1
    if (n - hi) % 2:
        hi -= 1
    return lo, hi


def predicted_bounds(p: SignPattern, recipe: WitnessRecipe, zeros: int | None = None) -> tuple[int, int]:
    """Interval that ``i_r`` must lie in for small ``eps``.

    Simple nonzero base eigenvalues keep their realness; the structural
    zeros of the pattern stay real; everything else is left open.
    """
    n = p.n
    if zeros is None:
        zeros = structural_zero_count(p)
    if recipe.kind is RecipeKind.INTERPOLATED:
        return _parity_clip(zeros, n, n)
    real = sum(_part_real_count(c) for c in recipe.cycles.parts)
    nonreal = recipe.cycles.length - real
    if recipe.kind is RecipeKind.MSCALED:
        i_r, i_c, inner_zeros = recipe.inner_frequency
        real += i_r - inner_zeros
        nonreal += i_c
    return _parity_clip(real + zeros, n - nonreal, n)


# --------------------------------------------------------------------------
# calibration


def _clusters(eigs: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Group numerically equal eigenvalues; returns (centre, multiplicity)."""
    out: list[list] = []
    for z in eigs:
        for c in out:
            if abs(c[0] - z) <= tol:
                c[1] += 1
                break
        else:
            out.append([complex(z), 1])
    return [(c[0], c[1]) for c in out]


def _base_targets(base: np.ndarray) -> tuple[list[complex], float]:
    """Simple nonzero base eigenvalues and the matching radius."""
    scale = max(1.0, float(np.linalg.norm(base)))
    eigs = np.linalg.eigvals(base)
    zero_tol = 1e-9 * scale
    eigs = np.where(np.abs(eigs) <= zero_tol, 0.0, eigs)
    cl = _clusters(eigs, 1e-7 * scale)
    centres = [c for c, _ in cl]
    if len(centres) > 1:
        gap = min(abs(a - b) for i, a in enumerate(centres) for b in centres[i + 1 :])
    else:
        gap = abs(centres[0]) if centres and centres[0] != 0 else scale
    targets = [c for c, m in cl if m == 1 and abs(c) > zero_tol]
    return targets, gap / 3.0


def calibrate(
    p: SignPattern,
    recipe: WitnessRecipe,
    predicted: tuple[int, int] | None = None,
    eps0: float | None = None,
    max_halvings: int = MAX_HALVINGS,
) -> WitnessMatrix:
    """Shrink ``eps`` until the witness provably behaves as predicted.

    Starting from ``eps0`` (default ``1e-3`` times the smallest base
    magnitude) ``eps`` is halved until every simple nonzero base eigenvalue
    has exactly one eigenvalue of the perturbed matrix within a third of the
    smallest gap of the base spectrum, and ``i_r`` lies in the predicted
    interval.

    Raises
    ------
    CalibrationError
        After ``max_halvings`` halvings, carrying the last observed frequency.
    """
    if predicted is None:
        predicted = predicted_bounds(p, recipe)
    base = build(p, recipe, 0.0)
    targets, radius = _base_targets(base)
    if eps0 is None:
        mags = np.abs(base[base != 0])
        eps0 = 1e-3 * float(mags.min()) if mags.size else 1e-3
    eps = eps0
    last = None
    for h in range(max_halvings + 1):
        values = build(p, recipe, eps)
        m = QMatrix(p, values)
        freq, eigs = eigen_frequency(m)
        last = freq
        matched = all(int(np.sum(np.abs(eigs - z) < radius)) == 1 for z in targets)
        if matched and predicted[0] <= freq.i_r <= predicted[1]:
            w = WitnessMatrix(
                p, m, freq, eigs, recipe.describe(), recipe, eps, predicted, calibrated=True, halvings=h
            )
            if freq.borderline:
                w.notes.append("borderline classification")
            return w
        eps /= 2.0
    raise CalibrationError(
        f"calibration of {recipe.describe()} failed after {max_halvings} halvings; last frequency {last}",
        last_frequency=last,
        last_epsilon=eps * 2.0,
    )


def bisect_interpolated(
    p: SignPattern,
    gamma1,
    gamma2,
    eps: float,
    func: Callable[[np.ndarray], float] = np.linalg.det,
    t_lo: float = 1e-3,
    t_hi: float = 1e3,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> float:
    """Locate ``t`` where ``func(B(t))`` changes sign, bisecting in ``log t``.

    Raises
    ------
    PreconditionError
        If ``func`` has the same sign at both ends of the bracket.
    """
    f = lambda t: float(func(build_interpolated(p, gamma1, gamma2, t, eps)))
    f_lo, f_hi = f(t_lo), f(t_hi)
    if f_lo == 0:
        return t_lo
    if f_hi == 0:
        return t_hi
    if f_lo * f_hi > 0:
        raise PreconditionError("no sign change of the target function on the bracket")
    a, b = math.log(t_lo), math.log(t_hi)
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        fm = f(math.exp(mid))
        if abs(fm) < tol or b - a < 1e-15:
            return math.exp(mid)
        if fm * f_lo < 0:
            b = mid
        else:
            a, f_lo = mid, fm
    return math.exp(0.5 * (a + b))
