"""Electrometer logic: window width -> charge number.

The calibration curve is width(n) = 2*x_plus(beta(n)) evaluated on the
continuous relaxation of the charge number; a measured width is inverted by
bisection inside each monotone segment of the integer scan and then
rounded. Multiple preimages (humped calibration curves) are reported, not
resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError, WidthOutOfRangeError
from .params import DerivedParams
from .response import tuning_points
from .steady_state import _check_charge_number, _solve_real

_WIDTH_RTOL = 1e-6      # bisection target: |width(n_hat) - width_measured|
_GRID_HIT_RTOL = 1e-9   # scan value counts as an exact hit below this
_BISECT_MAX = 200

INCREASING = "increasing"
DECREASING = "decreasing"

SHAPE_INCREASING = "monotone_increasing"
SHAPE_DECREASING = "monotone_decreasing"
SHAPE_HUMPED = "humped"
SHAPE_OTHER = "other"


@dataclass(frozen=True)
class ChargeEstimate:
    """Inversion result; candidates lists every preimage when ambiguous."""

    n_hat: float               # continuous estimate (first preimage)
    n_int: int                 # round(n_hat)
    residual: float            # width(n_int) - width_measured, rad/s
    bracket: tuple[int, int]   # (n_lo, n_hi) searched
    ambiguous: bool
    candidates: tuple[int, ...]


@dataclass(frozen=True)
class MonotonicityReport:
    """Directional regions of x_plus(n); regions tile [n_min, n_max]."""

    regions: tuple[tuple[int, int, str], ...]
    shape: str


@dataclass(frozen=True)
class DetectionMetrics:
    min_force: float                    # N, smallest detectable Coulomb force
    surface_density_sensitivity: float  # cm^-2


def width_of_n(dp: DerivedParams, n: float) -> float:
    """OMIT window width 2*x_plus at (real-relaxed) charge number n."""
    if not (math.isfinite(n) and n >= 0):
        raise ParameterError(f"charge number must be finite and >= 0, got {n!r}")
    ss = _solve_real(dp, float(n))
    return tuning_points(dp.params.kappa, dp.params.gamma_m, ss.beta).width


def _x_plus_of_n(dp: DerivedParams, n: float) -> float:
    ss = _solve_real(dp, float(n))
    return tuning_points(dp.params.kappa, dp.params.gamma_m, ss.beta).x_plus


def _check_bracket(n_min: int, n_max: int) -> tuple[int, int]:
    lo = int(_check_charge_number(n_min))
    hi = int(_check_charge_number(n_max))
    if lo >= hi:
        raise ParameterError(f"need n_min < n_max, got {n_min!r} >= {n_max!r}")
    return lo, hi


def estimate_charge(
    dp: DerivedParams,
    width_measured: float,
    n_min: int,
    n_max: int,
) -> ChargeEstimate:
    """Invert a measured window width to a charge number on [n_min, n_max].

    Scans integer n, bisects every bracketing segment on real n until
    |width - width_measured| < 1e-6 * width_measured, and rounds. The
    attainable range is defined by the integer-resolution scan; widths
    outside it raise WidthOutOfRangeError with the (min, max) attached.
    All preimages are reported in ascending-n order; ambiguous is set when
    there is more than one.
    """
    lo, hi = _check_bracket(n_min, n_max)
    if not (math.isfinite(width_measured) and width_measured >= 0):
        raise ParameterError(f"width_measured must be finite and >= 0, got {width_measured!r}")

    grid = list(range(lo, hi + 1))
    w = [width_of_n(dp, k) for k in grid]
    w_lo, w_hi = min(w), max(w)
    scale = max(w_hi, width_measured, 1e-300)
    if width_measured < w_lo - 1e-12 * scale or width_measured > w_hi + 1e-12 * scale:
        raise WidthOutOfRangeError(
            f"width {width_measured!r} rad/s is outside the attainable range "
            f"[{w_lo!r}, {w_hi!r}] over n in [{lo}, {hi}]",
            attainable=(w_lo, w_hi),
        )

    hit_tol = _GRID_HIT_RTOL * scale
    target = width_measured
    preimages: list[float] = []
    consumed = set()  # segment indices adjacent to an exact grid hit
    for i, k in enumerate(grid):
        if abs(w[i] - target) <= hit_tol:
            preimages.append(float(k))
            consumed.add(i - 1)
            consumed.add(i)

    for i in range(len(grid) - 1):
        if i in consumed:
            continue
        g_lo, g_hi = w[i] - target, w[i + 1] - target
        if g_lo == 0.0 or g_hi == 0.0 or (g_lo > 0) == (g_hi > 0):
            continue
        a, b = float(grid[i]), float(grid[i + 1])
        ga = g_lo
        n_hat = 0.5 * (a + b)
        for _ in range(_BISECT_MAX):
            n_hat = 0.5 * (a + b)
            gm = width_of_n(dp, n_hat) - target
            if abs(gm) < _WIDTH_RTOL * max(target, 1e-300) or (b - a) < 1e-12:
                break
            if (gm > 0) == (ga > 0):
                a, ga = n_hat, gm
            else:
                b = n_hat
        preimages.append(n_hat)

    preimages.sort()
    deduped: list[float] = []
    for v in preimages:
        if not deduped or abs(v - deduped[-1]) > 1e-6:
            deduped.append(v)

    candidates: list[int] = []
    for v in deduped:
        r = round(v)
        if not candidates or candidates[-1] != r:
            candidates.append(r)

    n_hat = deduped[0]
    n_int = round(n_hat)
    residual = width_of_n(dp, n_int) - width_measured
    return ChargeEstimate(
        n_hat=n_hat,
        n_int=n_int,
        residual=residual,
        bracket=(lo, hi),
        ambiguous=len(deduped) > 1,
        candidates=tuple(candidates),
    )


def monotonicity_scan(dp: DerivedParams, n_min: int, n_max: int) -> MonotonicityReport:
    """Classify the direction structure of x_plus(n) on integer n.

    Exact zero steps (possible only in degenerate pump-off configurations)
    are folded into the preceding run.
    """
    lo, hi = _check_bracket(n_min, n_max)
    xs = [_x_plus_of_n(dp, k) for k in range(lo, hi + 1)]

    signs: list[int] = []
    prev = 1
    for i in range(len(xs) - 1):
        d = xs[i + 1] - xs[i]
        s = 1 if d > 0 else (-1 if d < 0 else prev)
        signs.append(s)
        prev = s

    regions: list[tuple[int, int, str]] = []
    start = lo
    for i in range(1, len(signs) + 1):
        if i == len(signs) or signs[i] != signs[i - 1]:
            direction = INCREASING if signs[i - 1] > 0 else DECREASING
            regions.append((start, lo + i, direction))
            start = lo + i

    if len(regions) == 1:
        shape = SHAPE_INCREASING if regions[0][2] == INCREASING else SHAPE_DECREASING
    elif (len(regions) == 2 and regions[0][2] == INCREASING
          and regions[1][2] == DECREASING):
        shape = SHAPE_HUMPED
    else:
        shape = SHAPE_OTHER
    return MonotonicityReport(regions=tuple(regions), shape=shape)


def detection_metrics(dp: DerivedParams) -> DetectionMetrics:
    """Single-charge force floor and surface-charge-density sensitivity.

    min_force is exactly dp.eta (the Coulomb force of one elementary charge
    on the biased resonator at distance r0); the density sensitivity counts
    one charge per (0.1*r0)^2 patch, in cm^-2.
    """
    r0_cm = dp.params.r0 * 100.0
    return DetectionMetrics(
        min_force=dp.eta,
        surface_density_sensitivity=1.0 / (0.1 * r0_cm) ** 2,
    )
