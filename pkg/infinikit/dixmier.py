# infinikit/dixmier.py
"""Dixmier-trace diagnostics: sigma_N / ln N along a dyadic schedule.

No limit point (index omega) is ever chosen. The estimate reports the
liminf/limsup of the extrapolated log-means over the last window of blocks,
and calls the sequence measurable when that spread is below tolerance.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from infinikit import config
from infinikit.errors import InsufficientDataError, NoTailError, PreconditionError
from infinikit.hyperseq import describe
from infinikit.opcalc import SpectralSequence, pointwise_sum

log = logging.getLogger(__name__)

WINDOW = 7
MEASURABILITY_PROXY = "convergence of smoothed sigma_N/ln N along the dyadic schedule"
TOWER_LEVELS = (1.0, 2.0)


# --- Partial sums ------------------------------------------------------------------
def _check_available(s: SpectralSequence, n: int) -> None:
    if n > len(s) and s.tail is None:
        raise InsufficientDataError(
            f"N={n} exceeds the truncation ({len(s)} terms) and there is no tail"
        )


def _segment_sum(s: SpectralSequence, start: int, stop: int) -> float:
    if stop < start:
        return 0.0
    chunk = s.terms(start, stop)
    if np.any(chunk < 0) or not np.all(np.isfinite(chunk)):
        raise PreconditionError(
            f"spectral terms {start}..{stop} must be finite and nonnegative; "
            f"tail {s.describe_tail()}"
        )
    return math.fsum(chunk.tolist())


def partial_sums(s: SpectralSequence, points: Sequence[int]) -> list[float]:
    """sigma_N for each N in points (strictly increasing), segment by segment."""
    if any(b <= a for a, b in zip(points, points[1:])):
        raise PreconditionError("evaluation points must be strictly increasing")
    if not points:
        return []
    _check_available(s, points[-1])
    segments: list[float] = []
    out: list[float] = []
    prev = 0
    for n in points:
        segments.append(_segment_sum(s, prev + 1, n))
        out.append(math.fsum(segments))
        prev = n
    assert all(b >= a for a, b in zip(out, out[1:])), "sigma_N must be nondecreasing"
    return out


def partial_sum(s: SpectralSequence, n: int) -> float:
    """sigma_N = mu_1 + ... + mu_N, compensated."""
    if n < 0:
        raise PreconditionError(f"N must be >= 0, got {n}")
    if n == 0:
        return 0.0
    return partial_sums(s, [n])[0]


def gamma(s: SpectralSequence, n: int) -> float:
    """gamma_N = sigma_N / ln N."""
    if n < 2:
        raise PreconditionError(f"gamma_N needs N >= 2, got {n}")
    return partial_sum(s, n) / math.log(n)


def dyadic_schedule(cap: int) -> list[int]:
    """2, 4, ..., 2^J with 2^J <= cap."""
    if cap < 2:
        return []
    return [1 << j for j in range(1, cap.bit_length())]


def _default_cap(s: SpectralSequence) -> int:
    if s.tail is not None:
        return config.DIXMIER_CAP
    return 1 << (len(s).bit_length() - 1) if len(s) else 0


def gamma_table(s: SpectralSequence, cap: int | None = None) -> list[tuple[int, float]]:
    """(N, gamma_N) over the dyadic schedule."""
    schedule = dyadic_schedule(cap if cap is not None else _default_cap(s))
    sigmas = partial_sums(s, schedule)
    return [(n, sig / math.log(n)) for n, sig in zip(schedule, sigmas)]


# --- Estimate ----------------------------------------------------------------------
@dataclass(frozen=True)
class DixmierEstimate:
    value: float | None
    liminf: float
    limsup: float
    measurable: bool
    schedule: list[int]
    spread: float
    gamma_values: list[float]
    extrapolated: list[float] = field(default_factory=list)
    smoothing: bool = True
    tol: float = 1e-3

    def to_doc(self) -> dict[str, object]:
        return {
            "schedule": self.schedule,
            "gamma_values": self.gamma_values,
            "extrapolated": self.extrapolated,
            "liminf": self.liminf,
            "limsup": self.limsup,
            "spread": self.spread,
            "measurable": self.measurable,
            "value": self.value,
            "tol": self.tol,
            "smoothing": self.smoothing,
            "measurability_proxy": MEASURABILITY_PROXY,
        }


def _intercepts(schedule: list[int], gammas: list[float]) -> list[float]:
    """Secant through consecutive (1/ln N, gamma_N), read at 1/ln N = 0."""
    xs = [1.0 / math.log(n) for n in schedule]
    out = []
    for j in range(1, len(schedule)):
        x0, x1 = xs[j - 1], xs[j]
        g0, g1 = gammas[j - 1], gammas[j]
        out.append((g1 * x0 - g0 * x1) / (x0 - x1))
    return out


def _cesaro_pairs(values: list[float]) -> list[float]:
    return [0.5 * (a + b) for a, b in zip(values, values[1:])]


def dixmier_estimate(
    s: SpectralSequence,
    cap: int | None = None,
    *,
    tol: float | None = None,
    smoothing: bool = True,
    window: int = WINDOW,
) -> DixmierEstimate:
    """Extrapolated gamma along N_j = 2^j and a measurability verdict."""
    tol = config.TOL_MEAS if tol is None else tol
    schedule = dyadic_schedule(cap if cap is not None else _default_cap(s))
    needed = 4 if smoothing else 3
    if len(schedule) < needed:
        raise InsufficientDataError(
            f"schedule {schedule} is too short; raise the cap or supply a tail"
        )
    sigmas = partial_sums(s, schedule)
    gammas = [sig / math.log(n) for n, sig in zip(schedule, sigmas)]
    extrapolated = _intercepts(schedule, gammas)
    if smoothing:
        extrapolated = _cesaro_pairs(extrapolated)
    tail_window = extrapolated[-window:]
    lo, hi = min(tail_window), max(tail_window)
    spread = hi - lo
    measurable = bool(spread < tol)
    value = extrapolated[-1] if measurable else None
    log.info(
        "dixmier: cap=2^%d spread=%.3g measurable=%s value=%s",
        len(schedule),
        spread,
        measurable,
        value,
    )
    return DixmierEstimate(
        value=value,
        liminf=lo,
        limsup=hi,
        measurable=measurable,
        schedule=schedule,
        spread=spread,
        gamma_values=gammas,
        extrapolated=tail_window,
        smoothing=smoothing,
        tol=tol,
    )


# --- Order, scale, positivity, linearity ---------------------------------------------
def order_of(s: SpectralSequence) -> Fraction:
    """alpha = -p of the tail's leading class; log factors do not change it."""
    if s.tail is None:
        raise NoTailError("the order of an infinitesimal is read from its tail")
    lead = s.tail.rate
    if lead is None:
        if s.tail.symbolic:
            raise PreconditionError("the zero sequence is of every order")
        raise NoTailError(f"tail growth is unknown: {describe(s.tail)}")
    return -lead.p


@dataclass(frozen=True)
class ScaleReport:
    factor: int
    points: list[int]
    discrepancies: list[float]
    window_max: float
    final: float

    def to_doc(self) -> dict[str, object]:
        return {
            "factor": self.factor,
            "points": self.points,
            "discrepancies": self.discrepancies,
            "window_max": self.window_max,
            "final": self.final,
        }


def scale_check(
    s: SpectralSequence, factor: int = 2, cap: int | None = None, *, window: int = WINDOW
) -> ScaleReport:
    """|gamma_{mN} - gamma_N| along the schedule."""
    if factor < 2:
        raise PreconditionError(f"scale factor must be an integer >= 2, got {factor}")
    schedule = dyadic_schedule(cap if cap is not None else _default_cap(s) // factor)
    if not schedule:
        raise InsufficientDataError("scale check needs a nonempty schedule")
    scaled = [factor * n for n in schedule]
    points = sorted(set(schedule) | set(scaled))
    sigma = dict(zip(points, partial_sums(s, points)))
    diffs = [
        abs(sigma[m] / math.log(m) - sigma[n] / math.log(n))
        for n, m in zip(schedule, scaled)
    ]
    tail = diffs[-window:]
    return ScaleReport(factor, schedule, diffs, max(tail), diffs[-1])


def positivity_check(s: SpectralSequence, cap: int | None = None) -> bool:
    return all(g >= 0 for _, g in gamma_table(s, cap))


@dataclass(frozen=True)
class LinearityReport:
    n: int
    gamma_sum: float
    gamma_parts: tuple[float, float]
    residual: float

    def to_doc(self) -> dict[str, object]:
        return {
            "n": self.n,
            "gamma_sum": self.gamma_sum,
            "gamma_parts": list(self.gamma_parts),
            "residual": self.residual,
        }


def linearity_check(s1: SpectralSequence, s2: SpectralSequence, n_max: int) -> LinearityReport:
    """gamma of the pointwise-sum proxy against gamma(s1) + gamma(s2) at n_max."""
    for s in (s1, s2):
        _check_available(s, n_max)
    g1, g2 = gamma(s1, n_max), gamma(s2, n_max)
    total = gamma(pointwise_sum(s1, s2), n_max)
    return LinearityReport(n_max, total, (g1, g2), abs(total - g1 - g2))


# --- Dyadic tower ------------------------------------------------------------------
def tower_levels(n: np.ndarray, levels: tuple[float, float] = TOWER_LEVELS) -> np.ndarray:
    """c_k on n in (2^(2^k), 2^(2^(k+1))], alternating levels[0], levels[1]; n <= 4 gets levels[0]."""
    c = np.full(n.shape, levels[0], dtype=np.float64)
    k = 0
    top = int(n.max()) if n.size else 0
    while (1 << (1 << k)) < top:
        lo, hi = 1 << (1 << k), 1 << (1 << (k + 1))
        c[(n > lo) & (n <= hi)] = levels[k % 2]
        k += 1
    return c


def tower_sequence(
    length: int | None = None, levels: tuple[float, float] = TOWER_LEVELS
) -> SpectralSequence:
    """Smallest nonincreasing majorant of c_k/n over dyadic-tower blocks.

    Upward level changes past `length` are not seen, so the envelope is exact
    only when no block boundary lies in (length/2, length].
    """
    length = 2 * config.DIXMIER_CAP if length is None else length
    if length < 1:
        raise PreconditionError(f"tower length must be >= 1, got {length}")
    n = np.arange(1, length + 1, dtype=np.float64)
    raw = tower_levels(n, levels) / n
    envelope = np.maximum.accumulate(raw[::-1])[::-1]
    return SpectralSequence(envelope)
