"""Univariate Gaussian-kernel density estimation with Winsorized evaluation.

Densities are estimated as (1/(n*h)) * sum_i phi((x_i - x)/h) and every
evaluation is clamped into [floor, cap] before use. Clamping keeps the
log-density ratios built on top of these estimates bounded and stable in
regions where a class has little mass.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigError, EmptyClassError, InvalidDataError

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Used whenever a rule produces a degenerate (zero or non-finite) bandwidth.
FALLBACK_BANDWIDTH = 1.0

DEFAULT_FLOOR = 1e-2


@dataclass(frozen=True)
class BandwidthRule:
    """Bandwidth selection rule: ``theory``, ``silverman`` or ``fixed``.

    ``theory`` uses (log n / n)^(1/5), which is scale-free; ``silverman``
    (1.06 * sd * n^(-1/5)) adapts to the sample scale; ``fixed`` pins h.
    """

    kind: str
    h: Optional[float] = None

    _KINDS = ("theory", "silverman", "fixed")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ConfigError(f"unknown bandwidth rule {self.kind!r}")
        if self.kind == "fixed":
            if self.h is None or not math.isfinite(self.h) or self.h <= 0:
                raise ConfigError("fixed bandwidth requires h > 0")
        elif self.h is not None:
            raise ConfigError(f"rule {self.kind!r} takes no bandwidth value")

    @classmethod
    def theory(cls) -> "BandwidthRule":
        return cls("theory")

    @classmethod
    def silverman(cls) -> "BandwidthRule":
        return cls("silverman")

    @classmethod
    def fixed(cls, h: float) -> "BandwidthRule":
        return cls("fixed", float(h))

    @classmethod
    def parse(cls, text: str) -> "BandwidthRule":
        """Parse ``theory``, ``silverman`` or ``fixed:<h>``."""
        if text == "theory":
            return cls.theory()
        if text == "silverman":
            return cls.silverman()
        if text.startswith("fixed:"):
            try:
                return cls.fixed(float(text.split(":", 1)[1]))
            except ValueError as exc:
                raise ConfigError(f"bad fixed bandwidth in {text!r}") from exc
        raise ConfigError(f"unknown bandwidth spec {text!r}")

    def spec_string(self) -> str:
        return f"fixed:{self.h!r}" if self.kind == "fixed" else self.kind


class BandwidthResult(NamedTuple):
    value: float
    fallback: bool


def compute_bandwidth(
    n: int, rule: BandwidthRule, sample_sd: Optional[float] = None
) -> BandwidthResult:
    """Bandwidth for a sample of size ``n`` under ``rule``.

    Degenerate outcomes (h == 0 from n == 1 under the theory rule, sd == 0
    under Silverman, or any non-finite value) fall back to
    ``FALLBACK_BANDWIDTH`` with the flag set.
    """
    if n < 1:
        raise EmptyClassError("bandwidth requested for an empty sample")
    if rule.kind == "theory":
        h = (math.log(n) / n) ** 0.2
    elif rule.kind == "silverman":
        if sample_sd is None:
            raise ConfigError("silverman rule needs the sample sd")
        if sample_sd < 0:
            raise InvalidDataError("negative sample sd")
        h = 1.06 * sample_sd * n ** (-0.2)
    else:
        h = rule.h
    if not math.isfinite(h) or h <= 0:
        return BandwidthResult(FALLBACK_BANDWIDTH, True)
    return BandwidthResult(float(h), False)


@dataclass(frozen=True)
class MarginalDensityEstimate:
    """Fitted KDE for one feature of one class.

    Immutable after construction; evaluation is a pure function, so shared
    concurrent reads are safe.
    """

    samples: np.ndarray
    bandwidth: float
    floor: float
    cap: float
    bandwidth_fallback: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise EmptyClassError("density estimate needs a non-empty 1-D sample")
        if not np.all(np.isfinite(samples)):
            raise InvalidDataError("density samples must be finite")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ConfigError("bandwidth must be positive and finite")
        if not (math.isfinite(self.floor) and self.floor > 0):
            raise ConfigError("floor must be positive and finite")
        if not (math.isfinite(self.cap) and self.cap >= self.floor):
            raise ConfigError("cap must be finite and >= floor")

    @property
    def n(self) -> int:
        return self.samples.size


def fit_kde(
    samples, rule: BandwidthRule, floor: float = DEFAULT_FLOOR
) -> MarginalDensityEstimate:
    """Fit a Winsorized Gaussian KDE; cap is fixed at 1/floor."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size == 0:
        raise EmptyClassError("cannot fit a density on an empty class")
    if not np.all(np.isfinite(arr)):
        raise InvalidDataError("density samples must be finite")
    if not (math.isfinite(floor) and floor > 0):
        raise ConfigError("floor must be positive and finite")
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    h, fell_back = compute_bandwidth(arr.size, rule, sample_sd=sd)
    return MarginalDensityEstimate(
        samples=arr,
        bandwidth=h,
        floor=float(floor),
        cap=1.0 / float(floor),
        bandwidth_fallback=fell_back,
    )


def _raw_density(samples: np.ndarray, h: float, x: np.ndarray) -> np.ndarray:
    # One fixed reduction order over the sample axis: identical inputs give
    # bit-identical sums on every call, in every process.
    u = (samples[np.newaxis, :] - x[:, np.newaxis]) / h
    k = np.exp(-0.5 * u * u)
    return k.sum(axis=1) / (samples.size * h * _SQRT_2PI)


def eval_density(est: MarginalDensityEstimate, x):
    """Evaluate the clamped density at ``x`` (scalar or array)."""
    arr = np.asarray(x, dtype=np.float64)
    flat = np.atleast_1d(arr).ravel()
    out = np.clip(_raw_density(est.samples, est.bandwidth, flat), est.floor, est.cap)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def eval_log_density(est: MarginalDensityEstimate, x):
    """log of :func:`eval_density`; bounded in [log floor, log cap]."""
    return np.log(eval_density(est, x))


class GridDensityCache:
    """Opt-in linear-interpolation cache for repeated evaluations.

    Tabulates the raw density over [min(samples) - 5h, max(samples) + 5h]
    and clamps after interpolation, so the absolute error is bounded by
    the interpolation error of the smooth raw density alone. By default
    the grid is sized from step^2/8 * sup|f''| <= max_abs_error (with
    sup|f''| <= phi(0)/h^3 for a Gaussian-kernel estimate) and never drops
    below 2048 points. Queries beyond the grid continue its edge values;
    with any floor above the raw tail level there (the default floor is
    orders of magnitude above it) those match exact evaluation.
    """

    def __init__(
        self,
        est: MarginalDensityEstimate,
        n_points: Optional[int] = None,
        max_abs_error: float = 1e-6,
    ):
        h = est.bandwidth
        lo = float(est.samples.min()) - 5.0 * h
        hi = float(est.samples.max()) + 5.0 * h
        if n_points is None:
            step = math.sqrt(8.0 * max_abs_error * h**3 * _SQRT_2PI)
            n_points = max(2048, int(math.ceil((hi - lo) / step)) + 1)
        if n_points < 2:
            raise ConfigError("grid cache needs at least 2 points")
        self.estimate = est
        self.grid = np.linspace(lo, hi, n_points)
        self.raw_values = _raw_density(est.samples, h, self.grid)

    def density(self, x):
        arr = np.asarray(x, dtype=np.float64)
        raw = np.interp(np.atleast_1d(arr).ravel(), self.grid, self.raw_values)
        out = np.clip(raw, self.estimate.floor, self.estimate.cap)
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    def log_density(self, x):
        return np.log(self.density(x))
