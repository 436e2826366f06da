"""Interval resampling engine and the point laws it induces.

``bis_run`` draws imprecise realisations of the posterior over step
distributions and records the extremes of a monotonic functional on each;
``interval_estimate`` turns those extremes into a credible interval.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .dirichlet import merge_duplicates, sample_dirichlet
from .errors import (
    AtObservationError,
    EmptySamplesError,
    InvalidProbabilityError,
    NonFiniteError,
    OutOfBoundsError,
)
from .functionals import Functional, evaluate_rows
from .pbox import (
    BoundingInterval,
    IntervalEstimate,
    WeightedStepCdf,
    make_extended_order_stats,
)

# pseudo-observation weight carried by the bounding interval itself
PRIOR_WEIGHT = 1.0

# realisations are drawn in fixed blocks, one RNG substream per block, so
# results do not depend on worker count or scheduling
_BLOCK = 256


@dataclass(frozen=True)
class BisConfig:
    """Configuration of one resampling run."""

    functional: Functional
    credibility: float
    n_resample: int
    seed: int

    def __post_init__(self):
        if not 0.0 < self.credibility < 1.0:
            raise InvalidProbabilityError(
                f"credibility must be in (0, 1), got {self.credibility!r}"
            )
        if self.n_resample < 1:
            raise ValueError("n_resample must be at least 1")


@dataclass(frozen=True, eq=False)
class QSamples:
    """Paired samples of the functional's per-realisation extremes."""

    q_min: np.ndarray
    q_max: np.ndarray

    def __post_init__(self):
        if self.q_min.shape != self.q_max.shape:
            raise ValueError("q_min and q_max must have equal length")
        if (self.q_min > self.q_max).any():
            raise ValueError("q_min must not exceed q_max")


@dataclass(frozen=True, eq=False)
class ImpreciseRealization:
    """One draw: shared cell weights and the step CDF pair they induce."""

    weights: np.ndarray
    lower: WeightedStepCdf
    upper: WeightedStepCdf


@dataclass(frozen=True)
class BetaParams:
    """Parameters of a beta law; a or b may be zero (degenerate cases)."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or self.a + self.b <= 0:
            raise ValueError(f"invalid beta parameters ({self.a}, {self.b})")


def default_n_resample(credibility: float) -> int:
    """Resample count ensuring about 100 draws in each interval tail."""
    if not 0.0 < credibility < 1.0:
        raise InvalidProbabilityError(
            f"credibility must be in (0, 1), got {credibility!r}"
        )
    x = 100.0 / (1.0 - credibility)
    # absorb float fuzz so 100/(1-0.9) lands on 1000, not 1001
    return int(math.ceil(x * (1.0 - 1e-12)))


def sample_realization(
    reduced_points, params, rng: np.random.Generator
) -> ImpreciseRealization:
    """Draw one imprecise realisation from merged points and cell parameters.

    A single weight vector is shared by both bounds: the lower CDF puts the
    weights on cell right endpoints, the upper CDF on cell left endpoints,
    so the bounds touch at every distinct interior point.
    """
    pts = np.asarray(reduced_points, dtype=float).reshape(-1)
    pr = np.asarray(params, dtype=float).reshape(-1)
    if pr.size + 1 != pts.size:
        raise ValueError("need one more point than parameters")
    w = sample_dirichlet(pr, rng)
    lower = WeightedStepCdf(pts[1:], w)
    upper = WeightedStepCdf(pts[:-1], w)
    return ImpreciseRealization(weights=w, lower=lower, upper=upper)


def _draw_weight_block(params, uniform, length, rng):
    k = params.size
    if uniform:
        e = -np.log1p(-rng.random((length, k)))
        return e / e.sum(axis=1, keepdims=True)
    g = rng.gamma(params, size=(length, k))
    return g / g.sum(axis=1, keepdims=True)


def bis_run(data, interval: BoundingInterval, cfg: BisConfig, workers: int = 1) -> QSamples:
    """Run the interval resampling algorithm.

    For each of ``cfg.n_resample`` realisations: draw a weight vector over
    the cells between merged order statistics, form the lower/upper step
    CDFs sharing those weights, and evaluate the functional on both.  The
    weight draws are blocked with one RNG substream per block derived from
    ``(cfg.seed, block_index)``; output is identical for any ``workers``.
    """
    stats = make_extended_order_stats(data, interval)
    reduced, params = merge_duplicates(stats)
    if cfg.n_resample < default_n_resample(cfg.credibility):
        warnings.warn(
            "n_resample is below the 100/(1-c) rule of thumb; "
            "interval tails may be poorly resolved",
            UserWarning,
            stacklevel=2,
        )
    uniform = bool(np.all(params == 1.0))
    lower_pts = reduced[1:]
    upper_pts = reduced[:-1]
    f = cfg.functional
    n = cfg.n_resample
    starts = range(0, n, _BLOCK)

    def run_block(block_index_start):
        b, start = block_index_start
        length = min(_BLOCK, n - start)
        block_rng = rngmod.substream(cfg.seed, b)
        w = _draw_weight_block(params, uniform, length, block_rng)
        return evaluate_rows(f, upper_pts, w), evaluate_rows(f, lower_pts, w)

    blocks = list(enumerate(starts))
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_block, blocks))
    else:
        results = [run_block(b) for b in blocks]
    q_min = np.concatenate([r[0] for r in results])
    q_max = np.concatenate([r[1] for r in results])
    return QSamples(q_min=q_min, q_max=q_max)


def interval_estimate(qs: QSamples, credibility: float) -> IntervalEstimate:
    """Credible interval spanning both empirical extreme distributions.

    The lower endpoint is the (1-c)/2 generalized inverse of the empirical
    CDF of the per-realisation minima; the upper endpoint the (1+c)/2
    generalized inverse for the maxima.  Infinite samples are legitimate
    and an infinite endpoint marks an unbounded interval.
    """
    if not 0.0 < credibility < 1.0:
        raise InvalidProbabilityError(
            f"credibility must be in (0, 1), got {credibility!r}"
        )
    n = qs.q_min.size
    if n == 0:
        raise EmptySamplesError("no resampled values to invert")
    w = np.full(n, 1.0 / n)
    lo = WeightedStepCdf(qs.q_min, w).quantile((1.0 - credibility) / 2.0)
    hi = WeightedStepCdf(qs.q_max, w).quantile((1.0 + credibility) / 2.0)
    return IntervalEstimate(lo=lo, hi=hi, credibility=credibility)


def _validated_data(data, interval: BoundingInterval) -> np.ndarray:
    arr = np.asarray(data, dtype=float).reshape(-1)
    if arr.size and not np.isfinite(arr).all():
        raise NonFiniteError("observations must be finite")
    if arr.size and ((arr < interval.lo) | (arr > interval.hi)).any():
        raise OutOfBoundsError("observations must lie within the interval")
    return arr


def point_condition_betas(
    data, interval: BoundingInterval, x: float
) -> tuple[BetaParams, BetaParams]:
    """Beta laws of the lower/upper CDF values at a fixed off-data point.

    Counting ``n_below`` observations under ``x`` and ``n_above`` over it,
    the lower bound value follows Beta(n_below, n_above + 1) and the upper
    bound value Beta(n_below + 1, n_above).
    """
    arr = _validated_data(data, interval)
    if not interval.lo < x < interval.hi:
        raise OutOfBoundsError(f"x must lie strictly inside the interval, got {x!r}")
    if (arr == x).any():
        raise AtObservationError(f"x={x!r} coincides with an observation")
    n_below = float((arr < x).sum())
    n_above = float((arr > x).sum())
    return BetaParams(n_below, n_above + 1.0), BetaParams(n_below + 1.0, n_above)


def probabilistic_projection_params(
    data, interval: BoundingInterval
) -> tuple[np.ndarray, np.ndarray]:
    """Atoms and Dirichlet parameters of the precise (imprecision-free) law.

    Each interval endpoint carries half the prior weight next to the unit
    weights of the observations; sampling Dir[params] over these atoms
    yields a precise random CDF whose value at an off-data point x follows
    Beta(n_below + 1/2, n_above + 1/2), the Jeffreys-prior posterior.
    """
    arr = _validated_data(data, interval)
    pts = np.concatenate(([interval.lo], np.sort(arr), [interval.hi]))
    raw = np.concatenate(
        ([PRIOR_WEIGHT / 2.0], np.ones(arr.size), [PRIOR_WEIGHT / 2.0])
    )
    points, inverse = np.unique(pts, return_inverse=True)
    params = np.bincount(inverse.reshape(-1), weights=raw)
    points.setflags(write=False)
    params.setflags(write=False)
    return points, params
