"""Step-distribution primitives: weighted step CDFs and probability boxes.

Points live on the extended real line; plain floats are used throughout,
with ``math.inf`` standing in for unbounded interval endpoints.  All types
are immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadIntervalError,
    InvalidProbabilityError,
    NonFiniteError,
    OutOfBoundsError,
)

# tolerance on total probability mass of a step CDF
WEIGHT_TOL = 1e-12
# slack when comparing float partial sums of the two bounds of a box
_DOMINANCE_TOL = 1e-9


@dataclass(frozen=True)
class BoundingInterval:
    """Closed interval [lo, hi] assumed to contain all probability mass.

    Either endpoint may be infinite; ``lo < hi`` is required.
    """

    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise NonFiniteError("interval endpoints must not be NaN")
        if not self.lo < self.hi:
            raise BadIntervalError(
                f"interval endpoints must satisfy lo < hi, got [{self.lo}, {self.hi}]"
            )

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True, eq=False)
class ExtendedOrderStats:
    """Sorted observations with the interval endpoints prepended/appended.

    ``points`` has length ``n_obs + 2``: the bounding interval's lower
    endpoint, the sorted observations, then the upper endpoint.
    """

    points: np.ndarray
    n_obs: int

    @property
    def interval(self) -> BoundingInterval:
        return BoundingInterval(float(self.points[0]), float(self.points[-1]))


def make_extended_order_stats(data, interval: BoundingInterval) -> ExtendedOrderStats:
    """Sort ``data`` and extend it with the endpoints of ``interval``.

    Raises NonFiniteError for NaN or infinite observations and
    OutOfBoundsError for observations outside the interval.  Empty data is
    allowed and yields the two endpoints alone.
    """
    arr = np.asarray(data, dtype=float).reshape(-1)
    if arr.size and not np.isfinite(arr).all():
        raise NonFiniteError("observations must be finite")
    if arr.size and ((arr < interval.lo) | (arr > interval.hi)).any():
        raise OutOfBoundsError(
            f"observations must lie within [{interval.lo}, {interval.hi}]"
        )
    points = np.concatenate(([interval.lo], np.sort(arr), [interval.hi]))
    points.setflags(write=False)
    return ExtendedOrderStats(points=points, n_obs=int(arr.size))


class WeightedStepCdf:
    """Right-continuous step CDF with atoms on the extended real line.

    Construction canonicalises the atom list: supports are sorted, equal
    supports are merged by summing their weights, and zero-weight atoms are
    dropped (so ``0 * inf`` never arises downstream).  Weights must be
    nonnegative and sum to 1 within ``WEIGHT_TOL``.
    """

    __slots__ = ("supports", "weights", "_cum")

    def __init__(self, supports, weights):
        s = np.array(supports, dtype=float).reshape(-1)
        w = np.array(weights, dtype=float).reshape(-1)
        if s.size == 0 or s.shape != w.shape:
            raise ValueError("supports and weights must be equal-length and nonempty")
        if np.isnan(s).any():
            raise NonFiniteError("support points must not be NaN")
        if np.isnan(w).any() or (w < 0).any():
            raise ValueError("weights must be nonnegative numbers")
        total = float(w.sum())
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        if s.size > 1:
            # sorts and merges tied supports in one pass; safe for repeated infs
            uniq, inverse = np.unique(s, return_inverse=True)
            if uniq.size != s.size or (uniq != s).any():
                w = np.bincount(inverse.reshape(-1), weights=w)
                s = uniq
        keep = w > 0
        if not keep.all():
            s, w = s[keep], w[keep]
        cum = np.cumsum(w)
        for a in (s, w, cum):
            a.setflags(write=False)
        self.supports = s
        self.weights = w
        self._cum = cum

    @property
    def n_atoms(self) -> int:
        return self.supports.size

    def cdf(self, x):
        """P(X <= x); right-continuous. Accepts scalars or arrays."""
        xs = np.asarray(x, dtype=float)
        if np.isnan(xs).any():
            raise NonFiniteError("cannot evaluate the CDF at NaN")
        idx = np.searchsorted(self.supports, xs, side="right")
        padded = np.concatenate(([0.0], self._cum))
        out = padded[idx]
        return float(out) if np.isscalar(x) or xs.ndim == 0 else out

    def cdf_left(self, x):
        """Left limit P(X < x). Accepts scalars or arrays."""
        xs = np.asarray(x, dtype=float)
        if np.isnan(xs).any():
            raise NonFiniteError("cannot evaluate the CDF at NaN")
        idx = np.searchsorted(self.supports, xs, side="left")
        padded = np.concatenate(([0.0], self._cum))
        out = padded[idx]
        return float(out) if np.isscalar(x) or xs.ndim == 0 else out

    def quantile(self, p: float) -> float:
        """Generalized inverse inf{x : cdf(x) >= p} for p in (0, 1]."""
        if not 0.0 < p <= 1.0 or math.isnan(p):
            raise InvalidProbabilityError(f"p must be in (0, 1], got {p!r}")
        idx = int(np.searchsorted(self._cum, p, side="left"))
        # cumulative mass can fall a few ulp short of 1 at the top
        idx = min(idx, self.supports.size - 1)
        return float(self.supports[idx])

    def __repr__(self):
        return f"WeightedStepCdf({self.n_atoms} atoms on [{self.supports[0]}, {self.supports[-1]}])"


@dataclass(frozen=True, eq=False)
class ProbabilityBox:
    """Pair of step CDFs with ``lower.cdf(x) <= upper.cdf(x)`` everywhere."""

    lower: WeightedStepCdf
    upper: WeightedStepCdf

    def __post_init__(self):
        grid = np.union1d(self.lower.supports, self.upper.supports)
        lo = self.lower.cdf(grid)
        hi = self.upper.cdf(grid)
        if (lo > hi + _DOMINANCE_TOL).any():
            raise ValueError("lower CDF exceeds upper CDF; not a probability box")


@dataclass(frozen=True)
class IntervalEstimate:
    """Credible interval [lo, hi] at credibility level ``credibility``."""

    lo: float
    hi: float
    credibility: float

    def __post_init__(self):
        if not 0.0 < self.credibility < 1.0:
            raise InvalidProbabilityError(
                f"credibility must be in (0, 1), got {self.credibility!r}"
            )
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise BadIntervalError(f"malformed interval [{self.lo}, {self.hi}]")

    @property
    def unbounded_below(self) -> bool:
        return math.isinf(self.lo) and self.lo < 0

    @property
    def unbounded_above(self) -> bool:
        return math.isinf(self.hi) and self.hi > 0


def interval_probability(box: ProbabilityBox, a: float, b: float) -> tuple[float, float]:
    """Lower/upper probability bounds for the event ``a < X <= b``.

    Returns ``(lowerP, upperP)`` with ``0 <= lowerP <= upperP <= 1``.
    """
    if not a < b:
        raise BadIntervalError(f"need a < b, got a={a!r}, b={b!r}")
    upper_p = box.upper.cdf(b) - box.lower.cdf(a)
    lower_p = max(box.lower.cdf(b) - box.upper.cdf(a), 0.0)
    upper_p = min(max(upper_p, 0.0), 1.0)
    lower_p = min(lower_p, 1.0)
    return lower_p, upper_p


def expected_pbox(stats: ExtendedOrderStats) -> ProbabilityBox:
    """Expected probability box spanned by the extended order statistics.

    Both bounds carry ``n_obs + 1`` equal steps of height ``1/(n_obs + 1)``:
    the lower bound steps at the upper cell endpoints, the upper bound at
    the lower cell endpoints.  With no observations this is the vacuous box
    (unit steps at the two interval endpoints).
    """
    n = stats.n_obs + 1
    w = np.full(n, 1.0 / n)
    lower = WeightedStepCdf(stats.points[1:], w)
    upper = WeightedStepCdf(stats.points[:-1], w)
    return ProbabilityBox(lower=lower, upper=upper)
