"""Shared test data and independent oracles."""

from fractions import Fraction

import numpy as np
import pytest

# 15 observations drawn from a unit lognormal; fixed reference sample used
# across the suite
SMALL_SAMPLE = (
    1.435, 0.276, 3.603, 0.211, 2.996,
    7.289, 0.426, 0.124, 1.523, 4.603,
    1.696, 0.620, 0.338, 6.351, 1.026,
)


@pytest.fixture(scope="session")
def small_sample():
    return np.array(SMALL_SAMPLE)


def oracle_split_mean(supports, weights, p, tail):
    """Exact atom-split conditional mean via Fraction arithmetic.

    ``supports`` must be strictly increasing; ``weights`` and ``p`` are
    Fractions with the weights summing to exactly 1.  With ``tail`` False
    this is the mean of the lowest-p part, else of the upper (1-p) tail.
    The atom at the split quantile contributes only the mass needed to hit
    p exactly.
    """
    cum = []
    running = Fraction(0)
    for w in weights:
        running += w
        cum.append(running)
    assert running == 1
    k = next(i for i, c in enumerate(cum) if c >= p)
    if not tail:
        below = sum(w * s for s, w in zip(supports[:k], weights[:k]))
        prev = cum[k - 1] if k > 0 else Fraction(0)
        return (below + (p - prev) * supports[k]) / p
    above = sum(w * s for s, w in zip(supports[k + 1 :], weights[k + 1 :]))
    return ((cum[k] - p) * supports[k] + above) / (1 - p)


def random_fraction_instance(rng, max_atoms=5):
    """Random small step distribution with exact rational weights."""
    n = int(rng.integers(1, max_atoms + 1))
    raw = rng.integers(1, 20, size=n)
    total = int(raw.sum())
    weights = [Fraction(int(r), total) for r in raw]
    supports = sorted(rng.choice(np.arange(-50, 51), size=n, replace=False))
    supports = [Fraction(int(s), 4) for s in supports]
    denom = int(rng.integers(2, 64))
    p = Fraction(int(rng.integers(1, denom)), denom)
    return supports, weights, p
