"""Circle endomorphisms x -> kx mod 1: the non-symbolic carrier.

Lebesgue (Haar) invariance is checked on exact rational interval endpoints.
Itineraries through the generating partition [i/k, (i+1)/k) are computed in
exact arithmetic for rational starting points. Lebesgue-typical sampling
draws a fresh high-precision random dyadic point per 40-symbol block rather
than shadowing one float orbit, which loses a bit of precision per step.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

import numpy as np

from .entropy import EntropyEstimate, empirical_block_entropy, entropy_rate
from .errors import BadK, DepthLimitExceeded
from .exact import parse_ratio
from .groups import cyclic
from .shifts import PeriodicOrbit, shift_space

BLOCK_SYMBOLS = 40
FLOAT_PRECISION_BUDGET_BITS = 40


@dataclass(frozen=True)
class CircleSystem:
    """x -> kx mod 1 with the generating partition into k equal intervals."""

    k: int

    def __post_init__(self):
        if self.k < 2:
            raise BadK("the multiplier must be an integer >= 2")

    @property
    def generating_partition(self) -> list[tuple[Fraction, Fraction]]:
        k = self.k
        return [(Fraction(i, k), Fraction(i + 1, k)) for i in range(k)]

    def preimage_intervals(self, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
        """T^-1 [lo, hi) as k disjoint intervals, exactly."""
        k = self.k
        return [(Fraction(lo + i, k), Fraction(hi + i, k)) for i in range(k)]


def times_k(k: int) -> CircleSystem:
    sys = CircleSystem(k)
    # partition refinement invariant: each generating interval pulls back to
    # k intervals of length 1/k^2
    for lo, hi in sys.generating_partition:
        pieces = sys.preimage_intervals(lo, hi)
        assert len(pieces) == k
        assert all(b - a == Fraction(1, k * k) for a, b in pieces)
    return sys


def haar_invariance_check(sys: CircleSystem, depth: int) -> bool:
    """Lebesgue(T^-1 I) = Lebesgue(I) exactly for all depth-d partition intervals."""
    if depth * math.log2(sys.k) > 24:
        raise DepthLimitExceeded(f"{sys.k}^{depth} intervals exceed the guard")
    k = sys.k
    cells = k**depth
    width = Fraction(1, cells)
    for j in range(cells):
        lo, hi = j * width, (j + 1) * width
        pulled = sum(
            (b - a for a, b in sys.preimage_intervals(lo, hi)), Fraction(0)
        )
        if pulled != hi - lo:
            return False
    return True


def symbolic_coding(
    sys: CircleSystem, x0: Union[Fraction, int, str, float], n: int
) -> np.ndarray:
    """Itinerary of x0 through the generating partition, length n.

    Rational starting points iterate exactly; float starting points iterate
    in double precision with a warning once the orbit outruns the precision
    budget (about 40 doublings).
    """
    if n < 1:
        raise ValueError("itinerary length must be >= 1")
    k = sys.k
    out = np.empty(n, dtype=np.int64)
    if isinstance(x0, float):
        if n * math.log2(k) > FLOAT_PRECISION_BUDGET_BITS:
            warnings.warn(
                f"float orbit of length {n} exceeds the {FLOAT_PRECISION_BUDGET_BITS}-bit "
                "precision budget; symbols beyond it are unreliable",
                stacklevel=2,
            )
        x = x0 % 1.0
        for i in range(n):
            x *= k
            s = int(x)
            s = k - 1 if s >= k else s
            out[i] = s
            x -= s
        return out
    x = parse_ratio(x0) % 1
    for i in range(n):
        x *= k
        s = int(x)
        out[i] = s
        x -= s
    return out


def _coded_block(rng: random.Random, k: int, length: int) -> list[int]:
    """Exact itinerary of a fresh random dyadic point, via integer arithmetic."""
    bits_per_symbol = max(1, (k - 1).bit_length())
    precision = length * bits_per_symbol + 64
    num = rng.getrandbits(precision)  # the point num / 2^precision
    mask = (1 << precision) - 1
    out = []
    for _ in range(length):
        num *= k
        out.append(num >> precision)
        num &= mask
    return out


def sample_lebesgue_coding(sys: CircleSystem, n_symbols: int, seed: int) -> list[list[int]]:
    """Blocks of coded symbols from independent Lebesgue-distributed points."""
    rng = random.Random(seed)
    words = []
    remaining = n_symbols
    while remaining > 0:
        length = min(BLOCK_SYMBOLS, remaining)
        words.append(_coded_block(rng, sys.k, length))
        remaining -= length
    return words


@dataclass(frozen=True)
class CircleMeasure:
    kind: str  # lebesgue | periodic_atomic
    orbit: tuple[Fraction, ...] = ()


def lebesgue() -> CircleMeasure:
    return CircleMeasure("lebesgue")


def periodic_atomic(sys: CircleSystem, point: Union[Fraction, str]) -> CircleMeasure:
    """Equal atoms on the (purely periodic) orbit of a rational p/q, gcd(q, k) = 1."""
    x0 = parse_ratio(point) % 1
    if gcd(x0.denominator, sys.k) != 1:
        raise ValueError(
            f"denominator {x0.denominator} shares a factor with k={sys.k}; orbit not periodic"
        )
    orbit = [x0]
    x = (sys.k * x0) % 1
    while x != x0:
        orbit.append(x)
        x = (sys.k * x) % 1
    return CircleMeasure("periodic_atomic", tuple(orbit))


def circle_entropy_report(
    sys: CircleSystem,
    mu: CircleMeasure,
    depth: int,
    n_symbols: int = 10**6,
    seeds: int = 1,
    base_seed: int = 0,
) -> EntropyEstimate:
    """Entropy through the generating partition.

    Lebesgue: empirical conditional block entropy over coded sample blocks,
    expected ln k. Periodic atoms: the itinerary is an exactly periodic word,
    so the rate is exactly zero.
    """
    if mu.kind == "periodic_atomic":
        period = len(mu.orbit)
        word = symbolic_coding(sys, mu.orbit[0], period)
        coded = PeriodicOrbit(shift_space(cyclic(sys.k)), tuple(int(s) for s in word))
        return entropy_rate(coded, max(2, period + 1), tol=1e-12)
    words: list[list[int]] = []
    per_seed = n_symbols // seeds
    for s in range(seeds):
        words.extend(sample_lebesgue_coding(sys, per_seed, base_seed + s))
    return empirical_block_entropy(words, depth, alphabet_size=sys.k)
