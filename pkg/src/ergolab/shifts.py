"""Group shift spaces and exactly evaluable invariant measures on them.

The carrier is G^N (one-sided; the shift is a surjective |G|-to-1
homomorphism) or G^Z (two-sided; the shift is bijective) over a finite
alphabet group G. Measures are represented by their exact finite-dimensional
marginals: every kind can produce the rational probability of any cylinder,
and the full distribution of length-L blocks up to the enumeration guard.

Stationarity makes cylinder probabilities independent of window position, so
words are plain tuples of element indices; `Window` carries an explicit start
for position-aware call sites.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DepthLimitExceeded,
    SystemMismatch,
    UnsupportedKind,
    WindowOutOfRange,
)
from .exact import stationary_distribution
from .groups import DenseMeasure, FiniteGroup, convolve as convolve_dense, haar

DEPTH_GUARD_STATES = 2**24

Word = tuple[int, ...]

ONE_SIDED = "one_sided"
TWO_SIDED = "two_sided"


@dataclass(frozen=True)
class ShiftSystem:
    """A shift or affine-shift dynamical system on G^N or G^Z."""

    alphabet: FiniteGroup
    sidedness: str = ONE_SIDED
    affine_constant: Optional[int] = None  # c in T(x)_i = c * x_{i+1}; None = shift

    def __post_init__(self):
        if self.sidedness not in (ONE_SIDED, TWO_SIDED):
            raise ValueError(f"bad sidedness: {self.sidedness!r}")
        if self.affine_constant is not None:
            if not 0 <= self.affine_constant < self.alphabet.order:
                raise ValueError("affine constant must be an alphabet element")
            if self.affine_constant == self.alphabet.identity:
                object.__setattr__(self, "affine_constant", None)

    @property
    def map_kind(self) -> str:
        return "shift" if self.affine_constant is None else "affine_shift"

    @property
    def one_sided(self) -> bool:
        return self.sidedness == ONE_SIDED

    def two_sided_version(self) -> "ShiftSystem":
        return ShiftSystem(self.alphabet, TWO_SIDED, self.affine_constant)

    def guard_depth(self, length: int) -> None:
        if self.alphabet.order**length > DEPTH_GUARD_STATES:
            raise DepthLimitExceeded(
                f"{self.alphabet.order}^{length} block states exceed 2^24"
            )


def shift_space(alphabet: FiniteGroup, sidedness: str = ONE_SIDED) -> ShiftSystem:
    return ShiftSystem(alphabet, sidedness)


def affine_shift_space(
    alphabet: FiniteGroup, constant: int, sidedness: str = ONE_SIDED
) -> ShiftSystem:
    return ShiftSystem(alphabet, sidedness, constant)


@dataclass(frozen=True)
class Window:
    """A cylinder specification: symbols at positions start..start+len-1."""

    start: int
    symbols: Word


class ShiftMeasure:
    """Base class for shift-invariant measures with exact marginals."""

    system: ShiftSystem
    kind: str = "abstract"

    def cylinder(self, word: Sequence[int]) -> Fraction:
        """Exact probability of the cylinder [word] (position-free)."""
        raise NotImplementedError

    def block_distribution(self, length: int) -> dict[Word, Fraction]:
        """Exact distribution of length-L blocks; guarded at 2^24 states."""
        raise NotImplementedError

    def sample(self, n: int, seed: int) -> np.ndarray:
        """A length-n word distributed per the marginals; deterministic in seed."""
        raise NotImplementedError

    def _extended(self) -> "ShiftMeasure":
        raise UnsupportedKind(f"natural extension undefined for kind {self.kind}")

    # -- shared helpers --------------------------------------------------

    def cylinder_prob(self, window: Union[Window, Sequence[int]]) -> Fraction:
        if isinstance(window, Window):
            if self.system.one_sided and window.start < 0:
                raise WindowOutOfRange("one-sided windows need start >= 0")
            word = window.symbols
        else:
            word = tuple(window)
        for s in word:
            if not 0 <= s < self.system.alphabet.order:
                raise ValueError(f"symbol {s} outside the alphabet")
        return self.cylinder(tuple(word))


@dataclass(frozen=True)
class Bernoulli(ShiftMeasure):
    """Product measure with a fixed exact marginal per coordinate."""

    system: ShiftSystem
    marginal: DenseMeasure
    kind = "bernoulli"

    def __post_init__(self):
        if self.marginal.group != self.system.alphabet:
            raise SystemMismatch("marginal must live on the alphabet group")

    def cylinder(self, word):
        p = Fraction(1)
        for s in word:
            p *= self.marginal.weights[s]
            if p == 0:
                return p
        return p

    def block_distribution(self, length):
        self.system.guard_depth(length)
        dist: dict[Word, Fraction] = {(): Fraction(1)}
        for _ in range(length):
            nxt: dict[Word, Fraction] = {}
            for word, p in dist.items():
                for s, w in enumerate(self.marginal.weights):
                    if w != 0:
                        nxt[word + (s,)] = p * w
            dist = nxt
        return dist

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        probs = np.array([float(w) for w in self.marginal.weights])
        probs /= probs.sum()
        return rng.choice(self.system.alphabet.order, size=n, p=probs)

    def _extended(self):
        return Bernoulli(self.system.two_sided_version(), self.marginal)


def shift_haar(system: ShiftSystem) -> Bernoulli:
    """Haar measure on the shift group: the uniform product measure."""
    return Bernoulli(system, haar(system.alphabet))


@dataclass(frozen=True)
class Markov(ShiftMeasure):
    """Stationary Markov measure; the initial row must be exactly stationary."""

    system: ShiftSystem
    transition: tuple[tuple[Fraction, ...], ...]
    initial: tuple[Fraction, ...]
    validate: bool = True
    kind = "markov"

    def __post_init__(self):
        n = self.system.alphabet.order
        if len(self.transition) != n or any(len(r) != n for r in self.transition):
            raise ValueError("transition matrix must be |G| x |G|")
        for row in self.transition:
            if any(p < 0 for p in row):
                raise ValueError("transition probabilities must be nonnegative")
            if sum(row) != 1:
                raise ValueError("transition rows must sum to exactly 1")
        if len(self.initial) != n or any(p < 0 for p in self.initial) or sum(self.initial) != 1:
            raise ValueError("initial distribution must be an exact probability vector")
        if self.validate:
            pushed = tuple(
                sum((self.initial[i] * self.transition[i][j] for i in range(n)), Fraction(0))
                for j in range(n)
            )
            if pushed != tuple(self.initial):
                raise ValueError("initial distribution is not stationary for the transition")

    @classmethod
    def stationary(cls, system: ShiftSystem, transition) -> "Markov":
        rows = tuple(tuple(Fraction(p) for p in row) for row in transition)
        return cls(system, rows, stationary_distribution(rows))

    def cylinder(self, word):
        if not word:
            return Fraction(1)
        p = self.initial[word[0]]
        for a, b in zip(word, word[1:]):
            if p == 0:
                return Fraction(0)
            p *= self.transition[a][b]
        return p

    def block_distribution(self, length):
        self.system.guard_depth(length)
        if length == 0:
            return {(): Fraction(1)}
        dist = {(s,): p for s, p in enumerate(self.initial) if p != 0}
        for _ in range(length - 1):
            nxt: dict[Word, Fraction] = {}
            for word, p in dist.items():
                row = self.transition[word[-1]]
                for s, q in enumerate(row):
                    if q != 0:
                        nxt[word + (s,)] = p * q
            dist = nxt
        return dist

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        n_sym = self.system.alphabet.order
        init = np.array([float(p) for p in self.initial])
        init /= init.sum()
        rows = np.array([[float(p) for p in row] for row in self.transition])
        rows /= rows.sum(axis=1, keepdims=True)
        cum = np.cumsum(rows, axis=1)
        out = np.empty(n, dtype=np.int64)
        out[0] = rng.choice(n_sym, p=init)
        u = rng.random(n)
        last = n_sym - 1
        for i in range(1, n):
            idx = int(np.searchsorted(cum[out[i - 1]], u[i], side="right"))
            out[i] = idx if idx <= last else last
        return out

    def _extended(self):
        return Markov(self.system.two_sided_version(), self.transition, self.initial)


@dataclass(frozen=True)
class PeriodicOrbit(ShiftMeasure):
    """Uniform measure on the shift orbit of a periodic point."""

    system: ShiftSystem
    word: Word
    kind = "periodic_orbit"

    def __post_init__(self):
        w = tuple(self.word)
        object.__setattr__(self, "word", w)
        if not w:
            raise ValueError("periodic word must be nonempty")
        p = len(w)
        phases = {tuple(w[(k + i) % p] for i in range(p)) for k in range(p)}
        if len(phases) != p:
            raise ValueError(
                f"word {w} has {len(phases)} distinct phases, not {p}; pass the primitive word"
            )

    @property
    def period(self) -> int:
        return len(self.word)

    def _phase_word(self, phase: int, length: int) -> Word:
        p = self.period
        return tuple(self.word[(phase + i) % p] for i in range(length))

    def cylinder(self, word):
        length = len(word)
        word = tuple(word)
        matches = sum(1 for k in range(self.period) if self._phase_word(k, length) == word)
        return Fraction(matches, self.period)

    def block_distribution(self, length):
        self.system.guard_depth(length)
        dist: dict[Word, Fraction] = {}
        share = Fraction(1, self.period)
        for k in range(self.period):
            w = self._phase_word(k, length)
            dist[w] = dist.get(w, Fraction(0)) + share
        return dist

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        phase = int(rng.integers(self.period))
        reps = n // self.period + 2
        tiled = np.tile(np.array(self.word, dtype=np.int64), reps)
        return tiled[phase : phase + n]

    def _extended(self):
        return PeriodicOrbit(self.system.two_sided_version(), self.word)


@dataclass(frozen=True)
class Mixture(ShiftMeasure):
    """Exact convex combination of measures on one system."""

    system: ShiftSystem
    components: tuple[tuple[Fraction, ShiftMeasure], ...]
    kind = "mixture"

    def __post_init__(self):
        if not self.components:
            raise ValueError("empty mixture")
        if any(m.system != self.system for _, m in self.components):
            raise SystemMismatch("mixture components live on different systems")
        if any(w < 0 for w, _ in self.components) or sum(w for w, _ in self.components) != 1:
            raise ValueError("mixture weights must be nonnegative and sum to 1")

    def cylinder(self, word):
        return sum((w * m.cylinder(word) for w, m in self.components), Fraction(0))

    def block_distribution(self, length):
        self.system.guard_depth(length)
        dist: dict[Word, Fraction] = {}
        for w, m in self.components:
            for word, p in m.block_distribution(length).items():
                dist[word] = dist.get(word, Fraction(0)) + w * p
        return dist

    def sample(self, n, seed):
        rng = np.random.default_rng(seed)
        u = rng.random()
        acc = 0.0
        chosen = self.components[-1][1]
        for w, m in self.components:
            acc += float(w)
            if u < acc:
                chosen = m
                break
        return chosen.sample(n, seed + 1)

    def _extended(self):
        return Mixture(
            self.system.two_sided_version(),
            tuple((w, m._extended()) for w, m in self.components),
        )


def _support_hint(m: ShiftMeasure, length: int) -> int:
    if isinstance(m, PeriodicOrbit):
        return m.period
    if isinstance(m, Mixture):
        return sum(_support_hint(c, length) for _, c in m.components)
    return min(m.system.alphabet.order**length, DEPTH_GUARD_STATES + 1)


@dataclass(frozen=True)
class Convolution(ShiftMeasure):
    """Lazy convolution: pushforward of left x right under pointwise products."""

    system: ShiftSystem
    left: ShiftMeasure
    right: ShiftMeasure
    kind = "convolution"

    def __post_init__(self):
        if self.left.system != self.system or self.right.system != self.system:
            raise SystemMismatch("convolution factors live on different systems")

    def cylinder(self, word):
        # (mu*nu)([w]) = sum_u mu([u]) nu([u^-1 w]); enumerate the sparser factor
        word = tuple(word)
        length = len(word)
        if not word:
            return Fraction(1)
        self.system.guard_depth(length)
        g = self.system.alphabet
        if _support_hint(self.left, length) <= _support_hint(self.right, length):
            total = Fraction(0)
            for u, p in self.left.block_distribution(length).items():
                v = tuple(g.op(g.inv(u[i]), word[i]) for i in range(length))
                q = self.right.cylinder(v)
                if q != 0:
                    total += p * q
            return total
        total = Fraction(0)
        for v, q in self.right.block_distribution(length).items():
            u = tuple(g.op(word[i], g.inv(v[i])) for i in range(length))
            p = self.left.cylinder(u)
            if p != 0:
                total += p * q
        return total

    def block_distribution(self, length):
        self.system.guard_depth(length)
        g = self.system.alphabet
        left = self.left.block_distribution(length)
        right = self.right.block_distribution(length)
        dist: dict[Word, Fraction] = {}
        for u, p in left.items():
            for v, q in right.items():
                w = tuple(g.op(a, b) for a, b in zip(u, v))
                dist[w] = dist.get(w, Fraction(0)) + p * q
        return dist

    def sample(self, n, seed):
        u = self.left.sample(n, seed)
        v = self.right.sample(n, seed + 10**6)
        return self.system.alphabet.np_op[u, v]

    def _extended(self):
        return convolve_shift(self.left._extended(), self.right._extended())


@dataclass(frozen=True)
class ProductMeasure(ShiftMeasure):
    """Product of two shift measures, over the direct-product alphabet.

    Symbol (a, b) of the product alphabet has index a*|H| + b, matching
    groups.direct_product. Built via skew.product_system.
    """

    system: ShiftSystem
    left: ShiftMeasure
    right: ShiftMeasure
    kind = "product"

    def __post_init__(self):
        expect = self.left.system.alphabet.order * self.right.system.alphabet.order
        if self.system.alphabet.order != expect:
            raise SystemMismatch("product system alphabet must be the direct product")

    def _split(self, word: Word) -> tuple[Word, Word]:
        m = self.right.system.alphabet.order
        return tuple(s // m for s in word), tuple(s % m for s in word)

    def cylinder(self, word):
        u, v = self._split(tuple(word))
        return self.left.cylinder(u) * self.right.cylinder(v)

    def block_distribution(self, length):
        self.system.guard_depth(length)
        m = self.right.system.alphabet.order
        dist: dict[Word, Fraction] = {}
        for u, p in self.left.block_distribution(length).items():
            for v, q in self.right.block_distribution(length).items():
                w = tuple(a * m + b for a, b in zip(u, v))
                dist[w] = p * q
        return dist

    def sample(self, n, seed):
        m = self.right.system.alphabet.order
        u = self.left.sample(n, seed)
        v = self.right.sample(n, seed + 10**6)
        return u * m + v

    def _extended(self):
        return ProductMeasure(
            self.system.two_sided_version(),
            self.left._extended(),
            self.right._extended(),
        )


# -- module-level operations ---------------------------------------------------


def cylinder_prob(mu: ShiftMeasure, window: Union[Window, Sequence[int]]) -> Fraction:
    return mu.cylinder_prob(window)


def convolve_shift(mu: ShiftMeasure, nu: ShiftMeasure) -> ShiftMeasure:
    """Convolution of shift measures; simplifies where a closed form exists."""
    if mu.system != nu.system:
        raise SystemMismatch("convolution needs measures on the same system")
    if isinstance(mu, Bernoulli) and isinstance(nu, Bernoulli):
        return Bernoulli(mu.system, convolve_dense(mu.marginal, nu.marginal))
    if isinstance(mu, Mixture):
        return Mixture(
            mu.system, tuple((w, convolve_shift(m, nu)) for w, m in mu.components)
        )
    if isinstance(nu, Mixture):
        return Mixture(
            nu.system, tuple((w, convolve_shift(mu, m)) for w, m in nu.components)
        )
    return Convolution(mu.system, mu, nu)


def is_shift_invariant(mu: ShiftMeasure, depth: int) -> bool:
    """Check mu(T^-1 [w]) = mu([w]) exactly for all words up to the depth.

    For the shift, T^-1[w] is the union over first symbols g of [g w]; for an
    affine shift with constant c the continuation symbols pick up c^-1.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mu.system.guard_depth(depth + 1)
    g = mu.system.alphabet
    c = mu.system.affine_constant
    for length in range(1, depth + 1):
        for word in _all_words(g.order, length):
            if c is None:
                target = word
            else:
                cinv = g.inv(c)
                target = tuple(g.op(cinv, s) for s in word)
            pulled = sum(
                (mu.cylinder((first,) + target) for first in g.elements()),
                Fraction(0),
            )
            if pulled != mu.cylinder(word):
                return False
    return True


def _all_words(n_symbols: int, length: int):
    word = [0] * length
    while True:
        yield tuple(word)
        i = length - 1
        while i >= 0 and word[i] == n_symbols - 1:
            word[i] = 0
            i -= 1
        if i < 0:
            return
        word[i] += 1


def sample(mu: ShiftMeasure, n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise ValueError("sample length must be >= 1")
    return mu.sample(n, seed)


def natural_extension(mu: ShiftMeasure) -> ShiftMeasure:
    """The two-sided stationary measure with the same finite marginals."""
    if not mu.system.one_sided:
        raise UnsupportedKind("natural extension applies to one-sided measures")
    return mu._extended()


@dataclass(frozen=True)
class ExtensionReport:
    passed: bool
    witness: str = ""


def verify_extension(mu: ShiftMeasure, depth: int) -> ExtensionReport:
    """Marginal consistency and two-sided invariance of the natural extension."""
    ext = natural_extension(mu)
    n = mu.system.alphabet.order
    mu.system.guard_depth(depth + 1)
    for length in range(1, depth + 1):
        for word in _all_words(n, length):
            a = mu.cylinder(word)
            b = ext.cylinder(word)
            if a != b:
                return ExtensionReport(False, f"marginal mismatch at {word}: {a} vs {b}")
    g = mu.system.alphabet
    for length in range(1, depth):
        for word in _all_words(n, length):
            base = ext.cylinder(word)
            pre = sum((ext.cylinder((s,) + word) for s in g.elements()), Fraction(0))
            post = sum((ext.cylinder(word + (s,)) for s in g.elements()), Fraction(0))
            if pre != base:
                return ExtensionReport(False, f"prepend inconsistency at {word}")
            if post != base:
                return ExtensionReport(False, f"append inconsistency at {word}")
    if not is_shift_invariant(ext, depth):
        return ExtensionReport(False, "extension is not shift-invariant")
    return ExtensionReport(True)
