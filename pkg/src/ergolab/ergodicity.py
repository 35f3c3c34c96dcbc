"""Ergodicity verdicts: exact where decidable, Birkhoff evidence elsewhere.

Bernoulli, Markov, periodic-orbit, and mixture measures get exact verdicts.
Convolutions get statistical evidence only: time averages over sampled
orbits are compared against exact cylinder probabilities, with an
across-seed dispersion statistic. The statistical verdict is a calibrated
heuristic, never a proof, and the report says so.

Disjointness of two factor systems is certified structurally (trivial
factor, or periodic against full-support mixing), never computed; the
`declared` escape hatch is flagged as unverified in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import CertificateInvalid, FactorNotErgodic, InsufficientSteps
from .shifts import (
    Bernoulli,
    Convolution,
    Markov,
    Mixture,
    PeriodicOrbit,
    ShiftMeasure,
    ShiftSystem,
    Word,
    convolve_shift,
    is_shift_invariant,
)

MIN_BIRKHOFF_STEPS = 10_000
DISPERSION_THRESHOLD = 5e-3


@dataclass(frozen=True)
class ErgodicityVerdict:
    verdict: str  # ergodic | non_ergodic | unknown
    method: str  # exact_bernoulli | exact_markov | exact_orbit | exact_mixture | birkhoff
    witness: Optional[str] = None


def _flatten_mixture(mu: Mixture) -> list[tuple[Fraction, ShiftMeasure]]:
    out: list[tuple[Fraction, ShiftMeasure]] = []
    for w, m in mu.components:
        if isinstance(m, Mixture):
            out.extend((w * w2, m2) for w2, m2 in _flatten_mixture(m))
        else:
            out.append((w, m))
    return out


def _determining_depth(mu: ShiftMeasure) -> int:
    """Block depth at which equality pins down the measure, for exact kinds."""
    if isinstance(mu, PeriodicOrbit):
        return mu.period + 1
    return 2  # bernoulli and markov are order <= 1


def _markov_irreducible_on_support(mu: Markov) -> bool:
    support = [i for i, p in enumerate(mu.initial) if p > 0]
    idx = {s: i for i, s in enumerate(support)}
    n = len(support)
    reach = [[False] * n for _ in range(n)]
    for a in support:
        for b in support:
            if mu.transition[a][b] > 0:
                reach[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return all(reach[i][j] for i in range(n) for j in range(n))


def is_ergodic_exact(mu: ShiftMeasure) -> ErgodicityVerdict:
    """Exact verdict for the evaluable kinds; Unknown for convolutions."""
    if isinstance(mu, Bernoulli):
        return ErgodicityVerdict("ergodic", "exact_bernoulli")
    if isinstance(mu, Markov):
        if _markov_irreducible_on_support(mu):
            return ErgodicityVerdict("ergodic", "exact_markov")
        return ErgodicityVerdict(
            "non_ergodic", "exact_markov", "transition support is not irreducible"
        )
    if isinstance(mu, PeriodicOrbit):
        return ErgodicityVerdict("ergodic", "exact_orbit")
    if isinstance(mu, Mixture):
        comps = _flatten_mixture(mu)
        for _, m in comps:
            if isinstance(m, Convolution):
                return ErgodicityVerdict("unknown", "birkhoff")
        depth = max(_determining_depth(m) for _, m in comps)
        mu.system.guard_depth(depth)
        first = comps[0][1]
        for i, (_, m) in enumerate(comps[1:], start=1):
            for length in range(1, depth + 1):
                if m.block_distribution(length) != first.block_distribution(length):
                    return ErgodicityVerdict(
                        "non_ergodic",
                        "exact_mixture",
                        f"components 0 and {i} disagree at depth {length}",
                    )
        inner = is_ergodic_exact(first)
        return ErgodicityVerdict(inner.verdict, "exact_mixture", inner.witness)
    return ErgodicityVerdict("unknown", "birkhoff")


@dataclass(frozen=True)
class BirkhoffRow:
    word: Word
    exact: float
    mean: float
    bound: float  # 3 sigma binomial at the step count
    dispersion: float  # across-seed standard deviation
    passed: bool


@dataclass(frozen=True)
class BirkhoffReport:
    rows: tuple[BirkhoffRow, ...]
    n_steps: int
    n_seeds: int
    dispersion_threshold: float
    consistent: bool
    note: str = "time-average evidence; heuristic, not a proof"


def default_observables(system: ShiftSystem, seed: int = 0) -> list[Word]:
    """All cylinders of length <= 2 plus 3 seeded random length-4 cylinders."""
    n = system.alphabet.order
    obs: list[Word] = [(s,) for s in range(n)]
    obs += [(a, b) for a in range(n) for b in range(n)]
    rng = np.random.default_rng(seed)
    for _ in range(3):
        obs.append(tuple(int(v) for v in rng.integers(0, n, size=4)))
    return obs


def birkhoff_report(
    mu: ShiftMeasure,
    observables: Sequence[Word],
    n_steps: int,
    n_seeds: int,
    base_seed: int = 0,
    dispersion_threshold: float = DISPERSION_THRESHOLD,
) -> BirkhoffReport:
    """Per-observable time averages across seeds versus exact cylinder masses."""
    if n_steps < MIN_BIRKHOFF_STEPS:
        raise InsufficientSteps(f"need at least {MIN_BIRKHOFF_STEPS} steps")
    observables = [tuple(w) for w in observables]
    max_len = max(len(w) for w in observables)
    means = np.zeros((len(observables), n_seeds))
    for s in range(n_seeds):
        word = mu.sample(n_steps + max_len - 1, base_seed + s)
        for i, obs in enumerate(observables):
            hits = np.ones(n_steps, dtype=bool)
            for j, sym in enumerate(obs):
                hits &= word[j : j + n_steps] == sym
            means[i, s] = hits.mean()
    rows = []
    all_pass = True
    for i, obs in enumerate(observables):
        p = float(mu.cylinder(obs))
        grand = float(means[i].mean())
        disp = float(means[i].std())
        bound = 3.0 * (p * (1.0 - p) / n_steps) ** 0.5
        ok = abs(grand - p) <= bound + 1e-12 and disp < dispersion_threshold
        all_pass &= ok
        rows.append(BirkhoffRow(obs, p, grand, bound, disp, ok))
    return BirkhoffReport(
        tuple(rows), n_steps, n_seeds, dispersion_threshold, all_pass
    )


@dataclass(frozen=True)
class DisjointnessCertificate:
    kind: str  # point_mass | periodic_vs_mixing | declared
    justification: str = ""


def _is_fixed_point_mass(mu: ShiftMeasure) -> bool:
    return isinstance(mu, PeriodicOrbit) and mu.period == 1


def _is_full_support_bernoulli(mu: ShiftMeasure) -> bool:
    return isinstance(mu, Bernoulli) and all(w > 0 for w in mu.marginal.weights)


def validate_certificate(
    cert: DisjointnessCertificate, mu: ShiftMeasure, nu: ShiftMeasure
) -> bool:
    """Structural check; returns False only for the unverified `declared` kind."""
    if cert.kind == "point_mass":
        if not (_is_fixed_point_mass(mu) or _is_fixed_point_mass(nu)):
            raise CertificateInvalid("point_mass needs a factor on a single fixed point")
        return True
    if cert.kind == "periodic_vs_mixing":
        pairs = ((mu, nu), (nu, mu))
        if not any(
            isinstance(a, PeriodicOrbit) and _is_full_support_bernoulli(b)
            for a, b in pairs
        ):
            raise CertificateInvalid(
                "periodic_vs_mixing needs a periodic orbit against a full-support bernoulli"
            )
        return True
    if cert.kind == "declared":
        return False
    raise CertificateInvalid(f"unknown certificate kind {cert.kind!r}")


@dataclass(frozen=True)
class ConvolutionErgodicityReport:
    certificate: DisjointnessCertificate
    certificate_verified: bool
    invariance_exact: bool
    invariance_depth: int
    birkhoff: BirkhoffReport
    verdict: str  # ergodic-consistent | inconsistent


def convolution_ergodicity_scenario(
    mu: ShiftMeasure,
    nu: ShiftMeasure,
    cert: DisjointnessCertificate,
    n_steps: int = 10**6,
    n_seeds: int = 100,
    base_seed: int = 0,
    invariance_depth: int = 6,
    observable_seed: int = 0,
) -> ConvolutionErgodicityReport:
    """Theorem-style scenario: ergodic factors, certificate, convolution evidence."""
    for name, factor in (("left", mu), ("right", nu)):
        verdict = is_ergodic_exact(factor)
        if verdict.verdict != "ergodic":
            raise FactorNotErgodic(
                f"{name} factor is {verdict.verdict} ({verdict.witness or verdict.method})"
            )
    verified = validate_certificate(cert, mu, nu)
    conv = convolve_shift(mu, nu)
    invariant = is_shift_invariant(conv, invariance_depth)
    report = birkhoff_report(
        conv,
        default_observables(mu.system, observable_seed),
        n_steps,
        n_seeds,
        base_seed,
    )
    verdict = "ergodic-consistent" if (invariant and report.consistent) else "inconsistent"
    return ConvolutionErgodicityReport(
        cert, verified, invariant, invariance_depth, report, verdict
    )
