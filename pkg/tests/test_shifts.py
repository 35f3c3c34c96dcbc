import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergolab import cyclic, haar, measure, symmetric
from ergolab.errors import (
    DepthLimitExceeded,
    SystemMismatch,
    UnsupportedKind,
    WindowOutOfRange,
)
from ergolab.shifts import (
    Bernoulli,
    Convolution,
    Markov,
    Mixture,
    PeriodicOrbit,
    ProductMeasure,
    Window,
    affine_shift_space,
    convolve_shift,
    cylinder_prob,
    is_shift_invariant,
    natural_extension,
    sample,
    shift_haar,
    shift_space,
    verify_extension,
)

C2 = cyclic(2)
C3 = cyclic(3)
SYS2 = shift_space(C2)
SYS3 = shift_space(C3)


def bern(p_one: str) -> Bernoulli:
    p = F(p_one)
    return Bernoulli(SYS2, measure(C2, [1 - p, p]))


def some_measures(system):
    """A representative measure of each evaluable kind on the system."""
    g = system.alphabet
    rng = random.Random(g.order)
    raw = [rng.randint(1, 9) for _ in g.elements()]
    tot = sum(raw)
    yield Bernoulli(system, measure(g, [F(r, tot) for r in raw]))
    if g.order == 2:
        yield Markov.stationary(system, [["2/3", "1/3"], ["1/3", "2/3"]])
        yield PeriodicOrbit(system, (0, 1))
        yield Mixture(
            system,
            (
                (F(1, 3), bern("1/4")),
                (F(2, 3), PeriodicOrbit(system, (0, 1))),
            ),
        )
        yield Convolution(system, bern("1/4"), PeriodicOrbit(system, (0, 1)))
    else:
        yield PeriodicOrbit(system, tuple(range(g.order)))


# -- cylinder probabilities -----------------------------------------------------


def test_bernoulli_product_law():
    b = bern("1/4")
    assert b.cylinder((0, 1)) == F(3, 4) * F(1, 4)
    assert b.cylinder(()) == 1


def test_lazy_convolution_single_symbol():
    # double sum oracle: P(b + b' = 1) = 2 * (3/4) * (1/4)
    lazy = Convolution(SYS2, bern("1/4"), bern("1/4"))
    assert lazy.cylinder((1,)) == 2 * F(3, 4) * F(1, 4) == F(3, 8)


def test_periodic_orbit_phase_enumeration():
    per = PeriodicOrbit(SYS2, (0, 1))
    assert per.cylinder((0, 1, 0)) == F(1, 2)
    assert per.cylinder((0, 0)) == 0
    assert per.cylinder((1,)) == F(1, 2)


def test_window_bounds():
    b = bern("1/4")
    assert cylinder_prob(b, Window(0, (0, 1))) == F(3, 16)
    with pytest.raises(WindowOutOfRange):
        cylinder_prob(b, Window(-1, (0,)))
    two = Bernoulli(shift_space(C2, "two_sided"), measure(C2, ["3/4", "1/4"]))
    assert cylinder_prob(two, Window(-5, (0, 1))) == F(3, 16)


def test_depth_guard():
    with pytest.raises(DepthLimitExceeded):
        bern("1/4").block_distribution(25)
    with pytest.raises(DepthLimitExceeded):
        Convolution(SYS2, bern("1/4"), bern("1/4")).cylinder((0,) * 25)


# -- convolution of shift measures ---------------------------------------------


def test_bernoulli_convolution_simplifies():
    conv = convolve_shift(bern("1/4"), bern("1/4"))
    assert isinstance(conv, Bernoulli)
    assert conv.marginal.weights == (F(5, 8), F(3, 8))


def test_identity_orbit_is_convolution_unit():
    delta = PeriodicOrbit(SYS2, (C2.identity,))
    for mu in some_measures(SYS2):
        conv = convolve_shift(delta, mu)
        for length in range(1, 5):
            for word in _words(2, length):
                assert conv.cylinder(word) == mu.cylinder(word)


def test_periodic_convolved_with_bernoulli():
    conv = convolve_shift(PeriodicOrbit(SYS2, (0, 1)), bern("1/4"))
    assert conv.cylinder((0,)) == F(1, 2)


def test_convolution_closure_matches_bernoulli():
    # lazy route vs simplified route agree on every cylinder up to L = 8
    lazy = Convolution(SYS2, bern("1/4"), bern("1/3"))
    closed = convolve_shift(bern("1/4"), bern("1/3"))
    for length in range(1, 9):
        ld = lazy.block_distribution(length)
        cd = closed.block_distribution(length)
        assert ld == cd


def test_haar_absorbs_at_cylinder_level():
    u = shift_haar(SYS2)
    targets = [
        bern("1/4"),
        Markov.stationary(SYS2, [["2/3", "1/3"], ["1/3", "2/3"]]),
        PeriodicOrbit(SYS2, (0, 1)),
    ]
    for mu in targets:
        conv = Convolution(SYS2, u, mu)
        for length in range(1, 9):
            for word, p in conv.block_distribution(length).items():
                assert p == F(1, 2**length)


def test_mixture_distributes_over_convolution():
    mu = Mixture(SYS2, ((F(1, 2), bern("1/4")), (F(1, 2), bern("1/3"))))
    conv = convolve_shift(mu, bern("1/5"))
    assert isinstance(conv, Mixture)
    direct = Convolution(SYS2, mu, bern("1/5"))
    for word in _words(2, 3):
        assert conv.cylinder(word) == direct.cylinder(word)


def test_system_mismatch():
    with pytest.raises(SystemMismatch):
        convolve_shift(bern("1/4"), Bernoulli(SYS3, haar(C3)))


# -- invariance ------------------------------------------------------------------


def test_bernoulli_invariant():
    assert is_shift_invariant(bern("1/4"), 6)


def test_forced_nonstationary_markov_detected():
    with pytest.raises(ValueError):
        Markov(SYS2, ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))), (F(1, 4), F(3, 4)))
    forced = Markov(
        SYS2,
        ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))),
        (F(1, 4), F(3, 4)),
        validate=False,
    )
    assert not is_shift_invariant(forced, 1)


def test_corrupted_transition_row_rejected():
    with pytest.raises(ValueError):
        Markov(
            SYS2,
            ((F(1, 2), F(49, 100)), (F(1, 2), F(1, 2))),
            (F(1, 2), F(1, 2)),
        )


def test_convolution_of_invariant_measures_invariant():
    conv = Convolution(
        SYS2, bern("1/4"), Markov.stationary(SYS2, [["2/3", "1/3"], ["1/3", "2/3"]])
    )
    assert is_shift_invariant(conv, 6)


def test_affine_shift_preserves_uniform_bernoulli():
    for g in (C2, C3):
        for c in g.elements():
            sysc = affine_shift_space(g, c)
            assert is_shift_invariant(shift_haar(sysc), 6 if g.order == 2 else 4)


def test_affine_shift_of_identity_is_shift():
    assert affine_shift_space(C2, C2.identity) == shift_space(C2)


# -- kolmogorov consistency (property) -------------------------------------------


def _words(n_symbols, length):
    if length == 0:
        yield ()
        return
    for rest in _words(n_symbols, length - 1):
        for s in range(n_symbols):
            yield rest + (s,)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=4), st.integers(min_value=1, max_value=4))
def test_kolmogorov_consistency(which, length):
    mu = list(some_measures(SYS2))[which]
    dist = mu.block_distribution(length)
    assert sum(dist.values()) == 1
    for word in _words(2, length - 1):
        drop_last = sum(
            (mu.cylinder(word + (s,)) for s in range(2)), F(0)
        )
        assert drop_last == mu.cylinder(word)


def test_consistency_on_symmetric3_alphabet():
    s3 = symmetric(3)
    sys_s3 = shift_space(s3)
    mu = Bernoulli(sys_s3, haar(s3))
    dist = mu.block_distribution(3)
    assert sum(dist.values()) == 1


# -- sampling ---------------------------------------------------------------------


def test_periodic_sampler_support():
    per = PeriodicOrbit(SYS2, (0, 1))
    for seed in range(5):
        w = sample(per, 11, seed)
        assert all(w[i] != w[i + 1] for i in range(10))


def test_bernoulli_sampler_frequency():
    w = sample(shift_haar(SYS2), 10**6, 7)
    freq = float((w == 0).mean())
    assert abs(freq - 0.5) < 0.002  # 3 sigma binomial at n = 1e6


def test_convolution_sampler_matches_exact_cylinders():
    conv = Convolution(SYS2, bern("1/4"), PeriodicOrbit(SYS2, (0, 1)))
    n = 10**6
    w = sample(conv, n + 2, 13)
    for word in _words(2, 3):
        arr = np.array(word)
        hits = np.ones(n, dtype=bool)
        for j, s in enumerate(arr):
            hits &= w[j : j + n] == s
        p = float(conv.cylinder(word))
        sigma = (p * (1 - p) / n) ** 0.5
        assert abs(hits.mean() - p) < 3 * sigma + 1e-9


def test_sampler_deterministic():
    mu = Convolution(SYS2, bern("1/4"), PeriodicOrbit(SYS2, (0, 1)))
    assert np.array_equal(sample(mu, 1000, 5), sample(mu, 1000, 5))


# -- natural extension -------------------------------------------------------------


def test_extension_bernoulli_marginals_agree():
    b = bern("1/4")
    ext = natural_extension(b)
    assert ext.system.sidedness == "two_sided"
    for length in range(1, 7):
        for word in _words(2, length):
            assert ext.cylinder(word) == b.cylinder(word)


def test_extension_markov_window_chain_rule():
    m = Markov.stationary(SYS3, [["1/2", "1/4", "1/4"], ["1/3", "1/3", "1/3"], ["1/4", "1/4", "1/2"]])
    ext = natural_extension(m)
    a, b = 0, 1
    expected = m.initial[a] * m.transition[a][b] * m.transition[b][a]
    assert cylinder_prob(ext, Window(-2, (a, b, a))) == expected


def test_extension_preserves_block_entropy_exactly():
    from ergolab.entropy import block_entropy

    cases = [
        bern("1/4"),
        Markov.stationary(SYS2, [["2/3", "1/3"], ["1/3", "2/3"]]),
        PeriodicOrbit(SYS2, (0, 1)),
    ]
    for mu in cases:
        ext = natural_extension(mu)
        for length in range(1, 11):
            assert mu.block_distribution(length) == ext.block_distribution(length)
            assert block_entropy(mu, length) == block_entropy(ext, length)


def test_verify_extension_passes():
    assert verify_extension(bern("1/4"), 6).passed
    m3 = Markov.stationary(SYS3, [["1/2", "1/4", "1/4"], ["1/3", "1/3", "1/3"], ["1/4", "1/4", "1/2"]])
    assert verify_extension(m3, 4).passed
    assert verify_extension(PeriodicOrbit(SYS2, (0, 1, 1)), 6).passed


def test_extension_of_convolution_reconvolves_factors():
    conv = Convolution(SYS2, bern("1/4"), PeriodicOrbit(SYS2, (0, 1)))
    ext = natural_extension(conv)
    assert ext.kind == "convolution"
    for word in _words(2, 4):
        assert ext.cylinder(word) == conv.cylinder(word)


def test_extension_rejects_two_sided_input():
    two = Bernoulli(shift_space(C2, "two_sided"), measure(C2, ["3/4", "1/4"]))
    with pytest.raises(UnsupportedKind):
        natural_extension(two)


# -- construction invariants --------------------------------------------------------


def test_periodic_orbit_requires_primitive_word():
    with pytest.raises(ValueError):
        PeriodicOrbit(SYS2, (0, 1, 0, 1))


def test_mixture_weight_validation():
    with pytest.raises(ValueError):
        Mixture(SYS2, ((F(1, 2), bern("1/4")), (F(1, 3), bern("1/3"))))


def test_product_measure_cylinders_multiply():
    prod_sys = shift_space(cyclic(4))  # 2 x 2 alphabet indices
    pm = ProductMeasure(prod_sys, bern("1/4"), shift_haar(SYS2))
    for word in _words(4, 2):
        u = tuple(s // 2 for s in word)
        v = tuple(s % 2 for s in word)
        assert pm.cylinder(word) == bern("1/4").cylinder(u) * F(1, 2 ** len(v))
