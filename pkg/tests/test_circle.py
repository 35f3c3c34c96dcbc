import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from ergolab.circle import (
    circle_entropy_report,
    haar_invariance_check,
    lebesgue,
    periodic_atomic,
    sample_lebesgue_coding,
    symbolic_coding,
    times_k,
)
from ergolab.errors import BadK, DepthLimitExceeded


def test_times_k_construction():
    assert times_k(2).k == 2
    assert times_k(3).k == 3
    with pytest.raises(BadK):
        times_k(1)


def test_generating_partition_refines():
    sys = times_k(3)
    parts = sys.generating_partition
    assert parts[0] == (F(0), F(1, 3))
    pieces = sys.preimage_intervals(*parts[1])
    assert all(b - a == F(1, 9) for a, b in pieces)


def test_haar_invariance_exact():
    assert haar_invariance_check(times_k(2), 1)
    assert haar_invariance_check(times_k(2), 10)
    assert haar_invariance_check(times_k(3), 6)
    with pytest.raises(DepthLimitExceeded):
        haar_invariance_check(times_k(2), 30)


def test_coding_fixed_point():
    assert list(symbolic_coding(times_k(2), 0, 8)) == [0] * 8


def test_coding_one_third_alternates():
    # exact rational orbit 1/3 -> 2/3 -> 1/3
    assert list(symbolic_coding(times_k(2), F(1, 3), 8)) == [0, 1] * 4


def test_float_coding_warns_beyond_budget():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        symbolic_coding(times_k(2), 0.3, 50)
    assert any("precision budget" in str(w.message) for w in caught)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        symbolic_coding(times_k(2), 0.3, 20)
    assert not caught


def test_float_and_exact_coding_agree_within_budget():
    exact = symbolic_coding(times_k(2), F(3, 10), 20)
    floats = symbolic_coding(times_k(2), 0.3, 20)
    assert list(exact) == list(floats)


def test_lebesgue_sampler_symbol_frequency():
    words = sample_lebesgue_coding(times_k(2), 10**6, seed=4)
    flat = np.concatenate([np.asarray(w) for w in words])
    freq = float((flat == 0).mean())
    assert abs(freq - 0.5) < 0.002


def test_lebesgue_coding_matches_uniform_bernoulli_blocks():
    # measure-isomorphism check: length-3 coded block frequencies vs 1/8
    words = sample_lebesgue_coding(times_k(2), 4 * 10**5, seed=9)
    counts = {}
    total = 0
    for w in words:
        for i in range(len(w) - 2):
            key = tuple(w[i : i + 3])
            counts[key] = counts.get(key, 0) + 1
            total += 1
    p = 1 / 8
    sigma = (p * (1 - p) / total) ** 0.5
    for key, c in counts.items():
        assert abs(c / total - p) < 4 * sigma


def test_periodic_atomic_orbit():
    mu = periodic_atomic(times_k(2), "1/3")
    assert mu.orbit == (F(1, 3), F(2, 3))
    with pytest.raises(ValueError):
        periodic_atomic(times_k(2), "1/6")  # shares the factor 2 with k


def test_periodic_atomic_entropy_exactly_zero():
    est = circle_entropy_report(times_k(2), periodic_atomic(times_k(2), "1/3"), depth=4)
    assert est.value == 0.0


def test_lebesgue_entropy_near_ln_k():
    est = circle_entropy_report(
        times_k(2), lebesgue(), depth=8, n_symbols=5 * 10**5, seeds=2, base_seed=11
    )
    assert abs(est.value - math.log(2)) < 0.02
    est3 = circle_entropy_report(
        times_k(3), lebesgue(), depth=5, n_symbols=4 * 10**5, seeds=2, base_seed=12
    )
    assert abs(est3.value - math.log(3)) < 0.03


def test_strict_maximality_gap_on_circle():
    sys = times_k(2)
    h_atomic = circle_entropy_report(sys, periodic_atomic(sys, "1/5"), depth=6).value
    h_leb = circle_entropy_report(
        sys, lebesgue(), depth=8, n_symbols=5 * 10**5, seeds=1, base_seed=2
    ).value
    assert h_atomic == 0.0
    assert h_leb - h_atomic >= math.log(2) - 0.03
