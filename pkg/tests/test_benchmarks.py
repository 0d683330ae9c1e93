import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jdrlab import benchmarks, codes, decoder

ENERGY = 0.345156


def bpsk_pair(energy=ENERGY) -> codes.Codebook:
    return codes.Codebook(1, 2, energy, "random",
                          np.array([[0], [1]], dtype=np.uint8))


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------

def test_bpsk_gram():
    g = np.exp(-2 * ENERGY)
    assert np.allclose(benchmarks.gram_matrix(bpsk_pair()),
                       [[1, g], [g, 1]], atol=1e-15)


def test_zero_energy_gram_is_all_ones():
    cb = codes.Codebook(2, 3, 0.0, "random",
                        np.array([[0, 0], [0, 1], [1, 1]], dtype=np.uint8))
    assert np.allclose(benchmarks.gram_matrix(cb), 1.0)


@given(st.integers(0, 2 ** 31))
@settings(max_examples=25, deadline=None)
def test_hamming_gram_matches_overlap_products(seed):
    rng = np.random.default_rng(seed)
    cb = codes.random_codebook(4, 5, 0.37, seed=int(rng.integers(10 ** 6)))
    direct = benchmarks.gram_from_amplitudes(cb.amplitudes())
    assert np.abs(benchmarks.gram_matrix(cb) - direct.real).max() < 1e-12
    assert np.abs(direct.imag).max() < 1e-12


# ---------------------------------------------------------------------------
# Holevo rate and success bounds
# ---------------------------------------------------------------------------

def test_holevo_rate_of_bpsk_gram_is_bpsk_capacity():
    assert benchmarks.holevo_rate(benchmarks.gram_matrix(bpsk_pair())) == \
        pytest.approx(codes.bpsk_capacity(ENERGY), abs=1e-10)


def test_holevo_rate_orthogonal_and_degenerate():
    assert benchmarks.holevo_rate(np.eye(8)) == pytest.approx(3.0, abs=1e-12)
    assert benchmarks.holevo_rate(np.ones((4, 4))) == pytest.approx(0.0, abs=1e-12)


def test_holevo_rate_invariant_under_reordering(rng):
    cb = codes.random_codebook(4, 6, 0.3, seed=1)
    gram = benchmarks.gram_matrix(cb)
    perm = rng.permutation(6)
    assert np.isclose(benchmarks.holevo_rate(gram),
                      benchmarks.holevo_rate(gram[np.ix_(perm, perm)]),
                      atol=1e-12)


def test_bpsk_bounds_equal_helstrom():
    lower, upper = benchmarks.success_bounds(benchmarks.gram_matrix(bpsk_pair()))
    hel = benchmarks.helstrom_success(ENERGY)
    assert lower == pytest.approx(hel, abs=1e-10)
    assert upper == pytest.approx(hel, abs=1e-10)


def test_orthogonal_codewords_bounds_are_one():
    lower, upper = benchmarks.success_bounds(np.eye(5))
    assert lower == pytest.approx(1.0, abs=1e-12)
    assert upper == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_linear_codebooks_close_the_gap(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    k = int(rng.integers(1, n + 1))
    cb = codes.linear_codebook(n, k, 0.41, seed=seed)
    lower, upper = benchmarks.success_bounds(benchmarks.gram_matrix(cb))
    assert upper - lower < 1e-8


def test_linear_gram_sqrt_has_constant_diagonal():
    cb = codes.linear_codebook(4, 3, 0.3, seed=5)
    gram = benchmarks.gram_matrix(cb)
    lam, vecs = np.linalg.eigh(gram)
    diag = ((vecs * np.sqrt(np.clip(lam, 0, None))) * vecs).sum(axis=1)
    assert np.ptp(diag) < 1e-8


# ---------------------------------------------------------------------------
# Capacities and single-symbol receivers
# ---------------------------------------------------------------------------

def test_capacities_at_zero():
    caps = benchmarks.capacities(0.0)
    assert caps.chi == caps.homodyne == caps.bpsk == 0.0


def test_holevo_capacity_at_unit_energy():
    assert benchmarks.capacities(1.0).chi == pytest.approx(2.0, abs=1e-12)


def test_bpsk_below_unconstrained_capacity():
    for energy in np.linspace(0.05, 2.0, 30):
        caps = benchmarks.capacities(energy)
        assert caps.bpsk <= caps.chi + 1e-12


def test_capacities_monotone_in_energy():
    grid = np.linspace(0.0, 2.0, 40)
    for fn in (lambda e: benchmarks.capacities(e).chi,
               lambda e: benchmarks.capacities(e).homodyne,
               lambda e: benchmarks.capacities(e).bpsk,
               benchmarks.helstrom_success,
               benchmarks.homodyne_success,
               lambda e: benchmarks.kennedy_success(e)[0]):
        vals = [fn(float(e)) for e in grid]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))


def test_single_symbol_at_zero_energy():
    report = benchmarks.single_symbol(0.0)
    assert report.p_helstrom == pytest.approx(0.5, abs=1e-12)
    assert report.p_homodyne == pytest.approx(0.5, abs=1e-12)
    assert report.p_kennedy == pytest.approx(0.5, abs=1e-9)
    assert report.rate_helstrom == pytest.approx(0.0, abs=1e-12)
    assert report.rate_homodyne == pytest.approx(0.0, abs=1e-12)
    assert report.rate_kennedy == pytest.approx(0.0, abs=1e-9)


def test_helstrom_value():
    assert benchmarks.helstrom_success(0.25) == pytest.approx(
        (1 + math.sqrt(1 - math.exp(-1))) / 2, abs=1e-15)


def test_receiver_hierarchy():
    for energy in np.linspace(0.02, 1.7, 25):
        report = benchmarks.single_symbol(float(energy))
        assert report.p_homodyne <= report.p_kennedy + 1e-9
        assert report.p_kennedy <= report.p_helstrom + 1e-9


def test_kennedy_beta_is_bracketed():
    p, beta = benchmarks.kennedy_success(0.3)
    assert 0 < beta < 3 * math.sqrt(0.3) + 1
    assert p > 0.5


# ---------------------------------------------------------------------------
# Hadamard / PPM
# ---------------------------------------------------------------------------

def test_ppm_success_formula():
    energy = 0.51
    p, _, _ = benchmarks.hadamard_ppm(2, energy)
    assert p == pytest.approx(1 - math.exp(-2 * energy), abs=1e-15)


def test_ppm_value_at_reference_point():
    p, _, _ = benchmarks.hadamard_ppm(4, 0.345156)
    assert p == pytest.approx(1 - math.exp(-1.380624), abs=1e-9)


def test_ppm_high_energy_limits():
    _, rate, variance = benchmarks.hadamard_ppm(4, 60.0)
    assert rate == pytest.approx(math.log2(4) / 4, abs=1e-12)
    assert variance == pytest.approx(0.0, abs=1e-12)


def test_ppm_accepts_non_power_of_two():
    p, rate, _ = benchmarks.hadamard_ppm(3, 0.3)
    assert p == pytest.approx(1 - math.exp(-0.9), abs=1e-12)
    assert rate == pytest.approx(math.log2(3) / 3 * p, abs=1e-12)


def test_hadamard_receiver_tables():
    for n in (2, 4):
        cb = benchmarks.hadamard_receiver_codebook(n, ENERGY)
        params = benchmarks.hadamard_receiver_params(n)
        table = decoder.conditional_table(cb, params)
        q = math.exp(-n * ENERGY)
        expected = np.zeros((n, 2 ** n))
        expected[:, 0] = q
        for m in range(n):
            expected[m, 1 << (n - 1 - m)] = 1 - q
        assert np.abs(table - expected).max() < 1e-10


# ---------------------------------------------------------------------------
# Induced channels
# ---------------------------------------------------------------------------

def test_noiseless_channel_metrics():
    metrics = benchmarks.induced_metrics(2, 0.5, channel=np.eye(4))
    assert metrics.rate == pytest.approx(1.0, abs=1e-12)      # log2(4)/2
    assert metrics.p_succ == pytest.approx(1.0, abs=1e-12)
    # the uncentered information-density second moment is log2(|C|)^2 / n^2
    # on a noiseless channel; only the centered variance vanishes
    assert metrics.entropy_variance == pytest.approx(1.0, abs=1e-12)
    centered = benchmarks.induced_metrics(2, 0.5, channel=np.eye(4), centered=True)
    assert centered.entropy_variance == pytest.approx(0.0, abs=1e-12)


def test_ppm_channel_rate_matches_closed_form():
    for n in (2, 3, 4):
        _, rate, _ = benchmarks.hadamard_ppm(n, ENERGY)
        metrics = benchmarks.induced_metrics(
            n, ENERGY, channel=benchmarks.hadamard_ppm_channel(n, ENERGY))
        assert metrics.rate == pytest.approx(rate, abs=1e-10)
        assert metrics.p_succ == pytest.approx(1 - math.exp(-n * ENERGY), abs=1e-12)


def test_pie_times_energy_is_die():
    cb = codes.linear_codebook(2, 1, ENERGY, seed=0)
    table = decoder.conditional_table(cb, decoder.CircuitParams.identity(2))
    metrics = benchmarks.induced_metrics(2, ENERGY, table=table)
    assert metrics.pie * ENERGY == pytest.approx(metrics.die, abs=1e-12)


def test_entropy_variance_against_explicit_loop():
    channel = np.array([[0.7, 0.2, 0.1], [0.1, 0.6, 0.3]])
    out = channel.mean(axis=0)
    expected = 0.0
    for i in range(2):
        for j in range(3):
            p = channel[i, j]
            expected += p * math.log2(p / out[j]) ** 2 / 2
    assert benchmarks.entropy_variance(channel) == pytest.approx(expected, abs=1e-12)
    info = benchmarks.channel_information(channel)
    assert benchmarks.entropy_variance(channel, centered=True) == pytest.approx(
        expected - info ** 2, abs=1e-12)


def test_guess_channel_rows_sum_to_one(rng):
    table = rng.random((3, 8))
    table /= table.sum(axis=1, keepdims=True)
    channel = benchmarks.guess_channel(table)
    assert np.allclose(channel.sum(axis=1), 1.0, atol=1e-12)


# ---------------------------------------------------------------------------
# Second-order rates
# ---------------------------------------------------------------------------

def test_second_order_limits():
    assert benchmarks.second_order_rate(0.7, 0.3, 1e-3, 1e12) == \
        pytest.approx(0.7, abs=1e-5)
    assert benchmarks.second_order_rate(0.7, 0.3, 0.5, 100) == \
        pytest.approx(0.7, abs=1e-12)


def test_second_order_value_against_mpmath():
    # oracle: high-precision inverse complementary error function
    expected = 0.5 - math.sqrt(2 * 0.1 / 1e3) * float(mpmath.erfinv(1 - 0.002))
    assert benchmarks.second_order_rate(0.5, 0.1, 1e-3, 1e3) == \
        pytest.approx(expected, abs=1e-12)


def test_second_order_rejects_bad_arguments():
    with pytest.raises(ValueError):
        benchmarks.second_order_rate(0.5, 0.1, 0.0, 100)
    with pytest.raises(ValueError):
        benchmarks.second_order_rate(0.5, 0.1, 1e-3, 0.5)
    with pytest.raises(ValueError):
        benchmarks.second_order_rate(0.5, -0.1, 1e-3, 100)
