"""Acceptance suite: every criterion runs at its stated tolerance and
prints one pass/fail line (run with ``pytest -s`` to see them inline)."""

import time

import numpy as np
import pytest

from jdrlab import benchmarks, codes, decoder, optics, training

from conftest import random_passive_params, random_squeezing_params

ENERGY_FIG2 = 0.345156
ENERGY_POLAR = 0.447227


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)


# ---------------------------------------------------------------------------
# 1. Simulator exactness
# ---------------------------------------------------------------------------

def test_simulator_exactness():
    ok = True
    # single-mode coherent no-click probability, 1e-12
    for energy in (0.05, 0.345156, 1.2):
        state = optics.GaussianState.coherent(np.array([np.sqrt(energy)]))
        ok &= abs(optics.vacuum_probability(state, [0]) - np.exp(-energy)) < 1e-12
    # outcome tables of random circuits up to n = 6 sum to 1 within 1e-9
    worst = 0.0
    for n in range(2, 7):
        rng = np.random.default_rng(100 + n)
        for params in (random_passive_params(n, rng),
                       random_squeezing_params(n, rng)):
            dist = decoder.outcome_distribution(params, rng.normal(0, 0.6, n),
                                                force_covariance=True)
            worst = max(worst, abs(dist.sum() - 1.0))
    ok &= worst < 1e-9
    # squeezed-vacuum vacuum probability, 1e-9
    for r in (0.1, 0.5, 1.0):
        gate = optics.gate_symplectic("squeeze", 1, 0, (r, 0.0))
        prob = optics.vacuum_probability(gate.apply(optics.GaussianState.vacuum(1)), [0])
        ok &= abs(prob - 1.0 / np.cosh(r)) < 1e-9
    _report("simulator exactness", ok, f"worst table-sum error {worst:.2e}")
    assert ok


# ---------------------------------------------------------------------------
# 2. Hadamard/PPM oracle
# ---------------------------------------------------------------------------

def test_hadamard_circuit_reproduces_ppm_tables():
    worst = 0.0
    for n in (2, 4):
        codebook = benchmarks.hadamard_receiver_codebook(n, ENERGY_FIG2)
        params = benchmarks.hadamard_receiver_params(n)
        table = decoder.conditional_table(codebook, params)
        q = np.exp(-n * ENERGY_FIG2)
        expected = np.zeros((n, 2 ** n))
        expected[:, 0] = q
        for m in range(n):
            expected[m, 1 << (n - 1 - m)] = 1 - q
        worst = max(worst, float(np.abs(table - expected).max()))
    ok = worst < 1e-10
    _report("hadamard mesh reproduces the pulse-position table", ok,
            f"max deviation {worst:.2e}")
    assert ok


def test_hadamard_ppm_success_and_rate_from_induced_metrics():
    worst = 0.0
    for n in (2, 4):
        p_ref, r_ref, _ = benchmarks.hadamard_ppm(n, ENERGY_FIG2)
        metrics = benchmarks.induced_metrics(
            n, ENERGY_FIG2,
            channel=benchmarks.hadamard_ppm_channel(n, ENERGY_FIG2))
        worst = max(worst, abs(metrics.p_succ - p_ref), abs(metrics.rate - r_ref))
    ok = worst < 1e-10
    _report("ppm success probability and rate via induced metrics", ok,
            f"max deviation {worst:.2e}")
    assert ok


def test_hadamard_ppm_entropy_variance_from_induced_metrics():
    """Known-unattainable identity, asserted as stated.

    The closed-form dispersion of the hard-decision pulse-position receiver,
    (log2(n)^2 / n^2) * q * (2 - q) with q the no-click probability, does not
    equal the entropy-variance formula evaluated on that receiver's channel:
    the channel formula gives s * log2(n)^2 / n^2 uncentered (s = 1 - q) or
    s * q * log2(n)^2 / n^2 centered.  The three expressions differ for every
    q in (0, 1), so no variance convention reconciles them; this test records
    the discrepancy rather than hiding it.
    """
    deviations = []
    for n in (2, 4):
        _, _, v_ref = benchmarks.hadamard_ppm(n, ENERGY_FIG2)
        channel = benchmarks.hadamard_ppm_channel(n, ENERGY_FIG2)
        for centered in (False, True):
            metrics = benchmarks.induced_metrics(
                n, ENERGY_FIG2, channel=channel, centered=centered)
            deviations.append(abs(metrics.entropy_variance - v_ref))
    ok = min(deviations) < 1e-10
    _report("ppm entropy variance via induced metrics", ok,
            f"best deviation {min(deviations):.2e} (verbatim and centered)")
    assert ok


# ---------------------------------------------------------------------------
# 3. Training floor at n = 1
# ---------------------------------------------------------------------------

def test_training_floor_single_mode():
    ok = True
    details = []
    for energy in (0.1, 0.2, 0.4):
        pair = codes.Codebook(1, 2, energy, "random",
                              np.array([[0], [1]], dtype=np.uint8))
        config = training.TrainConfig(seed=7, n_restarts=5, max_iters=400)
        start = time.perf_counter()
        run = training.train(pair, config)
        elapsed = time.perf_counter() - start
        target, _ = benchmarks.kennedy_success(energy)
        gap = target - run.p_succ
        ok &= gap < 1e-3 and elapsed < 60.0
        details.append(f"E={energy}: gap={gap:.1e}, {elapsed:.1f}s")
    _report("single-mode training reaches the displacement-receiver floor",
            ok, "; ".join(details))
    assert ok


# ---------------------------------------------------------------------------
# 4. Benchmark identities
# ---------------------------------------------------------------------------

def test_benchmark_identities():
    pair = codes.Codebook(1, 2, ENERGY_FIG2, "random",
                          np.array([[0], [1]], dtype=np.uint8))
    gram = benchmarks.gram_matrix(pair)
    lower, upper = benchmarks.success_bounds(gram)
    hel = benchmarks.helstrom_success(ENERGY_FIG2)
    ok = abs(lower - hel) < 1e-10
    ok &= abs(benchmarks.holevo_rate(gram) - codes.bpsk_capacity(ENERGY_FIG2)) < 1e-10
    worst_gap = 0.0
    rng = np.random.default_rng(77)
    for _ in range(10):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, n + 1))
        cb = codes.linear_codebook(n, k, 0.41, seed=int(rng.integers(10 ** 6)))
        lo, up = benchmarks.success_bounds(benchmarks.gram_matrix(cb))
        worst_gap = max(worst_gap, up - lo)
    ok &= worst_gap < 1e-8
    _report("benchmark identities (SRM=Helstrom, Holevo=BPSK, covariant gap)",
            ok, f"worst linear-codebook bound gap {worst_gap:.2e}")
    assert ok


# ---------------------------------------------------------------------------
# 5. Polar frozen-set reproduction
# ---------------------------------------------------------------------------

def test_polar_frozen_sets():
    cb2 = codes.polar_codebook(2, ENERGY_POLAR)
    cb4 = codes.polar_codebook(4, ENERGY_POLAR)
    ok = cb2.frozen == [] and cb4.frozen == [0]
    _report("polar frozen sets at E=0.447227", ok,
            f"n=2 frozen={cb2.frozen}, n=4 frozen={cb4.frozen}")
    assert ok


# ---------------------------------------------------------------------------
# 6. Desk-scale ensemble reproduction
# ---------------------------------------------------------------------------

def test_desk_scale_linear_ensembles():
    """20 codebooks x 10 restarts at n = 2..4; a few minutes of compute."""
    ss = benchmarks.single_symbol(ENERGY_FIG2)
    ok = True
    details = []
    for n in (2, 3, 4):
        config = training.TrainConfig(seed=11, n_restarts=10, max_iters=250)
        result = training.train_ensemble(n, ENERGY_FIG2, "linear", 20, config)
        best = result.best_p_succ
        ppm, _, _ = benchmarks.hadamard_ppm(n, ENERGY_FIG2)
        hel_scheme = benchmarks.scheme_success(ss.p_helstrom, n)
        lower, upper = benchmarks.success_bounds(
            benchmarks.gram_matrix(result.best_run.codebook))
        ok &= best > ppm and best > hel_scheme
        ok &= best <= upper + 1e-8
        if n <= 3:
            ok &= (lower - best) / lower < 0.15
        details.append(f"n={n}: best={best:.4f} ppm={ppm:.4f} "
                       f"hel^n={hel_scheme:.4f} srm={lower:.4f}")
    _report("desk-scale linear ensembles beat PPM and per-symbol Helstrom",
            ok, "; ".join(details))
    assert ok


# ---------------------------------------------------------------------------
# 7. Sampling-mode consistency
# ---------------------------------------------------------------------------

def test_sampling_mode_consistency():
    rng = np.random.default_rng(909)
    cb = codes.linear_codebook(2, 1, ENERGY_FIG2, seed=1)
    batch = np.arange(cb.size)
    worst = 0.0
    for trial in range(10):
        params = random_passive_params(2, rng)
        exact = training.batch_loss(cb, params, batch)
        sampled = training.batch_loss(cb, params, batch, "sampling",
                                      n_shots=100_000, seed=trial)
        worst = max(worst, abs(sampled - exact))
    ok = worst < 0.01
    _report("sampling-mode loss matches probability mode at 1e5 shots",
            ok, f"worst gap {worst:.4f}")
    assert ok


# ---------------------------------------------------------------------------
# 8. Second-order curves
# ---------------------------------------------------------------------------

def test_second_order_curves():
    eps, block = 1e-3, 1e3
    ss = benchmarks.single_symbol(ENERGY_FIG2)
    hel_ch = np.array([[ss.p_helstrom, 1 - ss.p_helstrom],
                       [1 - ss.p_helstrom, ss.p_helstrom]])
    hom_ch = np.array([[ss.p_homodyne, 1 - ss.p_homodyne],
                       [1 - ss.p_homodyne, ss.p_homodyne]])
    v_hel = benchmarks.entropy_variance(hel_ch)
    v_hom = benchmarks.entropy_variance(hom_ch)
    ok = True
    # convergence to the asymptotic rate, monotone in blocklength
    blocks = np.geomspace(10, 1e12, 40)
    curve = [benchmarks.second_order_rate(ss.rate_helstrom, v_hel, eps, b)
             for b in blocks]
    ok &= all(b2 >= b1 for b1, b2 in zip(curve, curve[1:]))
    ok &= abs(curve[-1] - ss.rate_helstrom) < 1e-4
    # receiver ordering at the reference point, for n = 2..4 PPM
    for n in (2, 3, 4):
        _, r_ppm, v_ppm = benchmarks.hadamard_ppm(n, ENERGY_FIG2)
        r2_hel = benchmarks.second_order_rate(ss.rate_helstrom, v_hel, eps, block)
        r2_hom = benchmarks.second_order_rate(ss.rate_homodyne, v_hom, eps, block)
        r2_ppm = benchmarks.second_order_rate(r_ppm, v_ppm, eps, block)
        ok &= r2_hel > r2_hom > r2_ppm
    _report("second-order rate curves (convergence and receiver ordering)", ok)
    assert ok
