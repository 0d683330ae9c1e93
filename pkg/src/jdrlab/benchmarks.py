"""Analytic reference quantities for coherent-state codebooks.

Everything a trained decoder is scored against lives here: channel
capacities, single-symbol receiver statistics (Helstrom, generalized
Kennedy, homodyne), the Hadamard/PPM receiver, Gram-matrix success bounds
(square-root-measurement lower bound and the matching upper bound), induced
discrete-channel rates, and second-order (finite-blocklength) rates.

Entropies are base 2 with 0 log 0 = 0.  The mean state of a codebook is
never materialized: a uniform mixture of pure states shares its nonzero
spectrum with Gram/|C|, which is all the bounds need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import decoder
from .codes import Codebook, binary_entropy, bpsk_capacity, hadamard_codebook
from .errors import NumericalError

EIGENVALUE_TOL = 1e-10


# ---------------------------------------------------------------------------
# Gram matrix and measurement-theoretic bounds
# ---------------------------------------------------------------------------

def gram_matrix(codebook: Codebook) -> np.ndarray:
    """Pairwise overlaps of the BPSK codewords: exp(-2E * Hamming distance)."""
    W = codebook.words
    dist = (W[:, None, :] != W[None, :, :]).sum(axis=2)
    return np.exp(-2.0 * codebook.energy_received * dist)


def gram_from_amplitudes(alphas: np.ndarray) -> np.ndarray:
    """Gram matrix from explicit product-coherent amplitudes (rows = states).

    Mode-by-mode overlap product; serves as the independent cross-check of
    the Hamming-distance shortcut and covers non-BPSK amplitude sets.
    """
    A = np.asarray(alphas, dtype=complex)
    norms = (np.abs(A) ** 2).sum(axis=1)
    cross = A.conj() @ A.T
    return np.exp(-0.5 * norms[:, None] - 0.5 * norms[None, :] + cross)


def _clamped_eigh(gram: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam, vecs = np.linalg.eigh(gram)
    if lam.min() < -EIGENVALUE_TOL:
        raise NumericalError(
            f"Gram eigenvalue {lam.min():.3e} below -{EIGENVALUE_TOL:.0e}")
    return np.clip(lam, 0.0, None), vecs


def holevo_rate(gram: np.ndarray, size: int | None = None) -> float:
    """von Neumann entropy (bits) of Gram/|C|, the codebook's Holevo rate."""
    if size is None:
        size = gram.shape[0]
    lam, _ = _clamped_eigh(np.asarray(gram) / size)
    lam = lam[lam > 0]
    return float(-(lam * np.log2(lam)).sum())


def success_bounds(gram: np.ndarray) -> tuple[float, float]:
    """(SRM lower bound, matching upper bound) on optimal discrimination.

    lower = mean of squared diagonal entries of Gram^(1/2);
    upper = (tr Gram^(1/2) / |C|)^2
            + sqrt(g_max) * sum_i |Gram^(1/2)_ii / tr - 1/|C||.
    """
    gram = np.asarray(gram)
    size = gram.shape[0]
    lam, vecs = _clamped_eigh(gram)
    sqrt_diag = ((vecs * np.sqrt(lam)) * vecs).sum(axis=1)
    trace = sqrt_diag.sum()
    lower = float((sqrt_diag ** 2).sum() / size)
    upper = float((trace / size) ** 2
                  + np.sqrt(lam.max())
                  * np.abs(sqrt_diag / trace - 1.0 / size).sum())
    return lower, min(upper, 1.0)


# ---------------------------------------------------------------------------
# Capacities and single-symbol receivers
# ---------------------------------------------------------------------------

@dataclass
class Capacities:
    chi: float        # unconstrained-modulation capacity at received energy E
    homodyne: float   # 0.5 log2(1 + 4E)
    bpsk: float       # binary-phase Holevo rate


def capacities(energy: float) -> Capacities:
    if energy < 0:
        raise ValueError("energy must be nonnegative")
    if energy == 0:
        chi = 0.0
    else:
        chi = float((energy + 1) * np.log2(energy + 1) - energy * np.log2(energy))
    return Capacities(chi=chi,
                      homodyne=float(0.5 * np.log2(1.0 + 4.0 * energy)),
                      bpsk=bpsk_capacity(energy))


def helstrom_success(energy: float) -> float:
    """Optimal two-state success probability for the BPSK pair."""
    return float((1.0 + np.sqrt(1.0 - np.exp(-4.0 * energy))) / 2.0)


def homodyne_success(energy: float) -> float:
    return float((1.0 + special.erf(np.sqrt(2.0 * energy))) / 2.0)


def kennedy_success(energy: float) -> tuple[float, float]:
    """(p_succ, optimal displacement) of the displacement-nulling receiver.

    Maximizes (1 + exp(-|b - sqrt(E)|^2) - exp(-|b + sqrt(E)|^2)) / 2 over
    real b; the optimum is real by the phase symmetry of the problem.
    """
    root = np.sqrt(energy)

    def neg(beta: float) -> float:
        return -(1.0 + np.exp(-(beta - root) ** 2)
                 - np.exp(-(beta + root) ** 2)) / 2.0

    res = optimize.minimize_scalar(
        neg, bounds=(-3.0 * root - 1.0, 3.0 * root + 1.0),
        method="bounded", options={"xatol": 1e-12})
    if not res.success:
        raise NumericalError(f"Kennedy displacement search failed: {res.message}")
    return float(-res.fun), float(res.x)


@dataclass
class SingleSymbolReport:
    """Success probabilities and rates of the three single-symbol receivers.

    ``rate_kennedy`` is the mutual information of the asymmetric binary
    channel induced by the optimal displacement.  ``rate_kennedy_printed``
    is the alternative closed form H2((p(0|0) + p(1|1)) / 2), kept for
    side-by-side reporting; it is not a mutual information (it does not
    vanish at E = 0).
    """

    p_helstrom: float
    p_kennedy: float
    p_homodyne: float
    kennedy_beta: float
    rate_helstrom: float
    rate_kennedy: float
    rate_kennedy_printed: float
    rate_homodyne: float


def binary_channel_information(p00: float, p11: float) -> float:
    """I(X;Y) in bits for a binary asymmetric channel at uniform input."""
    out0 = (p00 + 1.0 - p11) / 2.0
    return binary_entropy(out0) - 0.5 * (binary_entropy(p00) + binary_entropy(p11))


def single_symbol(energy: float) -> SingleSymbolReport:
    p_hel = helstrom_success(energy)
    p_hom = homodyne_success(energy)
    p_ken, beta = kennedy_success(energy)
    root = np.sqrt(energy)
    p00 = float(np.exp(-(beta - root) ** 2))
    p11 = float(1.0 - np.exp(-(beta + root) ** 2))
    return SingleSymbolReport(
        p_helstrom=p_hel,
        p_kennedy=p_ken,
        p_homodyne=p_hom,
        kennedy_beta=beta,
        rate_helstrom=1.0 - binary_entropy(p_hel),
        rate_kennedy=binary_channel_information(p00, p11),
        rate_kennedy_printed=binary_entropy((p00 + p11) / 2.0),
        rate_homodyne=1.0 - binary_entropy(p_hom),
    )


def scheme_success(p_single: float, n: int) -> float:
    """Success of decoding n modes independently with a single-symbol receiver."""
    return float(p_single ** n)


# ---------------------------------------------------------------------------
# Hadamard / PPM receiver
# ---------------------------------------------------------------------------

def hadamard_ppm(n: int, energy: float) -> tuple[float, float, float]:
    """(p_succ, rate, entropy variance) of the n-ary PPM threshold receiver.

    Valid for any n >= 2 (non-powers of 2 via the Fourier-matrix variant of
    the same protocol).
    """
    if n < 2:
        raise ValueError("PPM needs n >= 2")
    q = np.exp(-n * energy)
    logn = np.log2(n)
    p_succ = float(1.0 - q)
    rate = float(logn / n * (1.0 - q))
    variance = float(logn ** 2 / n ** 2 * q * (2.0 - q))
    return p_succ, rate, variance


def hadamard_ppm_channel(n: int, energy: float) -> np.ndarray:
    """Hard-decision PPM channel: diagonal success plus an erasure column."""
    q = float(np.exp(-n * energy))
    channel = np.zeros((n, n + 1))
    channel[:, :n] = np.eye(n) * (1.0 - q)
    channel[:, n] = q
    return channel


#: Hadamard-matrix row permutation making message m click output mode m
#: under the hard-coded meshes below.
HADAMARD_ROW_ORDER = {2: [0, 1], 4: [2, 1, 0, 3]}


def hadamard_receiver_params(n: int) -> decoder.CircuitParams:
    """50:50-splitter mesh converting Hadamard words to pulse positions.

    n = 2: a single balanced splitter.  n = 4: a butterfly of balanced
    splitters with mode swaps, laid out on the rectangular mesh slots.
    """
    if n not in HADAMARD_ROW_ORDER:
        raise ValueError(f"hard-coded Hadamard meshes exist for n in (2, 4), got {n}")
    params = decoder.CircuitParams.identity(n)
    theta = params.theta.copy()
    if n == 2:
        theta[0:2] = [np.pi / 4, 0.0]
    else:
        bs = [(np.pi / 4, 0.0), (np.pi / 4, 0.0), (np.pi / 2, np.pi),
              (np.pi / 4, 0.0), (np.pi / 4, 0.0), (np.pi / 2, np.pi)]
        theta[0:12] = np.array(bs).ravel()
    return params.replace_theta(theta)


def hadamard_receiver_codebook(n: int, energy: float) -> Codebook:
    return hadamard_codebook(n, energy, order=HADAMARD_ROW_ORDER[n])


# ---------------------------------------------------------------------------
# Induced channels and second-order rates
# ---------------------------------------------------------------------------

def guess_channel(table: np.ndarray) -> np.ndarray:
    """Message -> ML-guess transition matrix from a conditional table."""
    size = table.shape[0]
    guesses = decoder.ml_rule(table)
    channel = np.zeros((size, size))
    for guess in range(size):
        cols = guesses == guess
        if cols.any():
            channel[:, guess] = table[:, cols].sum(axis=1)
    return channel


def channel_information(channel: np.ndarray) -> float:
    """I(input; output) in bits at uniform input."""
    channel = np.asarray(channel, dtype=float)
    size = channel.shape[0]
    out = channel.mean(axis=0)

    def entropy(p: np.ndarray) -> float:
        p = p[p > 0]
        return float(-(p * np.log2(p)).sum())

    return entropy(out) - sum(entropy(channel[i]) for i in range(size)) / size


def entropy_variance(channel: np.ndarray, centered: bool = False) -> float:
    """(1/|C|) sum_ij p(j|i) log2^2(p(j|i)/p(j)), skipping zero entries.

    With ``centered=True`` the squared mean information density is
    subtracted, giving the standard channel-dispersion variance.
    """
    channel = np.asarray(channel, dtype=float)
    size = channel.shape[0]
    out = channel.mean(axis=0)
    mask = channel > 0
    dens = np.zeros_like(channel)
    dens[mask] = np.log2(channel[mask] / np.broadcast_to(out, channel.shape)[mask])
    second = float((channel * dens ** 2).sum() / size)
    if centered:
        second -= channel_information(channel) ** 2
    return second


def second_order_rate(rate: float, variance: float, eps: float, block: float) -> float:
    """rate - sqrt(2 V / b) * InverseErfc(2 eps)."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if block < 1:
        raise ValueError("blocklength must be >= 1")
    if variance < 0:
        raise ValueError("variance must be nonnegative")
    return float(rate - np.sqrt(2.0 * variance / block) * special.erfcinv(2.0 * eps))


@dataclass
class InducedMetrics:
    p_succ: float
    rate: float              # bits per mode after hard decisions
    entropy_variance: float  # per mode^2, same normalization as the rate
    pie: float               # decoded bits per photon
    die: float               # decoded bits per mode
    channel: np.ndarray


def induced_metrics(n_modes: int, energy: float, *,
                    table: np.ndarray | None = None,
                    channel: np.ndarray | None = None,
                    centered: bool = False) -> InducedMetrics:
    """Rate/dispersion metrics of a decoder from its table or its channel.

    Given a conditional outcome table, outcomes are collapsed to message
    guesses via the ML rule first.  Given a discrete channel directly
    (columns beyond |C| count as failure symbols, e.g. an erasure), it is
    used as is.
    """
    if (table is None) == (channel is None):
        raise ValueError("pass exactly one of table= or channel=")
    if table is not None:
        channel = guess_channel(table)
        p_succ = decoder.success_probability(table)
    else:
        channel = np.asarray(channel, dtype=float)
        size = channel.shape[0]
        p_succ = float(np.trace(channel[:, :size]) / size)
    rate = channel_information(channel) / n_modes
    variance = entropy_variance(channel, centered=centered) / n_modes ** 2
    pie = rate / energy if energy > 0 else float("nan")
    return InducedMetrics(p_succ=p_succ, rate=rate, entropy_variance=variance,
                          pie=pie, die=rate, channel=channel)
