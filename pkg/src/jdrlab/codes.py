"""Classical binary codebooks and their coherent-state encoding.

Codebooks are sets of length-n bitstrings mapped to products of coherent
states by binary-phase modulation, ``alpha_i = (-1)^(b_i) sqrt(E)``, where E
is the mean photon number per received mode.  A pure-loss link is folded
into E (= eta * E_input): losing photons to a vacuum environment leaves
coherent states coherent, so the workbench is parametrized by the received
energy directly.

Three constructions are provided: uniformly random codebooks, random linear
codes in standard form G = (I_k | P), and polar codes with frozen bits
selected by split-channel rates.  Enumeration order is lexicographic in the
input message bits, so message labels are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


def binary_entropy(p: float) -> float:
    """H2(p) in bits, with 0 log 0 = 0."""
    out = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            out -= q * np.log2(q)
    return float(out)


def bpsk_capacity(energy: float) -> float:
    """Holevo information of the binary-phase pair at mean photon number E."""
    return binary_entropy(float((1.0 - np.exp(-2.0 * energy)) / 2.0))


@dataclass
class Codebook:
    """A set of distinct bitstrings plus its construction metadata."""

    n: int
    size: int
    energy_received: float
    code_type: str                       # random | linear | polar | hadamard
    words: np.ndarray                    # shape (size, n), uint8
    seed: int | None = None
    generator: np.ndarray | None = None  # k x n over GF(2), linear/polar
    frozen: list[int] | None = None      # 0-based input indices, polar
    split_rates: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.words = np.asarray(self.words, dtype=np.uint8)
        if self.words.shape != (self.size, self.n):
            raise ConfigError("words shape does not match (size, n)")
        if self.size < 2:
            raise ConfigError("a codebook needs at least 2 words")
        if len({w.tobytes() for w in self.words}) != self.size:
            raise ConfigError("codewords must be pairwise distinct")

    def amplitudes(self) -> np.ndarray:
        """Per-word coherent amplitudes, shape (size, n), real-valued."""
        return encode_bpsk(self.words, self.energy_received)


def encode_bpsk(words: np.ndarray, energy: float) -> np.ndarray:
    """alpha_i = (-1)^(b_i) sqrt(E) for one word or a stack of words."""
    if energy < 0:
        raise ConfigError("energy must be nonnegative")
    signs = 1.0 - 2.0 * np.asarray(words, dtype=float)
    return signs * np.sqrt(energy)


# ---------------------------------------------------------------------------
# Code sizes
# ---------------------------------------------------------------------------

def capacity_code_size(n: int, energy: float) -> int:
    """floor(2^(n * C_bpsk(E))), clamped below at 2."""
    if n < 1:
        raise ConfigError("n must be positive")
    if energy <= 0:
        raise ConfigError("capacity-achieving size needs E > 0")
    return max(2, int(np.floor(2.0 ** (n * bpsk_capacity(energy)))))


def capacity_linear_k(n: int, energy: float) -> int:
    """Largest k with 2^k codewords not exceeding the capacity size."""
    size = capacity_code_size(n, energy)
    return max(1, int(np.floor(np.log2(size))))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def random_codebook(n: int, size: int, energy: float, seed: int) -> Codebook:
    """`size` distinct words sampled uniformly, resampling on collision."""
    if size > 2 ** n:
        raise ConfigError(f"cannot draw {size} distinct words of length {n}")
    rng = np.random.default_rng(seed)
    seen: dict[int, None] = {}
    while len(seen) < size:
        w = int(rng.integers(0, 2 ** n))
        if w not in seen:
            seen[w] = None
    words = np.array([_int_bits(w, n) for w in seen], dtype=np.uint8)
    return Codebook(n, size, energy, "random", words, seed=seed)


def linear_codebook(n: int, k: int, energy: float, seed: int) -> Codebook:
    """Random standard-form linear code: G = (I_k | P), P i.i.d. uniform."""
    if not 1 <= k <= n:
        raise ConfigError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    P = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    G = np.concatenate([np.eye(k, dtype=np.uint8), P], axis=1)
    return Codebook(n, 2 ** k, energy, "linear", _span(G), seed=seed, generator=G)


def _span(G: np.ndarray) -> np.ndarray:
    """All words cG over message bits c in lexicographic order."""
    k, n = G.shape
    msgs = np.array([_int_bits(m, k) for m in range(2 ** k)], dtype=np.uint8)
    return (msgs @ G) % 2


def _int_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - j)) & 1 for j in range(width)],
                    dtype=np.uint8)


# ---------------------------------------------------------------------------
# Polar codes
# ---------------------------------------------------------------------------

def polar_generator(n: int) -> np.ndarray:
    """G_n = B_n [[1,0],[1,1]]^{kron l} over GF(2), n = 2^l.

    B_n permutes rows by reversing the l-bit binary index.
    """
    ell = _log2_exact(n)
    kernel = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    M = np.array([[1]], dtype=np.uint8)
    for _ in range(ell):
        M = np.kron(M, kernel)
    perm = [_bit_reverse(i, ell) for i in range(n)]
    return M[perm, :] % 2


def _log2_exact(n: int) -> int:
    ell = int(round(np.log2(n))) if n >= 1 else -1
    if n < 1 or 2 ** ell != n:
        raise ConfigError(f"n must be a power of 2, got {n}")
    return ell


def _bit_reverse(idx: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (idx & 1)
        idx >>= 1
    return out


def polar_split_channel_rates(n: int, energy: float) -> np.ndarray:
    """Holevo information I_i of each split channel, i = 1..n (0-based array).

    Split channel i maps input bit u_i to the uniform mixture over future
    bits of the coherent codewords |alpha(u G_n)>, jointly with the classical
    past register.  The code's bit-flip symmetry makes the conditional terms
    independent of the past, so they are evaluated at the all-zeros past;
    the two conditional branches (u_i = 0/1) are unitarily related, which is
    asserted via their entropies.  Entropies come from Gram-matrix spectra
    of the pure-state mixtures.
    """
    if energy <= 0:
        raise ConfigError("split-channel rates need E > 0")
    G = polar_generator(n)
    rates = np.empty(n)
    for i in range(n):
        words = {0: [], 1: []}
        n_future = n - i - 1
        for u_i in (0, 1):
            for fut in range(2 ** n_future):
                u = np.zeros(n, dtype=np.uint8)
                u[i] = u_i
                u[i + 1:] = _int_bits(fut, n_future)
                words[u_i].append((u @ G) % 2)
        s_joint = _mixture_entropy(words[0] + words[1], energy)
        s0 = _mixture_entropy(words[0], energy)
        s1 = _mixture_entropy(words[1], energy)
        # the two branches differ by a product of per-mode sign flips, a
        # unitary, so their entropies must agree
        assert abs(s0 - s1) < 1e-9, f"bit-flip symmetry violated at index {i}"
        rates[i] = s_joint - 0.5 * (s0 + s1)
    return rates


def _mixture_entropy(words: list[np.ndarray], energy: float) -> float:
    """von Neumann entropy (bits) of a uniform mixture of BPSK codewords."""
    W = np.asarray(words, dtype=np.uint8)
    dist = (W[:, None, :] != W[None, :, :]).sum(axis=2)
    gram = np.exp(-2.0 * energy * dist)
    lam = np.linalg.eigvalsh(gram / len(words))
    lam = lam[lam > 0]
    return float(-(lam * np.log2(lam)).sum())


def polar_frozen_threshold(n: int) -> float:
    """Rate threshold log2(2 / (1 + 2^(-sqrt(n)))) below which bits freeze."""
    return float(np.log2(2.0 / (1.0 + 2.0 ** (-np.sqrt(n)))))


def polar_codebook(n: int, energy: float) -> Codebook:
    """Polar codebook with frozen input bits fixed to 0."""
    rates = polar_split_channel_rates(n, energy)
    threshold = polar_frozen_threshold(n)
    frozen = [i for i in range(n) if rates[i] <= threshold]
    free = [i for i in range(n) if i not in frozen]
    if not free:
        raise ConfigError(f"all {n} split channels frozen at E={energy}: empty code")
    G = polar_generator(n)
    words = []
    for msg in range(2 ** len(free)):
        u = np.zeros(n, dtype=np.uint8)
        u[free] = _int_bits(msg, len(free))
        words.append((u @ G) % 2)
    return Codebook(n, 2 ** len(free), energy, "polar",
                    np.array(words, dtype=np.uint8),
                    generator=G, frozen=frozen, split_rates=rates)


# ---------------------------------------------------------------------------
# Hadamard words (the PPM-convertible reference code)
# ---------------------------------------------------------------------------

def hadamard_matrix(n: int) -> np.ndarray:
    """Sylvester Hadamard matrix of order n = 2^l, entries +-1."""
    ell = _log2_exact(n)
    H = np.array([[1]])
    for _ in range(ell):
        H = np.kron(H, np.array([[1, 1], [1, -1]]))
    return H


def hadamard_codebook(n: int, energy: float, order: list[int] | None = None) -> Codebook:
    """n codewords given by rows of the order-n Hadamard matrix (+1 -> 0).

    `order` optionally permutes the rows so that message m maps to a chosen
    output mode under a fixed mesh.
    """
    H = hadamard_matrix(n)
    words = ((1 - H) // 2).astype(np.uint8)
    if order is not None:
        words = words[order]
    return Codebook(n, n, energy, "hadamard", words)
