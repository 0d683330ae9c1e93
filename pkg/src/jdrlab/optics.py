"""Exact Gaussian-state simulation with threshold photodetection.

Conventions (fixed globally, everything else in the package relies on them):

* hbar = 1.  Quadratures are ordered xxpp: ``r = (x_1..x_n, p_1..p_n)``.
* Vacuum covariance is ``I/2``; a coherent state ``|alpha>`` has mean
  ``sqrt(2) * (Re alpha_1..Re alpha_n, Im alpha_1..Im alpha_n)`` and
  covariance ``I/2``.
* A phase gate with angle ``phi`` multiplies the mode amplitude by
  ``exp(-i phi)``, i.e. rotates ``(x, p)`` by ``-phi``.
* A beamsplitter with mixing angle ``theta`` and phase ``phi`` acts on the
  amplitudes of its two target modes as::

      [[cos(theta),             exp(-i phi) sin(theta)],
       [-exp(i phi) sin(theta), cos(theta)           ]]

* A squeezer ``squeeze(r, phi)`` scales the quadratures by ``exp(+-r)``
  along an axis rotated by ``phi/2``; on vacuum with ``phi = 0`` it yields
  ``cov = diag(exp(2r)/2, exp(-2r)/2)``.
* A displacement ``displace(beta)`` adds ``beta`` to the mode amplitude,
  i.e. ``d = (sqrt(2) Re beta, sqrt(2) Im beta)`` on the mean vector.

Threshold detectors are binary (vacuum vs one-or-more photons); outcome
bitstrings are indexed MSB-first, so outcome index ``c`` has bit ``c_i`` of
mode ``i`` at position ``n - 1 - i`` and the all-vacuum outcome is index 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

#: Tolerance below which a negative outcome probability is treated as
#: roundoff and clamped; anything more negative aborts the computation.
NEGATIVE_PROB_TOL = 1e-9


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass
class GaussianState:
    """Mean vector and covariance matrix of an n-mode Gaussian state."""

    n_modes: int
    mean: np.ndarray   # shape (2n,), xxpp ordering
    cov: np.ndarray    # shape (2n, 2n)

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        return cls(n_modes, np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))

    @classmethod
    def coherent(cls, alphas: np.ndarray) -> "GaussianState":
        alphas = np.asarray(alphas, dtype=complex)
        n = alphas.size
        mean = np.sqrt(2.0) * np.concatenate([alphas.real, alphas.imag])
        return cls(n, mean, 0.5 * np.eye(2 * n))

    def amplitudes(self) -> np.ndarray:
        """Complex amplitudes implied by the mean vector (cov is ignored)."""
        n = self.n_modes
        return (self.mean[:n] + 1j * self.mean[n:]) / np.sqrt(2.0)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Omega in xxpp ordering: [[0, I], [-I, 0]]."""
    zero = np.zeros((n_modes, n_modes))
    eye = np.eye(n_modes)
    return np.block([[zero, eye], [-eye, zero]])


def is_symplectic(S: np.ndarray, tol: float = 1e-10) -> bool:
    n = S.shape[0] // 2
    omega = symplectic_form(n)
    return bool(np.max(np.abs(S @ omega @ S.T - omega)) < tol)


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------

@dataclass
class SymplecticGate:
    """Affine phase-space map: mean -> S mean + d, cov -> S cov S^T."""

    S: np.ndarray
    d: np.ndarray

    def apply(self, state: GaussianState) -> GaussianState:
        return GaussianState(
            state.n_modes,
            self.S @ state.mean + self.d,
            self.S @ state.cov @ self.S.T,
        )


def symplectic_from_unitary(U: np.ndarray) -> np.ndarray:
    """Embed a passive n x n amplitude unitary as a 2n x 2n symplectic.

    With alpha = (x + i p)/sqrt(2) and alpha' = U alpha, the quadratures map
    by [[Re U, -Im U], [Im U, Re U]].
    """
    return np.block([[U.real, -U.imag], [U.imag, U.real]])


def _embed_pair(n: int, i: int, j: int, block: np.ndarray) -> np.ndarray:
    U = np.eye(n, dtype=complex)
    U[i, i], U[i, j] = block[0, 0], block[0, 1]
    U[j, i], U[j, j] = block[1, 0], block[1, 1]
    return U


def beamsplitter_block(theta: float, phi: float) -> np.ndarray:
    ct, st = np.cos(theta), np.sin(theta)
    return np.array([[ct, np.exp(-1j * phi) * st],
                     [-np.exp(1j * phi) * st, ct]])


def gate_symplectic(kind: str, n_modes: int, modes, params) -> SymplecticGate:
    """Build the symplectic/displacement representation of a basic gate.

    Parameters
    ----------
    kind : one of ``beamsplitter``, ``phase``, ``squeeze``, ``displace``.
    n_modes : total mode count of the circuit.
    modes : target mode index (int) or pair of indices for a beamsplitter.
    params : gate parameters: ``(theta, phi)``, ``phi``, ``(r, phi)`` or a
        complex ``beta`` respectively.
    """
    d = np.zeros(2 * n_modes)
    if kind == "beamsplitter":
        i, j = modes
        _check_mode(n_modes, i)
        _check_mode(n_modes, j)
        theta, phi = params
        U = _embed_pair(n_modes, i, j, beamsplitter_block(theta, phi))
        return SymplecticGate(symplectic_from_unitary(U), d)
    if kind == "phase":
        i = int(modes)
        _check_mode(n_modes, i)
        phi = float(params)
        U = np.eye(n_modes, dtype=complex)
        U[i, i] = np.exp(-1j * phi)
        return SymplecticGate(symplectic_from_unitary(U), d)
    if kind == "squeeze":
        i = int(modes)
        _check_mode(n_modes, i)
        r, phi = params
        rot = np.array([[np.cos(phi / 2), np.sin(phi / 2)],
                        [-np.sin(phi / 2), np.cos(phi / 2)]])
        local = rot.T @ np.diag([np.exp(r), np.exp(-r)]) @ rot
        S = np.eye(2 * n_modes)
        for a, ia in enumerate((i, n_modes + i)):
            for b, ib in enumerate((i, n_modes + i)):
                S[ia, ib] = local[a, b]
        return SymplecticGate(S, d)
    if kind == "displace":
        i = int(modes)
        _check_mode(n_modes, i)
        beta = complex(params)
        S = np.eye(2 * n_modes)
        d[i] = np.sqrt(2.0) * beta.real
        d[n_modes + i] = np.sqrt(2.0) * beta.imag
        return SymplecticGate(S, d)
    raise ValueError(f"unknown gate kind: {kind!r}")


def _check_mode(n_modes: int, i: int) -> None:
    if not 0 <= i < n_modes:
        raise ValueError(f"mode index {i} out of range for {n_modes} modes")


def compose(gates: list[SymplecticGate], n_modes: int) -> SymplecticGate:
    """Net affine map of a gate sequence (gates[0] acts first)."""
    S = np.eye(2 * n_modes)
    d = np.zeros(2 * n_modes)
    for g in gates:
        S = g.S @ S
        d = g.S @ d + g.d
    return SymplecticGate(S, d)


# ---------------------------------------------------------------------------
# Clements rectangle
# ---------------------------------------------------------------------------

def clements_layout(n: int) -> list[tuple[int, int]]:
    """Ordered beamsplitter slots of the rectangular n-mode mesh.

    Layer ell couples adjacent pairs starting at mode 0 for even ell and at
    mode 1 for odd ell; n layers give exactly n(n-1)/2 slots.  The layout is
    deterministic and identical across calls.
    """
    if n < 1:
        raise ValueError("need at least one mode")
    slots: list[tuple[int, int]] = []
    for layer in range(n):
        start = layer % 2
        for i in range(start, n - 1, 2):
            slots.append((i, i + 1))
    assert len(slots) == n * (n - 1) // 2
    return slots


# ---------------------------------------------------------------------------
# Threshold detection statistics
# ---------------------------------------------------------------------------

def vacuum_probability(state: GaussianState, modes) -> float:
    """<0|rho_T|0> for the marginal of `state` on the mode subset `modes`.

    Uses the Gaussian overlap with vacuum,
    det(sigma_T + I/2)^(-1/2) * exp(-r_T^T (sigma_T + I/2)^(-1) r_T / 2).
    """
    modes = list(modes)
    if not modes:
        return 1.0
    n = state.n_modes
    idx = np.array(modes + [n + m for m in modes])
    r = state.mean[idx]
    sigma = state.cov[np.ix_(idx, idx)]
    M = sigma + 0.5 * np.eye(len(idx))
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "sigma_T + I/2 not positive definite; state violates "
            "physicality or is badly conditioned") from exc
    logdet = 2.0 * np.log(np.diag(L)).sum()
    y = np.linalg.solve(L, r)  # r^T M^-1 r = |L^-1 r|^2
    return float(np.exp(-0.5 * logdet - 0.5 * y @ y))


def _kahan_add(total: float, comp: float, term: float) -> tuple[float, float]:
    y = term - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def outcome_distribution(state: GaussianState, max_modes: int = 8) -> np.ndarray:
    """Probabilities of all 2^n threshold-detector outcomes of `state`.

    Outcome bit 1 means "click" (one or more photons).  Computed by
    inclusion-exclusion over vacuum projections: for no-click set S0 and
    click set S1,

        P(c) = sum_{A subset of S1} (-1)^|A| P_vac(S0 ∪ A),

    with compensated summation of the signed terms.  Exponential in n, so n
    is capped (default 8).
    """
    n = state.n_modes
    if n > max_modes:
        raise ValueError(f"outcome tables limited to {max_modes} modes, got {n}")
    # Vacuum probability of every mode subset, indexed by bitmask with mode i
    # at bit (n - 1 - i) to match the outcome indexing.
    q = np.empty(2 ** n)
    q[0] = 1.0
    for mask in range(1, 2 ** n):
        modes = [i for i in range(n) if mask >> (n - 1 - i) & 1]
        q[mask] = vacuum_probability(state, modes)
    probs = np.empty(2 ** n)
    full = 2 ** n - 1
    for c in range(2 ** n):
        s0 = full & ~c          # no-click modes
        s1 = c                  # click modes
        total, comp = 0.0, 0.0
        # enumerate submasks A of s1
        a = s1
        while True:
            sign = -1.0 if bin(a).count("1") % 2 else 1.0
            total, comp = _kahan_add(total, comp, sign * q[s0 | a])
            if a == 0:
                break
            a = (a - 1) & s1
        probs[c] = total
    low = probs.min()
    if low < -NEGATIVE_PROB_TOL:
        cond = np.linalg.cond(state.cov + 0.5 * np.eye(2 * n))
        raise NumericalError(
            f"outcome probability {low:.3e} below -{NEGATIVE_PROB_TOL:.0e}; "
            f"cov conditioning {cond:.3e}")
    return np.clip(probs, 0.0, 1.0)


def coherent_outcome_distribution(alphas: np.ndarray) -> np.ndarray:
    """Fast-path outcome table for a product coherent state.

    Per-mode no-click probability is exp(-|alpha_i|^2); the joint table is
    the product over modes, assembled MSB-first so mode 0 is the leading bit.
    """
    alphas = np.asarray(alphas, dtype=complex)
    no_click = np.exp(-np.abs(alphas) ** 2)
    probs = np.array([1.0])
    for p0 in no_click:
        probs = np.kron(probs, np.array([p0, 1.0 - p0]))
    return probs


def sample_outcomes(dist: np.ndarray, n_shots: int, seed) -> np.ndarray:
    """Draw i.i.d. outcome indices by inverse CDF; deterministic given seed."""
    dist = np.asarray(dist, dtype=float)
    cdf = np.cumsum(dist)
    cdf[-1] = 1.0
    rng = np.random.default_rng(seed)
    u = rng.random(n_shots)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def outcome_bits(index: int, n_modes: int) -> tuple[int, ...]:
    """Bit tuple (c_1..c_n) of an outcome index, mode 0 first (MSB)."""
    return tuple((index >> (n_modes - 1 - i)) & 1 for i in range(n_modes))


def outcome_index(bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx
