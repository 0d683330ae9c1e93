"""Decoding circuits: parameter layout, conditional tables, ML decisions.

A decoder is a parametrized Gaussian circuit followed by one threshold
detector per mode (ancillas included: every mode is measured).  The flat
parameter vector is bound to gate slots as follows, with N = signal +
ancilla modes:

* no squeezing, N(N+1) parameters:
  ``[theta, phi] * (N(N-1)/2 mesh slots)  |  N phases  |  N displacements``
* with squeezing, 2N(N+1) parameters:
  ``mesh_1  |  N phases  |  N squeeze magnitudes  |  mesh_2  |  N phases  |
  N displacements``

Displacement (and squeezer) phases are absorbed into the adjacent phase
columns, so their magnitudes are real scalars; threshold detection is
insensitive to a trailing output phase, so nothing is lost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import optics
from .codes import Codebook, encode_bpsk
from .errors import ConfigError


def param_count(n_signal: int, n_ancilla: int = 0, squeezing: bool = False) -> int:
    N = n_signal + n_ancilla
    return 2 * N * (N + 1) if squeezing else N * (N + 1)


@dataclass
class ParamLayout:
    """Slices binding segments of the flat parameter vector to gate columns."""

    n_modes: int
    squeezing: bool
    mesh_slots: list[tuple[int, int]] = field(init=False)
    sections: dict[str, slice] = field(init=False)
    total: int = field(init=False)

    def __post_init__(self) -> None:
        N = self.n_modes
        self.mesh_slots = optics.clements_layout(N)
        n_bs = 2 * len(self.mesh_slots)
        pos = 0
        sections: dict[str, slice] = {}

        def take(name: str, count: int) -> None:
            nonlocal pos
            sections[name] = slice(pos, pos + count)
            pos += count

        take("mesh1", n_bs)
        take("phases1", N)
        if self.squeezing:
            take("squeeze", N)
            take("mesh2", n_bs)
            take("phases2", N)
        take("displacements", N)
        self.sections = sections
        self.total = pos


@lru_cache(maxsize=None)
def _cached_layout(n_modes: int, squeezing: bool) -> ParamLayout:
    return ParamLayout(n_modes, squeezing)


def param_layout(n_signal: int, n_ancilla: int = 0,
                 squeezing: bool = False) -> ParamLayout:
    """The deterministic slot layout (cached, treat as frozen).

    Only the total mode count matters: ancillas are ordinary vacuum-fed,
    measured modes appended after the signal modes.
    """
    return _cached_layout(n_signal + n_ancilla, squeezing)


@dataclass
class CircuitParams:
    """Ordered real parameters plus the layout fixing their gate slots."""

    n_signal: int
    n_ancilla: int
    squeezing: bool
    theta: np.ndarray

    def __post_init__(self) -> None:
        self.theta = np.asarray(self.theta, dtype=float)
        expected = param_count(self.n_signal, self.n_ancilla, self.squeezing)
        if self.theta.shape != (expected,):
            raise ConfigError(
                f"parameter vector has length {self.theta.size}, "
                f"layout needs {expected}")

    @property
    def n_modes(self) -> int:
        return self.n_signal + self.n_ancilla

    @property
    def layout(self) -> ParamLayout:
        return param_layout(self.n_signal, self.n_ancilla, self.squeezing)

    @classmethod
    def identity(cls, n_signal: int, n_ancilla: int = 0,
                 squeezing: bool = False) -> "CircuitParams":
        return cls(n_signal, n_ancilla, squeezing,
                   np.zeros(param_count(n_signal, n_ancilla, squeezing)))

    def replace_theta(self, theta: np.ndarray) -> "CircuitParams":
        return CircuitParams(self.n_signal, self.n_ancilla, self.squeezing, theta)

    def section(self, name: str) -> np.ndarray:
        return self.theta[self.layout.sections[name]]


# ---------------------------------------------------------------------------
# Circuit application
# ---------------------------------------------------------------------------

def _mesh_unitary(N: int, slots, thetas: np.ndarray) -> np.ndarray:
    U = np.eye(N, dtype=complex)
    for idx, (i, j) in enumerate(slots):
        block = optics.beamsplitter_block(thetas[2 * idx], thetas[2 * idx + 1])
        rows = np.array([i, j])
        U[rows, :] = block @ U[rows, :]
    return U


def passive_unitary(params: CircuitParams) -> tuple[np.ndarray, np.ndarray]:
    """(U, d): amplitude map ``alpha -> U alpha + d`` of a no-squeezing circuit."""
    if params.squeezing:
        raise ConfigError("fast path undefined for squeezing circuits")
    layout = params.layout
    U = _mesh_unitary(params.n_modes, layout.mesh_slots, params.section("mesh1"))
    U = np.exp(-1j * params.section("phases1"))[:, None] * U
    d = params.section("displacements").astype(complex)
    return U, d


def circuit_gates(params: CircuitParams) -> list[optics.SymplecticGate]:
    """Compile the parameter vector to an ordered gate list."""
    N = params.n_modes
    layout = params.layout
    gates: list[optics.SymplecticGate] = []

    def mesh(section: str) -> None:
        thetas = params.section(section)
        for idx, pair in enumerate(layout.mesh_slots):
            gates.append(optics.gate_symplectic(
                "beamsplitter", N, pair, (thetas[2 * idx], thetas[2 * idx + 1])))

    def phases(section: str) -> None:
        for i, phi in enumerate(params.section(section)):
            gates.append(optics.gate_symplectic("phase", N, i, phi))

    mesh("mesh1")
    phases("phases1")
    if params.squeezing:
        for i, r in enumerate(params.section("squeeze")):
            gates.append(optics.gate_symplectic("squeeze", N, i, (r, 0.0)))
        mesh("mesh2")
        phases("phases2")
    for i, beta in enumerate(params.section("displacements")):
        gates.append(optics.gate_symplectic("displace", N, i, beta))
    return gates


def _with_ancillas(params: CircuitParams, alphas: np.ndarray) -> np.ndarray:
    alphas = np.atleast_2d(np.asarray(alphas, dtype=complex))
    if alphas.shape[1] != params.n_signal:
        raise ConfigError(
            f"{alphas.shape[1]} input amplitudes for {params.n_signal} signal modes")
    pad = np.zeros((alphas.shape[0], params.n_ancilla), dtype=complex)
    return np.concatenate([alphas, pad], axis=1)


def output_amplitudes(params: CircuitParams, alphas: np.ndarray) -> np.ndarray:
    """Fast path: output amplitudes for coherent input rows (ancillas appended)."""
    squeeze_out = np.asarray(alphas).ndim == 1
    U, d = passive_unitary(params)
    out = _with_ancillas(params, alphas) @ U.T + d
    return out[0] if squeeze_out else out


def apply_circuit(params: CircuitParams, alphas: np.ndarray) -> optics.GaussianState:
    """Covariance-path output state for one coherent input (ancillas appended)."""
    state = optics.GaussianState.coherent(_with_ancillas(params, alphas)[0])
    for gate in circuit_gates(params):
        state = gate.apply(state)
    return state


def _coherent_tables(out_amps: np.ndarray) -> np.ndarray:
    """Outcome tables for rows of output amplitudes, shape (rows, 2^N)."""
    no_click = np.exp(-np.abs(out_amps) ** 2)
    rows = no_click.shape[0]
    probs = np.ones((rows, 1))
    for i in range(no_click.shape[1]):
        step = np.stack([no_click[:, i], 1.0 - no_click[:, i]], axis=1)
        probs = (probs[:, :, None] * step[:, None, :]).reshape(rows, -1)
    return probs


def outcome_distribution(params: CircuitParams, alphas: np.ndarray,
                         force_covariance: bool = False) -> np.ndarray:
    """Threshold-detection outcome table of the circuit on one codeword."""
    if params.squeezing or force_covariance:
        return optics.outcome_distribution(apply_circuit(params, alphas))
    return _coherent_tables(output_amplitudes(params, np.atleast_2d(alphas)))[0]


# ---------------------------------------------------------------------------
# Conditional tables and decisions
# ---------------------------------------------------------------------------

def table_for_words(words: np.ndarray, energy: float, params: CircuitParams,
                    force_covariance: bool = False) -> np.ndarray:
    """P(c|m) for a stack of codewords, shape (rows, 2^N)."""
    alphas = encode_bpsk(np.atleast_2d(words), energy)
    if params.squeezing or force_covariance:
        return np.stack([
            optics.outcome_distribution(apply_circuit(params, a)) for a in alphas])
    return _coherent_tables(output_amplitudes(params, alphas))


def conditional_table(codebook: Codebook, params: CircuitParams,
                      force_covariance: bool = False) -> np.ndarray:
    """P(c|m) for every codeword of the codebook, shape (size, 2^N)."""
    if codebook.n != params.n_signal:
        raise ConfigError("codebook length does not match signal modes")
    return table_for_words(codebook.words, codebook.energy_received,
                           params, force_covariance)


def ml_rule(table: np.ndarray) -> np.ndarray:
    """Maximum-likelihood guess per outcome; ties pick the smallest index."""
    return np.argmax(table, axis=0)


def error_probability(table: np.ndarray) -> float:
    """Average decoding error 1 - mean_c max_m P(c|m) at uniform priors."""
    size = table.shape[0]
    return float(1.0 - table.max(axis=0).sum() / size)


def success_probability(table: np.ndarray) -> float:
    return 1.0 - error_probability(table)
