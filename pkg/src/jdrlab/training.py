"""Supervised decoder learning with Adam on finite-difference gradients.

Each training step draws a batch of codewords, computes the batch decoding
loss (exact outcome probabilities, or empirical frequencies from a finite
number of shots), and updates the circuit parameters.  Restarts draw fresh
initializations; ensemble runs repeat the whole procedure over independently
constructed codebooks.  Every random stream is derived from
(master seed, codebook index, restart index), so results do not depend on
execution order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import decoder
from .codes import (Codebook, capacity_code_size, capacity_linear_k,
                    linear_codebook, polar_codebook, random_codebook)
from .errors import ConfigError, NumericalError

FULL_BATCH_LIMIT = 64


@dataclass
class AdamConfig:
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass
class TrainConfig:
    batch_size: int | None = None      # None: full codebook up to FULL_BATCH_LIMIT
    max_iters: int = 300
    plateau_patience: int = 50
    plateau_tol: float = 1e-5          # relative improvement threshold
    n_restarts: int = 10
    adam: AdamConfig = field(default_factory=AdamConfig)
    fd_step: float = 1e-3
    seed: int = 0
    mode: str = "probability"          # or "sampling"
    n_shots: int = 1000

    def __post_init__(self) -> None:
        if self.mode not in ("probability", "sampling"):
            raise ConfigError(f"unknown training mode {self.mode!r}")
        for name in ("max_iters", "plateau_patience", "n_restarts", "n_shots"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        for name in ("plateau_tol", "fd_step"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError("batch_size must be positive")

    def effective_batch(self, size: int) -> int:
        if self.batch_size is not None:
            if self.batch_size > size:
                raise ConfigError("batch_size exceeds codebook size")
            return self.batch_size
        return min(size, FULL_BATCH_LIMIT)


@dataclass
class TrainingRun:
    codebook: Codebook
    params: decoder.CircuitParams      # best parameters found
    p_err: float                       # exact loss on the full codebook
    initial_p_err: float               # same, at the winning restart's init
    loss_history: list[float]          # winning restart, one entry per iteration
    restart_index: int
    seed: int
    config: TrainConfig
    wall_time: float
    restart_p_errs: list[float]        # exact final loss of every restart

    @property
    def p_succ(self) -> float:
        return 1.0 - self.p_err


# ---------------------------------------------------------------------------
# Loss
# ---------------------------------------------------------------------------

def batch_loss(codebook: Codebook, params: decoder.CircuitParams,
               batch: np.ndarray, mode: str = "probability",
               n_shots: int = 1000, seed=0) -> float:
    """Decoding loss 1 - mean_c P(c | ml(c)) over a batch of codewords.

    In probability mode the exact outcome rows are used; the ML labels come
    from the batch itself, so a full-codebook batch reproduces the exact
    average error probability.  In sampling mode the rows are replaced by
    relative frequencies over `n_shots` draws per codeword.
    """
    batch = np.asarray(batch, dtype=int)
    if batch.size == 0:
        raise ConfigError("empty training batch")
    table = decoder.table_for_words(
        codebook.words[batch], codebook.energy_received, params)
    if mode == "probability":
        return decoder.error_probability(table)
    if mode == "sampling":
        return decoder.error_probability(
            _empirical_table(table, n_shots, seed))
    raise ConfigError(f"unknown training mode {mode!r}")


def _empirical_table(table: np.ndarray, n_shots: int, seed) -> np.ndarray:
    """Relative outcome frequencies from n_shots multinomial draws per row."""
    rng = np.random.default_rng(seed)
    counts = np.stack([rng.multinomial(n_shots, row / row.sum())
                       for row in table])
    return counts / n_shots


def loss_with_rule(table: np.ndarray, rule: np.ndarray) -> float:
    """Loss under a frozen outcome -> message map (no argmax re-derivation)."""
    size = table.shape[0]
    picked = table[rule, np.arange(table.shape[1])]
    return float(1.0 - picked.sum() / size)


# ---------------------------------------------------------------------------
# Gradient and optimizer
# ---------------------------------------------------------------------------

def fd_gradient(codebook: Codebook, params: decoder.CircuitParams,
                batch: np.ndarray, fd_step: float = 1e-3) -> np.ndarray:
    """Central finite differences of the probability-mode batch loss."""
    theta = params.theta
    grad = np.empty_like(theta)
    for i in range(theta.size):
        shift = np.zeros_like(theta)
        shift[i] = fd_step
        lo = batch_loss(codebook, params.replace_theta(theta - shift), batch)
        hi = batch_loss(codebook, params.replace_theta(theta + shift), batch)
        grad[i] = (hi - lo) / (2.0 * fd_step)
    return grad


class AdamState:
    """Plain Adam with bias correction."""

    def __init__(self, dim: int, cfg: AdamConfig):
        self.cfg = cfg
        self.m = np.zeros(dim)
        self.v = np.zeros(dim)
        self.t = 0

    def step(self, theta: np.ndarray, grad: np.ndarray) -> np.ndarray:
        c = self.cfg
        self.t += 1
        self.m = c.beta1 * self.m + (1 - c.beta1) * grad
        self.v = c.beta2 * self.v + (1 - c.beta2) * grad ** 2
        m_hat = self.m / (1 - c.beta1 ** self.t)
        v_hat = self.v / (1 - c.beta2 ** self.t)
        return theta - c.lr * m_hat / (np.sqrt(v_hat) + c.eps)


# ---------------------------------------------------------------------------
# Initialization
# ---------------------------------------------------------------------------

def initial_theta(layout: decoder.ParamLayout, energy: float,
                  rng: np.random.Generator) -> np.ndarray:
    """Mesh angles uniform in [0, 2pi); displacements ~ N(0, sqrt(E));
    squeeze magnitudes uniform in [0, 0.5].

    Displacements must start on the signal scale or the optimizer never
    finds nulling solutions.
    """
    theta = np.empty(layout.total)
    sec = layout.sections
    for name in ("mesh1", "phases1", "mesh2", "phases2"):
        if name in sec:
            theta[sec[name]] = rng.uniform(0.0, 2.0 * np.pi,
                                           sec[name].stop - sec[name].start)
    if "squeeze" in sec:
        theta[sec["squeeze"]] = rng.uniform(
            0.0, 0.5, sec["squeeze"].stop - sec["squeeze"].start)
    theta[sec["displacements"]] = rng.normal(
        0.0, max(np.sqrt(energy), 1e-3),
        sec["displacements"].stop - sec["displacements"].start)
    return theta


# ---------------------------------------------------------------------------
# Training loops
# ---------------------------------------------------------------------------

def _run_restart(codebook: Codebook, config: TrainConfig, n_ancilla: int,
                 squeezing: bool, seed_seq: np.random.SeedSequence):
    """One restart: returns (best params, loss history) or None on blow-up."""
    rng = np.random.default_rng(seed_seq)
    layout = decoder.param_layout(codebook.n, n_ancilla, squeezing)
    theta0 = initial_theta(layout, codebook.energy_received, rng)
    params = decoder.CircuitParams(codebook.n, n_ancilla, squeezing, theta0)
    adam = AdamState(layout.total, config.adam)
    batch_size = config.effective_batch(codebook.size)
    full = np.arange(codebook.size)

    history: list[float] = []
    best_loss = np.inf
    best_theta = params.theta.copy()
    stall = 0
    for it in range(config.max_iters):
        if batch_size == codebook.size:
            batch = full
        else:
            batch = rng.choice(codebook.size, size=batch_size, replace=False)
        shot_seed = rng.integers(2 ** 63) if config.mode == "sampling" else 0
        loss = batch_loss(codebook, params, batch, config.mode,
                          config.n_shots, shot_seed)
        if not np.isfinite(loss):
            return None, history, f"non-finite loss at iteration {it}", theta0
        history.append(loss)
        margin = config.plateau_tol * max(abs(best_loss), 1e-12)
        if not np.isfinite(best_loss) or loss < best_loss - margin:
            best_loss, best_theta, stall = loss, params.theta.copy(), 0
        else:
            stall += 1
            if loss < best_loss:
                best_loss, best_theta = loss, params.theta.copy()
            if stall >= config.plateau_patience:
                break
        if config.mode == "probability":
            grad = fd_gradient(codebook, params, batch, config.fd_step)
        else:
            grad = _sampled_gradient(codebook, params, batch, config, shot_seed)
        params = params.replace_theta(adam.step(params.theta, grad))
    return params.replace_theta(best_theta), history, None, theta0


def _sampled_gradient(codebook: Codebook, params: decoder.CircuitParams,
                      batch: np.ndarray, config: TrainConfig,
                      shot_seed) -> np.ndarray:
    """Central differences on sampled losses with common random numbers."""
    theta = params.theta
    grad = np.empty_like(theta)
    for i in range(theta.size):
        shift = np.zeros_like(theta)
        shift[i] = config.fd_step
        lo = batch_loss(codebook, params.replace_theta(theta - shift), batch,
                        "sampling", config.n_shots, shot_seed)
        hi = batch_loss(codebook, params.replace_theta(theta + shift), batch,
                        "sampling", config.n_shots, shot_seed)
        grad[i] = (hi - lo) / (2.0 * config.fd_step)
    return grad


def true_error(codebook: Codebook, params: decoder.CircuitParams) -> float:
    """Exact average error probability on the full codebook."""
    return decoder.error_probability(decoder.conditional_table(codebook, params))


def train(codebook: Codebook, config: TrainConfig, n_ancilla: int = 0,
          squeezing: bool = False, stream_key: tuple = (),
          restart_indices=None) -> TrainingRun:
    """Full training: restarts, Adam, plateau stop; best restart by exact loss.

    `restart_indices` selects a subset of the restart streams (used by the
    CLI for resumable per-restart runs); the streams themselves depend only
    on (seed, stream_key, restart index), never on the subset.
    """
    t0 = time.perf_counter()
    best: tuple[float, decoder.CircuitParams, list[float], int, float] | None = None
    restart_p_errs: list[float] = []
    failures: list[str] = []
    if restart_indices is None:
        restart_indices = range(config.n_restarts)
    for r in restart_indices:
        seq = np.random.SeedSequence([config.seed, *stream_key, r])
        params, history, failure, theta0 = _run_restart(
            codebook, config, n_ancilla, squeezing, seq)
        if failure is not None:
            failures.append(f"restart {r}: {failure}")
            restart_p_errs.append(float("nan"))
            continue
        p_err = true_error(codebook, params)
        restart_p_errs.append(p_err)
        if best is None or p_err < best[0]:
            init_p_err = true_error(codebook, params.replace_theta(theta0))
            best = (p_err, params, history, r, init_p_err)
    if best is None:
        raise NumericalError("all restarts diverged: " + "; ".join(failures))
    p_err, params, history, r_idx, init_p_err = best
    return TrainingRun(
        codebook=codebook, params=params, p_err=p_err,
        initial_p_err=init_p_err, loss_history=history, restart_index=r_idx,
        seed=config.seed, config=config,
        wall_time=time.perf_counter() - t0, restart_p_errs=restart_p_errs)


# ---------------------------------------------------------------------------
# Codebook ensembles
# ---------------------------------------------------------------------------

@dataclass
class EnsembleResult:
    runs: list[TrainingRun]
    average_p_succ: float
    best_p_succ: float
    best_index: int

    @property
    def best_run(self) -> TrainingRun:
        return self.runs[self.best_index]


def build_codebook(code_type: str, n: int, energy: float, seed: int) -> Codebook:
    if code_type == "random":
        return random_codebook(n, capacity_code_size(n, energy), energy, seed)
    if code_type == "linear":
        return linear_codebook(n, capacity_linear_k(n, energy), energy, seed)
    if code_type == "polar":
        return polar_codebook(n, energy)
    raise ConfigError(f"unknown code type {code_type!r}")


def ensemble_codebook_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


def train_ensemble(n: int, energy: float, code_type: str, k_codebooks: int,
                   config: TrainConfig, n_ancilla: int = 0,
                   squeezing: bool = False) -> EnsembleResult:
    """Train over independently constructed codebooks; report mean and max.

    Polar codes have a single deterministic codebook per (n, E), so the
    ensemble collapses to one member.
    """
    if k_codebooks < 1:
        raise ConfigError("need at least one codebook")
    if code_type == "polar":
        k_codebooks = 1
    runs = []
    for k in range(k_codebooks):
        codebook = build_codebook(code_type, n, energy,
                                  ensemble_codebook_seed(config.seed, k))
        runs.append(train(codebook, config, n_ancilla, squeezing,
                          stream_key=(k,)))
    succ = np.array([run.p_succ for run in runs])
    best = int(np.argmax(succ))
    return EnsembleResult(runs=runs, average_p_succ=float(succ.mean()),
                          best_p_succ=float(succ[best]), best_index=best)
