"""Post-training inspection: output mode profiles and aggregate tables.

The interesting physics of a discovered passive decoder is visible in the
per-codeword output amplitudes just before detection.  The profile report
measures (never enforces) two properties of good decoders: output
amplitudes that are real and positive, and pairwise mean-photon-number
separations of at least one photon on some mode.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import benchmarks, decoder
from .codes import Codebook
from .errors import ConfigError

IMAG_TOL = 1e-6

#: Exact column order of the results CSV.
RESULT_COLUMNS = [
    "n", "energy", "code_type", "codebook_seed", "restart_seed",
    "psucc_trained", "psucc_srm_lower", "psucc_upper", "psucc_helstrom",
    "psucc_kennedy", "psucc_homodyne", "psucc_ppm",
    "rate_trained", "rate_bpsk_capacity", "rate_helstrom", "rate_kennedy",
    "rate_homodyne", "rate_ppm", "pie", "die", "v_induced",
]


# ---------------------------------------------------------------------------
# Mode profiles
# ---------------------------------------------------------------------------

@dataclass
class ModeProfile:
    amplitudes: np.ndarray      # complex, shape (size, n_modes)
    photon_numbers: np.ndarray  # |amplitude|^2, same shape

    @property
    def size(self) -> int:
        return self.amplitudes.shape[0]


def mode_profile(codebook: Codebook, params: decoder.CircuitParams) -> ModeProfile:
    """Output amplitudes and mean photon numbers per codeword and mode.

    Defined for linear-optical (no-squeezing) circuits only, where the
    circuit maps coherent amplitudes to coherent amplitudes.
    """
    if params.squeezing:
        raise ConfigError("mode profiles are defined for passive circuits only")
    amps = decoder.output_amplitudes(params, codebook.amplitudes())
    return ModeProfile(amplitudes=amps, photon_numbers=np.abs(amps) ** 2)


@dataclass
class SeparationReport:
    max_separation: np.ndarray     # (size, size) max_i |n_i(m) - n_i(l)|
    separated_pairs: int           # pairs with separation > 1 photon
    total_pairs: int
    min_real: float                # min over Re(amplitude)
    max_imag: float                # max over |Im(amplitude)|
    real_positive: bool            # all amplitudes real (tol) and positive


def profile_separation(profile: ModeProfile) -> SeparationReport:
    """Pairwise photon-number separations plus the phase-alignment check."""
    nums = profile.photon_numbers
    diff = np.abs(nums[:, None, :] - nums[None, :, :]).max(axis=2)
    iu = np.triu_indices(profile.size, k=1)
    separated = int((diff[iu] > 1.0).sum())
    min_real = float(profile.amplitudes.real.min())
    max_imag = float(np.abs(profile.amplitudes.imag).max())
    return SeparationReport(
        max_separation=diff,
        separated_pairs=separated,
        total_pairs=len(iu[0]),
        min_real=min_real,
        max_imag=max_imag,
        real_positive=bool(max_imag < IMAG_TOL and min_real > -IMAG_TOL),
    )


# ---------------------------------------------------------------------------
# Result rows
# ---------------------------------------------------------------------------

def benchmark_row(codebook: Codebook) -> dict:
    """Results-CSV row holding only the analytic benchmark columns.

    Single-symbol success probabilities are raised to the n-th power: the
    comparable scheme decodes each of the n modes independently, so its
    message-level success is the per-symbol value to the n.  Rates stay in
    per-mode units.
    """
    n, energy = codebook.n, codebook.energy_received
    lower, upper = benchmarks.success_bounds(benchmarks.gram_matrix(codebook))
    ss = benchmarks.single_symbol(energy)
    ppm_succ, ppm_rate, _ = benchmarks.hadamard_ppm(max(n, 2), energy)
    return {
        "n": n,
        "energy": energy,
        "code_type": codebook.code_type,
        "codebook_seed": codebook.seed if codebook.seed is not None else "",
        "restart_seed": "",
        "psucc_trained": "",
        "psucc_srm_lower": lower,
        "psucc_upper": upper,
        "psucc_helstrom": benchmarks.scheme_success(ss.p_helstrom, n),
        "psucc_kennedy": benchmarks.scheme_success(ss.p_kennedy, n),
        "psucc_homodyne": benchmarks.scheme_success(ss.p_homodyne, n),
        "psucc_ppm": ppm_succ,
        "rate_trained": "",
        "rate_bpsk_capacity": benchmarks.capacities(energy).bpsk,
        "rate_helstrom": ss.rate_helstrom,
        "rate_kennedy": ss.rate_kennedy,
        "rate_homodyne": ss.rate_homodyne,
        "rate_ppm": ppm_rate,
        "pie": "",
        "die": "",
        "v_induced": "",
    }


def result_row(run, *, centered_variance: bool = False) -> dict:
    """One results-CSV row for a completed training run."""
    codebook = run.codebook
    n, energy = codebook.n, codebook.energy_received
    table = decoder.conditional_table(codebook, run.params)
    metrics = benchmarks.induced_metrics(
        n, energy, table=table, centered=centered_variance)
    row = benchmark_row(codebook)
    row.update({
        "restart_seed": run.seed,
        "psucc_trained": run.p_succ,
        "rate_trained": metrics.rate,
        "pie": metrics.pie,
        "die": metrics.die,
        "v_induced": metrics.entropy_variance,
    })
    return row


def results_table(rows: list[dict]) -> str:
    """Render result rows as CSV text with the fixed column order."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RESULT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        missing = set(RESULT_COLUMNS) - set(row)
        if missing:
            raise ConfigError(f"result row missing columns: {sorted(missing)}")
        writer.writerow({k: _fmt(row[k]) for k in RESULT_COLUMNS})
    return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)
