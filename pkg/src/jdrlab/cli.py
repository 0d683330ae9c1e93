"""Command-line pipeline: codes -> train -> bench -> report.

Every artifact is written under ``<out_dir>/<experiment name>/``:

* ``config.json``      resolved configuration (embeds seed + schema version)
* ``codebooks/``       one JSON per constructed codebook
* ``runs/``            one JSON per (codebook, restart), plus params JSONs
* ``results.csv``      merged result rows (regenerated, never appended)

``report`` additionally writes figure-ready CSVs to ``<out_dir>/figures/``.
Training is resumable: existing (codebook, restart) run files are loaded
instead of recomputed, and all randomness is derived from the master seed,
so a resumed pipeline reproduces the interrupted one byte for byte.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, benchmarks, decoder, training
from .codes import Codebook
from .config import SCHEMA_VERSION, WorkbenchConfig, config_from_dict, load_config
from .errors import ConfigError, NumericalError

LAYOUT_VERSION = 1
FIG5_EPS = 1e-3
FIG5_BLOCKLENGTHS = [int(b) for b in np.geomspace(10, 1e6, 21).round()]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _dump_json(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def codebook_to_dict(codebook: Codebook, master_seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "master_seed": master_seed,
        "n": codebook.n,
        "size": codebook.size,
        "energy_received": codebook.energy_received,
        "code_type": codebook.code_type,
        "seed": codebook.seed,
        "words": ["".join(str(b) for b in w) for w in codebook.words],
        "generator": None if codebook.generator is None
                     else codebook.generator.tolist(),
        "frozen": codebook.frozen,
        "split_rates": None if codebook.split_rates is None
                       else codebook.split_rates.tolist(),
    }


def codebook_from_dict(data: dict) -> Codebook:
    words = np.array([[int(c) for c in w] for w in data["words"]], dtype=np.uint8)
    return Codebook(
        n=data["n"], size=data["size"],
        energy_received=data["energy_received"], code_type=data["code_type"],
        words=words, seed=data.get("seed"),
        generator=None if data.get("generator") is None
                  else np.array(data["generator"], dtype=np.uint8),
        frozen=data.get("frozen"),
        split_rates=None if data.get("split_rates") is None
                    else np.array(data["split_rates"]),
    )


def params_to_dict(params: decoder.CircuitParams, master_seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "master_seed": master_seed,
        "n_signal": params.n_signal,
        "n_ancilla": params.n_ancilla,
        "squeezing": params.squeezing,
        "theta": params.theta.tolist(),
        "layout_version": LAYOUT_VERSION,
    }


def params_from_dict(data: dict) -> decoder.CircuitParams:
    if data.get("layout_version") != LAYOUT_VERSION:
        raise ConfigError(
            f"params file has layout version {data.get('layout_version')}, "
            f"this build uses {LAYOUT_VERSION}")
    return decoder.CircuitParams(
        data["n_signal"], data["n_ancilla"], data["squeezing"],
        np.array(data["theta"]))


# ---------------------------------------------------------------------------
# Experiment layout helpers
# ---------------------------------------------------------------------------

def _codebook_path(exp_dir: Path, index: int) -> Path:
    return exp_dir / "codebooks" / f"cb{index:03d}.json"


def _run_path(exp_dir: Path, index: int, restart: int) -> Path:
    return exp_dir / "runs" / f"cb{index:03d}_r{restart:03d}.json"


def _params_path(exp_dir: Path, index: int, restart: int) -> Path:
    return exp_dir / "runs" / f"cb{index:03d}_r{restart:03d}.params.json"


def _experiment_codebooks(cfg: WorkbenchConfig) -> list[Codebook]:
    energy = cfg.resolved_energy()
    if cfg.code_type == "polar":
        return [training.build_codebook("polar", cfg.n, energy, 0)]
    return [
        training.build_codebook(
            cfg.code_type, cfg.n, energy,
            training.ensemble_codebook_seed(cfg.seed, k))
        for k in range(cfg.k_codebooks)
    ]


def _write_config(cfg: WorkbenchConfig) -> None:
    _dump_json(cfg.experiment_dir() / "config.json", cfg.to_json_dict())


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_codes(cfg: WorkbenchConfig) -> int:
    exp_dir = cfg.experiment_dir()
    _write_config(cfg)
    for k, codebook in enumerate(_experiment_codebooks(cfg)):
        _dump_json(_codebook_path(exp_dir, k), codebook_to_dict(codebook, cfg.seed))
    print(f"wrote {cfg.k_codebooks if cfg.code_type != 'polar' else 1} "
          f"codebook(s) under {exp_dir / 'codebooks'}")
    return 0


def cmd_train(cfg: WorkbenchConfig) -> int:
    exp_dir = cfg.experiment_dir()
    _write_config(cfg)
    codebooks = _experiment_codebooks(cfg)
    for k, codebook in enumerate(codebooks):
        path = _codebook_path(exp_dir, k)
        if not path.exists():
            _dump_json(path, codebook_to_dict(codebook, cfg.seed))
        for r in range(cfg.train.n_restarts):
            run_path = _run_path(exp_dir, k, r)
            if run_path.exists():
                continue
            run = training.train(codebook, cfg.train, cfg.n_ancilla,
                                 cfg.squeezing, stream_key=(k,),
                                 restart_indices=[r])
            _dump_json(_params_path(exp_dir, k, r),
                       params_to_dict(run.params, cfg.seed))
            _dump_json(run_path, {
                "schema_version": SCHEMA_VERSION,
                "master_seed": cfg.seed,
                "codebook_index": k,
                "restart_index": r,
                "codebook_file": str(_codebook_path(exp_dir, k).name),
                "params_file": str(_params_path(exp_dir, k, r).name),
                "p_err": run.p_err,
                "p_succ": run.p_succ,
                "initial_p_err": run.initial_p_err,
                "loss_history": run.loss_history,
                "config": cfg.to_json_dict(),
            })
    _write_results(cfg)
    print(f"training complete; results in {exp_dir / 'results.csv'}")
    return 0


def _load_runs(cfg: WorkbenchConfig):
    """Per-codebook best runs: list of (codebook, params, p_err, restart)."""
    exp_dir = cfg.experiment_dir()
    out = []
    for k in range(len(_experiment_codebooks(cfg))):
        best = None
        for r in range(cfg.train.n_restarts):
            run_path = _run_path(exp_dir, k, r)
            if not run_path.exists():
                continue
            data = json.loads(run_path.read_text())
            if best is None or data["p_err"] < best[0]["p_err"]:
                best = (data, r)
        if best is None:
            continue
        data, r = best
        codebook = codebook_from_dict(
            json.loads(_codebook_path(exp_dir, k).read_text()))
        params = params_from_dict(
            json.loads(_params_path(exp_dir, k, r).read_text()))
        out.append((k, codebook, params, data))
    return out


def _trained_rows(cfg: WorkbenchConfig) -> list[dict]:
    rows = []
    for k, codebook, params, data in _load_runs(cfg):
        run = training.TrainingRun(
            codebook=codebook, params=params, p_err=data["p_err"],
            initial_p_err=data["initial_p_err"],
            loss_history=data["loss_history"],
            restart_index=data["restart_index"], seed=cfg.seed,
            config=cfg.train, wall_time=0.0, restart_p_errs=[])
        rows.append(analysis.result_row(run))
    return rows


def _bench_rows(cfg: WorkbenchConfig) -> list[dict]:
    return [analysis.benchmark_row(cb) for cb in _experiment_codebooks(cfg)]


def _write_results(cfg: WorkbenchConfig) -> None:
    exp_dir = cfg.experiment_dir()
    rows = []
    if (exp_dir / "bench.done").exists():
        rows.extend(_bench_rows(cfg))
    rows.extend(_trained_rows(cfg))
    header = f"# jdrlab results schema={SCHEMA_VERSION} master_seed={cfg.seed}\n"
    (exp_dir / "results.csv").write_text(header + analysis.results_table(rows))


def cmd_bench(cfg: WorkbenchConfig) -> int:
    exp_dir = cfg.experiment_dir()
    _write_config(cfg)
    (exp_dir / "bench.done").write_text("")
    _write_results(cfg)
    print(f"benchmark rows merged into {exp_dir / 'results.csv'}")
    return 0


# ---------------------------------------------------------------------------
# Report: figure-ready CSVs
# ---------------------------------------------------------------------------

def _write_csv(path: Path, columns: list[str], rows: list[dict],
               master_seed: int) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# jdrlab figure schema={SCHEMA_VERSION} master_seed={master_seed}",
             ",".join(columns)]
    for row in rows:
        lines.append(",".join(
            repr(float(row[c])) if isinstance(row[c], float) else str(row[c])
            for c in columns))
    path.write_text("\n".join(lines) + "\n")


def _all_experiments(out_dir: Path) -> list[WorkbenchConfig]:
    configs = []
    for cfg_path in sorted(out_dir.glob("*/config.json")):
        configs.append(config_from_dict(json.loads(cfg_path.read_text())))
    return configs


def _aggregate(cfg: WorkbenchConfig) -> dict | None:
    """Ensemble summary row of one experiment (avg/best over codebooks)."""
    loaded = _load_runs(cfg)
    if not loaded:
        return None
    rows = _trained_rows(cfg)
    succ = [row["psucc_trained"] for row in rows]
    best = int(np.argmax(succ))
    out = dict(rows[best])
    out["psucc_best"] = succ[best]
    out["psucc_avg"] = float(np.mean(succ))
    out["n_ancilla"] = cfg.n_ancilla
    out["squeezing"] = cfg.squeezing
    out["variant"] = ("squeezing" if cfg.squeezing
                      else "ancilla" if cfg.n_ancilla else "none")
    return out


FIG_LINE_COLUMNS = [
    "n", "energy", "code_type", "variant", "psucc_avg", "psucc_best",
    "psucc_srm_lower", "psucc_upper", "psucc_helstrom", "psucc_kennedy",
    "psucc_homodyne", "psucc_ppm",
]
FIG_RATE_COLUMNS = [
    "n", "energy", "code_type", "psucc_best", "rate_trained",
    "rate_bpsk_capacity", "rate_helstrom", "rate_kennedy", "rate_homodyne",
    "rate_ppm", "pie", "die",
]


def cmd_report(cfg: WorkbenchConfig) -> int:
    out_dir = Path(cfg.out_dir)
    fig_dir = out_dir / "figures"
    summaries = []
    for exp in _all_experiments(out_dir):
        agg = _aggregate(exp)
        if agg is not None:
            summaries.append(agg)
    if not summaries:
        raise ConfigError(f"no completed runs under {out_dir}; train first")

    linear = [s for s in summaries
              if s["code_type"] == "linear" and s["variant"] == "none"]
    variants = [s for s in summaries if s["code_type"] == "linear"]
    others = [s for s in summaries if s["code_type"] in ("random", "polar")]

    key = lambda s: (s["n"], s["energy"], s["code_type"], s["variant"])
    _write_csv(fig_dir / "fig2.csv", FIG_LINE_COLUMNS,
               sorted(linear, key=key), cfg.seed)
    _write_csv(fig_dir / "fig3.csv", FIG_LINE_COLUMNS,
               sorted(variants, key=key), cfg.seed)
    _write_csv(fig_dir / "fig4.csv", FIG_RATE_COLUMNS,
               sorted(linear, key=key), cfg.seed)
    _write_csv(fig_dir / "fig6.csv", FIG_LINE_COLUMNS,
               sorted(others, key=key), cfg.seed)

    # fig5: second-order rate sweep for the subject experiment
    agg = _aggregate(cfg)
    if agg is None:
        raise ConfigError(f"experiment {cfg.name!r} has no runs for fig5/fig7")
    energy, n = cfg.resolved_energy(), cfg.n
    ss = benchmarks.single_symbol(energy)
    hel_ch = np.array([[ss.p_helstrom, 1 - ss.p_helstrom],
                       [1 - ss.p_helstrom, ss.p_helstrom]])
    hom_ch = np.array([[ss.p_homodyne, 1 - ss.p_homodyne],
                       [1 - ss.p_homodyne, ss.p_homodyne]])
    _, ppm_rate, ppm_v = benchmarks.hadamard_ppm(max(n, 2), energy)
    receivers = {
        "trained": (agg["rate_trained"], agg["v_induced"]),
        "helstrom": (ss.rate_helstrom, benchmarks.entropy_variance(hel_ch)),
        "homodyne": (ss.rate_homodyne, benchmarks.entropy_variance(hom_ch)),
        "ppm": (ppm_rate, ppm_v),
    }
    fig5_rows = []
    for name, (rate, variance) in receivers.items():
        for block in FIG5_BLOCKLENGTHS:
            fig5_rows.append({
                "n": n, "energy": energy, "receiver": name, "eps": FIG5_EPS,
                "blocklength": block, "rate_asymptotic": rate,
                "rate_second_order": benchmarks.second_order_rate(
                    rate, variance, FIG5_EPS, block),
            })
    _write_csv(fig_dir / "fig5.csv",
               ["n", "energy", "receiver", "eps", "blocklength",
                "rate_asymptotic", "rate_second_order"],
               fig5_rows, cfg.seed)

    # fig7: mode profile of the subject experiment's best decoder
    loaded = _load_runs(cfg)
    best_k = int(np.argmax([-entry[3]["p_err"] for entry in loaded]))
    _, codebook, params, _ = loaded[best_k]
    profile = analysis.mode_profile(codebook, params)
    fig7_rows = []
    for m in range(codebook.size):
        row = {"word": "".join(str(b) for b in codebook.words[m])}
        for i in range(codebook.n):
            row[f"mode_{i}"] = float(profile.photon_numbers[m, i])
        fig7_rows.append(row)
    _write_csv(fig_dir / "fig7.csv",
               ["word"] + [f"mode_{i}" for i in range(codebook.n)],
               fig7_rows, cfg.seed)
    print(f"figure CSVs written under {fig_dir}")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jdrlab",
        description="train and score optical joint-detection receivers")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("codes", cmd_codes), ("train", cmd_train),
                     ("bench", cmd_bench), ("report", cmd_report)):
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--name")
        p.add_argument("--n", type=int)
        p.add_argument("--energy", type=float)
        p.add_argument("--eta", type=float)
        p.add_argument("--e0", type=float)
        p.add_argument("--code", choices=["random", "linear", "polar"])
        p.add_argument("--squeezing", action="store_true", default=None)
        p.add_argument("--ancillas", type=int)
        p.add_argument("--codebooks", type=int)
        p.add_argument("--restarts", type=int)
        p.add_argument("--iters", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--shots", type=int)
        p.add_argument("--mode", choices=["probability", "sampling"])
    return parser


_FLAG_MAP = {
    "name": "name", "n": "n", "energy": "energy", "eta": "eta", "e0": "e0",
    "code": "code_type", "squeezing": "squeezing", "ancillas": "n_ancilla",
    "codebooks": "k_codebooks", "seed": "seed", "out": "out_dir",
}
_TRAIN_FLAG_MAP = {"restarts": "n_restarts", "iters": "max_iters",
                   "shots": "n_shots", "mode": "mode"}


def resolve_config(args: argparse.Namespace) -> WorkbenchConfig:
    base = load_config(args.config).to_json_dict() if args.config else {}
    base.pop("schema_version", None)
    train = base.get("train", {})
    for flag, key in _FLAG_MAP.items():
        value = getattr(args, flag, None)
        if value is not None:
            base[key] = value
    for flag, key in _TRAIN_FLAG_MAP.items():
        value = getattr(args, flag, None)
        if value is not None:
            train[key] = value
    base["train"] = train
    cfg = config_from_dict(base)
    cfg.train.seed = cfg.seed  # one master seed drives everything
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
