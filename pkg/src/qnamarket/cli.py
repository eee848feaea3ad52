"""Command-line entry point: single runs, probability-map runs and parameter sweeps.

Exit status: 0 on success, 1 on usage errors, 2 on runtime (I/O) errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .market import MarketConfig, MarketStreams, init_market, sample_phi, simulate
from .network import l_net, step
from .probmap import (
    from_quantum,
    signed_from_quantum,
    step_map,
    step_map_noisy,
    step_signed,
)
from .stats import SeriesSummary, UndefinedStatisticError, summarize

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

SWEEP_PARAMS = {"v0": float, "sin2phi": float, "n_components": int, "noise_beta": float}
_LABELS = ["000", "001", "010", "011", "100", "101", "110", "111"]


class UsageError(Exception):
    pass


@dataclass
class RunSpec:
    mode: str
    market: MarketConfig
    output_path: Path
    format: str = "csv"
    sweep_axis: list[tuple[str, list]] = field(default_factory=list)
    replicates: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("simulate", "probmap", "sweep"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.mode == "sweep" and not self.sweep_axis:
            raise UsageError("sweep mode needs at least one --sweep axis")
        for name, values in self.sweep_axis:
            if name not in SWEEP_PARAMS:
                raise UsageError(f"cannot sweep over {name!r}; choose from {sorted(SWEEP_PARAMS)}")
            if not values:
                raise UsageError(f"sweep axis {name!r} has no values")
        if self.replicates < 1 or self.workers < 1:
            raise UsageError("replicates and workers must be positive")


def fmt(x) -> str:
    """Decimal text for a CSV cell that parses back to the identical double."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _paths(out: Path) -> tuple[Path, Path]:
    base = out.with_suffix("") if out.suffix in (".csv", ".json") else out
    return base.with_suffix(".csv"), base.with_suffix(".json")


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def summary_record(returns) -> dict:
    """Summary fields, or nulls plus the reason when the statistics are undefined."""
    try:
        return summarize(returns).as_dict()
    except UndefinedStatisticError as exc:
        rec = {name: None for name in SeriesSummary.__dataclass_fields__}
        rec["n"] = len(returns)
        rec["undefined"] = str(exc)
        return rec


def run_simulate(spec: RunSpec) -> list[Path]:
    cfg = spec.market
    series = simulate(cfg)
    rounds = range(cfg.transient + 1, cfg.steps + 1)
    csv_path, json_path = _paths(spec.output_path)
    text = _csv_text(["round", "return", "log_price"], zip(rounds, series.returns, series.log_prices))
    summary = summary_record(series.returns)
    summary["config"] = cfg.as_dict()
    _write(csv_path, text)
    _write(json_path, _json_text(summary))
    return [csv_path, json_path]


def run_probmap(spec: RunSpec, divergence_tol: float = 1e-9) -> list[Path]:
    """Iterate the literal map next to the signed map and the quantum oracle.

    The initial condition is component 0 of the market initialization for
    the configured seed.
    """
    cfg = spec.market
    streams = MarketStreams(cfg.seed, 1)
    psi = init_market(replace(cfg, n_components=1), streams).components[0]
    literal, signed = from_quantum(psi), signed_from_quantum(psi)
    if cfg.noise_beta is None:
        fixed_op = l_net(cfg.phi)
        zs = None
    else:
        zs = streams.normals(cfg.steps)[:, 0]

    rows = []
    signed_dev = literal_dev = drift = 0.0
    first_divergence: Optional[int] = None
    for t in range(1, cfg.steps + 1):
        if zs is None:
            phi, op = cfg.phi, fixed_op
            literal = step_map(literal, phi)
        else:
            phi = sample_phi(cfg.noise_beta, zs[t - 1])
            op = l_net(phi)
            literal = step_map_noisy(literal, cfg.noise_beta, zs[t - 1])
        psi = step(psi, op)
        signed = step_signed(signed, phi)
        oracle = from_quantum(psi)
        sp = signed.to_probmap()
        signed_dev = max(signed_dev, np.max(np.abs(sp.A - oracle.A)), np.max(np.abs(sp.B - oracle.B)))
        dev = max(np.max(np.abs(literal.A - oracle.A)), np.max(np.abs(literal.B - oracle.B)))
        literal_dev = max(literal_dev, dev)
        if first_divergence is None and dev > divergence_tol:
            first_divergence = t
        drift = max(drift, abs(literal.total() - 1.0))
        if t > cfg.transient:
            rows.append([t, *literal.A, *literal.B])

    header = ["round"] + [f"A_{s}" for s in _LABELS] + [f"B_{s}" for s in _LABELS]
    report = {
        "signed_vs_quantum_max_deviation": float(signed_dev),
        "literal_vs_quantum_max_deviation": float(literal_dev),
        "literal_first_divergence_round": first_divergence,
        "literal_max_normalization_drift": float(drift),
        "config": cfg.as_dict(),
    }
    csv_path, json_path = _paths(spec.output_path)
    _write(csv_path, _csv_text(header, rows))
    _write(json_path, _json_text(report))
    return [csv_path, json_path]


def cell_seed(seed: int, cell: int, replicate: int) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=(cell, replicate))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sweep_configs(spec: RunSpec) -> list[tuple[int, int, MarketConfig]]:
    names = [name for name, _ in spec.sweep_axis]
    grid = itertools.product(*(values for _, values in spec.sweep_axis))
    out = []
    for cell, combo in enumerate(grid):
        base = replace(spec.market, **dict(zip(names, combo)))
        for r in range(spec.replicates):
            out.append((cell, r, replace(base, seed=cell_seed(spec.market.seed, cell, r))))
    return out


def _summarize_cell(cfg: MarketConfig) -> dict:
    rec = summary_record(simulate(cfg).returns)
    rec.pop("undefined", None)
    return rec


def run_sweep(spec: RunSpec) -> list[Path]:
    cells = sweep_configs(spec)
    cfgs = [c for _, _, c in cells]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            summaries = list(pool.map(_summarize_cell, cfgs, chunksize=1))
    else:
        summaries = [_summarize_cell(c) for c in cfgs]

    records = []
    for (cell, r, cfg), s in zip(cells, summaries):
        records.append(
            {
                "cell": cell,
                "replicate": r,
                "seed": cfg.seed,
                "v0": cfg.v0,
                "sin2phi": cfg.sin2phi,
                "n_components": cfg.n_components,
                "noise_beta": cfg.noise_beta,
                **s,
            }
        )
    path = spec.output_path
    if spec.format == "json":
        _write(path, _json_text({"config": spec.market.as_dict(), "rows": records}))
    else:
        header = list(records[0])
        _write(path, _csv_text(header, ([rec[h] for h in header] for rec in records)))
    return [path]


def run(spec: RunSpec) -> int:
    handlers = {"simulate": run_simulate, "probmap": run_probmap, "sweep": run_sweep}
    try:
        paths = handlers[spec.mode](spec)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_sweep(text: str) -> tuple[str, list]:
    name, sep, values = text.partition("=")
    name = name.strip()
    if not sep or name not in SWEEP_PARAMS:
        raise argparse.ArgumentTypeError(f"expected NAME=v1,v2,... with NAME in {sorted(SWEEP_PARAMS)}")
    try:
        parsed = [SWEEP_PARAMS[name](v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value list for {name}: {values!r}") from None
    return name, parsed


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qna-market", description="Quantum neural automaton market simulator")
    p.add_argument("--mode", choices=["simulate", "probmap", "sweep"], default="simulate")
    p.add_argument("--components", type=int, default=20, help="number of components N+1 (last one is polarization)")
    p.add_argument("--v0", type=float, default=0.7, help="low volatility factor; high factor is 2 - v0")
    p.add_argument("--sin2phi", type=float, default=0.6)
    p.add_argument("--lambda", dest="lam", type=float, default=1000.0, help="market depth")
    p.add_argument("--steps", type=int, default=2100)
    p.add_argument("--transient", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta", type=float, default=None, help="enable noisy gates with this beta")
    p.add_argument("--sweep", type=parse_sweep, action="append", default=[], metavar="NAME=V1,V2,...")
    p.add_argument("--replicates", type=int, default=1, help="seeds per sweep cell")
    p.add_argument("--workers", type=int, default=1, help="parallel processes for sweep cells")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="table format for sweep output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = MarketConfig(
            n_components=args.components,
            sin2phi=args.sin2phi,
            v0=args.v0,
            lam=args.lam,
            steps=args.steps,
            transient=args.transient,
            seed=args.seed,
            noise_beta=args.beta,
        )
        spec = RunSpec(
            mode=args.mode,
            market=cfg,
            output_path=args.out,
            format=args.format,
            sweep_axis=args.sweep,
            replicates=args.replicates,
            workers=args.workers,
        )
        sweep_configs(spec)  # validates every grid cell up front
    except (ValueError, UsageError) as exc:
        parser.error(str(exc))
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
