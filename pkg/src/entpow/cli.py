"""``entpow`` command line: run one experiment and write its data files.

Every experiment writes ``report.json`` next to its CSV outputs. CSV files
start with a ``#`` comment line carrying the tool version, the config hash
and the seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
import time
from contextlib import nullcontext
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .entangling_power import DEFAULT_SAMPLES, entangling_power_series
from .floquet import PRESETS, FieldConfig
from .integrable import exact_measures
from .op_entanglement import measure_series
from .rmt import ep_vn_bar, evn_bar, rmt_trajectory
from .spectral import analyze_floquet, check_false_trs

EXPERIMENTS = (
    "entanglement-series",
    "entangling-power",
    "rmt-compare",
    "oracle-check",
    "spectral",
    "symmetry-check",
)
ORACLE_ATOL = 1e-8
TRS_ATOL = 1e-10

_PI_RE = re.compile(r"^\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$")


class ConfigError(ValueError):
    pass


def parse_tau(text) -> float:
    """Parse ``0.7``, ``pi/4``, ``3pi/8`` or ``2*pi/3``."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _PI_RE.match(str(text).lower())
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse tau {text!r}") from None


@dataclass
class ExperimentConfig:
    experiment: str
    field_config: FieldConfig
    n_max: int | None = None
    samples: int = DEFAULT_SAMPLES
    realizations: int = 50
    seed: int = 0
    output_dir: Path = Path("entpow-out")
    sector: str = "even"
    r_max: float = 40.0
    r_step: float = 0.5
    mode: str = "fresh"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.n_max is None:
            self.n_max = 4 * self.field_config.L
        if self.n_max < 0:
            raise ConfigError("n_max must be nonnegative")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        self.output_dir = Path(self.output_dir)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["field_config"] = self.field_config.to_dict()
        d["output_dir"] = str(self.output_dir)
        return d

    def config_hash(self) -> str:
        d = self.to_dict()
        d.pop("output_dir")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def header(self) -> str:
        return f"entpow {__version__} experiment={self.experiment} config_hash={self.config_hash()} seed={self.seed}"


def _field_config(args: dict) -> FieldConfig:
    fc = args.get("field_config") or {}
    merged = dict(fc)
    for key in ("L", "tau", "boundary", "preset", "hx", "hy", "hz"):
        if args.get(key) is not None:
            merged[key] = args[key]
    if "L" not in merged or "tau" not in merged:
        raise ConfigError("chain length -L and --tau are required")
    merged["tau"] = parse_tau(merged["tau"])
    if not merged.get("preset"):
        missing = [k for k in ("hx", "hy", "hz") if k not in merged]
        if missing:
            raise ConfigError(f"without a preset, fields {missing} are required")
    try:
        return FieldConfig.from_dict(merged)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    base: dict = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
    cli = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "command")}
    merged = {**base, **cli}
    merged["experiment"] = ns.command
    fc = _field_config(merged)
    known = {"n_max", "samples", "realizations", "seed", "output_dir", "sector",
             "r_max", "r_step", "mode"}
    kwargs = {k: merged[k] for k in known if k in merged}
    try:
        return ExperimentConfig(experiment=ns.command, field_config=fc, **kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _run_series(cfg: ExperimentConfig, report: dict) -> int:
    fc = cfg.field_config
    if cfg.experiment == "entangling-power":
        series = entangling_power_series(fc, cfg.n_max, samples=cfg.samples, seed=cfg.seed)
        tail = series.ep_vN[len(series.ep_vN) // 2:]
        report["ep_vN_tail_mean"] = float(np.nanmean(tail))
        report["ep_vN_reference"] = ep_vn_bar(fc.cut.dim_a)
    else:
        series = measure_series(fc, cfg.n_max)
    report["E_vN_reference"] = evn_bar(fc.cut.dim_a)
    _write(cfg.output_dir / "series.csv", series.to_csv(cfg.header()))
    return 0


def _run_rmt(cfg: ExperimentConfig, report: dict) -> int:
    fc = cfg.field_config
    res = rmt_trajectory(fc.tau, fc.L, cfg.n_max, cfg.realizations, cfg.seed, cfg.mode)
    _write(cfg.output_dir / "series.csv", res.to_csv(cfg.header()))
    pred = res.predictions()
    se = np.sqrt(res.stderr["ep_l"] ** 2 + 1e-24)
    report["max_abs_z_ep_l"] = float(np.max(np.abs(res.mean["ep_l"] - pred["pred_ep_l"]) / se))
    return 0


def _run_oracle(cfg: ExperimentConfig, report: dict) -> int:
    fc = cfg.field_config
    if fc.preset != "set-i" or not math.isclose(fc.tau, math.pi / 4, rel_tol=0, abs_tol=1e-15):
        raise ConfigError("oracle-check applies to --preset set-i --tau pi/4 only")
    n_max = 2 * fc.L
    series = measure_series(fc, n_max)
    exact = [exact_measures(fc.L, n) for n in range(n_max + 1)]
    cols = {}
    for name in ("E_l", "E_vN", "E_l_US", "ep_l"):
        ref = np.array([getattr(e, name) for e in exact])
        cols[name] = float(np.max(np.abs(getattr(series, name) - ref)))
    worst = max(cols.values())
    report["max_abs_error"] = cols
    report["oracle_pass"] = bool(worst < ORACLE_ATOL)
    extra = {f"exact_{k}": np.array([getattr(e, k) for e in exact]) for k in cols}
    _write(cfg.output_dir / "series.csv", series.to_csv(cfg.header(), extra=extra))
    print(f"max |numeric - exact| = {worst:.3e} ({'PASS' if worst < ORACLE_ATOL else 'FAIL'})")
    return 0 if worst < ORACLE_ATOL else 1


def _run_spectral(cfg: ExperimentConfig, report: dict) -> int:
    from .op_entanglement import format_csv

    r_values = np.arange(cfg.r_step, cfg.r_max + cfg.r_step / 2, cfg.r_step)
    rep = analyze_floquet(cfg.field_config, cfg.sector, r_values)
    out = cfg.output_dir / "spectral"
    h = cfg.header()
    _write(out / "spacings.csv", format_csv({"spacing": rep.spacings}, h))
    _write(out / "ratios.csv", format_csv({"ratio": rep.ratios}, h))
    r, s2 = zip(*rep.sigma2)
    _write(out / "sigma2.csv", format_csv({"r": np.array(r), "sigma2": np.array(s2)}, h))
    report["sector"] = rep.sector_label
    report["sector_dim"] = int(rep.phases.size)
    report["mean_ratio"] = rep.mean_ratio
    print(f"{rep.sector_label} sector, dim {rep.phases.size}: mean ratio {rep.mean_ratio:.4f}")
    return 0


def _run_symmetry(cfg: ExperimentConfig, report: dict) -> int:
    res = {s: check_false_trs(cfg.field_config, s) for s in ("full", "ising", "identity")}
    report["trs_residual"] = res
    ok = res["full"] < TRS_ATOL
    report["trs_pass"] = ok
    for s, v in res.items():
        print(f"G={s:8s} residual {v:.3e}")
    return 0 if ok else 1


_RUNNERS = {
    "entanglement-series": _run_series,
    "entangling-power": _run_series,
    "rmt-compare": _run_rmt,
    "oracle-check": _run_oracle,
    "spectral": _run_spectral,
    "symmetry-check": _run_symmetry,
}


def _thread_limit():
    value = os.environ.get("ENTPOW_THREADS")
    if not value:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(value))


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run ``cfg`` and write outputs; returns the process exit status."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    report = {"entpow_version": __version__, "config": cfg.to_dict(),
              "config_hash": cfg.config_hash(), "seed": cfg.seed}
    start = time.perf_counter()
    with _thread_limit():
        status = _RUNNERS[cfg.experiment](cfg, report)
    report["wall_time_s"] = time.perf_counter() - start
    report["exit_status"] = status
    _write(cfg.output_dir / "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entpow", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"entpow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="ExperimentConfig JSON file; flags override it")
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--tau", help="kick period, e.g. 0.8 or pi/4")
        p.add_argument("-L", type=int, dest="L", help="number of spins (even)")
        p.add_argument("--boundary", choices=("open", "periodic"))
        p.add_argument("--hx", type=float)
        p.add_argument("--hy", type=float)
        p.add_argument("--hz", type=float)
        p.add_argument("--n-max", type=int, dest="n_max")
        p.add_argument("--samples", type=int)
        p.add_argument("--realizations", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--output-dir", "-o", dest="output_dir")
        if name == "spectral":
            p.add_argument("--sector", choices=("even", "odd", "full"))
            p.add_argument("--r-max", type=float, dest="r_max")
            p.add_argument("--r-step", type=float, dest="r_step")
        if name == "rmt-compare":
            p.add_argument("--mode", choices=("fresh", "shared", "frozen"))
    return parser


def _fail(kind: str, message: str, status: int = 2) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ConfigError as exc:
        return _fail("invalid_config", str(exc))
    try:
        return run_experiment(cfg)
    except ConfigError as exc:
        return _fail("invalid_config", str(exc))
    except ValueError as exc:
        return _fail("numerical_precondition", str(exc), status=3)


if __name__ == "__main__":
    sys.exit(main())
