"""Command-line interface: ``sqcchain {sweep,critical,phase-diagram,validate}``.

Exit codes: 0 success, 1 failed validation suites, 2 configuration error,
3 numerical failure (outputs are still written, with per-point errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .criticality import (
    WORKERS_ENV,
    SweepSpec,
    UnsupportedParameterError,
    detect_boundaries,
    detect_cusp,
    detect_jump,
    known_critical_points,
    phase_diagram,
    sweep,
)
from .measures import CSV_COLUMNS
from .suites import SUITES, run_suites
from .validation import (
    MODEL_PRESETS,
    check_separation,
    check_workers,
    parse_measures,
    parse_range,
    parse_temperature,
    preset_params,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

FAMILIES = {"ising": "ising", "xy": "xy", "xx3": "xx_three_spin"}

DEFAULT_LAMBDA = {
    "sweep": "0:2:201",
    "critical": "0.5:1.5:101",
    "phase-diagram": "-3:3:301",
}
DEFAULT_R = {"sweep": 1, "critical": 100, "phase-diagram": 100}
DEFAULT_MEASURES = {
    "sweep": "sqc_l1,sqc_re,d_sqc_l1_dlambda,d_sqc_re_dlambda",
    "critical": "sqc_l1,sqc_re",
    "phase-diagram": "sqc_l1",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    model: str = "ising"
    gamma: float | None = None
    alpha: float | None = None
    lambda_range: str | None = None
    alpha_range: str = "0:1:101"
    n_sites: int = 2001
    r: int | None = None
    temperature: str = "zero"
    measures: str | None = None
    workers: int | None = None
    format: str = "csv"
    output: str = "-"
    emit_plot_script: bool = False
    paper_form_l1: bool = False
    suites: str | None = None

    def resolved(self) -> "RunConfig":
        """Fill command-dependent defaults and validate every field."""
        cfg = RunConfig(**asdict(self))
        if cfg.model not in MODEL_PRESETS:
            raise ConfigError(f"unknown model {cfg.model!r}; choose from {sorted(MODEL_PRESETS)}")
        cfg.lambda_range = cfg.lambda_range or DEFAULT_LAMBDA.get(cfg.command, "0:2:201")
        if cfg.command == "critical" and cfg.model == "xx3" and self.lambda_range is None:
            cfg.lambda_range = DEFAULT_LAMBDA["phase-diagram"]
        cfg.r = DEFAULT_R.get(cfg.command, 1) if cfg.r is None else cfg.r
        cfg.measures = cfg.measures or DEFAULT_MEASURES.get(cfg.command, "sqc_l1,sqc_re")
        if cfg.workers is None:
            cfg.workers = os.environ.get(WORKERS_ENV, "1")
        if cfg.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
        try:
            cfg.workers = check_workers(cfg.workers)
            parse_range(cfg.lambda_range)
            parse_range(cfg.alpha_range)
            parse_measures(cfg.measures)
            parse_temperature(cfg.temperature)
            check_separation(cfg.r, self.base_params(cfg))
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
        if cfg.emit_plot_script and cfg.output == "-":
            raise ConfigError("--emit-plot-script needs --output so the script can reference the data file")
        if cfg.suites:
            unknown = set(cfg.suites.split(",")) - set(SUITES)
            if unknown:
                raise ConfigError(f"unknown suites {sorted(unknown)}; choose from {list(SUITES)}")
        return cfg

    @staticmethod
    def base_params(cfg: "RunConfig"):
        gamma = 0.0 if cfg.command == "phase-diagram" else cfg.gamma
        return preset_params(cfg.model, gamma, 0.0, cfg.alpha, cfg.n_sites, cfg.temperature)


def load_config_file(path: str) -> dict:
    text = Path(path).read_text()
    if path.endswith((".yaml", ".yml")):
        import yaml

        data = yaml.safe_load(text)
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    data = {k.replace("-", "_"): v for k, v in data.items()}
    if "lambda" in data:
        data["lambda_range"] = data.pop("lambda")
    known = {f.name for f in fields(RunConfig)} - {"command"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for key in ("lambda_range", "alpha_range"):
        if isinstance(data.get(key), (list, tuple)):
            data[key] = ":".join(str(v) for v in data[key])
    if isinstance(data.get("measures"), (list, tuple)):
        data["measures"] = ",".join(data["measures"])
    if isinstance(data.get("suites"), (list, tuple)):
        data["suites"] = ",".join(data["suites"])
    if "temperature" in data:
        data["temperature"] = str(data["temperature"])
    return data


def fmt(value) -> str:
    """17 significant digits for floats, empty field for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _write(cfg: RunConfig, text: str, out=None) -> None:
    if cfg.output == "-":
        (out or sys.stdout).write(text)
    else:
        Path(cfg.output).write_text(text)


def _plot_path(cfg: RunConfig) -> Path:
    return Path(cfg.output).with_suffix(".gp")


def _sweep_plot_script(cfg: RunConfig, columns) -> str:
    data = Path(cfg.output).name
    col = {name: i + 1 for i, name in enumerate(columns)}
    lines = [
        "# gnuplot script; run from the directory holding the data file",
        "set datafile separator ','",
        "set datafile missing ''",
        "set terminal pngcairo size 900,900",
        f"set output '{Path(data).with_suffix('.png').name}'",
        "set multiplot layout 2,1",
        "set xlabel 'lambda'",
        f"set title 'SQC, r = {cfg.r}'",
    ]
    sqc = [m for m in ("sqc_l1", "sqc_re") if m in cfg.measures.split(",")]
    der = [m for m in ("d_sqc_l1_dlambda", "d_sqc_re_dlambda") if m in cfg.measures.split(",")]
    if sqc:
        parts = [f"'{data}' every ::1 using {col['lambda']}:{col[m]} with lines title '{m}'" for m in sqc]
        lines.append("plot " + ", \\\n     ".join(parts))
    if der:
        lines.append("set title 'field derivative'")
        parts = [f"'{data}' every ::1 using {col['lambda']}:{col[m]} with lines title '{m}'" for m in der]
        lines.append("plot " + ", \\\n     ".join(parts))
    lines += ["unset multiplot", ""]
    return "\n".join(lines)


def _phase_plot_script(cfg: RunConfig, files) -> str:
    lines = [
        "# gnuplot script; run from the directory holding the data files",
        "set datafile separator ','",
        "set terminal pngcairo size 900,700",
        "set xlabel 'lambda'",
        "set ylabel 'alpha'",
        "set view map",
    ]
    for measure, path in files:
        lines += [
            f"set output '{Path(path).with_suffix('.png').name}'",
            f"set title '{measure}, r = {cfg.r}'",
            f"plot '{Path(path).name}' nonuniform matrix using 1:2:3 with image notitle",
        ]
    lines.append("")
    return "\n".join(lines)


def cmd_sweep(cfg: RunConfig, out=None) -> int:
    low, high, count = parse_range(cfg.lambda_range)
    measures = parse_measures(cfg.measures)
    spec = SweepSpec(RunConfig.base_params(cfg), "lambda", low, high, count, cfg.r, measures, cfg.paper_form_l1)
    table = sweep(spec, cfg.workers)
    columns = list(CSV_COLUMNS) + (["sqc_l1_paper"] if cfg.paper_form_l1 else [])
    if cfg.format == "csv":
        text = _csv_text(columns, ([row.get(c) for c in columns] for row in table.rows))
    else:
        text = _json_text({"config": asdict(cfg), "columns": columns,
                           "rows": [{c: row.get(c) for c in columns} for row in table.rows]})
    _write(cfg, text, out)
    if cfg.emit_plot_script:
        _plot_path(cfg).write_text(_sweep_plot_script(cfg, columns))
    return EXIT_NUMERICAL if table.failed else EXIT_OK


def _nearest_reference(location: float, refs: dict):
    name = min(refs, key=lambda k: abs(refs[k] - location))
    return name, location - refs[name]


def cmd_critical(cfg: RunConfig, out=None) -> int:
    low, high, count = parse_range(cfg.lambda_range)
    measures = [m for m in parse_measures(cfg.measures) if m in ("sqc_l1", "sqc_re")]
    if not measures:
        raise ConfigError("critical needs sqc_l1 and/or sqc_re among --measures")
    base = RunConfig.base_params(cfg)
    family = FAMILIES[cfg.model]
    try:
        refs = known_critical_points(family, base.alpha)
    except UnsupportedParameterError:
        # alpha = 0 keeps only the two band edges
        refs = {"lambda_c1": 1.0, "lambda_c2": -1.0}
    refs = {k: v for k, v in refs.items() if k.startswith("lambda")}

    detections = []
    if cfg.model == "xx3":
        spec = SweepSpec(base, "lambda", low, high, count, cfg.r, tuple(measures))
        table = sweep(spec, cfg.workers)
        for m in measures:
            detections += detect_boundaries(table, m)
    else:
        derivs = tuple(f"d_{m}_dlambda" for m in measures)
        spec = SweepSpec(base, "lambda", low, high, count, cfg.r, tuple(measures) + derivs)
        table = sweep(spec, cfg.workers)
        for m, d in zip(measures, derivs):
            for result in (detect_cusp(table, m), detect_jump(table, d)):
                if result:
                    detections.append(result)

    report = []
    for point in sorted(detections, key=lambda p: (p.measure, p.location)):
        entry = point.as_dict()
        name, delta = _nearest_reference(point.location, refs)
        entry.update(reference=name, delta=delta)
        report.append(entry)
    payload = {
        "model": family,
        "params": {"gamma": base.gamma, "alpha": base.alpha, "n_sites": base.n_sites,
                   "temperature": str(base.temperature)},
        "r": cfg.r,
        "lambda_range": [low, high, count],
        "reference_points": refs,
        "failed_points": len(table.failed),
        "detections": report,
    }
    _write(cfg, _json_text(payload), out)
    return EXIT_NUMERICAL if table.failed else EXIT_OK


def cmd_phase_diagram(cfg: RunConfig, out=None) -> int:
    a_low, a_high, a_count = parse_range(cfg.alpha_range)
    low, high, count = parse_range(cfg.lambda_range)
    measures = [m for m in parse_measures(cfg.measures) if m in ("sqc_l1", "sqc_re", "two_spin_coherence_l1",
                                                                  "two_spin_coherence_re", "concurrence")]
    if not measures:
        raise ConfigError("phase-diagram needs at least one scalar measure")
    import numpy as np

    alphas = np.linspace(a_low, a_high, a_count)
    lambdas = np.linspace(low, high, count)
    diagram = phase_diagram(alphas, lambdas, cfg.r, measures, cfg.n_sites, cfg.workers)
    failed = int(sum(1 for e in diagram.errors.ravel() if e))
    if cfg.format == "json":
        payload = {
            "config": asdict(cfg),
            "alpha": alphas.tolist(),
            "lambda": lambdas.tolist(),
            "values": {m: diagram.values[m].tolist() for m in measures},
            "errors": [[e for e in row] for row in diagram.errors.tolist()],
        }
        _write(cfg, _json_text(payload), out)
        files = []
    else:
        # corner cell holds the column count, as gnuplot's nonuniform matrix expects
        files = []
        for m in measures:
            rows = ([a] + list(diagram.values[m][i]) for i, a in enumerate(alphas))
            text = _csv_text([count] + [fmt(float(x)) for x in lambdas], rows)
            if cfg.output == "-" or len(measures) == 1:
                target = cfg.output
            else:
                p = Path(cfg.output)
                target = str(p.with_name(f"{p.stem}.{m}{p.suffix}"))
            if target == "-":
                (out or sys.stdout).write(text)
            else:
                Path(target).write_text(text)
            files.append((m, target))
    if cfg.emit_plot_script and files:
        _plot_path(cfg).write_text(_phase_plot_script(cfg, files))
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_validate(cfg: RunConfig, out=None) -> int:
    names = cfg.suites.split(",") if cfg.suites else None
    results = run_suites(names)
    payload = {
        "passed": all(r.passed for r in results),
        "suites": [r.as_dict() for r in results],
    }
    _write(cfg, _json_text(payload), out)
    failing = [r.name for r in results if not r.passed]
    if failing:
        print("failing suites: " + ", ".join(failing), file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "critical": cmd_critical,
    "phase-diagram": cmd_phase_diagram,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or YAML file with RunConfig keys; flags override it")
    common.add_argument("--model", choices=sorted(MODEL_PRESETS), help="preset for gamma and alpha (default ising)")
    common.add_argument("--gamma", type=float, help="anisotropy, overrides the preset")
    common.add_argument("--alpha", type=float, help="three-spin coupling, overrides the preset")
    common.add_argument("--lambda", dest="lambda_range", metavar="LOW:HIGH:COUNT", help="transverse-field grid")
    common.add_argument("--n-sites", type=int, help="odd ring length (default 2001)")
    common.add_argument("--r", type=int, help="spin separation")
    common.add_argument("--temperature", help="'zero' (default) or a positive temperature")
    common.add_argument("--measures", help="comma-separated measure names")
    common.add_argument("--workers", type=int, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--output", help="output file, '-' for stdout (default)")
    common.add_argument("--emit-plot-script", action="store_true", default=None,
                        help="also write a gnuplot script next to the output")
    common.add_argument("--paper-form-l1", action="store_true", default=None,
                        help="add the printed l1 closed form as an extra column")

    parser = argparse.ArgumentParser(prog="sqcchain", description="Steered coherence of the XY chain with three-spin interaction.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="tabulate measures along lambda")
    sub.add_parser("critical", parents=[common], help="detect cusps, jumps and boundaries")
    pd = sub.add_parser("phase-diagram", parents=[common], help="SQC over the (alpha, lambda) plane at gamma = 0")
    pd.add_argument("--alpha-range", metavar="LOW:HIGH:COUNT", help="alpha grid (default 0:1:101)")
    val = sub.add_parser("validate", parents=[common], help="run the self-check suites")
    val.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = load_config_file(args.config) if args.config else {}
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if f.name != "command" and flag is not None:
            values[f.name] = flag
    return RunConfig(command=args.command, **values).resolved()


RANGE_FLAGS = ("--lambda", "--alpha-range")


def _join_negative_ranges(argv):
    # argparse takes "-3:3:301" for an option; glue it to its flag
    out = []
    it = iter(argv)
    for token in it:
        if token in RANGE_FLAGS:
            value = next(it, None)
            if value is not None:
                token = f"{token}={value}"
        out.append(token)
    return out


def main(argv=None, out=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_ranges(argv))
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg, out)
    except (ValueError, OSError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
