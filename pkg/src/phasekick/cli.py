"""Command-line front end.

Exit codes: 0 success, 1 config / input errors, 2 numeric or resource
failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import fit_decay, parrondo_report
from .config import ScenarioConfig, load_scenario
from .errors import (
    ConfigError,
    ContractViolation,
    InsufficientDataError,
    InvalidInputError,
    PhaseKickError,
)
from .exact import CoherenceTrace, exact_trace, supports_exact
from .montecarlo import SamplerSpec, mc_trace
from .noise import ParrondoParams, parrondo_pair
from .qubit import dephase

CSV_HEADER = ["step", "f_re", "f_im", "f_abs", "stderr_re", "stderr_im"]

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


def _fmt(x: float) -> str:
    return f"{x + 0.0:.17g}"


def write_trace_csv(trace: CoherenceTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for i, (k, f) in enumerate(zip(trace.steps, trace.factors)):
            row = [str(int(k)), _fmt(f.real), _fmt(f.imag), _fmt(abs(f))]
            if trace.has_stderr:
                row += [_fmt(trace.stderr_re[i]), _fmt(trace.stderr_im[i])]
            else:
                row += ["", ""]
            writer.writerow(row)


def read_trace_csv(path) -> CoherenceTrace:
    """Parse a CSV written by :func:`write_trace_csv`; raises ConfigError."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not rows or rows[0] != CSV_HEADER:
        raise ConfigError(f"{path}: line 1: expected header {','.join(CSV_HEADER)}")
    steps, factors, se_re, se_im = [], [], [], []
    with_stderr = None
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ConfigError(f"{path}: line {lineno}: expected {len(CSV_HEADER)} columns")
        try:
            steps.append(int(row[0]))
            factors.append(complex(float(row[1]), float(row[2])))
            has = row[4] != "" or row[5] != ""
            if with_stderr is None:
                with_stderr = has
            elif has != with_stderr:
                raise ConfigError(f"{path}: line {lineno}: stderr columns inconsistent")
            if has:
                se_re.append(float(row[4]))
                se_im.append(float(row[5]))
        except ValueError as exc:
            raise ConfigError(f"{path}: line {lineno}: {exc}") from None
    if not steps:
        raise ConfigError(f"{path}: no data rows")
    if with_stderr:
        return CoherenceTrace(np.array(steps), np.array(factors), np.array(se_re), np.array(se_im))
    return CoherenceTrace(np.array(steps), np.array(factors))


def _summary(name: str, trace: CoherenceTrace, cfg: ScenarioConfig) -> str:
    f = trace.factors[-1]
    final = dephase(cfg.initial_state, f)
    return (
        f"engine={name} steps={cfg.steps} f_re={f.real:.12g} f_im={f.imag:.12g} "
        f"f_abs={abs(f):.12g} a={final.a:.12g} b_re={final.b.real:.12g} b_im={final.b.imag:.12g}"
    )


def _run_mc(cfg: ScenarioConfig, workers: int) -> CoherenceTrace:
    if cfg.steps == 0:
        return CoherenceTrace(np.zeros(1), np.ones(1), np.zeros(1), np.zeros(1))
    spec = SamplerSpec(cfg.process, cfg.steps, cfg.trajectories, cfg.seed)
    return mc_trace(spec, workers=workers, max_work=cfg.max_work).trace


def cmd_run(args) -> int:
    cfg = load_scenario(args.config)
    if cfg.engine in ("exact", "both") and not supports_exact(cfg.process):
        raise ConfigError("process has no exact propagation", "engine")
    output = Path(args.output) if args.output else cfg.output
    workers = args.workers or cfg.workers

    if cfg.engine == "exact":
        trace, _ = exact_trace(cfg.process, cfg.initial_state, cfg.steps)
        write_trace_csv(trace, output)
        print(_summary("exact", trace, cfg))
    elif cfg.engine == "monte_carlo":
        trace = _run_mc(cfg, workers)
        write_trace_csv(trace, output)
        print(_summary("monte_carlo", trace, cfg))
    else:
        exact, _ = exact_trace(cfg.process, cfg.initial_state, cfg.steps)
        mc = _run_mc(cfg, workers)
        exact_path = output.with_name(output.stem + ".exact" + output.suffix)
        write_trace_csv(mc, output)
        write_trace_csv(exact, exact_path)
        se = np.hypot(mc.stderr_re, mc.stderr_im)[1:]
        dev = np.abs(mc.factors - exact.factors)[1:]
        z = float(np.max(dev / se)) if len(se) and np.all(se > 0) else float("nan")
        print(_summary("monte_carlo", mc, cfg))
        print(_summary("exact", exact, cfg))
        print(f"max_deviation_in_stderr={z:.3f}")
        print(f"wrote {exact_path}")
    print(f"wrote {output}")
    return EXIT_OK


def cmd_fit(args) -> int:
    fit = fit_decay(read_trace_csv(args.csv))
    if args.json:
        print(json.dumps(fit.as_dict(), indent=2))
    else:
        print(
            f"model={fit.model} lambda={fit.rate:.6f} gamma={fit.per_step_factor:.6f} "
            f"phi={fit.phase_per_step:.6f} sse_linear={fit.sse_linear:.3e} "
            f"sse_quadratic={fit.sse_quadratic:.3e} points_used={fit.points_used}"
        )
    return EXIT_OK


def cmd_parrondo_demo(args) -> int:
    params = ParrondoParams(args.epsilon, args.weight)
    kernel_a, kernel_b = parrondo_pair(params)
    report = parrondo_report(
        kernel_a, kernel_b, params.weight_a, 0.0, params.epsilon, args.steps, args.tolerance
    )
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(
            f"gamma_a={report.gamma_a:.6f} gamma_b={report.gamma_b:.6f} "
            f"gamma_mixed={report.gamma_mixed:.6f} improvement={report.improvement:.6f} "
            f"verdict={'true' if report.verdict else 'false'}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasekick", description="Qubit dephasing under correlated random phase kicks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="propagate a scenario config and write a CSV trace")
    p.add_argument("config", help="scenario config (TOML)")
    p.add_argument("--output", help="override the config's output path")
    p.add_argument("--workers", type=int, help="Monte Carlo worker threads")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fit", help="fit decay laws to a CSV trace")
    p.add_argument("csv")
    p.add_argument("--json", action="store_true", help="print JSON instead of key=value")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("parrondo-demo", help="compare private baths with their random mixture")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--weight", type=float, default=0.5, help="probability of bath A per step")
    p.add_argument("--steps", type=int, default=30)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_parrondo_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InsufficientDataError, InvalidInputError, ContractViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PhaseKickError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
