"""Scenario config (TOML) parsing and process (de)serialisation.

Schema, version 1::

    schema_version = 1
    steps = 50                      # integer >= 0
    engine = "exact"                # exact | monte_carlo | both
    trajectories = 200000           # required for monte_carlo / both
    seed = 12345                    # required for monte_carlo / both
    workers = 1                     # optional, threads for Monte Carlo
    max_work = 2000000000           # optional cap on steps * trajectories
    output = "trace.csv"

    [initial_state]
    a = 0.5
    b_re = 0.5
    b_im = 0.0

    [process]
    kind = "iid_gaussian"           # see PROCESS_KINDS
    lambda = 0.02

Numbers that are angles or weights may also be written as short arithmetic
strings over ``pi``, e.g. ``"-3*pi/4"`` or ``"1/3"``.
"""

from __future__ import annotations

import ast
import math
import operator
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, PhaseKickError
from .montecarlo import DEFAULT_MAX_WORK
from .noise import (
    Branch,
    DiscreteDistribution,
    FullyCorrelatedGaussian,
    IIDDiscrete,
    IIDGaussian,
    Markov,
    MarkovKickKernel,
    Mixture,
    ParrondoParams,
    parrondo_mixture,
    parrondo_pair,
)
from .qubit import DensityMatrix

SCHEMA_VERSION = 1
ENGINES = ("exact", "monte_carlo", "both")
PROCESS_KINDS = (
    "iid_gaussian",
    "iid_discrete",
    "fully_correlated_gaussian",
    "markov",
    "mixture",
    "parrondo",
)

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _eval_expr(node):
    if isinstance(node, ast.Expression):
        return _eval_expr(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_expr(node.left), _eval_expr(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return _UNARY[type(node.op)](_eval_expr(node.operand))
    raise ValueError("unsupported expression")


def parse_number(value, field: str) -> float:
    """A float from a TOML number or an arithmetic string over ``pi``."""
    if isinstance(value, bool):
        raise ConfigError("expected a number, got a boolean", field)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            out = _eval_expr(ast.parse(value.strip(), mode="eval"))
        except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
            raise ConfigError(f"cannot evaluate {value!r}", field) from None
        if not math.isfinite(out):
            raise ConfigError(f"{value!r} is not finite", field)
        return out
    raise ConfigError(f"expected a number, got {type(value).__name__}", field)


def _require(table: dict, key: str, prefix: str = ""):
    field = f"{prefix}{key}"
    if not isinstance(table, dict):
        raise ConfigError("expected a table", prefix.rstrip(".") or None)
    if key not in table:
        raise ConfigError("missing required field", field)
    return table[key]


def _integer(value, field: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", field)
    if value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", field)
    return value


# --- distributions, kernels, processes --------------------------------------


def dist_from_list(value, field: str) -> DiscreteDistribution:
    if not isinstance(value, list) or not value:
        raise ConfigError("expected a non-empty list of [angle, weight] pairs", field)
    atoms = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError("expected an [angle, weight] pair", f"{field}[{i}]")
        atoms.append((parse_number(pair[0], f"{field}[{i}]"), parse_number(pair[1], f"{field}[{i}]")))
    try:
        return DiscreteDistribution(tuple(atoms))
    except PhaseKickError as exc:
        raise ConfigError(str(exc), field) from None


def dist_to_list(dist: DiscreteDistribution) -> list:
    return [[a, w] for a, w in dist.atoms]


def kernel_from_dict(table, field: str) -> MarkovKickKernel:
    if not isinstance(table, dict):
        raise ConfigError("expected a table", field)
    if "preset" in table:
        preset = table["preset"]
        eps = parse_number(table.get("epsilon", 1e-6), f"{field}.epsilon")
        try:
            pair = parrondo_pair(ParrondoParams(eps))
        except PhaseKickError as exc:
            raise ConfigError(str(exc), f"{field}.epsilon") from None
        if preset == "parrondo_a":
            return pair[0]
        if preset == "parrondo_b":
            return pair[1]
        raise ConfigError(f"unknown preset {preset!r} (parrondo_a | parrondo_b)", f"{field}.preset")
    default = dist_from_list(_require(table, "default", f"{field}."), f"{field}.default")
    branches = []
    raw = table.get("branches", [])
    if not isinstance(raw, list):
        raise ConfigError("expected an array of tables", f"{field}.branches")
    for i, br in enumerate(raw):
        bf = f"{field}.branches[{i}]"
        conds = _require(br, "conditions", f"{bf}.")
        if not isinstance(conds, list) or not conds:
            raise ConfigError("expected a non-empty list of angles", f"{bf}.conditions")
        conds = tuple(parse_number(c, f"{bf}.conditions") for c in conds)
        emission = dist_from_list(_require(br, "emission", f"{bf}."), f"{bf}.emission")
        branches.append(Branch(conds, emission))
    try:
        return MarkovKickKernel(tuple(branches), default)
    except PhaseKickError as exc:
        raise ConfigError(str(exc), field) from None


def kernel_to_dict(kernel: MarkovKickKernel) -> dict:
    return {
        "default": dist_to_list(kernel.default),
        "branches": [
            {"conditions": list(br.conditions), "emission": dist_to_list(br.emission)}
            for br in kernel.branches
        ],
    }


def process_from_dict(table, field: str = "process"):
    kind = _require(table, "kind", f"{field}.")
    p = f"{field}."
    try:
        if kind == "iid_gaussian":
            return IIDGaussian(parse_number(_require(table, "lambda", p), p + "lambda"))
        if kind == "fully_correlated_gaussian":
            return FullyCorrelatedGaussian(parse_number(_require(table, "lambda", p), p + "lambda"))
        if kind == "iid_discrete":
            return IIDDiscrete(dist_from_list(_require(table, "atoms", p), p + "atoms"))
        initial = parse_number(table.get("initial_angle", 0.0), p + "initial_angle")
        if kind == "markov":
            return Markov(kernel_from_dict(_require(table, "kernel", p), p + "kernel"), initial)
        if kind == "mixture":
            comps = _require(table, "components", p)
            if not isinstance(comps, list):
                raise ConfigError("expected an array of tables", p + "components")
            parsed = []
            for i, c in enumerate(comps):
                cf = f"{p}components[{i}]"
                parsed.append((
                    kernel_from_dict(_require(c, "kernel", cf + "."), cf + ".kernel"),
                    parse_number(_require(c, "weight", cf + "."), cf + ".weight"),
                ))
            return Mixture(tuple(parsed), initial)
        if kind == "parrondo":
            params = ParrondoParams(
                parse_number(_require(table, "epsilon", p), p + "epsilon"),
                parse_number(table.get("weight_a", 0.5), p + "weight_a"),
            )
            return parrondo_mixture(params, initial)
    except ConfigError:
        raise
    except PhaseKickError as exc:
        raise ConfigError(str(exc), field) from None
    raise ConfigError(f"unknown kind {kind!r} (one of: {', '.join(PROCESS_KINDS)})", p + "kind")


def process_to_dict(process) -> dict:
    if isinstance(process, IIDGaussian):
        return {"kind": "iid_gaussian", "lambda": process.lam}
    if isinstance(process, FullyCorrelatedGaussian):
        return {"kind": "fully_correlated_gaussian", "lambda": process.lam}
    if isinstance(process, IIDDiscrete):
        return {"kind": "iid_discrete", "atoms": dist_to_list(process.dist)}
    if isinstance(process, Markov):
        return {"kind": "markov", "initial_angle": process.initial_angle,
                "kernel": kernel_to_dict(process.kernel)}
    if isinstance(process, Mixture):
        return {
            "kind": "mixture",
            "initial_angle": process.initial_angle,
            "components": [{"kernel": kernel_to_dict(k), "weight": w} for k, w in process.components],
        }
    raise TypeError(f"cannot serialise {type(process).__name__}")


# --- scenario ---------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioConfig:
    process: object
    initial_state: DensityMatrix
    steps: int
    engine: str
    output: Path
    trajectories: int | None = None
    seed: int | None = None
    workers: int = 1
    max_work: int = DEFAULT_MAX_WORK


def scenario_from_dict(doc: dict) -> ScenarioConfig:
    version = _require(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported version {version!r} (expected {SCHEMA_VERSION})", "schema_version")
    engine = _require(doc, "engine")
    if engine not in ENGINES:
        raise ConfigError(f"must be one of {', '.join(ENGINES)}, got {engine!r}", "engine")
    steps = _integer(_require(doc, "steps"), "steps")
    output = _require(doc, "output")
    if not isinstance(output, str) or not output:
        raise ConfigError("expected a non-empty path string", "output")

    st = _require(doc, "initial_state")
    vals = {k: parse_number(_require(st, k, "initial_state."), f"initial_state.{k}")
            for k in ("a", "b_re", "b_im")}
    try:
        state = DensityMatrix(vals["a"], complex(vals["b_re"], vals["b_im"]))
    except PhaseKickError as exc:
        raise ConfigError(str(exc), "initial_state") from None

    process = process_from_dict(_require(doc, "process"))

    trajectories = seed = None
    if engine in ("monte_carlo", "both"):
        trajectories = _integer(_require(doc, "trajectories"), "trajectories", minimum=1)
        seed = _integer(_require(doc, "seed"), "seed")
        if seed >= 2**64:
            raise ConfigError("must fit in 64 bits", "seed")
    workers = _integer(doc.get("workers", 1), "workers", minimum=1)
    max_work = _integer(doc.get("max_work", DEFAULT_MAX_WORK), "max_work", minimum=1)
    return ScenarioConfig(
        process, state, steps, engine, Path(output), trajectories, seed, workers, max_work
    )


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from None
    return scenario_from_dict(doc)
