import json
import math

import numpy as np
import pytest

from phasekick.cli import main, read_trace_csv, write_trace_csv
from phasekick.config import (
    kernel_to_dict,
    load_scenario,
    process_from_dict,
    process_to_dict,
    scenario_from_dict,
)
from phasekick.errors import ConfigError
from phasekick.exact import CoherenceTrace
from phasekick.noise import (
    DiscreteDistribution,
    FullyCorrelatedGaussian,
    IIDDiscrete,
    IIDGaussian,
    Markov,
    Mixture,
    ParrondoParams,
    parrondo_pair,
)
from phasekick.qubit import DensityMatrix

BASE = """\
schema_version = 1
steps = {steps}
engine = "{engine}"
trajectories = 20000
seed = 42
output = "{out}"

[initial_state]
a = 0.5
b_re = 0.5
b_im = 0.0

[process]
{process}
"""

GAUSS = 'kind = "iid_gaussian"\nlambda = 0.02'
PARRONDO = 'kind = "parrondo"\nepsilon = 1e-6\nweight_a = 0.5'


def write_config(tmp_path, steps=50, engine="exact", process=GAUSS, name="cfg.toml"):
    out = tmp_path / (name + ".csv")
    path = tmp_path / name
    path.write_text(BASE.format(steps=steps, engine=engine, out=out, process=process))
    return path, out


def rows(path):
    return path.read_text().splitlines()


def test_run_exact_gaussian(tmp_path, capsys):
    cfg, out = write_config(tmp_path)
    assert main(["run", str(cfg)]) == 0
    lines = rows(out)
    assert lines[0] == "step,f_re,f_im,f_abs,stderr_re,stderr_im"
    assert lines[1] == "0,1,0,1,,"
    last = lines[51].split(",")
    assert last[0] == "50"
    assert abs(float(last[3]) - math.exp(-1)) < 1e-12
    assert "engine=exact" in capsys.readouterr().out


def test_run_zero_steps(tmp_path):
    cfg, out = write_config(tmp_path, steps=0)
    assert main(["run", str(cfg)]) == 0
    assert rows(out) == ["step,f_re,f_im,f_abs,stderr_re,stderr_im", "0,1,0,1,,"]


def test_run_monte_carlo_is_byte_identical(tmp_path):
    cfg, out = write_config(tmp_path, steps=15, engine="monte_carlo", process=PARRONDO)
    assert main(["run", str(cfg), "--output", str(tmp_path / "a.csv")]) == 0
    assert main(["run", str(cfg), "--output", str(tmp_path / "b.csv"), "--workers", "4"]) == 0
    a, b = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
    assert a == b
    assert rows(tmp_path / "a.csv")[1] == "0,1,0,1,0,0"


def test_run_both_engines(tmp_path, capsys):
    cfg, out = write_config(tmp_path, steps=10, engine="both", process=PARRONDO)
    assert main(["run", str(cfg)]) == 0
    exact_path = out.with_name(out.stem + ".exact.csv")
    mc, ex = read_trace_csv(out), read_trace_csv(exact_path)
    assert mc.has_stderr and not ex.has_stderr
    assert "max_deviation_in_stderr=" in capsys.readouterr().out


def test_run_then_fit_round_trip(tmp_path, capsys):
    cfg, out = write_config(
        tmp_path, steps=30,
        process='kind = "iid_discrete"\natoms = [[0, "1/2"], ["pi/2", "1/4"], ["-pi/2", "1/4"]]',
    )
    assert main(["run", str(cfg)]) == 0
    capsys.readouterr()
    assert main(["fit", str(out), "--json"]) == 0
    fit = json.loads(capsys.readouterr().out)
    assert fit["model"] == "linear"
    assert abs(fit["gamma"] - 0.5) < 1e-9


def test_fit_text_output(tmp_path, capsys):
    k = np.arange(31)
    write_trace_csv(CoherenceTrace.from_factors(0.9**k), tmp_path / "g.csv")
    write_trace_csv(CoherenceTrace.from_factors(np.exp(-0.01 * k * k)), tmp_path / "q.csv")
    assert main(["fit", str(tmp_path / "g.csv")]) == 0
    assert "model=linear" in (o := capsys.readouterr().out) and "gamma=0.900000" in o
    assert main(["fit", str(tmp_path / "q.csv")]) == 0
    assert "model=quadratic lambda=0.010000" in capsys.readouterr().out


def test_fit_parrondo_run(tmp_path, capsys):
    cfg, out = write_config(tmp_path, steps=30, process=PARRONDO)
    assert main(["run", str(cfg)]) == 0
    capsys.readouterr()
    assert main(["fit", str(out)]) == 0
    assert "gamma=0.666667" in capsys.readouterr().out


def test_fit_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("step,value\n0,1\n")
    assert main(["fit", str(bad)]) == 1
    bad.write_text("step,f_re,f_im,f_abs,stderr_re,stderr_im\n0,x,0,1,,\n")
    assert main(["fit", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_parrondo_demo(capsys):
    assert main(["parrondo-demo", "--epsilon", "1e-6", "--weight", "0.5", "--steps", "30"]) == 0
    out = capsys.readouterr().out
    assert "verdict=true" in out and "gamma_mixed=0.666667" in out
    assert main(["parrondo-demo", "--weight", "1.0"]) == 0
    assert "verdict=false" in capsys.readouterr().out
    assert main(["parrondo-demo", "--epsilon", "0.3", "--steps", "1"]) == 1
    assert "n >= 10" in capsys.readouterr().err
    assert main(["parrondo-demo", "--epsilon", "1e-10"]) == 1


def test_parrondo_demo_json(capsys):
    assert main(["parrondo-demo", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] is True and rep["gamma_mixed"] == pytest.approx(2 / 3, abs=1e-4)


REQUIRED = ["schema_version", "steps", "engine", "output", "initial_state", "process"]


@pytest.mark.parametrize("field", REQUIRED)
def test_missing_top_level_field(tmp_path, capsys, field):
    cfg, _ = write_config(tmp_path)
    text = cfg.read_text()
    if field in ("initial_state", "process"):
        head, _, tail = text.partition(f"[{field}]")
        tail = tail.split("\n[", 1)
        text = head + ("\n[" + tail[1] if len(tail) > 1 else "")
    else:
        text = "\n".join(l for l in text.splitlines() if not l.startswith(field))
    cfg.write_text(text)
    assert main(["run", str(cfg)]) == 1
    assert field in capsys.readouterr().err


@pytest.mark.parametrize("field", ["a", "b_re", "b_im"])
def test_missing_state_field(tmp_path, capsys, field):
    cfg, _ = write_config(tmp_path)
    cfg.write_text("\n".join(l for l in cfg.read_text().splitlines() if not l.startswith(f"{field} =")))
    assert main(["run", str(cfg)]) == 1
    assert f"initial_state.{field}" in capsys.readouterr().err


@pytest.mark.parametrize("field", ["trajectories", "seed"])
def test_missing_mc_field(tmp_path, capsys, field):
    cfg, _ = write_config(tmp_path, engine="monte_carlo")
    cfg.write_text("\n".join(l for l in cfg.read_text().splitlines() if not l.startswith(field)))
    assert main(["run", str(cfg)]) == 1
    assert field in capsys.readouterr().err


def test_missing_process_parameter(tmp_path, capsys):
    cfg, _ = write_config(tmp_path, process='kind = "iid_gaussian"')
    assert main(["run", str(cfg)]) == 1
    assert "process.lambda" in capsys.readouterr().err


def test_bad_toml_reports_line(tmp_path, capsys):
    cfg = tmp_path / "broken.toml"
    cfg.write_text("schema_version = 1\nsteps = = 3\n")
    assert main(["run", str(cfg)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_invalid_values(tmp_path, capsys):
    cfg, _ = write_config(tmp_path, process='kind = "iid_gaussian"\nlambda = -1')
    assert main(["run", str(cfg)]) == 1
    cfg, _ = write_config(tmp_path, process='kind = "warp"')
    assert main(["run", str(cfg)]) == 1
    assert "process.kind" in capsys.readouterr().err


def test_resource_failure_exit_code(tmp_path, capsys):
    cfg, _ = write_config(tmp_path, steps=15, engine="monte_carlo")
    cfg.write_text("max_work = 10\n" + cfg.read_text())
    assert main(["run", str(cfg)]) == 2
    assert "exceeds the cap" in capsys.readouterr().err


def test_explicit_kernel_config():
    doc = {
        "kind": "markov",
        "initial_angle": "0",
        "kernel": {
            "default": [[0.0, 1.0]],
            "branches": [
                {"conditions": ["-pi/2", 0, "pi/2"],
                 "emission": [[0, "1/3"], ["-pi/2", "1/3"], ["pi/2", "1/3"]]},
            ],
        },
    }
    proc = process_from_dict(doc)
    a, _ = parrondo_pair(ParrondoParams(1e-6))
    for theta in (0.0, math.pi / 2, 0.4):
        assert proc.kernel.emission(theta).same_law(a.emission(theta))


@pytest.mark.parametrize(
    "process",
    [
        IIDGaussian(0.3),
        FullyCorrelatedGaussian(0.01),
        IIDDiscrete(DiscreteDistribution(((0.1, 0.25), (-2.0, 0.75)))),
        Markov(parrondo_pair(ParrondoParams(0.01))[1], 0.01),
        Mixture(tuple(zip(parrondo_pair(ParrondoParams(0.01)), (0.4, 0.6))), 0.2),
    ],
)
def test_process_round_trip(process):
    again = process_from_dict(process_to_dict(process))
    assert again == process


def test_preset_kernel_dict():
    a, b = parrondo_pair(ParrondoParams(0.02))
    doc = {"kind": "mixture", "components": [
        {"weight": 0.5, "kernel": {"preset": "parrondo_a"}},
        {"weight": 0.5, "kernel": {"preset": "parrondo_b", "epsilon": 0.02}},
    ]}
    proc = process_from_dict(doc)
    assert proc.components[1][0] == b and proc.components[0][0] == a
    assert kernel_to_dict(b)["default"] == [[0.02, 1.0]]
    with pytest.raises(ConfigError) as err:
        process_from_dict({"kind": "mixture", "components": [{"weight": 1.0, "kernel": {"preset": "zz"}}]})
    assert "preset" in str(err.value)


def test_scenario_from_dict_workers_default(tmp_path):
    cfg, _ = write_config(tmp_path)
    sc = load_scenario(cfg)
    assert sc.workers == 1 and sc.engine == "exact"
    assert sc.initial_state == DensityMatrix(0.5, 0.5)
    with pytest.raises(ConfigError):
        scenario_from_dict({"schema_version": 2})


@pytest.mark.parametrize("name", ["gaussian", "parrondo", "markov"])
def test_shipped_configs_load(name):
    from pathlib import Path

    sc = load_scenario(Path(__file__).parent.parent / "configs" / f"{name}.toml")
    assert sc.steps > 0
