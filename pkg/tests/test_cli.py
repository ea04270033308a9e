import json
import math

import numpy as np
import pytest

from cpbnr import cli
from cpbnr.config import (
    build_config,
    config_hash,
    dump_config,
    load_config,
    parse_config_text,
    with_overrides,
)
from cpbnr.errors import NumericsError, ParseError, ValidationError
from cpbnr.model import Constant, Sinusoid, Zero
from cpbnr.presets import PRESET_NAMES, list_presets, load_preset, preset_summary, preset_text
from cpbnr.runner import SweepSpec, apply_axis

# closed-form maximum of the ideal resonant entropy over one period (independent grid search
# of the exact two-level-per-pair solution, 3e5 points on [0, pi])
IDEAL_ENTROPY_MAX = 0.64147176


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0], np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])


@pytest.fixture
def cfg_file(tmp_path):
    def make(text, name="case.cfg"):
        p = tmp_path / name
        p.write_text(text)
        return p

    return make


def test_preset_file_matches_caption(tmp_path):
    path = tmp_path / "fig2a.cfg"
    path.write_text(preset_text("fig2a"))
    cfg = load_config(path)
    p = cfg.params
    assert (p.omega0, p.omega_c) == (2000, 2000)
    assert p.gamma == Zero() and p.delta == Zero() and p.detuning == Zero()
    assert cfg.initial.mean_n == 9
    assert cfg.name == "fig2a"


def test_negative_omega0(cfg_file):
    with pytest.raises(ValidationError, match="omega0"):
        load_config(cfg_file("params.omega0 = -5\n"))


def test_unknown_key(cfg_file):
    with pytest.raises(ParseError) as err:
        load_config(cfg_file("# comment\nparams.omega0 = 2000\nparams.omega_zero = 3\n"))
    assert err.value.lineno == 3 and err.value.token == "params.omega_zero"


@pytest.mark.parametrize(
    "text, exc",
    [
        ("params.omega0 2000", ParseError),
        ("params.omega0 = abc", ParseError),
        ("params.omega0 = 1\nparams.omega0 = 2", ParseError),
        ("output.normalizeEntropy = maybe", ParseError),
        ("params.detuning.kind = constant", ValidationError),
        ("params.detuning.kind = zero\nparams.detuning.eta = 3", ValidationError),
        ("params.detuning.kind = wobble", ValidationError),
        ("params.gamma = -1", ValidationError),
        ("output.format = xml", ValidationError),
        ("plan.recordEvery = 7", ValidationError),
    ],
)
def test_bad_configs(text, exc):
    with pytest.raises(exc):
        build_config(parse_config_text(text))


def test_comments_and_nesting():
    values = parse_config_text(
        "  # header\nparams.detuning.kind = sinusoid  # inline\n"
        "params.detuning.eta = 20\nparams.detuning.omegaPrime = 1\n\n"
    )
    cfg = build_config(values)
    assert cfg.params.detuning == Sinusoid(20, 1)


def test_dump_round_trip():
    for name in PRESET_NAMES:
        cfg = load_preset(name)
        again = build_config(parse_config_text(dump_config(cfg)), name=name)
        assert again == cfg
        assert config_hash(again) == config_hash(cfg)


def test_overrides_keep_record_interval():
    cfg = with_overrides(load_preset("fig2a"), step=1e-4, t_end=5)
    assert cfg.plan.record_every == 100 and cfg.plan.t_end == 5
    with pytest.raises(ValidationError):
        with_overrides(load_preset("fig2a"), step=3e-3)


def test_presets_listing(capsys):
    assert len(PRESET_NAMES) == 13
    assert cli.main(["presets"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in PRESET_NAMES)
    assert "gamma=0.001 delta=0.001 f(t)=0 " in preset_summary("fig5b")
    assert "f(t)=20 (constant)" in preset_summary("fig6a")
    assert list_presets() == out


def test_run_fig2a(tmp_path):
    out = tmp_path / "fig2a.csv"
    assert cli.main(["run", "fig2a", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == "t,entropy,inversion,norm2,meanN"
    t, s, inv, n2, _ = data.T
    assert t[0] == 0 and abs(inv[0] - 1) < 1e-8 and abs(s[0]) < 1e-8
    assert np.max(abs(n2 - 1)) < 1e-8
    assert len(t) == 2501 and t[-1] == 25
    assert s.max() == pytest.approx(IDEAL_ENTROPY_MAX, abs=1e-4)
    raw = out.read_bytes()
    assert b"\r" not in raw and not any(line.endswith(b",") for line in raw.splitlines())


def test_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["run", "fig7b", "--t-end", "2", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_jsonl_and_raw_entropy(tmp_path):
    out = tmp_path / "r.jsonl"
    assert cli.main(["run", "fig3b", "--t-end", "5", "--format", "jsonl", "--raw-entropy", "--out", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert list(rows[0]) == ["t", "entropy", "inversion", "norm2", "meanN"]
    assert rows[-1]["t"] == 5


def test_step_flag_changes_step_not_grid(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["run", "fig2a", "--t-end", "3", "--out", str(a)])
    cli.main(["run", "fig2a", "--t-end", "3", "--step", "1e-4", "--out", str(b)])
    _, da = read_csv(a)
    _, db = read_csv(b)
    np.testing.assert_array_equal(da[:, 0], db[:, 0])
    assert np.max(abs(da - db)) < 1e-9


def test_config_errors_exit_1(tmp_path, cfg_file, capsys):
    assert cli.main(["run", str(cfg_file("params.omega0 = -5\n")), "--out", str(tmp_path / "x")]) == 1
    assert cli.main(["run", "no-such-preset"]) == 1
    assert cli.main(["sweep", "fig2a", "--axis", "delta", "--values", ""]) == 1
    assert cli.main(["sweep", "fig2a", "--axis", "eta", "--values", "1,2"]) == 1
    assert "configuration error" in capsys.readouterr().err


def test_runtime_error_exit_2(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise NumericsError("non-finite amplitudes at t=1.25")

    monkeypatch.setattr("cpbnr.runner.integrate", boom)
    assert cli.main(["run", "fig2a", "--out", str(tmp_path / "x.csv")]) == 2
    assert "t=1.25" in capsys.readouterr().err


def test_sweep_delta_ladder(tmp_path):
    out = tmp_path / "sweep"
    rc = cli.main(["sweep", "fig2b", "--axis", "delta", "--values", "0,0.001,0.005,0.01",
                   "--t-end", "5", "--out", str(out), "--jobs", "2"])
    assert rc == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert [p["value"] for p in manifest["points"]] == [0, 0.001, 0.005, 0.01]
    assert [p["file"] for p in manifest["points"]] == [
        "delta=0.csv", "delta=0.001.csv", "delta=0.005.csv", "delta=0.01.csv"]
    assert all(p["status"] == "ok" for p in manifest["points"])
    final_norms = [read_csv(out / p["file"])[1][-1, 3] for p in manifest["points"]]
    assert all(a > b for a, b in zip(final_norms, final_norms[1:]))
    base = with_overrides(load_preset("fig2b"), t_end=5)
    assert manifest["config_hash"] == config_hash(base)


def test_sweep_omega_prime_matches_presets(tmp_path):
    out = tmp_path / "sw"
    assert cli.main(["sweep", "fig7b", "--axis", "omegaPrime", "--values", "1,20",
                     "--t-end", "2", "--out", str(out)]) == 0
    for value, preset in (("1", "fig7b"), ("20", "fig7c")):
        ref = tmp_path / f"{preset}.csv"
        cli.main(["run", preset, "--t-end", "2", "--out", str(ref)])
        assert (out / f"omegaPrime={value}.csv").read_bytes() == ref.read_bytes()


def test_sweep_records_point_failures(tmp_path):
    spec = SweepSpec(load_preset("fig2a"), "meanN", (1.0, 4.0))
    from dataclasses import replace
    from cpbnr import runner

    spec = replace(spec, base=replace(spec.base, n_max=12, plan=with_overrides(spec.base, t_end=1).plan))
    manifest = runner.run_sweep(spec, tmp_path)
    statuses = [p["status"] for p in manifest["points"]]
    assert statuses == ["ok", "error"]
    assert "TruncationError" in manifest["points"][1]["error"]


def test_sweep_spec_validation():
    base = load_preset("fig7b")
    with pytest.raises(ValidationError):
        SweepSpec(base, "delta", ())
    with pytest.raises(ValidationError):
        SweepSpec(base, "colour", (1.0,))
    with pytest.raises(ValidationError):
        SweepSpec(base, "gamma", (-1.0,))
    assert apply_axis(base, "Delta", 20.0).params.detuning == Constant(20)
    assert apply_axis(base, "eta", 5.0).params.detuning == Sinusoid(5, 1)
    assert apply_axis(base, "meanN", 4.0).initial.mean_n == 4
