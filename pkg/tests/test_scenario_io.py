import json
import re
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from factorcirc.circulant_core import diagonalize
from factorcirc.cli import main
from factorcirc.dynamics import SwarmState, evolve_continuous, regular_polygon_state
from factorcirc.errors import ConfigError
from factorcirc.models import darboux
from factorcirc.output import plot_svg, read_trajectory, render_plot, write_trajectory
from factorcirc.scenario import (
    Trajectory,
    build_matrix,
    config_from_dict,
    initial_state,
    parse_config,
    run_scenario,
    spectrum_report,
    verify,
)

FIG1 = {"model": "darboux", "n": 7, "lambda": 1, "steps": 100, "init": "random_uniform", "seed": 42}
SVG_NS = "{http://www.w3.org/2000/svg}"


def cfg(**overrides):
    data = dict(FIG1)
    data.update(overrides)
    return config_from_dict(data)


# -- parse_config -------------------------------------------------------------

def test_parse_fig1():
    c = parse_config(json.dumps(FIG1))
    assert (c.model, c.n, c.lam, c.steps, c.init, c.seed) == ("darboux", 7, 1, 100, "random_uniform", 42)
    assert c.mode == "discrete"


@pytest.mark.parametrize(
    "data,field",
    [
        ({"model": "centroid_gathering", "n": 5}, "alpha"),
        ({"model": "custom", "n": 3, "m": [1, 0]}, "m"),
        ({"model": "spiral", "n": 3}, "model"),
        ({"model": "darboux"}, "n"),
        ({"model": "darboux", "n": 1}, "n"),
        ({"model": "darboux", "n": 3, "lambda": float("nan")}, "lambda"),
        ({"model": "darboux", "n": 3, "lambda": 0}, "lambda"),
        ({"model": "darboux", "n": 3, "mode": "continuous"}, "dt"),
        ({"model": "darboux", "n": 3, "init": "explicit"}, "points"),
        ({"model": "darboux", "n": 2, "init": "explicit", "points": [[0, 0]]}, "points"),
        ({"model": "darboux", "n": 3, "steps": -1}, "steps"),
        ({"model": "darboux", "n": 3, "seed": 2 ** 64}, "seed"),
        ({"model": "darboux", "n": 3, "colour": "red"}, "colour"),
        ({"model": "darboux", "n": 3, "beacon": {"x": 0, "y": 0, "kind": "continuous"}}, "beacon"),
        ({"model": "centroid_gathering", "n": 3, "alpha": 0.2, "beta_f": 0.1}, "beta_b"),
        ({"model": "centroid_gathering", "n": 3, "alpha": 0.2, "beta_f": 0, "beta_b": 1}, "beta_f"),
        ({"model": "centroid_gathering", "n": 3, "alpha": 1}, "alpha"),
    ],
)
def test_parse_errors_name_field(data, field):
    with pytest.raises(ConfigError) as err:
        config_from_dict(data)
    assert err.value.field == field
    assert field in str(err.value)


def test_parse_rejects_non_finite_json():
    with pytest.raises(ConfigError) as err:
        parse_config('{"model": "darboux", "n": 3, "lambda": Infinity}')
    assert err.value.field == "lambda"
    with pytest.raises(ConfigError):
        parse_config("{not json")


def test_complex_number_forms():
    a = cfg(**{"lambda": [0.5, -1]}).lam
    b = cfg(**{"lambda": {"re": 0.5, "im": -1}}).lam
    assert a == b == 0.5 - 1j


def test_gathering_from_raw_weights():
    c = config_from_dict({"model": "centroid_gathering", "n": 4, "alpha": 0.5, "beta_f": 0.2, "beta_b": 0.1})
    phi = build_matrix(c)
    assert phi.factor == pytest.approx(0.5)
    np.testing.assert_allclose(phi.m, [0.5, 0.2, 0.2, 0.2])


def test_explicit_points():
    c = config_from_dict(
        {"model": "custom", "n": 2, "m": [0, 1], "init": "explicit", "points": [[1, 2], [3, 4]]}
    )
    np.testing.assert_array_equal(initial_state(c).positions, [1 + 2j, 3 + 4j])


# -- run_scenario -------------------------------------------------------------

def test_zero_steps_single_frame():
    traj = run_scenario(cfg(steps=0))
    assert len(traj) == 1
    np.testing.assert_array_equal(traj.frames[0].positions, initial_state(cfg()).positions)


def test_fig1_protocol():
    traj = run_scenario(cfg())
    assert len(traj) == 101
    s0 = traj.frames[0]
    phi = darboux(7)
    d = diagonalize(phi)
    coords = d.t_inv @ s0.positions
    # residual modes shrink at least as fast as |mu_1|**100
    bound = abs(d.spectrum.mu[1]) ** 100 * np.abs(coords[1:]).sum() / np.sqrt(7)
    assert np.abs(traj.frames[-1].positions - s0.centroid).max() <= bound + 1e-15


def test_runs_are_deterministic():
    a = run_scenario(cfg(seed=7))
    b = run_scenario(cfg(seed=7))
    for fa, fb in zip(a.frames, b.frames):
        assert fa.positions.tobytes() == fb.positions.tobytes()


def test_continuous_grid():
    c = config_from_dict(
        {"model": "custom", "n": 4, "m": [-1, 1, 0, 0], "lambda": 0.5, "mode": "continuous",
         "dt": 0.25, "steps": 8, "init": "regular_polygon"}
    )
    traj = run_scenario(c)
    assert [f.time for f in traj.frames] == [0.25 * k for k in range(9)]
    ref = evolve_continuous(build_matrix(c), regular_polygon_state(4), 2.0)
    np.testing.assert_allclose(traj.frames[-1].positions, ref.positions, atol=1e-14)


def test_discrete_beacon_scenario():
    c = cfg(**{"lambda": 0.1, "steps": 400, "beacon": {"x": 3, "y": -2, "kind": "discrete"}})
    traj = run_scenario(c)
    # the beaconed Darboux map keeps P_B fixed and contracts toward it
    np.testing.assert_allclose(traj.frames[-1].positions, 3 - 2j, atol=1e-9)


def test_continuous_beacon_scenario():
    c = config_from_dict(
        {"model": "custom", "n": 3, "m": [-1, 0.5, 0], "lambda": 0.5, "mode": "continuous",
         "dt": 1.0, "steps": 60, "beacon": {"x": 1, "y": 1}}
    )
    traj = run_scenario(c)
    np.testing.assert_allclose(traj.frames[-1].positions, 1 + 1j, atol=1e-9)


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory([])
    with pytest.raises(ValueError):
        Trajectory([SwarmState([0, 1], 1), SwarmState([0, 1], 1)])
    with pytest.raises(ValueError):
        Trajectory([SwarmState([0, 1], 0), SwarmState([0, 1, 2], 1)])


# -- CSV ----------------------------------------------------------------------

def test_csv_two_agents_single_frame(tmp_path):
    path = tmp_path / "t.csv"
    write_trajectory(Trajectory([SwarmState([0.1 + 0.2j, -3])]), path)
    lines = path.read_text().splitlines()
    assert lines == ["t,agent,x,y", "0,0,0.10000000000000001,0.20000000000000001", "0,1,-3,0"]


def test_csv_roundtrip_exact(tmp_path):
    traj = run_scenario(cfg(**{"lambda": [0.3, 0.7], "steps": 20}))
    path = tmp_path / "t.csv"
    write_trajectory(traj, path)
    back = read_trajectory(path)
    assert len(back) == len(traj)
    for a, b in zip(traj.frames, back.frames):
        assert a.time == b.time
        assert a.positions.tobytes() == b.positions.tobytes()


def test_csv_row_count_and_order(tmp_path):
    path = tmp_path / "fig1.csv"
    write_trajectory(run_scenario(cfg()), path)
    rows = path.read_text().splitlines()[1:]
    assert len(rows) == 101 * 7
    keys = [tuple(int(v) for v in r.split(",")[:2]) for r in rows]
    assert keys == sorted(keys)


def test_read_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_trajectory(path)


# -- SVG ----------------------------------------------------------------------

def svg_layers(text):
    root = ET.fromstring(text)
    layers = []
    for g in root.iter(SVG_NS + "g"):
        polys = [p for p in g.iter(SVG_NS + "polygon")]
        dots = [(float(c.get("cx")), -float(c.get("cy"))) for c in g.iter(SVG_NS + "circle")]
        colours = {c.get("fill") for c in g.iter(SVG_NS + "circle")}
        layers.append((g.get("data-t"), polys, dots, colours))
    return root, layers


def test_overlay_red_then_blue():
    traj = run_scenario(cfg(steps=1))
    _, layers = svg_layers(plot_svg(traj, "overlay_first_step"))
    assert len(layers) == 2
    assert layers[0][3] == {"red"} and layers[1][3] == {"blue"}
    assert [p[0].get("stroke") for p in (layers[0][1], layers[1][1])] == ["red", "blue"]
    for _, polys, dots, _ in layers:
        assert len(polys) == 1 and len(dots) == 7
        # closed polygon through agents in index order
        assert len(polys[0].get("points").split()) == 7


def test_full_evolution_draws_every_frame():
    traj = run_scenario(cfg(steps=10))
    _, layers = svg_layers(plot_svg(traj, "full_evolution"))
    assert [l[0] for l in layers] == [str(k) for k in range(11)]


def test_single_agent_plot(tmp_path):
    traj = Trajectory([SwarmState([1 + 1j], 0), SwarmState([1 + 1j], 1)])
    for style in ("overlay_first_step", "full_evolution", "final_zoom"):
        root, layers = svg_layers(plot_svg(traj, style))
        assert all(len(l[1]) == 0 and len(l[2]) == 1 for l in layers)
        assert float(root.get("viewBox").split()[2]) > 0


def test_final_zoom_viewport():
    traj = run_scenario(cfg(steps=60))
    root, layers = svg_layers(plot_svg(traj, "final_zoom"))
    assert [l[0] for l in layers] == [str(t) for t in range(56, 61)]
    x0, ny0, w, h = (float(v) for v in root.get("viewBox").split())
    pts = np.concatenate([f.positions for f in traj.frames[-5:]])
    xs, ys = pts.real, -pts.imag
    span = max(np.ptp(xs), np.ptp(ys))
    assert x0 < xs.min() and xs.max() < x0 + w
    assert ny0 < ys.min() and ys.max() < ny0 + h
    assert xs.min() - x0 >= 0.05 * span * (1 - 1e-9)
    assert (x0 + w) - xs.max() >= 0.05 * span * (1 - 1e-9)


def test_plot_points_exist_in_trajectory():
    traj = run_scenario(cfg(steps=15))
    all_pts = {(p.real, p.imag) for f in traj.frames for p in f.positions}
    for style in ("overlay_first_step", "full_evolution", "final_zoom"):
        _, layers = svg_layers(plot_svg(traj, style))
        for _, _, dots, _ in layers:
            assert all(d in all_pts for d in dots)


def test_unknown_style():
    with pytest.raises(ValueError):
        plot_svg(run_scenario(cfg(steps=1)), "animated")


# -- reports ------------------------------------------------------------------

def test_spectrum_report_circulant():
    text = spectrum_report(cfg())
    assert "dominant modes: [0]" in text
    assert "ConvergeToPoint" in text
    assert re.search(r"^\s+0\s+1\s+0\s+1$", text, re.M)


def test_spectrum_report_tie():
    text = spectrum_report(cfg(**{"lambda": -1}))
    assert "dominant modes: [0, 1]" in text
    assert "MultiModal" in text


def test_spectrum_report_identity():
    c = config_from_dict({"model": "custom", "n": 3, "m": [1, 0, 0]})
    assert "FixedPoint" in spectrum_report(c)


def test_verify_rows():
    rows = verify(cfg(**{"lambda": 0.1}))
    status = {name: s for name, s, _ in rows}
    assert status["reconstruction"] == "PASS"
    assert status["modal vs direct (100 steps)"] == "PASS"
    assert status["beacon embedding invariance"] == "PASS"
    cont = verify(config_from_dict(
        {"model": "custom", "n": 4, "m": [-1, 1, 0, 0], "lambda": 1j, "mode": "continuous", "dt": 0.1, "steps": 30}
    ))
    assert all(s in ("PASS", "INFO") for _, s, _ in cont)


# -- CLI ----------------------------------------------------------------------

def write_cfg(tmp_path, data, name="c.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


def test_cli_simulate_and_plot(tmp_path, capsys):
    c = write_cfg(tmp_path, dict(FIG1, steps=5))
    out = tmp_path / "o.csv"
    svg = tmp_path / "o.svg"
    assert main(["simulate", str(c), "-o", str(out), "--plot", str(svg), "--style", "overlay_first_step"]) == 0
    assert len(out.read_text().splitlines()) == 1 + 6 * 7
    assert svg.read_text().startswith("<?xml")
    zoom = tmp_path / "z.svg"
    assert main(["plot", str(out), "--style", "final_zoom", "-o", str(zoom)]) == 0
    assert 'data-style="final_zoom"' in zoom.read_text()


def test_cli_simulate_stdout(tmp_path, capsys):
    c = write_cfg(tmp_path, dict(FIG1, steps=0))
    assert main(["simulate", str(c)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "t,agent,x,y"


def test_cli_outputs_from_config(tmp_path):
    out = tmp_path / "cfg.csv"
    c = write_cfg(tmp_path, dict(FIG1, steps=2, outputs={"trajectory": str(out)}))
    assert main(["simulate", str(c)]) == 0
    assert out.exists()


def test_cli_exit_codes(tmp_path, capsys):
    bad = write_cfg(tmp_path, {"model": "centroid_gathering", "n": 4}, "bad.json")
    assert main(["simulate", str(bad)]) == 1
    assert "alpha" in capsys.readouterr().err
    assert main(["spectrum", str(tmp_path / "missing.json")]) == 3
    singular = write_cfg(tmp_path, dict(FIG1, model="custom", m=[0] * 7), "zero.json")
    assert main(["verify", str(singular)]) == 0
    assert main(["simulate", str(write_cfg(tmp_path, dict(FIG1, steps=1), "ok.json")), "-o",
                 str(tmp_path / "no" / "such" / "dir.csv")]) == 3
    garbage = tmp_path / "garbage.csv"
    garbage.write_text("nope\n")
    assert main(["plot", str(garbage), "-o", str(tmp_path / "g.svg")]) == 3


def test_cli_numeric_error_exit(tmp_path, monkeypatch, capsys):
    from factorcirc import cli
    from factorcirc.errors import SingularSpectrum

    def boom(config):
        raise SingularSpectrum([2])

    monkeypatch.setattr(cli, "run_scenario", boom)
    c = write_cfg(tmp_path, FIG1)
    assert main(["simulate", str(c)]) == 2
    assert "mode index [2]" in capsys.readouterr().err


def test_cli_spectrum_and_verify(tmp_path, capsys):
    c = write_cfg(tmp_path, FIG1)
    assert main(["spectrum", str(c)]) == 0
    assert "ConvergeToPoint" in capsys.readouterr().out
    assert main(["verify", str(c)]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_module_entry_point(tmp_path):
    c = write_cfg(tmp_path, dict(FIG1, steps=3))
    res = subprocess.run([sys.executable, "-m", "factorcirc", "spectrum", str(c)], capture_output=True, text=True)
    assert res.returncode == 0
    assert "dominant modes" in res.stdout
