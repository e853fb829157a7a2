"""End-to-end checks of the command-line interface.

Each test drives main() directly with argv lists and inspects exit codes,
stdout, and the CSV/JSON artifacts.  Profiles are solved at a reduced
half-width so the whole module stays fast; wavespeed windows are wide
enough to absorb the small domain-truncation shift.
"""

import json

import numpy as np
import pytest

from wavestab.cli import main

PAPER = {"F": 1.0526, "mu": 0.0162, "s_h": 0.45, "alpha": 1.1}


def _write_config(path, **overrides):
    payload = dict(PAPER)
    payload.update(overrides)
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def paper_config(workdir):
    return _write_config(workdir / "paper.json")


@pytest.fixture(scope="module")
def profile_dir(workdir, paper_config):
    out = workdir / "prof"
    rc = main(["profile", "--config", paper_config, "--L", "80",
               "--nodes", "801", "--out", str(out)])
    assert rc == 0
    return out


@pytest.fixture(scope="module")
def profile_csv(profile_dir):
    return str(profile_dir / "profile.csv")


def test_profile_prints_wavespeed_and_writes_artifacts(profile_dir, capsys):
    captured = capsys.readouterr()  # fixture already ran; check artifacts
    for name in ("profile.csv", "profile.json", "manifest.json"):
        assert (profile_dir / name).exists()
    sidecar = json.loads((profile_dir / "profile.json").read_text())
    assert set(sidecar) == {"c_star", "L", "residual_norm", "n_nodes",
                            "params_hash"}
    assert 0.0255 <= sidecar["c_star"] <= 0.0285
    header = (profile_dir / "profile.csv").read_text().splitlines()[0]
    assert header == "z,u,v,du,dv"
    manifest = json.loads((profile_dir / "manifest.json").read_text())
    assert manifest["command"] == "profile"
    assert manifest["summary"]["c_star"] == sidecar["c_star"]


def test_profile_stdout_reports_wavespeed(workdir, paper_config, capsys):
    rc = main(["profile", "--config", paper_config, "--L", "80",
               "--nodes", "801", "--out", str(workdir / "prof_echo")])
    assert rc == 0
    line = [l for l in capsys.readouterr().out.splitlines()
            if l.startswith("c* = ")][0]
    assert 0.0255 <= float(line.split("=")[1]) <= 0.0285


def test_profile_wavespeed_without_sterility_cost(workdir, capsys):
    config = _write_config(workdir / "alpha1.json", alpha=1.0)
    rc = main(["profile", "--config", config, "--L", "80",
               "--nodes", "801", "--out", str(workdir / "prof_a1")])
    assert rc == 0
    sidecar = json.loads((workdir / "prof_a1" / "profile.json").read_text())
    assert 0.045 <= sidecar["c_star"] <= 0.055


def test_malformed_config_is_a_config_error(workdir, capsys):
    bad = workdir / "bad.json"
    bad.write_text('{"F": 1.0526, "mu":')
    rc = main(["profile", "--config", str(bad), "--out", str(workdir / "x")])
    assert rc == 1
    assert "not valid JSON" in capsys.readouterr().err


def test_unknown_config_key_is_a_config_error(workdir, capsys):
    config = _write_config(workdir / "extra.json", beta=3.0)
    rc = main(["profile", "--config", config, "--out", str(workdir / "x")])
    assert rc == 1
    assert "unknown keys" in capsys.readouterr().err


def test_nonphysical_config_is_a_config_error(workdir, capsys):
    config = _write_config(workdir / "weak.json", F=0.9)
    rc = main(["profile", "--config", config, "--out", str(workdir / "x")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_missing_config_file_is_a_config_error(workdir, capsys):
    rc = main(["profile", "--config", str(workdir / "nope.json"),
               "--out", str(workdir / "x")])
    assert rc == 1


def test_spectrum_summary_numbers(workdir, paper_config, capsys):
    out = workdir / "spec"
    rc = main(["spectrum", "--config", paper_config, "--c", "0.027",
               "--out", str(out)])
    assert rc == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["rightmost_essential"] == pytest.approx(
        -0.0024295382861486, abs=1e-12)
    assert summary["gamma_A"] == pytest.approx(-0.0026118, abs=1e-6)
    assert summary["rightmost_essential"] < 0.0
    assert summary["gamma_A"] < 0.0
    for name in ("dispersion.csv", "classification.csv", "manifest.json"):
        assert (out / name).exists()


def test_spectrum_edges_coincide_for_standing_wave(workdir, paper_config,
                                                   capsys):
    out = workdir / "spec_c0"
    rc = main(["spectrum", "--config", paper_config, "--c", "0.0",
               "--out", str(out)])
    assert rc == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["gamma_A"] == pytest.approx(
        summary["rightmost_essential"], rel=1e-12)


def test_spectrum_takes_wavespeed_from_config(workdir, capsys):
    config = _write_config(workdir / "with_c.json", c=0.027)
    out = workdir / "spec_cfg"
    rc = main(["spectrum", "--config", config, "--out", str(out)])
    assert rc == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["gamma_A"] == pytest.approx(-0.0026118, abs=1e-6)


def test_spectrum_without_wavespeed_is_a_config_error(workdir, paper_config,
                                                      capsys):
    rc = main(["spectrum", "--config", paper_config,
               "--out", str(workdir / "x")])
    assert rc == 1
    assert "wavespeed" in capsys.readouterr().err


def test_dispersion_csv_covers_all_branches(workdir, paper_config):
    out = workdir / "spec"  # written by test_spectrum_summary_numbers
    lines = (out / "dispersion.csv").read_text().splitlines()
    assert lines[0] == "k,branch,re_lambda,im_lambda"
    branches = {line.split(",")[1] for line in lines[1:]}
    assert branches == {"fast_minus", "slow_minus", "fast_plus", "slow_plus"}
    re_parts = [float(line.split(",")[2]) for line in lines[1:]]
    assert max(re_parts) < 0.0  # the whole essential spectrum sits left


def test_evans_real_scan_reports_crossing_at_origin(workdir, paper_config,
                                                    profile_csv, capsys):
    out = workdir / "ev_scan"
    rc = main(["evans", "--config", paper_config, "--profile", profile_csv,
               "--real-from", "-0.0026", "--real-to", "0.02",
               "--points", "24", "--out", str(out)])
    assert rc == 0
    lines = [l for l in capsys.readouterr().out.splitlines()
             if l.startswith("sign change near lambda = ")]
    assert len(lines) == 1
    assert abs(float(lines[0].split("=")[1])) <= 5e-4
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["summary"]["crossings"]) == 1


def test_evans_scan_right_of_origin_has_no_crossings(workdir, paper_config,
                                                     profile_csv, capsys):
    out = workdir / "ev_right"
    rc = main(["evans", "--config", paper_config, "--profile", profile_csv,
               "--real-from", "0.001", "--real-to", "0.2",
               "--points", "16", "--out", str(out)])
    assert rc == 0
    assert "no sign changes" in capsys.readouterr().out
    rows = (out / "evans.csv").read_text().splitlines()[1:]
    assert len(rows) == 16
    assert all(row.endswith(",ok") for row in rows)


def test_evans_single_point_mode(workdir, paper_config, profile_csv, capsys):
    out = workdir / "ev_pt"
    rc = main(["evans", "--config", paper_config, "--profile", profile_csv,
               "--lambda", "0.1,0.0", "--out", str(out)])
    assert rc == 0
    assert "[ok]" in capsys.readouterr().out
    rows = (out / "evans.csv").read_text().splitlines()
    assert len(rows) == 2  # header + the single point


def test_evans_threads_flag(workdir, paper_config, profile_csv, capsys):
    out = workdir / "ev_thr"
    rc = main(["evans", "--config", paper_config, "--profile", profile_csv,
               "--lambda", "0.1,0.0", "--threads", "2", "--out", str(out)])
    assert rc == 0
    rc = main(["evans", "--config", paper_config, "--profile", profile_csv,
               "--lambda", "0.1,0.0", "--threads", "0", "--out", str(out)])
    assert rc == 1


def test_evans_bad_lambda_is_a_config_error(workdir, paper_config,
                                            profile_csv, capsys):
    for text in ("0.1", "a,b", "1,2,3"):
        rc = main(["evans", "--config", paper_config, "--profile",
                   profile_csv, "--lambda", text,
                   "--out", str(workdir / "x")])
        assert rc == 1


def test_evans_needs_scan_or_point(workdir, paper_config, profile_csv,
                                   capsys):
    rc = main(["evans", "--config", paper_config, "--profile", profile_csv,
               "--out", str(workdir / "x")])
    assert rc == 1
    assert "--real-from" in capsys.readouterr().err


def test_stale_profile_is_an_input_mismatch(workdir, profile_csv, capsys):
    config = _write_config(workdir / "other.json", alpha=1.05)
    rc = main(["evans", "--config", config, "--profile", profile_csv,
               "--lambda", "0.1,0.0", "--out", str(workdir / "x")])
    assert rc == 3
    assert "hash mismatch" in capsys.readouterr().err


def test_winding_standard_contour_counts_zero(workdir, paper_config,
                                              profile_csv, capsys):
    out = workdir / "wind"
    rc = main(["winding", "--config", paper_config, "--profile", profile_csv,
               "--rs", "0.1", "--rb", "10", "--out", str(out)])
    assert rc == 0
    assert "winding = 0" in capsys.readouterr().out
    summary = json.loads((out / "summary.json").read_text())
    assert summary["winding"] == 0
    lines = (out / "contour.csv").read_text().splitlines()
    assert lines[0] == "re_lambda,im_lambda,re_d,im_d,cum_arg"
    assert len(lines) == summary["n_points_final"] + 2  # header + closure


def test_winding_tiny_contour_never_reports_spurious_roots(workdir,
                                                           paper_config,
                                                           profile_csv,
                                                           capsys):
    # far below resolvable scales the count must come back clean (0) or
    # fail loudly as aliasing -- anything else would invent eigenvalues
    out = workdir / "wind_tiny"
    rc = main(["winding", "--config", paper_config, "--profile", profile_csv,
               "--rs", "1e-5", "--rb", "1e-4", "--out", str(out)])
    assert rc in (0, 4)
    if rc == 0:
        summary = json.loads((out / "summary.json").read_text())
        assert summary["winding"] == 0


def test_simulate_tanh_front_runs(workdir, paper_config, capsys):
    out = workdir / "sim"
    rc = main(["simulate", "--config", paper_config, "--t-end", "50",
               "--out", str(out)])
    assert rc == 0
    front = (out / "front.csv").read_text().splitlines()
    assert front[0] == "t,front_x"
    assert len(front) == 502  # header + 501 steps at dt = 0.1
    snapshots = sorted(out.glob("snapshot_*.csv"))
    assert [p.name for p in snapshots] == [
        "snapshot_0.csv", "snapshot_25.csv", "snapshot_50.csv"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert np.isfinite(manifest["summary"]["speed"])


def test_simulate_perturbed_profile_writes_decay_series(workdir, paper_config,
                                                        profile_csv, capsys):
    out = workdir / "sim_pert"
    rc = main(["simulate", "--config", paper_config, "--profile", profile_csv,
               "--frame", "comoving", "--perturb", "0.01,10",
               "--t-end", "100", "--out", str(out)])
    assert rc == 0
    rows = (out / "decay.csv").read_text().splitlines()[1:]
    t, dev = zip(*((float(a), float(b))
                   for a, b in (row.split(",") for row in rows)))
    assert t[0] == 0.0 and t[-1] == 100.0
    assert dev[-1] < 0.5 * dev[0]  # the bump has visibly decayed
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["summary"]["final_deviation"] == dev[-1]


def test_simulate_comoving_needs_wavespeed(workdir, paper_config, capsys):
    rc = main(["simulate", "--config", paper_config, "--frame", "comoving",
               "--out", str(workdir / "x")])
    assert rc == 1
    assert "wavespeed" in capsys.readouterr().err


def test_simulate_perturb_needs_profile(workdir, paper_config, capsys):
    rc = main(["simulate", "--config", paper_config, "--perturb", "0.01,10",
               "--out", str(workdir / "x")])
    assert rc == 1
    assert "--profile" in capsys.readouterr().err


def test_simulate_cfl_violation_is_a_config_error(workdir, paper_config,
                                                  capsys):
    rc = main(["simulate", "--config", paper_config, "--dt", "1.0",
               "--out", str(workdir / "x")])
    assert rc == 1
    assert "stability bound" in capsys.readouterr().err


def test_simulate_blowup_is_reported_as_instability(workdir, capsys):
    config = _write_config(workdir / "harsh.json", F=500.0, s_h=0.999)
    rc = main(["simulate", "--config", config, "--t-end", "50",
               "--out", str(workdir / "x")])
    assert rc == 5
    assert "blow-up" in capsys.readouterr().err


def test_unknown_subcommand_is_a_config_error(capsys):
    assert main(["frobnicate"]) == 1


def test_repeat_runs_are_byte_identical(workdir, paper_config, profile_dir,
                                        profile_csv, capsys):
    rerun = workdir / "prof_rerun"
    rc = main(["profile", "--config", paper_config, "--L", "80",
               "--nodes", "801", "--out", str(rerun)])
    assert rc == 0
    for name in ("profile.csv", "profile.json"):
        assert (rerun / name).read_bytes() == (profile_dir / name).read_bytes()

    evans_dirs = []
    for tag in ("a", "b"):
        out = workdir / f"ev_repeat_{tag}"
        rc = main(["evans", "--config", paper_config, "--profile",
                   profile_csv, "--real-from", "0.001", "--real-to", "0.1",
                   "--points", "8", "--out", str(out)])
        assert rc == 0
        evans_dirs.append(out)
    assert ((evans_dirs[0] / "evans.csv").read_bytes()
            == (evans_dirs[1] / "evans.csv").read_bytes())

    manifests = [json.loads((d / "manifest.json").read_text())
                 for d in evans_dirs]
    for manifest in manifests:
        manifest.pop("duration_s")
    assert manifests[0] == manifests[1]
