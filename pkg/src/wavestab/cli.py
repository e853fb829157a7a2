"""Command-line front end emitting CSV/JSON artifacts for every stage.

Five subcommands expose the pipeline: ``profile`` solves the front,
``spectrum`` maps essential/absolute spectrum, ``evans`` evaluates D along
real scans or at single points, ``winding`` counts roots on the standard
contour, and ``simulate`` cross-checks dynamically.  All numeric output is
CSV with full-precision floats (byte-identical across runs) plus a
manifest JSON per run; profile files carry a parameter hash so the
spectral commands refuse a wave that was solved for different kinetics.

Exit codes: 0 success, 1 configuration/usage error, 2 profile-solve
failure, 3 profile/config mismatch, 4 winding aliasing, 5 simulation
instability.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .contour import AliasingError, ZeroSampleError, count_roots
from .evans import STATUS_OK, StiffnessError, evans_scan
from .model import ModelParamError, ModelParams
from .profile import ProfileSolveError, WaveProfile, solve_profile
from .simulate import (
    FRAME_COMOVING,
    FRAME_LAB,
    IC_PERTURBED,
    IC_PROFILE,
    IC_TANH,
    InstabilityError,
    SimulationConfig,
    perturbation_decay,
    run,
)
from .spectrum import absolute_edge, classify, dispersion_curves, rightmost_essential

__all__ = ["RunManifest", "main", "run_main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVE = 2
EXIT_MISMATCH = 3
EXIT_ALIASING = 4
EXIT_INSTABILITY = 5

_PARAM_KEYS = ("F", "mu", "s_h", "alpha", "rho", "c")
_BRANCH_NAMES = ("fast_minus", "slow_minus", "fast_plus", "slow_plus")


class _UsageError(Exception):
    """Bad flags or inconsistent options (maps to exit code 1)."""


class _MismatchError(Exception):
    """Profile file does not belong to the configured parameters."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage, which collides with the
    # solver-failure code; surface usage problems as exceptions instead
    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class RunManifest:
    """What a CLI invocation did: inputs, outputs, and headline numbers.

    Written as manifest.json next to the outputs.  Identical inputs give
    identical manifests except for duration_s, which is wall clock.
    """

    command: str
    parameters: dict
    inputs: list[str]
    outputs: list[str]
    version: str
    duration_s: float
    summary: dict

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        _write_json(path, {
            "command": self.command,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": self.version,
            "duration_s": self.duration_s,
            "summary": self.summary,
        })
        return path


# ---------------------------------------------------------------- plumbing


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(str(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _load_config(path: str) -> ModelParams:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise _UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise _UsageError(f"config {path} must be a JSON object")
    unknown = sorted(set(raw) - set(_PARAM_KEYS))
    if unknown:
        raise _UsageError(
            f"config {path} has unknown keys {unknown}; "
            f"allowed keys are {list(_PARAM_KEYS)}"
        )
    missing = sorted({"F", "mu", "s_h", "alpha"} - set(raw))
    if missing:
        raise _UsageError(f"config {path} is missing required keys {missing}")
    try:
        values = {key: float(raw[key]) for key in raw}
    except (TypeError, ValueError) as exc:
        raise _UsageError(f"config {path} has a non-numeric value: {exc}") from exc
    try:
        return ModelParams(
            F=values["F"], mu=values["mu"], s_h=values["s_h"],
            alpha=values["alpha"], rho=values.get("rho", 0.0),
            c=values.get("c"),
        )
    except ModelParamError as exc:
        raise _UsageError(f"config {path}: {exc}") from exc


def _params_hash(params: ModelParams) -> str:
    """sha256 over the kinetic parameters (c excluded: the wave sets it)."""
    payload = json.dumps(
        {key: _fmt(getattr(params, key))
         for key in ("F", "mu", "s_h", "alpha", "rho")},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _write_profile(out_dir: Path, profile: WaveProfile) -> list[str]:
    _write_csv(
        out_dir / "profile.csv",
        "z,u,v,du,dv",
        ((_fmt(z), _fmt(u), _fmt(v), _fmt(du), _fmt(dv))
         for z, u, v, du, dv in zip(profile.grid, profile.u_hat,
                                    profile.v_hat, profile.du_hat,
                                    profile.dv_hat)),
    )
    _write_json(out_dir / "profile.json", {
        "c_star": profile.c_star,
        "L": profile.L,
        "residual_norm": profile.residual_norm,
        "n_nodes": profile.n_nodes,
        "params_hash": _params_hash(profile.params),
    })
    return ["profile.csv", "profile.json"]


def _read_profile(path: str, params: ModelParams) -> WaveProfile:
    csv_path = Path(path)
    sidecar_path = csv_path.with_suffix(".json")
    try:
        sidecar = json.loads(sidecar_path.read_text())
        data = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    except OSError as exc:
        raise _UsageError(f"cannot read profile {path}: {exc}") from exc
    if sidecar.get("params_hash") != _params_hash(params):
        raise _MismatchError(
            f"profile {path} was solved for different parameters than the "
            "config (hash mismatch); re-run the profile command"
        )
    return WaveProfile(
        grid=data[:, 0], u_hat=data[:, 1], v_hat=data[:, 2],
        du_hat=data[:, 3], dv_hat=data[:, 4],
        c_star=float(sidecar["c_star"]), L=float(sidecar["L"]),
        residual_norm=float(sidecar["residual_norm"]),
        params=params.with_c(float(sidecar["c_star"])),
    )


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _set_threads(args) -> None:
    if getattr(args, "threads", None) is not None:
        if args.threads < 1:
            raise _UsageError(f"--threads must be >= 1, got {args.threads}")
        import numba

        numba.set_num_threads(min(args.threads, numba.config.NUMBA_NUM_THREADS))


def _kinetic_params(params: ModelParams) -> ModelParams:
    """The same kinetics with any configured c dropped."""
    if params.c is None:
        return params
    return ModelParams(F=params.F, mu=params.mu, s_h=params.s_h,
                       alpha=params.alpha, rho=params.rho)


# ---------------------------------------------------------------- commands


def _cmd_profile(args) -> int:
    t0 = time.perf_counter()
    params = _kinetic_params(_load_config(args.config))
    out = _out_dir(args)
    try:
        profile = solve_profile(params, L=args.L, n_nodes=args.nodes)
    except ProfileSolveError as exc:
        print(f"profile solve failed: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    outputs = _write_profile(out, profile)
    print(f"c* = {profile.c_star:.12f}")
    RunManifest(
        command="profile",
        parameters={"config": args.config, "L": args.L, "nodes": args.nodes,
                    "F": params.F, "mu": params.mu, "s_h": params.s_h,
                    "alpha": params.alpha, "rho": params.rho},
        inputs=[args.config],
        outputs=outputs,
        version=__version__,
        duration_s=round(time.perf_counter() - t0, 3),
        summary={"c_star": profile.c_star,
                 "residual_norm": profile.residual_norm},
    ).write(out)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    t0 = time.perf_counter()
    params = _load_config(args.config)
    c = args.c if args.c is not None else params.c
    if c is None:
        raise _UsageError("spectrum needs a wavespeed: pass --c or put c "
                          "in the config")
    params = _kinetic_params(params)
    out = _out_dir(args)

    curves = dispersion_curves(params, c)
    k = np.linspace(-args.k_max, args.k_max, 801)
    rows = []
    for name, curve in zip(_BRANCH_NAMES, curves.curves):
        for kk in k:
            lam = curve(float(kk))
            rows.append((_fmt(kk), name, _fmt(lam.real), _fmt(lam.imag)))
    _write_csv(out / "dispersion.csv", "k,branch,re_lambda,im_lambda", rows)

    re_grid = np.linspace(-0.01, 0.002, 25)
    im_grid = np.linspace(-0.008, 0.008, 17)
    rows = []
    for re in re_grid:
        for im in im_grid:
            cls = classify(params, c, complex(re, im))
            rows.append((_fmt(re), _fmt(im), cls.i_minus, cls.i_plus,
                         cls.verdict))
    _write_csv(out / "classification.csv",
               "re_lambda,im_lambda,i_minus,i_plus,verdict", rows)

    summary = {"rightmost_essential": rightmost_essential(params, c),
               "gamma_A": absolute_edge(params, c)}
    _write_json(out / "summary.json", summary)
    print(f"rightmost_essential = {summary['rightmost_essential']:.10f}")
    print(f"gamma_A = {summary['gamma_A']:.10f}")
    RunManifest(
        command="spectrum",
        parameters={"config": args.config, "c": c, "k_max": args.k_max,
                    "F": params.F, "mu": params.mu, "s_h": params.s_h,
                    "alpha": params.alpha, "rho": params.rho},
        inputs=[args.config],
        outputs=["dispersion.csv", "classification.csv", "summary.json"],
        version=__version__,
        duration_s=round(time.perf_counter() - t0, 3),
        summary=summary,
    ).write(out)
    return EXIT_OK


def _parse_lambda(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise _UsageError(f"--lambda expects 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise _UsageError(f"--lambda expects numbers: {exc}") from exc


def _cmd_evans(args) -> int:
    t0 = time.perf_counter()
    _set_threads(args)
    params = _kinetic_params(_load_config(args.config))
    profile = _read_profile(args.profile, params)
    out = _out_dir(args)

    if args.lam is not None:
        lams = np.array([_parse_lambda(args.lam)])
        scan_kind = "point"
    else:
        if args.real_from is None or args.real_to is None:
            raise _UsageError("pass either --lambda re,im or both "
                              "--real-from and --real-to")
        if not args.real_from < args.real_to:
            raise _UsageError("need --real-from < --real-to")
        lams = np.linspace(args.real_from, args.real_to,
                           args.points).astype(complex)
        scan_kind = "real-scan"

    values = evans_scan(lams, profile, inside_essential=True)
    _write_csv(
        out / "evans.csv",
        "re_lambda,im_lambda,re_d,im_d,status",
        ((_fmt(v.lam.real), _fmt(v.lam.imag), _fmt(v.d.real),
          _fmt(v.d.imag), v.status) for v in values),
    )

    crossings: list[float] = []
    if scan_kind == "real-scan":
        good = [(v.lam.real, v.d.real) for v in values if v.status == STATUS_OK]
        for (xa, da), (xb, db) in zip(good[:-1], good[1:]):
            if da == 0.0:
                crossings.append(xa)
            elif da * db < 0.0:
                crossings.append(xa - da * (xb - xa) / (db - da))
        if crossings:
            for x0 in crossings:
                print(f"sign change near lambda = {x0:.6e}")
        else:
            print("no sign changes on the scan")
    else:
        v = values[0]
        print(f"D({v.lam.real:g}{v.lam.imag:+g}j) = {v.d} [{v.status}]")

    RunManifest(
        command="evans",
        parameters={"config": args.config, "profile": args.profile,
                    "real_from": args.real_from, "real_to": args.real_to,
                    "points": args.points, "lambda": args.lam,
                    "F": params.F, "mu": params.mu, "s_h": params.s_h,
                    "alpha": params.alpha, "rho": params.rho,
                    "c_star": profile.c_star},
        inputs=[args.config, args.profile],
        outputs=["evans.csv"],
        version=__version__,
        duration_s=round(time.perf_counter() - t0, 3),
        summary={"kind": scan_kind, "crossings": crossings,
                 "n_points": int(lams.size)},
    ).write(out)
    return EXIT_OK


def _cmd_winding(args) -> int:
    t0 = time.perf_counter()
    _set_threads(args)
    params = _kinetic_params(_load_config(args.config))
    profile = _read_profile(args.profile, params)
    out = _out_dir(args)

    result = count_roots(profile, r_s=args.rs, r_b=args.rb,
                         n_points=args.points)
    _write_csv(
        out / "contour.csv",
        "re_lambda,im_lambda,re_d,im_d,cum_arg",
        ((_fmt(z.real), _fmt(z.imag), _fmt(d.real), _fmt(d.imag), _fmt(a))
         for z, d, a in zip(result.points, result.d_values, result.cum_arg)),
    )
    summary = {"winding": result.winding,
               "total_arg_change": result.total_arg_change,
               "n_points_final": result.n_points_final}
    _write_json(out / "summary.json", summary)
    print(f"winding = {result.winding}")

    RunManifest(
        command="winding",
        parameters={"config": args.config, "profile": args.profile,
                    "rs": args.rs, "rb": args.rb, "points": args.points,
                    "F": params.F, "mu": params.mu, "s_h": params.s_h,
                    "alpha": params.alpha, "rho": params.rho,
                    "c_star": profile.c_star},
        inputs=[args.config, args.profile],
        outputs=["contour.csv", "summary.json"],
        version=__version__,
        duration_s=round(time.perf_counter() - t0, 3),
        summary=summary,
    ).write(out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    params = _load_config(args.config)
    config_c = params.c
    params = _kinetic_params(params)
    out = _out_dir(args)

    profile = None
    if args.profile is not None:
        profile = _read_profile(args.profile, params)

    perturb = None
    if args.perturb is not None:
        parts = args.perturb.split(",")
        if len(parts) != 2:
            raise _UsageError(f"--perturb expects 'amplitude,width', "
                              f"got {args.perturb!r}")
        try:
            perturb = (float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise _UsageError(f"--perturb expects numbers: {exc}") from exc
        if profile is None:
            raise _UsageError("--perturb needs --profile (it perturbs the "
                              "solved front)")

    frame = FRAME_LAB if args.frame == "lab" else FRAME_COMOVING
    c = None
    if frame == FRAME_COMOVING:
        c = profile.c_star if profile is not None else config_c
        if c is None:
            raise _UsageError("co-moving frame needs a wavespeed: pass "
                              "--profile or put c in the config")

    if perturb is not None:
        initial = IC_PERTURBED
    elif profile is not None:
        initial = IC_PROFILE
    else:
        initial = IC_TANH

    sim_config = SimulationConfig(
        X=args.X, n_cells=args.cells, dt=args.dt, t_end=args.t_end,
        frame=frame, c=c, initial=initial,
        amplitude=perturb[0] if perturb else 0.0,
        width=perturb[1] if perturb else 10.0,
        snapshot_times=(0.0, args.t_end / 2.0, args.t_end),
    )
    result = run(sim_config, params, profile)

    outputs = []
    for snap in result.snapshots:
        name = f"snapshot_{snap.t:g}.csv"
        _write_csv(out / name, "x,u,v",
                   ((_fmt(x), _fmt(u), _fmt(v))
                    for x, u, v in zip(result.x, snap.u, snap.v)))
        outputs.append(name)
    _write_csv(out / "front.csv", "t,front_x",
               ((_fmt(t), _fmt(p))
                for t, p in zip(result.front.times, result.front.positions)))
    outputs.append("front.csv")

    summary: dict = {"speed": result.front.speed,
                     "fit_residual": result.front.fit_residual}
    if perturb is not None:
        trace = perturbation_decay(profile, params, perturb[0], perturb[1],
                                   t_end=args.t_end)
        _write_csv(out / "decay.csv", "t,deviation",
                   ((_fmt(t), _fmt(d))
                    for t, d in zip(trace.times, trace.deviations)))
        outputs.append("decay.csv")
        summary["final_deviation"] = float(trace.deviations[-1])

    print(f"fitted speed = {result.front.speed:.6f}")
    RunManifest(
        command="simulate",
        parameters={"config": args.config, "profile": args.profile,
                    "frame": args.frame, "t_end": args.t_end,
                    "perturb": args.perturb, "X": args.X,
                    "cells": args.cells, "dt": args.dt,
                    "F": params.F, "mu": params.mu, "s_h": params.s_h,
                    "alpha": params.alpha, "rho": params.rho},
        inputs=[p for p in (args.config, args.profile) if p is not None],
        outputs=outputs,
        version=__version__,
        duration_s=round(time.perf_counter() - t0, 3),
        summary=summary,
    ).write(out)
    return EXIT_OK


# -------------------------------------------------------------- entry point


def _build_parser() -> _Parser:
    parser = _Parser(prog="wavestab",
                     description="travelling-wave stability toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="solve the front and its wavespeed")
    p.add_argument("--config", required=True, help="model parameter JSON")
    p.add_argument("--L", type=float, default=200.0, help="half-width")
    p.add_argument("--nodes", type=int, default=4001, help="mesh nodes")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("spectrum", help="essential/absolute spectrum maps")
    p.add_argument("--config", required=True)
    p.add_argument("--c", type=float, default=None, help="wavespeed")
    p.add_argument("--k-max", dest="k_max", type=float, default=50.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("evans", help="Evans function scans")
    p.add_argument("--config", required=True)
    p.add_argument("--profile", required=True, help="profile.csv path")
    p.add_argument("--real-from", dest="real_from", type=float, default=None)
    p.add_argument("--real-to", dest="real_to", type=float, default=None)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--lambda", dest="lam", default=None, metavar="RE,IM")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evans)

    p = sub.add_parser("winding", help="argument-principle root count")
    p.add_argument("--config", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--rs", type=float, required=True, help="inner radius")
    p.add_argument("--rb", type=float, required=True, help="outer radius")
    p.add_argument("--points", type=int, default=1024)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_winding)

    p = sub.add_parser("simulate", help="direct time integration")
    p.add_argument("--config", required=True)
    p.add_argument("--profile", default=None)
    p.add_argument("--frame", choices=["lab", "comoving"], default="lab")
    p.add_argument("--t-end", dest="t_end", type=float, default=500.0)
    p.add_argument("--perturb", default=None, metavar="AMP,WIDTH")
    p.add_argument("--X", type=float, default=150.0)
    p.add_argument("--cells", type=int, default=600)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _MismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (AliasingError, ZeroSampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALIASING
    except InstabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY
    except ProfileSolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    except StiffnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ModelParamError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run_main() -> None:
    sys.exit(main())
