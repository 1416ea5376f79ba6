"""Command-line entry point and the verification suite runner.

Exit codes: 0 every check passed, 1 some identity failed at sufficient
precision, 2 some check ran out of precision (inconclusive), 3 bad
configuration or I/O.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from pathlib import Path
from typing import Callable

from . import motives, periods, special_fn, torsion
from .errors import (
    CarlitzError,
    ConfigError,
    DivergentEvaluation,
    PrecisionExhausted,
    PrecisionLoss,
)
from .laurent_u import INF, LaurentU, prec_to_json
from .rho_map import BlockMat, residual_report, rho, rho_mat
from .t_series import TSeries

EXIT_PASS, EXIT_FAIL, EXIT_EXHAUSTED, EXIT_CONFIG = 0, 1, 2, 3
ENV_PRECISION = "CARLITZ_PRECISION_OVERRIDE"

DEFAULT_CONFIG = {
    "q": 2,
    "d": 1,
    "n_list": [1, 2, 3, 4],
    "k_list": [0, 1, 2],
    "N": 96,
    "seed": 0,
    "min_digits": 64,
}


# -- configuration ----------------------------------------------------------
def env_precision(default: int) -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None or raw == "":
        return default
    try:
        val = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_PRECISION} must be an integer, got {raw!r}") from None
    if val < 1:
        raise ConfigError(f"{ENV_PRECISION} must be positive")
    return val


def load_config(path: str | None) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        cfg.update(user)
    for key in ("q", "d", "N"):
        if not isinstance(cfg.get(key), int) or cfg[key] < 1:
            raise ConfigError(f"config field {key!r} must be a positive integer")
    for key in ("n_list", "k_list"):
        vals = cfg.get(key)
        if not isinstance(vals, list) or not vals or not all(isinstance(v, int) for v in vals):
            raise ConfigError(f"config field {key!r} must be a nonempty list of integers")
    if min(cfg["n_list"]) < 1 or min(cfg["k_list"]) < 0:
        raise ConfigError("n_list entries must be >= 1 and k_list entries >= 0")
    for key in ("M", "J"):
        if cfg.get(key) is not None and (not isinstance(cfg[key], int) or cfg[key] < 1):
            raise ConfigError(f"config field {key!r} must be a positive integer")
    cfg["N"] = env_precision(cfg["N"])
    return cfg


def make_fn_config(cfg: dict) -> special_fn.SpecialFnConfig:
    return special_fn.SpecialFnConfig.create(
        cfg["q"], cfg["d"], cfg["N"], M=cfg.get("M"), J=cfg.get("J"),
        k_max=max(cfg["k_list"]), n_max=max(cfg["n_list"]),
    )


# -- check records ----------------------------------------------------------
def _prec_value(x) -> float:
    if x is None:
        return -INF
    return INF if x == "infinity" else float(x)


def record(name: str, report: dict, min_digits: int) -> dict:
    """Classify a residual report: conclusions need at least ``min_digits`` of precision."""
    prec = _prec_value(report.get("precision", "infinity"))
    if prec < min_digits:
        status = "exhausted"
    else:
        status = "pass" if report["pass"] else "fail"
    out = {"name": name, "status": status}
    for key in ("residual_valuation", "precision"):
        if key in report:
            out[key] = report[key]
    return out


def _guarded(name: str, fn: Callable[[], dict], min_digits: int) -> dict:
    try:
        return record(name, fn(), min_digits)
    except (PrecisionExhausted, PrecisionLoss) as exc:
        return {"name": name, "status": "exhausted", "error": str(exc)}
    except DivergentEvaluation as exc:
        return {"name": name, "status": "fail", "error": str(exc)}


def _min_prec(xs: list[LaurentU]) -> float:
    return min(x.prec for x in xs)


def _period_checks(n: int, fc, min_digits: int) -> list[dict]:
    out = []
    pv_box = {}

    def pv():
        if "v" not in pv_box:
            pv_box["v"] = periods.period_coordinates(n, fc)
        return pv_box["v"]

    out.append(_guarded(f"periods/normalization/n={n}",
                        lambda: periods.normalization_report(pv(), fc), min_digits))

    def agreement():
        v = pv()
        return {"pass": v.agreement >= 0.8, "precision": prec_to_json(_min_prec(v.z)),
                "residual_valuation": round(v.agreement, 6)}

    out.append(_guarded(f"periods/route_agreement/n={n}", agreement, min_digits))
    if n <= 4:
        out.append(_guarded(f"periods/toeplitz/n={n}",
                            lambda: periods.toeplitz_inverse_identity(n, fc, pv().z), min_digits))

    def pattern():
        rep = periods.vanishing_pattern(n, fc)
        rep["precision"] = prec_to_json(_min_prec(pv().z))
        return rep

    out.append(_guarded(f"periods/vanishing_pattern/n={n}", pattern, min_digits))
    return out


def _rho_sample(fc, seed: int, k_list: list[int], count: int = 8) -> dict:
    F = fc.field
    rng = random.Random(seed)

    def rand_poly():
        deg = rng.randint(0, 4)
        return TSeries.from_coeffs(F, [
            LaurentU.from_coeffs(F, rng.randint(-3, 2), [rng.randrange(F.order) for _ in range(3)])
            for _ in range(deg + 1)
        ])

    ok = True
    for _ in range(count):
        f, g = rand_poly(), rand_poly()
        for k in k_list:
            ok &= rho(f * g, k) == rho(f, k) @ rho(g, k)
            ok &= rho(f, k).twist(1) == rho(f.twist(1), k)
    return {"pass": bool(ok), "precision": "infinity", "residual_valuation": "infinity" if ok else 0}


def run_checks(cfg: dict) -> list[dict]:
    fc = make_fn_config(cfg)
    F = fc.field
    md = int(cfg.get("min_digits", 64))
    tt = TSeries.t_minus_theta(F)
    res: list[dict] = []
    Om, om = special_fn.omega_big(fc), special_fn.omega_small(fc)
    res.append(_guarded("specialfn/sigma_Omega",
                        lambda: residual_report(Om.twist(-1) - tt * Om), md))
    res.append(_guarded("specialfn/tau_omega",
                        lambda: residual_report(om.twist(1) - tt * om), md))
    res.append(_guarded("specialfn/Omega_theta_pi",
                        lambda: residual_report(Om.eval_at_theta() * special_fn.pi_tilde(fc) + 1), md))
    res.append(_guarded("rho/homomorphism_sample",
                        lambda: _rho_sample(fc, int(cfg.get("seed", 0)), cfg["k_list"]), md))
    for n in cfg["n_list"]:
        for k in cfg["k_list"]:
            res.append(_guarded(
                f"motives/tau_trivialization/n={n}/k={k}",
                lambda n=n, k=k: motives.verify_trivialization(
                    motives.prolong_motive(motives.carlitz_motive(F, n), k),
                    motives.prolong_trivialization(motives.carlitz_upsilon(fc, n), k)), md))
            res.append(_guarded(
                f"motives/sigma_trivialization/n={n}/k={k}",
                lambda n=n, k=k: motives.verify_trivialization(
                    motives.prolong_dual(motives.dual_carlitz_motive(F, n), k),
                    motives.prolong_trivialization(motives.carlitz_psi(fc, n), k)), md))
    for k in cfg["k_list"]:
        def tmod(k=k):
            E = motives.carlitz_tmodule(F, 1)
            P = motives.prolong_tmodule(E, k)
            ok = motives.is_nilpotent_shift(P.A[0]) and motives.transpose_duality_check(E, k)
            return {"pass": ok, "precision": "infinity"}
        res.append(_guarded(f"motives/tmodule/k={k}", tmod, md))
    for n in cfg["n_list"]:
        res.extend(_period_checks(n, fc, md))
    zetas = [z for z in F.elements() if z]
    for z in zetas:
        tag = z.index
        res.append(_guarded(f"torsion/omega/zeta={tag}",
                            lambda z=z: torsion.omega_at_zeta_relation(z, fc), md))
        for n in cfg["n_list"]:
            res.append(_guarded(f"torsion/hyper/zeta={tag}/n={n}",
                                lambda z=z, n=n: torsion.hyper_omega_at_zeta_relation(z, n, fc), md))
    return res


def summarize(results: list[dict]) -> int:
    statuses = {r["status"] for r in results}
    if "fail" in statuses:
        return EXIT_FAIL
    if "exhausted" in statuses:
        return EXIT_EXHAUSTED
    return EXIT_PASS


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _write(path: str | Path, text: str) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def write_csv(path: str, results: list[dict]) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["name", "status", "residual_valuation", "precision"])
            for r in results:
                w.writerow([r["name"], r["status"], r.get("residual_valuation", ""), r.get("precision", "")])
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from None


def emit_fixtures(cfg: dict, directory: str) -> list[str]:
    """Golden JSON files: special functions cut to N digits, period vectors, Carlitz descriptors."""
    fc = make_fn_config(cfg)
    F = fc.field
    N = fc.N
    files = {
        "config.json": {"field": F.to_json(), "special_fn": fc.to_json()},
        "Omega.json": special_fn.omega_big(fc).truncate_u(N).to_json(),
        "omega.json": special_fn.omega_small(fc).truncate_u(N).to_json(),
        "pi_tilde.json": special_fn.pi_tilde(fc).truncate(N).to_json(),
    }
    for n in cfg["n_list"]:
        pv = periods.period_coordinates(n, fc)
        pv.z = [x.truncate(N) for x in pv.z]
        files[f"periods_n{n}.json"] = pv.to_json()
    for k in cfg["k_list"]:
        files[f"carlitz_prolonged_k{k}.json"] = {
            "type": "motive",
            "rank": k + 1,
            "theta": motives.prolong_motive(motives.carlitz_motive(F), k).theta.to_json(),
        }
        E = motives.prolong_tmodule(motives.carlitz_tmodule(F), k)
        files[f"carlitz_tmodule_k{k}.json"] = {
            "type": "tmodule", "dim": E.dim, "A": [a.to_json() for a in E.A],
        }
    written = []
    for name in sorted(files):
        path = Path(directory) / name
        _write(path, _dump(files[name]))
        written.append(str(path))
    return written


def run_suite(config_path: str | None, out: str | None = None, csv_path: str | None = None,
              fixtures: str | None = None) -> int:
    cfg = load_config(config_path)
    results = run_checks(cfg)
    code = summarize(results)
    report = {
        "config": {k: cfg[k] for k in sorted(cfg) if k != "out"},
        "special_fn": make_fn_config(cfg).to_json(),
        "results": results,
        "exit_code": code,
    }
    target = out or cfg.get("out")
    if target:
        _write(target, _dump(report))
    else:
        sys.stdout.write(_dump(report))
    if csv_path:
        write_csv(csv_path, results)
    if fixtures:
        emit_fixtures(cfg, fixtures)
    return code


# -- subcommands ------------------------------------------------------------
def _emit(obj, path: str | None) -> None:
    if path:
        _write(path, _dump(obj))
    else:
        sys.stdout.write(_dump(obj))


def _fn_cfg_from_args(a) -> special_fn.SpecialFnConfig:
    N = env_precision(a.N)
    return special_fn.SpecialFnConfig.create(a.q, a.d, N, M=a.M, J=getattr(a, "J", None))


def cmd_specialfn(a) -> int:
    fc = _fn_cfg_from_args(a)
    wanted = [w.strip() for w in a.emit.split(",") if w.strip()]
    makers = {
        "Omega": lambda: special_fn.omega_big(fc).truncate_u(fc.N).to_json(),
        "omega": lambda: special_fn.omega_small(fc).truncate_u(fc.N).to_json(),
        "pi": lambda: special_fn.pi_tilde(fc).truncate(fc.N).to_json(),
    }
    bad = [w for w in wanted if w not in makers]
    if bad:
        raise ConfigError(f"unknown quantities {bad}; choose from {sorted(makers)}")
    _emit({"config": fc.to_json(), **{w: makers[w]() for w in wanted}}, a.json)
    return EXIT_PASS


def cmd_periods(a) -> int:
    fc = special_fn.SpecialFnConfig.create(a.q, a.d, env_precision(a.N), M=a.M, n_max=max(a.n, 1))
    pv = periods.period_coordinates(a.n, fc)
    checks = {}
    results = []
    if a.n <= 4:
        results.append(record("toeplitz", periods.toeplitz_inverse_identity(a.n, fc, pv.z), a.min_digits))
    rep = periods.vanishing_pattern(a.n, fc)
    rep["precision"] = prec_to_json(_min_prec(pv.z))
    results.append(record("pattern", rep, a.min_digits))
    for r in results:
        checks[r["name"]] = r["status"]
    out = pv.to_json()
    out["checks"] = checks
    _emit(out, a.json)
    return summarize(results)


def cmd_torsion(a) -> int:
    fc = special_fn.SpecialFnConfig.create(a.q, a.d, env_precision(a.N), M=a.M, n_max=a.nmax)
    results = []
    for z in (z for z in fc.field.elements() if z):
        results.append(record(f"omega/zeta={z.index}", torsion.omega_at_zeta_relation(z, fc), a.min_digits))
        for n in range(1, a.nmax + 1):
            results.append(record(f"hyper/zeta={z.index}/n={n}",
                                  torsion.hyper_omega_at_zeta_relation(z, n, fc), a.min_digits))
    _emit({"config": fc.to_json(), "results": results}, a.json)
    if a.csv:
        write_csv(a.csv, results)
    return summarize(results)


def cmd_prolong(a) -> int:
    from .base_arith import FieldParams

    F = FieldParams.create(a.q, a.d)
    if a.type == "motive":
        M = motives.prolong_motive(motives.carlitz_motive(F, a.n), a.k)
        out = {"type": "motive", "rank": M.rank, "theta": M.theta.to_json()}
    elif a.type == "dual":
        M = motives.prolong_dual(motives.dual_carlitz_motive(F, a.n), a.k)
        out = {"type": "dual", "rank": M.rank, "theta_tilde": M.theta_tilde.to_json(),
               "det": M.theta_tilde.det().to_json()}
    else:
        E = motives.prolong_tmodule(motives.carlitz_tmodule(F, a.n), a.k)
        out = {"type": "tmodule", "dim": E.dim, "A": [m.to_json() for m in E.A],
               "nilpotent": motives.is_nilpotent_shift(E.A[0])}
    _emit(out, a.json)
    return EXIT_PASS


def cmd_verify(a) -> int:
    fc = special_fn.SpecialFnConfig.create(a.q, a.d, env_precision(a.N), M=a.M,
                                           n_max=a.n, k_max=a.k)
    F = fc.field
    results = [
        record("tau_side", motives.verify_trivialization(
            motives.prolong_motive(motives.carlitz_motive(F, a.n), a.k),
            motives.prolong_trivialization(motives.carlitz_upsilon(fc, a.n), a.k)), a.min_digits),
        record("sigma_side", motives.verify_trivialization(
            motives.prolong_dual(motives.dual_carlitz_motive(F, a.n), a.k),
            motives.prolong_trivialization(motives.carlitz_psi(fc, a.n), a.k)), a.min_digits),
    ]
    _emit({"config": fc.to_json(), "results": results}, a.json)
    return summarize(results)


def cmd_suite(a) -> int:
    return run_suite(a.config, a.out, a.csv, a.emit_fixtures)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="carlitz-prolong", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, N=96):
        p.add_argument("--q", type=int, default=2)
        p.add_argument("--d", type=int, default=1)
        p.add_argument("--N", type=int, default=N, help="target u-precision")
        p.add_argument("--M", type=int, default=None, help="stored t-coefficients")
        p.add_argument("--json", default=None, help="write JSON here instead of stdout")
        p.add_argument("--min-digits", type=int, default=64, dest="min_digits")

    p = sub.add_parser("specialfn", help="emit Omega, omega, pi")
    common(p)
    p.add_argument("--J", type=int, default=None)
    p.add_argument("--emit", default="Omega,omega,pi")
    p.set_defaults(func=cmd_specialfn)

    p = sub.add_parser("periods", help="period coordinates of the n-th tensor power")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("torsion", help="root relations at roots of unity")
    common(p)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("prolong", help="prolong a Carlitz descriptor")
    common(p)
    p.add_argument("--type", choices=["motive", "dual", "tmodule"], default="motive")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_prolong)

    p = sub.add_parser("verify", help="check prolonged Carlitz trivializations")
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("suite", help="run every verifier from a config file")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--emit-fixtures", default=None, dest="emit_fixtures", metavar="DIR")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PrecisionExhausted, PrecisionLoss) as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (DivergentEvaluation, CarlitzError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL if isinstance(exc, CarlitzError) else EXIT_CONFIG


__all__ = ["main", "run_suite", "run_checks", "load_config", "record", "emit_fixtures", "summarize"]
