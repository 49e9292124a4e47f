"""Command-line front end.

Every experiment is exposed as a subcommand producing a machine-readable
table (CSV by default, JSON on request) with the full configuration echoed
in a leading comment, so identical invocations give byte-identical output.
With ``--plot`` the same report is also rendered to a PNG next to the
delimited output.

Subcommands:
  bounds-table   block spectra vs analytic bounds over an r sweep
  cond-table     condition number of the recovery system over an r sweep
  eig-vs-N       largest eigenvalues as the missing run grows
  eig-vs-r       selected eigenvalues as functions of the oversampling ratio
  eig-vs-m       selected eigenvalues as functions of the interleaving factor
  recover        recover missing samples of the built-in test signal
  reconstruct    rebuild the signal on a grid from recovered samples
  spectrum       full spectrum of the system matrix plus reality diagnostics

Exit codes: 0 success, 2 configuration/validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg, recovery, signals, system
from .kernels import OneChannelParams, TwoChannelParams

OUTDIR_ENV = "OVERSAMP_OUTDIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_DEFAULT_EIG_INDICES = "1,5,10,11,15,20"


class ConfigError(ValueError):
    """Invalid or inconsistent command-line configuration."""


@dataclass
class Report:
    """A finished experiment: column-oriented rows plus config echo."""

    kind: str
    config: dict
    columns: list
    rows: list
    summary: Optional[dict] = None
    warnings: list = field(default_factory=list)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _canonical_config(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(", ", ": "))


def render_csv(report: Report) -> str:
    lines = [f"# config: {_canonical_config(report.config)}"]
    if report.summary is not None:
        lines.append(f"# summary: {_canonical_config(report.summary)}")
    for w in report.warnings:
        lines.append(f"# warning: {w}")
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(report: Report) -> str:
    payload = {
        "config": report.config,
        "columns": report.columns,
        "rows": [list(r) for r in report.rows],
    }
    if report.summary is not None:
        payload["summary"] = report.summary
    if report.warnings:
        payload["warnings"] = list(report.warnings)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _parse_int_list(text: str, what: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"could not parse {what} {text!r}: expected comma-separated integers") from exc


def _parse_float_list(text: str, what: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"could not parse {what} {text!r}: expected comma-separated numbers") from exc


def _missing_from_args(args, default: Optional[str]) -> Optional[system.MissingSet]:
    """Build the missing set from --missing or --m/--base (explicit list wins)."""
    if getattr(args, "missing", None):
        idx = _parse_int_list(args.missing, "--missing")
        if not idx:
            return None
        return system.MissingSet.from_indices(idx)
    if getattr(args, "base", None):
        base = _parse_int_list(args.base, "--base")
        if not base:
            return None
        return system.MissingSet.interleaved(int(getattr(args, "m", 1) or 1), base)
    if default is None:
        return None
    return system.MissingSet.from_indices(_parse_int_list(default, "default missing set"))


def _missing_config(u: Optional[system.MissingSet]) -> dict:
    if u is None:
        return {"indices": []}
    cfg = {"indices": list(u.indices)}
    if u.factorization is not None:
        m, base = u.factorization
        cfg["m"] = m
        cfg["base"] = list(base)
    return cfg


def _noise_from_args(args) -> Optional[recovery.NoiseSpec]:
    mag = getattr(args, "noise_magnitude", None)
    if mag is None:
        return None
    if mag < 0:
        raise ConfigError(f"--noise-magnitude must be nonnegative, got {mag}")
    return recovery.NoiseSpec(magnitude=mag, seed=getattr(args, "noise_seed", 0))


def _eig_selection(spec_text: str, total: int) -> list:
    """Resolve 1-based eigenvalue indices; 'max' means the largest."""
    sel = []
    for tok in spec_text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok == "max":
            sel.append(total)
            continue
        try:
            i = int(tok)
        except ValueError as exc:
            raise ConfigError(f"bad eigenvalue index {tok!r} (integer or 'max')") from exc
        if not 1 <= i <= total:
            raise ConfigError(f"eigenvalue index {i} outside 1..{total}")
        sel.append(i)
    if not sel:
        raise ConfigError("empty eigenvalue index selection")
    return sel


def _selection_labels(spec_text: str) -> list:
    return [tok.strip() for tok in spec_text.split(",") if tok.strip()]


# ---------------------------------------------------------------- commands


def cmd_bounds_table(args) -> Report:
    r_values = _parse_float_list(args.r, "--r")
    base = _parse_int_list(args.base, "--base")
    m = args.m
    config = {
        "command": "bounds-table",
        "r": r_values,
        "omega": args.omega,
        "m": m,
        "base": base,
        "format": args.format,
    }
    columns = ["r", "block", "bound_low", "lam_min", "lam_max", "bound_high", "triangular"]
    rows = []
    for r in r_values:
        u = system.MissingSet.interleaved(m, base)
        p = TwoChannelParams.from_ratio(args.omega, r)
        S = system.two_channel_matrix(p, u)
        s11, _, _, s22 = system.split_blocks(S)
        e11 = linalg.eig_symmetric(s11)
        e22 = linalg.eig_symmetric(s22)
        if system.is_integer_ratio_case(m, r):
            rows.append((r, "s11", "", e11.lam_min, e11.lam_max, "", "triangular"))
            rows.append((r, "s22", "", e22.lam_min, e22.lam_max, "", "triangular"))
            continue
        b = system.eig_bounds(m, r)
        rows.append((r, "s11", b.alpha11_low, e11.lam_min, e11.lam_max, b.alpha11_high, ""))
        rows.append((r, "s22", b.beta22_low, e22.lam_min, e22.lam_max, b.beta22_high, ""))
    return Report(kind="bounds-table", config=config, columns=columns, rows=rows)


def cmd_cond_table(args) -> Report:
    r_values = _parse_float_list(args.r, "--r")
    u = _missing_from_args(args, default="0,1,2,3,4,5,6,7,8,9")
    if u is None:
        raise ConfigError("cond-table needs a non-empty missing set")
    config = {
        "command": "cond-table",
        "r": r_values,
        "omega": args.omega,
        "missing": _missing_config(u),
        "format": args.format,
    }
    columns = ["r", "cond", "trust"]
    rows = []
    warnings = []
    for r in r_values:
        p = TwoChannelParams.from_ratio(args.omega, r)
        S = system.two_channel_matrix(p, u)
        cond = linalg.spectral_condition(np.eye(S.shape[0]) - S)
        flag = "beyond-float64" if linalg.beyond_trust(cond) else ""
        if flag:
            warnings.append(f"r={r:g}: condition number {cond:.3e} beyond float64 trust limit")
        rows.append((r, cond, flag))
    return Report(kind="cond-table", config=config, columns=columns, rows=rows, warnings=warnings)


def _eig_sweep_rows(sweep_name, sweep_values, matrices, selection_text):
    """Shared shape for the three eigenvalue sweeps: wide rows of re/im pairs."""
    labels = _selection_labels(selection_text)
    columns = [sweep_name]
    for lab in labels:
        columns += [f"lam{lab}_re", f"lam{lab}_im"]
    rows = []
    for val, S in zip(sweep_values, matrices):
        spec = linalg.eig_general(S)
        sel = _eig_selection(selection_text, S.shape[0])
        row = [val]
        for i in sel:
            ev = spec.eigenvalues[i - 1]
            row += [float(ev.real), float(ev.imag)]
        rows.append(tuple(row))
    return columns, rows


def cmd_eig_vs_n(args) -> Report:
    r_values = _parse_float_list(args.r, "--r")
    if args.n_min < 1 or args.n_max < args.n_min:
        raise ConfigError(f"need 1 <= n-min <= n-max, got {args.n_min}..{args.n_max}")
    config = {
        "command": "eig-vs-N",
        "r": r_values,
        "omega": args.omega,
        "m": args.m,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "eig_indices": args.eig_indices,
        "format": args.format,
    }
    labels = _selection_labels(args.eig_indices)
    columns = ["N", "r"]
    for lab in labels:
        columns += [f"lam{lab}_re", f"lam{lab}_im"]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        u = system.MissingSet.interleaved(args.m, list(range(n)))
        for r in r_values:
            p = TwoChannelParams.from_ratio(args.omega, r)
            S = system.two_channel_matrix(p, u)
            spec = linalg.eig_general(S)
            sel = _eig_selection(args.eig_indices, S.shape[0])
            row = [n, r]
            for i in sel:
                ev = spec.eigenvalues[i - 1]
                row += [float(ev.real), float(ev.imag)]
            rows.append(tuple(row))
    return Report(kind="eig-vs-N", config=config, columns=columns, rows=rows)


def cmd_eig_vs_r(args) -> Report:
    r_values = _parse_float_list(args.r, "--r")
    base = _parse_int_list(args.base, "--base")
    config = {
        "command": "eig-vs-r",
        "r": r_values,
        "omega": args.omega,
        "m": args.m,
        "base": base,
        "eig_indices": args.eig_indices,
        "format": args.format,
    }
    u = system.MissingSet.interleaved(args.m, base)
    mats = [
        system.two_channel_matrix(TwoChannelParams.from_ratio(args.omega, r), u)
        for r in r_values
    ]
    columns, rows = _eig_sweep_rows("r", r_values, mats, args.eig_indices)
    return Report(kind="eig-vs-r", config=config, columns=columns, rows=rows)


def cmd_eig_vs_m(args) -> Report:
    m_values = _parse_int_list(args.m_list, "--m-list")
    base = _parse_int_list(args.base, "--base")
    config = {
        "command": "eig-vs-m",
        "r": args.r,
        "omega": args.omega,
        "m_list": m_values,
        "base": base,
        "eig_indices": args.eig_indices,
        "format": args.format,
    }
    p = TwoChannelParams.from_ratio(args.omega, args.r)
    mats = [
        system.two_channel_matrix(p, system.MissingSet.interleaved(m, base))
        for m in m_values
    ]
    columns, rows = _eig_sweep_rows("m", m_values, mats, args.eig_indices)
    return Report(kind="eig-vs-m", config=config, columns=columns, rows=rows)


def _result_summary(res: recovery.RecoveryResult) -> dict:
    return {
        "lambda": res.lambda_used,
        "residual_norm": res.residual_norm,
        "condition": res.condition_estimate,
        "delta": res.delta,
        "warnings": list(res.warnings),
    }


def cmd_recover(args) -> Report:
    u = _missing_from_args(args, default=None)
    noise = _noise_from_args(args)
    config = {
        "command": "recover",
        "channel": args.channel,
        "r": args.r,
        "omega": args.omega,
        "missing": _missing_config(u),
        "M": args.M,
        "noise": None if noise is None else {"magnitude": noise.magnitude, "seed": noise.seed},
        "regularize": bool(args.regularize),
        "format": args.format,
    }
    columns = ["x", "channel", "truth", "recovered", "rel_error"]
    if u is None:
        return Report(kind="recover", config=config, columns=columns, rows=[], summary={"empty": True})

    sig = signals.test_signal_g()
    if args.channel == "one":
        p = OneChannelParams.from_ratio(args.omega, args.r)
        res = recovery.recover_one_channel(
            p, u, sig, M=args.M, noise=noise, regularize=args.regularize, delta=args.delta
        )
    else:
        p = TwoChannelParams.from_ratio(args.omega, args.r)
        if args.channel == "two":
            res = recovery.recover_two_channel(
                p, u, sig, M=args.M, noise=noise, regularize=args.regularize, delta=args.delta
            )
        elif args.channel == "function":
            res = recovery.recover_function_channel(p, u, sig, M=args.M)
        else:
            res = recovery.recover_derivative_channel(p, u, sig, M=args.M)

    xs = u.as_array() * p.t_o
    rows = []
    if res.function is not None:
        truth = sig.value(xs)
        rec = res.function_values()
        _, rel = signals.error_metrics(truth, rec)
        for x, t, v, e in zip(xs, truth, rec, rel):
            rows.append((float(x), "f", float(t), float(v), float(e)))
    if res.derivative is not None:
        truth = sig.derivative(xs)
        rec = res.derivative_values()
        _, rel = signals.error_metrics(truth, rec)
        for x, t, v, e in zip(xs, truth, rec, rel):
            rows.append((float(x), "df", float(t), float(v), float(e)))
    return Report(
        kind="recover",
        config=config,
        columns=columns,
        rows=rows,
        summary=_result_summary(res),
        warnings=list(res.warnings),
    )


def cmd_reconstruct(args) -> Report:
    u = _missing_from_args(args, default=None)
    noise = _noise_from_args(args)
    config = {
        "command": "reconstruct",
        "channel": args.channel,
        "r": args.r,
        "omega": args.omega,
        "missing": _missing_config(u),
        "M": args.M,
        "noise": None if noise is None else {"magnitude": noise.magnitude, "seed": noise.seed},
        "regularize": bool(args.regularize),
        "x_min": args.x_min,
        "x_max": args.x_max,
        "points": args.points,
        "format": args.format,
    }
    if args.points < 2:
        raise ConfigError(f"--points must be at least 2, got {args.points}")
    sig = signals.test_signal_g()
    grid = np.linspace(args.x_min, args.x_max, args.points)
    summary: dict = {}

    if args.channel == "one":
        p = OneChannelParams.from_ratio(args.omega, args.r)
        ns = np.arange(-args.M, args.M + 1)
        samples = dict(zip((int(n) for n in ns), sig.samples(ns, p.t_o)))
        if u is not None:
            res = recovery.recover_one_channel(
                p, u, sig, M=args.M, noise=noise, regularize=args.regularize, delta=args.delta
            )
            samples.update(res.function)
            summary = _result_summary(res)
        rec = signals.reconstruct_one_channel(p, samples, args.M, grid)
    else:
        p = TwoChannelParams.from_ratio(args.omega, args.r)
        ns = np.arange(-args.M, args.M + 1)
        samples = dict(zip((int(n) for n in ns), sig.samples(ns, p.t_o)))
        dsamples = dict(zip((int(n) for n in ns), sig.derivative_samples(ns, p.t_o)))
        if u is not None:
            res = recovery.recover_two_channel(
                p, u, sig, M=args.M, noise=noise, regularize=args.regularize, delta=args.delta
            )
            samples.update(res.function)
            dsamples.update(res.derivative)
            summary = _result_summary(res)
        rec = signals.reconstruct_two_channel(p, samples, dsamples, args.M, grid)

    truth = sig.value(grid)
    summary["max_abs_deviation"] = float(np.max(np.abs(rec - truth)))
    columns = ["x", "truth", "reconstructed"]
    rows = [(float(x), float(t), float(v)) for x, t, v in zip(grid, truth, rec)]
    return Report(kind="reconstruct", config=config, columns=columns, rows=rows, summary=summary)


def cmd_spectrum(args) -> Report:
    u = _missing_from_args(args, default=None)
    if u is None:
        raise ConfigError("spectrum needs a non-empty missing set (--missing or --m/--base)")
    config = {
        "command": "spectrum",
        "r": args.r,
        "omega": args.omega,
        "missing": _missing_config(u),
        "format": args.format,
    }
    p = TwoChannelParams.from_ratio(args.omega, args.r)
    S = system.two_channel_matrix(p, u)
    spec = linalg.eig_general(S)
    columns = ["index", "re", "im"]
    rows = [(i + 1, float(ev.real), float(ev.imag)) for i, ev in enumerate(spec.eigenvalues)]
    summary = {
        "max_imag_abs": spec.max_imag_abs,
        "outside_unit_interval": spec.count_outside_unit_interval(),
        "trace": float(np.trace(S)),
        "size": S.shape[0],
    }
    return Report(kind="spectrum", config=config, columns=columns, rows=rows, summary=summary)


# ------------------------------------------------------------------ driver


def _add_common(parser, *, with_missing=True, with_noise=False):
    parser.add_argument("--omega", type=float, default=math.pi, help="band edge (default: pi)")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--plot", action="store_true", help="also render a PNG next to --out")
    if with_missing:
        parser.add_argument("--missing", default=None, help="comma list of missing indices")
        parser.add_argument("--m", type=int, default=1, help="interleaving factor for --base")
        parser.add_argument("--base", default=None, help="comma list; missing set is m*base")
    if with_noise:
        parser.add_argument("--noise-magnitude", type=float, default=None, help="per-entry RMS of rhs noise")
        parser.add_argument("--noise-seed", type=int, default=0)
        parser.add_argument("--regularize", action="store_true", help="Tikhonov + discrepancy principle")
        parser.add_argument("--delta", type=float, default=None, help="explicit discrepancy target")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="oversamp", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    pb = sub.add_parser("bounds-table", help="block spectra vs analytic bounds")
    pb.add_argument("--r", default="0.55,0.6,0.7,0.8,0.9,0.95")
    pb.add_argument("--m", type=int, default=8)
    pb.add_argument("--base", default="0,1,2,3")
    _add_common(pb, with_missing=False)
    pb.set_defaults(func=cmd_bounds_table)

    pc = sub.add_parser("cond-table", help="condition numbers of the recovery system")
    pc.add_argument("--r", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    _add_common(pc)
    pc.set_defaults(func=cmd_cond_table)

    pn = sub.add_parser("eig-vs-N", aliases=["eig-vs-n"], help="largest eigenvalues vs number of missing samples")
    pn.add_argument("--r", default="0.3,0.5,0.7,0.9")
    pn.add_argument("--n-min", type=int, default=1)
    pn.add_argument("--n-max", type=int, default=12)
    pn.add_argument("--m", type=int, default=1)
    pn.add_argument("--eig-indices", default="max")
    _add_common(pn, with_missing=False)
    pn.set_defaults(func=cmd_eig_vs_n)

    pr = sub.add_parser("eig-vs-r", help="eigenvalues vs oversampling ratio")
    pr.add_argument("--r", default=",".join(f"{v/100:g}" for v in range(5, 100, 5)))
    pr.add_argument("--m", type=int, default=4)
    pr.add_argument("--base", default="0,1,2,3,4,5,6,7,8,9")
    pr.add_argument("--eig-indices", default=_DEFAULT_EIG_INDICES)
    _add_common(pr, with_missing=False)
    pr.set_defaults(func=cmd_eig_vs_r)

    pm = sub.add_parser("eig-vs-m", help="eigenvalues vs interleaving factor")
    pm.add_argument("--r", type=float, default=0.7)
    pm.add_argument("--m-list", default="2,4,8,16,32,64")
    pm.add_argument("--base", default="0,1,2,3,4,5,6,7,8,9")
    pm.add_argument("--eig-indices", default=_DEFAULT_EIG_INDICES)
    _add_common(pm, with_missing=False)
    pm.set_defaults(func=cmd_eig_vs_m)

    pv = sub.add_parser("recover", help="recover missing samples of the test signal")
    pv.add_argument("--channel", choices=("one", "two", "function", "derivative"), default="two")
    pv.add_argument("--r", type=float, required=True)
    pv.add_argument("--M", type=int, default=system.DEFAULT_TRUNCATION)
    _add_common(pv, with_noise=True)
    pv.set_defaults(func=cmd_recover)

    ps = sub.add_parser("reconstruct", help="reconstruct the test signal on a grid")
    ps.add_argument("--channel", choices=("one", "two"), default="one")
    ps.add_argument("--r", type=float, required=True)
    ps.add_argument("--M", type=int, default=system.DEFAULT_TRUNCATION)
    ps.add_argument("--x-min", type=float, default=-5.0)
    ps.add_argument("--x-max", type=float, default=5.0)
    ps.add_argument("--points", type=int, default=1001)
    _add_common(ps, with_noise=True)
    ps.set_defaults(func=cmd_reconstruct)

    pq = sub.add_parser("spectrum", help="spectrum of the system matrix")
    pq.add_argument("--r", type=float, required=True)
    _add_common(pq)
    pq.set_defaults(func=cmd_spectrum)

    return top


def _resolve_out(out: Optional[str]) -> Optional[str]:
    if out is None:
        return None
    base = os.environ.get(OUTDIR_ENV)
    if base and not os.path.isabs(out):
        return os.path.join(base, out)
    return out


def run(args) -> Report:
    return args.func(args)


def _merge_negative_values(argv):
    """Rewrite ["--missing", "-2,-1,0"] as ["--missing=-2,-1,0"].

    argparse would otherwise read a comma list starting with a negative
    number as an unknown option.
    """
    merged = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok.startswith("--")
            and "=" not in tok
            and nxt is not None
            and len(nxt) > 1
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            merged.append(f"{tok}={nxt}")
            skip = True
        else:
            merged.append(tok)
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    try:
        report = run(args)
    except (
        linalg.SingularMatrixError,
        linalg.NotSymmetricError,
        linalg.NoConvergenceError,
        linalg.DeltaTooLargeError,
        system.MissingKnownSampleError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = render_json(report) if args.format == "json" else render_csv(report)
    out = _resolve_out(args.out)
    if out is None:
        sys.stdout.write(text)
        if args.plot:
            print("error: --plot needs --out to name the image file", file=sys.stderr)
            return EXIT_CONFIG
    else:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if args.plot:
            from . import plots

            img = os.path.splitext(out)[0] + ".png"
            plots.render(report, img)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
