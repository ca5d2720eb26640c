"""Command-line front end.

Exit codes: 0 success, 1 failed check or out-of-range input, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dispersion as disp
from . import fieldsim as fs
from . import identities as ids
from . import polarization as pol

BANNER = "genmaxwell: natural units, c = hbar = 1"


class InputError(ValueError):
    """Argument parsed but out of range."""


def _vec3(text: str) -> tuple[float, float, float]:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected kx,ky,kz, got {text!r}")
    if len(parts) != 3 or not all(map(math.isfinite, parts)):
        raise argparse.ArgumentTypeError(f"expected three finite numbers, got {text!r}")
    return parts


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints3(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three integers, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three integers, got {text!r}")
    return parts


def _matrix4(text: str) -> np.ndarray:
    try:
        vals = [complex(x.replace(" ", "")) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("B must be 16 comma-separated complex numbers")
    if len(vals) != 16:
        raise argparse.ArgumentTypeError("B must have 16 entries (row-major 4x4)")
    return np.array(vals).reshape(4, 4)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InputError(msg)


def _finite(name: str, v: float, lo: float | None = None, strict: bool = False) -> None:
    _require(math.isfinite(v), f"{name} must be finite")
    if lo is not None:
        _require(v > lo if strict else v >= lo, f"{name} must be {'>' if strict else '>='} {lo}")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _csv(header, rows, seed=None) -> str:
    buf = io.StringIO()
    if seed is not None:
        buf.write(f"# seed={seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------

def cmd_identities(a) -> int:
    _require(a.samples >= 1, "--samples must be >= 1")
    _finite("--tol", a.tol, 0.0, strict=True)
    reports = ids.run_suite(a.samples, a.seed, a.tol)
    if a.format == "csv":
        rows = [(r.name, r.samples, r.seed, r.tolerance, r.max_residual, str(r.passed).lower())
                for r in reports]
        text = _csv(("name", "samples", "seed", "tolerance", "max_residual", "passed"), rows, a.seed)
    else:
        text = _json([r.to_dict() for r in reports])
    _emit(text, a.out)
    return 0 if all(r.passed for r in reports) else 1


def _spec_from_args(a) -> disp.EquationSpec:
    for name in ("m1", "m2", "m3"):
        _finite(f"--{name}", getattr(a, name), 0.0)
    fam = disp.Family(a.family)
    if fam is disp.Family.SPIN_S:
        raise InputError("spin-s is overdetermined and has no spectrum")
    if fam is disp.Family.CHIRAL_MASS:
        _require(a.B is not None, "chiral-mass needs --B")
        _require(bool(np.all(np.isfinite(a.B))), "--B must be finite")
    try:
        return disp.EquationSpec(fam, m1=a.m1, m2=a.m2, m3=a.m3, B=a.B)
    except ValueError as e:
        raise InputError(str(e))


def cmd_dispersion(a) -> int:
    spec = _spec_from_args(a)
    _require(a.workers >= 1, "--workers must be >= 1")
    momenta = list(a.k or [])
    seed = None
    if a.random:
        _require(a.random >= 1, "--random must be >= 1")
        _finite("--kmax", a.kmax, 0.0, strict=True)
        seed = a.seed
        rng = np.random.default_rng(a.seed)
        momenta += [tuple(v) for v in rng.uniform(-a.kmax, a.kmax, (a.random, 3))]
    _require(bool(momenta), "give at least one --k or --random N")
    results = disp.sweep(spec, momenta, workers=a.workers)
    ok = all(r.residual < 1e-8 for r in results)
    if a.require_massless:
        ok = ok and disp.is_massless(spec, momenta, a.massless_tol)
    if a.format == "json":
        text = _json([
            {"momentum": list(r.momentum), "seed": seed,
             "branches": [[float(E.real), float(E.imag)] for E in r.branches],
             "residual": r.residual}
            for r in results
        ])
    else:
        text = _csv(disp.CSV_COLUMNS, disp.sweep_rows(results), seed)
    _emit(text, a.out)
    return 0 if ok else 1


def _lorentz_ok(pv) -> bool:
    r = pol.lorentz_condition(pv)
    scale = max(1.0, float(np.max(np.abs(pv.u))) * float(np.max(np.abs(pv.momentum4))))
    expected = pv.N * pv.mass if pv.helicity is pol.Helicity.TIME else 0.0
    return abs(r - expected) < 1e-12 * scale


def cmd_polarization(a) -> int:
    _finite("--m", a.m, 0.0, strict=True)
    _finite("--N", a.N)
    sigmas = a.sigma or ["+1", "-1", "0", "0t"]
    try:
        vectors = [pol.polarization_vector(a.p, a.m, a.N, s) for s in sigmas]
    except ValueError as e:
        raise InputError(str(e))
    if a.format == "json":
        text = _json([dict(zip(pol.CSV_COLUMNS, row)) for row in pol.polarization_rows(vectors)])
    else:
        text = _csv(pol.CSV_COLUMNS, pol.polarization_rows(vectors))
    _emit(text, a.out)
    return 0 if all(_lorentz_ok(v) for v in vectors) else 1


def cmd_limits(a) -> int:
    _finite("--N", a.N)
    try:
        slopes = pol.limit_scan(a.p, a.sigma, a.N, a.masses)
    except ValueError as e:
        raise InputError(str(e))
    if a.format == "json":
        text = _json([{"component": mu, "exponent": s} for mu, s in enumerate(slopes)])
    else:
        text = _csv(("component", "exponent"),
                    [(mu, "n/a" if s is None else s) for mu, s in enumerate(slopes)])
    _emit(text, a.out)
    if a.expect is None:
        return 0
    return 0 if all(abs(s - a.expect) <= a.tol for s in slopes if s is not None) else 1


def cmd_proca(a) -> int:
    _finite("--m", a.m, 0.0, strict=True)
    _finite("--N", a.N)
    _finite("--E-offset", a.E_offset)
    try:
        pv = pol.polarization_vector(a.p, a.m, a.N, a.sigma)
    except ValueError as e:
        raise InputError(str(e))
    E = pv.energy + a.E_offset
    map_res = pol.renormalization_map_residual(a.p, E, pv.u, a.m)
    rows = []
    ok = map_res < 1e-12
    for variant in ("standard", "modified"):
        F, res = pol.proca_residual(variant, a.p, E, pv.u, a.m)
        # both variants give the same F up to the 2m rescaling of A
        w = pol.weinberg_residual(a.p, E, F, a.m)
        rows.append((variant, E, res, w, map_res))
        if a.E_offset == 0 and pv.helicity is not pol.Helicity.TIME:
            ok = ok and res < 1e-10 and w < 1e-10
    header = ("variant", "E", "proca_residual", "weinberg_residual", "map_residual")
    if a.format == "json":
        text = _json([dict(zip(header, r)) for r in rows])
    else:
        text = _csv(header, rows)
    _emit(text, a.out)
    return 0 if ok else 1


def _sim_params(a) -> dict:
    cfg = {}
    if a.config:
        try:
            cfg = fs.parse_config(Path(a.config).read_text())
        except OSError as e:
            raise InputError(f"cannot read config: {e}")
        except ValueError as e:
            raise InputError(str(e))
    conv = {
        "n": int, "L": float, "dt": float, "cfl": float, "dim": int, "steps": int,
        "cadence": int, "mode": str, "helicity": int, "c": float, "seed": int, "width": float,
        "k_index": lambda s: tuple(int(x) for x in s.split(",")),
        "diagnostics_out": str, "snapshot_out": str,
    }
    params = {}
    for key, value in cfg.items():
        try:
            params[key] = conv[key](value)
        except ValueError:
            raise InputError(f"bad value for {key}: {value!r}")
    flags = {
        "n": a.n, "L": a.L, "dt": a.dt, "cfl": a.cfl, "dim": a.dim, "steps": a.steps,
        "cadence": a.cadence, "mode": a.mode, "k_index": a.k_index, "helicity": a.helicity,
        "c": a.c, "seed": a.seed, "width": a.width, "diagnostics_out": a.out,
        "snapshot_out": a.snapshot_out,
    }
    params.update({k: v for k, v in flags.items() if v is not None})
    defaults = {"n": 64, "L": 1.0, "dim": 1, "steps": 256, "cadence": 16, "mode": "transverse",
                "k_index": (0, 0, 1), "helicity": 1, "c": 1.0, "seed": 0, "width": 0.1}
    for k, v in defaults.items():
        params.setdefault(k, v)
    return params


def cmd_simulate(a) -> int:
    p = _sim_params(a)
    _require(p["steps"] >= 1 and p["cadence"] >= 1, "steps and cadence must be >= 1")
    _require(p["helicity"] in (1, -1), "helicity must be +1 or -1")
    _require(p["mode"] in ("zero", "transverse", "longitudinal", "gaussian"),
             f"unknown mode {p['mode']!r}")
    try:
        grid = fs.GridSpec(p["n"], p["L"], p.get("dt"), p.get("cfl"), p["dim"], p["c"])
        mode = fs.mode_from_params(p["mode"], p["k_index"], p["helicity"], p["width"], p["seed"])
        fs.init(grid, mode)
    except ValueError as e:
        raise InputError(str(e))
    want_snap = bool(p.get("snapshot_out"))
    result = fs.run(grid, mode, p["steps"], p["cadence"], snapshots=want_snap)
    text = fs.diagnostics_csv(result.diagnostics)
    if p["mode"] == "gaussian":
        text = f"# seed={p['seed']}\n" + text
    _emit(text, p.get("diagnostics_out"))
    if want_snap:
        Path(p["snapshot_out"]).write_text("".join(fs.snapshot_csv(s, grid) for s in result.snapshots))
    finite = all(math.isfinite(v) for d in result.diagnostics for v in d.row()[:4])
    return 0 if finite else 1


# -- parser ------------------------------------------------------------------------

def _add_format(sp, default: str) -> None:
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json")
    g.add_argument("--csv", dest="format", action="store_const", const="csv")
    sp.set_defaults(format=default)
    sp.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genmaxwell",
        description="Identity checks, dispersion spectra, polarization vectors and "
                    "field simulations for generalised Maxwell/Weyl equations (c = hbar = 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("identities", help="randomised operator-identity residuals")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=ids.DEFAULT_TOL)
    _add_format(sp, "json")
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("dispersion", help="energy branches E(p) of an equation family")
    sp.add_argument("--family", required=True,
                    choices=[f.value for f in disp.Family if f is not disp.Family.SPIN_S])
    sp.add_argument("--m1", type=float, default=0.0)
    sp.add_argument("--m2", type=float, default=0.0)
    sp.add_argument("--m3", type=float, default=0.0)
    sp.add_argument("--B", type=_matrix4, help="16 comma-separated complex entries, row-major")
    sp.add_argument("--k", type=_vec3, action="append", help="momentum kx,ky,kz (repeatable)")
    sp.add_argument("--random", type=int, default=0, help="add N random momenta")
    sp.add_argument("--kmax", type=float, default=10.0, help="component bound for --random")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--require-massless", action="store_true",
                    help="fail unless |E^2 - p^2| < tol (1 + p^2) on every branch")
    sp.add_argument("--massless-tol", type=float, default=1e-9)
    _add_format(sp, "csv")
    sp.set_defaults(func=cmd_dispersion)

    sp = sub.add_parser("polarization", help="u^mu(p, sigma) table with Lorentz-condition residual")
    sp.add_argument("--sigma", action="append", choices=["+1", "-1", "0", "0t"])
    sp.add_argument("--p", type=_vec3, default=(0.0, 0.0, 1.0))
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--N", type=float, default=1.0)
    _add_format(sp, "csv")
    sp.set_defaults(func=cmd_polarization)

    sp = sub.add_parser("limits", help="m -> 0 growth exponents of u^mu components")
    sp.add_argument("--sigma", default="+1", choices=["+1", "-1", "0", "0t"])
    sp.add_argument("--p", type=_vec3, default=(5.0, -4.0, 6.0))
    sp.add_argument("--N", type=float, default=1.0)
    sp.add_argument("--masses", type=_floats, default=[1.0, 0.1, 0.01, 0.001])
    sp.add_argument("--expect", type=float, help="fail unless every exponent is within --tol of this")
    sp.add_argument("--tol", type=float, default=0.05)
    _add_format(sp, "csv")
    sp.set_defaults(func=cmd_limits)

    sp = sub.add_parser("proca", help="Proca-pair and Weinberg residuals for A = u(p, sigma)")
    sp.add_argument("--sigma", default="+1", choices=["+1", "-1", "0", "0t"])
    sp.add_argument("--p", type=_vec3, default=(0.3, -0.4, 1.2))
    sp.add_argument("--m", type=float, default=1.0)
    sp.add_argument("--N", type=float, default=1.0)
    sp.add_argument("--E-offset", dest="E_offset", type=float, default=0.0,
                    help="evaluate at E_p + offset (0 = on shell)")
    _add_format(sp, "csv")
    sp.set_defaults(func=cmd_proca)

    sp = sub.add_parser("simulate", help="evolve the chi-generalised Maxwell system")
    sp.add_argument("--config", help="key = value run configuration file")
    sp.add_argument("--n", type=int)
    sp.add_argument("--L", type=float)
    sp.add_argument("--dt", type=float)
    sp.add_argument("--cfl", type=float)
    sp.add_argument("--dim", type=int, choices=[1, 3])
    sp.add_argument("--steps", type=int)
    sp.add_argument("--cadence", type=int)
    sp.add_argument("--mode", choices=["zero", "transverse", "longitudinal", "gaussian"])
    sp.add_argument("--k-index", dest="k_index", type=_ints3)
    sp.add_argument("--helicity", type=int)
    sp.add_argument("--c", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--width", type=float)
    sp.add_argument("--out", help="diagnostics CSV path (default stdout)")
    sp.add_argument("--snapshot-out", dest="snapshot_out", help="field snapshot CSV path")
    sp.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    print(BANNER, file=sys.stderr)
    try:
        return args.func(args)
    except InputError as e:
        print(f"genmaxwell {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
