"""Command-line front end.

Every command writes CSV (``--out``, default stdout) and/or a JSON report
(``--json``; ``-`` for stdout). Each run carries a manifest recording the
command line, the space, the package version and a SHA-256 of the primary
output, so ``rankone rerun MANIFEST`` can confirm a bit-identical rerun.

Exit codes: 0 success, 1 rerun mismatch, 2 invalid input, 3 excluded
spectral parameter, 4 strict classification failure, 5 numerical failure.

Worker threads for grid sweeps: RANKONE_WORKERS (default: all cores).
Output order never depends on scheduling.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import __version__
from . import harish_chandra as hc
from . import radial, rellich
from .errors import (ExcludedParameterError, NumericalError, PoleError,
                     RankOneError, ValidationError)
from .parsing import parse_complex, parse_grid
from .space import RankOneSpace, jacobian, make_space

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_VALIDATION = 2
EXIT_EXCLUDED = 3
EXIT_STRICT = 4
EXIT_NUMERICAL = 5

WORKERS_ENV = "RANKONE_WORKERS"
MODEL_ALIASES = {
    "phi": "phi", "phi+": "big_phi_plus", "Phi+": "big_phi_plus", "big_phi_plus": "big_phi_plus",
    "phi-": "big_phi_minus", "Phi-": "big_phi_minus", "big_phi_minus": "big_phi_minus",
    "mode": "mode",
}
_OUTPUT_FLAGS = ("--out", "--json")


class StrictFailure(RankOneError):
    pass


def fmt(x) -> str:
    return "%.17g" % x


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (fmt(v) if isinstance(v, (float, np.floating)) else v)
                    for v in r])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise ValidationError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValidationError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
        return n
    return os.cpu_count() or 1


@contextmanager
def ordered_map():
    n = workers()
    if n == 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=n) as ex:
        yield ex.map


# --- argument helpers -------------------------------------------------------

def _space(args) -> RankOneSpace:
    if args.mg is not None or args.m2g is not None:
        if args.family is not None:
            raise ValidationError("give either --family or --mg/--m2g, not both")
        return RankOneSpace(args.mg if args.mg is not None else 0,
                            args.m2g if args.m2g is not None else 0)
    return make_space(args.family or "real:3")


def _lambdas(text):
    return [parse_complex(s) for s in str(text).split(";") if s.strip()]


def _model(name) -> str:
    try:
        return MODEL_ALIASES[name]
    except KeyError:
        raise ValidationError(f"unknown model {name!r}; choose from {sorted(MODEL_ALIASES)}") from None


def _p(text) -> float:
    s = str(text).strip().lower()
    if s in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return float(s)
    except ValueError:
        raise ValidationError(f"p must be a number or 'inf', got {text!r}") from None


def _pair(c):
    return [c.real, c.imag]


# --- commands ---------------------------------------------------------------

def cmd_space(args):
    sp = _space(args)
    ts = parse_grid(args.t)
    payload = dict(sp.descriptor())
    payload["jacobian"] = [{"t": t, "J": float(jacobian(sp, t))} for t in ts]
    return None, payload


def cmd_phi(args):
    sp = _space(args)
    lam = parse_complex(args.lam)
    ts = parse_grid(args.t)
    want_series = args.method in ("series", "both")
    want_ode = args.method in ("ode", "both")
    series = ode = None
    if want_series:
        series = np.atleast_1d(hc.spherical_phi_series(sp, lam, ts, tol=args.tol))
    if want_ode:
        ode = radial.solve_forward(sp, lam, grid=ts).u
        # solve_forward sorts and dedups; map back to the requested order
        order = sorted(set(float(t) for t in ts))
        ode = np.array([ode[order.index(float(t))] for t in ts])
    rows = []
    worst = 0.0
    for i, t in enumerate(ts):
        s = complex(series[i]) if want_series else None
        o = complex(ode[i]) if want_ode else None
        rd = None
        if want_series and want_ode:
            rd = abs(s - o) / abs(o) if o != 0 else math.inf
            worst = max(worst, rd)
        rows.append([float(t), s.real if s is not None else None, s.imag if s is not None else None,
                     o.real if o is not None else None, o.imag if o is not None else None, rd])
    text = _csv(["t", "re_series", "im_series", "re_ode", "im_ode", "rel_diff"], rows)
    payload = {"lambda": _pair(lam), "method": args.method, "points": len(ts)}
    if want_series and want_ode:
        payload["max_rel_diff"] = worst
    return text, payload


def cmd_annulus(args):
    sp = _space(args)
    kind = _model(args.model)
    f = rellich.ModelEigenfunction(kind, sp, parse_complex(args.lam),
                                   radial.as_mode(args.mode, sp) if kind == "mode" else None)
    R = parse_grid(args.R)
    with ordered_map() as m:
        rep = rellich.classify(f, args.p, R, rtol=args.rtol, mapper=m)
    text = _csv(["R", "log_mass"], zip(rep.R_grid, rep.log_masses))
    payload = rep.as_dict()
    if args.strict and (rep.measured_class == rellich.INDETERMINATE or not rep.agrees):
        raise StrictFailure(f"measured class {rep.measured_class} vs predicted {rep.predicted_class}",
                            )
    return text, payload


def cmd_spectrum(args):
    sp = _space(args)
    p = _p(args.p)
    pts = []
    if args.points:
        pts.extend(_lambdas(args.points))
    if args.re_grid or args.im_grid:
        re_g = parse_grid(args.re_grid or "0:0:1")
        im_g = parse_grid(args.im_grid or "0:0:1")
        pts.extend(complex(a, b) for b in im_g for a in re_g)
    if not pts:
        raise ValidationError("give --points and/or --re-grid/--im-grid")
    rows = [[w.real, w.imag, int(rellich.lp_spectrum_contains(sp, p, w))] for w in pts]
    text = _csv(["re_w", "im_w", "inside"], rows)
    payload = {"p": p, "gamma_p": rellich.gamma_p(p), "rho": sp.rho,
               "inside_count": sum(r[2] for r in rows), "points": len(rows)}
    return text, payload


def cmd_hardy(args):
    sp = _space(args)
    kind = _model(args.model)
    f = rellich.ModelEigenfunction(kind, sp, parse_complex(args.lam),
                                   radial.as_mode(args.mode, sp) if kind == "mode" else None)
    res = rellich.hardy_functional(f, _p(args.p), args.eps, parse_grid(args.t))
    text = _csv(["t", "running_sup"], zip(res.t_grid, res.running_sup))
    payload = {"sup_value": res.sup_value, "divergence_flag": res.divergence_flag,
               "half_ratio": res.ratio, "threshold": res.threshold, "eps": args.eps,
               "model": f.describe()}
    return text, payload


def cmd_mode(args):
    sp = _space(args)
    lam = parse_complex(args.lam)
    mode = radial.as_mode(args.mode, sp)
    ta, tb, tc = (float(x) for x in args.probes.split(","))
    grid = sorted(set(parse_grid(args.t)) | {ta, tb, tc})
    u = radial.checked(radial.solve_forward(sp, lam, mode, grid=grid))
    u1, u2 = (radial.checked(x) for x in radial.frame_solutions(sp, lam, mode, grid=grid))
    cc = radial.connection_coefficients(u, (u1, u2), ta, tb, tc)
    rows = [[t, u.u[i].real, u.u[i].imag, u1.u[i].real, u1.u[i].imag, u2.u[i].real, u2.u[i].imag]
            for i, t in enumerate(u.grid)]
    text = _csv(["t", "re_u", "im_u", "re_u1", "im_u1", "re_u2", "im_u2"], rows)
    payload = {
        "lambda": _pair(lam), "mode": [mode.p, mode.q],
        "c1": _pair(cc.c1), "c2": _pair(cc.c2), "conditioning": cc.conditioning,
        "cross_check_defect": cc.defect, "probes": list(cc.probes),
        "residual": {"u": u.residual_sup, "u1": u1.residual_sup, "u2": u2.residual_sup},
        "valid": u.valid and u1.valid and u2.valid,
    }
    if not payload["valid"]:
        raise NumericalError(f"solution residual above {radial.RESIDUAL_LIMIT}: {payload['residual']}")
    return text, payload


def cmd_cfun(args):
    sp = _space(args)
    lams = _lambdas(args.lam)
    if not lams:
        raise ValidationError("no lambda values given")
    with ordered_map() as m:
        cs = list(m(lambda l: hc.c_function(sp, l, args.formula), lams))
    rows = [[l.real, l.imag, c.real, c.imag] for l, c in zip(lams, cs)]
    text = _csv(["re_lambda", "im_lambda", "re_c", "im_c"], rows)
    payload = {"formula": args.formula, "kappa": _pair(hc.kappa(sp, args.formula)),
               "values": [{"lambda": _pair(l), "c": _pair(c)} for l, c in zip(lams, cs)]}
    return text, payload


# --- parser -----------------------------------------------------------------

def _add_space(p):
    g = p.add_argument_group("space")
    g.add_argument("--family", help="preset such as real:3, complex:2, quaternionic:2, octonionic")
    g.add_argument("--mg", type=int, help="multiplicity m_gamma")
    g.add_argument("--m2g", type=int, help="multiplicity m_2gamma")


def _add_outputs(p, csv_out=True):
    if csv_out:
        p.add_argument("--out", default="-", help="CSV destination (default stdout)")
    p.add_argument("--json", default=None if csv_out else "-",
                   help="JSON report destination ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rankone", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", help="multiplicities, rho, dimension and sample J(t)")
    _add_space(p)
    p.add_argument("--t", default="0.5,1,2,5", help="t values for the Jacobian")
    _add_outputs(p, csv_out=False)
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("phi", help="spherical function by series, ODE, or both")
    _add_space(p)
    p.add_argument("--lambda", dest="lam", required=True, help="spectral parameter, e.g. 1+0.5i")
    p.add_argument("--t", default="1:10:0.25", help="t grid (a:b:step or comma list)")
    p.add_argument("--method", choices=("series", "ode", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-10, help="series tolerance")
    _add_outputs(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("annulus", help="annulus L^p masses and growth class")
    _add_space(p)
    p.add_argument("--model", default="phi+", help="phi, phi+, phi-, or mode")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--mode", default="0,0", help="p,q for --model mode")
    p.add_argument("--R", default="4:12:1", help="radii grid")
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--strict", action="store_true",
                   help="exit 4 if the class is Indeterminate or differs from the prediction")
    _add_outputs(p)
    p.set_defaults(func=cmd_annulus)

    p = sub.add_parser("spectrum", help="membership in the L^p spectrum region")
    _add_space(p)
    p.add_argument("--p", default="2", help="exponent (number or inf)")
    p.add_argument("--points", default=None, help="semicolon-separated complex points")
    p.add_argument("--re-grid", dest="re_grid", default=None, help="a:b:step for Re w")
    p.add_argument("--im-grid", dest="im_grid", default=None, help="a:b:step for Im w")
    _add_outputs(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hardy", help="Hardy-type functional and divergence witness")
    _add_space(p)
    p.add_argument("--model", default="phi+")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--p", default="inf")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--mode", default="0,0")
    p.add_argument("--t", default="1:40:0.25")
    _add_outputs(p)
    p.set_defaults(func=cmd_hardy)

    p = sub.add_parser("mode", help="frames and connection coefficients of one mode")
    _add_space(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mode", default="0,0")
    p.add_argument("--t", default="1:10:0.25")
    p.add_argument("--probes", default="1,1.5,1.25", help="t_a,t_b,t_c")
    _add_outputs(p)
    p.set_defaults(func=cmd_mode)

    p = sub.add_parser("cfun", help="Harish-Chandra c-function on a lambda list")
    _add_space(p)
    p.add_argument("--lambda", dest="lam", required=True, help="semicolon-separated list")
    p.add_argument("--formula", choices=hc.C_FORMULAS, default=hc.DEFAULT_C_FORMULA)
    _add_outputs(p)
    p.set_defaults(func=cmd_cfun)

    p = sub.add_parser("rerun", help="re-execute a manifest and compare checksums")
    p.add_argument("manifest", help="manifest JSON (a report or a .manifest.json sidecar)")
    p.set_defaults(func=None)
    return ap


def _strip_outputs(argv):
    out = []
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in _OUTPUT_FLAGS:
            skip = True
            continue
        if any(a.startswith(f + "=") for f in _OUTPUT_FLAGS):
            continue
        out.append(a)
    return out


def checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def run(argv):
    """Parse and execute; returns (args, csv_text, payload, manifest)."""
    args = build_parser().parse_args(argv)
    if args.command == "rerun":
        raise ValidationError("rerun cannot be nested")
    text, payload = args.func(args)
    primary = text if text is not None else _dumps(payload)
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "out", "json", "command")}
    manifest = {
        "command": args.command,
        "argv": _strip_outputs(list(argv)),
        "space": _space(args).descriptor(),
        "parameters": params,
        "version": __version__,
        "checksum": checksum(primary),
    }
    return args, text, payload, manifest


def _write(dest, text):
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _rerun(path) -> int:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    man = doc.get("manifest", doc)
    _, _, _, fresh = run(man["argv"])
    same = fresh["checksum"] == man["checksum"]
    sys.stdout.write(_dumps({"match": same, "expected": man["checksum"],
                             "actual": fresh["checksum"], "version": __version__,
                             "recorded_version": man.get("version")}))
    return EXIT_OK if same else EXIT_MISMATCH


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv[:1] == ["rerun"]:
            args = build_parser().parse_args(argv)
            return _rerun(args.manifest)
        args, text, payload, manifest = run(argv)
        if text is not None:
            _write(args.out, text)
            if args.out != "-":
                _write(args.out + ".manifest.json", _dumps(manifest))
        if args.json is not None:
            report = dict(payload)
            report["manifest"] = manifest
            _write(args.json, _dumps(report))
        return EXIT_OK
    except StrictFailure as e:
        print(f"rankone: strict mode: {e}", file=sys.stderr)
        return EXIT_STRICT
    except (ExcludedParameterError, PoleError) as e:
        print(f"rankone: excluded spectral parameter: {e}", file=sys.stderr)
        return EXIT_EXCLUDED
    except ValidationError as e:
        print(f"rankone: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as e:
        print(f"rankone: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError, KeyError) as e:
        print(f"rankone: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
