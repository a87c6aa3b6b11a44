"""Command line interface: ``oddpart <subcommand> ...``.

Exit status is 0 on success, 1 when an operation raises (the error class name
goes to stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .analysis import decay_fit, gamma_limit_probe, liminf_probe, tau_bracket
from .errors import OddPartError
from .families import parse_family_spec
from .np_spectrum import (default_precision, nystrom_oracle, solve_xi0,
                          spectrum_table, weyl_coefficient)
from .partition import enumerate_family

ENUMERATE_COLUMNS = ["j", "a_j", "c_j", "origin_N", "origin_k"]
RESULT_COLUMNS = ["family", "quantity", "p_or_window", "value", "bound", "margin"]


class UsageError(Exception):
    pass


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _json(obj):
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def _svg(j, a, fit=None, title=""):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "oddpart"
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(j, a, ".", ms=2, label="a_j")
    if fit is not None:
        lo, hi = fit.window
        xs = [lo, hi]
        ax.loglog(xs, [fit.C_hat * x**fit.alpha_hat for x in xs], "-",
                  label=f"{fit.C_hat:.4g} j^{fit.alpha_hat:.4g}")
    ax.set_xlabel("j")
    ax.set_ylabel("a_j")
    ax.set_title(title)
    ax.legend()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def _family(args):
    try:
        return parse_family_spec(args.family, precision=args.precision)
    except (ValueError, KeyError, OSError) as err:
        if isinstance(err, OddPartError):
            raise
        raise UsageError(f"bad --family {args.family!r}: {err}") from err


def _need(fmt, allowed):
    if fmt not in allowed:
        raise UsageError(f"format {fmt!r} not available here (use one of {', '.join(allowed)})")


# -- subcommands -------------------------------------------------------------

def cmd_enumerate(args):
    fam = _family(args)
    items = enumerate_family(fam, args.count)
    if args.format == "svg":
        return _svg(range(1, len(items) + 1), [float(v) for v, _ in items], title=fam.name)
    rows = []
    for j, (v, (N, k)) in enumerate(items, 1):
        r = math.isqrt(j)
        c = r * v if r * r == j and isinstance(v, Fraction) else math.sqrt(j) * float(v)
        rows.append({"j": j, "a_j": v, "c_j": c, "origin_N": N, "origin_k": k})
    if args.format == "json":
        return _json(rows)
    return _csv(ENUMERATE_COLUMNS, rows)


def cmd_decay(args):
    fam = _family(args)
    window = tuple(args.window)
    fit = decay_fit(fam, window)
    if args.format == "svg":
        values = enumerate_family(fam, window[1], origins=False)
        return _svg(range(1, len(values) + 1), [float(v) for v in values], fit, fam.name)
    if args.format == "json":
        return _json({"family": fam.name, "C_hat": fit.C_hat, "alpha_hat": fit.alpha_hat,
                      "window": list(window), "residual": fit.residual,
                      "method": fit.method, "C_powerlaw": fit.C_powerlaw})
    w = f"{window[0]}:{window[1]}"
    odd = fam.kind == "odd"
    rows = [
        {"family": fam.name, "quantity": "C_hat", "p_or_window": w, "value": fit.C_hat,
         "bound": 0.5 if odd else None, "margin": fit.C_hat - 0.5 if odd else None},
        {"family": fam.name, "quantity": "alpha_hat", "p_or_window": w, "value": fit.alpha_hat},
        {"family": fam.name, "quantity": "residual", "p_or_window": w, "value": fit.residual},
    ]
    return _csv(RESULT_COLUMNS, rows)


def cmd_tau(args):
    _need(args.format, ("csv", "json"))
    fam = _family(args)
    b = tau_bracket(fam, args.p, args.rows)
    if args.format == "json":
        return _json({"family": fam.name, "p": b.p, "lower": b.lower, "upper": b.upper,
                      "rows_used": b.rows_used, "bound_ref": b.bound_ref})
    rows = [{"family": fam.name, "quantity": q, "p_or_window": b.p, "value": v,
             "bound": b.bound_ref, "margin": v - b.bound_ref}
            for q, v in (("lower", b.lower), ("upper", b.upper))]
    return _csv(RESULT_COLUMNS, rows)


def cmd_gamma(args):
    _need(args.format, ("csv", "json"))
    probe = gamma_limit_probe(args.p or None)
    if args.format == "json":
        return _json({"values": [list(pv) for pv in probe.values],
                      "extrapolated": probe.extrapolated, "target": probe.target,
                      "error": probe.error})
    rows = [{"family": "", "quantity": "value", "p_or_window": p, "value": v,
             "bound": probe.target, "margin": v - probe.target} for p, v in probe.values]
    rows.append({"family": "", "quantity": "extrapolated", "p_or_window": 2.0,
                 "value": probe.extrapolated, "bound": probe.target, "margin": probe.error})
    return _csv(RESULT_COLUMNS, rows)


def cmd_liminf(args):
    _need(args.format, ("csv", "json"))
    fam = _family(args)
    res = liminf_probe(fam, args.window)
    if args.format == "json":
        return _json([{"family": fam.name, "window": list(w), "inf_c": v} for w, v in res])
    rows = [{"family": fam.name, "quantity": "inf_c", "p_or_window": f"{w[0]}:{w[1]}",
             "value": v, "bound": 0.5, "margin": v - 0.5} for w, v in res]
    return _csv(RESULT_COLUMNS, rows)


def cmd_np_eigen(args):
    _need(args.format, ("csv", "json"))
    lam = spectrum_table(args.xi0, args.n_max, args.precision)
    scale = 2.0 if args.doubled else 1.0
    rows = [{"n": n, "m": m, "lambda": scale * float(lam[n, abs(m)])}
            for n in range(args.n_max + 1) for m in range(-n, n + 1)]
    if args.format == "json":
        return _json(rows)
    return _csv(["n", "m", "lambda"], rows)


def cmd_np_weyl(args):
    _need(args.format, ("csv", "json"))
    report = weyl_coefficient(args.xi0, fit_window=tuple(args.window), fit=not args.no_fit,
                              precision=args.precision)
    d = report.to_dict()
    if args.format == "json":
        return _json(d)
    fit = d["fit"] or {}
    row = {k: d[k] for k in ("xi0", "willmore", "chi", "coeff", "coeff_doubled")}
    row.update({"C_hat": fit.get("C_hat"), "alpha_hat": fit.get("alpha_hat"),
                "window": ":".join(map(str, fit["window"])) if fit else None,
                "residual": fit.get("residual")})
    return _csv(list(row), [row])


def cmd_np_solve(args):
    _need(args.format, ("csv", "json"))
    shape = solve_xi0(args.target, precision=args.precision)
    report = weyl_coefficient(shape, fit=False)
    row = {"target": args.target, "xi0": "inf" if shape.is_sphere else shape.xi0,
           "coeff_doubled": report.coeff_doubled}
    if args.format == "json":
        return _json(row)
    return _csv(list(row), [row])


def cmd_np_oracle(args):
    _need(args.format, ("csv", "json"))
    xi0 = math.inf if args.sphere else args.xi0
    if xi0 is None:
        raise UsageError("np oracle needs --xi0 or --sphere")
    approx = nystrom_oracle(xi0, mesh_size=args.nodes, k=args.k)
    n_need = math.isqrt(args.k) + 2
    lam = spectrum_table(xi0, n_need, args.precision)
    formula = sorted((float(lam[n, abs(m)]) for n in range(n_need + 1)
                      for m in range(-n, n + 1)), reverse=True)[: args.k]
    rows = [{"k": i + 1, "formula": f, "oracle": float(o), "diff": float(o) - f}
            for i, (f, o) in enumerate(zip(formula, approx))]
    if args.format == "json":
        return _json(rows)
    return _csv(["k", "formula", "oracle", "diff"], rows)


def cmd_verify(args):
    from .verify import run_checks

    lines, ok = run_checks()
    return "".join(lines), (0 if ok else 1)


# -- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    common.add_argument("--output", "-o", help="write here instead of stdout")
    common.add_argument("--precision", choices=("double", "extended"), default=None,
                        help="default from $ODDPART_PRECISION, else double")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", required=True,
                     help="equi | farey | spheroid:xi0=X | spheroid2:xi0=X | "
                          "custom:path.json | random:seed=S,conc=C")

    parser = argparse.ArgumentParser(prog="oddpart",
                                     description="Odd partitions of an interval and their decay.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common, fam], help="first terms a_j with origins")
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("decay", parents=[common, fam], help="power-law fit of a_j")
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"), default=(1000, 100000))
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("tau", parents=[common, fam], help="enclosure of tau(p)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--rows", type=int, default=1000)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("gamma-probe", parents=[common], help="limit probe as p -> 2+")
    p.add_argument("--p", type=float, nargs="*")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("liminf", parents=[common, fam], help="min of sqrt(j) a_j per window")
    p.add_argument("--window", type=int, nargs=2, action="append", metavar=("LO", "HI"),
                   required=True)
    p.set_defaults(func=cmd_liminf)

    np_p = sub.add_parser("np", help="Neumann-Poincaré spectra of prolate spheroids")
    np_sub = np_p.add_subparsers(dest="np_command", required=True)

    p = np_sub.add_parser("eigen", parents=[common], help="eigenvalue rows")
    p.add_argument("--xi0", type=float, required=True)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--doubled", action="store_true")
    p.set_defaults(func=cmd_np_eigen)

    p = np_sub.add_parser("weyl", parents=[common], help="Weyl coefficient report")
    p.add_argument("--xi0", type=float, required=True)
    p.add_argument("--window", type=int, nargs=2, default=(1000, 10000))
    p.add_argument("--no-fit", action="store_true")
    p.set_defaults(func=cmd_np_weyl)

    p = np_sub.add_parser("solve-c", parents=[common], help="shape for a target coefficient")
    p.add_argument("--target", type=float, required=True)
    p.set_defaults(func=cmd_np_solve)

    p = np_sub.add_parser("oracle", parents=[common], help="Nyström comparison table")
    p.add_argument("--xi0", type=float)
    p.add_argument("--sphere", action="store_true")
    p.add_argument("--nodes", type=int, default=2000)
    p.add_argument("--k", type=int, default=9)
    p.set_defaults(func=cmd_np_oracle)

    p = sub.add_parser("verify", parents=[common], help="run the built-in invariant checks")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "precision", None) is None and hasattr(args, "precision"):
        try:
            args.precision = default_precision()
        except ValueError as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
    try:
        result = args.func(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"oddpart: error: {err}", file=sys.stderr)
        return 2
    except OddPartError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1
    status = 0
    if isinstance(result, tuple):
        result, status = result
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
