"""Command-line interface: ``dispersive <command> [options]``.

Every experiment command accepts either ``--config FILE`` (INI) or flags;
flags are converted into the same configuration object, so both routes share
one code path.  Exit codes: 0 success, 2 a checked verdict failed, 1 usage or
input error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import ExperimentConfig
from .errors import DispersiveError
from .experiments import RUNNERS, run_config
from .io import json_text, write_csv, write_json, write_svg
from .selftest import run_selftest

MODEL_SHORTCUTS = ("mu", "alpha", "p", "b", "rho")


def _add_model(p):
    g = p.add_argument_group("model")
    g.add_argument("--model", help="phase kind: water_wave, abcd, bbm_kdv, ostrovsky, "
                                   "reduced_ostrovsky, ilw, power")
    g.add_argument("--delta", help="scaling parameter delta")
    for k in MODEL_SHORTCUTS:
        g.add_argument(f"--{k}", dest=f"model_{k}", help=f"model parameter {k}")
    g.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="extra model parameter (repeatable), e.g. --param a=-1")


def _add_outputs(p, svg=True):
    g = p.add_argument_group("output")
    g.add_argument("--config", help="INI experiment file; other flags are ignored")
    g.add_argument("--out-json", help="write the JSON summary here (default: stdout)")
    g.add_argument("--out-csv", help="write the data table as CSV")
    if svg:
        g.add_argument("--svg", help="write a log-log plot as SVG")
    g.add_argument("--threads", type=int, help="worker threads (default: env or 1)")


def _model_section(args):
    if args.model is None:
        raise DispersiveError("--model is required without --config")
    sec = {"kind": args.model, "delta": args.delta}
    for k in MODEL_SHORTCUTS:
        sec[k] = getattr(args, f"model_{k}")
    for item in args.param:
        if "=" not in item:
            raise DispersiveError(f"--param expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        sec[k.strip()] = v.strip()
    return sec


def build_parser():
    ap = argparse.ArgumentParser(prog="dispersive",
                                 description="Dispersive decay and smoothing experiments.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an (a,b,c,d) Boussinesq tuple")
    for k in "abcd":
        p.add_argument(f"--{k}", default="0", help=f"parameter {k} (accepts fractions like 1/3)")
    p.add_argument("--tol", default="1e-12", help="tolerance for boundary warnings")
    _add_outputs(p, svg=False)

    p = sub.add_parser("decay", help="measure sup_x |I| against t (or against delta)")
    _add_model(p)
    p.add_argument("--band", help="band spec, e.g. dyadic:0, halfline_low:1")
    p.add_argument("--s", default="0", help="symbol exponent s")
    p.add_argument("--n", default="1", help="spatial dimension 1 or 2")
    p.add_argument("--lemma", default="auto", help="force a specific estimate (default: best)")
    p.add_argument("--l", help="derivative order for the van der Corput estimates")
    p.add_argument("--t-min", default="10")
    p.add_argument("--t-max", default="1000")
    p.add_argument("--t-points", default="16")
    p.add_argument("--mode", default="saturate", choices=["saturate", "upper"],
                   help="saturate: |slope+sigma|<=tol; upper: slope<=-sigma+tol")
    p.add_argument("--tolerance", default="0.05")
    p.add_argument("--x-max", help="spatial search half-width")
    p.add_argument("--delta-scaling", action="store_true",
                   help="fix t and fit sup_x |I| against delta instead")
    p.add_argument("--t", default="10", help="time for --delta-scaling")
    p.add_argument("--delta-min", default="1e-3")
    p.add_argument("--delta-max", default="1e-1")
    p.add_argument("--delta-points", default="8")
    _add_outputs(p)

    p = sub.add_parser("strichartz", help="Strichartz quotients over a data family")
    _add_model(p)
    p.add_argument("--band")
    p.add_argument("--s", default="0")
    p.add_argument("--n", default="1")
    p.add_argument("--lemma", default="auto")
    p.add_argument("--q", help="time exponent (default: admissible pair with r=4)")
    p.add_argument("--r", help="space exponent")
    p.add_argument("--ks", help="comma separated dyadic shifts")
    p.add_argument("--deltas", help="comma separated delta values")
    p.add_argument("--T", default="20", help="time window [0, T]")
    p.add_argument("--n-t", default="64")
    p.add_argument("--N", help="grid points per axis (power of two)")
    p.add_argument("--L", help="grid half-width")
    p.add_argument("--spread-max", default="10")
    _add_outputs(p, svg=False)

    p = sub.add_parser("smoothing", help="Kato smoothing and local energy decay")
    _add_model(p)
    p.add_argument("--mode", default="kato_scaling",
                   choices=["kato_scaling", "supx_window", "local_energy"])
    p.add_argument("--n", default="1")
    p.add_argument("--N", default="4096")
    p.add_argument("--L", default="256")
    p.add_argument("--width", default="4", help="Gaussian data width parameter")
    p.add_argument("--a-values", default="0.1, 1, 10")
    p.add_argument("--a", default="1")
    p.add_argument("--T", default="100")
    p.add_argument("--deltas", help="comma separated deltas for local_energy")
    p.add_argument("--t-max", default="200")
    p.add_argument("--t-points", default="41")
    _add_outputs(p)

    p = sub.add_parser("propagate", help="apply exp(i t g(delta|D|)) to grid data")
    _add_model(p)
    p.add_argument("--t", required=False, default="1")
    p.add_argument("--input", help="binary grid file (default: Gaussian data)")
    p.add_argument("--output", help="write the propagated grid here")
    p.add_argument("--n", default="1")
    p.add_argument("--N", default="1024")
    p.add_argument("--L", default="64")
    p.add_argument("--width", default="1")
    p.add_argument("--sign", default="1", choices=["1", "-1"])
    p.add_argument("--form", default="exp_ig", choices=["exp_ig", "sign_split"])
    p.add_argument("--zero-mean", action="store_true")
    _add_outputs(p, svg=False)

    p = sub.add_parser("selftest", help="fast invariant checks (deterministic output)")
    p.add_argument("--full", action="store_true", help="larger random samples")
    p.add_argument("--out-json", help="write the report here (default: stdout)")

    p = sub.add_parser("run", help="run any INI experiment file")
    p.add_argument("config")
    p.add_argument("--out-json")
    p.add_argument("--out-csv")
    p.add_argument("--svg")
    p.add_argument("--threads", type=int)
    return ap


def _sections(args):
    cmd = args.command
    if cmd == "classify":
        return {"experiment": {"kind": "classify"},
                "classify": {"a": args.a, "b": args.b, "c": args.c, "d": args.d,
                             "tol": args.tol}}
    model = _model_section(args)
    if cmd == "decay":
        common = {"s": args.s, "n": args.n, "lemma": args.lemma, "l": args.l,
                  "x_max": args.x_max, "tolerance": args.tolerance}
        if args.delta_scaling:
            return {"experiment": {"kind": "delta_scaling"}, "model": model,
                    "band": {"spec": args.band},
                    "delta_scaling": {**common, "t": args.t, "delta_min": args.delta_min,
                                      "delta_max": args.delta_max,
                                      "delta_points": args.delta_points}}
        return {"experiment": {"kind": "decay"}, "model": model, "band": {"spec": args.band},
                "decay": {**common, "mode": args.mode, "t_min": args.t_min,
                          "t_max": args.t_max, "t_points": args.t_points}}
    if cmd == "strichartz":
        return {"experiment": {"kind": "strichartz"}, "model": model,
                "band": {"spec": args.band},
                "strichartz": {"s": args.s, "n": args.n, "lemma": args.lemma, "q": args.q,
                               "r": args.r, "ks": args.ks, "deltas": args.deltas, "T": args.T,
                               "n_t": args.n_t, "N": args.N, "L": args.L,
                               "spread_max": args.spread_max}}
    if cmd == "smoothing":
        return {"experiment": {"kind": "smoothing"}, "model": model,
                "data": {"N": args.N, "L": args.L, "width": args.width},
                "smoothing": {"mode": args.mode, "n": args.n, "a_values": args.a_values,
                              "a": args.a, "T": args.T, "deltas": args.deltas,
                              "t_max": args.t_max, "t_points": args.t_points}}
    if cmd == "propagate":
        return {"experiment": {"kind": "propagate"}, "model": model,
                "data": {"N": args.N, "L": args.L, "width": args.width},
                "propagate": {"t": args.t, "input": args.input, "output": args.output,
                              "n": args.n, "sign": args.sign, "form": args.form,
                              "zero_mean": "true" if args.zero_mean else None}}
    raise DispersiveError(f"unknown command {cmd}")


def _emit(outcome, args):
    payload = dict(outcome.summary)
    text = json_text(payload)
    if getattr(args, "out_json", None):
        write_json(args.out_json, payload)
    else:
        sys.stdout.write(text)
    if getattr(args, "out_csv", None) and outcome.header:
        write_csv(args.out_csv, outcome.header, outcome.rows)
    if getattr(args, "svg", None) and outcome.series:
        write_svg(args.svg, outcome.series, title=outcome.kind, xlabel=outcome.plot_labels[0],
                  ylabel=outcome.plot_labels[1])


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None):
        import os
        os.environ["DISPERSIVE_THREADS"] = str(args.threads)
    try:
        if args.command == "selftest":
            ok, report = run_selftest(quick=not args.full)
            text = json_text(report)
            if args.out_json:
                write_json(args.out_json, report)
            else:
                sys.stdout.write(text)
            return 0 if ok else 2
        if args.command == "run":
            outcome = run_config(args.config)
        elif getattr(args, "config", None):
            cfg = ExperimentConfig.load(args.config)
            kind = cfg.get_str("experiment", "kind", choices=set(RUNNERS))
            expected = {"decay": ("decay", "delta_scaling")}.get(args.command, (args.command,))
            if kind not in expected:
                raise cfg.error("experiment", "kind",
                                f"file describes a {kind!r} experiment, not {args.command!r}")
            outcome = RUNNERS[kind](cfg)
        else:
            outcome = RUNNERS[_sections(args)["experiment"]["kind"]](
                ExperimentConfig.from_dict(_sections(args)))
        _emit(outcome, args)
        return outcome.status
    except DispersiveError as exc:
        sys.stderr.write(f"dispersive: error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"dispersive: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
