"""Command-line front end: ``ceresa3 <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import autgroup as ag
from . import ggcomplex as gg
from . import multilinear as ml
from . import quartic as qr
from . import theta as th
from .exactnum import parse_rational
from .verify import (SUITES, RunConfig, _jsonable, all_passed,
                     envelope, klein_verify)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input loaders


def _read_json(text_or_path: str):
    """Accept inline JSON or a path to a JSON file."""
    p = Path(text_or_path)
    try:
        text = p.read_text() if p.exists() else text_or_path
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {text_or_path!r}: {exc}") from None


def load_quartic(arg: Optional[str]) -> qr.QuarticCoefficients:
    if arg is None or arg == "klein":
        return qr.KLEIN
    if arg == "fermat":
        return qr.FERMAT
    return qr.parse_quartic(_read_json(arg))


def load_tau(arg: Optional[str]) -> th.PeriodMatrix:
    if arg is None or arg == "generic":
        return th.generic_tau()
    return th.PeriodMatrix.from_json(_read_json(arg))


def load_rational_matrix(arg: str) -> ml.Matrix:
    data = _read_json(arg)
    return [[parse_rational(x) for x in row] for row in data]


def parse_h(arg: Optional[str]) -> qr.DegreeTwoElement:
    """``"p0,p1,p2,q01,q02,q12"`` for ``Σ p_j e_j² + 2 Σ q_jk e_j e_k``."""
    if not arg:
        return qr.DegreeTwoElement.zero()
    parts = [parse_rational(x.strip()) for x in arg.split(",")]
    if len(parts) != 6:
        raise InputError("h needs six comma-separated rationals p0,p1,p2,q01,q02,q12")
    return qr.DegreeTwoElement(parts[:3], parts[3:])


def _form_json(M: ml.Matrix) -> dict:
    return qr.summarize(M).to_json()


# ---------------------------------------------------------------------------
# commands returning a result dict


def cmd_complex(args, config: RunConfig) -> dict:
    c = gg.build_complex(args.p)
    out = {"p": args.p, "term_dims": list(c.dims), "d_squared_zero": gg.dd_is_zero(c),
           "ranks": list(gg.differential_ranks(c)), "homology_dims": list(gg.homology_dims(c))}
    if c.dims[0] and c.dims[2]:
        cs = gg.cocycle_spaces(c)
        out.update(cocycle_dim=cs.cocycle_dim, coboundary_dim=cs.coboundary_dim)
    return out


def cmd_qc(args, config) -> dict:
    return _form_json(qr.qc_matrix(load_quartic(args.quartic)))


def cmd_rc(args, config) -> dict:
    return _form_json(qr.rc_matrix(parse_h(args.h)))


def cmd_dc(args, config) -> dict:
    return qr.dc_matrix(load_quartic(args.quartic), parse_h(args.h)).to_json()


def cmd_roundtrip(args, config) -> dict:
    f = load_quartic(args.quartic)
    back = qr.quartic_from_form(qr.qc_matrix(f))
    return {"quartic": f.to_json(), "recovered": back.to_json(), "equal": back == f}


def cmd_change_basis(args, config) -> dict:
    res = qr.change_coordinates(load_quartic(args.quartic), load_rational_matrix(args.matrix))
    return {"quartic": res.quartic.to_json(), "form": _form_json(res.form)}


def _group(args):
    try:
        return ag.klein_group(args.generators)
    except InputError:
        raise
    except Exception as exc:
        raise InputError(f"closure failed: {exc}") from None


def cmd_group_order(args, config) -> dict:
    G = _group(args)
    return {"order": G.order, "closed": G.is_closed() if args.check_closed else None}


def cmd_group_preserves(args, config) -> dict:
    G = _group(args)
    cert = ag.preserves_quartic(G, load_quartic(args.quartic))
    scalars = sorted({repr(s) for s in cert.scalars})
    return {"preserved": cert.preserved, "distinct_scalars": scalars}


def cmd_group_multiplicity(args, config) -> dict:
    G = _group(args)
    return {"module": args.module, "multiplicity": ag.trivial_multiplicity(G, args.module),
            "character_norm": ag.character_norm(G, args.module)}


def cmd_group_invariants(args, config) -> dict:
    G = _group(args)
    basis = ag.invariant_subspace(G, args.module)
    out = {"module": args.module, "dim": len(basis),
           "basis": [[x.to_json() for x in v] for v in basis]}
    if args.module in ("S4B", "S⁴B") and len(basis) == 1:
        lam = ag.proportional_to(ag.s4b_vector_to_quartic(basis[0]), load_quartic(args.quartic))
        out["proportional_to_quartic"] = lam is not None
        out["ratio"] = lam.to_json() if lam is not None else None
    return out


def cmd_theta(args, config) -> dict:
    alpha = th.ThetaChar.parse(args.char)
    v = th.theta_constant(alpha, load_tau(args.tau), config.eps, config.precision)
    return {"char": str(alpha), "even": alpha.is_even, "value": _jsonable(complex(v.value)),
            "eps": v.eps, "radius": v.radius}


def cmd_chi18(args, config) -> dict:
    v = th.chi18(load_tau(args.tau), config.eps, config.precision)
    return {"value": _jsonable(complex(v.value)), "abs": abs(complex(v.value)),
            "log_abs": v.log_abs, "rel_err_bound": v.rel_err}


def cmd_min_null(args, config) -> dict:
    m = th.min_theta_null(load_tau(args.tau), config.eps, args.threshold, config.precision)
    return {"char": str(m.char), "modulus": m.modulus,
            "hyperelliptic_candidate": m.hyperelliptic_candidate, "threshold": m.threshold}


def cmd_transform_check(args, config) -> dict:
    shift = np.array(load_rational_matrix(args.shift), dtype=float) if args.shift else None
    if args.kind == "translation" and shift is None:
        shift = np.diag([1.0, 0.0, 0.0])
    r = th.transform_check(load_tau(args.tau), args.kind, shift, config.eps, config.precision)
    return r.to_json()


def cmd_cusp_order(args, config) -> dict:
    ts = [float(x) for x in args.t_samples.split(",")] if args.t_samples else None
    f = th.cusp_order(load_tau(args.tau), ts, args.direction, config.eps, config.precision,
                      control=args.control)
    return {"slope": f.slope, "intercept": f.intercept, "residual": f.residual,
            "t": list(f.ts), "neg_log_abs_chi18": list(f.neg_log_abs), "fitted_from": f.fitted_from}


# ---------------------------------------------------------------------------
# parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--eps", type=float, default=d(1e-10), help="absolute/relative error target")
    p.add_argument("--precision", type=int, default=d(None),
                   help="working digits (>15 switches to mpmath)")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")
    p.add_argument("--format", choices=("json", "text"), default=d("json"))
    p.add_argument("--out", default=d(None), help="write output here instead of stdout")
    p.add_argument("--timings", action="store_true", default=d(False),
                   help="include runtimes in reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ceresa3", description=__doc__)
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("complex", cmd_complex, "dims, ranks and homology of Gr_F^p")
    sp.add_argument("--p", type=int, choices=(0, 1, 2), default=0)

    quartic_help = "quartic JSON (inline or path), or 'klein' / 'fermat'"
    h_help = "S²A element p0,p1,p2,q01,q02,q12"
    add("qc", cmd_qc, "Q_C matrix of a quartic").add_argument("--quartic", help=quartic_help)
    add("rc", cmd_rc, "R_C matrix of an S²A element").add_argument("--h", help=h_help)
    sp = add("dc", cmd_dc, "D_C = Q_C + R_C")
    sp.add_argument("--quartic", help=quartic_help)
    sp.add_argument("--h", help=h_help)
    add("roundtrip", cmd_roundtrip, "recover the quartic from Q_C").add_argument(
        "--quartic", help=quartic_help)
    sp = add("change-basis", cmd_change_basis, "quartic and form after x -> g x")
    sp.add_argument("--quartic", help=quartic_help)
    sp.add_argument("--matrix", required=True, help="3x3 rational matrix JSON")

    for name, fn, help_ in (("group-order", cmd_group_order, "closure order"),
                            ("group-preserves", cmd_group_preserves, "quartic invariance"),
                            ("group-multiplicity", cmd_group_multiplicity, "trivial multiplicity"),
                            ("group-invariants", cmd_group_invariants, "fixed subspace")):
        sp = add(name, fn, help_)
        sp.add_argument("--generators", help="generators JSON path (default: bundled)")
        if name == "group-order":
            sp.add_argument("--check-closed", action="store_true")
        if name in ("group-preserves", "group-invariants"):
            sp.add_argument("--quartic", help=quartic_help)
        if name in ("group-multiplicity", "group-invariants"):
            sp.add_argument("--module", default="S4B",
                            help=f"one of {sorted(ag.MODULES)} or a sum like 'A+B'")

    tau_help = "period matrix JSON {re, im} (inline or path); default: the generic test point"
    sp = add("theta", cmd_theta, "one theta constant")
    sp.add_argument("--char", default="000;000", help="characteristic as mu;nu bits")
    sp.add_argument("--tau", help=tau_help)
    add("chi18", cmd_chi18, "product of the even theta constants").add_argument(
        "--tau", help=tau_help)
    sp = add("min-null", cmd_min_null, "smallest even theta constant")
    sp.add_argument("--tau", help=tau_help)
    sp.add_argument("--threshold", type=float, default=th.DEFAULT_THRESHOLD)
    sp = add("transform-check", cmd_transform_check, "modulus laws of chi18")
    sp.add_argument("--tau", help=tau_help)
    sp.add_argument("--kind", choices=("translation", "inversion"), default="translation")
    sp.add_argument("--shift", help="integral symmetric 3x3 JSON (default E11)")
    sp = add("cusp-order", cmd_cusp_order, "vanishing order of chi18 at the cusp")
    sp.add_argument("--tau", help=tau_help)
    sp.add_argument("--t-samples", help="comma-separated increasing t values")
    sp.add_argument("--direction", type=int, choices=(0, 1, 2), default=0)
    sp.add_argument("--control", action="store_true")

    sp = add("klein-verify", None, "Klein quartic and its automorphism group")
    sp.add_argument("--generators", help="generators JSON path (default: bundled)")
    sp = add("coho-verify", None, "cohomology of the complexes")
    sp.add_argument("--trials", type=int, default=20, help="random equivariance trials")
    add("chi18-verify", None, "theta constants and chi18")
    return parser


# ---------------------------------------------------------------------------
# output


def _render_text(doc: dict) -> str:
    lines = [f"ceresa3 {doc['version']}  {doc['command']}"]
    lines.append("config: " + ", ".join(f"{k}={v}" for k, v in doc["config"].items()))
    if "checks" in doc:
        width = max(len(c["name"]) for c in doc["checks"])
        for c in doc["checks"]:
            mark = "PASS" if c["pass"] else "FAIL"
            computed = _display(c["computed"])
            extra = f"  [{c['note']}]" if c.get("note") else ""
            lines.append(f"{mark}  {c['name']:<{width}}  expected {_display(c['expected'])}"
                         f" ({c['provenance']})  got {computed}{extra}")
        lines.append("all passed" if doc["passed"] else "FAILURES")
    else:
        for k, v in doc["result"].items():
            lines.append(f"{k}: {_display(v)}")
    return "\n".join(lines) + "\n"


def _display(v) -> str:
    if isinstance(v, str) and "/" in v:
        try:
            return f"{v} (~{float(Fraction(v)):.6g})"
        except (ValueError, ZeroDivisionError):
            return v
    if isinstance(v, float):
        return f"{v:.10g}"
    return json.dumps(v, ensure_ascii=False) if isinstance(v, (list, dict)) else str(v)


def _emit(doc: dict, config: RunConfig) -> None:
    if config.format == "text":
        text = _render_text(doc)
    else:
        text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.with_env(eps=args.eps, precision=args.precision, seed=args.seed,
                                    output=args.out, format=args.format,
                                    trials=getattr(args, "trials", 20), timings=args.timings)
    except ValueError as exc:
        parser.error(str(exc))

    try:
        if args.command in SUITES:
            if args.command == "klein-verify":
                reports = klein_verify(config, args.generators)
            else:
                reports = SUITES[args.command](config)
            ok = all_passed(reports)
            doc = envelope(args.command, config,
                           {"checks": [r.to_json(config.timings) for r in reports], "passed": ok})
        else:
            result = args.func(args, config)
            ok = True
            doc = envelope(args.command, config, {"result": result, "passed": ok})
    except th.ValidationError as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return EXIT_INPUT
    except (InputError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    _emit(doc, config)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
