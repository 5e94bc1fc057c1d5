"""``curv forman|ollivier|maxmin|check <input.json>``.

Exit codes: 0 success, 1 a requested check failed, 2 unreadable input or bad
usage, 3 invalid complex (negative weight, bad cycle, degenerate omega).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import graphio
from .cellcomplex import (ComplexError, CycleError, MaxLength, attach_two_cells, edge_key,
                          enumerate_cycles, hodge_matrix, validate_complex, weight_vector)
from .curvature import (check_maxmin_dual, default_candidates, forman_all,
                        kantorovich_curvature, max_forman_edge, maxmin_forman, ollivier_edge,
                        ollivier_oneform, penalty_transport_curvature)
from .curvature._common import omega_vector
from .graphio import SCHEMA, GraphFormatError, encode_scalar
from .metric import DegenerateOmegaError
from .numerics import close

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
METHODS = ("potential", "oneform", "kantorovich", "penalty")


class UsageError(ValueError):
    pass


def _enc(x):
    if isinstance(x, dict):
        return {str(k): _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    return encode_scalar(x)


def _cell_name(x):
    if isinstance(x, tuple):
        return list(x)
    if hasattr(x, "vertices"):
        return list(x.vertices)
    return x


def _jobs(args) -> int:
    env = os.environ.get("CURV_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"CURV_JOBS must be an integer, got {env!r}")
    if args.jobs is not None:
        return max(1, args.jobs)
    return os.cpu_count() or 1


def _omega(gf, args):
    if not getattr(args, "omega", False):
        return None
    if gf.omega is None:
        raise UsageError("--omega given but the input has no 'omega' on its edges")
    return gf.omega


def _map(fn, tasks, jobs):
    """Run ``fn`` over ``tasks`` (serially when jobs == 1); output order follows input order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# per-edge work (top level so that it pickles)


def _oneform_complex(g, omega, e):
    cand = default_candidates(g, omega, e)
    return attach_two_cells(g, {z: 1 for z in cand})


def _edge_methods(data, e, methods, exact, use_omega, emit):
    gf = graphio.parse_graph(data)
    g, omega = gf.graph, (gf.omega if use_omega else None)
    out = {"edge": list(e)}
    vals = {}
    for meth in methods:
        if meth == "potential":
            cert = ollivier_edge(g, e, omega, exact=exact)
        elif meth == "oneform":
            cert = ollivier_oneform(_oneform_complex(g, omega, e), e, omega, exact=exact)
        elif meth == "kantorovich":
            cert = kantorovich_curvature(g, e, exact=exact)
        else:
            cert = penalty_transport_curvature(g, e, exact=exact)
        vals[meth] = cert.value if cert.finite else None
        rec = {"kappa": cert.value if cert.finite else "inf", "status": cert.status}
        if emit:
            rec["witness"] = _witness(cert)
        out[meth] = rec
    return out, vals


def _ollivier_task(args):
    data, e, methods, exact, use_omega, emit = args
    out, vals = _edge_methods(data, e, methods, exact, use_omega, emit)
    return _enc(out), _agree(list(vals.values()), exact)


def _coincidence_task(args):
    data, e, exact, use_omega = args
    gf = graphio.parse_graph(data)
    methods = ["potential", "oneform"] + ([] if use_omega else ["kantorovich", "penalty"])
    out, vals = _edge_methods(data, e, methods, exact, use_omega, False)
    omega = gf.omega if use_omega else None
    mf = max_forman_edge(gf.graph, e, omega=omega, exact=exact)
    vals["max_forman"] = mf.value if mf.finite else None
    out["max_forman"] = mf.value if mf.finite else "inf"
    ok = _agree(list(vals.values()), exact)
    out["agree"] = ok
    return _enc(out), ok


def _agree(values, exact):
    if any(v is None for v in values):
        return all(v is None for v in values)
    first = values[0]
    return all((v == first) if exact else close(v, first) for v in values)


def _witness(cert):
    w = cert.witness
    if "f" in w:
        return {"f": {str(k): encode_scalar(v) for k, v in w["f"].items()}}
    if "h" in w:
        return {"h": [{"edge": list(k), "h": encode_scalar(v)} for k, v in w["h"].items() if v != 0]}
    if "plan" in w:
        plan = w["plan"]
        rho = getattr(plan, "rho", None)
        if rho is None:
            rho = plan.xi
        return {"plan": [{"pair": list(p), "mass": encode_scalar(r)} for p, r in sorted(rho.items())]}
    return {}


# ---------------------------------------------------------------------------
# commands


def cmd_forman(gf, args):
    omega = _omega(gf, args)
    c = gf.complex
    k = args.dim
    if k > c.dim:
        raise UsageError(f"complex has no cells of dimension {k}")
    exact = args.exact
    plain = forman_all(c, k, None, exact)
    weighted = forman_all(c, k, omega, exact) if omega is not None and k == 1 else None
    rows = []
    for x in c.cells_of(k):
        rec = {"cell": _cell_name(x), "F": plain[x]}
        if weighted is not None:
            rec["F_omega"] = weighted[x]
        rows.append(rec)
    return {"command": "forman", "dim": k, "cells": rows}, EXIT_OK


def _selected_edges(gf, args):
    if args.edge:
        e = edge_key(*args.edge)
        if e not in gf.graph.edge_weights:
            raise UsageError(f"edge {args.edge} not in graph")
        return [e]
    return list(gf.graph.edges)


def cmd_ollivier(gf, args, data):
    omega = _omega(gf, args)
    methods = list(METHODS) if args.verify_all_methods else [args.method]
    if omega is not None:
        if any(m in ("kantorovich", "penalty") for m in methods) and not args.verify_all_methods:
            raise UsageError(f"method {args.method} supports only omega = 1")
        methods = [m for m in methods if m in ("potential", "oneform")]
    if omega is not None:
        bad = _degenerate(gf)
        if bad is not None:
            raise DegenerateOmegaError(bad)
    tasks = [(data, e, methods, args.exact, omega is not None, args.emit_witness)
             for e in _selected_edges(gf, args)]
    results = _map(_ollivier_task, tasks, _jobs(args))
    report = {"command": "ollivier", "methods": methods, "edges": [r for r, _ in results]}
    code = EXIT_OK
    if args.verify_all_methods:
        ok = all(a for _, a in results)
        report["all_methods_agree"] = ok
        code = EXIT_OK if ok else EXIT_FAIL
    return report, code


def _degenerate(gf):
    from .metric import find_degenerate_edge
    return find_degenerate_edge(gf.graph, gf.omega)


def _candidates(gf, args, omega):
    if args.shortcutting:
        return default_candidates(gf.graph, omega if omega is not None else None)
    if omega is not None and args.max_cycle_length is None:
        return default_candidates(gf.graph, omega)
    return enumerate_cycles(gf.graph, MaxLength(args.max_cycle_length or 5))


def cmd_maxmin(gf, args):
    omega = _omega(gf, args)
    if omega is not None:
        bad = _degenerate(gf)
        if bad is not None:
            raise DegenerateOmegaError(bad)
    cand = _candidates(gf, args, omega)
    cert = maxmin_forman(gf.graph, 1, cand, omega, exact=args.exact)
    out = {"command": "maxmin", "candidates": [list(z.vertices) for z in cand], "status": cert.status}
    if not cert.finite:
        return out, EXIT_FAIL
    w = cert.witness
    dual = w["dual_value"]
    checks = check_maxmin_dual(gf.graph, w["J"], cand, omega, exact=args.exact)
    out.update({
        "R_star": cert.value,
        "dual_value": dual,
        "primal_equals_dual": (dual == cert.value) if args.exact else close(dual, cert.value),
        "dual_conditions": {k: v for k, v in checks.items() if k != "objective"},
        "cycle_weights": [{"cycle": list(z.vertices), "m": v} for z, v in sorted(w["n"].items()) if v != 0],
    })
    opt = attach_two_cells(gf.graph, {z: v for z, v in w["n"].items()})
    fvals = forman_all(opt, 1, omega, args.exact)
    out["forman_at_optimum"] = [{"edge": list(e), "F": fvals[e]} for e in opt.cells_of(1)]
    if args.emit_witness:
        out["edges"] = [list(e) for e in w["edges"]]
        out["J"] = [[w["J"][i, j] for j in range(w["J"].shape[1])] for i in range(w["J"].shape[0])]
    ok = out["primal_equals_dual"] and all(out["dual_conditions"].values())
    return out, EXIT_OK if ok else EXIT_FAIL


def cmd_check(gf, args, data):
    from .analysis import check_diameter_bound, ollivier_semigroup_check, semigroup_contractivity_check

    omega = _omega(gf, args)
    wanted = [k for k in ("semigroup", "diameter", "coincidence") if getattr(args, k)]
    if not wanted:
        wanted = ["semigroup", "diameter", "coincidence"]
    if omega is not None:
        bad = _degenerate(gf)
        if bad is not None:
            raise DegenerateOmegaError(bad)
    c = gf.complex
    checks = {}
    if "semigroup" in wanted:
        if c.n_cells(1) == 0:
            checks["semigroup"] = {"applicable": False, "passed": True, "reason": "no edges"}
        else:
            H = hodge_matrix(c, 1, False)
            m = weight_vector(c, 1, False)
            om = omega_vector(c, 1, omega, False)
            base = semigroup_contractivity_check(H, m, 0.0, om)
            R = base.min_curvature
            rep = semigroup_contractivity_check(H, m, R, om)
            sharp = semigroup_contractivity_check(H, m, R + 0.01, om)
            kap = ollivier_semigroup_check(gf.graph, 0.0, omega)
            K = kap.min_curvature
            krep = ollivier_semigroup_check(gf.graph, K, omega)
            ksharp = ollivier_semigroup_check(gf.graph, K + 0.01, omega)
            passed = rep.passed and not sharp.derivative_ok and krep.passed and not ksharp.derivative_ok
            checks["semigroup"] = {
                "applicable": True, "passed": passed,
                "hodge": {"R": R, "contraction": rep.contraction_ok, "derivative": rep.derivative_ok,
                          "sharp_at_R_plus_0.01": not sharp.derivative_ok, "samples": rep.n_checks},
                "ollivier": {"R": K, "contraction": krep.contraction_ok, "derivative": krep.derivative_ok,
                             "sharp_at_R_plus_0.01": not ksharp.derivative_ok, "samples": krep.n_checks},
            }
    if "diameter" in wanted:
        rep = check_diameter_bound(c, omega, exact=args.exact)
        checks["diameter"] = {"applicable": rep.applicable, "passed": rep.passed, "R": rep.R,
                              "D0": rep.D0, "D1": rep.D1, "diam": rep.diam, "bound": rep.bound,
                              "reason": rep.reason}
    if "coincidence" in wanted:
        tasks = [(data, e, args.exact, omega is not None) for e in gf.graph.edges]
        results = _map(_coincidence_task, tasks, _jobs(args))
        checks["coincidence"] = {"passed": all(ok for _, ok in results), "edges": [r for r, _ in results]}
    passed = all(v["passed"] for v in checks.values())
    return {"command": "check", "passed": passed, "checks": checks}, EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# output


def _table(report) -> str:
    lines = []
    cmd = report["command"]
    if cmd == "forman":
        for rec in report["cells"]:
            extra = f"  F_omega={rec['F_omega']}" if "F_omega" in rec else ""
            lines.append(f"{str(rec['cell']):<22} F={rec['F']}{extra}")
    elif cmd == "ollivier":
        for rec in report["edges"]:
            vals = "  ".join(f"{m}={rec[m]['kappa']}" for m in report["methods"])
            lines.append(f"{str(rec['edge']):<12} {vals}")
        if "all_methods_agree" in report:
            lines.append(f"all methods agree: {report['all_methods_agree']}")
    elif cmd == "maxmin":
        lines.append(f"R* = {report.get('R_star')}   dual = {report.get('dual_value')}   "
                     f"equal: {report.get('primal_equals_dual')}")
        for rec in report.get("cycle_weights", []):
            lines.append(f"  m{tuple(rec['cycle'])} = {rec['m']}")
        for k, v in report.get("dual_conditions", {}).items():
            lines.append(f"  condition {k}: {v}")
    else:
        for name, rec in report["checks"].items():
            state = "PASS" if rec["passed"] else "FAIL"
            note = "" if rec.get("applicable", True) else f" (not applicable: {rec.get('reason')})"
            lines.append(f"{name:<12} {state}{note}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curv", description="Forman and Ollivier curvature with LP certificates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="graph/complex JSON file")
    common.add_argument("--exact", action="store_true", help="rational arithmetic end to end")
    common.add_argument("--omega", action="store_true", help="use the per-edge 'omega' lengths of the input")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes for per-edge work (default: CPU count; env CURV_JOBS wins)")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forman", parents=[common], help="Forman curvature per cell")
    f.add_argument("--dim", type=int, default=1, help="cell dimension (default 1)")

    o = sub.add_parser("ollivier", parents=[common], help="Ollivier curvature per edge")
    sel = o.add_mutually_exclusive_group()
    sel.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"))
    sel.add_argument("--all", action="store_true", help="every edge (default)")
    o.add_argument("--method", choices=METHODS, default="potential")
    o.add_argument("--verify-all-methods", action="store_true",
                   help="solve every formulation and fail unless they agree")
    o.add_argument("--emit-witness", action="store_true")

    mm = sub.add_parser("maxmin", parents=[common], help="max over 2-cell weights of min edge Forman curvature")
    cyc = mm.add_mutually_exclusive_group()
    cyc.add_argument("--max-cycle-length", type=int, default=None, help="candidate cycles up to this length (5)")
    cyc.add_argument("--shortcutting", action="store_true", help="candidates are the shortcutting cycles")
    mm.add_argument("--emit-witness", action="store_true", help="include the dual operator J")

    ch = sub.add_parser("check", parents=[common], help="verify the curvature bounds and identities on the input")
    ch.add_argument("--semigroup", action="store_true")
    ch.add_argument("--diameter", action="store_true")
    ch.add_argument("--coincidence", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            text = open(args.input).read()
        except OSError as exc:
            raise GraphFormatError(f"cannot read {args.input}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from exc
        gf = graphio.parse_graph(data)
        report = validate_complex(gf.complex)
        if not report.valid:
            raise ComplexError("; ".join(v.message for v in report.violations))
        if args.command == "forman":
            out, code = cmd_forman(gf, args)
        elif args.command == "ollivier":
            out, code = cmd_ollivier(gf, args, data)
        elif args.command == "maxmin":
            out, code = cmd_maxmin(gf, args)
        else:
            out, code = cmd_check(gf, args, data)
    except (GraphFormatError, UsageError) as exc:
        print(f"curv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ComplexError, CycleError, DegenerateOmegaError) as exc:
        print(f"curv: invalid complex: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out = {"schema": SCHEMA, **out, "exact": args.exact}
    out = _enc(out)
    if args.format == "table":
        print(_table(out))
    else:
        print(json.dumps(out, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
