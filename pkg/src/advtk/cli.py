"""Command-line front end.

Every command prints one JSON document on stdout; ``--pretty`` adds a
readable summary on stderr.  Exit codes: 0 success, 1 a verification failed,
2 usage or input error, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from . import config as _config
from .adversary import (
    ProbabilityFamily,
    SpectralAdversary,
    certificate_barrier,
    certificate_witness,
    evaluate_witness,
    formula_bound,
    hamming_one_matrix,
    hastad_bound,
    khrapchenko,
    koutsoupias,
    maxpi_bracket,
    prob_formula_bound,
    prob_scheme_value,
    quantum_bound,
    spectral_value,
    sumpi_bracket,
)
from .boolfn import BUILTINS, builtin, read_bf
from .errors import AdvtkError, DomainError, FormulaSyntaxError, ResourceCapError
from .formulas import (
    color_cover,
    kw_partition,
    leaf_count,
    min_formula_size,
    parse_formula,
    rectangle_partition_number,
    to_text,
    truth_table,
)
from .io import load_witness, save_witness
from .linalg import rectangle_measure_bound
from .measures import block_sensitivity, certificate_complexity, sensitivity

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
METHODS = ("khrapchenko", "koutsoupias", "hastad", "spectral", "sumpi-bracket", "maxpi-bracket", "certificate")


class UsageError(AdvtkError):
    pass


# ---- shared helpers -----------------------------------------------------------


def _function_args(p):
    g = p.add_argument_group("function")
    g.add_argument("--builtin", choices=sorted(BUILTINS), help="named function")
    g.add_argument("--n", type=int, help="arity for parity/or/and/collision")
    g.add_argument("--h", type=int, help="depth for recmaj")
    g.add_argument("--d", type=int, help="depth for ambainis_iter")
    g.add_argument("--file", help="truth table in .bf format")


def _common_args(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=_config.OptimizerConfig.iterations)
    p.add_argument("--restarts", type=int, default=_config.OptimizerConfig.restarts)
    p.add_argument("--epsilon", type=float, default=1 / 3, help="error probability for derived bounds")
    p.add_argument("--spectral-cell-cap", type=int, default=_config.SPECTRAL_CELL_CAP)
    p.add_argument("--pair-scan-cap", type=int, default=_config.PAIR_SCAN_CAP)
    p.add_argument("--pretty", action="store_true", help="human-readable summary on stderr")
    p.add_argument("--no-meta", action="store_true", help="omit timestamps and timings")
    p.add_argument("--strict", action="store_true", help="treat soft consistency checks as failures")


def _load_function(args):
    if args.file and args.builtin:
        raise UsageError("give either --builtin or --file, not both")
    if args.file:
        try:
            return read_bf(args.file), {"file": args.file}
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    if not args.builtin:
        raise UsageError("a function is required: --builtin NAME or --file PATH")
    _, names = BUILTINS[args.builtin]
    params = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"builtin {args.builtin} needs --{name}")
        params.append(v)
    desc = {"builtin": args.builtin}
    desc.update({k: v for k, v in zip(names, params)})
    return builtin(args.builtin, *params), desc


def _describe(f, desc):
    return dict(desc, n=f.n, k=f.k, domain_size=f.domain_size, total=f.is_total,
                X=int(np.sum(f.labels == 0)), Y=int(np.sum(f.labels == 1)))


def _config_from(args):
    return _config.OptimizerConfig(
        seed=args.seed, iterations=args.iterations, restarts=args.restarts,
        spectral_cell_cap=args.spectral_cell_cap, pair_scan_cap=args.pair_scan_cap,
    )


def _check(name, passed, soft=False, detail=None):
    out = {"name": name, "passed": bool(passed), "soft": soft}
    if detail is not None:
        out["detail"] = detail
    return out


def _derived(v, eps):
    return {
        "formula_size_lower": formula_bound(v),
        "quantum_query_lower": quantum_bound(v, eps),
        "prob_formula_size_lower": prob_formula_bound(v, eps),
        "epsilon": eps,
    }


def _frac(q):
    return {"value": float(q), "exact": f"{q.numerator}/{q.denominator}"}


# ---- commands -----------------------------------------------------------------


def cmd_measure(args, f):
    out = {
        "s0": sensitivity(f, 0) if np.any(f.labels == 0) else None,
        "s1": sensitivity(f, 1) if np.any(f.labels == 1) else None,
    }
    out["s"] = max(v for v in (out["s0"], out["s1"]) if v is not None)
    out["C0"] = certificate_complexity(f, 0) if out["s0"] is not None else None
    out["C1"] = certificate_complexity(f, 1) if out["s1"] is not None else None
    checks = []
    if f.is_total and f.k == 2 and f.n <= _config.BLOCK_SENSITIVITY_ARITY_CAP:
        out["bs"] = block_sensitivity(f)
        cmax = max(v for v in (out["C0"], out["C1"]) if v is not None)
        checks.append(_check("s <= bs <= max(C0, C1)", out["s"] <= out["bs"] <= cmax))
    else:
        out["bs"] = None
    if out["C0"] is not None and out["C1"] is not None:
        out["certificate_barrier"] = certificate_barrier(f)
    return out, checks


def _bracket_report(b, eps):
    out = b.to_dict()
    out["derived"] = _derived(max(b.lower.value, 0.0), eps)
    return out


def cmd_bound(args, f):
    eps = args.epsilon
    m = args.method
    checks = []
    if m in ("khrapchenko", "koutsoupias"):
        A = args.A.split(",") if args.A else None
        B = args.B.split(",") if args.B else None
        if m == "khrapchenko":
            q = khrapchenko(f, A, B)
            out = {"formula_size_bound": _frac(q)}
            v = math.sqrt(q)
        else:
            v2 = koutsoupias(f, A, B)
            out = {"formula_size_bound": {"value": v2}}
            v = math.sqrt(v2)
        out["sumpi_lower"] = v
        out["derived"] = _derived(v, eps)
        return out, checks
    if m == "hastad":
        v2 = hastad_bound(f, args.p)
        out = {"p": args.p, "formula_size_bound": {"value": v2}}
        if f.is_total and f.has_both_labels():
            s0s1 = sensitivity(f, 0) * sensitivity(f, 1)
            out["s0s1"] = s0s1
            checks.append(_check("hastad <= s0 s1", v2 <= s0s1 + 1e-9))
        return out, checks
    cfg = _config_from(args)
    if m == "spectral":
        est = SpectralAdversary(max_iter=cfg.iterations, n_restarts=cfg.restarts,
                                random_state=cfg.seed, cell_cap=cfg.spectral_cell_cap).fit(f)
        out = {"sumpi_lower": est.value_, "certificate": "adversary matrix",
               "derived": _derived(est.value_, eps)}
        if args.save_witness:
            save_witness(est.gamma_, f, args.save_witness)
            out["witness_file"] = args.save_witness
        return out, checks
    if m == "certificate":
        cw = certificate_witness(f)
        ev = evaluate_witness(f, cw, kind="max", cap=cfg.pair_scan_cap)
        barrier = certificate_barrier(f)
        out = {"maxpi_upper": ev.value, "worst_pair": [ev.x, ev.y], "barrier": barrier}
        checks.append(_check("witness value <= barrier", ev.value <= barrier + 1e-9))
        if args.save_witness:
            save_witness(cw, f, args.save_witness, kind="maxpi")
            out["witness_file"] = args.save_witness
        return out, checks
    s = sumpi_bracket(f, cfg)
    if m == "sumpi-bracket":
        out = {"bracket": _bracket_report(s, eps)}
        checks.append(_check("bracket consistent", s.consistent))
        best = s.upper
    else:
        b = maxpi_bracket(f, cfg, sumpi=s)
        out = {"bracket": _bracket_report(b, eps), "sumpi_bracket": s.to_dict()}
        checks.append(_check("bracket consistent", b.consistent))
        if f.is_total:
            ok = b.upper.value <= s.upper.value**4 + 1e-6
            checks.append(_check("maxPI upper <= (sumPI upper)^4", ok, soft=True))
        best = b.upper
    if args.save_witness and isinstance(best.witness, ProbabilityFamily):
        save_witness(best.witness, f, args.save_witness, kind="sumpi" if m == "sumpi-bracket" else "maxpi")
        out["witness_file"] = args.save_witness
    return out, checks


def _rect_json(f, R, color):
    xs, ys = f.input_strings(0), f.input_strings(1)
    return {"rows": [xs[r] for r in R.rows], "cols": [ys[c] for c in R.cols],
            "color": color, "empty": R.is_empty}


def cmd_formula(args, f):
    checks = []
    if args.action == "minsize":
        res = min_formula_size(f, args.cap)
        out = {"result": res.describe(), "size": res.size, "cap": args.cap}
        if res.formula is not None:
            out["formula"] = to_text(res.formula)
            ok = np.array_equal(truth_table(res.formula, f.n), f.labels) and leaf_count(res.formula) == res.size
            checks.append(_check("witness computes f", ok))
        return out, checks
    if args.action == "kw":
        phi = parse_formula(args.formula, f.n)
        P = kw_partition(phi, f)
        out = {
            "formula": to_text(phi),
            "leaves": leaf_count(phi),
            "rectangles": [_rect_json(f, R, c) for R, c in zip(P.rectangles, P.colors)],
            "nonempty": P.nonempty_count,
        }
        checks.append(_check("disjoint", P.is_disjoint()))
        checks.append(_check("covers X x Y", P.is_cover()))
        checks.append(_check("monochromatic", P.is_monochromatic(f)))
        h1 = hamming_one_matrix(f)
        if h1.any():
            out["measure_bound"] = rectangle_measure_bound(h1, "spectral_sq", color_cover(P, f))
        return out, checks
    res = rectangle_partition_number(f)
    out = {
        "value": res.value,
        "lower_bound": res.lower_bound,
        "nodes": res.nodes,
        "partition": [_rect_json(f, R, c) for R, c in zip(res.partition.rectangles, res.partition.colors)],
    }
    checks.append(_check("partition valid", res.partition.is_partition()))
    return out, checks


def cmd_witness_eval(args, f):
    kind, obj = load_witness(args.witness, f)
    out = {"type": kind}
    if kind in ("sumpi", "maxpi"):
        ev = evaluate_witness(f, obj, kind=kind[:3], mode=args.mode, samples=args.samples,
                              seed=args.seed, cap=args.pair_scan_cap)
        out.update(value=ev.value, bound="upper", worst_pair=[ev.x, ev.y], sampled=ev.sampled)
    elif kind == "spectral":
        out.update(value=spectral_value(f, obj), bound="lower")
    else:
        out.update(value=prob_scheme_value(f, obj), bound="lower")
    return out, []


def cmd_lemma_check(args, f=None):
    from .suites import run_lemma_suites

    results = run_lemma_suites(args.trials, args.seed)
    checks = [_check(r["name"], r["failures"] == 0, detail=f"{r['trials'] - r['failures']}/{r['trials']}")
              for r in results]
    return {"suites": results}, checks


def cmd_reproduce_table(args, f=None):
    from .table import reproduce_table

    say = (lambda msg: print(f"computing {msg} ...", file=sys.stderr)) if args.pretty else None
    rows = reproduce_table(args.h_max, args.d_max, args.n_list, args.epsilon, _config_from(args), say)
    checks = [_check(f"{r['function']}: {c['name']}", c["passed"]) for r in rows for c in r["checks"]]
    return {"rows": rows}, checks


# ---- pretty printing ----------------------------------------------------------


def _pretty(doc):
    err = sys.stderr
    print(f"advtk {doc['command']}", file=err)
    if "function" in doc:
        print("  function: " + ", ".join(f"{k}={v}" for k, v in doc["function"].items()), file=err)
    res = doc["result"]
    if doc["command"] == "reproduce-table":
        head = f"{'function':<10}{'N':>5}  {'sumPI':<21}{'maxPI':<21}{'L >=':>9}{'s0s1':>7}  ok"
        print(head, file=err)
        for r in res["rows"]:
            s, m = r["sumPI"], r["maxPI"]
            print(
                f"{r['function']:<10}{r['input_size']:>5}  "
                f"[{s['lower']['value']:.4f}, {s['upper']['value']:.4f}]".ljust(37)
                + f"[{m['lower']['value']:.4f}, {m['upper']['value']:.4f}]".ljust(21)
                + f"{r['formula_lower']:>9.3f}{str(r['s0s1'] if r['s0s1'] is not None else '-'):>7}  "
                + ("yes" if r["match"] else "NO"),
                file=err,
            )
    else:
        for k, v in res.items():
            if isinstance(v, dict) and "lower" in v and "upper" in v:
                lo, up = v["lower"], v["upper"]
                v = f"[{lo['value']:.6f} ({lo['method']}), {up['value']:.6f} ({up['method']})]"
            if isinstance(v, (list, dict)) and len(json.dumps(v, default=str)) > 200:
                v = f"<{type(v).__name__} of {len(v)}>"
            print(f"  {k}: {v}", file=err)
    for c in doc["checks"]:
        tag = "PASS" if c["passed"] else ("SOFT-FAIL" if c["soft"] else "FAIL")
        print(f"  [{tag}] {c['name']}", file=err)


# ---- entry point --------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="advtk", description="Adversary and formula size bounds.")
    parser.add_argument("--version", action="version", version=f"advtk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="sensitivity, certificate complexity, block sensitivity")
    _function_args(p)
    _common_args(p)

    p = sub.add_parser("bound", help="one lower/upper bound method")
    _function_args(p)
    _common_args(p)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--A", help="comma-separated 0-inputs (khrapchenko/koutsoupias)")
    p.add_argument("--B", help="comma-separated 1-inputs (khrapchenko/koutsoupias)")
    p.add_argument("--p", type=float, default=0.5, help="star probability for hastad")
    p.add_argument("--save-witness", help="write the certificate object as JSON")

    p = sub.add_parser("formula", help="formula size and rectangle partitions")
    _function_args(p)
    _common_args(p)
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("minsize")
    a.add_argument("--cap", type=int, default=None)
    a = actions.add_parser("kw")
    a.add_argument("--formula", required=True)
    actions.add_parser("cdnum")

    p = sub.add_parser("witness-eval", help="evaluate a witness file")
    _function_args(p)
    _common_args(p)
    p.add_argument("--witness", required=True)
    p.add_argument("--mode", choices=("full", "sampled"), default="full")
    p.add_argument("--samples", type=int, default=100_000)

    p = sub.add_parser("lemma-check", help="random property suites for the matrix lemmas")
    _common_args(p)
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("reproduce-table", help="summary table of the concrete bounds")
    _common_args(p)
    p.add_argument("--h-max", type=int, default=2)
    p.add_argument("--d-max", type=int, default=2)
    p.add_argument("--n-list", type=lambda s: [int(t) for t in s.split(",") if t], default=[4])
    return parser


COMMANDS = {
    "measure": (cmd_measure, True),
    "bound": (cmd_bound, True),
    "formula": (cmd_formula, True),
    "witness-eval": (cmd_witness_eval, True),
    "lemma-check": (cmd_lemma_check, False),
    "reproduce-table": (cmd_reproduce_table, False),
}


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _finite(o):
    """JSON has no infinities; spell them as strings."""
    if isinstance(o, float) and not math.isfinite(o):
        return "inf" if o > 0 else ("-inf" if o < 0 else "nan")
    if isinstance(o, dict):
        return {k: _finite(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_finite(v) for v in o]
    return o


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.time()
    fn, needs_function = COMMANDS[args.command]
    doc = {"command": args.command if args.command != "formula" else "formula " + args.action}
    try:
        if args.epsilon is not None and not 0 <= args.epsilon < 0.5:
            raise UsageError("--epsilon must satisfy 0 <= eps < 1/2")
        if needs_function:
            f, desc = _load_function(args)
            doc["function"] = _describe(f, desc)
            result, checks = fn(args, f)
        else:
            result, checks = fn(args)
    except (UsageError, DomainError, FormulaSyntaxError) as exc:
        print(f"advtk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"advtk: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"advtk: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except AdvtkError as exc:
        print(f"advtk: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    doc["command"] = doc["command"].split()[0] if args.command != "formula" else doc["command"]
    doc["result"] = result
    doc["checks"] = checks
    failed = [c for c in checks if not c["passed"] and (args.strict or not c["soft"])]
    doc["ok"] = not failed
    if not args.no_meta:
        doc["meta"] = {
            "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "elapsed_seconds": round(time.time() - start, 3),
            "seed": args.seed,
        }
    print(json.dumps(_finite(doc), indent=1, default=_json_default))
    if args.pretty:
        _pretty(doc)
    return EXIT_VERIFY if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
