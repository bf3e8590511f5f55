"""Command line entry point: construct / verify / compare.

Exit codes: 0 = pass, 1 = a check ran and failed, 2 = usage, I/O, or
parameter errors.  All JSON output is deterministic for fixed inputs
(the wall_time_s field aside), independent of --threads.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import arrays, constructions, geometry, graphs, regularity, spectral

# a check ran and the graph (or the claim about it) failed: exit 1
CHECK_FAILURES = (
    spectral.AnnihilationFailed,
    spectral.MomentMismatch,
    spectral.MinimalityFailed,
    spectral.ClaimInvalid,
    spectral.NotAnEigenvalue,
    spectral.WrongEigenvalueCount,
    spectral.Disconnected,
    regularity.NotRegular,
    regularity.NotCoEdgeRegular,
    regularity.NotEdgeRegular,
    regularity.NotSRG,
    regularity.SetNotClique,
    regularity.SetNotCoclique,
    regularity.PreconditionFailed,
)

# malformed input or unusable parameters: exit 2
PARAM_ERRORS = (
    ValueError,
    KeyError,
    TypeError,
    OSError,
    json.JSONDecodeError,
)


def _digest(path) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _emit(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _run_report(args, inputs: dict, reports: dict, passed: bool, t0: float) -> dict:
    return {
        "command": list(args),
        "inputs": {str(p): _digest(p) for p in inputs.values() if p},
        "reports": reports,
        "pass": passed,
        "wall_time_s": round(time.monotonic() - t0, 6),
    }


def _load_claim(path):
    with open(path) as fh:
        return spectral.claim_from_json(json.load(fh))


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _summary(g: graphs.Graph) -> dict:
    regular, k = g.is_regular()
    return {
        "n": g.n,
        "k": k if regular else None,
        "regular": regular,
        "edges": g.edge_count(),
    }


def _design_from_args(args) -> geometry.Design:
    if args.design_file:
        return geometry.read_design(args.design_file)
    if args.design == "affine-lines":
        if args.q is None or args.d is None:
            raise ValueError("affine-lines needs --q and --d")
        return geometry.design_affine_lines(args.q, args.d)
    if args.design == "one-factorization":
        if args.m is None:
            raise ValueError("one-factorization needs --m")
        return geometry.design_one_factorization(args.m)
    raise ValueError("give --design affine-lines|one-factorization or --design-file")


def cmd_construct(args) -> int:
    fam = args.family
    sidecar = None
    if fam == "ls":
        if args.n is None or args.m is None:
            raise ValueError("ls needs --n and --m")
        oa = arrays.read_array(args.oa) if args.oa else arrays.oa_macneish(args.n)
        g = constructions.latin_square_graph(oa, args.m)
    elif fam == "clique-ext":
        if not args.input or args.s is None:
            raise ValueError("clique-ext needs -i and --s")
        g = graphs.clique_extension(graphs.read_graph6(args.input), args.s)
    elif fam == "tls":
        if args.q is None or args.n is None:
            raise ValueError("tls needs --q and --n")
        goa = arrays.read_array(args.goa) if args.goa else None
        if goa is not None and not isinstance(goa, arrays.GroupDivisibleArray):
            raise constructions.ParameterMismatch("--goa file must hold a GOA")
        g = constructions.tls(args.q, args.n, goa=goa)
        sidecar = constructions.tls_metadata(g)
    elif fam == "block-graph":
        g = geometry.block_graph(_design_from_args(args))
    elif fam == "h-graph":
        g = constructions.h_graph(_design_from_args(args))
    elif fam == "complement":
        if not args.input:
            raise ValueError("complement needs -i")
        g = graphs.complement(graphs.read_graph6(args.input))
    elif fam == "spread-mod":
        if not args.input or not args.parts or not args.mode:
            raise ValueError("spread-mod needs -i, --parts, and --mode")
        parts = _load_json(args.parts)["parts"]
        g = constructions.spread_modified(
            graphs.read_graph6(args.input), parts, args.mode
        )
    else:
        raise ValueError(f"unknown family {fam!r}")

    graphs.write_graph6(g, args.output)
    if sidecar is not None:
        with open(str(args.output) + ".meta.json", "w") as fh:
            json.dump(sidecar, fh)
    elif g.labels:
        graphs.write_labels(g, str(args.output) + ".labels.json")
    summary = _summary(g)
    if fam == "h-graph" and g.is_complete():
        summary["degenerate_complete"] = True
    print(json.dumps(summary))
    return 0


def _check_profile(g, args, threads):
    prof = regularity.profile(g, threads)
    return prof.to_json_dict(), True


def _check_strong(g, args, threads):
    rep = regularity.strong_co_edge_regular(g, threads)
    body = {"mu": rep.mu, "gamma": rep.gamma, "witness": rep.witness}
    return body, rep.ok


def _check_weak(g, args, threads):
    rep = regularity.weak_edge_regular(g, threads)
    body = {
        "alpha": None if rep.alpha is None else [rep.alpha.numerator, rep.alpha.denominator],
        "beta": None if rep.beta is None else [rep.beta.numerator, rep.beta.denominator],
        "family": rep.family,
        "witness": rep.witness,
    }
    return body, rep.ok


def _check_spectrum(g, args, threads):
    if not args.claim:
        raise ValueError("spectrum needs --claim")
    cert = spectral.certify(g, _load_claim(args.claim), threads)
    return cert.to_json_dict(), True


def _check_eq1(g, args, threads):
    if not args.claim:
        raise ValueError("eq1 needs --claim")
    cert = spectral.certify(g, _load_claim(args.claim), threads)
    rep = spectral.eq1_residual(g, cert, threads)
    return rep.to_json_dict(), rep.ok


def _check_theorem33(g, args, threads):
    if not args.claim:
        raise ValueError("theorem33 needs --claim")
    cert = spectral.certify(g, _load_claim(args.claim), threads)
    strong = regularity.strong_co_edge_regular(g, threads)
    weak = regularity.weak_edge_regular(g, threads)
    if not strong.ok or not weak.ok or weak.alpha is None:
        return (
            {"strong": strong.witness, "weak": weak.witness},
            False,
        )
    rep = spectral.theorem33_identities(
        g, cert, weak.alpha, weak.beta, strong.mu, strong.gamma
    )
    return rep.to_json_dict(), rep.ok


def _check_equitable(g, args, threads):
    if not args.parts:
        raise ValueError("equitable needs --parts")
    rep = regularity.equitable_check(g, _load_json(args.parts)["parts"])
    body = {
        "quotient": [list(r) for r in rep.quotient] if rep.quotient else None,
        "witness": rep.witness,
    }
    return body, rep.ok


def _check_hoffman(g, args, threads):
    if not args.set or not args.kind or args.m is None:
        raise ValueError("hoffman needs --set, --kind, and --m")
    vertex_set = _load_json(args.set)["set"]
    rep = regularity.hoffman_check(g, vertex_set, args.kind, Fraction(args.m))
    return rep.to_json_dict(), rep.tight


def _check_scheme(g, args, threads):
    if not args.relations:
        raise ValueError("scheme needs --relations")
    rels = [graphs.read_graph6(p) for p in args.relations]
    rep = regularity.scheme_check(rels, threads)
    body = {
        "classes": rep.classes,
        "intersection_numbers": rep.p_table_json(),
        "witness": rep.witness,
    }
    return body, rep.ok


def _check_goldberg(g, args, threads):
    if args.theta is None or args.theta2 is None:
        raise ValueError("goldberg needs --theta and --theta2")
    cert = None
    if args.claim:
        cert = spectral.certify(g, _load_claim(args.claim), threads)
    rep = spectral.goldberg(
        g, Fraction(args.theta), Fraction(args.theta2), cert, threads
    )
    return rep.to_json_dict(), not rep.violated


CHECKS = {
    "profile": _check_profile,
    "strong": _check_strong,
    "weak": _check_weak,
    "spectrum": _check_spectrum,
    "eq1": _check_eq1,
    "theorem33": _check_theorem33,
    "equitable": _check_equitable,
    "hoffman": _check_hoffman,
    "scheme": _check_scheme,
    "goldberg": _check_goldberg,
}


def _split_schema(body: dict):
    """(constants, witness, multisets) per the report schema."""
    witness = body.get("witness")
    multisets = {}
    constants = {}
    for key, value in body.items():
        if key == "witness":
            continue
        if "multiset" in key or key == "outside_degrees":
            multisets[key] = value
        else:
            constants[key] = value
    return constants, witness, multisets


def cmd_verify(args, argv) -> int:
    t0 = time.monotonic()
    g = graphs.read_graph6(args.input)
    threads = args.threads or os.cpu_count()
    try:
        body, ok = CHECKS[args.check](g, args, threads)
    except CHECK_FAILURES as exc:
        body = {"error": type(exc).__name__, "detail": str(exc), "witness": getattr(exc, "witness", None)}
        ok = False
    inputs = {"input": args.input}
    if args.claim:
        inputs["claim"] = args.claim
    report = _run_report(argv, inputs, {args.check: body}, ok, t0)
    constants, witness, multisets = _split_schema(body)
    report["check"] = args.check
    report["accepted"] = ok
    report["constants"] = constants
    report["witness"] = witness
    report["multisets"] = multisets
    _emit(report, args.out)
    return 0 if ok else 1


def cmd_compare(args, argv) -> int:
    t0 = time.monotonic()
    g1 = graphs.read_graph6(args.a)
    g2 = graphs.read_graph6(args.b)
    threads = args.threads or os.cpu_count()
    claim = _load_claim(args.claim) if args.claim else None
    try:
        cosp = spectral.cospectral(g1, g2, claim=claim, threads=threads)
        cosp_body = cosp.to_json_dict()
        is_cosp = cosp.cospectral
    except CHECK_FAILURES as exc:
        cosp_body = {"error": type(exc).__name__, "detail": str(exc)}
        is_cosp = False
    levels = []
    for g in (g1, g2):
        try:
            co, edge = regularity.level(g, threads)
        except (regularity.PreconditionFailed, ValueError):
            co, edge = None, None
        levels.append({"co_edge": co, "edge": edge})
    distinct_levels = (
        levels[0]["co_edge"] is not None
        and levels[1]["co_edge"] is not None
        and levels[0]["co_edge"] != levels[1]["co_edge"]
    )
    body = {
        "cospectral": cosp_body,
        "levels": levels,
        "non_isomorphic_by_level": distinct_levels,
        "obstruction": "co-edge level" if distinct_levels else None,
    }
    report = _run_report(argv, {"a": args.a, "b": args.b}, body, is_cosp, t0)
    _emit(report, args.out)
    return 0 if is_cosp else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cerg")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build a named family and write graph6")
    c.add_argument(
        "family",
        choices=[
            "ls",
            "clique-ext",
            "tls",
            "block-graph",
            "h-graph",
            "complement",
            "spread-mod",
        ],
    )
    c.add_argument("--q", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--oa")
    c.add_argument("--goa")
    c.add_argument("--design")
    c.add_argument("--design-file")
    c.add_argument("--parts")
    c.add_argument("--mode", choices=["remove", "add"])
    c.add_argument("-i", "--input")
    c.add_argument("-o", "--output", required=True)

    v = sub.add_parser("verify", help="run a checker against a graph6 file")
    v.add_argument("check", choices=sorted(CHECKS))
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--claim")
    v.add_argument("--parts")
    v.add_argument("--set")
    v.add_argument("--kind", choices=["clique", "coclique"])
    v.add_argument("--m")
    v.add_argument("--relations", nargs="+")
    v.add_argument("--theta")
    v.add_argument("--theta2")
    v.add_argument("--threads", type=int)
    v.add_argument("--out")

    p = sub.add_parser("compare", help="cospectrality and level comparison")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--claim")
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.cmd == "construct":
            return cmd_construct(args)
        if args.cmd == "verify":
            return cmd_verify(args, argv)
        return cmd_compare(args, argv)
    except CHECK_FAILURES as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return 1
    except PARAM_ERRORS as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
