"""Batch front end: analyse group files, render lattices and schemes,
drive the generalised-wreath-product checks, and run catalog surveys.

Exit codes: 0 success, 1 failed assertion or property violation,
2 parse error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys

from . import perm
from .blockstruct import ObsViolation, association_scheme, obs_from_json
from .groupprops import analyze, invariant_partitions, is_ob, is_preprimitive, \
    two_closure
from .gwp import EmbeddingError, GwpSpec, gwp_generators, gwp_properties, \
    semidirect_decomposition, verify_embedding
from .lattice import LatticeCapExceeded
from .perm import CapExceeded, action_from_json, group_from_json
from .poset import Poset, poset_from_json

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_CAP = 3


class ParseFailure(Exception):
    pass


class Violation(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure("%s: %s" % (path, exc)) from exc


def _load_group(path, cap=None):
    try:
        group = action_from_json(_load_json(path))
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc
    if cap:
        group.element_cap = cap
    return group


def _load_gwp_spec(path, cap=None):
    data = _load_json(path)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(value):
        if isinstance(value, str):
            return _load_json(os.path.join(base, value))
        return value

    try:
        poset = poset_from_json(resolve(data["poset"]))
        groups = []
        for label in poset.labels:
            groups.append(group_from_json(resolve(data["components"][label])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseFailure("%s: %s" % (path, exc)) from exc
    if cap:
        for g in groups:
            g.element_cap = cap
    return GwpSpec(poset, groups)


def _check_assertions(report: dict, assertions):
    for item in assertions:
        if "=" not in item:
            raise ParseFailure("bad --assert %r (want key=value)" % item)
        key, _, want = item.partition("=")
        if key not in report:
            raise ParseFailure("--assert key %r not in report" % key)
        have_text = str(report[key])
        if have_text.lower() != want.lower():
            raise Violation("assertion %s=%s failed (actual %s)"
                            % (key, want, have_text))


def cmd_analyze(args):
    group = _load_group(args.group, cap=args.cap_elements)
    report = analyze(group).to_json()
    report["name"] = group.name
    report["degree"] = group.degree
    if args.two_closure:
        closure = two_closure(group, degree_cap=args.cap_degree)
        report["ob_two_closure"] = is_ob(closure)[0]
        report["two_closure_order"] = closure.order()
    print(json.dumps(report, indent=2))
    _check_assertions(report, args.assertions)
    return EXIT_OK


def cmd_lattice(args):
    group = _load_group(args.group, cap=args.cap_elements)
    inv = invariant_partitions(group)
    if args.dot:
        print(inv.lattice.to_dot())
    else:
        print(json.dumps({
            "size": inv.size,
            "modular": inv.lattice.is_modular(),
            "distributive": inv.lattice.is_distributive(),
            "partitions": [[list(b) for b in p.blocks] for p in inv.partitions],
        }, indent=2))
    return EXIT_OK


def cmd_scheme(args):
    try:
        obs = obs_from_json(_load_json(args.obs))
    except ObsViolation as exc:
        print("not an orthogonal block structure: %s" % exc, file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        raise ParseFailure(str(exc)) from exc
    scheme = association_scheme(obs)
    if args.matrix:
        print(scheme.class_matrix_text())
    else:
        print(json.dumps({"degree": scheme.degree,
                          "classes": scheme.num_classes}, indent=2))
    return EXIT_OK


def cmd_gwp(args):
    spec = _load_gwp_spec(args.spec, cap=args.cap_elements)
    if args.action == "build":
        group = gwp_generators(spec)
        report = {"degree": spec.total, "order": spec.order(),
                  "generators": [list(g.images) for g in group.generators]}
        print(json.dumps(report, indent=2))
        _check_assertions(report, args.assertions)
        return EXIT_OK
    if args.action == "check-sdp":
        failures = []
        for node in spec.poset.minimal_elements():
            rep = semidirect_decomposition(spec, node)
            ok = (rep.kernel_order_ok and rep.quotient_matches_subspec
                  and rep.classes_match_bruteforce)
            print(json.dumps({
                "node": spec.poset.labels[node],
                "kernel_order": rep.kernel.order(),
                "classes": rep.classes,
                "kernel_order_ok": rep.kernel_order_ok,
                "quotient_matches_subspec": rep.quotient_matches_subspec,
                "classes_match_bruteforce": rep.classes_match_bruteforce,
            }))
            if not ok:
                failures.append(node)
        return EXIT_VIOLATION if failures else EXIT_OK
    if args.action == "check-linext":
        orders = spec.poset.linear_extensions()
        inter = None
        for order in orders:
            chain = Poset.total_order(order, labels=spec.poset.labels)
            wreath = GwpSpec(chain, spec.components)
            els = gwp_generators(wreath).elements()
            inter = els if inter is None else inter & els
        expected = gwp_generators(spec).elements()
        ok = inter == expected
        print(json.dumps({"linear_extensions": len(orders),
                          "intersection_order": len(inter),
                          "gwp_order": len(expected), "matches": ok}))
        return EXIT_OK if ok else EXIT_VIOLATION
    if args.action == "check-pb":
        rep = gwp_properties(spec)
        report = rep.report.to_json()
        report["obstruction"] = (None if rep.obstruction is None else
                                 [spec.poset.labels[i] for i in rep.obstruction])
        report["invariant_count"] = rep.invariant_count
        report["downset_count"] = rep.downset_count
        print(json.dumps(report, indent=2))
        _check_assertions(report, args.assertions)
        return EXIT_OK
    raise ParseFailure("unknown gwp action %r" % args.action)


def cmd_embed(args):
    group = _load_group(args.group, cap=args.cap_elements)
    try:
        report = verify_embedding(group)
    except EmbeddingError as exc:
        print(json.dumps({"verdict": False, "reason": exc.reason}))
        return EXIT_VIOLATION
    payload = {
        "verdict": report.verdict,
        "poset": [[report.poset.labels[a], report.poset.labels[b]]
                  for a, b in sorted(report.poset.covers())],
        "component_orders": [d.group.order() for d in report.node_data],
        "naive_component_orders": [d.naive_group.order() for d in report.node_data],
        "gwp_order": report.gwp_order,
        "membership": report.membership,
        "naive_membership": report.naive_membership,
        "note": report.note,
    }
    print(json.dumps(payload, indent=2))
    _check_assertions(payload, args.assertions)
    return EXIT_OK if report.verdict else EXIT_VIOLATION


def _survey_one(entry, base, cap):
    path = entry["path"] if isinstance(entry, dict) else entry
    full = os.path.join(base, path)
    group = _load_group(full, cap=cap)
    if isinstance(entry, dict) and "degree" in entry:
        if group.degree != int(entry["degree"]):
            raise ParseFailure("%s: degree %d != expected %s"
                               % (path, group.degree, entry["degree"]))
    transitive = group.is_transitive()
    ob = pre = False
    if transitive:
        inv = invariant_partitions(group)
        ob = is_ob(group, inv)[0]
        pre = is_preprimitive(group, inv)[0]
    return {"path": path, "degree": group.degree,
            "transitive": transitive, "ob": ob, "preprimitive": pre}


def cmd_survey(args):
    manifest = _load_json(args.manifest)
    try:
        entries = list(manifest["groups"])
    except (KeyError, TypeError) as exc:
        raise ParseFailure("%s: missing 'groups' list" % args.manifest) from exc
    base = os.path.dirname(os.path.abspath(args.manifest))
    jobs = max(1, args.jobs)
    if jobs == 1:
        rows = [_survey_one(e, base, args.cap_elements) for e in entries]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(
                lambda e: _survey_one(e, base, args.cap_elements), entries))
    degrees = {}
    for row in rows:
        d = degrees.setdefault(row["degree"],
                               {"transitive": 0, "ob": 0, "preprimitive": 0})
        d["transitive"] += row["transitive"]
        d["ob"] += row["ob"]
        d["preprimitive"] += row["preprimitive"]
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("path,degree,transitive,ob,preprimitive\n")
            for row in rows:
                fh.write("%s,%d,%d,%d,%d\n" % (
                    row["path"], row["degree"], row["transitive"],
                    row["ob"], row["preprimitive"]))
    report = {"degrees": {str(k): v for k, v in sorted(degrees.items())}}
    print(json.dumps(report, indent=2))
    _check_assertions(report, args.assertions)
    return EXIT_OK


def build_parser():
    # SUPPRESS keeps a subparser from clobbering a flag given before the
    # subcommand; main() fills in the defaults afterwards
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--cap-elements", type=int, default=argparse.SUPPRESS,
                        help="element enumeration cap")
    shared.add_argument("--cap-degree", type=int, default=argparse.SUPPRESS,
                        help="degree cap for 2-closure computations")
    shared.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker count for survey")
    shared.add_argument("--assert", dest="assertions", action="append",
                        default=argparse.SUPPRESS, metavar="KEY=VALUE",
                        help="exit 1 unless the report field matches")
    parser = argparse.ArgumentParser(
        prog="blocklat", parents=[shared],
        description="invariant partition lattices, block structures and "
                    "generalised wreath products")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[shared],
                       help="property report for a group file")
    p.add_argument("group")
    p.add_argument("--two-closure", action="store_true",
                   help="also report OB of the 2-closure (bounded by "
                        "--cap-degree)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lattice", parents=[shared],
                       help="invariant partition lattice")
    p.add_argument("group")
    p.add_argument("--dot", action="store_true", help="emit a DOT Hasse diagram")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("scheme", parents=[shared],
                       help="association scheme of an OBS file")
    p.add_argument("obs")
    p.add_argument("--matrix", action="store_true", help="emit the class matrix")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("gwp", parents=[shared],
                       help="generalised wreath product checks")
    p.add_argument("action",
                   choices=["build", "check-sdp", "check-linext", "check-pb"])
    p.add_argument("spec")
    p.set_defaults(func=cmd_gwp)

    p = sub.add_parser("embed", parents=[shared],
                       help="embedding theorem report")
    p.add_argument("group")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("survey", parents=[shared],
                       help="catalog survey (Table 1 workflow)")
    p.add_argument("manifest")
    p.add_argument("--csv", help="write per-group CSV here")
    p.set_defaults(func=cmd_survey)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "cap_elements"):
        args.cap_elements = int(os.environ.get("BLOCKLAT_CAP_ELEMENTS",
                                               perm.DEFAULT_ELEMENT_CAP))
    if not hasattr(args, "cap_degree"):
        args.cap_degree = 16
    if not hasattr(args, "jobs"):
        args.jobs = 1
    if not hasattr(args, "assertions"):
        args.assertions = []
    try:
        return args.func(args)
    except ParseFailure as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (CapExceeded, LatticeCapExceeded) as exc:
        print("cap exceeded: %s" % exc, file=sys.stderr)
        return EXIT_CAP
    except Violation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    except ObsViolation as exc:
        print("violation: %s" % exc, file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
