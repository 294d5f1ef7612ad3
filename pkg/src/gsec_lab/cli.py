"""Command-line surface: check, rhs, solve, verify.

JSON output is the stable contract (sorted keys, fixed indentation); text
output is for humans and may change.  Exit codes: 0 success / representable,
2 not representable or suite failure, 3 infeasible instance, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import GsecLabError, Infeasible, InternalMismatch, ParseError
from .graphs import bits_of, forest_components_count
from .families import cover_subgraphs
from .jsonio import (
    certificate_to_json,
    dumps,
    family_from_json,
    rcmst_instance_from_json,
    rcmst_solution_to_json,
    vrp_instance_from_json,
    vrp_solution_to_json,
)
from .representability import is_representable
from .solvers import RcmstInstance, oracle_solve_vrp, solve_rcmst, solve_vrp_form
from .verify import SUITES, run_suite

DEFAULT_CAP = int(os.environ.get("GSEC_LAB_CAP", "8"))


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: line {exc.lineno} "
                         f"column {exc.colno}") from None


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _revalidate_check_certs(report, fam):
    """Raise InternalMismatch if any certificate fails its own definition."""
    work = report.checked_family
    for cert in report.certificates:
        tag = cert[0]
        if tag == "not_edge_consistent":
            _, f_in, f_out = cert
            ok = (fam.contains(f_in) and not fam.contains(f_out)
                  and f_in.edges == f_out.edges)
        elif tag == "not_downward_closed":
            _, member, sub = cert
            ok = (work.contains(member) and not work.contains(sub)
                  and sub in cover_subgraphs(work.host, member))
        elif tag == "mip_violation":
            _, forest, comps, ell_val = cert
            ok = (work.contains(forest)
                  and forest_components_count(forest) == comps
                  and report.ell[forest.verts] == ell_val
                  and comps < ell_val)
        else:
            ok = False
        if not ok:
            raise InternalMismatch(f"certificate {tag} failed revalidation")


def _table_json(values) -> dict:
    return {str(mask): values[mask] for mask in range(1, len(values))}


def _report_json(report, fam) -> dict:
    g = fam.host
    return {
        "representable": report.representable,
        "flags": {
            "nonempty": report.nonempty,
            "edge_consistent": report.edge_consistent,
            "downward_closed": report.downward_closed,
            "contains_edgeless": report.contains_edgeless,
            "mip_property": report.mip_property,
        },
        "ell": _table_json(report.ell.values),
        "ell_valid_rhs": report.ell.valid_rhs,
        "blocking": [list(bits_of(m)) for m in report.ell.blocking],
        "u": _table_json(report.u.values) if report.u is not None else None,
        "certificates": [certificate_to_json(c, g)
                         for c in report.certificates],
        "warnings": list(report.warnings),
    }


def _report_text(report, fam) -> str:
    lines = [f"representable: {'yes' if report.representable else 'no'}"]
    for name, val in [("nonempty", report.nonempty),
                      ("edge-consistent", report.edge_consistent),
                      ("downward closed", report.downward_closed),
                      ("contains all edgeless forests", report.contains_edgeless),
                      ("minimal infeasibility property", report.mip_property)]:
        lines.append(f"  {name}: {'yes' if val else 'no'}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    for cert in report.certificates:
        lines.append(f"certificate: {certificate_to_json(cert, fam.host)}")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    fam = family_from_json(_load_json(args.family))
    report = is_representable(fam, args.cap)
    _revalidate_check_certs(report, fam)
    if args.format == "json":
        _emit(dumps(_report_json(report, fam)), args.output)
    else:
        _emit(_report_text(report, fam), args.output)
    return 0 if report.representable else 2


def cmd_rhs(args) -> int:
    fam = family_from_json(_load_json(args.family))
    report = is_representable(fam, args.cap)
    _revalidate_check_certs(report, fam)
    subsets = []
    for mask in range(1, 1 << fam.host.n):
        ell = report.ell[mask]
        u = report.u[mask] if report.u is not None else None
        subsets.append({"S": list(bits_of(mask)), "ell": ell, "u": u,
                        "slack": bool(u is not None and ell < u)})
    payload = {
        "representable": report.representable,
        "ell_valid_rhs": report.ell.valid_rhs,
        "subsets": subsets,
        "warnings": list(report.warnings),
    }
    if not report.representable:
        payload["warnings"] = payload["warnings"] + [
            "family is not representable; ell/u do not bound an "
            "admissible range"]
    if args.format == "json":
        _emit(dumps(payload), args.output)
    else:
        lines = [f"representable: {'yes' if report.representable else 'no'}"]
        for row in subsets:
            u_txt = "-" if row["u"] is None else row["u"]
            star = "  (slack)" if row["slack"] else ""
            lines.append(f"  S={row['S']}: ell={row['ell']} u={u_txt}{star}")
        for w in payload["warnings"]:
            lines.append(f"warning: {w}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_solve(args) -> int:
    obj = _load_json(args.instance)
    is_vrp = "routes" in obj
    if not is_vrp and "uncertainty" not in obj:
        raise ParseError("instance needs either 'routes' (VRP) or "
                         "'uncertainty' (RCMST)")
    try:
        if is_vrp:
            inst = vrp_instance_from_json(obj)
            sol = solve_vrp_form(inst)
            payload = vrp_solution_to_json(sol)
            if args.oracle_check:
                oracle = oracle_solve_vrp(inst)
                if oracle.cost != sol.cost:
                    raise InternalMismatch(
                        f"oracle cost {oracle.cost} != solver cost {sol.cost}")
                payload["oracle_cost"] = payload["cost"]
        else:
            inst = rcmst_instance_from_json(obj)
            sol = solve_rcmst(inst)
            payload = rcmst_solution_to_json(sol)
            # solve_rcmst always cross-checks against the tree oracle
            if args.oracle_check:
                payload["oracle_cost"] = payload["cost"]
    except Infeasible as exc:
        if args.format == "json":
            _emit(dumps({"infeasible": True, "reason": str(exc)}), args.output)
        else:
            _emit(f"infeasible: {exc}\n", args.output)
        return 3
    if args.format == "json":
        _emit(dumps(payload), args.output)
    else:
        _emit("\n".join(f"{k}: {payload[k]}" for k in sorted(payload)) + "\n",
              args.output)
    return 0


def cmd_verify(args) -> int:
    result = run_suite(args.suite, args.trials, args.seed, args.cap)
    if args.format == "json":
        _emit(dumps(result.to_json()), args.output)
    else:
        lines = [f"suite {result.name}: "
                 f"{'pass' if result.passed else 'FAIL'} "
                 f"({result.trials} trials)"]
        for key in sorted(result.info):
            lines.append(f"  {key}: {result.info[key]}")
        for trial, msg in result.failures:
            lines.append(f"  trial {trial}: {msg}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if result.passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsec-lab",
        description="GSEC representability checks, RHS ranges, and "
                    "desk-scale exact routing/spanning solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help="enumeration cap on vertices (default 8, "
                            "env GSEC_LAB_CAP)")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--output", default=None, help="write here, not stdout")

    p_check = sub.add_parser("check", help="decide representability")
    p_check.add_argument("family", help="family JSON file")
    common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_rhs = sub.add_parser("rhs", help="admissible RHS range (ell and u)")
    p_rhs.add_argument("family", help="family JSON file")
    common(p_rhs)
    p_rhs.set_defaults(func=cmd_rhs)

    p_solve = sub.add_parser("solve", help="solve a VRP or RCMST instance")
    p_solve.add_argument("instance", help="instance JSON file")
    p_solve.add_argument("--oracle-check", action="store_true",
                         help="also run the enumeration oracle and compare")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="run a randomized suite")
    p_verify.add_argument("--suite", choices=sorted(SUITES), required=True)
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GsecLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
