"""Command-line front end: ``mmslab <command> [options]``.

Exit codes: 0 success, 2 usage error, 3 an audit found a discrepancy,
4 a search ran out of budget.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from math import comb

from . import averaging, counterexample, cyclic, families, oracle, sumsets
from .assignments import (EXAMPLE_KINDS, count_nonnegative, example_assignment, fmt_fraction,
                          good_bad_partition, read_assignment)
from .constants import ConstantsTable
from .errors import UsageError
from .report import Report, write_report

EXIT_OK, EXIT_USAGE, EXIT_DISCREPANCY, EXIT_BUDGET = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p):
    p.add_argument("--out", help="write the report here instead of the results tree")
    p.add_argument("--reports-dir", help="results tree root (default: $MMSLAB_REPORTS or ./reports)")
    p.add_argument("--quiet", action="store_true", help="do not echo the report")
    for t in range(6):
        p.add_argument(f"--eps{t}", help=f"override eps{t} (exact rational, e.g. 1/10 or 1e-9)")


def _graph_args(p, default=None):
    g = p.add_mutually_exclusive_group(required=default is None)
    for kind in ("hnk", "complete", "tight-cycle", "matching"):
        g.add_argument(f"--{kind}", dest="kind", action="store_const", const=kind.replace("-", "_"))
    if default:
        p.set_defaults(kind=default)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)


def _assignment_args(p, default_example=None):
    p.add_argument("--assignment", help="file with one exact value per line")
    p.add_argument("--example", choices=[k.replace("_", "-") for k in EXAMPLE_KINDS], default=default_example)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mmslab", description="Exact experiments on nonnegative k-sums.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a hypergraph and report its degrees")
    _graph_args(p)
    p.add_argument("--collect-edges", action="store_true")
    _common(p)

    p = sub.add_parser("audit-covers", help="check the interval-cover identities of E(v,i,j)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k-max", type=int, help="audit every k from --k to --k-max")
    p.add_argument("--errata", action="store_true", help="use the reconstructed family lists")
    p.add_argument("--cone-check", action="store_true", help="also solve the exact cone LP per item")
    p.add_argument("--i", type=int, help="audit a single pair (needs --j)")
    p.add_argument("--j", type=int)
    _common(p)

    p = sub.add_parser("census", help="multiplicity of edges across the families E(v,i,j)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--errata", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    _common(p)

    p = sub.add_parser("count", help="count nonnegative edges under an assignment")
    _graph_args(p)
    _assignment_args(p)
    p.add_argument("--collect-edges", action="store_true")
    p.add_argument("--diagnostics", action="store_true", help="good/bad vertices via E(v) (H_{n,k} only)")
    _common(p)

    p = sub.add_parser("oracle", help="exact minimum of nonnegative edges, or bounds")
    _graph_args(p)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("averaging", help="permutation average versus the closed form")
    _graph_args(p)
    _assignment_args(p, default_example="star")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--mc", action="store_true")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    _common(p)

    p = sub.add_parser("sumset", help="sumset operations and audits in Z_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", help="comma-separated residues")
    p.add_argument("--b", help="comma-separated residues")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--audit", choices=["kneser", "kneser-random", "grynkiewicz", "growth"])
    p.add_argument("--t-max", type=int, default=3)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    _common(p)

    p = sub.add_parser("reproduce", help="rerun a named example")
    p.add_argument("name", choices=["three-heavy", "star", "tight-cycle", "h5k", "pair-sweep",
                                    "averaging-matching"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--k-max", type=int, default=30)
    _common(p)
    return ap


# -- helpers -------------------------------------------------------------------------

def _graph(a) -> cyclic.UniformHypergraph:
    if a.kind == "matching":
        return cyclic.build("matching", a.n, a.k, a.t)
    if a.n is None or a.k is None:
        raise UsageError(f"--{a.kind.replace('_', '-')} needs --n and --k")
    return cyclic.build(a.kind, a.n, a.k)


def _graph_inputs(a, H) -> dict:
    d = {"kind": a.kind, "n": H.n, "k": H.k}
    if a.kind == "matching":
        d["t"] = H.n // H.k
    return d


def _assignment(a, H):
    if getattr(a, "assignment", None):
        f = read_assignment(a.assignment)
        src = {"file": a.assignment}
    elif getattr(a, "example", None):
        kind = a.example.replace("-", "_")
        f = example_assignment(kind, H.n, H.k)
        src = {"example": kind}
    else:
        raise UsageError("give --assignment FILE or --example KIND")
    if f.n != H.n:
        raise UsageError(f"assignment has {f.n} values, hypergraph has {H.n} vertices")
    return f, src


def _constants(a) -> ConstantsTable:
    return ConstantsTable.with_overrides(**{f"eps{t}": getattr(a, f"eps{t}", None) for t in range(6)})


def _residues(text, k):
    if text is None:
        raise UsageError("--a and --b are required unless --audit is given")
    items = [s for s in text.split(",") if s.strip()]
    try:
        return sumsets.ResidueSet.of((int(s) for s in items), k)
    except ValueError:
        raise UsageError(f"bad residue list {text!r}") from None


# -- commands ------------------------------------------------------------------------------

def cmd_construct(a, consts):
    H = _graph(a)
    prof = cyclic.degree_profile(H)
    res = {"label": H.label, "num_edges": H.num_edges, "regular": prof.regular,
           "min_degree": prof.min_degree, "max_degree": prof.max_degree}
    if prof.regular:
        res["degree"] = prof.min_degree
    else:
        res["degrees"] = list(prof.degrees)
    if a.collect_edges:
        res["edges"] = cyclic.to_document(H)["edges"]
    verdict = {}
    if H.label == "hnk":
        ok = H.num_edges == H.n * (H.k - 1) ** 2 and prof.regular and prof.min_degree == H.k * (H.k - 1) ** 2
        verdict["hnk_counts"] = "verified" if ok else "discrepancy"
    code = EXIT_OK if all(v == "verified" for v in verdict.values()) else EXIT_DISCREPANCY
    return _graph_inputs(a, H), res, verdict, code


def cmd_audit_covers(a, consts):
    if (a.i is None) != (a.j is None):
        raise UsageError("--i and --j go together")
    if a.i is not None:
        k = a.k
        if k < 3 or not (1 <= a.i <= k - 1 and 1 <= a.j <= k - 1):
            raise UsageError(f"need k >= 3 and i, j in [1, {k - 1}]")
        rows = families.audit_pair(a.i, a.j, k, errata=a.errata, cone_check=a.cone_check)
        failed = sum(r.verdict == families.FAILED for r in rows)
        inputs = {"k": k, "i": a.i, "j": a.j, "errata": a.errata, "cone_check": a.cone_check}
        tag = families.case_tag(a.i, a.j, k)
        res = {"case_tag": tag, "guard": families.CASE_GUARDS[tag], "items": [r.as_dict() for r in rows]}
        verdict = {"covers": "verified" if not failed else f"{failed} failed identities"}
        return inputs, res, verdict, EXIT_OK if not failed else EXIT_DISCREPANCY
    ks = range(a.k, (a.k_max or a.k) + 1)
    per_k = {}
    failed = 0
    for k in ks:
        rep = families.audit_interval_covers(k, errata=a.errata, cone_check=a.cone_check)
        per_k[str(k)] = rep.as_dict()
        failed += len(rep.failures())
    inputs = {"k": a.k, "k_max": a.k_max or a.k, "errata": a.errata, "cone_check": a.cone_check}
    verdict = {"covers": "verified" if not failed else f"{failed} failed identities"}
    if a.errata:
        inputs["errata_changes"] = families.ERRATA_DESCRIPTION
    return inputs, {"per_k": per_k}, verdict, EXIT_OK if not failed else EXIT_DISCREPANCY


def cmd_census(a, consts):
    rep = families.multiplicity_census(a.n, a.k, errata=a.errata, workers=a.threads)
    c1 = consts["C1"]
    ok_bound = rep.max_multiplicity <= c1
    ok_fwd = rep.max_forward_multiplicity <= 55
    verdict = {"max_multiplicity_le_C1": ok_bound, "forward_max_le_55": ok_fwd,
               "slots_disjoint": rep.all_disjoint}
    ok = ok_bound and ok_fwd and rep.all_disjoint
    return ({"n": a.n, "k": a.k, "errata": a.errata, "threads": a.threads, "C1": c1},
            rep.as_dict(), verdict, EXIT_OK if ok else EXIT_DISCREPANCY)


def cmd_count(a, consts):
    H = _graph(a)
    f, src = _assignment(a, H)
    rep = count_nonnegative(f, H, collect=a.collect_edges)
    res = {"nonnegative_count": rep.nonnegative_count, "negative_edges_count": rep.negative_edges_count,
           "threshold": rep.threshold, "total_edges": rep.total_edges, "assignment_total": f.total}
    if a.collect_edges:
        res["nonnegative_edges"] = rep.nonnegative_edges
    inputs = dict(_graph_inputs(a, H), assignment=src)
    if a.diagnostics:
        if H.label != "hnk":
            raise UsageError("--diagnostics needs --hnk")
        d = good_bad_partition(f, H.k, consts["eps0"])
        res["bad_vertices"] = sorted(d.bad_vertices)
        inputs["eps0"] = consts["eps0"]
    verdict = {"below_min_degree": rep.below_threshold}
    return inputs, res, verdict, EXIT_OK


def cmd_oracle(a, consts):
    H = _graph(a)
    v = oracle.mms_verdict(H, effort=a.budget, seed=a.seed)
    # Unknown means the search (or the edge cap on it) ran out before deciding
    code = EXIT_BUDGET if v.status == oracle.UNKNOWN else EXIT_OK
    inputs = dict(_graph_inputs(a, H), budget=a.budget, seed=a.seed)
    return inputs, v.as_dict(), {"mms_property": v.status}, code


def cmd_averaging(a, consts):
    H = _graph(a)
    f, src = _assignment(a, H)
    inputs = dict(_graph_inputs(a, H), assignment=src)
    if a.mc:
        r = averaging.permutation_expectation_mc(f, H, a.samples, a.seed, threads=a.threads)
        inputs.update(mode="mc", samples=a.samples, seed=a.seed)
        ok = r.formula_value is None or averaging.within_standard_errors(r, r.formula_value)
        verdict = {"within_3_standard_errors": ok}
    else:
        r = averaging.permutation_expectation_exact(f, H)
        inputs["mode"] = "exact"
        ok = r.matches is not False
        verdict = {"exact_equals_formula": r.matches}
    return inputs, r.as_dict(), verdict, EXIT_OK if ok else EXIT_DISCREPANCY


def cmd_sumset(a, consts):
    k = a.k
    eps3, eps4 = consts["eps3"], consts["eps4"]
    if a.audit:
        if a.audit == "kneser":
            s = sumsets.exhaustive_kneser_audit(k, workers=a.threads)
        elif a.audit == "kneser-random":
            s = sumsets.random_kneser_audit(a.samples, k, a.seed)
        elif a.audit == "grynkiewicz":
            s = sumsets.exhaustive_grynkiewicz_audit(k, a.t_max)
        else:
            s = sumsets.exhaustive_growth_audit(k, eps3, eps4)
        inputs = {"audit": a.audit, "k_max": k, "eps3": eps3, "eps4": eps4}
        return inputs, s.as_dict(), {a.audit: "verified" if s.ok else "failures"}, \
            EXIT_OK if s.ok else EXIT_DISCREPANCY
    A, B = _residues(a.a, k), _residues(a.b, k)
    S = sumsets.sumset(A, B)
    res = {"A": sorted(A), "B": sorted(B), "sumset": sorted(S), "stabilizer": sorted(sumsets.stabilizer(S)),
           "multiplicity_sumsets": {str(i): sorted(sumsets.multiplicity_sumset(A, B, i))
                                    for i in range(1, len(A) * len(B) + 1)}}
    verdict = {}
    if len(A) and len(B):
        kn = sumsets.kneser_check(A, B)
        res["kneser"] = {"sumset_size": kn.sumset_size, "stabilizer_size": kn.stabilizer_size,
                         "a_plus_h": kn.a_plus_h, "b_plus_h": kn.b_plus_h, "bound": kn.bound}
        verdict["kneser"] = kn.holds
    if 1 <= a.t <= k:
        g = sumsets.grynkiewicz_audit(A, B, a.t, search_always=True)
        res["grynkiewicz"] = {"t": g.t, "lhs": g.lhs, "rhs": g.rhs, "branch_i": g.branch_i,
                              "branch_ii": g.branch_ii,
                              "removal": [list(x) for x in g.removal] if g.removal else None}
        verdict["grynkiewicz"] = g.certified
    if sumsets.symmetric_cover_failure(A) is None and sumsets.symmetric_cover_failure(B) is None:
        gr = sumsets.growth_check(A, B, None, eps3, eps4)
        res["growth"] = {"size": gr.size, "threshold": gr.threshold, "tie": gr.tie}
        verdict["growth"] = gr.holds
    inputs = {"k": k, "a": sorted(A), "b": sorted(B), "t": a.t, "eps3": eps3, "eps4": eps4}
    ok = all(verdict.values())
    return inputs, res, verdict, EXIT_OK if ok else EXIT_DISCREPANCY


def cmd_reproduce(a, consts):
    name = a.name
    if name == "three-heavy":
        k = a.k or 3
        n = 3 * k + 1
        c = count_nonnegative(example_assignment("three_heavy", n, k), cyclic.build_complete(n, k))
        target = comb(n - 1, k - 1)
        res = {"n": n, "k": k, "nonnegative_count": c.nonnegative_count, "expected": comb(3 * k - 2, k),
               "binom_n_minus_1": target}
        below = c.nonnegative_count < target
        verdict = {"count": "below C(n-1,k-1)" if below else "not below C(n-1,k-1)",
                   "matches_expected": c.nonnegative_count == comb(3 * k - 2, k)}
        ok = below and verdict["matches_expected"]
        return {"name": name, "k": k}, res, verdict, EXIT_OK if ok else EXIT_DISCREPANCY
    if name == "star":
        n, k = a.n or 10, a.k or 3
        c = count_nonnegative(example_assignment("star", n, k), cyclic.build_complete(n, k))
        ok = c.nonnegative_count == comb(n - 1, k - 1)
        return ({"name": name, "n": n, "k": k}, {"nonnegative_count": c.nonnegative_count,
                                                 "binom_n_minus_1": comb(n - 1, k - 1)},
                {"equals_C(n-1,k-1)": ok}, EXIT_OK if ok else EXIT_DISCREPANCY)
    if name == "tight-cycle":
        n = a.n or 10
        H = cyclic.build_tight_cycle(n, 3)
        f = example_assignment("tight_cycle_k3", n, 3)
        c = count_nonnegative(f, H)
        res = {"n": n, "assignment": [fmt_fraction(x) for x in f], "total": f.total,
               "nonnegative_count": c.nonnegative_count, "min_degree": c.threshold}
        return {"name": name, "n": n}, res, {"mms_property": "Fails" if c.below_threshold else "not refuted"}, \
            EXIT_OK if c.below_threshold else EXIT_DISCREPANCY
    if name in ("h5k", "pair-sweep"):
        lo = a.k or 4
        hi = a.k if (name == "h5k" and a.k) else a.k_max
        rep = counterexample.special_pair_sweep(hi, lo)
        verdict = {"consistent": rep.consistent, "first_k_below": rep.first_below}
        return {"name": name, "k_min": lo, "k_max": hi}, rep.as_dict(), verdict, \
            EXIT_OK if rep.consistent else EXIT_DISCREPANCY
    if name == "averaging-matching":
        from .assignments import Assignment
        H = cyclic.build_matching(2, 2)
        f = Assignment((3, -1, -1, -1))
        r = averaging.permutation_expectation_exact(f, H)
        return {"name": name}, r.as_dict(), {"exact_equals_formula": r.matches}, \
            EXIT_OK if r.matches else EXIT_DISCREPANCY
    raise UsageError(f"unknown example {name!r}")


COMMANDS = {"construct": cmd_construct, "audit-covers": cmd_audit_covers, "census": cmd_census,
            "count": cmd_count, "oracle": cmd_oracle, "averaging": cmd_averaging, "sumset": cmd_sumset,
            "reproduce": cmd_reproduce}


def run(argv=None) -> tuple[int, Report | None]:
    """Parse, dispatch and write the report. Returns (exit code, report)."""
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        consts = _constants(a)
        inputs, results, verdicts, code = COMMANDS[a.command](a, consts)
    except UsageError as exc:
        print(f"mmslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    inputs = dict(inputs)
    inputs["constants"] = consts.as_dict()
    rep = Report(a.command, inputs, results, verdicts)
    path = write_report(rep, a.out, a.reports_dir)
    if not a.quiet:
        sys.stdout.write(rep.dumps())
    print(f"report: {path}", file=sys.stderr)
    return code, rep


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
