"""Command line entry point: `asklab <group> <command> [options]`."""

import argparse
import csv
import io
import sys
from fractions import Fraction

from asklab.errors import DEFAULT_BUDGET, AskLabError, BudgetExceeded
from asklab.exactcore import field_for

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class Result:
    """A command's output: a JSON payload plus its human-readable rendering."""

    def __init__(self, payload, text=None, report=None, status=EXIT_OK):
        self.payload = payload
        self.text = text
        self.report = report
        self.status = status

    def render(self, fmt):
        from asklab.shell.io import dumps

        if self.report is not None:
            if fmt == "json":
                return dumps(self.report.to_json())
            if fmt == "csv":
                return self.report.to_csv()
            return self.report.to_table()
        if fmt == "json":
            return dumps(self.payload)
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            flat = {k: v for k, v in self.payload.items() if not isinstance(v, (dict, list))}
            w.writerow(flat.keys())
            w.writerow(flat.values())
            return buf.getvalue()
        if self.text is not None:
            return self.text
        return dumps(self.payload)


def _frac_payload(x, q):
    from asklab.shell.report import qpair

    num, den_exp = qpair(x, q)
    return {"value": str(Fraction(x)), "num": num, "den_exp": den_exp}


def _ask_text(value):
    return f"{value} (num {value.numerator}, den-exp {value.denom_exp})"


# -- field / rep -----------------------------------------------------------------


def cmd_field_info(args):
    F = field_for(args.q)
    meta = F.metadata()
    text = f"F_{F.q}: p = {F.p}, f = {F.f}, modulus coefficients (c0..cf) = {meta['modulus']}"
    return Result(meta, text)


def cmd_rep(args):
    from asklab import modrep
    from asklab.shell.io import dumps, read_rep

    theta = read_rep(args.rep)
    budget = args.budget
    if args.command == "ask":
        v = modrep.ask(theta, args.q, m=args.m, naive=args.naive, budget=budget, workers=args.threads)
        payload = {"rep": theta.name, "q": v.q.q, "m": args.m, "value": str(v.fraction()),
                   "num": v.numerator, "den_exp": v.denom_exp}
        return Result(payload, _ask_text(v))
    if args.command == "hist":
        h = modrep.rank_histogram(theta, args.q, budget, args.threads)
        payload = {"rep": theta.name, "q": h.q.q, "l": h.l, "d": h.d, "counts": list(h.counts)}
        text = "\n".join(f"rank {i}: {c}" for i, c in enumerate(h.counts))
        if len(h.counts) <= h.d or h.counts[h.d] == 0:
            print(f"asklab: warning: no module element has rank d = {h.d}; V_max is empty", file=sys.stderr)
        return Result(payload, text)
    if args.command == "check":
        payload = {"rep": theta.name, "shape": list(theta.shape),
                   "alternating": modrep.is_alternating(theta), "immersive": modrep.is_immersive(theta)}
        text = "\n".join(f"{k}: {v}" for k, v in payload.items())
        return Result(payload, text)
    if args.command == "saturate":
        sat, index = modrep.saturate(theta)
        payload = {"index": index, "rep": sat.to_json()}
        return Result(payload, dumps(payload))
    if args.command == "dual":
        out = modrep.knuth_dual(theta)
    elif args.command == "hull":
        out = modrep.alternating_hull(theta)
    elif args.command == "power":
        out = modrep.mth_power(theta, args.m)
    elif args.command == "sum":
        if not args.other:
            raise _Usage("rep sum needs --other")
        out = modrep.direct_sum(theta, read_rep(args.other))
    return Result(out.to_json(), dumps(out.to_json()))


# -- groups ------------------------------------------------------------------------


def _group_payload(G, k, mode):
    return {"kind": G.kind, "params": {k2: v for k2, v in G.params.items() if k2 != "field"},
            "q": G.field.q, "order": G.order, "class_count": k, "mode": mode}


def cmd_group(args):
    from asklab.grouplab import groups, orbits, structural
    from asklab.shell.io import read_rep

    budget = args.budget
    if args.command in ("baer", "heisenberg"):
        theta = read_rep(args.rep)
        F = field_for(args.q)
        if args.mode == "structural":
            k = structural.class_count_structural(theta, F.pp, args.command, budget)
            l, d, e = theta.shape
            order = F.q ** (l + e) if args.command == "baer" else F.q ** (l + d + e)
            payload = {"kind": args.command, "theta": theta.name, "q": F.q, "order": order,
                       "class_count": k, "mode": "structural"}
        else:
            build = groups.baer_group if args.command == "baer" else groups.heisenberg_group
            G = build(theta, F.pp, budget)
            payload = _group_payload(G, groups.class_count_naive(G), "naive")
        return Result(payload, f"{payload['class_count']} classes (order {payload['order']}, {payload['mode']})")
    if args.command == "mtheta":
        theta = read_rep(args.rep)
        n = orbits.mtheta_orbit_count(theta, args.q, args.mode or "bfs", budget)
        payload = {"theta": theta.name, "q": field_for(args.q).q, "orbits": n, "mode": args.mode or "bfs"}
        return Result(payload, f"{n} orbits")
    # matrix groups
    F = field_for(args.q)
    if args.kind == "unitriangular":
        G = groups.unitriangular_group(args.n, F.pp)
    else:
        G = groups.general_linear_group(args.n, F.pp)
    if args.command == "classes":
        k = groups.class_count_naive(G, max_order=max(budget, groups.MAX_NAIVE_ORDER))
        payload = _group_payload(G, k, "naive")
        return Result(payload, f"{k} classes (order {G.order})")
    n_orb = orbits.natural_orbit_count(G, args.n, budget=budget)
    payload = {"kind": args.kind, "n": args.n, "q": F.q, "order": G.order, "orbits": n_orb}
    return Result(payload, f"{n_orb} orbits on F_{F.q}^{args.n} (order {G.order})")


def cmd_lie(args):
    from asklab.grouplab import lie
    from asklab.grouplab.groups import class_count_naive
    from asklab.grouplab.orbits import natural_orbit_count
    from asklab.shell.io import dumps, read_lie

    L = read_lie(args.lie)
    if args.command == "validate":
        s = lie.lie_validate(L)
        payload = {"lie": L.name, "n": L.n, "dim": L.dim, "structure_constants": s}
        return Result(payload, f"valid: n = {L.n}, dim = {L.dim}")
    if args.command in ("iota", "ad"):
        rep = lie.lie_inclusion_rep(L) if args.command == "iota" else lie.lie_adjoint_rep(L)
        return Result(rep.to_json(), dumps(rep.to_json()))
    if args.q is None:
        raise _Usage(f"lie {args.command} needs --q")
    G = lie.lie_exp_group(L, args.q, args.budget)
    if args.command == "exp":
        payload = _group_payload(G, None, "closure")
        del payload["class_count"]
        return Result(payload, f"exp group of order {G.order}")
    if args.command == "orbits":
        n = natural_orbit_count(G, L.n, budget=args.budget)
        return Result({"lie": L.name, "q": G.field.q, "orbits": n}, f"{n} orbits")
    k = class_count_naive(G)
    return Result({"lie": L.name, "q": G.field.q, "class_count": k}, f"{k} classes")


# -- graphs, schemes, pipeline -------------------------------------------------------


def cmd_graph(args):
    from asklab import graphloci
    from asklab.shell.io import dumps, read_graph

    g = read_graph(args.graph)
    if args.command == "rep":
        rep = graphloci.graph_rep(g)
        payload = {"graph": g.to_json(), "l": rep.l,
                   "basis": [list(b) for b in graphloci.graph_basis(g)], "rep": rep.to_json()}
        return Result(payload, dumps(payload))
    if args.q is None:
        raise _Usage(f"graph {args.command} needs --q")
    if args.command == "vmax":
        n = graphloci.graph_vmax(g, args.q, args.budget)
        return Result({"graph": g.to_json(), "q": field_for(args.q).q, "vmax": n}, str(n))
    res = graphloci.limit_congruence_check(g, args.q, args.m, args.budget)
    mod = res.q**res.m
    verdict = "PASS" if res.holds else "FAIL"
    text = (f"{verdict}: q^l ask = {res.lhs} = {res.lhs % mod}, V_max = {res.rhs} = {res.rhs % mod} "
            f"(mod {mod}); congruence exponent {res.valuation if res.valuation is not None else 'inf'}")
    return Result(res.to_json(), text, status=EXIT_OK if res.holds else EXIT_FAIL)


def cmd_scheme(args):
    from asklab.shell.io import read_scheme
    from asklab.shell.schemes import affine_count

    Y = read_scheme(args.scheme)
    n = affine_count(Y, args.q, args.budget)
    return Result({"scheme": Y.name, "q": field_for(args.q).q, "count": n}, str(n))


def cmd_pipeline(args):
    from asklab.shell.io import read_decomposition, read_scheme
    from asklab.shell.pipeline import hm_combination, theorem_a_check

    D = read_decomposition(args.decomp)
    if args.command == "hm":
        if len(args.q) != 1:
            raise _Usage("pipeline hm takes a single --q")
        q = field_for(args.q[0]).q
        v = hm_combination(D, args.m, q, args.budget)
        payload = {"q": q, "m": args.m, **_frac_payload(v, q)}
        return Result(payload, str(v))
    if not args.scheme:
        raise _Usage("pipeline theorem-a needs --scheme")
    rep = theorem_a_check(read_scheme(args.scheme), D, args.n, args.q, args.budget)
    return Result(None, report=rep, status=EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_verify(args):
    from asklab.shell.battery import verify_battery
    from asklab.shell.io import read_json

    config = read_json(args.config) if args.config else None
    rep = verify_battery(config, budget=args.budget)
    return Result(None, report=rep, status=EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_fit(args):
    from asklab.qseries import laurent_fit, read_samples

    f = laurent_fit(read_samples(args.samples), (args.lo, args.hi))
    if f is None:
        return Result({"fit": None}, "none")
    return Result({"fit": f.to_json(), "text": str(f)}, str(f))


# -- parser --------------------------------------------------------------------------


class _Usage(Exception):
    pass


def _global(p, suppress=False):
    # subcommand copies must not overwrite values given before the subcommand
    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--budget", type=int, default=dflt(DEFAULT_BUDGET), help="max points enumerated per call")
    p.add_argument("--threads", type=int, default=dflt(1), help="worker processes for enumeration")
    p.add_argument("--format", choices=("json", "csv", "table"), default=dflt("table"))
    p.add_argument("--out", default=dflt(None), help="write output to this file instead of stdout")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _global(common, suppress=True)
    parser = argparse.ArgumentParser(prog="asklab", description=__doc__)
    _global(parser)
    top = parser.add_subparsers(dest="group", required=True)

    def sub(parent, name, choices, handler, help_):
        p = parent.add_parser(name, parents=[common], help=help_)
        p.add_argument("command", choices=choices)
        p.set_defaults(handler=handler)
        return p

    p = sub(top, "field", ["info"], cmd_field_info, "finite field details")
    p.add_argument("--q", type=int, required=True)

    p = sub(top, "rep", ["ask", "hist", "dual", "hull", "power", "sum", "saturate", "check"], cmd_rep,
            "module representations")
    p.add_argument("--rep", required=True, help="representation JSON (or builtin:NAME)")
    p.add_argument("--other", help="second representation for sum")
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--naive", action="store_true", help="sum kernel sizes directly")

    p = sub(top, "group", ["baer", "heisenberg", "mtheta", "classes", "orbits"], cmd_group,
            "groups built from representations, and matrix groups")
    p.add_argument("--rep")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", help="naive|structural for class counts, bfs|burnside|formula for mtheta")
    p.add_argument("--kind", choices=("unitriangular", "gl"), default="unitriangular")
    p.add_argument("--n", type=int, default=2)

    p = sub(top, "lie", ["validate", "iota", "ad", "exp", "orbits", "classes"], cmd_lie,
            "nilpotent Lie algebras of matrices")
    p.add_argument("--lie", required=True, help="Lie JSON, or one of n2, n3, n4, n4ab")
    p.add_argument("--q", type=int)

    p = sub(top, "graph", ["rep", "vmax", "limit-check"], cmd_graph, "graph representations")
    p.add_argument("--graph", required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int, default=1)

    p = sub(top, "scheme", ["count"], cmd_scheme, "affine point counts")
    p.add_argument("--scheme", required=True)
    p.add_argument("--q", type=int, required=True)

    p = sub(top, "pipeline", ["hm", "theorem-a"], cmd_pipeline, "graph decompositions of point counts")
    p.add_argument("--decomp", required=True)
    p.add_argument("--scheme")
    p.add_argument("--q", type=int, nargs="+", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)

    p = top.add_parser("verify", parents=[common], help="run the verification battery")
    p.add_argument("--config", help="battery config JSON; default is the shipped config")
    p.set_defaults(handler=cmd_verify)

    p = top.add_parser("fit", parents=[common], help="fit a Laurent polynomial to sampled values")
    p.add_argument("--samples", required=True, help="CSV with columns q_p, q_f, num, den_exp")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.set_defaults(handler=cmd_fit)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    from asklab.shell.io import write_text

    try:
        if getattr(args, "q", None) is None and args.group == "rep" and args.command in ("ask", "hist"):
            raise _Usage(f"rep {args.command} needs --q")
        result = args.handler(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"asklab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"asklab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AskLabError, ValueError, OSError) as exc:
        print(f"asklab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_text(result.render(args.format), args.out)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
