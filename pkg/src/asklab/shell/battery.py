"""
Cross-module verification battery.

A config names representations, graphs, Lie algebras and decompositions
together with ranges of q and m; every registered identity is evaluated on
every applicable object and recorded.  Checks that would exceed the budget
are recorded as skipped rather than run.
"""

import json
import math
from fractions import Fraction
from importlib import resources

import numpy as np

from asklab.errors import AskLabError, BudgetExceeded, DEFAULT_BUDGET
from asklab.exactcore import field_for
from asklab.graphloci import Graph, all_graphs, graph_rep, limit_congruence_check, load_graph
from asklab.grouplab.groups import (
    MAX_NAIVE_ORDER,
    baer_group,
    class_count_naive,
    general_linear_group,
    heisenberg_group,
    unitriangular_group,
)
from asklab.grouplab.lie import (
    LieData,
    elementary,
    full_nilpotent,
    lie_adjoint_rep,
    lie_exp_group,
    lie_inclusion_rep,
    load_lie,
)
from asklab.grouplab.orbits import mtheta_orbit_count, natural_orbit_count
from asklab.modrep import (
    ModuleRep,
    alternating_hull,
    ask,
    direct_sum,
    identity_rep,
    is_alternating,
    is_immersive,
    knuth_dual,
    load_rep,
    mth_power,
    rank_histogram,
    saturate,
)
from asklab.shell.pipeline import load_decomposition, mth_power_identities, theorem_a_check
from asklab.shell.report import CheckRecord, VerificationReport, timed
from asklab.shell.schemes import AffineScheme, affine_count, load_scheme

DEFAULT_QS = (2, 3, 4, 5, 7, 9)
DEFAULT_MS = (1, 2, 3)


# -- building objects from config entries ----------------------------------


def abelian_n4():
    """The abelian subalgebra <E13, E14, E23, E24> of n_4."""
    basis = [elementary(4, i, j) for i, j in ((1, 3), (1, 4), (2, 3), (2, 4))]
    return LieData(4, tuple(basis), "n4ab")


LIE_BUILTINS = {
    "n2": lambda: full_nilpotent(2),
    "n3": lambda: full_nilpotent(3),
    "n4": lambda: full_nilpotent(4),
    "n4ab": abelian_n4,
}


def build_lie(entry):
    if isinstance(entry, str):
        if entry not in LIE_BUILTINS:
            raise ValueError(f"unknown Lie algebra {entry!r}")
        return LIE_BUILTINS[entry]()
    return load_lie(entry)


def build_rep(entry):
    """Representations from a small JSON grammar.

    "idN" | tensor object | {"hull": R} | {"dual": R} | {"sum": [R, R]} |
    {"power": [R, m]} | {"iota": L} | {"ad": L} | {"graph": G} | {"scale": [R, k]},
    optionally with "name" and "expect" keys alongside.
    """
    if isinstance(entry, str):
        if entry.startswith("id") and entry[2:].isdigit():
            return identity_rep(int(entry[2:]))
        raise ValueError(f"unknown representation {entry!r}")
    name = entry.get("name")
    if "hull" in entry:
        rep = alternating_hull(build_rep(entry["hull"]))
    elif "dual" in entry:
        rep = knuth_dual(build_rep(entry["dual"]))
    elif "sum" in entry:
        a, b = entry["sum"]
        rep = direct_sum(build_rep(a), build_rep(b))
    elif "power" in entry:
        r, m = entry["power"]
        rep = mth_power(build_rep(r), int(m))
    elif "scale" in entry:
        r, k = entry["scale"]
        base = build_rep(r)
        rep = ModuleRep.from_array(base.array() * int(k), name=f"{k}*{base.name}", shape=base.shape)
    elif "iota" in entry:
        rep = lie_inclusion_rep(build_lie(entry["iota"]))
    elif "ad" in entry:
        rep = lie_adjoint_rep(build_lie(entry["ad"]))
    elif "graph" in entry:
        rep = graph_rep(load_graph(entry["graph"]))
    else:
        rep = load_rep(entry)
    return rep.renamed(name) if name else rep


def build_graphs(entry):
    if isinstance(entry, dict) and "all_up_to" in entry:
        return [g for n in range(int(entry["all_up_to"]) + 1) for g in all_graphs(n)]
    return [load_graph(g) for g in entry]


def default_config():
    raw = resources.files("asklab.data").joinpath("default_battery.json").read_text()
    return json.loads(raw)


# -- check runner ------------------------------------------------------------


class _Runner:
    def __init__(self, report, budget, only):
        self.report = report
        self.budget = budget
        self.only = set(only) if only else None

    def wants(self, check):
        return self.only is None or check in self.only

    def run(self, check, params, fn, repro=None):
        """fn() -> (lhs, rhs) compared for equality, or a CheckRecord."""
        if not self.wants(check):
            return
        try:
            with timed() as t:
                out = fn()
        except BudgetExceeded as exc:
            self.report.add(CheckRecord(check, params, None, None, "skip", note=str(exc)))
            return
        except AskLabError as exc:
            self.report.add(
                CheckRecord(check, params, None, None, "fail", note=f"{type(exc).__name__}: {exc}",
                            repro=repro or dict(params))
            )
            return
        if out is None:
            return
        if isinstance(out, CheckRecord):
            out.runtime = t["elapsed"]
            self.report.add(out)
            return
        lhs, rhs = out
        ok = _same(lhs, rhs)
        self.report.add(
            CheckRecord(check, params, _num(lhs), _num(rhs), "pass" if ok else "fail", None,
                        t["elapsed"], "", None if ok else (repro or dict(params)))
        )

    def skip(self, check, params, note):
        if self.wants(check):
            self.report.add(CheckRecord(check, params, None, None, "skip", note=note))


def _same(a, b):
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b or a == b
    return Fraction(a) == Fraction(b)


def _num(x):
    return int(x) if isinstance(x, bool) else x


def _budgeted(n, budget):
    if n > budget:
        raise BudgetExceeded(n, budget)


# -- identities on representations --------------------------------------------


def kernel_scheme(theta):
    """Pairs (x, a) in F^d x F^l with x (a theta) = 0, as an affine scheme."""
    l, d, e = theta.shape
    c = theta.array()
    polys = []
    for j in range(e):
        terms = []
        for k in range(l):
            for i in range(d):
                if c[k][i][j]:
                    exps = [0] * (d + l)
                    exps[i] = 1
                    exps[d + k] = 1
                    terms.append((int(c[k][i][j]), tuple(exps)))
        polys.append(tuple(terms))
    return AffineScheme(d + l, tuple(polys), f"ker({theta.name})")


def _rep_checks(run, theta, qs, ms, budget, expect):
    l, d, e = theta.shape
    name = theta.name
    base = {"rep": name}
    repro = {"tensor": theta.to_json()}

    run.run("double dual", base, lambda: (knuth_dual(knuth_dual(theta)) == theta, True), repro)
    if is_immersive(theta):
        for m in ms:
            run.run("immersive under powers", {**base, "m": m},
                    lambda m=m: (is_immersive(mth_power(theta, m)), True), repro)
    if "alternating" in expect:
        run.run("alternating claim", base, lambda: (is_alternating(theta), bool(expect["alternating"])), repro)
    if "immersive" in expect:
        run.run("immersive claim", base, lambda: (is_immersive(theta), bool(expect["immersive"])), repro)

    for q in qs:
        F = field_for(q)
        p = {**base, "q": F.q}
        if str(F.q) in expect.get("ask", {}):
            run.run("expected ask", p,
                    lambda: (ask(theta, F.pp, budget=budget).fraction(), Fraction(expect["ask"][str(F.q)])),
                    repro)
        for m in ms:
            run.run("histogram power formula", {**p, "m": m}, lambda m=m: (
                ask(theta, F.pp, m=m, budget=budget).fraction(),
                ask(theta, F.pp, m=m, naive=True, budget=budget).fraction(),
            ), repro)

        run.run("hull-dual identity", p, lambda: (
            ask(theta, F.pp, m=2, budget=budget).fraction(),
            ask(alternating_hull(knuth_dual(theta)), F.pp, budget=budget).scaled(d - e),
        ), repro)

        def kernel_count():
            Y = kernel_scheme(theta)
            return affine_count(Y, F.pp, budget), ask(theta, F.pp, budget=budget).scaled(l)

        run.run("kernel scheme count", p, kernel_count, repro)

        def orbit_modes():
            _budgeted(F.q ** (l + d + e), budget)
            bfs = mtheta_orbit_count(theta, F.pp, "bfs", budget)
            burn = mtheta_orbit_count(theta, F.pp, "burnside", budget)
            form = mtheta_orbit_count(theta, F.pp, "formula", budget)
            ok = bfs == burn == form
            return CheckRecord("orbit modes", p, bfs, form, "pass" if ok else "fail",
                               note=f"burnside {burn}", repro=None if ok else repro)

        run.run("orbit modes", p, orbit_modes, repro)

        def saturation():
            sat, index = saturate(theta)
            if math.gcd(index, F.p) != 1:
                return CheckRecord("saturation", p, None, None, "skip", note=f"index {index} not prime to q")
            return ask(theta, F.pp, budget=budget).fraction(), ask(sat, F.pp, budget=budget).fraction()

        run.run("saturation", p, saturation, repro)

        hull = alternating_hull(theta)
        hl, _, he = hull.shape

        def baer():
            _budgeted(F.q ** (hl + he), MAX_NAIVE_ORDER)
            G = baer_group(hull, F.pp, budget)
            return class_count_naive(G), ask(hull, F.pp, budget=budget).scaled(he)

        run.run("baer class number", {**p, "group": f"hull({name})"}, baer, repro)

        if is_alternating(theta):
            def baer_self():
                _budgeted(F.q ** (l + e), MAX_NAIVE_ORDER)
                G = baer_group(theta, F.pp, budget)
                return class_count_naive(G), ask(theta, F.pp, budget=budget).scaled(e)

            run.run("baer class number", {**p, "group": name}, baer_self, repro)

            def center():
                _budgeted(F.q ** (l + e), MAX_NAIVE_ORDER)
                G = baer_group(theta, F.pp, budget)
                codomain = np.all(G.elements[:, :l] == 0, axis=1)
                return bool(np.all(G.center_mask()[codomain])), True

            run.run("baer center contains codomain", p, center, repro)

        def heis():
            _budgeted(F.q ** (l + d + e), MAX_NAIVE_ORDER)
            k = class_count_naive(heisenberg_group(theta, F.pp, budget))
            dual_form = ask(knuth_dual(theta), F.pp, m=2, budget=budget).scaled(l - d + e)
            hull_form = ask(hull, F.pp, budget=budget).scaled(e)
            ok = k == dual_form == hull_form
            return CheckRecord("heisenberg class number", p, k, dual_form, "pass" if ok else "fail",
                               note=f"hull form {hull_form}", repro=None if ok else repro)

        run.run("heisenberg class number", p, heis, repro)

        for m in ms:
            run.run("power identities", {**p, "m": m},
                    lambda m=m: _as_record(mth_power_identities(theta, m, F.pp, budget), p, m), repro)


def _as_record(sub, params, m):
    """Collapse the two power identities into one row."""
    bad = [r for r in sub.records if r.status == "fail"]
    first = (bad or sub.records)[0]
    note = "; ".join(f"{r.check}: {r.status}" + (f" ({r.note})" if r.note else "") for r in sub.records)
    status = "fail" if bad else ("skip" if all(r.status == "skip" for r in sub.records) else "pass")
    return CheckRecord("power identities", {**params, "m": m}, first.lhs, first.rhs, status, note=note,
                       repro=first.repro)


def _pair_checks(run, reps, qs, budget):
    for a, b in zip(reps, reps[1:] + reps[:1]):
        if a is b:
            continue
        for q in qs:
            F = field_for(q)
            p = {"rep": f"{a.name} + {b.name}", "q": F.q}
            run.run("direct sum multiplicativity", p, lambda: (
                ask(direct_sum(a, b), F.pp, budget=budget).fraction(),
                ask(a, F.pp, budget=budget).fraction() * ask(b, F.pp, budget=budget).fraction(),
            ), {"left": a.to_json(), "right": b.to_json()})


# -- graphs, Lie algebras and matrix groups ------------------------------------


def _graph_checks(run, graphs, qs, ms, budget):
    for g in graphs:
        base = {"graph": str(g)}
        rep = graph_rep(g)
        run.run("graph module rank", base, lambda: (rep.l, g.n * (g.n + 1) // 2 - len(g.edges)))
        run.run("graph immersive", base, lambda: (is_immersive(rep), True))
        perm = list(reversed(range(g.n)))
        for q in qs:
            F = field_for(q)
            p = {**base, "q": F.q}
            run.run("graph relabel invariance", p, lambda: (
                rank_histogram(rep, F.pp, budget).counts == rank_histogram(graph_rep(g.relabel(perm)), F.pp, budget).counts,
                True,
            ))
            for m in sorted(set(ms) | {max(ms) + 1}):
                def limit(m=m):
                    res = limit_congruence_check(g, F.pp, m, budget)
                    return CheckRecord("limit congruence", {**p, "m": m}, res.lhs, res.rhs,
                                       "pass" if res.holds else "fail", res.valuation,
                                       repro=None if res.holds else res.to_json())

                run.run("limit congruence", {**p, "m": m}, limit)


def _lie_checks(run, algebras, qs, budget):
    for L in algebras:
        base = {"lie": L.name}
        try:
            iota, ad = lie_inclusion_rep(L), lie_adjoint_rep(L)
        except AskLabError as exc:
            run.report.add(CheckRecord("lie validate", base, None, None, "fail", note=str(exc), repro=L.to_json()))
            continue
        for q in qs:
            F = field_for(q)
            p = {**base, "q": F.q}
            if F.p < L.n:
                run.skip("lie orbit count", p, f"p = {F.p} < n = {L.n}")
                run.skip("lie class count", p, f"p = {F.p} < n = {L.n}")
                continue

            def group():
                _budgeted(F.q**L.dim, MAX_NAIVE_ORDER)
                return lie_exp_group(L, F.pp, budget)

            run.run("lie orbit count", p, lambda: (
                natural_orbit_count(group(), L.n, budget=budget), ask(iota, F.pp, budget=budget).fraction()),
                L.to_json())
            run.run("lie class count", p, lambda: (
                class_count_naive(group()), ask(ad, F.pp, budget=budget).fraction()), L.to_json())


def _matrix_group_checks(run, cfg, budget):
    for n, q in cfg.get("unitriangular", []):
        F = field_for(q)
        run.run("unitriangular orbits", {"n": n, "q": F.q}, lambda n=n, F=F: (
            natural_orbit_count(unitriangular_group(n, F.pp), n, budget=budget), n * F.q - n + 1))
    for q in cfg.get("gl2", []):
        F = field_for(q)
        run.run("GL2 orbits", {"n": 2, "q": F.q}, lambda F=F: (
            natural_orbit_count(general_linear_group(2, F.pp), 2, budget=budget), 2))


def _pipeline_checks(run, entries, budget):
    for entry in entries:
        Y = load_scheme(entry["scheme"])
        D = load_decomposition(entry["decomposition"])
        n = int(entry.get("n", 1))
        qs = entry.get("q", [2, 3])
        if not run.wants("pipeline"):
            continue
        try:
            sub = theorem_a_check(Y, D, n, qs, budget, group_side=entry.get("group_side", False))
        except BudgetExceeded as exc:
            run.skip("pipeline", {"scheme": Y.name, "n": n}, str(exc))
            continue
        except AskLabError as exc:
            run.report.add(CheckRecord("pipeline", {"scheme": Y.name, "n": n}, None, None, "fail",
                                       note=f"{type(exc).__name__}: {exc}",
                                       repro={"scheme": Y.to_json(), "decomposition": D.to_json()}))
            continue
        for r in sub.records:
            r.check = f"pipeline: {r.check}"
        run.report.extend(sub)


# -- entry point ---------------------------------------------------------------


def verify_battery(config=None, budget=None):
    """Run every registered identity named by config; None means the shipped default."""
    if config is None:
        config = default_config()
    budget = int(config.get("budget", budget or DEFAULT_BUDGET))
    report = VerificationReport(meta={"budget": budget})
    run = _Runner(report, budget, config.get("checks"))
    qs = config.get("q", DEFAULT_QS)
    ms = config.get("m", DEFAULT_MS)

    reps = []
    for entry in config.get("reps", []):
        rep = build_rep(entry)
        expect = entry.get("expect", {}) if isinstance(entry, dict) else {}
        reps.append(rep)
        _rep_checks(run, rep, qs, ms, budget, expect)
    if len(reps) > 1:
        _pair_checks(run, reps, [q for q in qs if q <= 3], budget)

    for entry in config.get("saturation_examples", []):
        theta = build_rep(entry["rep"])
        for q, rel in entry["expect"].items():
            F = field_for(int(q))

            def compare(theta=theta, F=F, rel=rel):
                a = ask(theta, F.pp, budget=budget).fraction()
                b = ask(saturate(theta)[0], F.pp, budget=budget).fraction()
                ok = (a == b) == (rel == "equal")
                return CheckRecord("saturation example", {"rep": theta.name, "q": F.q}, a, b,
                                   "pass" if ok else "fail", note=f"expected {rel}",
                                   repro=None if ok else theta.to_json())

            run.run("saturation example", {"rep": theta.name, "q": F.q}, compare, theta.to_json())

    if "graphs" in config:
        _graph_checks(run, build_graphs(config["graphs"]), qs, ms, budget)
    _lie_checks(run, [build_lie(s) for s in config.get("lie", [])], qs, budget)
    _matrix_group_checks(run, config, budget)
    _pipeline_checks(run, config.get("pipeline", []), budget)
    return report
