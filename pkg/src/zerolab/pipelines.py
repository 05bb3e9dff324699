"""Turn fixtures into models, run their checks and collect reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import gkm, weyl
from .exactpoly import RationalSeries, expand_series, parse_laurent, parse_poly
from .groebner import GradedQuotient, InfiniteGradedPiece, buchberger, hilbert_function, saturate
from .liegroup import (
    MatrixElt,
    OneParamSubgroup,
    StructuralError,
    char_poly_on_section,
    centralizer,
    cstar_act,
    jacobian_determinant,
    kostant_section,
    principal_pair_gl,
)
from .exactpoly import WeightedGrading, format_poly
from .zeroscheme import (
    ChartedAction,
    ChartedSpace,
    Component,
    ComponentCurveSet,
    ProjectiveFactor,
    TruncationExceeded,
    build_zero_scheme,
    cech_cohomology_dim,
    global_sections_dim,
    poincare_series_report,
    reduced_ring_dims,
)

PASS, FAIL, SKIPPED, REFUSED = "pass", "fail", "skipped", "refused"

COMMAND_KINDS = {
    "zeroscheme": ("zeroscheme", "component-set"),
    "gkm-cohomology": ("gkm-graph",),
    "gkm-ktheory": ("bundle-data",),
    "kostant": ("section",),
    "series": ("series",),
}


@dataclass
class Options:
    degree_bound: Optional[int] = None
    long_running: bool = False
    only: Optional[str] = None


@dataclass
class Report:
    fixture: str
    kind: str
    checks: List[dict] = field(default_factory=list)
    tables: Dict[str, object] = field(default_factory=dict)

    def add(self, name: str, status: str, detail=None):
        if any(c["name"] == name for c in self.checks):
            raise ValueError(f"check {name!r} recorded twice")
        entry = {"name": name, "status": status}
        if detail is not None:
            entry["detail"] = detail
        self.checks.append(entry)

    @property
    def status(self) -> str:
        states = {c["status"] for c in self.checks}
        if FAIL in states:
            return FAIL
        if REFUSED in states:
            return REFUSED
        if states and states <= {SKIPPED}:
            return SKIPPED
        return PASS

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "kind": self.kind,
            "status": self.status,
            "checks": self.checks,
            "tables": self.tables,
        }


def _run_check(report: Report, opts: Options, name: str, fn: Callable[[], object]):
    """Run one check; ``fn`` returns ``True``/``False`` or ``(bool, detail)``."""
    if opts.only is not None and opts.only != name:
        report.add(name, SKIPPED, "not selected")
        return
    try:
        out = fn()
    except (TruncationExceeded, InfiniteGradedPiece) as exc:
        report.add(name, REFUSED, str(exc))
        return
    detail = None
    if isinstance(out, tuple):
        out, detail = out
    report.add(name, PASS if out else FAIL, detail)


def _frac(x):
    return str(x) if isinstance(x, Fraction) and x.denominator != 1 else int(x)


# ----------------------------------------------------------------------------
# builders


def section_from_json(data) -> "kostant_section":
    kind = data["kind"]
    params = data.get("parameters")
    if kind in ("reductive_gl", "reductive_sl"):
        return kostant_section(kind, n=int(data["n"]), parameters=params)
    diag = [MatrixElt.diag(list(d)) for d in data["torus_basis"]]
    H = OneParamSubgroup(tuple(int(x) for x in data["H"]))
    if kind == "torus":
        return kostant_section("torus", torus_basis=diag, H=H, parameters=params)
    e = MatrixElt.from_json(data["e"])
    return kostant_section(kind, e=e, torus_basis=diag, H=H, parameters=params)


def space_from_json(data) -> ChartedAction:
    factors = []
    for f in data["factors"]:
        hom = tuple(f.get("hom_names") or [f"x{i}" for i in range(int(f["size"]))])
        rels = tuple(parse_poly(r, hom) for r in f.get("relations", []))
        names = tuple(tuple(c) for c in f.get("chart_names", []))
        factors.append(ProjectiveFactor(int(f["size"]), hom, rels, names))
    space = ChartedSpace(factors)
    reps = tuple(data.get("reps") or ["standard"] * len(factors))
    return ChartedAction(space, reps)


def _chart_key(text: str):
    return tuple(int(x) for x in str(text).split(","))


def model_from_fixture(data):
    section = section_from_json(data["section"])
    action = space_from_json(data["space"])
    cover = data.get("cover")
    return build_zero_scheme(
        section,
        action,
        bound=int(data.get("truncation_bound", 20)),
        refine=bool(data.get("refine", False)),
        character_window=data.get("character_window"),
        cover=[_chart_key(c) for c in cover] if cover else None,
    )


def graph_from_json(data) -> gkm.MomentGraph:
    builder = data.get("builder")
    if builder is None:
        return gkm.MomentGraph.from_json(data)
    if builder == "projective":
        return gkm.projective_graph(int(data["n"]))
    if builder == "flag":
        return gkm.flag_graph(int(data["n"]))
    if builder == "grassmannian":
        return gkm.grassmannian_graph(int(data["k"]), int(data["n"]))
    if builder == "product":
        parts = [graph_from_json(f) for f in data["factors"]]
        g = parts[0]
        for p in parts[1:]:
            g = gkm.product_graph(g, p)
        return g
    raise StructuralError(f"unknown graph builder {builder!r}")


def series_from_json(data) -> RationalSeries:
    return RationalSeries.from_coefficients(data["num"], data["den"])


def _same_series(a: RationalSeries, b: RationalSeries) -> bool:
    na, da = a.numerator, a.denominator
    nb, db = b.numerator.rename(na.variables), b.denominator.rename(na.variables)
    return na * db == nb * da


def _bound(data, opts: Options, default: int) -> int:
    if opts.degree_bound is not None:
        return opts.degree_bound
    return int(data.get("degree_bound", default))


# ----------------------------------------------------------------------------
# zero schemes


def run_zeroscheme(data, opts: Options) -> Report:
    rep = Report(data["name"], data["kind"])
    if data.get("long_running") and not opts.long_running:
        rep.add("long-running", SKIPPED, "needs --long-running")
        return rep
    z = model_from_fixture(data)
    expect = data.get("expect", {})
    bound = _bound(data, opts, z.bound)
    rep.tables["cover"] = [",".join(map(str, c)) for c in z.cover]
    rep.tables["chart_ideals"] = {",".join(map(str, c)): z.chart_generators(c) for c in z.space.charts}

    for key, gens in sorted(expect.get("chart_ideals", {}).items()):
        chart = _chart_key(key)

        def chk(chart=chart, gens=gens):
            gb = z.chart_ideal(chart)
            want = buchberger([parse_poly(g, gb.variables) for g in gens], gb.order, gb.variables)
            return gb.same_ideal(want), {"computed": z.chart_generators(chart), "expected": gens}

        _run_check(rep, opts, f"chart-ideal-{key}", chk)

    if "saturation" in expect:
        sat = expect["saturation"]

        def chk_sat():
            chart = _chart_key(sat["chart"])
            gb = z.chart_ideal(chart)
            f = parse_poly(sat["at"], gb.variables)
            s = saturate(list(gb.generators), f)
            want = buchberger([parse_poly(g, gb.variables) for g in sat["ideal"]], s.order, gb.variables)
            return s.same_ideal(want), {"saturated": s.to_strings()}

        _run_check(rep, opts, "saturation", chk_sat)

    dims: List[Optional[int]] = []

    def chk_sections():
        oracle = _expected_sections(expect["global_sections"], bound)
        for d in range(bound + 1):
            dims.append(global_sections_dim(z, d))
        rep.tables["global_sections"] = dims
        bad = [d for d in range(bound + 1) if dims[d] != oracle[d]]
        return not bad, {"expected": oracle, "mismatched_degrees": bad}

    if "global_sections" in expect:
        _run_check(rep, opts, "global-sections", chk_sections)

    for i in expect.get("vanishing", []):

        def chk_van(i=i):
            vals = [cech_cohomology_dim(z, i, d) for d in range(bound + 1)]
            rep.tables[f"H{i}"] = vals
            return not any(vals), None

        _run_check(rep, opts, f"vanishing-H{i}", chk_van)

    if "closed_form" in expect:

        def chk_form():
            report = poincare_series_report(z, bound)
            form = report["series"]
            want = series_from_json(expect["closed_form"])
            rep.tables["closed_form"] = report["closed_form"]
            return form is not None and _same_series(form, want), {"detected": report["closed_form"]}

        _run_check(rep, opts, "closed-form", chk_form)

    if "cohomology_total" in expect:
        want = expect["cohomology_total"]

        def chk_total():
            per = {}
            refused = []
            for d in want["degrees"]:
                try:
                    per[str(d)] = cech_cohomology_dim(z, int(want["i"]), d)
                except InfiniteGradedPiece:
                    refused.append(d)
            total = sum(per.values())
            rep.tables[f"H{want['i']}_by_degree"] = per
            return total == want["total"], {"total": total, "refused_degrees": refused}

        _run_check(rep, opts, f"H{want['i']}-total", chk_total)
    return rep


def _expected_sections(want, bound):
    if "series" in want:
        return expand_series(series_from_json(want["series"]), bound)
    pres = want["presentation"]
    g = WeightedGrading(tuple(pres["variables"]), tuple(pres["weights"]))
    q = GradedQuotient.from_generators([parse_poly(x, g.variables) for x in pres["ideal"]], g)
    return [hilbert_function(q, d) for d in range(bound + 1)]


def components_from_json(data) -> ComponentCurveSet:
    comps = []
    for c in data["components"]:
        point = tuple(parse_poly(x, ("s",)) for x in c["point"]) if "point" in c else None
        params = tuple(parse_poly(x, ("s",)) for x in c["params"]) if "params" in c else None
        comps.append(Component(c["name"], int(c["weight"]), point, params))
    inc = tuple((int(a), Fraction(sa), int(b), Fraction(sb)) for a, sa, b, sb in data.get("incidences", []))
    return ComponentCurveSet(tuple(comps), inc)


def run_components(data, opts: Options) -> Report:
    from . import fixtures

    rep = Report(data["name"], data["kind"])
    cs = components_from_json(data)
    bound = _bound(data, opts, 12)
    if "model" in data:

        def chk_model():
            z = model_from_fixture(fixtures.load(data["model"]))
            return cs.check_in_model(z), None

        _run_check(rep, opts, "components-in-zero-scheme", chk_model)
    if "dims" in data.get("expect", {}):

        def chk_dims():
            dims = [reduced_ring_dims(cs, d) for d in range(bound + 1)]
            rep.tables["reduced_dims"] = dims
            want = data["expect"]["dims"][: bound + 1]
            return dims[: len(want)] == want, {"expected": want}

        _run_check(rep, opts, "reduced-dims", chk_dims)
    return rep


# ----------------------------------------------------------------------------
# GKM


def run_gkm_graph(data, opts: Options) -> Report:
    rep = Report(data["name"], data["kind"])
    g = graph_from_json(data["graph"])
    betti = [int(b) for b in data["betti"]]
    bound = _bound(data, opts, 16)
    r = g.r
    rep.tables["vertices"] = len(g.vertices)
    rep.tables["edges"] = len(g.edges)

    builder = data["graph"].get("builder")
    if builder in ("flag", "grassmannian"):

        def chk_betti():
            if builder == "flag":
                got = gkm.flag_betti(int(data["graph"]["n"]))
            else:
                got = gkm.grassmannian_betti(int(data["graph"]["k"]), int(data["graph"]["n"]))
            return got == betti, {"enumerated": got}

        _run_check(rep, opts, "betti-enumeration", chk_betti)

    def chk_dims():
        series = gkm.formality_series(betti, r)
        want = expand_series(series, bound)
        got = [gkm.gkm_cohomology_dim(g, d) for d in range(bound + 1)]
        rep.tables["dims"] = got
        rep.tables["formality"] = str(series)
        return got == want, {"expected": want}

    _run_check(rep, opts, "dims-vs-formality", chk_dims)
    _run_check(rep, opts, "connected-H0", lambda: gkm.gkm_cohomology_dim(g, 0) == g.components())
    return rep


def _bundle(g, b) -> gkm.EquivariantBundleData:
    return gkm.EquivariantBundleData(g.r, tuple(tuple(tuple(w) for w in fibre) for fibre in b["weights"]))


def run_bundles(data, opts: Options) -> Report:
    rep = Report(data["name"], data["kind"])
    g = graph_from_json(data["graph"])
    vs = g.variables
    order = int(data.get("chern_order", 4))
    expected_viol = data.get("expect", {}).get("violations")
    found_viol = {}
    for b in data.get("bundles", []):
        bd = _bundle(g, b)
        k = gkm.localize_bundle_K(bd)

        def chk_k(k=k, name=b["name"]):
            ok, viol = gkm.gkm_ktheory_check(k, g)
            found_viol[name] = viol
            return ok, {"class": k.to_json(), "violated_edges": [[a, c, list(al)] for a, c, al in viol]}

        _run_check(rep, opts, f"ktheory-{b['name']}", chk_k)
        if not data.get("negative"):
            _run_check(
                rep,
                opts,
                f"chern-gkm-{b['name']}",
                lambda bd=bd: all(gkm.is_gkm_class(gkm.localize_chern(bd, j), g) for j in range(bd.rank + 1)),
            )
            _run_check(rep, opts, f"chern-character-{b['name']}", lambda bd=bd: gkm.chern_character_check(bd, order))
    for c in data.get("classes", []):
        vals = tuple(parse_laurent(v, vs) for v in c["values"])

        def chk_c(vals=vals, name=c["name"]):
            ok, viol = gkm.gkm_ktheory_check(gkm.KTheoryClass(vals), g)
            found_viol[name] = viol
            return ok, {"violated_edges": [[a, b, list(al)] for a, b, al in viol]}

        _run_check(rep, opts, f"ktheory-{c['name']}", chk_c)
    if expected_viol:
        want = sorted(tuple(e) for e in expected_viol)
        got = sorted((a, b) for v in found_viol.values() for a, b, _ in v)
        rep.tables["expected_violations"] = [list(e) for e in want]
        rep.tables["found_violations"] = [list(e) for e in got]
    return rep


# ----------------------------------------------------------------------------
# sections and series


def run_section(data, opts: Options) -> Report:
    rep = Report(data["name"], data["kind"])
    sd = data["section"]
    s = section_from_json(sd)
    expect = data.get("expect", {})
    rep.tables["family"] = s.matrix().to_json()
    rep.tables["weights"] = list(s.grading.weights)
    cps = char_poly_on_section(s)
    rep.tables["char_poly"] = [format_poly(c) for c in cps]

    if sd["kind"] in ("reductive_gl", "reductive_sl"):
        n = int(sd["n"])
        pair = principal_pair_gl(n)
        _run_check(rep, opts, "e-regular", lambda: len(centralizer(pair.e)) == n)

    def chk_weights():
        w = cstar_act(s, s.subgroup)
        ok = all(x > 0 and x % 2 == 0 for x in w)
        if "weights" in expect:
            ok = ok and w == expect["weights"]
        return ok, {"weights": w}

    _run_check(rep, opts, "cstar-weights", chk_weights)
    if "family" in expect:
        _run_check(rep, opts, "family", lambda: s.matrix() == MatrixElt.from_json(expect["family"], s.parameters))
    if "char_poly" in expect:
        _run_check(
            rep,
            opts,
            "char-poly",
            lambda: [format_poly(c) for c in cps] == [format_poly(parse_poly(x, s.parameters)) for x in expect["char_poly"]],
        )
    if sd["kind"] == "reductive_gl":

        def chk_jac():
            j = jacobian_determinant(cps, s.parameters)
            return j.is_constant() and not j.is_zero(), {"jacobian": format_poly(j)}

        _run_check(rep, opts, "jacobian-constant", chk_jac)

        def chk_molien():
            n = int(sd["n"])
            g = weyl.symmetric_group(n)
            dims = [weyl.invariant_dim(g, d) for d in range(11)]
            rep.tables["invariant_dims"] = dims
            return dims == weyl.molien_coefficients(g, 10), None

        _run_check(rep, opts, "invariants-vs-molien", chk_molien)
    return rep


def run_series(data, opts: Options) -> Report:
    rep = Report(data["name"], data["kind"])
    terms = int(data.get("terms", 10))
    n = 2 * (terms - 1)
    exps = []
    for entry in data["series"]:
        exps.append(expand_series(series_from_json(entry), n))
    rep.tables["labels"] = [e["label"] for e in data["series"]]
    rep.tables["expansions"] = [[_frac(c) for c in e] for e in exps]
    expect = data.get("expect", {})
    if "expansions" in expect:
        _run_check(rep, opts, "expansions", lambda: [list(e) for e in exps] == [list(e)[: n + 1] for e in expect["expansions"]])
    if len(exps) == 2:
        diff = {str(k): _frac(a - b) for k, (a, b) in enumerate(zip(*exps)) if a != b}
        rep.tables["difference"] = diff
        if "difference" in expect:
            _run_check(rep, opts, "difference", lambda: diff == {k: v for k, v in expect["difference"].items()})
    return rep


RUNNERS = {
    "zeroscheme": run_zeroscheme,
    "component-set": run_components,
    "gkm-graph": run_gkm_graph,
    "bundle-data": run_bundles,
    "section": run_section,
    "series": run_series,
}


def run_fixture(data, opts: Optional[Options] = None) -> Report:
    opts = opts or Options()
    return RUNNERS[data["kind"]](data, opts)
