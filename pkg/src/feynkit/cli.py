"""Command-line front end: one subcommand per module plus `verify-all`.

Output is deterministic: exact scalars print as num/den, floats with 15
significant digits, and rows come out in config order.
"""
import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import acceptance
from . import asymptotics as asym
from . import cft, gaussian, graphs, matrixmodels as mm, qm1d, renorm, trees
from .feynman import Action, connected_expansion, effective_action, one_loop, partition_expansion, tree_level
from .series import Series


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    action: str = None
    params: dict = field(default_factory=dict)
    tol: float = None
    seed: int = 0
    format: str = "text"
    jobs: int = 1


def fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, float):
        return "%.15g" % x
    if isinstance(x, complex):
        return "%.15g%+.15gj" % (x.real, x.imag)
    if x is None:
        return ""
    return str(x)


def jsonable(x):
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, (Fraction, float, complex)):
        return fmt(x)
    if isinstance(x, dict):
        return {fmt(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return fmt(x)


class Report:
    """Either a scalar/structured value or a table of rows."""

    def __init__(self, value=None, header=None, rows=None, ok=True):
        self.value = value
        self.header = header
        self.rows = rows
        self.ok = ok

    def render(self, form):
        if self.rows is not None:
            if form == "json":
                return json.dumps([dict(zip(self.header, map(jsonable, r))) for r in self.rows], indent=1) + "\n"
            if form == "csv":
                buf = io.StringIO()
                w = csv.writer(buf, lineterminator="\n")
                w.writerow(self.header)
                for r in self.rows:
                    w.writerow([fmt(v) for v in r])
                return buf.getvalue()
            widths = [max(len(h), *(len(fmt(r[i])) for r in self.rows)) if self.rows else len(h)
                      for i, h in enumerate(self.header)]
            lines = ["  ".join(h.ljust(w) for h, w in zip(self.header, widths)).rstrip()]
            for r in self.rows:
                lines.append("  ".join(fmt(v).ljust(w) for v, w in zip(r, widths)).rstrip())
            return "\n".join(lines) + "\n"
        if form == "json":
            return json.dumps(jsonable(self.value), indent=1) + "\n"
        if form == "csv" and isinstance(self.value, dict):
            return Report(header=["key", "value"], rows=list(self.value.items())).render("csv")
        if isinstance(self.value, dict):
            return "".join("%s: %s\n" % (fmt(k), fmt(v)) for k, v in self.value.items())
        return fmt(self.value) + "\n"


# ---------------------------------------------------------------- parsing helpers

def number(text):
    """Fraction for rational-looking input, float otherwise."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)
    except ValueError:
        raise UsageError("not a number: %r" % text)


def number_list(text):
    return [number(t) for t in text.split(",") if t.strip()]


def complex_number(text):
    t = text.strip().replace(" ", "")
    if t == "i":
        return 1j
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise UsageError("not a complex number: %r" % text)


def coefficient_list(text):
    """JSON list, or a bracketed comma list that may contain bare fractions like 1/2."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        t = text.strip()
        if not (t.startswith("[") and t.endswith("]")):
            raise UsageError("bad coefficient list: %r" % text)
        data = [c for c in t[1:-1].split(",") if c.strip()]
    if not isinstance(data, list):
        raise UsageError("expected a list of coefficients")
    try:
        return [Fraction(str(c).strip()) for c in data]
    except (ValueError, ZeroDivisionError):
        raise UsageError("bad coefficient list: %r" % text)


def json_series(text, order=None):
    coeffs = coefficient_list(text)
    return Series(coeffs, order if order is not None else len(coeffs))


def need(params, *names):
    for n in names:
        if params.get(n) is None:
            raise UsageError("missing --%s" % n.replace("_", "-"))


# ---------------------------------------------------------------- handlers

def do_gaussian(cfg):
    p = cfg.params
    if cfg.action == "moment":
        need(p, "k")
        return Report(gaussian.moment_1d(p["k"], number(p["b"]) if p.get("b") else 1))
    if cfg.action == "pfaffian":
        need(p, "matrix")
        A = [[Fraction(str(x)) for x in row] for row in json.loads(p["matrix"])]
        return Report(gaussian.pfaffian(A))
    raise UsageError("gaussian: unknown action")


def do_graphs(cfg):
    p = cfg.params
    need(p, "vertices", "edges")
    n, k = p["vertices"], p["edges"]
    if cfg.action == "count":
        return Report(graphs.weighted_graph_count(n, k))
    if cfg.action == "list":
        rows = []
        for g in graphs.graphs_with(n, k):
            rows.append([str(sorted(g.edges)), g.aut_order(), g.is_connected()])
        rows.sort(key=lambda r: r[0])
        return Report(header=["edges", "aut", "connected"], rows=rows)
    raise UsageError("graphs: unknown action")


def do_feynman(cfg):
    p = cfg.params
    need(p, "action_file", "degree")
    try:
        with open(p["action_file"]) as fh:
            action = Action.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError("cannot read action: %s" % exc)
    D = p["degree"]
    what = p.get("what") or "partition"
    if what == "partition":
        e = partition_expansion(action, D)
    elif what == "connected":
        e = connected_expansion(action, D)
    elif what == "trees":
        e = tree_level(action, D)
    elif what == "one-loop":
        e = one_loop(action, D)
    elif what == "effective":
        eff = effective_action(action, D)
        if action.dim != 1:
            raise UsageError("--effective output is implemented for one-dimensional actions")
        return Report({"vertices": {N: eff.coefficient(N).to_json() for N in sorted(eff.tensors)}})
    else:
        raise UsageError("feynman: unknown expansion %r" % what)
    if cfg.format == "json":
        return Report(e.to_json())
    return Report(repr(e))


def do_asym(cfg):
    p = cfg.params
    if cfg.action == "expand":
        need(p, "f", "terms")
        N = p["terms"]
        f = json_series(p["f"], 2 * N + 3)     # missing higher coefficients count as zero
        g = json_series(p["g"] or "[1]", 2 * N + 1)
        le = asym.steepest_descent_coeffs(f, g, N)
        return Report(header=["n", "coefficient"], rows=[[n, c] for n, c in enumerate(le.coeffs)])
    if cfg.action == "borel":
        need(p, "series", "hbar")
        coeffs = coefficient_list(p["series"])
        hbar = float(p["hbar"])
        return Report(asym.borel_sum(coeffs, hbar, tol=cfg.tol or 1e-13))
    if cfg.action == "quad":
        need(p, "f", "hbar")
        f = [float(c) for c in coefficient_list(p["f"])]
        hbar = float(p["hbar"])
        poly = lambda x: sum(c * x ** k for k, c in enumerate(f))
        val = asym.quadrature(lambda x: math.exp(-poly(x) / hbar), (-math.inf, math.inf), cfg.tol or 1e-12)
        return Report(val)
    if cfg.action == "stirling":
        need(p, "terms")
        a = asym.stirling_from_laplace(p["terms"])
        b = asym.stirling_from_bernoulli(p["terms"])
        return Report(header=["n", "steepest_descent", "bernoulli", "equal"],
                      rows=[[n, x, y, x == y] for n, (x, y) in enumerate(zip(a, b))])
    raise UsageError("asym: unknown action")


def do_mm(cfg):
    p = cfg.params
    if cfg.action == "census":
        need(p, "m")
        return Report(mm.polygon_gluing_census(p["m"], mode=p.get("mode") or "oriented", jobs=cfg.jobs))
    if cfg.action == "hz":
        need(p, "m")
        return Report(mm.format_poly(mm.harer_zagier_poly(p["m"])))
    if cfg.action == "euler-char":
        need(p, "g")
        return Report(mm.moduli_euler_char(p["g"], jobs=cfg.jobs).value)
    if cfg.action == "bipz":
        need(p, "n")
        return Report(mm.bipz(p["n"]))
    if cfg.action == "wigner":
        need(p, "m")
        if p.get("samples"):
            return Report(mm.gue_moment(p["m"], p.get("N") or 200, p["samples"], cfg.seed))
        return Report(mm.wigner_moment(p["m"]))
    raise UsageError("mm: unknown action")


def do_trees(cfg):
    p = cfg.params
    if cfg.action == "count":
        need(p, "n")
        if p.get("valency"):
            return Report(trees.count_by_valency(p["n"], set(int(v) for v in p["valency"].split(","))))
        return Report(trees.cayley(p["n"]))
    if cfg.action == "oriented":
        need(p, "p", "q")
        return Report(trees.oriented_tree_count(p["p"], p["q"]))
    if cfg.action == "complete":
        need(p, "n")
        m = p["n"]
        return Report(trees.spanning_tree_count([[int(i != j) for j in range(m)] for i in range(m)]))
    raise UsageError("trees: unknown action")


def _grid(lo, hi, points):
    if points < 2:
        return [lo]
    return [lo + (hi - lo) * i / (points - 1) for i in range(points)]


def do_qm(cfg):
    p = cfg.params
    m = float(p.get("mass") or 1.0)
    if cfg.action == "amplitude":
        graph = p.get("graph") or "tadpole"
        pts = p.get("points") or 11
        if graph == "tadpole":
            g = qm1d.tadpole_graph()
            w = float(qm1d.correlator_weight(g))
            rows = []
            for t in _grid(0.0, float(p.get("tmax") or 3.0), pts):
                rows.append([t, w * qm1d.amplitude_at(g, (0.0, t), m), (1 + m * t) * math.exp(-m * t) / (16 * m ** 4)])
            return Report(header=["t", "amplitude", "closed_form"], rows=rows)
        if graph == "bubble":
            rows = []
            for E in _grid(0.0, float(p.get("tmax") or 3.0), pts):
                rows.append([E, qm1d.bubble_residue(E, m), qm1d.bubble_closed_form(E, m)])
            return Report(header=["E", "residue", "closed_form"], rows=rows)
        raise UsageError("qm amplitude: --graph is tadpole or bubble")
    a = float(p.get("a") or 1.0)
    M = float(p.get("M") if p.get("M") is not None else 0.1)
    hbar = float(p.get("hbar") or 1.0)
    if cfg.action == "spectrum":
        count = p.get("count") or 20
        return Report(header=["n", "E"], rows=[[n, e] for n, e in enumerate(qm1d.piecewise_spectrum(a, M, hbar, count))])
    if cfg.action == "weyl":
        E = float(p["E"]) if p.get("E") is not None else 2 * M * (2 * math.pi - a)
        return Report(header=["E", "count", "area", "ratio"],
                      rows=[[E, qm1d.eigenvalue_count(E, a, M, hbar), qm1d.weyl_area(E, a, M),
                             qm1d.weyl_ratio(E, a, M, hbar)]])
    if cfg.action == "fk-check":
        need(p, "times")
        times = sorted((float(t) for t in p["times"].split(",")), reverse=True)
        L = float(p.get("L") or 2.0)
        r = qm1d.feynman_kac_check(times, L, m, p.get("K") or 40)
        return Report(header=["times", "operator", "wick", "residual"],
                      rows=[[" ".join(fmt(t) for t in times), r["operator"], r["wick"], r["residual"]]])
    raise UsageError("qm: unknown action")


def do_renorm(cfg):
    p = cfg.params
    if cfg.action == "classify":
        need(p, "term", "d")
        rows, verdict = renorm.classify([t.strip() for t in p["term"].split("+")], p["d"])
        if cfg.format == "text" and len(rows) == 1:
            return Report(rows[0][2])
        return Report(header=["term", "coupling_dimension", "class"], rows=[list(r) for r in rows] + [["total", "", verdict]])
    if cfg.action == "bubble":
        need(p, "d", "p")
        d, q, m = p["d"], float(p["p"]), float(p.get("mass") or 1.0)
        if d in (2, 3):
            return Report(header=["d", "p", "m", "closed_form", "feynman_parameter"],
                          rows=[[d, q, m, renorm.bubble_closed_form(q, m, d), renorm.bubble_feynman_parameter(q, m, d)]])
        if d == 4:
            seq = renorm.cutoff_sequence(q, m)
            rows = [[c, v, e] for c, v, e in zip(seq.cutoffs, seq.values, seq.errors)]
            rows.append(["inf", seq.limit, 0.0])
            return Report(header=["cutoff", "subtracted", "error"], rows=rows)
        raise UsageError("renorm bubble: d must be 2, 3 or 4")
    if cfg.action == "table":
        return Report(renorm.scalar_table())
    raise UsageError("renorm: unknown action")


def do_cft(cfg):
    p = cfg.params
    if cfg.action == "virasoro-check":
        need(p, "n", "m")
        deg = p.get("deg") or 10
        sector = p.get("sector") or "boson"
        bad = cft.virasoro_bracket_residual(p["n"], p["m"], deg, sector)
        return Report({"n": p["n"], "m": p["m"], "degree": deg, "sector": sector,
                       "failing_vectors": len(bad), "pass": not bad}, ok=not bad)
    if cfg.action == "character":
        terms = p.get("terms") or 20
        ch = cft.fermion_character(terms) if p.get("sector") == "fermion" else cft.boson_character(terms)
        return Report(header=["n", "coefficient"], rows=[[n, c] for n, c in enumerate(ch.coeffs)])
    if cfg.action == "eta-check":
        tau = complex_number(p.get("tau") or "i")
        if tau.imag <= 0:
            raise UsageError("tau must lie in the upper half plane")
        res = cft.eta_modular_residual(tau)
        tol = cfg.tol or 1e-12
        return Report({"tau": tau, "residual": res, "pass": res < tol}, ok=res < tol)
    raise UsageError("cft: unknown action")


def do_verify(cfg):
    nums = None
    if cfg.params.get("only"):
        nums = [int(x) for x in cfg.params["only"].split(",")]
        bad = [n for n in nums if n not in acceptance.CRITERIA]
        if bad:
            raise UsageError("no such criterion: %s" % bad)
    settings = acceptance.Settings(jobs=cfg.jobs, seed=cfg.seed, tol_scale=cfg.tol or 1.0)
    results = acceptance.run(nums, settings)
    ok = all(r.passed for r in results)
    if cfg.format == "text":
        lines = [acceptance.summary_line(r) for r in results]
        lines.append("%d/%d criteria pass" % (sum(r.passed for r in results), len(results)))
        return Report("\n".join(lines), ok=ok)
    rows = []
    for r in results:
        if r.error:
            rows.append([r.number, r.error, "", "", "", False, True])
        for c in r.checks:
            rows.append([r.number, c.name, c.expected, c.actual, c.residual, c.passed, c.counted])
    return Report(header=["criterion", "check", "expected", "actual", "residual", "pass", "counted"], rows=rows, ok=ok)


HANDLERS = {"gaussian": do_gaussian, "graphs": do_graphs, "feynman": do_feynman, "asym": do_asym,
            "mm": do_mm, "trees": do_trees, "qm": do_qm, "renorm": do_renorm, "cft": do_cft,
            "verify-all": do_verify}


def run(cfg):
    """Returns (exit status, rendered output)."""
    if cfg.subcommand not in HANDLERS:
        raise UsageError("unknown subcommand %r" % cfg.subcommand)
    if cfg.format not in ("json", "csv", "text"):
        raise UsageError("format must be json, csv or text")
    rep = HANDLERS[cfg.subcommand](cfg)
    return (0 if rep.ok else 1), rep.render(cfg.format)


# ---------------------------------------------------------------- argparse

def _common(p):
    p.add_argument("--format", choices=["json", "csv", "text"], default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)


def build_parser():
    top = argparse.ArgumentParser(prog="feynkit", description="Exact and numeric checks for perturbative expansions.")
    sub = top.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("gaussian")
    g.add_argument("action", choices=["moment", "pfaffian"])
    g.add_argument("--k", type=int)
    g.add_argument("--b")
    g.add_argument("--matrix", help="JSON list of rows")

    g = sub.add_parser("graphs")
    g.add_argument("action", choices=["count", "list"])
    g.add_argument("--vertices", type=int)
    g.add_argument("--edges", type=int)

    g = sub.add_parser("feynman")
    g.add_argument("action", choices=["expand"])
    g.add_argument("--action", dest="action_file")
    g.add_argument("--degree", type=int)
    grp = g.add_mutually_exclusive_group()
    for flag in ("connected", "trees", "one-loop", "effective"):
        grp.add_argument("--" + flag, dest="what", action="store_const", const=flag)

    g = sub.add_parser("asym")
    g.add_argument("action", choices=["expand", "borel", "quad", "stirling"])
    g.add_argument("--f", help="JSON coefficients of f in t = x - c")
    g.add_argument("--g", help="JSON coefficients of the amplitude g")
    g.add_argument("--series", help="JSON coefficients of a formal series in hbar")
    g.add_argument("--terms", type=int)
    g.add_argument("--hbar")

    g = sub.add_parser("mm")
    g.add_argument("action", choices=["census", "hz", "euler-char", "bipz", "wigner"])
    g.add_argument("--m", type=int)
    g.add_argument("--g", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--samples", type=int)
    g.add_argument("--mode", choices=["oriented", "twisted"])

    g = sub.add_parser("trees")
    g.add_argument("action", choices=["count", "oriented", "complete"])
    g.add_argument("--n", type=int)
    g.add_argument("--valency")
    g.add_argument("--p", type=int)
    g.add_argument("--q", type=int)

    g = sub.add_parser("qm")
    g.add_argument("action", choices=["amplitude", "spectrum", "weyl", "fk-check"])
    g.add_argument("--graph", choices=["tadpole", "bubble"])
    g.add_argument("--m", dest="mass")
    g.add_argument("--tmax")
    g.add_argument("--points", type=int)
    g.add_argument("--a")
    g.add_argument("--M")
    g.add_argument("--hbar")
    g.add_argument("--count", type=int)
    g.add_argument("--E")
    g.add_argument("--L")
    g.add_argument("--K", type=int)
    g.add_argument("--times")

    g = sub.add_parser("renorm")
    g.add_argument("action", choices=["classify", "bubble", "table"])
    g.add_argument("--term")
    g.add_argument("--d", type=int)
    g.add_argument("--p")
    g.add_argument("--m", dest="mass")

    g = sub.add_parser("cft")
    g.add_argument("action", choices=["virasoro-check", "character", "eta-check"])
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--deg", type=int)
    g.add_argument("--sector", choices=["boson", "fermion"])
    g.add_argument("--terms", type=int)
    g.add_argument("--tau")

    g = sub.add_parser("verify-all")
    g.add_argument("--only", help="comma-separated criterion numbers")

    for p in sub.choices.values():
        _common(p)
    return top


def config_from_args(ns, default_format):
    params = {k: v for k, v in vars(ns).items()
              if k not in ("subcommand", "action", "format", "tol", "seed", "jobs")}
    return RunConfig(subcommand=ns.subcommand, action=getattr(ns, "action", None), params=params, tol=ns.tol,
                     seed=ns.seed, format=ns.format or default_format, jobs=ns.jobs)


CSV_DEFAULT = {"qm"}


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = config_from_args(ns, "csv" if ns.subcommand in CSV_DEFAULT else "text")
    try:
        status, out = run(cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write("feynkit: %s\n" % exc)
        return 2
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
