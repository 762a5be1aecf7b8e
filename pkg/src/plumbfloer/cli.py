"""Command-line front end.

Every subcommand prints a plain-text report (tab-separated tables) or, with
``--json``, a versioned JSON document.  Exit codes: 0 success, 1 malformed
input, 2 precondition violated, 3 internal consistency failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import __version__
from .cache import ENV_VAR, BasisCache, get_basis
from .contact import (
    blown_down_presentation,
    brieskorn_embedding_report,
    count_tight,
    embedding_obstruction,
    fillable_bound,
    spin_obstruction,
    twisting_number_farey,
    twisting_number_height,
)
from .errors import ConsistencyError, ParseError, PlumbError, PreconditionError
from .filtration import max_tb
from .fullpath import is_l_space
from .jsonio import SCHEMA_VERSION, dumps, frac
from .plumbing import (
    BrieskornData,
    SeifertData,
    StarGraph,
    brieskorn_to_seifert,
    euler_number,
    is_negative_definite,
    seifert_to_graph,
    torus_link_to_seifert,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _fmt(x) -> str:
    return str(Fraction(x))


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _table(header, rows) -> list[str]:
    return ["\t".join(header)] + ["\t".join(str(c) for c in r) for r in rows]


def _seifert_json(s: SeifertData) -> dict:
    return {"e0": s.e0, "coeffs": [frac(r) for r in s.coeffs], "text": str(s)}


# ---------------------------------------------------------------------------
# input resolution
# ---------------------------------------------------------------------------


def _add_input(p, graph=True):
    p.add_argument("--seifert", metavar="'E0; R1, R2, ...'", help="Seifert invariants, rationals as p/q")
    p.add_argument("--brieskorn", metavar="A1,A2,...", help="Brieskorn exponents")
    if graph:
        p.add_argument("--graph", metavar="'E0; [..] | [..]'", help="star graph in canonical text form")


def _seifert_of(args) -> SeifertData:
    given = [k for k in ("seifert", "brieskorn", "graph") if getattr(args, k, None)]
    if len(given) != 1:
        raise ParseError("give exactly one of --seifert, --brieskorn" + (", --graph" if hasattr(args, "graph") else ""))
    if args.seifert:
        return SeifertData.parse(args.seifert)
    if args.brieskorn:
        return brieskorn_to_seifert(BrieskornData.parse(args.brieskorn))
    g = StarGraph.from_text(args.graph)
    return SeifertData(g.central, g.coefficients())


def _graph_of(args) -> tuple[StarGraph, SeifertData]:
    s = _seifert_of(args)
    if getattr(args, "graph", None):
        g = StarGraph.from_text(args.graph)
    else:
        g = seifert_to_graph(s)
    return g, s


def _cache(args) -> BasisCache | None:
    directory = args.cache or os.environ.get(ENV_VAR)
    return BasisCache(directory) if directory else None


# ---------------------------------------------------------------------------
# subcommands; each returns (text lines, json document)
# ---------------------------------------------------------------------------


def _describe(s: SeifertData) -> tuple[list[str], dict]:
    e = euler_number(s)
    doc = {"seifert": _seifert_json(s), "euler": frac(e), "ties": s.has_ties}
    lines = [f"M({s})", f"e(M) = {e}"]
    if s.n:
        g = seifert_to_graph(s)
        nd = is_negative_definite(g)
        doc.update(graph=g.to_json(), graph_text=g.to_text(), det=g.form.det, negative_definite=bool(nd))
        lines += [f"graph: {g.to_text()}", f"|det Q| = {abs(g.form.det)}", f"negative-definite: {'yes' if nd else 'no'}"]
    if s.has_ties:
        lines.append("note: equal coefficients; descending order fixed by convention")
    return lines, doc


def cmd_seifert(args):
    return _describe(_seifert_of(args))


def cmd_brieskorn(args):
    text = args.exponents or args.brieskorn
    if not text:
        raise ParseError("give the exponents, e.g. 'brieskorn 2,3,5'")
    b = BrieskornData.parse(text)
    lines, doc = _describe(brieskorn_to_seifert(b))
    doc["exponents"] = list(b.exponents)
    return [f"{b} = " + lines[0]] + lines[1:], doc


def cmd_graph(args):
    g, _ = _graph_of(args)
    nd = is_negative_definite(g)
    Q = g.form.Q
    lines = [f"graph: {g.to_text()}", "Q:"] + ["\t".join(str(x) for x in row) for row in Q]
    lines += [f"det Q = {g.form.det}", f"e(M) = {nd.euler}", f"negative-definite: {'yes' if nd else 'no'}"]
    doc = {
        "graph": g.to_json(),
        "graph_text": g.to_text(),
        "Q": [list(r) for r in Q],
        "det": g.form.det,
        "euler": frac(nd.euler),
        "negative_definite": bool(nd),
    }
    return lines, doc


def cmd_hf(args):
    g, _ = _graph_of(args)
    basis = get_basis(g, _cache(args))
    blocks = list(basis)
    ds = ", ".join(_fmt(b.d) for b in blocks)
    lines = [f"spin^c classes: {basis.n_spinc}; d = {ds}"]
    rows = [(_vec(b.spinc.representative), "yes" if b.spinc.is_spin else "no", len(b.classes), _fmt(b.d)) for b in blocks]
    lines += _table(("spinc", "spin", "classes", "d"), rows)
    if args.classes:
        rows = [
            (_vec(c.spinc.representative), _vec(c.initial), _vec(c.terminal), _fmt(c.maslov), c.outcome.n_steps)
            for c in basis.all_classes()
        ]
        lines += [""] + _table(("spinc", "initial", "terminal", "maslov", "steps"), rows)
    l_space = is_l_space(basis)
    lines.append(f"L-space: {'yes' if l_space else 'no'}")
    lines.append("(even part only: classes spanned by full paths)")
    doc = {
        "graph": g.to_json(),
        "graph_text": g.to_text(),
        "n_spinc": basis.n_spinc,
        "l_space": l_space,
        "basis": basis.to_json(),
        "metadata": dict(sorted(basis.metadata.items())),
    }
    if args.figures:
        from .plotting import plot_hf

        paths = plot_hf(basis, args.figures, g.to_text())
        lines.append("figures: " + ", ".join(str(p) for p in paths))
    return lines, doc


def cmd_twist(args):
    s = _seifert_of(args)
    h = twisting_number_height(s)
    f = twisting_number_farey(s)
    if h.q != f.q:
        raise ConsistencyError("twisting number routes disagree", height=h.q, farey=f.q)
    ps = ",".join(str(p) for p in f.witnesses["p"])
    route = f"#={h.witnesses['sharp']}" if "sharp" in h.witnesses else f"height={h.witnesses['height']}"
    lines = [f"tw = {h.tw} (height: {route}; farey: q={f.q}, p={ps})"]
    doc = {
        "seifert": _seifert_json(s),
        "tw": h.tw,
        "q": h.q,
        "height": h.witnesses["height"],
        "sharp": h.witnesses.get("sharp"),
        "p": list(f.witnesses["p"]),
        "search_bound": f.witnesses["bound"],
    }
    g = seifert_to_graph(s)
    tb = max_tb(g)
    e = euler_number(s)
    via_tw = h.tw + 1 / -e
    if via_tw != tb.tb:
        raise ConsistencyError("TB from tw and from tau disagree", via_tw=str(via_tw), via_tau=str(tb.tb))
    lines.append(f"TB = tw - 1/e = {_fmt(via_tw)}; tau + tau_bar - 1 = {_fmt(tb.tb)}; sl <= {_fmt(tb.sl)}")
    doc.update(tb=frac(tb.tb), sl=frac(tb.sl), tau=frac(tb.tau), tau_conjugate=frac(tb.tau_conjugate))
    return lines, doc


def cmd_classify(args):
    s = _seifert_of(args)
    doc = {"seifert": _seifert_json(s)}
    if s.e0 < -1:
        n = count_tight(s)
        doc.update(kind="count", value=n)
        return [f"tight structures: {n} (count)"], doc
    g = seifert_to_graph(s)
    n = fillable_bound(s, get_basis(g, _cache(args)))
    doc.update(kind="bound", value=n)
    return [f"fillable structures: <= {n} (bound, not count)"], doc


def cmd_present(args):
    s = _seifert_of(args)
    p = blown_down_presentation(s)
    head = [f"case: {p.case}"]
    if p.ell is not None:
        head.append(
            f"q = {p.q}; p = {p.p}; d1 = {p.d1}; d2 = {p.d2}; T = {p.T}; mu = {p.mu[0]}, {p.mu[1]}; "
            f"ell = {p.ell.l1}, {p.ell.l2} (branch {p.ell.branch})"
        )
    rows = [
        (
            c.name,
            "unknot" if c.knot is None else f"T({c.knot[0]},{c.knot[1]})",
            "[" + ",".join(map(str, c.coefficients)) + "]",
            "[" + ",".join(map(str, c.framings)) + "]",
        )
        for c in p.components
    ]
    lines = head + _table(("component", "knot", "coefficients", "framings"), rows)
    lines.append("linking matrix:")
    lines += ["\t".join(map(str, r)) for r in p.linking]
    lines.append(
        f"|det| = {abs(p.det_q)} = |det Q|; rank = {p.size} = |Gamma| - |Gamma'| = {p.gamma} - {p.gamma_prime}; "
        f"matches blow-down: {'yes' if p.matches_blowdown else 'no'}"
    )
    lines += [f"flag: {f}" for f in p.flags]
    return lines, p.to_json()


def _obstruct_brieskorn(b: BrieskornData, args):
    s = brieskorn_to_seifert(b)
    basis = get_basis(seifert_to_graph(s), _cache(args))
    rep = brieskorn_embedding_report(b, basis)
    lines = [rep.summary()]
    lines += _table(("stage", "result", "detail"), [(n, "pass" if ok else "fail", m) for n, ok, m in rep.stages])
    doc = {
        "subject": rep.subject,
        "obstructed": rep.obstructed,
        "failed_stage": rep.failed_stage,
        "d": frac(rep.d),
        "dim_hf_hat_at_d": rep.dim_hf_hat_at_d,
        "even_form": rep.even_form,
        "d3": None if rep.d3 is None else frac(rep.d3),
        "stages": [{"name": n, "ok": ok, "detail": m} for n, ok, m in rep.stages],
    }
    return lines, doc


def cmd_obstruct(args):
    if args.brieskorn and not (args.seifert or args.graph):
        return _obstruct_brieskorn(BrieskornData.parse(args.brieskorn), args)
    s = _seifert_of(args)
    basis = get_basis(seifert_to_graph(s), _cache(args))
    reps = embedding_obstruction(s, basis=basis)
    fails = [r for r in reps if not r.convex_criterion]
    lines = [
        "convex criterion (dim HF-hat_d = 1): "
        + ("passes for all " if not fails else f"fails for {len(fails)} of ")
        + f"{len(reps)} Spin^c classes"
    ]
    rows = [(_vec(r.spinc), "yes" if r.spin else "no", _fmt(r.d), r.dim_hf_hat_at_d, "pass" if r.convex_criterion else "fail") for r in reps]
    lines += _table(("spinc", "spin", "d", "dim", "criterion"), rows)
    doc = {
        "seifert": _seifert_json(s),
        "classes": [
            {"spinc": list(r.spinc), "spin": r.spin, "d": frac(r.d), "dim_hf_hat_at_d": r.dim_hf_hat_at_d, "convex_criterion": r.convex_criterion}
            for r in reps
        ],
    }
    try:
        sp = spin_obstruction(s, basis=basis)
        lines.append(f"spin: {sp.verdict}")
        doc["spin"] = {
            "spinc": list(sp.spinc),
            "even_form": sp.even_form,
            "d": frac(sp.d),
            "d3": None if sp.d3 is None else frac(sp.d3),
            "verdict": sp.verdict,
        }
    except PreconditionError as exc:
        lines.append(f"spin: not applicable ({exc})")
        doc["spin"] = None
    return lines, doc


def _matrix(text: str):
    try:
        return [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError as exc:
        raise ParseError(f"bad matrix {text!r}; use rows 'a,b;c,d'") from exc


def cmd_torus_link(args):
    sign = {"+": 1, "-": -1, "+1": 1, "-1": -1}.get(args.sign)
    if sign is None:
        raise ParseError("--sign must be + or -")
    res = torus_link_to_seifert(args.p, args.q, sign, _matrix(args.matrix))
    lines = [
        f"M({res.seifert})",
        f"e(M) = {res.euler}",
        f"det Lambda = {res.det_lambda}; det D = {res.det_d}",
        f"hypothesis: {res.hypothesis}",
    ]
    doc = {
        "seifert": _seifert_json(res.seifert),
        "euler": frac(res.euler),
        "det_lambda": res.det_lambda,
        "det_d": res.det_d,
        "hypothesis": res.hypothesis,
    }
    return lines, doc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}") from exc


def cmd_sweep(args):
    from .sweep import run_sweep, seifert_grid

    cases = list(seifert_grid(_int_list(args.e0), _int_list(args.n), args.max_den))
    if args.suite == "present":
        cases = [s for s in cases if s.e0 < -1 or s.n >= 2]
    workers = args.workers or os.cpu_count() or 1
    results = run_sweep(cases, args.suite, workers)
    fails = [r for r in results if not r.ok]
    lines = [f"suite {args.suite}: {len(results)} cases, {len(results) - len(fails)} pass, {len(fails)} fail"]
    doc = {
        "suite": args.suite,
        "grid": {"e0": _int_list(args.e0), "n": _int_list(args.n), "max_den": args.max_den},
        "cases": len(results),
        "failures": [{"seifert": r.seifert, "values": list(r.values), "error": r.error} for r in fails],
    }
    if args.rows:
        lines += _table(("seifert", "ok", "values", "error"), [(r.seifert, r.ok, " ".join(map(str, r.values)), r.error) for r in results])
        doc["rows"] = [{"seifert": r.seifert, "ok": r.ok, "values": [str(v) for v in r.values]} for r in results]
    else:
        lines += [f"FAIL\t{r.seifert}\t{' '.join(map(str, r.values))}\t{r.error}" for r in fails]
    if args.figures:
        from .plotting import plot_sweep

        paths = plot_sweep(results, args.figures, f"suite {args.suite}")
        lines.append("figures: " + ", ".join(str(p) for p in paths))
    if fails:
        doc["exit"] = 3
    return lines, doc


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the versioned JSON document")
    common.add_argument("--cache", metavar="DIR", help=f"cache full-path bases in DIR (default: ${ENV_VAR})")

    parser = _Parser(prog="plumbfloer", description="Lattice Heegaard Floer data and contact invariants of Seifert spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("seifert", parents=[common], help="describe M(e0; r1, ..., rn)")
    _add_input(p, graph=False)
    p.set_defaults(func=cmd_seifert)

    p = sub.add_parser("brieskorn", parents=[common], help="Seifert invariants of a Brieskorn sphere")
    p.add_argument("exponents", nargs="?", help="e.g. 2,3,7")
    p.add_argument("--brieskorn", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_brieskorn)

    p = sub.add_parser("graph", parents=[common], help="standard graph, intersection form, definiteness")
    _add_input(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("hf", parents=[common], help="full-path basis, correction terms, L-space test")
    _add_input(p)
    p.add_argument("--classes", action="store_true", help="list every correctly-ending class")
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    p.set_defaults(func=cmd_hf)

    p = sub.add_parser("twist", parents=[common], help="twisting number of the regular fibre, both routes")
    _add_input(p)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("classify", parents=[common], help="count of tight structures (e0 < -1) or a bound (e0 = -1)")
    _add_input(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("present", parents=[common], help="blown-down surgery presentation")
    _add_input(p)
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("obstruct", parents=[common], help="embedding / spin obstruction report")
    _add_input(p)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("torus-link", parents=[common], help="surgery on a torus link as a Seifert space")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sign", default="+", help="+ for T(kp,kq), - for T(kp,-kq)")
    p.add_argument("--matrix", required=True, metavar="'a,b;c,d'", help="surgery matrix, rows separated by ';'")
    p.set_defaults(func=cmd_torus_link)

    p = sub.add_parser("sweep", parents=[common], help="agreement suites over a parameter grid")
    p.add_argument("--suite", choices=("twist", "present", "conjugation"), default="twist")
    p.add_argument("--e0", default="-1,-2,-3", help="comma-separated central framings")
    p.add_argument("--n", default="2,3,4", help="comma-separated numbers of singular fibres")
    p.add_argument("--max-den", type=int, default=12, help="largest coefficient denominator")
    p.add_argument("--workers", type=int, default=0, help="worker processes (default: CPU count)")
    p.add_argument("--rows", action="store_true", help="print one row per case")
    p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        lines, doc = args.func(args)
    except PlumbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        details = getattr(exc, "details", None)
        if details:
            for k, v in details.items():
                print(f"  {k}: {v}", file=sys.stderr)
        return exc.exit_code
    code = doc.pop("exit", 0)
    if args.json:
        sys.stdout.write(dumps({"schema_version": SCHEMA_VERSION, "command": args.command, **doc}))
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
