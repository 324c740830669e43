"""``minprod`` command-line front end.

Exit status: 0 success, 1 other errors (bad descriptor file, invalid
arguments), 2 missing data, 3 unparsable expression, 4 spectrum not
enumerated deep enough.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import analyzer, oracle
from .catalog import (
    load_descriptor_file,
    spectrum_to_dict,
)
from .composer import (
    Product,
    jacobi_upto,
    lambda1_of,
    laplace_upto,
    product_descriptor,
)
from .errors import BoundExceeded, InsufficientData, MinprodError, ParseError
from .parsing import parse_expression, to_expression
from .spectrum import format_rational, make_spectrum, minkowski_sum, truncate

EXIT_OK, EXIT_ERROR, EXIT_MISSING, EXIT_PARSE, EXIT_BOUND = 0, 1, 2, 3, 4

BUILTINS = [
    ("sphere(m[, codim=p])", "totally geodesic S^m in S^(m+p); full spectra"),
    ("torus(k=K)", "flat minimal torus in S^5, K >= 2; Laplace spectrum by lattice enumeration"),
    ("veronese()", "Veronese surface RP^2 in S^4; Laplace spectrum, S = 4/3"),
    ("isoparametric(n, g=G)", "minimal isoparametric hypersurface, G in 1,2,3,4,6; facts only"),
    ("otfkm(k=K)", "OT-FKM focal submanifold M_2 of dimension K+2; facts only"),
    ("lawson(m, k)", "Lawson surface xi_{m,k} in S^3; facts only"),
    ("bipolar_tau31()", "bipolar Lawson Klein bottle in S^4; facts only"),
    ("file(path)", "one descriptor from a JSON file"),
    ("ref(name)", "a descriptor loaded with --catalog"),
]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is taken by missing data
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _rat(x):
    x = Fraction(x)
    return [x.numerator, x.denominator]


def _json_value(v):
    if isinstance(v, Fraction):
        return _rat(v)
    return v


def _field(value, provenance):
    return {"value": _json_value(value), "provenance": str(provenance)}


def _show(v) -> str:
    if v is None:
        return "unknown"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_rational(v)
    return str(v)


def _emit(doc: dict, fmt: str, table_lines) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    return "\n".join(table_lines) + "\n"


def _table(rows):
    width = max(len(r[0]) for r in rows)
    vwidth = max(len(r[1]) for r in rows)
    out = []
    for row in rows:
        line = f"{row[0]:<{width}}  {row[1]:<{vwidth}}"
        if len(row) > 2 and row[2]:
            line += f"  [{row[2]}]"
        out.append(line.rstrip())
    return out


# -- commands ------------------------------------------------------------------

def _load_user(paths):
    user = {}
    for path in paths or ():
        got = load_descriptor_file(path)
        for d in got if isinstance(got, list) else [got]:
            user[d.name] = d
    return user


def _expression(args):
    tree = parse_expression(args.expression)
    return to_expression(tree, _load_user(args.catalog))


_WHY_UNKNOWN = {
    "S": "second fundamental form of some factor unknown",
    "R": "second fundamental form of some factor unknown",
    "killing_dim": "defined only for Clifford products of great spheres",
    "degenerate": "decided only for Clifford products of great spheres",
    "lambda1": "first eigenvalue of some factor unknown",
}


def _unknown(rep, key):
    return "unavailable: " + rep.unavailable.get(key, _WHY_UNKNOWN.get(key, "no data"))


def report_document(rep: analyzer.AnalysisReport) -> dict:
    """The JSON report in canonical field order."""
    prov = rep.provenance

    def fld(key, value):
        if value is None:
            return _field(None, _unknown(rep, key))
        return _field(value, prov.get(key) or "closed-form: dimension count")

    doc = {
        "expression": rep.name,
        "n": _field(rep.n, "closed-form: dimensions add"),
        "p": _field(rep.p, "closed-form: codimensions add, plus one per product"),
        "index": fld("index", rep.index),
        "nullity": fld("nullity", rep.nullity),
        "mu1": fld("mu1", rep.mu1),
        "lambda1": fld("lambda1", rep.lambda1),
        "by_first_eigenfunctions": _field(
            rep.by_first_eigenfunctions,
            prov.get("lambda1") if rep.lambda1 is not None else "catalog flag"),
        "S": fld("S", rep.S),
        "S_constant": rep.S_constant,
        "R": fld("R", rep.R),
        "killing_dim": fld("killing_dim", rep.killing_dim),
        "degenerate": fld("degenerate", rep.degenerate),
        "closed_form": None,
        "breakdown": None,
        "bounds": [],
    }
    if rep.closed_form is not None:
        cp = prov["closed_form"]
        doc["closed_form"] = {"index": _field(rep.closed_form[0], cp),
                              "nullity": _field(rep.closed_form[1], cp)}
    if rep.breakdown is not None:
        bp = prov["breakdown"]
        b = rep.breakdown
        doc["breakdown"] = {
            name: _field(getattr(b, name), bp)
            for name in ("ind1", "ind2", "null1", "null2", "I0", "I1", "Ihat1", "N0", "N1", "Nhat1")
        }
    bound_prov = str(prov.get("bounds", ""))
    for c in rep.bounds:
        doc["bounds"].append({
            "name": c.name,
            "value": c.value,
            "threshold": c.threshold,
            "satisfied": c.satisfied,
            "skipped": c.skipped,
            "provenance": bound_prov,
        })
    doc["unavailable"] = dict(rep.unavailable)
    return doc


def _report_table(rep: analyzer.AnalysisReport) -> list:
    prov = rep.provenance
    rows = [("expression", rep.name, ""), ("n", str(rep.n), ""), ("p", str(rep.p), "")]
    for key in ("index", "nullity", "mu1", "lambda1", "by_first_eigenfunctions",
                "S", "R", "killing_dim", "degenerate"):
        value = getattr(rep, key)
        note = str(prov.get(key, "")) if value is not None else _unknown(rep, key)
        if key == "S" and value is not None and not rep.S_constant:
            note = "average only; " + note
        rows.append((key, _show(value), note))
    if rep.closed_form is not None:
        rows.append(("closed-form index", str(rep.closed_form[0]), str(prov["closed_form"])))
        rows.append(("closed-form nullity", str(rep.closed_form[1]), str(prov["closed_form"])))
    lines = _table(rows)
    if rep.breakdown is not None:
        b = rep.breakdown
        lines.append("")
        lines.append("breakdown  " + "  ".join(
            f"{name}={getattr(b, name)}"
            for name in ("ind1", "ind2", "null1", "null2", "I0", "I1", "Ihat1", "N0", "N1", "Nhat1")))
    lines.append("")
    lines.append("lower bounds")
    for c in rep.bounds:
        if c.skipped:
            status = f"skipped ({c.skipped})"
        else:
            status = f"{c.value} >= {c.threshold}: {'ok' if c.satisfied else 'VIOLATED'}"
        lines.append(f"  {c.name}: {status}")
    return lines


def cmd_report(args) -> str:
    expr = _expression(args)
    rep = analyzer.analyze(product_descriptor(expr, args.bound))
    return _emit(report_document(rep), args.format, _report_table(rep))


def cmd_spectrum(args) -> str:
    expr = _expression(args)
    d = product_descriptor(expr)
    bound = args.bound if args.bound is not None else Fraction(4 * d.n)
    doc = {"expression": d.name, "bound": _rat(bound)}
    lines = []
    kinds = ("laplace", "jacobi") if args.which == "both" else (args.which,)
    missing = None
    for kind in kinds:
        try:
            s = laplace_upto(d, bound) if kind == "laplace" else jacobi_upto(d, bound)
        except (InsufficientData, BoundExceeded) as exc:
            # keep what is known; the failure still decides the exit status
            missing = missing or exc
            doc[kind] = None
            lines.append(f"{kind} spectrum: {exc}")
            continue
        s = truncate(s, bound)
        doc[kind] = spectrum_to_dict(s)
        lines.append(f"{kind} spectrum of {d.name}, complete up to {format_rational(s.bound)}")
        if s.is_empty_bundle:
            lines.append("  (empty: the normal bundle has rank 0)")
        for v, m in s.entries:
            lines.append(f"  {format_rational(v):>8}  x{m}")
    out = _emit(doc, args.format, lines)
    if missing is None:
        return out
    code = EXIT_MISSING if isinstance(missing, InsufficientData) else EXIT_BOUND
    print(f"{'insufficient data' if code == EXIT_MISSING else 'bound exceeded'}: {missing}",
          file=sys.stderr)
    return out, code


def _count(args, which):
    expr = _expression(args)
    d = product_descriptor(expr)
    fn = analyzer.index if which == "index" else analyzer.nullity
    known = d.known_index if which == "index" else d.known_nullity
    try:
        value = fn(d)
        prov = "spectral-composition: Jacobi spectrum composed from the factors"
    except InsufficientData:
        if known is None:
            raise
        value, prov = known, str(d.provenance.get(f"known_{which}"))
    doc = {"expression": d.name, which: _field(value, prov)}
    return _emit(doc, args.format, [str(value)])


def cmd_index(args) -> str:
    return _count(args, "index")


def cmd_nullity(args) -> str:
    return _count(args, "nullity")


def cmd_lambda1(args) -> str:
    expr = _expression(args)
    d = product_descriptor(expr)
    lam = lambda1_of(d)
    if lam is None:
        raise InsufficientData(f"first Laplace eigenvalue of {d.name} unavailable")
    prov = d.provenance.get("lambda1") or "spectral-composition: least positive Laplace eigenvalue"
    first = lam == d.n
    doc = {"expression": d.name, "lambda1": _field(lam, prov),
           "n": d.n, "by_first_eigenfunctions": first}
    lines = [format_rational(lam),
             f"immersed by first eigenfunctions: {'yes' if first else 'no'} (n = {d.n})"]
    return _emit(doc, args.format, lines)


def cmd_curvature(args) -> str:
    expr = _expression(args)
    d = product_descriptor(expr)
    if d.S is None:
        raise InsufficientData(f"second fundamental form of {d.name} unavailable")
    rep = analyzer.analyze(d)
    doc = {
        "expression": d.name,
        "S": _field(d.S, rep.provenance["S"]),
        "S_constant": d.S_constant,
        "R": _field(rep.R, rep.provenance["R"]),
        "average_floor": None,
        "classification": None,
    }
    rows = [("S", format_rational(d.S), str(rep.provenance["S"])),
            ("S constant", _show(d.S_constant), ""),
            ("R", format_rational(rep.R), str(rep.provenance["R"]))]
    if isinstance(expr, Product):
        avg = analyzer.average_S_identity(expr)
        floor_prov = "closed-form: average of S is at least (k-1)n, equality iff all factors are geodesic"
        doc["average_floor"] = {"floor": _field(avg.floor, floor_prov),
                                "satisfied": avg.satisfied, "equality": avg.equality}
        rows.append(("floor (k-1)n", format_rational(avg.floor),
                     "equality" if avg.equality else "strict"))
        if len(expr.children) == 2:
            try:
                label, _ = analyzer.constant_S_classify(expr)
            except MinprodError as exc:
                label = f"not classified: {exc}"
            doc["classification"] = label
            rows.append(("constant-S class", label, ""))
    return _emit(doc, args.format, _table(rows))


def _engine_checks():
    """Engine against the brute-force oracles on a small fixed sample."""
    rng = random.Random(20240613)
    results = []
    for trial in range(10):
        def draw():
            vals = sorted({Fraction(rng.randint(-20, 40), rng.randint(1, 4)) for _ in range(8)})
            return [(v, rng.randint(1, 3)) for v in vals]
        a, b = draw(), draw()
        ba, bb = a[-1][0], b[-1][0]
        got = minkowski_sum(make_spectrum(a, ba), make_spectrum(b, bb))
        t = got.bound
        want = oracle.brute_force_pairs(a, b, t)
        results.append((f"minkowski_sum vs brute force #{trial}", list(got.entries) == want))
    from .catalog import sphere
    from .composer import Leaf
    for dims in [(1, 1), (1, 2), (2, 3), (1, 1, 1), (1, 2, 1), (1, 1, 1, 1)]:
        d = product_descriptor(Product(tuple(Leaf(sphere(m)) for m in dims)))
        ok = (analyzer.index(d) == oracle.clifford_direct_count(list(dims), "index")
              and analyzer.nullity(d) == oracle.clifford_direct_count(list(dims), "nullity"))
        results.append((f"Clifford product {list(dims)} engine vs direct count", ok))
    return results


def cmd_verify(args) -> tuple:
    results = oracle.run_oracle_suite() + _engine_checks()
    failed = sum(1 for _, ok in results if not ok)
    doc = {"checks": [{"name": n, "passed": ok} for n, ok in results], "failed": failed}
    lines = [f"{'PASS' if ok else 'FAIL'}  {n}" for n, ok in results]
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return _emit(doc, args.format, lines), (EXIT_OK if failed == 0 else EXIT_ERROR)


def cmd_catalog(args) -> str:
    user = _load_user(args.catalog)
    doc = {
        "builtin": [{"syntax": s, "description": t} for s, t in BUILTINS],
        "user": [{"name": d.name, "n": d.n, "p": d.p,
                  "laplace": d.laplace is not None, "jacobi": d.jacobi is not None}
                 for d in user.values()],
    }
    lines = [f"{s:<24}{t}" for s, t in BUILTINS]
    if user:
        lines.append("")
        lines.append("user descriptors (use ref(name))")
        for d in user.values():
            have = [k for k in ("laplace", "jacobi") if getattr(d, k) is not None]
            lines.append(f"  {d.name}: n={d.n}, p={d.p}, spectra: {', '.join(have) or 'none'}")
    return _emit(doc, args.format, lines)


COMMANDS = {
    "report": (cmd_report, "full analysis: index, nullity, eigenvalues, curvature, bounds"),
    "spectrum": (cmd_spectrum, "Laplace and Jacobi eigenvalues up to a bound (default 4n)"),
    "index": (cmd_index, "Morse index"),
    "nullity": (cmd_nullity, "nullity"),
    "lambda1": (cmd_lambda1, "first nonzero Laplace eigenvalue"),
    "curvature": (cmd_curvature, "S, scalar curvature and constant-S classification"),
    "verify": (cmd_verify, "run the brute-force oracle checks"),
    "catalog": (cmd_catalog, "list built-in families and user descriptors"),
}


def _bound(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational a/b: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=_bound, default=None, help="spectral bound a/b")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--catalog", action="append", metavar="FILE",
                        help="descriptor JSON file (repeatable); entries are used via ref(name)")
    parser = _Parser(prog="minprod", description="Spectral analysis of minimal products in spheres.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name not in ("verify", "catalog"):
            p.add_argument("expression", help='e.g. "product(sphere(1), sphere(1))"')
        if name == "spectrum":
            p.add_argument("--which", choices=("laplace", "jacobi", "both"), default="both")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn, _ = COMMANDS[args.command]
    try:
        out = fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InsufficientData as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except BoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (MinprodError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    status = EXIT_OK
    if isinstance(out, tuple):
        out, status = out
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
