"""Command-line front end: ``spinwave <command> ...``.

Exit status: 0 on success, 1 for bad input or a domain error, 2 when a
numerical accuracy target is missed (including a failing ``verify``).
"""

import argparse
import csv
import io
import json
import os
import re
import sys

import sympy as sp

from . import coupling, observables, reactions, verification
from .halfangle_algebra import NonIntegerExponentError
from .numbers import as_half_integer, as_real
from .regularization import inner_product
from .wavefunctions import build

EXIT_OK, EXIT_INPUT, EXIT_ACCURACY = 0, 1, 2

# let "-1/2" through as a positional value rather than an option
_NEGATIVE = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+)$")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = _NEGATIVE


class InputError(ValueError):
    pass


def parse_spin(text):
    try:
        return as_half_integer(text)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc))


def parse_projection(text, j=None):
    """A real projection: ``1/2``, ``0.5``, ``sqrt(2)`` or ``smax``."""
    if str(text).strip().lower() == "smax":
        if j is None:
            raise InputError("smax needs a spin")
        return sp.sqrt(j * (j + 1))
    text = re.sub(r"sqrt(\d+)", r"sqrt(\1)", str(text).strip())
    try:
        value = as_real(text)
    except (sp.SympifyError, ValueError, TypeError) as exc:
        raise InputError("cannot read projection %r: %s" % (text, exc))
    if value.free_symbols or not value.is_real:
        raise InputError("projection %r is not a real number" % text)
    return value


def _fmt(x):
    """Exact string plus a float, for records."""
    x = sp.sympify(x)
    out = {"exact": str(x)}
    try:
        c = complex(sp.N(x, 20))
        out["float"] = c.real if c.imag == 0 else [c.real, c.imag]
    except TypeError:
        pass
    return out


def _emit(args, record, text):
    if args.json:
        print(json.dumps(record, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------

def cmd_dfunc(args):
    j = parse_spin(args.j)
    n = parse_projection(args.n, j)
    m = parse_spin(args.m)
    d = build(j, n, m)
    record = {"command": "dfunc", "inputs": {"j": str(j), "n": str(n), "m": str(m)},
              "outputs": {"branch_A": str(d.branch_A), "branch_B": str(d.branch_B)},
              "path": "ladder construction, N_j = 1"}
    lines = ["D^%s_{%s,%s}" % (j, n, m), "  A: %s" % d.branch_A, "  B: %s" % d.branch_B]
    if args.theta is not None:
        v = complex(d.evaluate(args.phi, args.theta, args.chi))
        record["inputs"].update(phi=args.phi, theta=args.theta, chi=args.chi)
        record["outputs"]["value"] = [v.real, v.imag]
        lines.append("  value at (%r, %r, %r): %r" % (args.phi, args.theta, args.chi, v))
    _emit(args, record, "\n".join(lines))
    return EXIT_OK


def _weight(text):
    if text is None:
        return None
    w = text.lower()
    if w not in ("cos", "p1", "p2", "p3", "p4", "1"):
        raise InputError("weight must be one of cos, p1..p4")
    return w


def cmd_inner(args):
    j1, j2 = parse_spin(args.j), parse_spin(args.j2)
    d1 = build(j1, parse_projection(args.n, j1), parse_spin(args.m))
    d2 = build(j2, parse_projection(args.n2, j2), parse_spin(args.m2))
    ip = inner_product(d1, d2, _weight(args.weight))
    parts = {"branch_A": ip.branch_A, "branch_B": ip.branch_B,
             "cross": ip.cross, "total": ip.total}
    record = {"command": "inner",
              "inputs": {"left": [args.j, args.n, args.m], "right": [args.j2, args.n2, args.m2],
                         "weight": args.weight or "1"},
              "outputs": {k: _fmt(v) for k, v in parts.items()},
              "unit": "|N_j|^2", "path": "regularized"}
    text = "\n".join("%-9s %s" % (k, v) for k, v in parts.items())
    _emit(args, record, text)
    return EXIT_OK


def _paths_agree(j, n):
    """The regularized θ integral reproduces the Clebsch-Gordan route
    unless n - j is a non-zero integer with |n| > j."""
    return not ((n - j).is_integer and abs(n) > j)


def cmd_expect(args):
    j = parse_spin(args.j)
    n = parse_projection(args.n, j)
    m = parse_spin(args.m)
    w = _weight(args.weight) or "cos"
    k = 1 if w == "cos" else int(w[1:])
    path = args.path
    if path == "auto":
        path = "regularized" if (n.is_Rational and (2 * n).is_integer
                                 and _paths_agree(j, n)) else "analytic"
    if path == "regularized":
        d = build(j, n, m)
        try:
            num = inner_product(d, d, w).total
            den = inner_product(d, d).total
        except NonIntegerExponentError as exc:
            raise InputError("regularized path unavailable: %s" % exc)
        if den == 0:
            raise InputError("state has zero regularized norm")
        value = sp.radsimp(sp.cancel(num / den))
    else:
        value = observables.expect_Pk(j, n, m, k)
    label = "cos" if w == "cos" else "P%d" % k
    record = {"command": "expect", "inputs": {"j": str(j), "n": str(n), "m": str(m),
                                              "weight": label},
              "outputs": {"value": _fmt(value)}, "path": path}
    _emit(args, record, "<%s> = %s  (%.17g)  path=%s" % (label, value, float(sp.N(value)), path))
    return EXIT_OK


def cmd_cg(args):
    if args.internal:
        if len(args.values) != 3:
            raise InputError("cg --internal takes j n k")
        j = parse_spin(args.values[0])
        n = parse_projection(args.values[1], j)
        k = int(args.values[2])
        value = coupling.internal_cg(j, n, k)
        desc = "<%s %s, %d 0 | %s %s>" % (j, n, k, j, n)
        path = "internal closed form"
    else:
        if len(args.values) not in (5, 6):
            raise InputError("cg takes j1 m1 j2 m2 j3 [m3]")
        vals = [parse_spin(v) for v in args.values]
        value = coupling.cg(*vals)
        m3 = vals[5] if len(vals) == 6 else vals[1] + vals[3]
        desc = "<%s %s, %s %s | %s %s>" % (vals[0], vals[1], vals[2], vals[3], vals[4], m3)
        path = "external (Condon-Shortley)"
    record = {"command": "cg", "inputs": {"values": args.values, "internal": args.internal},
              "outputs": {"value": _fmt(value)}, "path": path}
    _emit(args, record, "%s = %s  (%.17g)" % (desc, value, float(sp.N(value))))
    return EXIT_OK


def cmd_rms(args):
    r = coupling.rms_internal_cg(args.pattern)
    p = coupling.get_pattern(args.pattern)
    record = {"command": "rms", "inputs": {"pattern": p.key},
              "outputs": {"integral": r.integral, "rms": r.value,
                          "error_estimate": r.error_estimate,
                          "closed_form": r.closed_form},
              "path": "quadrature" + (" + gamma closed form" if r.closed_form else "")}
    text = "%s\n  integral = %.15f (err %.1e)\n  rms      = %.15f" % (
        p.label, r.integral, r.error_estimate, r.value)
    if r.closed_form is not None:
        text += "\n  closed   = %.15f" % r.closed_form
    _emit(args, record, text)
    return EXIT_OK


def cmd_gfactor(args):
    s = parse_spin(args.s)
    if args.invert:
        g = parse_projection(args.value)
        res = observables.projection_for_g(s, g)
        record = {"command": "gfactor", "inputs": {"s": str(s), "g": str(g), "invert": True},
                  "outputs": {"n": _fmt(res.n), "imaginary": res.imaginary},
                  "path": "g = 1 + n^2/(s(s+1)) solved for n"}
        text = "n = %s%s" % (res.n, "  (imaginary)" if res.imaginary else "")
    else:
        n = parse_projection(args.value, s)
        res = observables.g_factor(s, n)
        record = {"command": "gfactor", "inputs": {"s": str(s), "n": str(n)},
                  "outputs": {"g": _fmt(res.g)}, "path": "g = 1 + n^2/(s(s+1))"}
        text = "g = %s" % res.g
    _emit(args, record, text)
    return EXIT_OK


def _reaction_lines(source):
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            lines = [ln.split("#", 1)[0].strip() for ln in fh]
        return [ln for ln in lines if ln]
    return [source]


def cmd_react(args):
    table = reactions.load_table(args.particles) if args.particles else None
    records, texts = [], []
    for line in _reaction_lines(args.reaction):
        if args.unknown:
            r = reactions.parse_reaction(line, table, unknown=[args.unknown])
            n = reactions.conservation_solve(r)
            records.append({"reaction": line, "unknown": args.unknown, "n": _fmt(n)})
            texts.append("%s: n(%s) = %s" % (line, args.unknown, n))
            continue
        v = reactions.check_reaction(reactions.parse_reaction(line, table))
        records.append({"reaction": line, "verdict": v.label, "coefficient": v.coefficient,
                        "route": v.route, "rationale": v.rationale})
        texts.append("%s: %s, coefficient %.12g  [%s: %s]" % (
            line, v.label, v.coefficient, v.route, v.rationale))
    record = {"command": "react", "inputs": {"source": args.reaction}, "outputs": records}
    _emit(args, record, "\n".join(texts))
    return EXIT_OK


def curve_csv(curve):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "density"])
    for x, y in curve.rows():
        w.writerow(["%.17g" % x, "%.17g" % y])
    return buf.getvalue()


def curve_json(curve):
    return json.dumps({"pattern": curve.pattern, "window": list(curve.window),
                       "axis": curve.axis, "area": curve.area,
                       "x": curve.x.tolist(), "density": curve.density.tolist()})


def cmd_quasiprob(args):
    x_range = None
    if args.xmin is not None or args.xmax is not None:
        p = coupling.get_pattern(args.pattern)
        x_range = (p.axis - 10 if args.xmin is None else args.xmin,
                   p.axis + 10 if args.xmax is None else args.xmax)
    curve = coupling.quasiprob_curve(args.pattern, x_range, args.samples)
    out = curve_csv(curve) if args.out == "csv" else curve_json(curve) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_verify(args):
    results = verification.run_all()
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print("%d/%d criteria passed" % (passed, len(results)))
    return EXIT_OK if passed == len(results) else EXIT_ACCURACY


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="spinwave", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="emit a JSON record")
    p.add_argument("--particles", default=None,
                   help="particle table file (default: $%s or bundled)" % reactions.PARTICLES_ENV)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dfunc", help="print or evaluate D^j_{nm}")
    s.add_argument("j")
    s.add_argument("n")
    s.add_argument("m")
    s.add_argument("--theta", type=float)
    s.add_argument("--phi", type=float, default=0.0)
    s.add_argument("--chi", type=float, default=0.0)
    s.set_defaults(func=cmd_dfunc)

    s = sub.add_parser("inner", help="regularized <D|W|D'>")
    for name in ("j", "n", "m", "j2", "n2", "m2"):
        s.add_argument(name)
    s.add_argument("--weight")
    s.set_defaults(func=cmd_inner)

    s = sub.add_parser("expect", help="expectation of cos θ or P_k")
    s.add_argument("j")
    s.add_argument("n")
    s.add_argument("m")
    s.add_argument("--weight", default="cos")
    s.add_argument("--path", choices=("auto", "regularized", "analytic"), default="auto")
    s.set_defaults(func=cmd_expect)

    s = sub.add_parser("cg", help="Clebsch-Gordan coefficient")
    s.add_argument("values", nargs="+", help="j1 m1 j2 m2 j3 [m3], or j n k with --internal")
    s.add_argument("--internal", action="store_true")
    s.set_defaults(func=cmd_cg)

    s = sub.add_parser("rms", help="integrated internal coefficient")
    s.add_argument("pattern", help="w, z, h-ff, h-ww (or e.g. '0,0<-1,1')")
    s.set_defaults(func=cmd_rms)

    s = sub.add_parser("gfactor", help="g from (s, n), or n from (s, g) with --invert")
    s.add_argument("s")
    s.add_argument("value")
    s.add_argument("--invert", action="store_true")
    s.set_defaults(func=cmd_gfactor)

    s = sub.add_parser("react", help="audit a decay, inline or from a file")
    s.add_argument("reaction")
    s.add_argument("--unknown", help="solve projection conservation for this product")
    s.set_defaults(func=cmd_react)

    s = sub.add_parser("quasiprob", help="sample a quasiprobability curve")
    s.add_argument("pattern")
    s.add_argument("--samples", type=int, default=4001)
    s.add_argument("--out", choices=("csv", "json"), default="csv")
    s.add_argument("--xmin", type=float)
    s.add_argument("--xmax", type=float)
    s.add_argument("--output", help="write to a file instead of stdout")
    s.set_defaults(func=cmd_quasiprob)

    s = sub.add_parser("verify", help="run the reproduction checks")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except coupling.AccuracyError as exc:
        print("accuracy error: %s (estimate %.3g)" % (exc, exc.estimate), file=sys.stderr)
        return EXIT_ACCURACY
    except (InputError, ValueError, KeyError, ZeroDivisionError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())
