"""Command-line entry point: ``holoset <command> [flags]``.

Every command writes a JSON RunReport to stdout (or ``--out``). Exit codes:
0 success, 2 validation or module error, 3 INCONCLUSIVE verdict, and 1 when
``reproduce`` finds a failing criterion. Seeds default to 0.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import time
from typing import Optional

import numpy as np

from . import acceptance, blowup, closed_form as cf
from .errors import BadConfig, ConstantPoly, HolosetError, ParseError
from .estimator import (SamplerConfig, ShellSpec, Weight, mc_graph_fiber_volume,
                        mc_shell_surface_integral, mc_sublevel_energy, mc_sublevel_volume)
from .exponents import exponent_report, fit_power_law, lojasiewicz_curve_probe
from .poly import PolyDomain, SparsePolynomial, evaluate, gradient, hessian_frobenius
from .singular import Integrand
from .sobolev import Verdict, classify_convergence, dyadic_integrability_test, radial_reference_integral

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3


# -- polynomial text formats -----------------------------------------------------------

def emit_polynomial(poly: SparsePolynomial) -> str:
    """Canonical JSON encoding (full float precision)."""
    terms = [{"exponents": list(idx), "coeff": [c.real, c.imag]} for idx, c in poly.terms]
    return json.dumps({"dimension": poly.dimension, "terms": terms})


def _parse_json(text: str) -> SparsePolynomial:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                         line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", field="$")
    dim = doc.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("dimension must be a positive integer", field="dimension")
    terms = doc.get("terms")
    if not isinstance(terms, list):
        raise ParseError("terms must be a list", field="terms")
    acc = {}
    for k, t in enumerate(terms):
        where = f"terms[{k}]"
        if not isinstance(t, dict):
            raise ParseError("term must be an object", field=where)
        e = t.get("exponents")
        if (not isinstance(e, list) or len(e) != dim
                or any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for x in e)):
            raise ParseError(f"exponents must be {dim} nonnegative integers", field=f"{where}.exponents")
        c = t.get("coeff")
        if isinstance(c, (int, float)) and not isinstance(c, bool):
            c = [c, 0.0]
        if (not isinstance(c, list) or len(c) != 2
                or any(not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x) for x in c)):
            raise ParseError("coeff must be [re, im] with finite numbers", field=f"{where}.coeff")
        acc[tuple(e)] = acc.get(tuple(e), 0) + complex(c[0], c[1])
    return SparsePolynomial.from_terms(dim, acc)


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<var>z\d+)|(?P<imag>[ij])|(?P<op>[-+*^()]))")


class _Shorthand:
    """Recursive-descent parser for e.g. ``z1^2 - z2^3`` or ``(1+2i)*z1*z2``."""

    def __init__(self, text, dimension):
        self.toks, pos = [], 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r} at column {pos + 1}", column=pos + 1)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        idx = [int(v[1:]) for k, v, _ in self.toks if k == "var"]
        if any(i < 1 for i in idx):
            raise ParseError("variables are numbered from z1")
        self.dim = dimension or max(idx, default=1)
        if idx and max(idx) > self.dim:
            raise ParseError(f"z{max(idx)} exceeds dimension {self.dim}")
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            where = f" at column {tok[2]}" if tok[2] else " at end of input"
            raise ParseError(f"expected {value or 'a token'}{where}", column=tok[2])
        self.i += 1
        return tok

    def const(self, c):
        return SparsePolynomial.from_terms(self.dim, [((0,) * self.dim, c)])

    def parse(self):
        out = self.expr()
        if self.peek()[0] is not None:
            raise ParseError(f"unexpected {self.peek()[1]!r} at column {self.peek()[2]}", column=self.peek()[2])
        return out

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while True:
            kind, val, _ = self.peek()
            if val == "*":
                self.take()
                out = out * self.unary()
            elif kind in ("num", "var", "imag") or val == "(":   # juxtaposition
                out = out * self.unary()
            else:
                return out

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num" or not val.isdigit():
                raise ParseError(f"exponent must be a nonnegative integer at column {col}", column=col)
            base = base ** int(val)
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            c = float(val)
            if self.peek()[0] == "imag":
                self.take()
                return self.const(1j * c)
            return self.const(c)
        if kind == "imag":
            return self.const(1j)
        if kind == "var":
            e = [0] * self.dim
            e[int(val[1:]) - 1] = 1
            return SparsePolynomial.monomial(e)
        if val == "(":
            out = self.expr()
            self.take(")")
            return out
        raise ParseError(f"unexpected {val!r} at column {col}", column=col)


def parse_polynomial(text: str, dimension: Optional[int] = None,
                     require_nonconstant: bool = False) -> SparsePolynomial:
    """Parse polynomial JSON (see :func:`emit_polynomial`) or shorthand text."""
    text = text.strip()
    poly = _parse_json(text) if text.startswith("{") else _Shorthand(text, dimension).parse()
    if dimension is not None and poly.dimension != dimension:
        raise ParseError(f"dimension {poly.dimension} does not match requested {dimension}", field="dimension")
    if require_nonconstant and poly.is_constant:
        raise ConstantPoly("this command needs a nonconstant polynomial")
    return poly


def _load_poly(args, require_nonconstant=True):
    text = args.poly
    if text.startswith("@") or text.endswith(".json"):
        path = text[1:] if text.startswith("@") else text
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_polynomial(text, args.dim, require_nonconstant)


# -- flag helpers -----------------------------------------------------------------------

def _count(text: str) -> int:
    """Sample counts in decimal or scientific notation, e.g. 1e7."""
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"not a positive integer: {text!r}")
    return int(v)


def _complex_list(text: str) -> list:
    try:
        return [complex(x.strip().replace("i", "j")) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex list {text!r}") from exc


def _config(args, dimension) -> SamplerConfig:
    domain = None
    if args.domain == "ball":
        domain = PolyDomain.ball(dimension, args.radius)
    elif args.radius != 1.0:
        domain = PolyDomain.polydisc(dimension, args.radius)
    return SamplerConfig(seed=args.seed, n_samples=args.samples, n_workers=args.workers,
                         domain=domain, low_discrepancy=args.low_discrepancy)


def _estimate(res) -> dict:
    return res.to_dict()


def _exact(value) -> dict:
    return {"value": value, "tag": "EXACT"}


def _monomial_kl(poly):
    if poly.is_monomial and poly.dimension == 2:
        (idx, c), = poly.terms
        if c == 1 and all(k >= 1 for k in idx):
            return idx
    return None


# -- commands -----------------------------------------------------------------------------

def cmd_eval(args):
    poly = _load_poly(args, require_nonconstant=False)
    pt = args.point
    g, gn = gradient(poly, pt)
    return {"value": _exact([evaluate(poly, pt).real, evaluate(poly, pt).imag]),
            "gradient": _exact([[z.real, z.imag] for z in g]),
            "gradient_norm": _exact(gn),
            "hessian_frobenius": _exact(hessian_frobenius(poly, pt))}, None


def cmd_volume(args):
    poly = _load_poly(args)
    cfg = _config(args, poly.dimension)
    out = {"estimate": _estimate(mc_sublevel_volume(poly, args.eps, cfg))}
    kl = _monomial_kl(poly)
    if kl and cfg.domain is None and args.eps <= 1:
        out["reference"] = _exact(cf.monomial_sublevel_volume_exact(*kl, args.eps))
    return out, cfg


def cmd_level_integral(args):
    poly = _load_poly(args)
    cfg = _config(args, poly.dimension)
    weight = {"unit": Weight.UNIT, "grad": Weight.GRAD_F}[args.weight]
    res = mc_shell_surface_integral(poly, ShellSpec(args.eps, args.half_width), weight, cfg,
                                    proposal=args.proposal)
    out = {"estimate": _estimate(res)}
    kl = _monomial_kl(poly)
    if kl and weight is Weight.GRAD_F and cfg.domain is None and args.eps <= 1:
        out["reference"] = _exact(cf.monomial_I_exact_n2(*kl, args.eps))
    return out, cfg


def cmd_energy(args):
    poly = _load_poly(args)
    cfg = _config(args, poly.dimension)
    out = {"estimate": _estimate(mc_sublevel_energy(poly, args.eps, args.p, cfg))}
    kl = _monomial_kl(poly)
    if kl and args.p == 2 and cfg.domain is None and args.eps <= 1:
        out["reference"] = _exact(cf.monomial_J_exact_n2(*kl, args.eps))
    return out, cfg


def cmd_fiber_volume(args):
    a = [int(x) for x in args.exponents.split(",")]
    cfg = SamplerConfig(seed=args.seed, n_samples=args.samples, n_workers=args.workers,
                        low_discrepancy=args.low_discrepancy)
    out = {"exponents": a, "w": [args.w.real, args.w.imag],
           "estimate": _estimate(mc_graph_fiber_volume(a, args.w, cfg))}
    if a == [1, 1]:
        out["reference"] = _exact(cf.fiber_volume_z1z2_exact(abs(args.w)))
    return out, cfg


def cmd_fit_exponent(args):
    poly = _load_poly(args)
    cfg = _config(args, poly.dimension)
    if args.jmax <= args.jmin:
        raise BadConfig("need jmax > jmin")
    eps_list = [2.0**-j for j in range(args.jmin, args.jmax + 1)]   # dyadic, descending
    rows = []
    for eps in eps_list:
        if args.quantity == "volume":
            r = mc_sublevel_volume(poly, eps, cfg)
        elif args.quantity == "energy":
            r = mc_sublevel_energy(poly, eps, 2.0, cfg)
        else:
            weight = Weight.UNIT if args.quantity == "area" else Weight.GRAD_F
            r = mc_shell_surface_integral(poly, ShellSpec(eps), weight, cfg, proposal=args.proposal)
        rows.append((eps, r.value, r.std_error))
    fit = fit_power_law(rows)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["eps", "value", "std_error"])
            w.writerows([[repr(x) for x in row] for row in rows])
    return {"quantity": args.quantity, "fit": fit.to_dict(), "csv": args.csv}, cfg


def cmd_lojasiewicz(args):
    poly = _load_poly(args)
    est = lojasiewicz_curve_probe(poly, args.amax)
    gamma, tau, cse = exponent_report(est.alpha)
    return {"lojasiewicz": est.to_dict(), "gamma": gamma, "tau": tau, "cse_lower": cse,
            "note": "curve probe: alpha is a lower bound; exponents are deterministic (no sampling)"}, None


def cmd_sobolev(args):
    if args.reference:
        a, b, c = args.reference
        v = radial_reference_integral(a, b, c, args.upper)
        verdict = classify_convergence(a, b, c)
        return {"reference": {"a": a, "b": b, "c": c, "upper": args.upper,
                              "value": v.value if isinstance(v, Verdict) else _exact(v),
                              "verdict": verdict.value}}, None
    poly = _load_poly(args)
    cfg = _config(args, poly.dimension)
    led = dyadic_integrability_test(poly, Integrand.parse(args.integrand), args.j0, args.j1, cfg)
    out = {"ledger": led.to_dict(), "rescale": led.rescale.to_dict() if led.rescale else None}
    if led.exploratory:
        out["label"] = "EXPLORATORY"
    return out, cfg


def cmd_blowup_demo(args):
    charts = {}
    for cid in (1, 2):
        ch = blowup.BlowupChart(cid)
        m, strict, r = blowup.pullback_factorization(ch, seed=args.seed)
        charts[f"chart{cid}"] = {"coordinates": list(ch.coordinate_names), "exceptional_exponent": m,
                                 "strict_transform": strict.format(ch.coordinate_names),
                                 "max_residual": r, "passed": r < 1e-12}
    second = {str(z): abs(blowup.pullback_second_derivative(z, 0.2) - 2) for z in (1e-2, 1e-4, 1e-6)}
    return {"subject": "z1^2 - z2^3", "charts": charts,
            "overlap_residual": blowup.chart_overlap_residual(args.seed),
            "strict_transform_min_gradient": blowup.strict_transform_min_gradient(),
            "second_derivative_minus_2_at_t=0.2": second}, None


def cmd_reproduce(args):
    scale = 0.05 if args.quick else 1.0
    nums = sorted({int(x) for x in args.criteria.split(",")}) if args.criteria else None

    def progress(res):
        print(res.line(), file=sys.stderr, flush=True)

    results = acceptance.run_all(nums, seed=args.seed, scale=scale, progress=progress)
    table = [r.to_dict() for r in results]
    return {"scale": scale, "criteria": table,
            "all_passed": all(r.passed for r in results)}, None


COMMANDS = {
    "eval": cmd_eval, "volume": cmd_volume, "level-integral": cmd_level_integral,
    "energy": cmd_energy, "fiber-volume": cmd_fiber_volume, "fit-exponent": cmd_fit_exponent,
    "lojasiewicz": cmd_lojasiewicz, "sobolev": cmd_sobolev, "blowup-demo": cmd_blowup_demo,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holoset", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, poly=True, sampling=True):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        if poly:
            sp.add_argument("--poly", required=True,
                            help="shorthand ('z1^2 - z2^3'), JSON text, or a .json file / @file")
            sp.add_argument("--dim", type=int, default=None, help="ambient dimension (shorthand only)")
        if sampling:
            sp.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
            sp.add_argument("--samples", type=_count, default=1_000_000)
            sp.add_argument("--workers", type=int, default=1)
            sp.add_argument("--domain", choices=["polydisc", "ball"], default="polydisc")
            sp.add_argument("--radius", type=float, default=1.0)
            sp.add_argument("--low-discrepancy", action="store_true")

    s = sub.add_parser("eval", help="value, gradient and Hessian norm at a point")
    common(s, sampling=False)
    s.add_argument("--point", type=_complex_list, required=True, help="comma-separated, e.g. 0.5,0.5+0.1i")

    s = sub.add_parser("volume", help="sublevel volume Vol{|f| < eps}")
    common(s)
    s.add_argument("--eps", type=float, required=True)

    s = sub.add_parser("level-integral", help="thin-shell surface integral over {|f| = eps}")
    common(s)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--weight", choices=["unit", "grad"], default="grad")
    s.add_argument("--half-width", type=float, default=None, help="shell half-width (default eps/20)")
    s.add_argument("--proposal", choices=["uniform", "adaptive"], default="uniform")

    s = sub.add_parser("energy", help="integral of |df|^p over {|f| < eps}")
    common(s)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--p", type=float, default=2.0)

    s = sub.add_parser("fiber-volume", help="area of {z^A = w} by the graph formula")
    common(s, poly=False)
    s.add_argument("--exponents", required=True, help="e.g. 1,2")
    s.add_argument("--w", type=lambda t: complex(t.replace("i", "j")), required=True)

    s = sub.add_parser("fit-exponent", help="power-law exponent over eps = 2^-jmin .. 2^-jmax")
    common(s)
    s.add_argument("--quantity", choices=["volume", "area", "level", "energy"], default="area",
                   help="area: UNIT shell; level: GRAD_F shell")
    s.add_argument("--jmin", type=int, default=3)
    s.add_argument("--jmax", type=int, default=7)
    s.add_argument("--proposal", choices=["uniform", "adaptive"], default="adaptive")
    s.add_argument("--csv", help="also write (eps, value, std_error) rows here")

    s = sub.add_parser("lojasiewicz", help="curve-probe estimate of the Lojasiewicz exponent")
    common(s, sampling=False)
    s.add_argument("--amax", type=int, default=6)

    s = sub.add_parser("sobolev", help="dyadic integrability verdict, or a 1-D reference integral")
    common(s, poly=False)
    s.add_argument("--poly")
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--integrand", default="GRAD_U_SQ", help="e.g. GRAD_U_P(2.5), A1_HESS, INV_F_P(0.5)")
    s.add_argument("--j0", type=int, default=2)
    s.add_argument("--j1", type=int, default=18)
    s.add_argument("--reference", type=float, nargs=3, metavar=("A", "B", "C"),
                   help="evaluate int_0^upper dt/(t^a |ln t|^b (ln|ln t|)^c) instead")
    s.add_argument("--upper", type=float, default=0.1)

    s = sub.add_parser("blowup-demo", help="cusp blow-up chart checks")
    common(s, poly=False, sampling=False)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("reproduce", help="run the acceptance suite")
    common(s, poly=False, sampling=False)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--quick", action="store_true", help="5%% of the sample counts")
    s.add_argument("--criteria", help="comma-separated subset, e.g. 1,3,11")
    return p


def _write(report: dict, out: Optional[str]):
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default, allow_nan=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sobolev" and not args.reference and not args.poly:
        parser.error("sobolev needs --poly or --reference")
    t0 = time.perf_counter()
    report = {"command": ["holoset", *argv]}
    try:
        result, cfg = COMMANDS[args.command](args)
    except HolosetError as exc:
        report["error"] = exc.as_dict()
        _write(report, getattr(args, "out", None))
        return EXIT_INVALID
    report["config"] = None if cfg is None else cfg.to_dict()
    report["result"] = result
    elapsed = time.perf_counter() - t0
    if args.command == "reproduce":
        # wall-clock stays out of the report so reruns are byte-identical
        print(f"wall-clock {elapsed:.1f}s", file=sys.stderr)
    else:
        report["wall_clock_s"] = elapsed
    _write(report, getattr(args, "out", None))
    if args.command == "reproduce":
        return EXIT_OK if result["all_passed"] else EXIT_FAILED
    if args.command == "sobolev" and "ledger" in result and result["ledger"]["verdict"] == Verdict.INCONCLUSIVE.value:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
