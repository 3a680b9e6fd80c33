"""Command-line interface.

Exit status: 0 on success, 2 on usage errors (argparse), 1 when the inputs
parse but violate a mathematical precondition.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Callable, Optional

from . import __version__
from .arith import check_discriminant
from .errors import RiverlinkError, ScopeError
from .experiments import (BENCH_HEADER, CSTAT_HEADER, HISTOGRAM_HEADER, LOCUS_HEADER,
                          angle_histogram, bench_compare, bench_rows, c_statistic,
                          c_statistic_batch, cstat_rows, fmt_float, half_sine_ks,
                          histogram_rows, intersection_locus, locus_rows, to_csv)
from .forms import Pibqf, narrow_class_group
from .geometry import crossing_point, geodesics_cross
from .grosszagier import (classwise_intersections, p_count, s_range,
                          total_intersection_formula)
from .intersect import components, intersection_number
from .river import is_reciprocal_river, river_of

_FORM = re.compile(r"\s*\[\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*\]\s*")
STANDARD_BASE = complex(-4 / 3, 5 ** 0.5 / 3)


def _form_literal(text: str) -> str:
    if not _FORM.fullmatch(text):
        raise argparse.ArgumentTypeError(f"malformed form literal {text!r}, expected [A,B,C]")
    return text


def _interval(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*[:,]\s*(\d+)\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise argparse.ArgumentTypeError(f"expected an interval LO:HI with LO <= HI, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _complex_point(text: str) -> complex:
    try:
        re_, im = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if im <= 0:
        raise argparse.ArgumentTypeError("base point must lie in the upper half plane")
    return complex(re_, im)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


class Output:
    """Collects one command's result in the requested format."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, text: Callable[[], str], data: Callable[[], object],
             csv: Callable[[], str]) -> str:
        if self.fmt == "json":
            return json.dumps(data(), indent=2)
        if self.fmt == "csv":
            return csv().rstrip("\n")
        return text()


def _cmd_river(args, out: Output) -> str:
    q = Pibqf.parse(args.form)
    r = river_of(q)
    return out.emit(lambda: r.word,
                    lambda: {"form": str(q), "disc": q.disc, "river": r.word, "period": r.period,
                             "reciprocal": is_reciprocal_river(r)},
                    lambda: to_csv(["form", "disc", "river", "period"], [[str(q), q.disc, r.word, r.period]]))


def _cmd_classgroup(args, out: Output) -> str:
    check_discriminant(args.D)
    classes = narrow_class_group(args.D)
    rows = [[str(c), river_of(c).word] for c in classes]
    return out.emit(lambda: "\n".join(f"{f}  {w}" for f, w in rows),
                    lambda: {"disc": args.D, "h": len(classes),
                             "classes": [{"form": f, "river": w} for f, w in rows]},
                    lambda: to_csv(["form", "river"], rows))


def _cmd_intersect(args, out: Output) -> str:
    q1, q2 = Pibqf.parse(args.form1), Pibqf.parse(args.form2)
    v = intersection_number(q1, q2, fast=not args.naive)
    return out.emit(lambda: str(v),
                    lambda: {"q1": str(q1), "q2": str(q2), "int": v},
                    lambda: to_csv(["q1", "q2", "int"], [[str(q1), str(q2), v]]))


def _cmd_components(args, out: Output) -> str:
    q1, q2 = Pibqf.parse(args.form1), Pibqf.parse(args.form2)
    c = components(q1, q2)
    fields = {"rs": c.rs, "ro": c.ro, "ls": c.ls, "lo": c.lo, "total": c.total, "signed": c.signed}
    return out.emit(lambda: " ".join(f"{k}={v}" for k, v in fields.items()),
                    lambda: {"q1": str(q1), "q2": str(q2), **fields},
                    lambda: to_csv(["q1", "q2", *fields], [[str(q1), str(q2), *fields.values()]]))


def _cmd_cross(args, out: Output) -> str:
    q1, q2 = Pibqf.parse(args.form1), Pibqf.parse(args.form2)
    if not geodesics_cross(q1, q2):
        return out.emit(lambda: "no crossing",
                        lambda: {"q1": str(q1), "q2": str(q2), "cross": False},
                        lambda: to_csv(["q1", "q2", "cross"], [[str(q1), str(q2), "false"]]))
    rec = crossing_point(q1, q2)
    d = rec.as_dict()
    text = (f"bdelta={rec.bdelta} sign={rec.sign:+d} point_form=[{','.join(map(str, rec.point_form))}] "
            f"point={fmt_float(rec.point.real)}+{fmt_float(rec.point.imag)}i angle={fmt_float(rec.angle)}")
    return out.emit(lambda: text,
                    lambda: {"q1": str(q1), "q2": str(q2), "cross": True, **d},
                    lambda: to_csv(["q1", "q2", "bdelta", "sign", "point_form", "re", "im", "angle"],
                                   [[str(q1), str(q2), rec.bdelta, rec.sign,
                                     "[" + ",".join(map(str, rec.point_form)) + "]",
                                     fmt_float(rec.point.real), fmt_float(rec.point.imag),
                                     fmt_float(rec.angle)]]))


def _cmd_pn(args, out: Output) -> str:
    ns = [args.n] if args.n is not None else s_range(args.D1, args.D2)
    profiles = [p_count(args.D1, args.D2, n) for n in ns]
    if args.nonzero:
        profiles = [p for p in profiles if p.value]

    def fact(p):
        return "*".join(f"{f.prime}^{f.exponent}" if f.exponent > 1 else str(f.prime)
                        for f in p.factor_classes) or "1"

    def roles(p):
        return " ".join(f"{f.prime}:{f.role}{'+' if f.eps > 0 else '-'}" for f in p.factor_classes)

    rows = [[p.n, p.N, fact(p), roles(p), p.value] for p in profiles]
    return out.emit(lambda: "\n".join(f"{n:>6} {N:>10} {f:<24} {r:<28} {v}" for n, N, f, r, v in rows),
                    lambda: [{"n": p.n, "N": p.N, "value": p.value,
                              "factors": [{"p": f.prime, "e": f.exponent, "eps": f.eps, "role": f.role}
                                          for f in p.factor_classes]} for p in profiles],
                    lambda: to_csv(["n", "N", "factorization", "classes", "p"], rows))


def _cmd_total(args, out: Output) -> str:
    data: dict = {"d1": args.D1, "d2": args.D2}
    if args.method == "formula":
        data["formula"] = total_intersection_formula(args.D1, args.D2)
    elif args.method == "both":
        try:
            data["formula"] = total_intersection_formula(args.D1, args.D2)
        except ScopeError:
            pass    # outside the formula's hypotheses; the class sum still applies
    if args.method in ("classes", "both"):
        cells = classwise_intersections(args.D1, args.D2)
        data["classes"] = sum(v for *_, v in cells)
        data["breakdown"] = [{"q1": str(a), "q2": str(b), "int": v} for a, b, v in cells]
    if "formula" in data and "classes" in data and data["formula"] != data["classes"]:
        raise RiverlinkError(f"formula total {data['formula']} != class-sum total {data['classes']}")
    value = data.get("formula", data.get("classes"))
    text = str(value)
    if args.breakdown and "breakdown" in data:
        text += "\n" + "\n".join(f"{c['q1']} {c['q2']} {c['int']}" for c in data["breakdown"])
    return out.emit(lambda: text, lambda: data,
                    lambda: to_csv(["d1", "d2", "int"], [[args.D1, args.D2, value]]))


def _cmd_locus(args, out: Output) -> str:
    q = Pibqf.parse(args.form)
    base = STANDARD_BASE if args.standard_base else args.base
    samples = intersection_locus(q, args.D, base=base)
    if args.bins:
        hist = angle_histogram(samples, args.bins)
        rows = histogram_rows(hist)
        return out.emit(lambda: "\n".join(" ".join(r) for r in rows),
                        lambda: [{"bin_lo": b.lo, "bin_hi": b.hi, "mass": b.mass} for b in hist],
                        lambda: to_csv(HISTOGRAM_HEADER, rows))
    rows = locus_rows(samples)
    text = "\n".join(" ".join(map(str, r)) for r in rows)
    if args.ks:
        text += f"\nks={fmt_float(half_sine_ks(samples))}"
    return out.emit(lambda: text,
                    lambda: [{"class_rep": str(s.partner_class), **s.record.as_dict()} for s in samples],
                    lambda: to_csv(LOCUS_HEADER, rows))


def _cstat_dict(s) -> dict:
    return {"d1": s.d1, "d2": s.d2, "int": s.int_total, "h1": s.h1, "h2": s.h2,
            "r1": s.r1, "r2": s.r2, "c": s.c}


def _cmd_cstat(args, out: Output) -> str:
    halved = not args.literal_regulator
    if args.D1 is not None:
        if args.D2 is None:
            raise RiverlinkError("cstat needs both D1 and D2")
        items = [c_statistic(args.D1, args.D2, halved)]
    else:
        if args.seed is None:
            raise UsageError("cstat batches are randomized: pass --seed")
        items = c_statistic_batch(args.range1, args.range2, args.trials, args.seed, halved)
    rows = cstat_rows(items)
    mean = sum(s.c for s in items) / len(items)

    def text():
        body = "\n".join(" ".join(map(str, r)) for r in rows)
        return body if len(items) == 1 else f"{body}\nmean={fmt_float(mean)}"

    return out.emit(text,
                    lambda: {"trials": [_cstat_dict(s) for s in items], "mean": mean},
                    lambda: to_csv(CSTAT_HEADER, rows))


def _cmd_bench(args, out: Output) -> str:
    if args.seed is None:
        raise UsageError("bench is randomized: pass --seed")
    row = bench_compare(args.range1, args.range2, args.trials, args.seed)
    rows = bench_rows([row])
    return out.emit(lambda: " ".join(f"{k}={v}" for k, v in zip(BENCH_HEADER, rows[0]))
                    + f" speedup={fmt_float(row.speedup)}",
                    lambda: dict(zip(BENCH_HEADER, [row.d1_lo, row.d1_hi, row.d2_lo, row.d2_hi,
                                                    row.p1_avg, row.p2_avg, row.intrs_avg,
                                                    row.t_river_ms, row.t_naive_ms, row.t_fast_ms])),
                    lambda: to_csv(BENCH_HEADER, rows))


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riverlink",
                                     description="Intersection numbers of modular geodesics from river sequences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("river", _cmd_river, "river word of a form")
    p.add_argument("form", type=_form_literal)
    p = add("classgroup", _cmd_classgroup, "narrow class group representatives")
    p.add_argument("D", type=int)
    for name, fn, help_ in (("intersect", _cmd_intersect, "intersection number Int(q1, q2)"),
                            ("components", _cmd_components, "RS/RO/LS/LO counts"),
                            ("cross", _cmd_cross, "crossing data of two root geodesics")):
        p = add(name, fn, help_)
        p.add_argument("form1", type=_form_literal)
        p.add_argument("form2", type=_form_literal)
        if name == "intersect":
            p.add_argument("--naive", action="store_true", help="use the direct scan")
    p = add("pn", _cmd_pn, "p(n) table for a coprime fundamental pair")
    p.add_argument("D1", type=int)
    p.add_argument("D2", type=int)
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--nonzero", action="store_true", help="only rows with p(n) > 0")
    p = add("total", _cmd_total, "total intersection number Int(D1, D2)")
    p.add_argument("D1", type=int)
    p.add_argument("D2", type=int)
    p.add_argument("--method", choices=("formula", "classes", "both"), default="both")
    p.add_argument("--breakdown", action="store_true", help="list each class pair")
    p = add("locus", _cmd_locus, "crossings along the closed geodesic of a form")
    p.add_argument("form", type=_form_literal)
    p.add_argument("D", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--base", type=_complex_point, help="base point RE,IM on the geodesic")
    g.add_argument("--standard-base", action="store_true", help="base point (-4+sqrt(5)i)/3")
    p.add_argument("--bins", type=_positive, help="emit an angle histogram instead")
    p.add_argument("--ks", action="store_true", help="append the KS distance to sin/2")
    p = add("cstat", _cmd_cstat, "normalized total C(D1, D2), single or seeded batch")
    p.add_argument("D1", type=int, nargs="?")
    p.add_argument("D2", type=int, nargs="?")
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--range1", type=_interval, default=(1, 2000))
    p.add_argument("--range2", type=_interval, default=(1, 100000))
    p.add_argument("--seed", type=int)
    p.add_argument("--literal-regulator", action="store_true",
                   help="use log(T + U sqrt D) instead of log((T + U sqrt D) / 2)")
    p = add("bench", _cmd_bench, "naive vs fast Int^RS timing")
    p.add_argument("--range1", type=_interval, default=(1, 1000))
    p.add_argument("--range2", type=_interval, default=(1, 1000))
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--seed", type=int)
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.fn(args, Output(args.format))
    except UsageError as exc:
        print(f"riverlink: error: {exc}", file=sys.stderr)
        return 2
    except (RiverlinkError, ValueError) as exc:
        print(f"riverlink: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def main() -> None:
    sys.exit(run())
