"""Command line entry point: classify, census, embed, figure.

Exit codes: 0 on success (classifier and census agree), 1 on invalid
parameters or other errors, 2 when the classifier and the census disagree.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .embedding import ExtendedCoord, Sheet, embedding_for
from .errors import InvLimitError, ParameterError
from .family import (
    CASE1,
    CASE2,
    CASE3A,
    CASE3B,
    REFERENCE,
    UnimodalMap,
    census_agrees,
    load_preset,
    period_census,
    reference,
)
from .figures import FIGURE_IDS, build_figure, check_compatible, compatible, write_csv, write_svg

log = logging.getLogger("invlimit")

EXIT_OK, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2

_CASE_TEXT = {CASE1: "Case 1", CASE2: "Case 2", CASE3A: "Case 3a", CASE3B: "Case 3b"}


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 so that 2 keeps meaning "disagreement"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _num(v: float) -> str:
    return "%.17g" % v


# ---------------------------------------------------------------- parameters


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters")
    g.add_argument("--rho", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument(
        "--preset",
        metavar="FILE",
        help="key=value file with rho, delta, gamma, alpha (or a reference name: " + ", ".join(REFERENCE) + ")",
    )


def map_from_args(args) -> UnimodalMap:
    inline = [args.rho, args.delta, args.gamma, args.alpha]
    if args.preset is not None:
        if any(v is not None for v in inline):
            raise ParameterError(["give either --preset or the four parameters, not both"])
        path = Path(args.preset)
        if not path.exists() and args.preset in REFERENCE:
            return reference(args.preset)
        return load_preset(path)
    missing = [n for n, v in zip(("--rho", "--delta", "--gamma", "--alpha"), inline) if v is None]
    if missing:
        raise ParameterError([f"missing {', '.join(missing)}"])
    return UnimodalMap(*inline)


# ---------------------------------------------------------------- classify


def headline(m: UnimodalMap) -> str:
    """One-line description of the dynamics of the classified map."""
    label = m.case
    if label.kind not in _CASE_TEXT:
        return f"{label.kind}: {label.diagnostic}"
    lm = m.landmarks
    head = f"{_CASE_TEXT[label.kind]} (n={label.n})"
    w = f"ω0={lm.omega0:.6g}"
    if label.kind == CASE1:
        return f"{head}: {w} attracting, no cycles of larger period"
    if label.kind == CASE2:
        return f"{head}: interval of period-2 points"
    lam = abs(lm.cycle_multiplier)
    if label.kind == CASE3A:
        return f"{head}: {w} repelling, cycle (w1,w2) attracting, |λ|≈{lam:.3g}"
    return f"{head}: {w} repelling, intervals [0,f(ρ1)] and [ρ,ρ1] of period-4 points, |λ|≈{lam:.3g}"


def _census_lines(c) -> list[str]:
    periods = ", ".join(str(p) for p in sorted(c.detected_periods))
    lines = [f"census: periods {{{periods}}}, " + (
        f"stabilizes at N={c.stabilization_n}" if c.stabilization_n is not None else "not stabilized")]
    for (lo, hi), per in c.periodic_intervals:
        lines.append(f"  interval [{lo:.6g}, {hi:.6g}] of period {per}")
    for x, per in c.isolated_points:
        lines.append(f"  point {x:.6g} of period {per}")
    return lines


def cmd_classify(args) -> int:
    m = map_from_args(args)
    lm = m.landmarks
    print(headline(m))
    print(f"ρ={m.rho:.6g} ρ1={m.rho1:.6g} ω0={lm.omega0:.6g} f'(ω0)={lm.omega0_multiplier:.6g} f(ρ1)={lm.f_rho1:.6g}")
    if lm.w1 is not None:
        print(f"w1={lm.w1:.6g} w2={lm.w2:.6g} λ={lm.cycle_multiplier:.6g}")
    census = period_census(m, grid_size=args.samples, p_max=args.pmax)
    for line in _census_lines(census):
        print(line)
    agree = census_agrees(m.case, census)
    if agree is None:
        print("agreement: census did not stabilize, consistent with a map outside the family")
        return EXIT_OK
    print(f"agreement: {'yes' if agree else 'NO'}")
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_census(args) -> int:
    m = map_from_args(args)
    census = period_census(m, grid_size=args.samples, p_max=args.pmax)
    print(f"classifier: {m.case}")
    for line in _census_lines(census):
        print(line)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kind", "lo", "hi", "period"])
            for (lo, hi), per in census.periodic_intervals:
                w.writerow(["interval", _num(lo), _num(hi), per])
            for x, per in census.isolated_points:
                w.writerow(["point", _num(x), _num(x), per])
    agree = census_agrees(m.case, census)
    return EXIT_DISAGREE if agree is False else EXIT_OK


# ---------------------------------------------------------------- embed

SHEETS = {s.value: s for s in Sheet}
EMBED_HEADER = ["sheet", "value", "code", "x0", "model_x", "model_y", "model_z"]


def sheet_range(m: UnimodalMap, sheet: Sheet) -> tuple[float, float]:
    E = embedding_for(m)
    if sheet is Sheet.LINE:
        lo = E.a if m.case.kind == CASE1 else E.line_range()[0]
        return lo, 1.0
    if sheet is Sheet.ARC_INF:
        if m.case.kind == CASE2:
            return 0.0, m.rho
        if m.case.kind == CASE3A:
            return E.a_inf, E.b_inf
        if m.case.kind == CASE3B:
            return E.theta_range()
    if m.case.kind == CASE3B:
        if sheet is Sheet.ARC_MINUS:
            return 0.0, m.landmarks.f_rho1
        return m.rho, m.rho1
    raise InvLimitError(f"sheet {sheet.value} does not exist in {m.case}")


def embed_rows(m: UnimodalMap, sheet: Sheet, samples: int, depth: int, lo=None, hi=None):
    """Rows of the embed CSV and the number of skipped (uncovered) samples."""
    E = embedding_for(m)
    r_lo, r_hi = sheet_range(m, sheet)
    lo = r_lo if lo is None else lo
    hi = r_hi if hi is None else hi
    rows, skipped = [], 0
    for v in np.linspace(lo, hi, samples):
        c = ExtendedCoord(sheet, float(v))
        try:
            p = E.decode(c, depth)
            model = E.model_coordinates(c)
        except InvLimitError:
            skipped += 1
            continue
        cells = [_num(x) for x in model] + [""] * (3 - len(model))
        rows.append([sheet.value, _num(c.value), str(p.code), _num(p.x0)] + cells)
    return rows, skipped


def cmd_embed(args) -> int:
    m = map_from_args(args)
    if args.samples < 2:
        raise InvLimitError("--samples must be at least 2")
    sheet = SHEETS[args.sheet]
    lo, hi = args.range if args.range else (None, None)
    rows, skipped = embed_rows(m, sheet, args.samples, args.depth, lo, hi)
    if skipped:
        log.warning("skipped %d sample(s) outside the covered range", skipped)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(EMBED_HEADER)
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------- figure


def _write_figure(m, fid, fmt, path: Path) -> list[Path]:
    fs = build_figure(m, fid)
    if fmt == "csv":
        return [write_csv(fs, path)]
    return write_svg(fs, path)


def cmd_figure(args) -> int:
    m = map_from_args(args)
    written = []
    if args.all:
        # report mode: every figure this case supports, as CSV and SVG
        outdir = Path(args.out or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        for fid in FIGURE_IDS:
            if compatible(m, fid):
                written += _write_figure(m, fid, "csv", outdir / f"fig{fid}.csv")
                written += _write_figure(m, fid, "svg", outdir / f"fig{fid}.svg")
    else:
        if args.figure is None:
            raise InvLimitError("give --figure N or --all")
        check_compatible(m, args.figure)
        path = Path(args.out or f"fig{args.figure}.{args.format}")
        written += _write_figure(m, args.figure, args.format, path)
    for p in written:
        print(p)
    return EXIT_OK


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invlimit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="case label, landmarks and census cross-check")
    _add_params(p)
    p.add_argument("--samples", type=int, default=2048, help="census grid size")
    p.add_argument("--pmax", type=int, default=8)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", help="brute-force period census")
    _add_params(p)
    p.add_argument("--samples", type=int, default=2048, help="census grid size")
    p.add_argument("--pmax", type=int, default=8)
    p.add_argument("--out", help="CSV of periodic intervals and points")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("embed", help="sample a sheet of the embedding to CSV")
    _add_params(p)
    p.add_argument("--sheet", choices=list(SHEETS), default=Sheet.LINE.value)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--depth", type=int, default=64, help="thread depth of decoded points")
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("figure", help="figure series as CSV or SVG")
    _add_params(p)
    p.add_argument("--figure", type=int, choices=FIGURE_IDS)
    p.add_argument("--all", action="store_true", help="all compatible figures, CSV and SVG, into --out DIR")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ParameterError as exc:
        for v in exc.violations:
            print(f"invalid parameters: {v}", file=sys.stderr)
        return EXIT_ERROR
    except (InvLimitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
