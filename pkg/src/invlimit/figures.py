"""Figure data for the pictures of the inverse limit.

Each builder returns a FigureSeries: labeled polylines plus labeled markers.
Breakpoints of the line and arc layouts are read straight from the chart
images held by `Embedding`, so they agree with `psi`/`theta` bit for bit.
CSV is the contract; SVG is a matplotlib rendering of the same series.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .codes import t_inf
from .embedding import ChartBrick, Embedding, ExtendedCoord, Sheet, embedding_for
from .errors import CaseError
from .family import CASE1, CASE2, CASE3A, CASE3B, UnimodalMap, apply

FIGURE_IDS = tuple(range(1, 10))

_CASE3 = (CASE3A, CASE3B)
REQUIRED = {
    1: (None, "any case"),
    2: ((CASE1, CASE2), "case 1 or case 2"),
    3: ((CASE2,), "case 2"),
    4: (_CASE3, "case 3"),
    5: (_CASE3, "case 3"),
    6: (_CASE3, "case 3"),
    7: ((CASE3A,), "case 3a"),
    8: ((CASE3B,), "case 3b"),
    9: ((CASE3B,), "case 3b"),
}

CSV_HEADER = ["figure", "kind", "label", "index", "x", "y", "z"]


@dataclass
class FigureSeries:
    figure_id: int
    polylines: list = field(default_factory=list)  # (label, [point, ...])
    markers: list = field(default_factory=list)  # (label, point)
    dim: int = 2

    def marker(self, label: str):
        for lab, pt in self.markers:
            if lab == label:
                return pt
        raise KeyError(label)

    @property
    def labels(self) -> list[str]:
        return [lab for lab, _ in self.markers]


def compatible(m: UnimodalMap, figure_id: int) -> bool:
    kinds, _ = REQUIRED[figure_id]
    return kinds is None or m.case.kind in kinds


def check_compatible(m: UnimodalMap, figure_id: int) -> None:
    if figure_id not in REQUIRED:
        raise ValueError(f"unknown figure {figure_id}; choose 1..9")
    if not compatible(m, figure_id):
        _, need = REQUIRED[figure_id]
        raise CaseError(f"Fig. {figure_id} needs {need}, map is {m.case}")


# ---------------------------------------------------------------- labels


def d_label(counts: dict, sign: int = -1, base: str = "") -> str:
    """'-3d_0-2d_1' style label for sign * sum counts[j] d_j (after `base`)."""
    parts = [base] if base else []
    for j in sorted(counts):
        c = counts[j]
        if c == 0:
            continue
        coef = "" if c == 1 else str(c)
        parts.append(f"{'-' if sign < 0 else '+'}{coef}d_{j}")
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def _orbit_name(k: int) -> str:
    # f^k(0) written through rho1 = f(0)
    if k == 1:
        return "ρ1"
    if k == 2:
        return "f(ρ1)"
    return f"f^{k - 1}(ρ1)"


def psi_breakpoint_label(m: UnimodalMap, n: int) -> str:
    """Label of the far end of Psi(X_{T_n}), n >= 1, in cases 1 and 2.

    The value is 2 sum_{k=1}^{n-1} (-1)^k f^k(0) + (-1)^n f^n(0).
    """
    if m.case.kind == CASE2:
        # f^k(0) is rho for odd k and 0 for even k
        return f"-{'' if n == 1 else n}ρ"
    terms = []
    for k in range(1, n + 1):
        coef = 2 if k < n else 1
        sign = "-" if k % 2 else "+"
        terms.append(f"{sign}{'' if coef == 1 else coef}{_orbit_name(k)}")
    text = "".join(terms)
    return text[1:] if text.startswith("+") else text


def _far_end(b: ChartBrick) -> float:
    """End of a line brick image pointing away from 1 (the lower end)."""
    return b.image[0]


def line_breakpoints(E: Embedding, count: int) -> list[tuple[str, float]]:
    """Labeled breakpoints 1, 0, ... of the first `count` line bricks."""
    m = E.map
    bricks = E.line[:count]
    out = [("1", bricks[0].image[1]), ("0", bricks[0].image[0])]
    counts: dict = {}
    for b in bricks[1:]:
        if m.case.is_case3:
            counts[b.d_index] = counts.get(b.d_index, 0) + 1
            out.append((d_label(counts), _far_end(b)))
        else:
            out.append((psi_breakpoint_label(m, b.index), _far_end(b)))
    return out


def arc_breakpoints(E: Embedding, per_side: int) -> list[tuple[str, float]]:
    """Labeled ends of the arc bricks, left to right."""
    left, right = [], []
    counts: dict = {}
    for b in E.theta[1][:per_side]:
        counts[b.d_index] = counts.get(b.d_index, 0) + 1
        left.append((d_label(counts), b.image[0]))
    counts = {0: 1}
    for b in E.theta[0][:per_side]:
        counts[b.d_index] = counts.get(b.d_index, 0) + 1
        right.append((d_label(counts, sign=1), b.image[1]))
    mid = E.theta_brick(t_inf())
    return list(reversed(left)) + [("0", mid.image[0]), ("ρ1", mid.image[1])] + right


# ---------------------------------------------------------------- builders


def _graph(m: UnimodalMap, samples: int = 401) -> list:
    xs = np.union1d(np.linspace(0.0, 1.0, samples), [m.rho])
    return [(float(x), float(apply(m, float(x)))) for x in xs]


def fig_graph(m: UnimodalMap, figure_id: int) -> FigureSeries:
    """Figs. 1 and 4: the graph of f with its landmarks."""
    lm = m.landmarks
    fs = FigureSeries(figure_id)
    fs.polylines.append(("f", _graph(m)))
    fs.polylines.append(("diagonal", [(0.0, 0.0), (1.0, 1.0)]))
    fs.markers += [
        ("0", (0.0, 0.0)),
        ("ρ", (m.rho, 0.0)),
        ("1", (1.0, 0.0)),
        ("ρ1", (0.0, m.rho1)),
        ("ω0", (lm.omega0, 0.0)),
    ]
    if figure_id == 4:
        w1, w2 = lm.w1, lm.w2
        fs.polylines.append(("cycle", [(w1, 0.0), (w1, w2), (w2, w2), (w2, w1), (w1, w1), (w1, w2)]))
        fs.markers += [
            ("f(ρ1)", (0.0, lm.f_rho1)),
            ("ρ (axis)", (0.0, m.rho)),
            ("w1", (w1, 0.0)),
            ("w2", (w2, 0.0)),
        ]
    return fs


def fig_line_layout(m: UnimodalMap, figure_id: int, bricks: int) -> FigureSeries:
    """Figs. 2 and 5: the line bricks laid out on (a, 1]."""
    E = embedding_for(m)
    fs = FigureSeries(figure_id)
    for b in E.line[:bricks]:
        lo, hi = b.image
        fs.polylines.append((f"A_{b.index} {b.code}", [(lo, 0.0), (hi, 0.0)]))
    fs.markers += [(lab, (v, 0.0)) for lab, v in line_breakpoints(E, bricks)]
    if m.case.kind == CASE1:
        fs.markers.append(("a", (E.a, 0.0)))
    if figure_id == 2 and m.case.kind == CASE1:
        # tick of the T_2 chart offset, drawn in the picture
        fs.markers.append(("-2ρ1", (-2.0 * m.rho1, 0.0)))
    return fs


def fig_arc_layout(m: UnimodalMap, per_side: int) -> FigureSeries:
    """Fig. 6: the arc bricks of the orbits limiting to omega0."""
    E = embedding_for(m)
    fs = FigureSeries(6)
    for b in E.theta_sequence():
        if b.index > per_side:
            continue
        lo, hi = b.image
        fs.polylines.append((f"d_{b.d_index} {b.code}", [(lo, 0.0), (hi, 0.0)]))
    fs.markers += [(lab, (v, 0.0)) for lab, v in arc_breakpoints(E, per_side)]
    if m.case.kind == CASE3A:
        fs.markers += [("a_∞", (E.a_inf, 0.0)), ("b_∞", (E.b_inf, 0.0))]
    return fs


def _sample_brick(E: Embedding, b: ChartBrick, k: int) -> list:
    """Model points of k samples of a line brick, ends included."""
    lo, hi = b.image
    ys = np.linspace(lo, hi, k)
    return [E.model_coordinates(ExtendedCoord(Sheet.LINE, float(y))) for y in ys]


def fig_zigzag(m: UnimodalMap, figure_id: int, bricks: int, k: int = 9) -> FigureSeries:
    """Figs. 3 and 7: the ray winding onto the arc (model chart in R^2)."""
    E = embedding_for(m)
    fs = FigureSeries(figure_id)
    for b in E.line[:bricks]:
        fs.polylines.append((f"A_{b.index} {b.code}", _sample_brick(E, b, k)))
    line_pt = lambda y: E.model_coordinates(ExtendedCoord(Sheet.LINE, y))  # noqa: E731
    arc_pt = lambda s: E.model_coordinates(ExtendedCoord(Sheet.ARC_INF, s))  # noqa: E731
    fs.markers += [(lab, line_pt(v)) for lab, v in line_breakpoints(E, bricks)]
    if m.case.kind == CASE2:
        w = m.landmarks.omega0
        fs.polylines.append(("arc", [arc_pt(0.0), arc_pt(w), arc_pt(m.rho)]))
        fs.markers += [("(0,∞)", arc_pt(0.0)), ("(ρ,∞)", arc_pt(m.rho))]
        return fs
    ends = sorted({v for b in E.theta_sequence() for v in b.image} | {m.landmarks.omega0, E.a_inf, E.b_inf})
    ends = [v for v in ends if E.a_inf <= v <= E.b_inf]
    fs.polylines.append(("arc", [arc_pt(v) for v in ends]))
    fs.markers += [("(a_∞,∞)", arc_pt(E.a_inf)), ("(b_∞,∞)", arc_pt(E.b_inf))]
    for b in E.theta_sequence():
        if b.index <= 3:
            lo, hi = b.image
            fs.markers.append((f"d_{b.d_index}", arc_pt(0.5 * (lo + hi))))
    return fs


def _arc_model_polylines(E: Embedding, per_side: int, k: int) -> list:
    m = E.map
    out = []
    for b in E.theta_sequence():
        if b.index > per_side:
            continue
        lo, hi = b.image
        pts = [E.model_coordinates(ExtendedCoord(Sheet.ARC_INF, float(s))) for s in np.linspace(lo, hi, k)]
        out.append((f"arc d_{b.d_index} {b.code}", pts))
    minus = [E.model_coordinates(ExtendedCoord(Sheet.ARC_MINUS, s)) for s in (0.0, m.landmarks.f_rho1)]
    plus = [E.model_coordinates(ExtendedCoord(Sheet.ARC_PLUS, s)) for s in (m.rho, m.rho1)]
    out.append(("ArcMinusInf", minus))
    out.append(("ArcPlusInf", plus))
    return out


def _end_arc_markers(E: Embedding) -> list:
    m = E.map
    mc = E.model_coordinates
    return [
        ("(0,-∞)", mc(ExtendedCoord(Sheet.ARC_MINUS, 0.0))),
        ("(f(ρ1),-∞)", mc(ExtendedCoord(Sheet.ARC_MINUS, m.landmarks.f_rho1))),
        ("(ρ,+∞)", mc(ExtendedCoord(Sheet.ARC_PLUS, m.rho))),
        ("(ρ1,+∞)", mc(ExtendedCoord(Sheet.ARC_PLUS, m.rho1))),
    ]


def fig_case3b_arcs(m: UnimodalMap, per_side: int, k: int = 9) -> FigureSeries:
    """Fig. 8: the orbits not limiting to 1, projected to the Oxy plane."""
    E = embedding_for(m)
    fs = FigureSeries(8)
    drop = lambda p: (p[0], p[1])  # noqa: E731
    for lab, pts in _arc_model_polylines(E, per_side, k):
        fs.polylines.append((lab, [drop(p) for p in pts]))
    arc = lambda s: drop(E.model_coordinates(ExtendedCoord(Sheet.ARC_INF, s)))  # noqa: E731
    fs.markers += [("0", arc(0.0)), ("ρ", arc(m.rho))]
    for n, b in enumerate(E.theta[1][:3], 1):
        fs.markers.append((f"-{'' if n == 1 else n}d_1", arc(b.image[0])))
    for n, b in enumerate(E.theta[0][:3], 1):
        # the near end of T^0_n is rho1 + (n-1) d2 = rho + n d2
        fs.markers.append(("ρ1=ρ+d_2" if n == 1 else f"ρ+{n}d_2", arc(b.image[0])))
    fs.markers += [(lab, drop(p)) for lab, p in _end_arc_markers(E)]
    return fs


def fig_case3b_space(m: UnimodalMap, bricks: int, per_side: int, k: int = 9) -> FigureSeries:
    """Fig. 9: the whole space in the model chart of R^3."""
    E = embedding_for(m)
    fs = FigureSeries(9, dim=3)
    for b in E.line[:bricks]:
        fs.polylines.append((f"A_{b.index} {b.code}", _sample_brick(E, b, k)))
    fs.polylines += _arc_model_polylines(E, per_side, k)
    mc = E.model_coordinates
    fs.markers += [
        ("1", mc(ExtendedCoord(Sheet.LINE, 1.0))),
        ("(0,∞)", mc(ExtendedCoord(Sheet.ARC_INF, 0.0))),
        ("(ρ,∞)", mc(ExtendedCoord(Sheet.ARC_INF, m.rho))),
        ("(ρ1,∞)", mc(ExtendedCoord(Sheet.ARC_INF, m.rho1))),
        ("(d_1,-∞)", mc(ExtendedCoord(Sheet.ARC_MINUS, m.landmarks.f_rho1))),
    ]
    fs.markers += _end_arc_markers(E)
    return fs


def build_figure(m: UnimodalMap, figure_id: int) -> FigureSeries:
    check_compatible(m, figure_id)
    if figure_id in (1, 4):
        return fig_graph(m, figure_id)
    if figure_id == 2:
        return fig_line_layout(m, 2, bricks=12)
    if figure_id == 5:
        return fig_line_layout(m, 5, bricks=18)
    if figure_id == 6:
        return fig_arc_layout(m, per_side=6)
    if figure_id == 3:
        return fig_zigzag(m, 3, bricks=24)
    if figure_id == 7:
        return fig_zigzag(m, 7, bricks=32)
    if figure_id == 8:
        return fig_case3b_arcs(m, per_side=12)
    return fig_case3b_space(m, bricks=32, per_side=12)


# ---------------------------------------------------------------- output


def _num(v: float) -> str:
    return "%.17g" % v


def _row(fid, kind, label, index, pt):
    xyz = [_num(float(c)) for c in pt] + [""] * (3 - len(pt))
    return [str(fid), kind, label, str(index)] + xyz


def to_csv(fs: FigureSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for label, pts in fs.polylines:
        for i, pt in enumerate(pts):
            w.writerow(_row(fs.figure_id, "polyline", label, i, pt))
    for i, (label, pt) in enumerate(fs.markers):
        w.writerow(_row(fs.figure_id, "marker", label, i, pt))
    return buf.getvalue()


def write_csv(fs: FigureSeries, path) -> Path:
    path = Path(path)
    path.write_text(to_csv(fs), encoding="utf-8")
    return path


def _render(fs: FigureSeries, path: Path, axes=(0, 1)) -> None:
    from matplotlib import rc_context
    from matplotlib.figure import Figure

    i, j = axes
    with rc_context({"svg.hashsalt": "invlimit", "svg.fonttype": "path"}):
        fig = Figure(figsize=(8, 4.5))
        ax = fig.add_subplot()
        for n, (label, pts) in enumerate(fs.polylines):
            arr = np.asarray(pts, dtype=float)
            ax.plot(arr[:, i], arr[:, j], lw=1.2 if n % 2 else 1.8, color="C0" if n % 2 else "C1")
        for label, pt in fs.markers:
            ax.plot([pt[i]], [pt[j]], "k.", ms=4)
            ax.annotate(label, (pt[i], pt[j]), textcoords="offset points", xytext=(2, 4), fontsize=6)
        names = "xyz"
        ax.set_xlabel(names[i])
        ax.set_ylabel(names[j])
        ax.set_title(f"Fig. {fs.figure_id}")
        fig.savefig(path, format="svg", metadata={"Date": None})


def write_svg(fs: FigureSeries, path) -> list[Path]:
    """Render to SVG; the 3D figure becomes two projections, *_oxy and *_ozx."""
    path = Path(path)
    if fs.dim == 3:
        out = []
        for tag, axes in (("oxy", (0, 1)), ("ozx", (0, 2))):
            p = path.with_name(f"{path.stem}_{tag}{path.suffix or '.svg'}")
            _render(fs, p, axes)
            out.append(p)
        return out
    _render(fs, path)
    return [path]
