"""Coordinates on the inverse limit.

The orbits converging backwards to 1 (the line part) are laid out on a
half-line by gluing the bricks end to end, each brick carried over by
x -> +-Phi + offset.  The remaining orbits go to one or three arcs.  A
`Chart` holds these affine pieces; `Embedding` bundles the charts of one map
and provides encoding, decoding, the conjugated shift, neighborhood bases
and a rendering chart in R^{n+1}.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

from .codes import (
    Tail,
    TypeCode,
    brick_index,
    format_code,
    identify,
    is_admissible,
    iter_types,
    t_inf,
    t_k,
)
from .errors import CaseError, MembershipError, OutOfRange
from .family import (
    CASE1,
    CASE2,
    CASE3A,
    CASE3B,
    EDGE_TOL,
    UnimodalMap,
    apply,
    tail_endpoint_a,
)
from .limit_space import (
    DEFAULT_DEPTH,
    BrickInterval,
    LimitPoint,
    brick_interval,
    decode_point,
    shift,
)

DEFAULT_TABLE = 40


class Sheet(enum.Enum):
    LINE = "Line"
    ARC_INF = "ArcInf"
    ARC_MINUS = "ArcMinusInf"
    ARC_PLUS = "ArcPlusInf"


@dataclass(frozen=True)
class ExtendedCoord:
    sheet: Sheet
    value: float

    def __str__(self):
        return f"{self.sheet.value}:{self.value!r}"


@dataclass(frozen=True)
class ChartBrick:
    """One brick placed on a coordinate line as sign * Phi + offset."""

    index: int
    code: TypeCode
    brick: BrickInterval
    sign: int
    offset: float
    d_index: Optional[int]  # the brick has length d_{d_index}; None for T_0

    def coord(self, phi: float) -> float:
        return self.sign * phi + self.offset

    def phi(self, y: float) -> float:
        return self.sign * (y - self.offset)

    @property
    def image(self) -> tuple[float, float]:
        a, b = self.coord(self.brick.lo), self.coord(self.brick.hi)
        return (a, b) if a <= b else (b, a)

    def holds(self, y: float, tol: float = EDGE_TOL) -> bool:
        lo, hi = self.image
        return lo - tol <= y <= hi + tol


def _d_index(code: TypeCode) -> Optional[int]:
    fam = identify(code)
    if fam.kind == "T":
        return None if fam.n == 0 else 0
    if fam.kind == "Tinf":
        return 0
    if fam.kind == "T1":
        return 2 * fam.k - 1
    if fam.kind == "T0":
        return 2 * fam.k
    if fam.kind == "Tk1":
        return 2 * fam.k - 1
    if fam.kind == "Tk0":
        return 2 * fam.k
    return None


def line_bricks(m: UnimodalMap) -> Iterator[ChartBrick]:
    """Line bricks A_0, A_1, ... with their affine placement (unbounded)."""
    kind = m.case.kind
    if kind in (CASE1, CASE2):
        # Psi = (-1)^n Phi + 2 sum_{k=1}^{n-1} (-1)^k f^k(0)
        orbit = 0.0  # f^{n-1}(0) once inside the loop
        acc = 0.0
        for n, code in enumerate(iter_types(m.case)):
            if n >= 2:
                orbit = apply(m, orbit)
                acc += 2.0 * (-1) ** (n - 1) * orbit
            yield ChartBrick(n, code, brick_interval(m, code), (-1) ** n, acc, _d_index(code))
    elif kind in (CASE3A, CASE3B):
        # Psi = (-1)^n (Phi - lo_n) - sum_{k=1}^{2[n/2]} |Phi(A_k)|
        widths = [0.0]
        for n, code in enumerate(iter_types(m.case)):
            b = brick_interval(m, code)
            if n >= 1:
                widths.append(widths[-1] + b.width)
            s = (-1) ** n
            total = widths[2 * (n // 2)]
            yield ChartBrick(n, code, b, s, -s * b.lo - total, _d_index(code))
    else:
        raise CaseError(f"no line chart for {kind}")


def theta_bricks(m: UnimodalMap, side: int) -> Iterator[ChartBrick]:
    """Bricks T^side_n, n = 1, 2, ... of the arc chart (case 3).

    Theta = (-1)^n Phi + 2 sum_{k=side}^{n-1} (-1)^k f^{2k-side}(rho1).
    """
    if not m.case.is_case3:
        raise CaseError("theta needs case 3")
    orbit = [m.rho1]  # orbit[j] = f^j(rho1)
    acc = 0.0
    for n in itertools.count(1):
        k = n - 1
        if k >= side:
            j = 2 * k - side
            while len(orbit) <= j:
                orbit.append(apply(m, orbit[-1]))
            acc += 2.0 * (-1) ** k * orbit[j]
        code = t_k(side, n)
        yield ChartBrick(n, code, brick_interval(m, code), (-1) ** n, acc, _d_index(code))


@dataclass(frozen=True)
class NeighborhoodPiece:
    sheet: Sheet
    index: int
    center: float
    lo: float
    hi: float
    code: TypeCode


@dataclass(frozen=True)
class NeighborhoodBase:
    center: ExtendedCoord
    arc_piece: Optional[tuple]
    line_pieces: list = field(default_factory=list)
    inf_pieces: list = field(default_factory=list)

    def pieces(self):
        return list(self.line_pieces) + list(self.inf_pieces)


class Embedding:
    """Charts for one classified map, built once and read-only afterwards."""

    def __init__(self, m: UnimodalMap, table: int = DEFAULT_TABLE):
        kind = m.case.kind
        if kind not in (CASE1, CASE2, CASE3A, CASE3B):
            raise CaseError(f"no embedding for {kind}")
        self.map = m
        self.kind = kind
        self.table = table
        self.line = tuple(itertools.islice(line_bricks(m), table))
        self._line_pos = {b.code: b.index for b in self.line}
        self.theta = {}
        self.a_inf = self.b_inf = None
        self.a = None
        if kind == CASE1:
            self.a = tail_endpoint_a(m).value
        if m.case.is_case3:
            for side in (0, 1):
                self.theta[side] = tuple(itertools.islice(theta_bricks(m, side), table))
            if kind == CASE3A:
                self.a_inf = self._theta_limit(1)
                self.b_inf = self._theta_limit(0)

    # ---------------------------------------------------------- chart access

    def _theta_limit(self, side: int) -> float:
        """Limit of Theta at w1 (side 1) or w2 (side 0) along T^side_n."""
        m = self.map
        w = m.landmarks.w1 if side == 1 else m.landmarks.w2
        x = m.rho1 if side == 0 else apply(m, m.rho1)  # f^{2k-side}(rho1) at k = side
        acc = 0.0
        prev = v = None
        # the alternating sum drifts by rounding once converged, so stop at 1e-15
        for n in range(1, 20000):
            if n - 1 >= side:
                acc += 2.0 * (-1) ** (n - 1) * x
                x = apply(m, apply(m, x))
            v = (-1) ** n * w + acc
            if n % 2 == 0:
                if prev is not None and abs(v - prev) <= 1e-15:
                    break
                prev = v
        return v

    def line_brick(self, code: TypeCode) -> ChartBrick:
        if code in self._line_pos:
            return self.line[self._line_pos[code]]
        n = brick_index(self.map.case, code)
        return next(itertools.islice(line_bricks(self.map), n, None))

    def theta_brick(self, code: TypeCode) -> ChartBrick:
        fam = identify(code)
        if fam.kind == "Tinf":
            return ChartBrick(0, code, brick_interval(self.map, code), 1, 0.0, 0)
        if fam.kind not in ("Tk1", "Tk0"):
            raise MembershipError(f"{format_code(code)} is not in the arc chart")
        side = 1 if fam.kind == "Tk1" else 0
        if fam.k <= self.table:
            return self.theta[side][fam.k - 1]
        return next(itertools.islice(theta_bricks(self.map, side), fam.k - 1, None))

    def line_range(self) -> tuple[float, float]:
        """Covered part of the line: (lowest image point, 1]."""
        return (min(b.image[0] for b in self.line), 1.0)

    def theta_range(self) -> tuple[float, float]:
        left = self.theta[1][-1].image[0]
        right = self.theta[0][-1].image[1]
        return (min(left, min(b.image[0] for b in self.theta[1])), max(right, max(b.image[1] for b in self.theta[0])))

    def theta_sequence(self) -> list[ChartBrick]:
        """Arc bricks left to right: ..., T^1_2, T^1_1, T_inf, T^0_1, T^0_2, ..."""
        mid = self.theta_brick(t_inf())
        return list(reversed(self.theta[1])) + [mid] + list(self.theta[0])

    # ---------------------------------------------------------- encode

    def psi(self, p: LimitPoint) -> float:
        if p.code.tail is not Tail.ALL_ONES:
            raise MembershipError(f"{format_code(p.code)} is not in the line part")
        return self.line_brick(p.code).coord(p.x0)

    def theta_coord(self, p: LimitPoint) -> ExtendedCoord:
        if not self.map.case.is_case3:
            raise CaseError("theta needs case 3")
        tail = p.code.tail
        if tail is Tail.ALL_ONES:
            raise MembershipError(f"{format_code(p.code)} is in the line part")
        if tail is Tail.ALL_ZEROS:
            return ExtendedCoord(Sheet.ARC_INF, self.theta_brick(p.code).coord(p.x0))
        if p.code.prefix:
            raise MembershipError(f"{format_code(p.code)} is not admissible")
        if self.kind == CASE3A:
            return ExtendedCoord(Sheet.ARC_INF, self.a_inf if tail is Tail.ALT10 else self.b_inf)
        return ExtendedCoord(Sheet.ARC_MINUS if tail is Tail.ALT10 else Sheet.ARC_PLUS, p.x0)

    def encode(self, p: LimitPoint) -> ExtendedCoord:
        if p.code.tail is Tail.ALL_ONES:
            return ExtendedCoord(Sheet.LINE, self.psi(p))
        if self.kind == CASE1:
            if p.code != t_inf():
                raise MembershipError(f"{format_code(p.code)} is not admissible in case 1")
            return ExtendedCoord(Sheet.LINE, self.a)
        if self.kind == CASE2:
            if p.code != t_inf():
                raise MembershipError(f"{format_code(p.code)} is not admissible in case 2")
            return ExtendedCoord(Sheet.ARC_INF, p.x0)
        return self.theta_coord(p)

    # ---------------------------------------------------------- decode

    def decode_line(self, y: float, depth: int = DEFAULT_DEPTH) -> LimitPoint:
        y = float(y)
        if y > 1.0 + EDGE_TOL:
            raise OutOfRange(f"line coordinate {y!r} above 1")
        if self.kind == CASE1 and y <= self.a + 1e-12:
            if y < self.a - 1e-12:
                raise OutOfRange(f"line coordinate {y!r} below a = {self.a!r}")
            return decode_point(self.map, self.map.landmarks.omega0, t_inf(), depth)
        for b in self.line:
            if b.holds(y):
                return decode_point(self.map, b.phi(y), b.code, depth)
        raise OutOfRange(f"line coordinate {y!r} below the covered range {self.line_range()[0]!r}")

    def decode_arc(self, c: ExtendedCoord, depth: int = DEFAULT_DEPTH) -> LimitPoint:
        m = self.map
        if c.sheet is Sheet.ARC_INF:
            if self.kind == CASE2:
                return decode_point(m, c.value, t_inf(), depth)
            if not m.case.is_case3:
                raise MembershipError(f"no arc sheet in {self.kind}")
            if self.kind == CASE3A:
                if abs(c.value - self.a_inf) <= 1e-12:
                    return decode_point(m, m.landmarks.w1, TypeCode("", Tail.ALT10), depth)
                if abs(c.value - self.b_inf) <= 1e-12:
                    return decode_point(m, m.landmarks.w2, TypeCode("", Tail.ALT01), depth)
            # ties go to the brick nearer the middle
            for b in [self.theta_brick(t_inf())] + [x for pair in zip(self.theta[1], self.theta[0]) for x in pair]:
                if b.holds(c.value):
                    return decode_point(m, b.phi(c.value), b.code, depth)
            raise OutOfRange(f"arc coordinate {c.value!r} outside the covered range {self.theta_range()}")
        if self.kind != CASE3B:
            raise MembershipError(f"sheet {c.sheet.value} exists only in case 3b")
        tail = Tail.ALT10 if c.sheet is Sheet.ARC_MINUS else Tail.ALT01
        return decode_point(m, c.value, TypeCode("", tail), depth)

    def decode(self, c: ExtendedCoord, depth: int = DEFAULT_DEPTH) -> LimitPoint:
        if c.sheet is Sheet.LINE:
            return self.decode_line(c.value, depth)
        return self.decode_arc(c, depth)

    def embedded_shift(self, c: ExtendedCoord, depth: int = 8) -> ExtendedCoord:
        return self.encode(shift(self.map, self.decode(c, depth)))

    # ---------------------------------------------------------- neighborhoods

    def _line_approximants(self, code: TypeCode, count: int, above: int):
        """Line codes prefix + 0^j + 1^inf grouped by index, indices > above."""
        out = []
        j = 1
        while len({idx for idx, _ in out}) <= count and j < 8 * (count + above) + 16:
            c = TypeCode(code.prefix + "0" * j, Tail.ALL_ONES)
            j += 1
            if not is_admissible(self.map.case, c):
                continue
            idx = self._piece_index(c)
            if idx > above:
                out.append((idx, c))
        keep = sorted({idx for idx, _ in out})[:count]
        return [(idx, c) for idx, c in out if idx in keep]

    def _piece_index(self, code: TypeCode) -> int:
        from .codes import cluster_of

        if self.kind in (CASE1, CASE2):
            return identify(code).n
        return cluster_of(code)

    def neighborhood_base(self, c: ExtendedCoord, N: int, eps: float, count: int = 8) -> NeighborhoodBase:
        """Basic neighborhood O_{N,eps}(c), listing `count` indices beyond N."""
        arc = (c.value - eps, c.value + eps)
        if c.sheet is Sheet.LINE:
            return NeighborhoodBase(c, arc)
        p = self.decode(c, depth=4)
        line, inf = [], []

        def add_line(point_code, x0):
            for idx, lc in self._line_approximants(point_code, count, N):
                y = self.line_brick(lc).coord(x0)
                line.append(NeighborhoodPiece(Sheet.LINE, idx, y, y - eps, y + eps, lc))

        if p.code.tail is Tail.ALL_ZEROS:
            add_line(p.code, p.x0)
        else:
            # alternating tail: approximate by T^i_n on the arc, then by the line
            side = 1 if p.code.tail is Tail.ALT10 else 0
            for n in range(N + 1, N + 1 + count):
                b = self.theta_brick(t_k(side, n))
                y = b.coord(p.x0)
                inf.append(NeighborhoodPiece(Sheet.ARC_INF, n, y, y - eps, y + eps, b.code))
                for idx, lc in self._line_approximants(b.code, 2, N):
                    yl = self.line_brick(lc).coord(p.x0)
                    line.append(NeighborhoodPiece(Sheet.LINE, idx, yl, yl - eps, yl + eps, lc))
        line.sort(key=lambda q: (q.index, -q.center))
        return NeighborhoodBase(c, arc, line, inf)

    # ---------------------------------------------------------- model chart

    def arc_normalize(self, s: float) -> float:
        """Arc value to [-1, 1] piecewise linearly with omega0 at 0."""
        w = self.map.landmarks.omega0
        if self.kind == CASE2:
            lo, hi = 0.0, self.map.rho
        else:
            lo, hi = self.a_inf, self.b_inf
        if s <= w:
            v = (s - w) / (w - lo)
        else:
            v = (s - w) / (hi - w)
        return max(-1.0, min(1.0, v))

    def _shadow_arc_value(self, p: LimitPoint) -> float:
        """Arc-chart value of the arc point that a line point shadows."""
        shadow = TypeCode(p.code.prefix, Tail.ALL_ZEROS)
        if self.kind == CASE2:
            return p.x0
        return self.theta_brick(shadow).coord(p.x0)

    def _compress(self, ell: float) -> float:
        """(-inf, 1] -> (0, 1], increasing; slow decay keeps the folds apart."""
        return 1.0 / (1.0 + (1.0 - ell) / self.map.rho1)

    def _b_normalize(self, p: LimitPoint) -> float:
        """Case 3b: vertical position of an arc point between the two end arcs."""
        m = self.map
        fam = identify(p.code)
        d1 = m.landmarks.f_rho1
        if fam.kind == "Tk1":
            v = 2.0 * p.x0 / d1 - 1.0
        elif fam.kind == "Tk0":
            v = 2.0 * (p.x0 - m.rho) / (m.rho1 - m.rho) - 1.0
        else:
            v = 2.0 * p.x0 / m.rho1 - 1.0
        return max(-1.0, min(1.0, v))

    def model_coordinates(self, c: ExtendedCoord) -> tuple:
        m = self.map
        n = m.case.n
        if n == 0:
            return ((c.value - self.a) / (1.0 - self.a),)
        if n == 1:
            if c.sheet is not Sheet.LINE:
                return (0.0, self.arc_normalize(c.value))
            p = self.decode_line(c.value, depth=2)
            return (self._compress(c.value), self.arc_normalize(self._shadow_arc_value(p)))
        # n == 2
        if c.sheet is Sheet.ARC_MINUS:
            return (0.0, 2.0 * c.value / m.landmarks.f_rho1 - 1.0, 0.0)
        if c.sheet is Sheet.ARC_PLUS:
            return (1.0, 2.0 * (c.value - m.rho) / (m.rho1 - m.rho) - 1.0, 0.0)
        if c.sheet is Sheet.ARC_INF:
            p = self.decode_arc(c, depth=2)
            return (self._squash(c.value), self._b_normalize(p), 0.0)
        p = self.decode_line(c.value, depth=2)
        shadow = TypeCode(p.code.prefix, Tail.ALL_ZEROS)
        b = self.theta_brick(shadow)
        x0 = min(max(p.x0, b.brick.lo), b.brick.hi)
        t = b.coord(x0)
        q = LimitPoint(x0, shadow, (x0,))
        return (self._squash(t), self._b_normalize(q), self._compress(c.value))

    def _squash(self, t: float) -> float:
        """R -> (0, 1), increasing."""
        return 1.0 / (1.0 + 2.0 ** (-t / self.map.rho1))


@lru_cache(maxsize=64)
def embedding_for(m: UnimodalMap, table: int = DEFAULT_TABLE) -> Embedding:
    return Embedding(m, table)


# ---------------------------------------------------------- functional surface


def psi_case12(m: UnimodalMap, p: LimitPoint) -> float:
    if m.case.kind not in (CASE1, CASE2):
        raise CaseError(f"psi_case12 needs case 1 or 2, map is {m.case.kind}")
    return embedding_for(m).psi(p)


def psi_case3(m: UnimodalMap, p: LimitPoint) -> float:
    if not m.case.is_case3:
        raise CaseError(f"psi_case3 needs case 3, map is {m.case.kind}")
    return embedding_for(m).psi(p)


def psi(m: UnimodalMap, p: LimitPoint) -> float:
    return embedding_for(m).psi(p)


def theta(m: UnimodalMap, p: LimitPoint) -> ExtendedCoord:
    return embedding_for(m).theta_coord(p)


def encode(m: UnimodalMap, p: LimitPoint) -> ExtendedCoord:
    return embedding_for(m).encode(p)


def decode(m: UnimodalMap, c: ExtendedCoord, depth: int = DEFAULT_DEPTH) -> LimitPoint:
    return embedding_for(m).decode(c, depth)


def decode_line(m: UnimodalMap, y: float, depth: int = DEFAULT_DEPTH) -> LimitPoint:
    return embedding_for(m).decode_line(y, depth)


def embedded_shift(m: UnimodalMap, c: ExtendedCoord) -> ExtendedCoord:
    return embedding_for(m).embedded_shift(c)


def neighborhood_base(m: UnimodalMap, c: ExtendedCoord, N: int, eps: float, count: int = 8) -> NeighborhoodBase:
    return embedding_for(m).neighborhood_base(c, N, eps, count)


def model_coordinates(m: UnimodalMap, c: ExtendedCoord) -> tuple:
    return embedding_for(m).model_coordinates(c)
