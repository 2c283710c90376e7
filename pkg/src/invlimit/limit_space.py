"""Points of the inverse limit as (x0, type) pairs.

A backward orbit (x0, x1, x2, ...) with f(x_{k+1}) = x_k is determined by its
head x0 and its type, so points are stored as that pair together with a
finite expansion of the thread.  The set of orbits of one type (a brick) is
an interval under the projection x0; `brick_interval` computes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .codes import Tail, TypeCode, format_code, is_admissible
from .errors import DepthExhausted, ImageError, InadmissibleCode
from .family import (
    CASE1,
    CASE2,
    CASE3A,
    CASE3B,
    EDGE_TOL,
    UnimodalMap,
    apply,
    branch_inverse,
)
from .moebius import evaluate

DEFAULT_DEPTH = 64


@dataclass(frozen=True)
class BrickInterval:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool
    converged: bool = True

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def is_empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        """Membership honoring the closure flags; tol > 0 accepts the closure."""
        if tol > 0.0:
            return self.lo - tol <= x <= self.hi + tol
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo!r}, {self.hi!r}{right}"


def _intersect(a: BrickInterval, b: BrickInterval) -> BrickInterval:
    if a.lo > b.lo:
        lo, lo_c = a.lo, a.lo_closed
    elif b.lo > a.lo:
        lo, lo_c = b.lo, b.lo_closed
    else:
        lo, lo_c = a.lo, a.lo_closed and b.lo_closed
    if a.hi < b.hi:
        hi, hi_c = a.hi, a.hi_closed
    elif b.hi < a.hi:
        hi, hi_c = b.hi, b.hi_closed
    else:
        hi, hi_c = a.hi, a.hi_closed and b.hi_closed
    return BrickInterval(lo, hi, lo_c, hi_c, a.converged and b.converged)


def branch_domain(m: UnimodalMap, bit: int) -> BrickInterval:
    if bit == 0:
        return BrickInterval(0.0, m.rho, True, True)
    return BrickInterval(m.rho, 1.0, False, True)


def step_image(m: UnimodalMap, bit: int, j: BrickInterval) -> BrickInterval:
    """f_bit(D_bit ∩ J) with closure flags carried through."""
    j = _intersect(j, branch_domain(m, bit))
    if j.is_empty():
        return j
    if bit == 0:
        # f0 is decreasing
        out = BrickInterval(
            max(evaluate(m.f0, j.hi), 0.0), evaluate(m.f0, j.lo), j.hi_closed, j.lo_closed, j.converged
        )
    else:
        out = BrickInterval(evaluate(m.f1, j.lo), min(evaluate(m.f1, j.hi), 1.0), j.lo_closed, j.hi_closed, j.converged)
    if out.is_empty():
        # the image of a nonempty set is nonempty; an inversion is rounding
        # in a brick narrower than one ulp, kept as a closed point
        mid = 0.5 * (out.lo + out.hi)
        out = BrickInterval(mid, mid, True, True, out.converged)
    return out


def tail_set(m: UnimodalMap, tail: Tail) -> BrickInterval:
    """Set of heads x of backward orbits whose whole type is `tail`.

    These are the limits of the nested intervals for the periodic tails,
    taken from the landmarks.  In case 3b the alternating tails are closed
    intervals so the period-4 orbit through 0 and rho belongs to them.
    """
    kind = m.case.kind
    lm = m.landmarks
    if tail is Tail.ALL_ONES:
        return BrickInterval(0.0, 1.0, False, True)
    if tail is Tail.ALL_ZEROS:
        if kind == CASE1:
            return BrickInterval(lm.omega0, lm.omega0, True, True)
        if kind == CASE2:
            return BrickInterval(0.0, m.rho, True, True)
        if kind in (CASE3A, CASE3B):
            return BrickInterval(0.0, m.rho1, True, True)
    if tail in (Tail.ALT10, Tail.ALT01):
        if kind == CASE3A:
            w = lm.w1 if tail is Tail.ALT10 else lm.w2
            return BrickInterval(w, w, True, True)
        if kind == CASE3B:
            if tail is Tail.ALT10:
                return BrickInterval(0.0, lm.f_rho1, True, True)
            return BrickInterval(m.rho, m.rho1, True, True)
        raise InadmissibleCode(f"alternating tails are empty in {kind}")
    raise InadmissibleCode(f"no bricks defined for {kind}")


def brick_interval(m: UnimodalMap, code: TypeCode, depth: int = DEFAULT_DEPTH) -> BrickInterval:
    """Projection of the brick of `code`: the tail set pushed through the prefix.

    `depth` is accepted for interface symmetry with `nested_interval`; the
    tail part is already the limit of the nested intervals.
    """
    j = tail_set(m, code.tail)
    for k in range(len(code.prefix) - 1, -1, -1):
        j = step_image(m, int(code.prefix[k]), j)
        if j.is_empty():
            raise InadmissibleCode(f"{format_code(code)} has an empty brick (prefix step {k})")
    return j


def nested_interval(m: UnimodalMap, code: TypeCode, depth: int = DEFAULT_DEPTH) -> BrickInterval:
    """Plain nested-interval computation of the brick, truncated at `depth`.

    I_m is f_{T(0)} o ... o f_{T(m-1)} applied to [0,1] with each step
    restricted to its branch domain.  `converged` reports whether the last
    two widths differ by less than 1e-12.
    """
    prev = None
    cur = None
    for mm in (depth - 1, depth):
        j = BrickInterval(0.0, 1.0, True, True)
        for k in range(mm - 1, -1, -1):
            j = step_image(m, code.at(k), j)
            if j.is_empty():
                raise InadmissibleCode(f"{format_code(code)} has an empty brick at depth {mm}")
        prev, cur = cur, j
    conv = prev is not None and abs(prev.width - cur.width) < 1e-12
    return BrickInterval(cur.lo, cur.hi, cur.lo_closed, cur.hi_closed, conv)


# ---------------------------------------------------------------- points


@dataclass(frozen=True)
class LimitPoint:
    x0: float
    code: TypeCode
    thread: tuple

    @property
    def depth(self) -> int:
        return len(self.thread) - 1

    def __str__(self):
        return f"({self.x0!r}, {format_code(self.code)})"


def _substituted(m: UnimodalMap, tail: Tail, k: int):
    """Exact thread value at tail position k when the tail set is a point."""
    kind = m.case.kind
    lm = m.landmarks
    if tail is Tail.ALL_ZEROS and kind == CASE1:
        return lm.omega0
    if tail in (Tail.ALT10, Tail.ALT01) and kind == CASE3A:
        first_is_one = tail.at(k) == 1
        # a head followed by branch 1 is w1 (f1 maps w2 to w1)
        return lm.w1 if first_is_one else lm.w2
    return None


def _next(m: UnimodalMap, code: TypeCode, k: int, xk: float, tol: float) -> float:
    """x_{k+1} from x_k following bit k of the code."""
    np_ = len(code.prefix)
    if k + 1 >= np_:
        sub = _substituted(m, code.tail, k + 1 - np_)
        if sub is not None:
            return sub
    try:
        return branch_inverse(m, code.at(k), xk, tol)
    except ImageError as exc:
        raise ImageError(str(exc), step=k) from None


def decode_point(
    m: UnimodalMap, x0: float, code: TypeCode, depth: int = DEFAULT_DEPTH, tol: float = EDGE_TOL
) -> LimitPoint:
    """Expand the backward orbit of type `code` with head x0.

    Heads within `tol` of a brick end are accepted (the closure), which is
    how junction points between glued bricks are reached.
    """
    brick = brick_interval(m, code)
    x0 = float(x0)
    if not brick.contains(x0, tol):
        raise ImageError(f"x0 = {x0!r} outside brick {brick} of {format_code(code)}", step=0)
    x0 = min(max(x0, brick.lo), brick.hi)
    if not code.prefix:
        sub = _substituted(m, code.tail, 0)
        if sub is not None:
            x0 = sub
    thread = [x0]
    for k in range(depth):
        thread.append(_next(m, code, k, thread[-1], tol))
    return LimitPoint(x0, code, tuple(thread))


def factor(p: LimitPoint) -> float:
    return p.x0


def shift(m: UnimodalMap, p: LimitPoint) -> LimitPoint:
    """(x0, x1, ...) -> (f(x0), x0, x1, ...); the deepest entry is dropped."""
    x0 = p.x0
    bit = 0 if x0 <= m.rho else 1
    code = p.code.prepend(bit)
    if bit == 0 and m.case.is_case3 and abs(x0 - m.rho) <= EDGE_TOL:
        # rho is also the closure end of branch 1; take it when branch 0
        # would produce an impossible type (case-3b boundary orbits)
        if not is_admissible(m.case, code) and is_admissible(m.case, p.code.prepend(1)):
            code = p.code.prepend(1)
    fx = apply(m, x0)
    return LimitPoint(fx, code, (fx,) + p.thread[:-1])


def unshift(m: UnimodalMap, p: LimitPoint) -> LimitPoint:
    """Drop the head; the thread is extended by one step so depth is kept."""
    if p.depth < 1:
        raise DepthExhausted("cannot unshift a point expanded to depth 0")
    nxt = _next(m, p.code, p.depth, p.thread[-1], EDGE_TOL)
    return LimitPoint(p.thread[1], p.code.drop_first(), p.thread[1:] + (nxt,))


def compatibility_error(m: UnimodalMap, p: LimitPoint) -> float:
    """max_k |f(x_{k+1}) - x_k| over the expanded thread."""
    t = p.thread
    return max((abs(apply(m, t[k + 1]) - t[k]) for k in range(len(t) - 1)), default=0.0)


def point_row(p: LimitPoint) -> list:
    """CSV row: x0, code text, depth, thread values."""
    return [repr(p.x0), format_code(p.code), str(p.depth)] + [repr(x) for x in p.thread]


def same_point(p: LimitPoint, q: LimitPoint, tol: float = 1e-12) -> bool:
    k = min(len(p.thread), len(q.thread))
    return all(math.isclose(a, b, abs_tol=tol) for a, b in zip(p.thread[:k], q.thread[:k]))
