"""The two-hyperbola unimodal family.

    f0(x) = (alpha x - alpha rho) / (gamma x + delta)   on [0, rho]
    f1(x) = (x - rho) / (1 - rho)                        on (rho, 1]

with 0 < rho < 1, delta > 0, gamma > -delta/rho and -delta/rho < alpha < 0.
This module validates parameters, locates the landmark points, classifies a
map into the four F_{2^n} cases and provides a brute-force period census
used to cross-check that classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import CaseError, DomainError, ImageError, ParameterError
from .moebius import (
    MoebiusTransform,
    compose,
    derivative_at,
    evaluate,
    fixed_points,
    invert,
    is_involution,
)

TIE_TOL = 1e-9
# tolerance for accepting values that sit on a brick or domain end
EDGE_TOL = 1e-12

CASE1, CASE2, CASE3A, CASE3B, OUTSIDE = "Case1", "Case2", "Case3a", "Case3b", "OutsideF2n"
_CASE_N = {CASE1: 0, CASE2: 1, CASE3A: 1, CASE3B: 2}


def _violations(rho, delta, gamma, alpha):
    out = []
    if not all(map(math.isfinite, (rho, delta, gamma, alpha))):
        return ["parameters must be finite"]
    if not 0.0 < rho < 1.0:
        out.append("0<ρ<1 violated")
    if not delta > 0.0:
        out.append("δ>0 violated")
    if out:
        # the remaining bounds involve δ/ρ and are meaningless here
        if not alpha < 0.0:
            out.append("α<0 violated")
        return out
    bound = -delta / rho
    if not gamma > bound:
        out.append("γ>−δ/ρ violated")
    if not alpha < 0.0:
        out.append("α<0 violated")
    if not alpha > bound:
        out.append("α>−δ/ρ violated")
    return out


@dataclass(frozen=True)
class UnimodalMap:
    rho: float
    delta: float
    gamma: float
    alpha: float
    f0: MoebiusTransform = field(init=False, repr=False, compare=False)
    f1: MoebiusTransform = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = [float(v) for v in (self.rho, self.delta, self.gamma, self.alpha)]
        bad = _violations(*vals)
        if bad:
            raise ParameterError(bad)
        rho, delta, gamma, alpha = vals
        for name, v in zip(("rho", "delta", "gamma", "alpha"), vals):
            object.__setattr__(self, name, v)
        # gamma x + delta is affine, so checking both ends of [0, rho] suffices
        if min(delta, gamma * rho + delta) <= 0.0:
            raise ParameterError(["pole of f0 on [0,ρ]"])
        object.__setattr__(self, "f0", MoebiusTransform(alpha, -alpha * rho, gamma, delta))
        object.__setattr__(self, "f1", MoebiusTransform(1.0, -rho, 0.0, 1.0 - rho))

    @property
    def rho1(self) -> float:
        return -self.alpha * self.rho / self.delta

    @property
    def params(self) -> tuple:
        return (self.rho, self.delta, self.gamma, self.alpha)

    @cached_property
    def landmarks(self) -> "Landmarks":
        return landmarks(self)

    @cached_property
    def case(self) -> "CaseLabel":
        return classify(self)

    def __call__(self, x):
        return apply(self, x)


def validate_params(rho, delta, gamma, alpha) -> UnimodalMap:
    return UnimodalMap(rho, delta, gamma, alpha)


# Reference instances, one per case.
REFERENCE = {
    "case1": (0.5, 2.0, 0.0, -1.0),
    "case2": (0.5, 1.0, 0.0, -1.0),
    "case3a": (0.3, 1.0, -2.0, -1.2),
    "case3b": (0.3, 1.0, -2.0, -1.3),
}


def reference(name: str) -> UnimodalMap:
    return UnimodalMap(*REFERENCE[name])


def apply(m: UnimodalMap, x):
    """Evaluate f at a scalar or array; x == rho uses the left branch."""
    if np.ndim(x) == 0:
        x = float(x)
        if not -EDGE_TOL <= x <= 1.0 + EDGE_TOL:
            raise DomainError(f"x = {x!r} outside [0,1]")
        x = min(max(x, 0.0), 1.0)
        if x <= m.rho:
            return max(evaluate(m.f0, x), 0.0)
        return min(evaluate(m.f1, x), 1.0)
    x = np.asarray(x, dtype=float)
    if np.any((x < -EDGE_TOL) | (x > 1.0 + EDGE_TOL)):
        raise DomainError("array has values outside [0,1]")
    x = np.clip(x, 0.0, 1.0)
    out = np.empty_like(x)
    left = x <= m.rho
    out[left] = evaluate(m.f0, x[left])
    out[~left] = evaluate(m.f1, x[~left])
    return np.clip(out, 0.0, 1.0)


def iterate(m: UnimodalMap, x, n: int):
    for _ in range(n):
        x = apply(m, x)
    return x


def branch_inverse(m: UnimodalMap, branch: int, y: float, tol: float = EDGE_TOL) -> float:
    """Preimage of y under branch 0 or 1.

    Branch 1 lives on (rho, 1]; its preimage of 0 is the limit endpoint rho,
    which is returned so junction threads can be expanded.
    """
    y = float(y)
    if branch == 0:
        if not -tol <= y <= m.rho1 + tol:
            raise ImageError(f"y = {y!r} outside f0 image [0, {m.rho1!r}]")
        y = min(max(y, 0.0), m.rho1)
        x = evaluate(invert(m.f0), y)
        return min(max(x, 0.0), m.rho)
    if branch == 1:
        if not -tol <= y <= 1.0 + tol:
            raise ImageError(f"y = {y!r} outside f1 image (0, 1]")
        y = min(max(y, 0.0), 1.0)
        x = m.rho + (1.0 - m.rho) * y
        return min(max(x, m.rho), 1.0)
    raise ValueError(f"branch must be 0 or 1, got {branch!r}")


@dataclass(frozen=True)
class Landmarks:
    rho1: float
    omega0: float
    omega0_multiplier: float
    f_rho1: float
    w1: Optional[float] = None
    w2: Optional[float] = None
    cycle_multiplier: Optional[float] = None


def landmarks(m: UnimodalMap) -> Landmarks:
    roots = [r for r in fixed_points(m.f0) if 0.0 <= r < m.rho]
    if len(roots) != 1:
        raise CaseError(f"expected one fixed point of f0 in [0,ρ), found {roots}")
    omega0 = roots[0]
    rho1 = m.rho1
    kw = {}
    if rho1 > m.rho:
        g = compose(m.f0, m.f1)
        cyc = [r for r in fixed_points(g) if m.rho - EDGE_TOL <= r <= rho1 + EDGE_TOL]
        if cyc:
            w2 = cyc[-1]
            kw = dict(w2=w2, w1=apply(m, w2), cycle_multiplier=derivative_at(g, w2))
    return Landmarks(
        rho1=rho1,
        omega0=omega0,
        omega0_multiplier=derivative_at(m.f0, omega0),
        f_rho1=apply(m, rho1),
        **kw,
    )


@dataclass(frozen=True)
class CaseLabel:
    kind: str
    n: Optional[int] = None
    diagnostic: str = ""

    @property
    def is_case3(self) -> bool:
        return self.kind in (CASE3A, CASE3B)

    def __str__(self):
        return self.kind if self.n is None else f"{self.kind} (n={self.n})"


def classify(m: UnimodalMap, tie_tol: float = TIE_TOL) -> CaseLabel:
    gap = m.rho - m.rho1
    if gap > tie_tol:
        return CaseLabel(CASE1, 0)
    if abs(gap) <= tie_tol:
        return CaseLabel(CASE2, 1)
    lm = m.landmarks
    if lm.cycle_multiplier is None:
        return CaseLabel(OUTSIDE, None, "no period-2 point in [ρ,ρ1]")
    lam = abs(lm.cycle_multiplier)
    if lam < 1.0 - tie_tol:
        return CaseLabel(CASE3A, 1)
    if is_involution(compose(m.f0, m.f1), tie_tol):
        return CaseLabel(CASE3B, 2)
    if lam <= 1.0 + tie_tol:
        return CaseLabel(OUTSIDE, None, f"neutral cycle |λ|={lam:.12g} without involution")
    return CaseLabel(OUTSIDE, None, f"repelling 2-cycle |λ|={lam:.6g}")


# ---------------------------------------------------------------- census


@dataclass(frozen=True)
class PeriodCensus:
    detected_periods: frozenset
    stabilization_n: Optional[int]
    periodic_intervals: tuple  # of ((lo, hi), period)
    orbit_periods: frozenset
    isolated_points: tuple  # of (x, period)

    @property
    def max_period(self) -> int:
        return max(self.detected_periods) if self.detected_periods else 0


def _least_period(m, x, periods, tol):
    y = x
    done = 0
    for p in periods:
        y = iterate(m, y, p - done)
        done = p
        if np.all(np.abs(y - x) <= tol):
            return p
    return None


def _iterate_with_derivative(m, x, p):
    d = 1.0
    for _ in range(p):
        d *= derivative_at(m.f0 if x <= m.rho else m.f1, x)
        x = apply(m, x)
    return x, d


def _polish(m, x, p, steps=60):
    """Newton on f^p(x) - x.  Returns (root, neutral); neutral means
    (f^p)' is 1 at x, where the candidate may sit in an interval of
    periodic points and is kept unchanged."""
    t = float(x)
    for _ in range(steps):
        y, d = _iterate_with_derivative(m, t, p)
        if abs(d - 1.0) < 1e-6:
            return t, True
        step = (y - t) / (d - 1.0)
        t = min(max(t + step, 0.0), 1.0)
        if abs(step) < 1e-15:
            break
    return t, False


def period_census(
    m: UnimodalMap,
    grid_size: int = 2048,
    p_max: int = 8,
    tol: float = 1e-6,
    burn_in: int = 500,
) -> PeriodCensus:
    """Brute-force census of periods 1, 2, 4, ..., p_max.

    Two passes: orbits of grid points after a burn-in (finds attracting
    cycles), and roots or flat runs of f^p(x) - x on the grid (finds
    repelling and neutral periodic points, which a burn-in never lands on).
    """
    if grid_size < 64:
        raise ValueError("grid_size must be at least 64")
    if p_max < 8 or p_max & (p_max - 1):
        raise ValueError("p_max must be a power of two >= 8")
    periods = [2**k for k in range(int(math.log2(p_max)) + 1)]
    grid = np.linspace(0.0, 1.0, grid_size)

    orbit_periods = set()
    x = iterate(m, grid.copy(), burn_in)
    y = x.copy()
    done = 0
    settled = np.zeros(grid_size, dtype=bool)
    for p in periods:
        y = iterate(m, y, p - done)
        done = p
        hit = (np.abs(y - x) <= tol) & ~settled
        settled |= hit
        if p == 1:
            orbit_periods.update([1] if hit.any() else [])
            continue
        # a slowly converging orbit can pass the tolerance test early; polish
        # one representative per cluster and re-measure its least period
        for c in sorted(set(np.round(x[hit], 6))):
            r, _ = _polish(m, c, p)
            lp = _least_period(m, r, [q for q in periods if q <= p], tol)
            if lp is not None:
                orbit_periods.add(lp)

    isolated = []
    intervals = []
    for p in periods:
        fp = lambda t, p=p: iterate(m, t, p)
        g = fp(grid) - grid
        flat = np.abs(g) <= tol
        i = 0
        while i < grid_size:
            if flat[i]:
                j = i
                while j + 1 < grid_size and flat[j + 1]:
                    j += 1
                if j > i:
                    intervals.append(((grid[i], grid[j]), p, grid[i : j + 1]))
                else:
                    isolated.append((grid[i], p))
                i = j + 1
            else:
                i += 1
        for k in np.nonzero((g[:-1] * g[1:] < 0) & ~flat[:-1] & ~flat[1:])[0]:
            r = brentq(lambda t: fp(t) - t, grid[k], grid[k + 1], xtol=1e-14)
            isolated.append((r, p))

    found = set()
    iso_out = []
    for r, p in isolated:
        r, _ = _polish(m, r, p)
        lp = _least_period(m, r, [q for q in periods if q <= p], tol)
        if lp is not None:
            found.add(lp)
            iso_out.append((float(r), lp))
    int_out = []
    for (lo, hi), p, pts in intervals:
        _, slope = _iterate_with_derivative(m, float(pts[len(pts) // 2]), p)
        if abs(slope - 1.0) >= 1e-6 and p > 1:
            # f^p - x is small here but not identically zero: a root, not an interval
            r, _ = _polish(m, pts[len(pts) // 2], p)
            lp = _least_period(m, r, [q for q in periods if q <= p], tol)
            if lp is not None:
                found.add(lp)
                iso_out.append((r, lp))
            continue
        lp = None
        for q in (q for q in periods if q <= p):
            if np.mean(np.abs(iterate(m, pts, q) - pts) <= tol) > 0.5:
                lp = q
                break
        if lp is not None:
            found.add(lp)
            int_out.append(((float(lo), float(hi)), lp))
    found |= orbit_periods

    # merge interval reports of the same least period that overlap
    int_out = _merge_intervals(int_out)
    iso_out = sorted(set((round(r, 9), p) for r, p in iso_out))

    top = max(found) if found else 1
    stab = int(math.log2(top)) if top < p_max else None
    return PeriodCensus(
        detected_periods=frozenset(found),
        stabilization_n=stab,
        periodic_intervals=tuple(int_out),
        orbit_periods=frozenset(orbit_periods),
        isolated_points=tuple(iso_out),
    )


def _merge_intervals(items):
    out = []
    for (lo, hi), p in sorted(items, key=lambda t: (t[1], t[0][0])):
        if out and out[-1][1] == p and lo <= out[-1][0][1]:
            (plo, phi), _ = out[-1]
            out[-1] = ((plo, max(phi, hi)), p)
        else:
            out.append(((lo, hi), p))
    return sorted(out, key=lambda t: (t[0][0], t[1]))


def census_agrees(label: CaseLabel, census: PeriodCensus) -> Optional[bool]:
    """Compare a case label with a census; None when the census did not stabilize."""
    if census.stabilization_n is None:
        return None if label.kind == OUTSIDE else False
    if label.kind == OUTSIDE:
        return False
    expected = {CASE1: 1, CASE2: 2, CASE3A: 2, CASE3B: 4}[label.kind]
    return census.max_period == expected


# ---------------------------------------------------------------- sequences


def _require_case3(m):
    if not m.rho < m.rho1:
        raise CaseError("requires ρ < ρ1 (case 3)")


def d_sequence(m: UnimodalMap, K: int) -> list[float]:
    """d_0 = rho1 and d_n = |f^n(rho) - f^n(rho1)|."""
    _require_case3(m)
    out = [m.rho1]
    a, b = m.rho, m.rho1
    for _ in range(K):
        a, b = apply(m, a), apply(m, b)
        out.append(abs(a - b))
    return out


@dataclass(frozen=True)
class TailEndpoint:
    value: float
    remainder: float
    terms: int


def tail_endpoint_a(m: UnimodalMap, K: int = 50) -> TailEndpoint:
    """Left end a of the case-1 line: a = -omega0 - 2 sum_n (f^{2n}(rho1) - f^{2n+1}(rho1)).

    Terms n = 0..K are summed; `remainder` bounds the rest geometrically
    using the ratio of consecutive terms, which tends to f0'(omega0)^2.
    Case 2 returns value -inf.
    """
    label = m.case
    if label.kind == CASE2:
        return TailEndpoint(-math.inf, 0.0, 0)
    if label.kind != CASE1:
        raise CaseError(f"tail endpoint a needs case 1, map is {label.kind}")
    lm = m.landmarks
    w = lm.omega0
    f0 = m.f0
    # In case 1 the orbit of rho1 stays in [0, rho1], so only f0 acts.  The
    # plain orbit stalls in a rounding cycle next to omega0; iterating the
    # deviation e = x - omega0 through f0(w + e) - w = (a - c w) e / (c (w + e) + d)
    # keeps every term accurate.
    slope = f0.a - f0.c * w
    e = m.rho1 - w
    terms = []
    for _ in range(K + 1):
        fe = slope * e / (f0.c * (w + e) + f0.d)
        terms.append(e - fe)
        e = slope * fe / (f0.c * (w + fe) + f0.d)
    q = lm.omega0_multiplier**2
    live = [abs(t) for t in terms if t != 0.0][-5:]
    for t0, t1 in zip(live, live[1:]):
        q = max(q, t1 / t0)
    last = abs(terms[-1])
    rem = 2.0 * last * q / (1.0 - q) if q < 1.0 else math.inf
    value = math.fsum([-lm.omega0] + [-2.0 * t for t in terms])
    return TailEndpoint(value, rem, K + 1)


@dataclass(frozen=True)
class Conjugator:
    """Homeomorphism h of [0,1] with h o f o h^{-1} in normal form.

    On [0, rho] h is a Moebius map fixing 0 and rho.  On (rho, 1] it is
    extended through h(x) = f1^{-k}(h(f1^k(x))), where k is the first
    iterate that lands in [0, rho]; this keeps h o f1 = f1 o h.
    `printed_h` is the piecewise form (Moebius on [0, rho], identity on
    (rho, 1]) that the construction starts from.
    """

    map: "UnimodalMap"
    left: MoebiusTransform
    c: float
    d: float

    def _extend(self, mob, x):
        m = self.map
        x = float(x)
        if x <= m.rho:
            return evaluate(mob, x)
        k = 0
        while x > m.rho and k < 4096:
            if x >= 1.0:
                return 1.0
            x = evaluate(m.f1, x)
            k += 1
        x = evaluate(mob, max(x, 0.0))
        for _ in range(k):
            x = m.rho + (1.0 - m.rho) * x
        return x

    def h(self, x):
        return np.vectorize(lambda t: self._extend(self.left, t), otypes=[float])(x)

    def h_inv(self, y):
        return np.vectorize(lambda t: self._extend(invert(self.left), t), otypes=[float])(y)

    def g(self, y):
        return self.h(apply(self.map, self.h_inv(y)))

    def printed_h(self, x):
        x = np.asarray(x, dtype=float)
        mob = invert(self.left)
        return np.where(x <= self.map.rho, evaluate(mob, np.minimum(x, self.map.rho)), x)


def conjugator(m: UnimodalMap) -> Conjugator:
    if m.case.kind != CASE2:
        raise CaseError("conjugator needs case 2 (ρ = ρ1)")
    rho = m.rho
    d = math.sqrt(1.0 - m.gamma * rho / m.alpha)
    c = (1.0 - d) / rho
    printed = MoebiusTransform(c * rho + d, 0.0, c, d)
    # the printed map conjugates f0 to rho - x in the opposite direction
    return Conjugator(map=m, left=invert(printed), c=c, d=d)


def normal_form(rho: float) -> Callable:
    def g(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= rho, rho - x, (x - rho) / (1.0 - rho))

    return g


# ---------------------------------------------------------------- presets


_KEYS = {"rho": "rho", "ρ": "rho", "delta": "delta", "δ": "delta",
         "gamma": "gamma", "γ": "gamma", "alpha": "alpha", "α": "alpha"}


def parse_preset(text: str) -> dict:
    """Parse key=value lines (rho, delta, gamma, alpha); '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key.lower() not in _KEYS and key not in _KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[_KEYS.get(key.lower(), _KEYS.get(key))] = float(val)
    missing = {"rho", "delta", "gamma", "alpha"} - out.keys()
    if missing:
        raise ValueError(f"missing keys: {', '.join(sorted(missing))}")
    return out


def load_preset(path) -> UnimodalMap:
    p = parse_preset(Path(path).read_text(encoding="utf-8"))
    return UnimodalMap(p["rho"], p["delta"], p["gamma"], p["alpha"])
