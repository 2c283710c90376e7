"""Real Moebius transformations x -> (ax + b) / (cx + d).

Both branches of the unimodal family are Moebius maps, so compositions,
inverses and fixed points all reduce to 2x2 matrix algebra.  Coefficients
are kept in a normalized scale where the largest one has magnitude 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllPointsFixed, PoleError, SingularTransformError

POLE_TOL = 1e-14
DET_TOL = 1e-14


def _normalize(a, b, c, d):
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if scale == 0.0:
        raise SingularTransformError("all coefficients vanish")
    return a / scale, b / scale, c / scale, d / scale


@dataclass(frozen=True)
class MoebiusTransform:
    """x -> (ax + b) / (cx + d), normalized so max |coefficient| == 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = _normalize(float(self.a), float(self.b), float(self.c), float(self.d))
        if abs(a * d - b * c) < DET_TOL:
            raise SingularTransformError(f"determinant {a * d - b * c:.3e} below {DET_TOL}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def pole(self):
        """Location of the pole, or None when c == 0."""
        return None if self.c == 0.0 else -self.d / self.c

    def __call__(self, x):
        return evaluate(self, x)


IDENTITY = MoebiusTransform(1.0, 0.0, 0.0, 1.0)


def compose(m1: MoebiusTransform, m2: MoebiusTransform) -> MoebiusTransform:
    """Return m1 o m2 (apply m2 first)."""
    a = m1.a * m2.a + m1.b * m2.c
    b = m1.a * m2.b + m1.b * m2.d
    c = m1.c * m2.a + m1.d * m2.c
    d = m1.c * m2.b + m1.d * m2.d
    try:
        return MoebiusTransform(a, b, c, d)
    except SingularTransformError as exc:
        raise SingularTransformError(f"degenerate composition: {exc}") from None


def evaluate(m: MoebiusTransform, x):
    """Evaluate at a scalar or an ndarray; raises PoleError near the pole."""
    den = m.c * x + m.d
    if np.ndim(den) == 0:
        if abs(den) < POLE_TOL:
            raise PoleError(m.pole())
        return (m.a * x + m.b) / den
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleError(m.pole())
    return (m.a * np.asarray(x) + m.b) / den


def invert(m: MoebiusTransform) -> MoebiusTransform:
    # adjugate; the determinant factor disappears under normalization
    return MoebiusTransform(m.d, -m.b, -m.c, m.a)


def derivative_at(m: MoebiusTransform, x):
    den = m.c * x + m.d
    if np.ndim(den) == 0 and abs(den) < POLE_TOL:
        raise PoleError(m.pole())
    return m.det / den**2


def fixed_points(m: MoebiusTransform) -> list[float]:
    """Real roots of c x^2 + (d - a) x - b = 0 in ascending order.

    Raises AllPointsFixed for the identity.
    """
    qa, qb, qc = m.c, m.d - m.a, -m.b
    if abs(qa) < 1e-15 and abs(qb) < 1e-15:
        if abs(qc) < 1e-15:
            raise AllPointsFixed()
        return []
    if abs(qa) < 1e-15:
        roots = [-qc / qb]
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            if disc > -1e-15:
                disc = 0.0
            else:
                return []
        # sign-aware form avoids cancellation in the smaller root
        q = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
        roots = [q / qa]
        if q != 0.0:
            roots.append(qc / q)
        else:
            roots.append(0.0)
    out = []
    for r in sorted(roots):
        if not math.isfinite(r):
            continue
        try:
            if abs(evaluate(m, r) - r) <= 1e-10:
                out.append(r)
        except PoleError:
            pass
    return sorted(set(out))


def is_involution(m: MoebiusTransform, tol: float = 1e-9) -> bool:
    """True when the normalized trace vanishes, i.e. m o m is the identity."""
    return abs(m.trace) <= tol


def affine(slope: float, offset: float) -> MoebiusTransform:
    return MoebiusTransform(slope, offset, 0.0, 1.0)
