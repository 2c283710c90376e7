"""Binary type sequences of backward orbits.

A type is an infinite 0/1 word recording which branch inverse produced each
step of a backward orbit.  Every type that occurs for this family is
eventually constant or eventually alternating, so a TypeCode stores a finite
prefix plus one of four periodic tails.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import InadmissibleCode
from .family import CASE1, CASE2, CASE3A, CASE3B, CaseLabel


class Tail(enum.Enum):
    ALL_ZEROS = "0^∞"
    ALL_ONES = "1^∞"
    ALT10 = "(10)^∞"
    ALT01 = "(01)^∞"

    def at(self, k: int) -> int:
        if self is Tail.ALL_ZEROS:
            return 0
        if self is Tail.ALL_ONES:
            return 1
        first = 1 if self is Tail.ALT10 else 0
        return first ^ (k & 1)

    @property
    def period(self) -> int:
        return 2 if self in (Tail.ALT10, Tail.ALT01) else 1

    def shifted(self) -> "Tail":
        """The tail after dropping its first symbol."""
        return {Tail.ALT10: Tail.ALT01, Tail.ALT01: Tail.ALT10}.get(self, self)


_ASCII_TAILS = {
    "0^inf": Tail.ALL_ZEROS,
    "1^inf": Tail.ALL_ONES,
    "(10)^inf": Tail.ALT10,
    "(01)^inf": Tail.ALT01,
}


def _canonical(prefix: str, tail: Tail) -> tuple[str, Tail]:
    while prefix:
        last = prefix[-1]
        if tail is Tail.ALL_ZEROS and last == "0":
            prefix = prefix[:-1]
        elif tail is Tail.ALL_ONES and last == "1":
            prefix = prefix[:-1]
        elif tail is Tail.ALT10 and last == "0":
            prefix, tail = prefix[:-1], Tail.ALT01
        elif tail is Tail.ALT01 and last == "1":
            prefix, tail = prefix[:-1], Tail.ALT10
        else:
            break
    return prefix, tail


@dataclass(frozen=True)
class TypeCode:
    """Canonical (prefix, tail) pair; construction canonicalizes."""

    prefix: str
    tail: Tail

    def __post_init__(self):
        if set(self.prefix) - {"0", "1"}:
            raise ValueError(f"prefix must be binary, got {self.prefix!r}")
        prefix, tail = _canonical(self.prefix, Tail(self.tail))
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    def at(self, n: int) -> int:
        if n < len(self.prefix):
            return int(self.prefix[n])
        return self.tail.at(n - len(self.prefix))

    def word(self, length: int) -> str:
        return "".join(str(self.at(k)) for k in range(length))

    def prepend(self, bit: int) -> "TypeCode":
        return TypeCode(str(int(bit)) + self.prefix, self.tail)

    def drop_first(self) -> "TypeCode":
        if self.prefix:
            return TypeCode(self.prefix[1:], self.tail)
        return TypeCode("", self.tail.shifted())

    def ones_from(self, n: int) -> bool:
        """True when at(m) == 1 for every m >= n."""
        return self.tail is Tail.ALL_ONES and "0" not in self.prefix[n:]

    def __str__(self):
        return format_code(self)


def canonicalize(prefix: str, tail: Tail) -> TypeCode:
    return TypeCode(prefix, tail)


def at(code: TypeCode, n: int) -> int:
    return code.at(n)


def format_code(code: TypeCode) -> str:
    return f"{code.prefix}.{code.tail.value}"


def parse_code(text: str) -> TypeCode:
    """Parse notation like '1010.0^∞' or '1010.0^inf'."""
    text = text.strip()
    if "." not in text:
        raise ValueError(f"code {text!r} needs a '.' between prefix and tail")
    prefix, tail = text.split(".", 1)
    tail = tail.strip()
    for t in Tail:
        if tail == t.value:
            return TypeCode(prefix, t)
    if tail in _ASCII_TAILS:
        return TypeCode(prefix, _ASCII_TAILS[tail])
    raise ValueError(f"unknown tail {tail!r}")


# ---------------------------------------------------------------- families


def t_n(n: int) -> TypeCode:
    """T_n = 0^n 1^∞."""
    return TypeCode("0" * n, Tail.ALL_ONES)


def t_inf() -> TypeCode:
    """T_∞ = 0^∞."""
    return TypeCode("", Tail.ALL_ZEROS)


def t_nk(i: int, n: int, k: int) -> TypeCode:
    """T^{(1)}_{n,k} = (10)^k 0^{n-2k} 1^∞ and T^{(0)}_{n,k} = (01)^k 0^{n-2k} 1^∞."""
    if not 1 <= k or 2 * k > n or (i == 0 and 2 * k == n):
        # (01)^k 1^∞ has no trailing zero block, so it is not in the family
        raise ValueError(f"need 1 <= k <= n/2 (k < n/2 for i=0), got n={n}, k={k}")
    pair = "10" if i == 1 else "01"
    return TypeCode(pair * k + "0" * (n - 2 * k), Tail.ALL_ONES)


def t_k(i: int, k: int) -> TypeCode:
    """T^1_k = (10)^k 0^∞ and T^0_k = (01)^k 0^∞."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return TypeCode(("10" if i == 1 else "01") * k, Tail.ALL_ZEROS)


def t_alt(i: int) -> TypeCode:
    """T^1_∞ = (10)^∞ and T^0_∞ = (01)^∞."""
    return TypeCode("", Tail.ALT10 if i == 1 else Tail.ALT01)


@dataclass(frozen=True)
class Family:
    """Which named family a code belongs to.

    kind is one of 'T' (n), 'T1'/'T0' (n, k), 'Tinf', 'Tk1'/'Tk0' (k),
    'Alt10', 'Alt01' or 'other'.
    """

    kind: str
    n: Optional[int] = None
    k: Optional[int] = None


def identify(code: TypeCode) -> Family:
    p, tail = code.prefix, code.tail
    if tail is Tail.ALL_ONES:
        if set(p) <= {"0"}:
            return Family("T", n=len(p))
        lead = "10" if p[0] == "1" else "01"
        k = 0
        while p[2 * k : 2 * k + 2] == lead:
            k += 1
        rest = p[2 * k :]
        if k >= 1 and set(rest) <= {"0"} and rest:
            return Family("T1" if lead == "10" else "T0", n=len(p), k=k)
        if k >= 1 and lead == "10" and not rest:
            return Family("T1", n=len(p), k=k)
        return Family("other")
    if tail is Tail.ALL_ZEROS:
        if not p:
            return Family("Tinf")
        # canonical T^1_k = (10)^{k-1}1 and T^0_k = (01)^k
        seq = p + "0"
        if p[0] == "1" and len(seq) % 2 == 0 and seq == "10" * (len(seq) // 2):
            return Family("Tk1", k=len(seq) // 2)
        if p[0] == "0" and len(p) % 2 == 0 and p == "01" * (len(p) // 2):
            return Family("Tk0", k=len(p) // 2)
        return Family("other")
    if not p:
        return Family("Alt10" if tail is Tail.ALT10 else "Alt01")
    return Family("other")


# ---------------------------------------------------------------- admissibility


def _check_len(code: TypeCode) -> int:
    # positions past this index repeat the tail pattern, so checking up to it is exhaustive
    return len(code.prefix) + 4


def is_admissible(case: CaseLabel, code: TypeCode) -> bool:
    kind = case.kind if isinstance(case, CaseLabel) else case
    if kind in (CASE1, CASE2):
        fam = identify(code)
        return fam.kind in ("T", "Tinf")
    if kind in (CASE3A, CASE3B):
        for n in range(_check_len(code)):
            if code.at(n) == 1 and code.at(n + 1) == 1 and not code.ones_from(n):
                return False
            if (
                code.at(n) == 0
                and code.at(n + 1) == 0
                and code.at(n + 2) == 1
                and not code.ones_from(n + 2)
            ):
                return False
        return True
    raise InadmissibleCode(f"no admissible types defined for {kind}")


def _cluster(n: int) -> Iterator[TypeCode]:
    yield t_n(2 * n)
    for k in range(1, n + 1):
        yield t_nk(1, 2 * n, k)
    for k in range(n, 0, -1):
        yield t_nk(1, 2 * n + 1, k)
    yield t_n(2 * n + 1)
    for k in range(1, n + 1):
        yield t_nk(0, 2 * n + 1, k)
    for k in range(n, 0, -1):
        yield t_nk(0, 2 * n + 2, k)


def iter_types(case: CaseLabel) -> Iterator[TypeCode]:
    """The bricks of the line part in gluing order (unbounded)."""
    kind = case.kind if isinstance(case, CaseLabel) else case
    if kind in (CASE1, CASE2):
        for n in itertools.count():
            yield t_n(n)
    elif kind in (CASE3A, CASE3B):
        yield t_n(0)
        yield t_n(1)
        for n in itertools.count(1):
            yield from _cluster(n)
    else:
        raise InadmissibleCode(f"no admissible types defined for {kind}")


def enumerate_types(case: CaseLabel, bound: int) -> list[TypeCode]:
    """First `bound` bricks of the line part (A_0, A_1, ...)."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return list(itertools.islice(iter_types(case), bound))


def cluster_of(code: TypeCode) -> int:
    """Cluster number of a case-3 line code (0 for T_0 and T_1)."""
    fam = identify(code)
    if fam.kind == "T":
        return 0 if fam.n <= 1 else fam.n // 2
    if fam.kind == "T1":
        return fam.n // 2
    if fam.kind == "T0":
        return (fam.n - 1) // 2
    raise InadmissibleCode(f"{code} is not a line brick")


def brick_index(case: CaseLabel, code: TypeCode) -> int:
    """Position n of the code in the A_n ordering."""
    kind = case.kind if isinstance(case, CaseLabel) else case
    fam = identify(code)
    if kind in (CASE1, CASE2):
        if fam.kind != "T":
            raise InadmissibleCode(f"{code} is not a T_n code")
        return fam.n
    c = cluster_of(code)
    start = 0 if c == 0 else 2 * c * c
    size = 2 if c == 0 else 4 * c + 2
    for offset, other in enumerate(itertools.islice(iter_types(kind), start, start + size)):
        if other == code:
            return start + offset
    raise InadmissibleCode(f"{code} is not in the brick ordering")


def connected_in(m, t: TypeCode, t2: TypeCode, depth: int = 64):
    """Junction point gluing two bricks, or None.

    The codes must differ in exactly one index n.  The junction lives in the
    brick carrying the 0 there: its thread passes through 0 at step n.
    """
    from .limit_space import decode_point  # deferred, limit_space imports this module

    if t.tail != t2.tail and not (
        {t.tail, t2.tail} <= {Tail.ALT10, Tail.ALT01}
    ):
        return None
    span = max(len(t.prefix), len(t2.prefix)) + 4
    diffs = [k for k in range(span) if t.at(k) != t2.at(k)]
    if len(diffs) != 1:
        return None
    n = diffs[0]
    zero = t if t.at(n) == 0 else t2
    x = 0.0
    xs = [x]
    for _ in range(n):
        x = m(x)
        xs.append(x)
    # xs[k] = f^k(0); the thread reads them backwards
    for k in range(n):
        x_next = xs[n - k - 1]
        if zero.at(k) == 0 and not x_next <= m.rho:
            return None
        if zero.at(k) == 1 and not x_next >= m.rho:
            return None
    try:
        return decode_point(m, xs[n], zero, depth)
    except Exception:
        return None
