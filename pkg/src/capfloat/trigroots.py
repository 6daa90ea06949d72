"""Roots of tan(nx) = n tan(x) on (0, pi/2) and the angle sets A_n.

Every root is isolated inside its own branch interval
``(k*pi/n, (2k+1)*pi/(2n))`` and refined on the entire function

    g(x) = (n+1) sin((n-1)x) - (n-1) sin((n+1)x)

which vanishes exactly where sin((n-1)x)/(n-1) = sin((n+1)x)/(n+1).
The tan form has poles next to the brackets and is only used as a
consistency check.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

HALF_PI = 0.5 * math.pi
N_MAX = 2**20

BISECT_WIDTH = 1e-14
POLISH_STEPS = 5


def _check_n(n: int, lowest: int = 2) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < lowest:
        raise ValueError(f"n must be >= {lowest}, got {n}")
    if n > N_MAX:
        raise ValueError(f"n > 2**20 needs extended precision argument reduction (got {n})")
    return n


def _sin_multiple(m: int, delta: float) -> float:
    # sin(m*pi/2) is known exactly; float products like 3*(pi/2) are not.
    if delta == HALF_PI:
        return (0.0, 1.0, 0.0, -1.0)[m % 4]
    return math.sin(m * delta)


def sin_eq_residual(n: int, delta: float) -> float:
    """sin((n-1)d)/(n-1) - sin((n+1)d)/(n+1); zero iff d is in A_n."""
    n = _check_n(n)
    return _sin_multiple(n - 1, delta) / (n - 1) - _sin_multiple(n + 1, delta) / (n + 1)


def branch_count(n: int) -> int:
    """Number of roots of tan(nx) = n tan(x) in (0, pi/2)."""
    n = _check_n(n)
    return n // 2 - 1 if n % 2 == 0 else (n - 1) // 2 - 1


def bracket(n: int, k: int) -> tuple[float, float]:
    """Branch interval (2k pi/2n, (2k+1) pi/2n) holding the k-th root."""
    return (2 * k) * math.pi / (2 * n), (2 * k + 1) * math.pi / (2 * n)


def _g(n: int, x: float) -> float:
    return (n + 1) * math.sin((n - 1) * x) - (n - 1) * math.sin((n + 1) * x)


def _dg(n: int, x: float) -> float:
    return 2.0 * (n * n - 1) * math.sin(n * x) * math.sin(x)


@dataclass(frozen=True)
class BracketedRoot:
    n: int
    k: int
    lo: float
    hi: float
    value: float
    residual: float

    def tan_residual(self) -> float:
        """|tan(n x) - n tan(x)| at the root (ill-conditioned near poles)."""
        return abs(math.tan(self.n * self.value) - self.n * math.tan(self.value))


@dataclass(frozen=True)
class AngleSet:
    n: int
    members: tuple[float, ...]
    includes_half_pi: bool

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _refine(n: int, k: int) -> BracketedRoot:
    lo, hi = bracket(n, k)
    a, b = lo, hi
    ga, gb = _g(n, a), _g(n, b)
    if ga == 0.0 or gb == 0.0 or (ga > 0) == (gb > 0):
        raise ArithmeticError(
            f"no sign change of g on bracket k={k} for n={n}: g(lo)={ga!r}, g(hi)={gb!r}"
        )
    while b - a > BISECT_WIDTH:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        gm = _g(n, mid)
        if gm == 0.0:
            a = b = mid
            break
        if (gm > 0) == (ga > 0):
            a, ga = mid, gm
        else:
            b, gb = mid, gm
    x = 0.5 * (a + b)
    best, best_abs = x, abs(_g(n, x))
    for _ in range(POLISH_STEPS):
        d = _dg(n, x)
        if d == 0.0:
            break
        x_new = x - _g(n, x) / d
        if not lo < x_new < hi:
            break
        x = x_new
        val = abs(_g(n, x))
        if val < best_abs:
            best, best_abs = x, val
        if val == 0.0:
            break
    return BracketedRoot(n, k, lo, hi, best, abs(sin_eq_residual(n, best)))


@lru_cache(maxsize=4096)
def _roots(n: int) -> tuple[BracketedRoot, ...]:
    return tuple(_refine(n, k) for k in range(1, branch_count(n) + 1))


def solve_Bn(n: int) -> list[BracketedRoot]:
    """All roots of tan(nx) = n tan(x) in (0, pi/2), one per branch bracket."""
    n = _check_n(n)
    return list(_roots(n))


def build_An(n: int) -> AngleSet:
    """A_n = B_n, its reflection pi - B_n, and pi/2 when n is odd."""
    n = _check_n(n)
    b = [r.value for r in _roots(n)]
    members = b + [math.pi - x for x in b]
    odd = n % 2 == 1
    if odd:
        members.append(HALF_PI)
    return AngleSet(n, tuple(sorted(members)), odd)


def density_gap(n: int) -> float:
    """Largest gap between consecutive points of A_n with 0 and pi adjoined."""
    pts = [0.0, *build_An(n).members, math.pi]
    return max(b - a for a, b in zip(pts, pts[1:]))


def in_B(delta: float, n_max: int, tol: float = 1e-12) -> list[int]:
    """The n <= n_max for which delta lies in B_n (within tol)."""
    return [
        n
        for n in range(4, n_max + 1)
        if any(abs(r.value - delta) <= tol for r in _roots(n))
    ]


ROW_FIELDS = ("n", "k", "lo", "hi", "value", "residual")


def roots_table(ns) -> list[BracketedRoot]:
    return [r for n in ns for r in solve_Bn(n)]


def to_delimited(roots, delimiter: str = ",") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(ROW_FIELDS)
    for r in roots:
        w.writerow([r.n, r.k, repr(r.lo), repr(r.hi), repr(r.value), repr(r.residual)])
    return buf.getvalue()


def to_json(roots) -> str:
    return json.dumps([asdict(r) for r in roots], sort_keys=True)


def from_json(text: str) -> list[BracketedRoot]:
    return [BracketedRoot(**row) for row in json.loads(text)]
