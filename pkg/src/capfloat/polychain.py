"""Exact integer polynomials P_n, Q_n, R_n, S_n and the reduced S_n.

tan(n x) = P_n(z) / Q_n(z) with z = tan x. R_n = P_n - n z Q_n has the
positive roots tan(xi), xi in B_n, and the Mobius map x = -(z - i)/(z + i)
carries them onto the roots of S_n in the upper half of the unit circle.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import trigroots

_I_POWERS = (1, 1j, -1, -1j)


def _ipow(k: int) -> complex:
    return _I_POWERS[k % 4]


@dataclass(frozen=True)
class IntPolynomial:
    """Integer coefficients in ascending degree; the zero polynomial is ()."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        for v in self.coeffs:
            if isinstance(v, float) and v != int(v):
                raise TypeError(f"non-integer coefficient {v!r}")
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, deg: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * deg + (c,))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by z**k."""
        return IntPolynomial((0,) * k + self.coeffs) if self.coeffs else self

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive_part(self) -> "IntPolynomial":
        g = self.content()
        if g == 0:
            return self
        if self.lc < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def exact_div_scalar(self, d: int) -> "IntPolynomial":
        out = []
        for c in self.coeffs:
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(f"{c} not divisible by {d}")
            out.append(q)
        return IntPolynomial(tuple(out))

    def divmod_exact(self, other: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Division over Z; raises ArithmeticError if a quotient coefficient is not an integer."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return IntPolynomial(), self
        quo = [0] * (dq + 1)
        lc = other.lc
        for i in range(dq, -1, -1):
            c = rem[i + other.degree]
            if c == 0:
                continue
            q, r = divmod(c, lc)
            if r:
                raise ArithmeticError("quotient has non-integer coefficients")
            quo[i] = q
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= q * b
        return IntPolynomial(tuple(quo)), IntPolynomial(tuple(rem))

    def pseudo_rem(self, other: "IntPolynomial") -> "IntPolynomial":
        """lc(other)**(deg self - deg other + 1) * self mod other, computed in Z[x]."""
        if not other:
            raise ZeroDivisionError("pseudo-remainder by zero polynomial")
        db, lc = other.degree, other.lc
        r = self
        e = self.degree - db + 1
        if e <= 0:
            return self
        while r and r.degree >= db:
            r = r * lc - (other * r.lc).shift(r.degree - db)
            e -= 1
        return r * (lc**e)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def reversed_coeffs(self, deg: int | None = None) -> tuple[int, ...]:
        d = self.degree if deg is None else deg
        return tuple(self[d - i] for i in range(d + 1))

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.coeffs) if self.coeffs else "0"


Z = IntPolynomial((0, 1))
ONE = IntPolynomial((1,))


def _check(n: int, lowest: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < lowest:
        raise ValueError(f"n must be >= {lowest}, got {n}")
    return n


_PQ_LOCK = threading.Lock()
_PQ: list[tuple[IntPolynomial, IntPolynomial]] = [(Z, ONE)]


def pq_pair(n: int) -> tuple[IntPolynomial, IntPolynomial]:
    """P_n, Q_n from P_{n+1} = P_n + z Q_n, Q_{n+1} = Q_n - z P_n, P_1 = z, Q_1 = 1."""
    n = _check(n, 1)
    if len(_PQ) < n:
        with _PQ_LOCK:
            while len(_PQ) < n:
                p, q = _PQ[-1]
                _PQ.append((p + q.shift(1), q - p.shift(1)))
    return _PQ[n - 1]


def pq_closed_eval(n: int, z: complex) -> tuple[complex, complex]:
    """(P_n(z), Q_n(z)) from the binomial closed forms in (z - i)^n and (z + i)^n."""
    n = _check(n, 1)
    zm, zp = (z - 1j) ** n, (z + 1j) ** n
    p = -0.5 * (_ipow(n + 1) * zm + _ipow(3 * (n + 1)) * zp)
    q = 0.5 * (_ipow(n) * zm + _ipow(3 * n) * zp)
    return p, q


def r_poly(n: int) -> IntPolynomial:
    """R_n = P_n - n z Q_n; its positive roots are tan(xi) for xi in B_n."""
    n = _check(n, 2)
    p, q = pq_pair(n)
    return p - (q * n).shift(1)


def r_closed_eval(n: int, z: complex) -> complex:
    """-(1/2) i^n [(nz + i)(z - i)^n + (-1)^n (nz - i)(z + i)^n]."""
    n = _check(n, 2)
    sign = 1 if n % 2 == 0 else -1
    return -0.5 * _ipow(n) * ((n * z + 1j) * (z - 1j) ** n + sign * (n * z - 1j) * (z + 1j) ** n)


@lru_cache(maxsize=1024)
def s_poly(n: int) -> IntPolynomial:
    """S_n(x) = (n-1)(x^{n+1} - 1) - (n+1)(x^n - x)."""
    n = _check(n, 2)
    c = [0] * (n + 2)
    c[n + 1] += n - 1
    c[0] -= n - 1
    c[n] -= n + 1
    c[1] += n + 1
    return IntPolynomial(tuple(c))


X_MINUS_ONE_CUBED = IntPolynomial((-1, 3, -3, 1))
X_PLUS_ONE = IntPolynomial((1, 1))


@lru_cache(maxsize=1024)
def reduced_s_poly(n: int) -> IntPolynomial:
    """S_n divided by (x-1)^3, and also by (x+1) when n is odd; the division must be exact."""
    n = _check(n, 2)
    div = X_MINUS_ONE_CUBED * X_PLUS_ONE if n % 2 else X_MINUS_ONE_CUBED
    q, r = s_poly(n).divmod_exact(div)
    if r:
        raise ArithmeticError(f"S_{n} is not divisible by {div}: remainder {r}")
    return q


def mobius_root_map(z: float) -> complex:
    """x = -(z - i)/(z + i); sends real z to the unit circle, 0 to 1 and z = inf to -1."""
    if math.isinf(z):
        return -1 + 0j
    return -(z - 1j) / (z + 1j)


@dataclass(frozen=True)
class CircleRootSet:
    n: int
    phis: tuple[float, ...]
    residuals: tuple[float, ...]
    minus_one_root: bool

    @property
    def roots(self) -> list[complex]:
        return [cmath.exp(1j * p) for p in self.phis]


CIRCLE_RESIDUAL_MAX = 1e-9


def s_roots_on_circle(n: int) -> CircleRootSet:
    """Complex roots of S_n as e^{i phi}.

    On |x| = 1, S_n(e^{i phi}) = -2i e^{i(n+1)phi/2} g(phi/2) with
    g(x) = (n+1) sin((n-1)x) - (n-1) sin((n+1)x), so phi = 2 xi and
    2 pi - 2 xi for xi in B_n. x = -1 (phi = pi, n odd) is reported separately.
    """
    n = _check(n, 2)
    s = s_poly(n)
    phis = []
    for r in trigroots.solve_Bn(n):
        phis.extend((2.0 * r.value, 2.0 * math.pi - 2.0 * r.value))
    phis.sort()
    residuals = tuple(abs(s.eval_complex(cmath.exp(1j * p))) for p in phis)
    bad = [(p, v) for p, v in zip(phis, residuals) if v > CIRCLE_RESIDUAL_MAX]
    if bad:
        raise ArithmeticError(f"S_{n} residual too large at {bad[:3]}")
    return CircleRootSet(n, tuple(phis), residuals, n % 2 == 1)


def positive_real_roots(p: IntPolynomial) -> list[float]:
    """Positive real roots of an integer polynomial (numpy companion matrix)."""
    import numpy as np

    if p.degree < 1:
        return []
    # strip the root at zero exactly before going to floating point
    c = list(p.coeffs)
    while c and c[0] == 0:
        c.pop(0)
    if len(c) < 2:
        return []
    scale = max(abs(v) for v in c)
    roots = np.roots([v / scale for v in reversed(c)])
    out = [float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)) and r.real > 0]
    return sorted(out)


FAMILIES = ("P", "Q", "R", "S", "Sred")


def family_poly(family: str, n: int) -> IntPolynomial:
    if family == "P":
        return pq_pair(n)[0]
    if family == "Q":
        return pq_pair(n)[1]
    if family == "R":
        return r_poly(n)
    if family == "S":
        return s_poly(n)
    if family == "Sred":
        return reduced_s_poly(n)
    raise ValueError(f"unknown polynomial family {family!r}; expected one of {FAMILIES}")


def export_line(family: str, n: int, poly: IntPolynomial | None = None) -> str:
    """'S 4: -3 5 0 0 -5 3' -- ascending decimal coefficients."""
    poly = family_poly(family, n) if poly is None else poly
    return f"{family} {n}: {poly}"


def parse_export_line(line: str) -> tuple[str, int, IntPolynomial]:
    head, _, body = line.partition(":")
    family, n_text = head.split()
    coeffs = tuple(int(t) for t in body.split())
    if coeffs == (0,):
        coeffs = ()
    return family, int(n_text), IntPolynomial(coeffs)


def export_lines(items: Iterable[tuple[str, int]]) -> str:
    return "".join(export_line(f, n) + "\n" for f, n in items)
