"""Finite-range certificates for the root-disjointness and irrationality conjectures.

Nothing here asserts a conjecture globally: every verdict carries the
range it was computed on.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import trigroots
from .curve import CAUSTIC_TOL, FourierCurve, has_constant_caustic
from .polychain import ONE, IntPolynomial, reduced_s_poly

DEFAULT_EXACT_NMAX = 40
DEFAULT_NUMERIC_NMAX = 100
CF_Q_LIMIT = 10**7


def _normalize(p: IntPolynomial) -> IntPolynomial:
    return -p if p.lc < 0 else p


def subresultant_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """gcd in Z[x] by the subresultant remainder sequence; positive leading coefficient."""
    if b.degree > a.degree:
        a, b = b, a
    if not b:
        return _normalize(a)
    d = math.gcd(a.content(), b.content())
    a, b = a.primitive_part(), b.primitive_part()
    g = h = 1
    while True:
        delta = a.degree - b.degree
        r = a.pseudo_rem(b)
        if not r:
            break
        if r.degree == 0:
            b = ONE
            break
        a = b
        b = r.exact_div_scalar(g * h**delta)
        g = a.lc
        if delta:
            h = (g**delta) // (h ** (delta - 1))
    return _normalize(b.primitive_part() * d)


@dataclass(frozen=True)
class GcdCertificate:
    m: int
    n: int
    gcd: IntPolynomial
    verdict: str
    shared_roots: tuple[complex, ...] = ()

    @property
    def disjoint(self) -> bool:
        return self.verdict == "disjoint"

    def ledger_line(self) -> str:
        return f"{self.m} {self.n} {self.verdict} {self.gcd.degree}"

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "verdict": self.verdict,
            "gcd_degree": self.gcd.degree,
            "gcd": list(self.gcd.coeffs),
            "shared_roots": [[z.real, z.imag] for z in self.shared_roots],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GcdCertificate":
        return cls(
            d["m"],
            d["n"],
            IntPolynomial(tuple(d["gcd"])),
            d["verdict"],
            tuple(complex(a, b) for a, b in d.get("shared_roots", [])),
        )


def pair_disjointness(m: int, n: int) -> GcdCertificate:
    """Exact gcd of the reduced S_m and S_n; a constant gcd proves disjoint complex roots."""
    m, n = sorted((int(m), int(n)))
    if m < 4 or m == n:
        raise ValueError(f"need 4 <= m < n, got ({m}, {n})")
    a, b = reduced_s_poly(m), reduced_s_poly(n)
    g = subresultant_gcd(a, b)
    for p in (a, b):
        _, rem = p.divmod_exact(g)
        if rem:
            raise ArithmeticError(f"gcd {g} does not divide {p}")
    if g.degree == 0:
        return GcdCertificate(m, n, g, "disjoint")
    roots = tuple(complex(z) for z in np.roots([float(c) for c in reversed(g.coeffs)]))
    return GcdCertificate(m, n, g, "shared", roots)


def scan_disjointness(n_max: int = DEFAULT_EXACT_NMAX) -> list[GcdCertificate]:
    """Certificates for every pair 4 <= m < n <= n_max, in (m, n) order."""
    return [pair_disjointness(m, n) for m in range(4, n_max + 1) for n in range(m + 1, n_max + 1)]


def summarize(certs: Iterable[GcdCertificate]) -> dict:
    certs = list(certs)
    shared = [(c.m, c.n) for c in certs if not c.disjoint]
    return {"pairs": len(certs), "disjoint": len(certs) - len(shared), "shared": shared}


def read_ledger(path: str) -> dict[tuple[int, int], str]:
    out = {}
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 4:
                    out[(int(parts[0]), int(parts[1]))] = line.rstrip("\n")
    return out


def append_ledger(path: str, certs: Iterable[GcdCertificate]) -> int:
    """Append 'm n verdict gcd-degree' lines for pairs not already recorded; returns lines added."""
    seen = read_ledger(path)
    new = [c for c in sorted(certs, key=lambda c: (c.m, c.n)) if (c.m, c.n) not in seen]
    if new or not os.path.exists(path):
        with open(path, "a", encoding="utf-8") as fh:
            for c in new:
                fh.write(c.ledger_line() + "\n")
    return len(new)


def dump_certificates(certs: Iterable[GcdCertificate]) -> str:
    return json.dumps([c.to_dict() for c in certs], sort_keys=True)


# -- families of pairs handled by explicit tan-addition arguments ---------

FAMILIES = {
    "n+1": lambda n: n + 1,
    "n+2": lambda n: n + 2,
    "2n": lambda n: 2 * n,
    "3n": lambda n: 3 * n,
    "2n+1": lambda n: 2 * n + 1,
    "2n-1": lambda n: 2 * n - 1,
    "3n+1": lambda n: 3 * n + 1,
    "3n-1": lambda n: 3 * n - 1,
}


def family_partner(n: int, family: str) -> int:
    try:
        return FAMILIES[family](n)
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}") from None


def b_set_distance(m: int, n: int) -> float:
    bm = [r.value for r in trigroots.solve_Bn(m)]
    bn = [r.value for r in trigroots.solve_Bn(n)]
    if not bm or not bn:
        return math.inf
    return min(abs(x - y) for x in bm for y in bn)


def small_k_numeric_check(n: int, family: str) -> float:
    """Minimum distance between B_n and B_partner; +inf if either set is empty."""
    if n < 4:
        raise ValueError(f"n must be >= 4, got {n}")
    partner = family_partner(n, family)
    if partner < 4:
        return math.inf
    return b_set_distance(n, partner)


# -- special angles pi/4 and pi/3 ----------------------------------------

# sin(m * delta) = p + q * unit, tabulated by m mod period
_SPECIAL = {
    "pi/4": (math.pi / 4, 8, ((0, 0), (0, 1), (1, 0), (0, 1), (0, 0), (0, -1), (-1, 0), (0, -1))),
    "pi/3": (math.pi / 3, 6, ((0, 0), (0, 1), (0, 1), (0, 0), (0, -1), (0, -1))),
}


def _resolve_special(delta) -> str:
    if isinstance(delta, str):
        key = delta.replace(" ", "").lower()
        if key in _SPECIAL:
            return key
        if key in ("pi/2",):
            raise ValueError("pi/2 solves the equation for every odd n; it is not a special excluded angle")
        raise ValueError(f"unsupported special angle {delta!r}; use pi/4 or pi/3")
    for key, (val, _, _) in _SPECIAL.items():
        if abs(float(delta) - val) <= 1e-15:
            return key
    if abs(float(delta) - math.pi / 2) <= 1e-15:
        raise ValueError("pi/2 solves the equation for every odd n; it is not a special excluded angle")
    raise ValueError(f"unsupported special angle {delta!r}; use pi/4 or pi/3")


def _class_excluded(r: int, period: int, table) -> bool:
    """True iff no integer n >= 2 with n = r mod period solves (n+1) sin((n-1)d) = (n-1) sin((n+1)d).

    In the class the numerators are fixed elements of Q + Q*unit, so each
    component gives n (c1 - c2) + (c1 + c2) = 0.
    """
    v1 = table[(r - 1) % period]
    v2 = table[(r + 1) % period]
    forced: Fraction | None = None
    for c1, c2 in zip(v1, v2):
        if c1 == c2:
            if c1 + c2 != 0:
                return True
            continue
        cand = Fraction(-(c1 + c2), c1 - c2)
        if forced is not None and cand != forced:
            return True
        forced = cand
    if forced is None:
        return False
    if forced.denominator != 1:
        return True
    n = forced.numerator
    return not (n >= 2 and n % period == r % period)


@dataclass(frozen=True)
class SpecialAngleReport:
    delta_name: str
    delta: float
    n_max: int
    min_residual: float
    argmin_n: int
    min_scaled_residual: float
    classes: dict = field(default_factory=dict)

    @property
    def exact_ok(self) -> bool:
        return all(self.classes.values())


def special_angle_exclusion(delta, n_max: int = 500) -> SpecialAngleReport:
    """Show that delta in {pi/4, pi/3} is in no A_n: exact per-residue-class argument plus a scan.

    min_residual is min |sin((n-1)d)/(n-1) - sin((n+1)d)/(n+1)| over 2 <= n <= n_max;
    min_scaled_residual uses (n+1) sin((n-1)d) - (n-1) sin((n+1)d), which does not
    decay with n.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    key = _resolve_special(delta)
    value, period, table = _SPECIAL[key]
    classes = {r: _class_excluded(r, period, table) for r in range(period)}
    best, arg, best_scaled = math.inf, 2, math.inf
    for n in range(2, n_max + 1):
        v = abs(trigroots.sin_eq_residual(n, value))
        if v < best:
            best, arg = v, n
        best_scaled = min(best_scaled, v * (n * n - 1))
    return SpecialAngleReport(key, value, n_max, best, arg, best_scaled, classes)


# -- continued fractions ---------------------------------------------------


@dataclass(frozen=True)
class ConvergentReport:
    value: float
    convergents: tuple[tuple[int, int], ...]
    min_quality: float
    truncated: bool
    exact_rational: tuple[int, int] | None = None


def convergent_report(value: float, depth: int = 10, q_limit: int = CF_Q_LIMIT) -> ConvergentReport:
    """Continued-fraction convergents of a double, stopped at depth or at q > q_limit.

    The expansion is of the exact binary value; beyond q_limit it would only
    describe rounding noise, so the report is flagged truncated there.
    """
    x = Fraction(value)
    p0, q0, p1, q1 = 0, 1, 1, 0
    convs: list[tuple[int, int]] = []
    truncated = False
    exact = None
    while len(convs) < depth:
        a = math.floor(x)
        p, q = a * p1 + p0, a * q1 + q0
        if q > q_limit:
            truncated = True
            break
        convs.append((p, q))
        p0, q0, p1, q1 = p1, q1, p, q
        frac = x - a
        if frac == 0:
            exact = (p, q)
            break
        x = 1 / frac
    quals = [q * q * abs(value - p / q) for p, q in convs if (p, q) != exact]
    min_quality = min(quals) if quals else 0.0
    if exact is not None:
        min_quality = 0.0
    return ConvergentReport(value, tuple(convs), min_quality, truncated, exact)


def irrationality_evidence(n: int, k: int = 1, depth: int = 10) -> ConvergentReport:
    """Convergents of xi_k / pi for the k-th root of tan(nx) = n tan(x)."""
    roots = trigroots.solve_Bn(n)
    if not 1 <= k <= len(roots):
        raise ValueError(f"B_{n} has {len(roots)} roots; no root with index {k}")
    return convergent_report(roots[k - 1].value / math.pi, depth)


# -- conditional classification ---------------------------------------------


@dataclass(frozen=True)
class Classification:
    kind: str
    n: int | None = None
    tau: float | None = None
    deltas: tuple[float, ...] = ()
    constant_width: bool = False
    certified: bool = False
    n_max: int = DEFAULT_EXACT_NMAX
    certificates: tuple[GcdCertificate, ...] = ()

    @property
    def label(self) -> str:
        return f"conditional on disjointness certificates up to n_max={self.n_max}"


def conditional_classification(
    curve: FourierCurve, n_max: int = DEFAULT_EXACT_NMAX, tol: float = CAUSTIC_TOL
) -> Classification:
    """circle | constant-width | omega (single harmonic n > 3) | none.

    Two active harmonics m, n share a caustic angle other than pi/2 only if
    B_m and B_n meet; when both indices are within n_max the exact gcd
    certificate settles that, and the verdict is marked certified.
    """
    active = curve.active
    if not active:
        return Classification("circle", certified=True, n_max=n_max)
    ks = [k for k, _, _ in active]
    all_odd = all(k % 2 for k in ks)
    if len(ks) == 1:
        k, a, b = active[0]
        tau = math.hypot(a, b) / curve.c0
        if k > 3:
            deltas = tuple(d for d in trigroots.build_An(k) if has_constant_caustic(curve, d, tol).exists)
            return Classification("omega", k, tau, deltas, all_odd, True, n_max)
        if k == 3:
            return Classification("constant-width", k, tau, (math.pi / 2,), True, True, n_max)
        return Classification("none", k, tau, (), False, True, n_max)
    big = [k for k in ks if k >= 4]
    certs = tuple(pair_disjointness(m, n) for i, m in enumerate(big) for n in big[i + 1:] if n <= n_max)
    certified = all(k <= n_max for k in big) and all(c.disjoint for c in certs)
    # direct check on the smallest index: a hit off pi/2 would contradict the certificates
    shared = tuple(
        d
        for d in trigroots.build_An(min(ks))
        if d != trigroots.HALF_PI and has_constant_caustic(curve, d, tol).exists
    )
    if shared:
        return Classification("shared-caustic", None, None, shared, all_odd, certified, n_max, certs)
    if all_odd:
        return Classification("constant-width", None, None, (math.pi / 2,), True, certified, n_max, certs)
    return Classification("none", None, None, (), False, certified, n_max, certs)
