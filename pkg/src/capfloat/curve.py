"""Strictly convex tables given by the Fourier series of their radius of curvature.

The boundary is parametrized by the tangent direction ``alpha``; with
``rho(alpha) = ds/dalpha`` one has ``x' = rho cos(alpha)`` and
``y' = rho sin(alpha)``, which integrate termwise in closed form.

Coefficient convention: ``rho(alpha) = c0 + sum_k a_k cos(k alpha) + b_k sin(k alpha)``.
For the complex form ``rho = sum c_k exp(i k alpha)`` this is
``c0 = c_0``, ``a_k = 2 Re c_k`` and ``b_k = -2 Im c_k``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .trigroots import HALF_PI, build_An, sin_eq_residual

TWO_PI = 2.0 * math.pi

CONVEXITY_GRID = 4096
CAUSTIC_TOL = 1e-9
RESIDUAL_GRID = 1024
ALL_ANGLES = "all angles"


class ConvexityError(ValueError):
    """The radius of curvature is not strictly positive."""


@dataclass(frozen=True)
class FourierCurve:
    c0: float
    harmonics: tuple[tuple[int, float, float], ...] = ()
    anchor: tuple[float, float] = (0.0, 0.0)
    convexity_grid: int = field(default=CONVEXITY_GRID, compare=False, repr=False)

    def __post_init__(self):
        c0 = float(self.c0)
        if not c0 > 0:
            raise ConvexityError(f"mean radius of curvature must be positive, got {self.c0!r}")
        harm = []
        for entry in self.harmonics:
            k, a, b = entry
            if isinstance(k, bool) or int(k) != k:
                raise TypeError(f"harmonic index must be an integer, got {k!r}")
            k = int(k)
            if k == 1:
                raise ValueError("a first harmonic is not allowed: the boundary would not close")
            if k < 2:
                raise ValueError(f"harmonic index must be >= 2, got {k}")
            harm.append((k, float(a), float(b)))
        harm.sort()
        ks = [h[0] for h in harm]
        if len(set(ks)) != len(ks):
            raise ValueError(f"duplicate harmonic indices: {ks}")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "harmonics", tuple(harm))
        object.__setattr__(self, "anchor", (float(self.anchor[0]), float(self.anchor[1])))
        m = min_radius(self)
        if not m > 0:
            raise ConvexityError(f"curve is not strictly convex: min rho = {m!r}")

    @property
    def active(self) -> tuple[tuple[int, float, float], ...]:
        """Harmonics with a nonzero coefficient pair."""
        return tuple(h for h in self.harmonics if h[1] != 0.0 or h[2] != 0.0)

    @property
    def is_circle(self) -> bool:
        return not self.active

    def amplitude(self, k: int) -> float:
        for kk, a, b in self.harmonics:
            if kk == k:
                return math.hypot(a, b)
        return 0.0


def _rho_array(curve: FourierCurve, alpha: np.ndarray) -> np.ndarray:
    out = np.full_like(alpha, curve.c0, dtype=float)
    for k, a, b in curve.harmonics:
        out += a * np.cos(k * alpha) + b * np.sin(k * alpha)
    return out


def min_radius(curve: FourierCurve) -> float:
    """A lower bound that is certified when positive, else a refined grid minimum."""
    bound = curve.c0 - sum(math.hypot(a, b) for _, a, b in curve.harmonics)
    if bound > 0:
        return bound
    n = curve.convexity_grid
    grid = np.linspace(0.0, TWO_PI, n, endpoint=False)
    vals = _rho_array(curve, grid)
    i = int(np.argmin(vals))
    h = TWO_PI / n
    res = minimize_scalar(
        lambda t: eval_radius(curve, t),
        bounds=(grid[i] - h, grid[i] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(min(vals[i], res.fun))


def eval_radius(curve: FourierCurve, alpha: float) -> float:
    r = curve.c0
    for k, a, b in curve.harmonics:
        r += a * math.cos(k * alpha) + b * math.sin(k * alpha)
    return r


def curvature(curve: FourierCurve, alpha: float) -> float:
    return 1.0 / eval_radius(curve, alpha)


def boundary_point(curve: FourierCurve, alpha: float) -> tuple[float, float]:
    """Closed-form antiderivative of (rho cos, rho sin) plus the anchor."""
    x = curve.anchor[0] + curve.c0 * math.sin(alpha)
    y = curve.anchor[1] - curve.c0 * math.cos(alpha)
    for k, a, b in curve.harmonics:
        m, p = k - 1, k + 1
        sm, cm = math.sin(m * alpha), math.cos(m * alpha)
        sp, cp = math.sin(p * alpha), math.cos(p * alpha)
        x += 0.5 * a * (sm / m + sp / p) - 0.5 * b * (cm / m + cp / p)
        y += 0.5 * a * (cm / m - cp / p) + 0.5 * b * (sm / m - sp / p)
    return x, y


def boundary_points(curve: FourierCurve, alpha) -> np.ndarray:
    """Vectorized boundary_point; returns an array of shape (len(alpha), 2)."""
    alpha = np.asarray(alpha, dtype=float)
    x = curve.anchor[0] + curve.c0 * np.sin(alpha)
    y = curve.anchor[1] - curve.c0 * np.cos(alpha)
    for k, a, b in curve.harmonics:
        m, p = k - 1, k + 1
        sm, cm = np.sin(m * alpha), np.cos(m * alpha)
        sp, cp = np.sin(p * alpha), np.cos(p * alpha)
        x = x + 0.5 * a * (sm / m + sp / p) - 0.5 * b * (cm / m + cp / p)
        y = y + 0.5 * a * (cm / m - cp / p) + 0.5 * b * (sm / m - sp / p)
    return np.stack([x, y], axis=-1)


def arc_length(curve: FourierCurve, alpha: float) -> float:
    """s(alpha) = integral of rho from 0 to alpha (not reduced mod the perimeter)."""
    s = curve.c0 * alpha
    for k, a, b in curve.harmonics:
        s += (a * math.sin(k * alpha) + b * (1.0 - math.cos(k * alpha))) / k
    return s


def alpha_at_arc_length(curve: FourierCurve, s: float) -> float:
    """Inverse of arc_length; s is strictly increasing in alpha since rho > 0."""
    t = s / curve.c0
    for _ in range(60):
        f = arc_length(curve, t) - s
        step = f / eval_radius(curve, t)
        t -= step
        if abs(step) <= 1e-16 * max(1.0, abs(t)):
            break
    return t


def make_omega_n_tau(
    n: int,
    tau: float,
    anchor: tuple[float, float] = (0.0, 0.0),
    allow_small_n: bool = False,
) -> FourierCurve:
    """The deformed disc rho = 1 + tau sin(n alpha)."""
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n <= 3 and not allow_small_n:
        raise ValueError(f"n must be > 3 (tan nx = n tan x has no roots in (0, pi/2) for n={n})")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    tau = float(tau)
    if tau >= 1.0:
        raise ConvexityError(f"tau = {tau} >= 1: convexity violated (min rho = 1 - tau <= 0)")
    if tau < 0.0:
        raise ValueError(f"tau must be in [0, 1), got {tau}")
    return FourierCurve(1.0, ((n, 0.0, tau),), anchor)


def perimeter(curve: FourierCurve) -> float:
    return TWO_PI * curve.c0


def width(curve: FourierCurve, alpha: float) -> float:
    """Distance between the points with opposite tangent directions alpha and alpha + pi."""
    x0, y0 = boundary_point(curve, alpha)
    x1, y1 = boundary_point(curve, alpha + math.pi)
    return math.hypot(x1 - x0, y1 - y0)


def is_constant_width(curve: FourierCurve, tol: float = 1e-10, grid: int = 1024) -> bool:
    exact = all(k % 2 == 1 for k, _, _ in curve.active)
    alpha = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    dev = np.max(np.abs(_rho_array(curve, alpha) + _rho_array(curve, alpha + math.pi) - 2 * curve.c0))
    if exact != (dev <= tol):
        warnings.warn(
            f"Fourier parity test ({exact}) disagrees with grid test (deviation {dev:.3g}, tol {tol:g})",
            RuntimeWarning,
            stacklevel=2,
        )
    return exact


def area(curve: FourierCurve) -> float:
    """Enclosed area from 1/2 * integral (x y' - y x') dalpha.

    The integrand is a trigonometric polynomial, so the periodic trapezoid
    rule is exact once the node count exceeds its degree.
    """
    kmax = max((k for k, _, _ in curve.harmonics), default=0)
    n = 4 * (kmax + 2) + 64
    alpha = np.linspace(0.0, TWO_PI, n, endpoint=False)
    pts = boundary_points(curve, alpha)
    rho = _rho_array(curve, alpha)
    integrand = pts[:, 0] * rho * np.sin(alpha) - pts[:, 1] * rho * np.cos(alpha)
    return float(0.5 * integrand.mean() * TWO_PI)


def kernel_hat(n: int, delta: float) -> float:
    """Fourier multiplier of convolution with sin(x) on [-delta, delta] (up to a factor i)."""
    return sin_eq_residual(n, delta)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta < math.pi:
        raise ValueError(f"delta must lie in (0, pi), got {delta}")
    return delta


@dataclass(frozen=True)
class CausticReport:
    delta: float
    exists: bool
    residual: float
    offenders: tuple[int, ...]
    matched_n: int | None
    circular: bool = False


def has_constant_caustic(curve: FourierCurve, delta: float, tol: float = CAUSTIC_TOL) -> CausticReport:
    """Decide whether the constant-angle invariant circle theta = delta exists.

    Each active harmonic k must be annihilated by the kernel; the test is on
    |kernel_hat(k, delta)| scaled by the harmonic amplitude.
    """
    delta = _check_delta(delta)
    active = curve.active
    if not active:
        return CausticReport(delta, True, 0.0, (), None, circular=True)
    offenders = []
    matched = []
    residual = 0.0
    for k, a, b in active:
        v = abs(kernel_hat(k, delta)) * math.hypot(a, b)
        residual = max(residual, v)
        if v > tol:
            offenders.append(k)
        else:
            matched.append(k)
    matched_n = matched[0] if matched else None
    exists = not offenders and matched_n is not None
    return CausticReport(delta, exists, residual, tuple(offenders), matched_n)


def caustic_residual(curve: FourierCurve, delta: float, grid: int = RESIDUAL_GRID) -> float:
    """max over alpha of |integral_{alpha-delta}^{alpha+delta} rho(xi) sin(alpha - xi) dxi|.

    Per harmonic the integral is exactly kernel_hat(k) * (a_k sin k alpha - b_k cos k alpha);
    the constant term integrates to zero.
    """
    delta = _check_delta(delta)
    kmax = max((k for k, _, _ in curve.harmonics), default=0)
    alpha = np.linspace(0.0, TWO_PI, max(grid, 8 * kmax), endpoint=False)
    total = np.zeros_like(alpha)
    for k, a, b in curve.harmonics:
        total += kernel_hat(k, delta) * (a * np.sin(k * alpha) - b * np.cos(k * alpha))
    return float(np.max(np.abs(total)))


@dataclass(frozen=True)
class FloatingReport:
    """Contact angles gamma = pi - delta at which the body floats in neutral equilibrium."""

    n_max: int
    all_angles: bool
    contact_angles: tuple[float, ...] = ()
    caustic_angles: tuple[float, ...] = ()

    @property
    def angles(self):
        return ALL_ANGLES if self.all_angles else list(self.contact_angles)


def floating_report(curve: FourierCurve, n_max: int = 50, tol: float = CAUSTIC_TOL) -> FloatingReport:
    if curve.is_circle:
        return FloatingReport(n_max, True)
    found: list[float] = []
    for n in range(2, n_max + 1):
        for delta in build_An(n):
            if any(abs(delta - d) <= 1e-12 for d in found):
                continue
            if has_constant_caustic(curve, delta, tol).exists:
                found.append(delta)
    found.sort()
    gammas = sorted(math.pi - d for d in found)
    return FloatingReport(n_max, False, tuple(gammas), tuple(found))


# -- serialization ---------------------------------------------------------


def to_dict(curve: FourierCurve) -> dict:
    return {
        "c0": curve.c0,
        "anchor": list(curve.anchor),
        "harmonics": [[k, a, b] for k, a, b in curve.harmonics],
    }


def from_dict(d: dict) -> FourierCurve:
    harmonics = [(int(k), float(a), float(b)) for k, a, b in d.get("harmonics", [])]
    return FourierCurve(float(d["c0"]), tuple(harmonics), tuple(d.get("anchor", (0.0, 0.0))))


def dumps(curve: FourierCurve) -> str:
    # json writes floats with repr(), the shortest exactly round-tripping form
    return json.dumps(to_dict(curve), sort_keys=True)


def loads(text: str) -> FourierCurve:
    return from_dict(json.loads(text))


def parse_curve(source: str) -> FourierCurve:
    """Read a curve from a shorthand such as 'omega:4,0.5', or from JSON given inline or as a path."""
    s = source.strip()
    if s.startswith("omega:"):
        n_text, tau_text = s[len("omega:"):].split(",")
        return make_omega_n_tau(int(n_text), float(tau_text))
    if s == "circle":
        return FourierCurve(1.0)
    if s.startswith("{"):
        return loads(s)
    with open(s, encoding="utf-8") as fh:
        return loads(fh.read())


def curve_from_terms(c0: float, terms: Iterable[Sequence[float]], anchor=(0.0, 0.0)) -> FourierCurve:
    return FourierCurve(c0, tuple((int(k), a, b) for k, a, b in terms), anchor)


__all__ = [
    "ALL_ANGLES",
    "CausticReport",
    "ConvexityError",
    "FloatingReport",
    "FourierCurve",
    "HALF_PI",
    "alpha_at_arc_length",
    "arc_length",
    "area",
    "boundary_point",
    "boundary_points",
    "caustic_residual",
    "curvature",
    "eval_radius",
    "floating_report",
    "has_constant_caustic",
    "is_constant_width",
    "kernel_hat",
    "make_omega_n_tau",
    "parse_curve",
    "perimeter",
    "width",
]
