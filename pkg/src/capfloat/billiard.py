"""Birkhoff billiard map on a FourierCurve in (alpha, theta) coordinates.

``alpha`` is the tangent direction at the base point and ``theta`` the angle
between the outgoing ray and the positively oriented boundary.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .curve import (
    FourierCurve,
    arc_length,
    boundary_point,
    eval_radius,
    has_constant_caustic,
)

TWO_PI = 2.0 * math.pi
TANGENTIAL_EPS = 1e-12
DRIFT_WARN = 1e-6


class TangentialShot(ValueError):
    """theta too close to 0 or pi: the ray does not cross the table."""


@dataclass(frozen=True)
class PhasePoint:
    alpha: float
    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi:
            raise ValueError(f"theta must lie in (0, pi), got {self.theta}")
        a = math.fmod(self.alpha, TWO_PI)
        if a < 0:
            a += TWO_PI
        if a >= TWO_PI:
            a = 0.0
        object.__setattr__(self, "alpha", a)


@dataclass(frozen=True)
class OrbitSummary:
    start: PhasePoint
    steps: int
    rotation_estimate: float
    max_theta_drift: float


def _chord_angle(curve: FourierCurve, alpha: float, p0, t: float) -> float:
    """Direction of the chord P(alpha)->P(t), measured from the tangent at alpha, in (0, pi)."""
    x, y = boundary_point(curve, t)
    dx, dy = x - p0[0], y - p0[1]
    c, s = math.cos(alpha), math.sin(alpha)
    return math.atan2(-dx * s + dy * c, dx * c + dy * s)


def _land(curve: FourierCurve, alpha: float, theta: float) -> float:
    """Unwrapped alpha_1 in (alpha, alpha + 2 pi) hit by the ray of angle theta."""
    if theta <= TANGENTIAL_EPS or theta >= math.pi - TANGENTIAL_EPS:
        raise TangentialShot(f"tangential shot: theta = {theta!r}")
    p0 = boundary_point(curve, alpha)
    lo, hi = alpha, alpha + TWO_PI

    def h(t):
        # the chord angle increases from 0 to pi along the boundary
        if t <= lo:
            return -theta
        if t >= hi:
            return math.pi - theta
        return _chord_angle(curve, alpha, p0, t) - theta

    t = brentq(h, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    best, best_abs = t, abs(h(t))
    for _ in range(3):
        if best_abs == 0.0:
            break
        x, y = boundary_point(curve, t)
        dx, dy = x - p0[0], y - p0[1]
        r = eval_radius(curve, t)
        dpsi = r * (dx * math.sin(t) - dy * math.cos(t)) / (dx * dx + dy * dy)
        if dpsi <= 0:
            break
        t_new = t - h(t) / dpsi
        if not lo < t_new < hi:
            break
        t = t_new
        v = abs(h(t))
        if v < best_abs:
            best, best_abs = t, v
    return best


def _step(curve: FourierCurve, alpha: float, theta: float) -> tuple[float, float]:
    alpha1 = _land(curve, alpha, theta)
    x0, y0 = boundary_point(curve, alpha)
    x1, y1 = boundary_point(curve, alpha1)
    chord = math.atan2(y1 - y0, x1 - x0)
    # reflection: outgoing angle at alpha1 equals alpha1 minus the chord direction
    theta1 = math.fmod(alpha1 - chord, TWO_PI)
    if theta1 < 0:
        theta1 += TWO_PI
    if theta1 > math.pi + 1.0:
        theta1 -= TWO_PI
    return alpha1, theta1


def billiard_step(curve: FourierCurve, p: PhasePoint) -> PhasePoint:
    alpha1, theta1 = _step(curve, p.alpha, p.theta)
    return PhasePoint(alpha1, theta1)


def chord_residual(curve: FourierCurve, p: PhasePoint) -> float:
    """|chord direction - (alpha + theta)| at the solved landing point."""
    alpha1 = _land(curve, p.alpha, p.theta)
    return abs(_chord_angle(curve, p.alpha, boundary_point(curve, p.alpha), alpha1) - p.theta)


def billiard_jacobian(curve: FourierCurve, p: PhasePoint) -> np.ndarray:
    """d(s1, theta1)/d(s, theta) from the classical closed-form partials.

    Rows are (s1, theta1), columns (s, theta).
    """
    alpha1, theta1 = _step(curve, p.alpha, p.theta)
    x0, y0 = boundary_point(curve, p.alpha)
    x1, y1 = boundary_point(curve, alpha1)
    l = math.hypot(x1 - x0, y1 - y0)
    k0 = 1.0 / eval_radius(curve, p.alpha)
    k1 = 1.0 / eval_radius(curve, alpha1)
    s0, s1 = math.sin(p.theta), math.sin(theta1)
    return np.array(
        [
            [(k0 * l - s0) / s1, l / s1],
            [(k0 * k1 * l - k0 * s1 - k1 * s0) / s1, (k1 * l - s1) / s1],
        ]
    )


def _reduce(alpha: float) -> tuple[int, float]:
    turns = math.floor(alpha / TWO_PI)
    r = alpha - turns * TWO_PI
    if r >= TWO_PI:
        turns, r = turns + 1, r - TWO_PI
    elif r < 0:
        turns, r = turns - 1, r + TWO_PI
    return turns, r


def _walk(curve: FourierCurve, start: PhasePoint, steps: int):
    # alpha kept in [0, 2 pi) with an integer turn count so precision does not decay
    turns, alpha, theta = 0, start.alpha, start.theta
    yield 0, turns, alpha, theta
    for i in range(1, steps + 1):
        alpha1, theta = _step(curve, alpha, theta)
        dt, alpha = _reduce(alpha1)
        turns += dt
        yield i, turns, alpha, theta


def orbit(curve: FourierCurve, start: PhasePoint, steps: int):
    """Yield (step, alpha cumulative, theta, x, y) for step = 0..steps."""
    for i, turns, alpha, theta in _walk(curve, start, steps):
        x, y = boundary_point(curve, alpha)
        yield i, turns * TWO_PI + alpha, theta, x, y


def iterate_on_caustic(
    curve: FourierCurve,
    delta: float,
    steps: int,
    start_alpha: float = 0.0,
    tol: float = 1e-9,
) -> OrbitSummary:
    """Follow the orbit starting on theta = delta and estimate its rotation number.

    theta is re-read from the geometry at every bounce, never reset to delta,
    so max_theta_drift measures the accumulated numerical error.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    report = has_constant_caustic(curve, delta, tol)
    if not report.exists:
        raise ValueError(f"no constant-angle caustic at delta={delta!r}: offenders {list(report.offenders)}")
    start = PhasePoint(start_alpha, delta)
    drift = 0.0
    turns, alpha = 0, start.alpha
    for _, turns, alpha, theta in _walk(curve, start, steps):
        drift = max(drift, abs(theta - delta))
    if drift > DRIFT_WARN:
        warnings.warn(f"theta drifted by {drift:.3g} from delta along the orbit", RuntimeWarning, stacklevel=2)
    rotation = turns / steps + (alpha - start.alpha) / (TWO_PI * steps)
    return OrbitSummary(start, steps, rotation, drift)


ORBIT_FIELDS = ("step", "alpha", "theta", "x", "y")


def orbit_to_delimited(records, delimiter: str = ",") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(ORBIT_FIELDS)
    for i, a, t, x, y in records:
        w.writerow([i, repr(a), repr(t), repr(x), repr(y)])
    return buf.getvalue()


def s_coordinates(curve: FourierCurve, p: PhasePoint) -> tuple[float, float]:
    return arc_length(curve, p.alpha), p.theta
