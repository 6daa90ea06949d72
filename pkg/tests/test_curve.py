import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from capfloat import curve as cv
from capfloat.curve import (
    ConvexityError,
    FourierCurve,
    area,
    boundary_point,
    caustic_residual,
    eval_radius,
    floating_report,
    has_constant_caustic,
    is_constant_width,
    make_omega_n_tau,
    perimeter,
    width,
)
from capfloat.trigroots import build_An

X4 = math.atan(math.sqrt(5.0))


def quad_caustic_integral(curve, alpha, delta):
    f = lambda xi: eval_radius(curve, xi) * math.sin(alpha - xi)
    # the integrand is smooth; quad's roundoff warning at this tolerance is benign
    return quad(f, alpha - delta, alpha + delta, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def test_omega_shape_and_anchor(omega4):
    assert eval_radius(omega4, math.pi / 8) == pytest.approx(1.5)
    x, y = boundary_point(omega4, 0.0)
    # x(0) = -(1/2) tau (1/3 + 1/5) for rho = 1 + tau sin 4a
    assert x == pytest.approx(-0.5 * 0.5 * (1 / 3 + 1 / 5), abs=1e-15)
    assert y == pytest.approx(-1.0, abs=1e-15)


def test_boundary_closes_and_tangent_matches_rho(omega4):
    a, b = boundary_point(omega4, 0.0), boundary_point(omega4, 2 * math.pi)
    assert math.hypot(a[0] - b[0], a[1] - b[1]) < 1e-14
    h = 1e-6
    for alpha in np.linspace(0.1, 6.0, 17):
        p0, p1 = boundary_point(omega4, alpha - h), boundary_point(omega4, alpha + h)
        dx, dy = (p1[0] - p0[0]) / (2 * h), (p1[1] - p0[1]) / (2 * h)
        r = eval_radius(omega4, alpha)
        assert dx == pytest.approx(r * math.cos(alpha), abs=1e-8)
        assert dy == pytest.approx(r * math.sin(alpha), abs=1e-8)


def test_rejections():
    with pytest.raises(ValueError):
        FourierCurve(1.0, ((1, 0.1, 0.0),))
    with pytest.raises(ValueError):
        FourierCurve(1.0, ((4, 0.1, 0.0), (4, 0.0, 0.1)))
    with pytest.raises(ConvexityError):
        make_omega_n_tau(4, 1.0)
    with pytest.raises(ConvexityError):
        FourierCurve(1.0, ((2, 0.7, 0.0), (4, 0.0, 0.7)))
    with pytest.raises(ValueError):
        make_omega_n_tau(3, 0.2)
    assert make_omega_n_tau(3, 0.2, allow_small_n=True).harmonics[0][0] == 3


def test_grid_convexity_fallback_accepts_nonobvious_curve():
    # sum of amplitudes exceeds c0 but rho stays positive
    c = FourierCurve(1.0, ((2, 0.6, 0.0), (4, 0.6, 0.0)))
    assert cv.min_radius(c) > 0


def test_area_of_circles():
    assert area(FourierCurve(1.0)) == pytest.approx(math.pi, abs=1e-14)
    assert area(FourierCurve(2.0)) == pytest.approx(4 * math.pi, abs=1e-13)


def test_area_against_polygon_oracle(omega4):
    alpha = np.linspace(0, 2 * math.pi, 20000, endpoint=False)
    pts = cv.boundary_points(omega4, alpha)
    x, y = pts[:, 0], pts[:, 1]
    shoelace = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    assert area(omega4) == pytest.approx(shoelace, rel=1e-7)


def test_caustic_decision_omega4(omega4):
    rep = has_constant_caustic(omega4, X4)
    assert rep.exists and rep.matched_n == 4 and rep.residual < 1e-15
    neg = has_constant_caustic(omega4, math.pi / 4)
    assert not neg.exists and neg.offenders == (4,)
    assert caustic_residual(omega4, math.pi / 4) > 1e-3


def test_caustic_delta_range(omega4):
    for bad in (0.0, math.pi, -1.0):
        with pytest.raises(ValueError):
            has_constant_caustic(omega4, bad)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("delta", [0.3, X4, 1.0, 2.5])
def test_kernel_matches_quadrature(cw_curve, omega4, delta):
    for c in (cw_curve, omega4):
        grid = np.linspace(0, 2 * math.pi, 9)
        closed = [
            sum(cv.kernel_hat(k, delta) * (a * math.sin(k * t) - b * math.cos(k * t)) for k, a, b in c.harmonics)
            for t in grid
        ]
        ref = [quad_caustic_integral(c, t, delta) for t in grid]
        assert np.allclose(closed, ref, atol=1e-12)


def test_circle_has_every_caustic():
    circle = FourierCurve(1.0)
    assert has_constant_caustic(circle, 0.123).circular
    assert floating_report(circle).angles == cv.ALL_ANGLES


def test_floating_report_omega4(omega4):
    rep = floating_report(omega4)
    assert len(rep.contact_angles) == 2
    assert rep.caustic_angles[0] == pytest.approx(X4, abs=1e-14)
    assert rep.contact_angles[1] == pytest.approx(math.pi - X4, abs=1e-14)


def test_constant_width_suite(cw_curve):
    assert is_constant_width(cw_curve)
    ws = [width(cw_curve, t) for t in np.linspace(0, math.pi, 101)]
    assert max(ws) - min(ws) < 1e-10
    w = ws[0]
    assert abs(math.pi * w - perimeter(cw_curve)) < 1e-10
    assert (math.pi - math.sqrt(3)) / 2 * w * w <= area(cw_curve) <= math.pi / 4 * w * w
    assert has_constant_caustic(cw_curve, math.pi / 2).exists
    assert floating_report(cw_curve).contact_angles == (math.pi / 2,)


def test_even_harmonic_breaks_width():
    c = FourierCurve(1.0, ((3, 0.2, 0.0), (4, 0.05, 0.0)))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not is_constant_width(c)
    assert not has_constant_caustic(c, math.pi / 2).exists


def test_arc_length_inverse(omega4):
    for s in (0.0, 1.0, 3.3, 6.0):
        a = cv.alpha_at_arc_length(omega4, s)
        assert cv.arc_length(omega4, a) == pytest.approx(s, abs=1e-12)
    assert cv.arc_length(omega4, 2 * math.pi) == pytest.approx(perimeter(omega4))


def test_parse_curve_forms(tmp_path, cw_curve):
    assert cv.parse_curve("omega:4,0.5") == make_omega_n_tau(4, 0.5)
    assert cv.parse_curve("circle").is_circle
    path = tmp_path / "c.json"
    path.write_text(cv.dumps(cw_curve))
    assert cv.parse_curve(str(path)) == cw_curve
    assert cv.parse_curve(cv.dumps(cw_curve)) == cw_curve


harmonic = st.tuples(
    st.integers(min_value=2, max_value=12),
    st.floats(min_value=-0.08, max_value=0.08, allow_nan=False),
    st.floats(min_value=-0.08, max_value=0.08, allow_nan=False),
)


@st.composite
def curves(draw):
    hs = draw(st.lists(harmonic, min_size=0, max_size=4, unique_by=lambda h: h[0]))
    c0 = draw(st.floats(min_value=0.5, max_value=3.0))
    return FourierCurve(c0, tuple(hs))


@settings(max_examples=80, deadline=None)
@given(curves())
def test_json_round_trip_is_exact(c):
    back = cv.loads(cv.dumps(c))
    assert back == c
    assert json.loads(cv.dumps(back)) == json.loads(cv.dumps(c))


@settings(max_examples=60, deadline=None)
@given(curves())
def test_width_constancy_iff_caustic_at_half_pi(c):
    # below tol the decision cannot see a harmonic at all
    assume(all(math.hypot(a, b) > 1e-6 for _, a, b in c.active))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cw = is_constant_width(c)
    assert cw == has_constant_caustic(c, math.pi / 2, tol=1e-14).exists or c.is_circle


@settings(max_examples=60, deadline=None)
@given(curves())
def test_barbier_for_odd_curves(c):
    odd = FourierCurve(c.c0, tuple(h for h in c.harmonics if h[0] % 2 == 1))
    w = width(odd, 0.37)
    assert abs(math.pi * w - perimeter(odd)) < 1e-10 * max(1.0, w)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=4, max_value=30), st.floats(min_value=0.01, max_value=0.95))
def test_every_An_angle_is_a_caustic_of_omega(n, tau):
    c = make_omega_n_tau(n, tau)
    for d in build_An(n):
        assert has_constant_caustic(c, d).exists
    assume(n % 2 == 0)
    assert not has_constant_caustic(c, math.pi / 2).exists
