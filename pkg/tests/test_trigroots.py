import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from capfloat import trigroots
from capfloat.trigroots import build_An, branch_count, density_gap, in_B, sin_eq_residual, solve_Bn


def test_counts_match_parity_formula():
    assert [branch_count(n) for n in range(2, 10)] == [0, 0, 1, 1, 2, 2, 3, 3]
    for n in range(2, 120):
        assert len(solve_Bn(n)) == branch_count(n)


def test_small_n_are_empty():
    assert solve_Bn(2) == [] and solve_Bn(3) == []
    assert build_An(3).members == (math.pi / 2,)
    assert build_An(2).members == ()


def test_closed_forms_n4_n5():
    (x4,) = solve_Bn(4)
    (x5,) = solve_Bn(5)
    assert abs(x4.value - math.atan(math.sqrt(5))) < 1e-14
    assert abs(x5.value - math.atan(math.sqrt(5 / 3))) < 1e-14
    assert math.pi / 3 < x4.value < math.pi / 2
    assert math.pi / 4 < x5.value < 3 * math.pi / 10


def test_against_independent_brentq_on_tan_form():
    # oracle: tan(nx) - n tan(x) solved by scipy directly, away from the bracket poles
    for n in (6, 9, 17, 40):
        for r in solve_Bn(n):
            f = lambda x: math.tan(n * x) - n * math.tan(x)
            lo = r.lo + 1e-9
            hi = (2 * r.k + 1) * math.pi / (2 * n) - 1e-9
            ref = brentq(f, lo, hi, xtol=1e-15)
            assert abs(ref - r.value) < 1e-12


@pytest.mark.parametrize("n", [4, 7, 50, 201, 500])
def test_roots_inside_brackets_with_small_residual(n):
    for r in solve_Bn(n):
        assert r.lo < r.value < r.hi
        assert abs(sin_eq_residual(n, r.value)) <= 1e-13


def test_tan_residual_where_conditioned():
    worst = 0.0
    for n in range(4, 200):
        for r in solve_Bn(n):
            t = math.tan(n * r.value)
            scaled = abs(r.tan_residual()) / (n * (1 + t * t))
            worst = max(worst, scaled)
            if abs(t) <= 100:
                assert abs(r.tan_residual()) <= 1e-9
    assert worst < 1e-14


def test_An_symmetry_and_size():
    for n in range(4, 60):
        a = build_An(n).members
        assert len(a) == n - 2
        for d in a:
            assert any(abs(math.pi - d - e) < 1e-14 for e in a)
        assert (math.pi / 2 in a) == (n % 2 == 1)


def test_density_gap():
    for n in range(4, 200):
        assert density_gap(n) <= 2 * math.pi / n


def test_in_B_lookup():
    x4 = math.atan(math.sqrt(5))
    assert 4 in in_B(x4, 20)
    assert in_B(0.3, 20) == []


def test_n_validation():
    with pytest.raises(ValueError):
        solve_Bn(1)
    with pytest.raises(ValueError):
        solve_Bn(trigroots.N_MAX + 1)


def test_delimited_and_json_round_trip():
    rows = trigroots.roots_table(range(4, 9))
    assert trigroots.from_json(trigroots.to_json(rows)) == rows
    text = trigroots.to_delimited(rows)
    assert text.splitlines()[0] == ",".join(trigroots.ROW_FIELDS)
    assert len(text.splitlines()) == 1 + len(rows)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=4, max_value=400))
def test_roots_sorted_and_in_first_quadrant(n):
    vals = [r.value for r in solve_Bn(n)]
    assert vals == sorted(vals)
    assert all(0 < v < math.pi / 2 for v in vals)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=300), st.floats(min_value=1e-3, max_value=math.pi - 1e-3))
def test_residual_antisymmetric_about_half_pi(n, d):
    # sin_eq_residual(n, pi - d) = (-1)^n * sin_eq_residual(n, d)
    sign = 1 if n % 2 == 0 else -1
    assert sin_eq_residual(n, math.pi - d) == pytest.approx(sign * sin_eq_residual(n, d), abs=1e-12)
