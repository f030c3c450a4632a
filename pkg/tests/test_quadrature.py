import math

import numpy as np
import pytest

from xyness.quadrature import (QuadratureError, QuadSpec, integrate_circle, integrate_function,
                               integrate_interval, panel_rule, subdivide)


def test_panel_rule_carries_two_pi():
    k, w = panel_rule(-math.pi, math.pi, 16)
    assert np.sum(w) == pytest.approx(1.0, abs=1e-15)


def test_subdivide_covers_interval():
    pieces = subdivide([-math.pi, 0.0, math.pi], 4)
    assert pieces[0][0] == -math.pi and pieces[-1][1] == math.pi
    assert len(pieces) == 8


@pytest.mark.parametrize("m", [0, 1, 5, 40])
def test_fourier_mode_orthogonality(m):
    val = integrate_function(lambda k: np.exp(1j * m * k), frequency=m)
    assert abs(val - (1.0 if m == 0 else 0.0)) < 1e-14


def test_kink_resolved_with_breakpoint():
    # (1/2pi) int |k| dk = pi/2
    val = integrate_function(lambda k: np.abs(k), breakpoints=(0.0,))
    assert abs(val - math.pi / 2) < 1e-13


def test_vector_panel():
    def panel(k, w):
        return np.array([np.sum(w * np.cos(k) ** 2), np.sum(w * np.sin(k) ** 2)])

    res = integrate_circle(panel)
    np.testing.assert_allclose(res.value, [0.5, 0.5], atol=1e-15)


def test_interval_quadrature():
    val = integrate_interval(lambda x: np.exp(x), 0.0, 1.0)
    assert abs(val - (math.e - 1)) < 1e-13


def test_budget_exhaustion_raises_with_index():
    quad = QuadSpec(tol=1e-14, max_panels=50)

    def panel(k, w):
        return np.array([np.sum(w), np.sum(w / (np.abs(k) + 1e-9) ** 0.5)])

    with pytest.raises(QuadratureError) as info:
        integrate_circle(panel, quad, context="probe")
    assert info.value.index == (1,)
    assert "probe" in str(info.value)
