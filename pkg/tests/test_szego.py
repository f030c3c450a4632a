import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xyness import model, szego
from xyness.model import ChainParams, ScalarSymbol
from xyness.quadrature import integrate_function
from xyness.spectral import bound_state


@st.composite
def chain_params(draw, strict=True):
    a, b = sorted((draw(st.floats(0.05, 8.0)), draw(st.floats(0.05, 8.0))))
    if strict:
        b = a + max(b - a, 0.05)
    return ChainParams(a, b, draw(st.floats(0.02, 20.0)))


def test_constant_symbol_coefficients():
    half = ScalarSymbol(lambda k: np.full_like(k, 0.5))
    c = szego.fourier_coefficients(half, np.arange(-3, 4))
    np.testing.assert_allclose(c, [0, 0, 0, 0.5, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(szego.toeplitz_section(half, 4), 0.5 * np.eye(4), atol=1e-15)
    np.testing.assert_allclose(szego.hankel_section(half, 4), 0.0, atol=1e-15)


def test_plane_wave_coefficient():
    wave = ScalarSymbol(lambda k: np.exp(1j * k), real=False)
    assert szego.fourier_coefficient(wave, 1) == pytest.approx(1.0, abs=1e-15)
    assert szego.fourier_coefficient(wave, 0) == pytest.approx(0.0, abs=1e-15)


def test_poisson_kernel_coefficient():
    bs = bound_state(0.2)
    pk = ScalarSymbol(lambda k: 1.0 / ((bs.e_b - 1.0) + 2.0 * np.sin(0.5 * k) ** 2))
    assert szego.fourier_coefficient(pk, 3) == pytest.approx(math.exp(-3 * bs.lambda_b) / 0.2, rel=1e-12)


def test_real_even_symbol_gives_real_symmetric_section():
    s = ScalarSymbol(lambda k: 1.0 + 0.3 * np.abs(np.sin(k)))
    t = szego.toeplitz_section(s, 6)
    assert np.max(np.abs(t.imag)) < 1e-13
    np.testing.assert_allclose(t, t.T, atol=1e-15)


def test_toeplitz_section_against_entry_integrals(fig_params):
    a = model.toeplitz_symbol(fig_params)
    t = szego.toeplitz_section(a, 4)
    for i in range(4):
        for j in range(4):
            m = i - j
            direct = integrate_function(lambda k: a(k) * np.exp(-1j * k * m), breakpoints=(0.0,), frequency=abs(m))
            assert t[i, j] == pytest.approx(direct, abs=1e-13)


def test_section_index_conventions():
    # Toeplitz coefficients run over m = -2..2, Hankel ones over m = 1..5
    c = np.array([-20.0, -10.0, 0.0, 10.0, 20.0])
    t = szego.toeplitz_from_coefficients(c, 3)
    assert t[2, 0] == 20.0 and t[0, 2] == -20.0 and t[1, 1] == 0.0
    h = szego.hankel_from_coefficients(np.arange(1.0, 6.0), 3)
    assert h[0, 0] == 1.0 and h[2, 2] == 5.0 and h[0, 2] == h[2, 0] == 3.0


def test_hankel_symbol_vanishes_at_infinite_temperature():
    b = szego.hankel_symbol(ChainParams(0.0, 0.0, 0.4), "B")
    assert np.max(np.abs(b(model.momentum_grid(401)))) < 1e-15


def test_hankel_symbol_modulus_bound(fig_params):
    from xyness.spectral import bound_state_overlap
    k = model.momentum_grid(2001)
    b = szego.hankel_symbol(fig_params, "B")
    ov = bound_state_overlap(fig_params, -1)
    bracket = np.max(np.abs(ov - model.fermi(k, fig_params, model.RIGHT, -1)))
    bound = fig_params.kappa / np.sqrt(np.sin(k) ** 2 + fig_params.kappa ** 2) * bracket
    assert np.all(np.abs(b(k)) <= bound + 1e-15)


def test_hankel_coefficients_decay(fig_params):
    b = szego.hankel_symbol(fig_params, "B")
    ms = np.array([32, 64, 128])
    w = np.abs(szego.fourier_coefficients(b, ms)) * ms ** 4.0
    # m^4 |b_m| shrinks once m exceeds the 1/kappa scale: faster than any power tested
    assert w[1] < 0.1 * w[0] and w[2] < 0.1 * w[1]


def test_hankel_mode_rejected(fig_params):
    with pytest.raises(ValueError):
        szego.hankel_symbol(fig_params, "C")


def test_geometric_mean_examples():
    g, rate = szego.geometric_mean(ScalarSymbol(lambda k: np.full_like(k, 0.5)))
    assert g == pytest.approx(0.5, rel=1e-15) and rate == pytest.approx(math.log(2), rel=1e-15)
    g, _ = szego.geometric_mean(ScalarSymbol(lambda k: np.exp(np.cos(k))))
    assert g == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        szego.geometric_mean(ScalarSymbol(lambda k: np.cos(k)))


def test_infinite_temperature_rates():
    r = szego.decay_rates(ChainParams(0.0, 0.0, 0.3))
    assert r.gamma_R == pytest.approx(0.5 * math.log(2), abs=1e-14)
    assert r.gamma_total == pytest.approx(math.log(2), abs=1e-14)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 8.0), st.floats(0.02, 20.0))
def test_equal_temperatures_equal_rates(beta, kappa):
    r = szego.decay_rates(ChainParams(beta, beta, kappa))
    assert r.gamma_B == pytest.approx(r.gamma_L, abs=1e-13)
    assert r.gamma_R == pytest.approx(r.gamma_L, abs=1e-13)


def test_reference_rates(fig_params):
    r = szego.decay_rates(fig_params)
    assert r.ordered
    np.testing.assert_allclose([r.gamma_L, r.gamma_B, r.gamma_R], [0.35433, 0.37696, 0.45870], atol=1e-5)
    assert r.gamma_total == r.gamma_R + r.gamma_B
    assert r.rewrite_error < 1e-10


@settings(max_examples=20, deadline=None)
@given(chain_params())
def test_rate_identity_and_ordering(p):
    assert szego.rate_identity_error(p) <= 1e-10
    r = szego.decay_rates(p)
    assert r.ordered
    assert r.rewrite_error <= 1e-10


def test_literal_half_circle_form_double_counts(fig_params):
    # without the factor 1/2 the half-circle form returns twice the rate
    beta = fig_params.beta_left

    def integrand(k):
        t = np.tanh(0.5 * beta * np.cos(k))
        return np.log(0.25 * (1 - t * t))

    literal = -szego._half_circle_mean(integrand, szego.DEFAULT_QUAD)
    gamma_l = szego.decay_rates(fig_params).gamma_L
    assert literal == pytest.approx(2 * gamma_l, rel=1e-12)


def test_gamma_b_monotone_in_kappa(fig_params):
    gb = [szego.decay_rates(fig_params.replace(kappa=k)).gamma_B for k in (0.05, 0.2, 1.0, 5.0)]
    assert all(x <= y for x, y in zip(gb, gb[1:]))


def test_gamma_b_limits(fig_params):
    lo = szego.decay_rates(fig_params.replace(kappa=1e-4))
    hi = szego.decay_rates(fig_params.replace(kappa=1e4))
    assert abs(lo.gamma_B - lo.gamma_L) < 1e-3
    assert abs(hi.gamma_B - hi.gamma_R) < 1e-3


def test_symbol_range(fig_params):
    k = model.momentum_grid(20001, (0.0, math.pi))
    a = model.toeplitz_symbol(fig_params)(k)
    assert np.min(a) == pytest.approx(model.fermi_side(0.0, 2.0, -1), abs=1e-10)
    assert np.max(a) == pytest.approx(model.fermi_side(0.0, 2.0, +1), abs=1e-10)


def test_jump_magnitude_reference(fig_params):
    x = szego.jump_magnitude(fig_params)
    assert x == pytest.approx(25 * math.sinh(0.75) / (math.cosh(1.0) * math.cosh(0.25)), rel=1e-15)
    assert x == pytest.approx(12.917, abs=1e-3)


def test_measured_jumps(fig_params):
    d = szego.symbol_jump_diagnostic(fig_params)
    assert d.measured_zero == pytest.approx(d.predicted_zero, rel=1e-6)
    # the measured jump at pi carries the same sign as at 0
    assert d.measured_pi == pytest.approx(d.predicted_pi, rel=1e-6)
    assert d.measured_pi == pytest.approx(d.measured_zero, rel=1e-6)


def test_no_jump_at_equal_temperatures():
    d = szego.symbol_jump_diagnostic(ChainParams(1.0, 1.0, 0.3))
    assert abs(d.measured_zero) < 1e-8 and abs(d.measured_pi) < 1e-8
    assert d.predicted_zero == 0.0


def test_continuity(fig_params):
    g0, gpi = szego.continuity_gap(fig_params)
    assert g0 < 1e-12 and gpi < 1e-12


def test_one_sided_derivative_order():
    h = 1e-2
    d = szego.one_sided_derivative(np.exp, 0.0, h, +1)
    assert abs(d - 1.0) < 1e-7
    d = szego.one_sided_derivative(np.sin, 1.0, h, -1)
    assert abs(d - math.cos(1.0)) < 1e-7


def test_hankel_trace_proxy(fig_params):
    sv = szego.hankel_singular_values(szego.hankel_symbol(fig_params), 64)
    assert np.sum(sv[32:]) / np.sum(sv) < 1e-6


def test_profile_infinite_temperature():
    prof = szego.asymptotic_profile(ChainParams(0.0, 0.0, 0.3, x0=2), 15)
    np.testing.assert_allclose(prof.log_ratio, 0.0, atol=1e-12)
    with pytest.raises(ValueError):
        szego.asymptotic_profile(ChainParams(0.0, 0.0, 0.3), 401)


@pytest.mark.slow
def test_profile_reference(fig_params):
    prof = szego.asymptotic_profile(fig_params, 120)
    assert abs(prof.fitted_rate / prof.gamma_total - 1) < 0.02
    assert prof.increments[-1] < 1e-3
    assert np.all(np.diff(prof.increments[40:]) < 0)
