import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anisobesov import (
    BesovParams,
    F_k_norm_bounds,
    FrequencyBox,
    GridSpec,
    SincProductSpec,
    analytic_sinc_norm,
    block_norm,
    build_F_k,
    build_g1,
    fourier_section,
    lp_norm,
    make_profile,
    sinc_lp_constant,
    transform,
)
from anisobesov.exceptions import DomainError, NyquistError
from anisobesov.extremal import conjugate, sinc_factor, sinc_product, tail_bound

from conftest import nyquist_grid, rel

# Independent values of int_R |sin t / t|^p dt: Gauss-Legendre on every
# half-period with u = (pi/2) y^2 at both ends, summed to 1e6 half-periods,
# then Richardson-extrapolated in the K^(1-p) and K^(-p-1) partial-sum terms.
C_ORACLE = {1.5: 4.42557391249314, 3.0: 2.4168884189808164}


@pytest.mark.parametrize(
    "p, exact",
    [(2.0, math.pi), (4.0, 2 * math.pi / 3), (6.0, 11 * math.pi / 20), (8.0, 151 * math.pi / 315)],
)
def test_sinc_constant_closed_forms(p, exact):
    assert abs(sinc_lp_constant(p) - exact) < 1e-8


@pytest.mark.parametrize("p", sorted(C_ORACLE))
def test_sinc_constant_against_frozen_oracle(p):
    assert abs(sinc_lp_constant(p) - C_ORACLE[p]) < 1e-10


def test_sinc_constant_monotone():
    assert sinc_lp_constant(4) < sinc_lp_constant(3) < sinc_lp_constant(2)
    ps = np.linspace(1.05, 10, 25)
    vals = [sinc_lp_constant(p) for p in ps]
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("p", [1.0, 0.5, math.inf, "inf"])
def test_sinc_constant_domain(p):
    with pytest.raises(DomainError):
        sinc_lp_constant(p)


def test_tail_bound_formula():
    # one tail of |sin t / t|^p beyond T
    assert tail_bound(2.0, 100.0) == pytest.approx(1 / 100)
    assert tail_bound(3.0, 10.0) == pytest.approx(10.0**-2 / 2)


def test_analytic_norm_examples():
    assert analytic_sinc_norm(SincProductSpec((1.0,)), 2) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert analytic_sinc_norm(SincProductSpec((2.0, 2.0)), 2) == pytest.approx(4.0, rel=1e-12)
    spec = SincProductSpec((1.0, 2.0))
    assert analytic_sinc_norm(spec, math.inf) == pytest.approx(2 / math.pi * 2)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(0.1, 50.0), min_size=1, max_size=3),
    st.integers(0, 2),
    st.sampled_from([1.5, 2.0, 3.0, 4.0]),
)
def test_doubling_a_degree_scales_by_conjugate_power(nu, j, p):
    j = j % len(nu)
    base = analytic_sinc_norm(SincProductSpec(tuple(nu)), p)
    nu2 = list(nu)
    nu2[j] *= 2
    doubled = analytic_sinc_norm(SincProductSpec(tuple(nu2)), p)
    assert doubled / base == pytest.approx(2 ** (1 / conjugate(p)), rel=1e-12)


def test_sinc_spec_validation():
    with pytest.raises(DomainError):
        SincProductSpec((1.0, -1.0))
    assert SincProductSpec((1.0, 1.0)).amplitude == pytest.approx(2 / math.pi)


def test_sinc_factor_near_zero_is_smooth():
    x = np.array([0.0, 1e-9, 1e-6, 5e-5, 2e-4, 1e-2])
    for nu in (1.0, 3.0):
        exact = np.where(x == 0, nu, np.sin(nu * x) / np.where(x == 0, 1, x))
        assert np.allclose(sinc_factor(x, nu), exact, rtol=1e-14, atol=0)


def test_sinc_product_origin_value():
    grid = GridSpec.uniform(2, 10.0, 64)
    f = sinc_product(SincProductSpec((1.5, 0.5)), grid)
    assert f.values[32, 32].real == pytest.approx(2 / math.pi * 0.75, rel=1e-14)


@pytest.fixture(scope="module")
def big_line():
    return make_profile((1.0,)), GridSpec.uniform(1, 200.0, 8192)


def test_F0_spectrum_is_unit_box(big_line):
    prof, spec = big_line
    raw = build_F_k(prof, 0, spec, band_limit=False)
    coef = transform(raw).coefficients
    lam = spec.frequency_axes()[0]
    away = np.abs(np.abs(lam) - 1) > 0.1
    assert np.max(np.abs(coef[away] - (np.abs(lam[away]) < 1))) < 0.05
    assert np.max(np.abs(coef.imag)) < 1e-10


@pytest.mark.parametrize("k", [1, 2, 4])
def test_F_k_spectrum_is_shell_indicator(big_line, k):
    prof, spec = big_line
    coef = transform(build_F_k(prof, k, spec, band_limit=False)).coefficients.real
    lam = np.abs(spec.frequency_axes()[0])
    edges = [2.0 ** (k - 1), 2.0**k]
    away = np.min([np.abs(lam - e) for e in edges], axis=0) > 0.1
    target = ((lam >= edges[0]) & (lam < edges[1])).astype(float)
    assert np.max(np.abs(coef[away] - target[away])) < 0.05


def test_F1_plancherel(big_line):
    prof, spec = big_line
    assert rel(lp_norm(build_F_k(prof, 1, spec), 2), math.sqrt(2)) < 0.02
    assert rel(lp_norm(build_F_k(prof, 1, spec, band_limit=False), 2), math.sqrt(2)) < 0.02


def test_F_k_plancherel_2d():
    prof = make_profile((1.0, 2.0))
    spec = nyquist_grid(prof, 2, (2048, 512))
    for k in (1, 2):
        meas = 2**2 * (2 ** (2 * k) - 2 ** (2 * (k - 1)))
        assert rel(lp_norm(build_F_k(prof, k, spec), 2), math.sqrt(meas)) < 0.02


def test_F_k_is_real_and_even():
    prof = make_profile((1.0, 2.0))
    spec = GridSpec((40.0, 30.0), (128, 64))
    for band in (True, False):
        v = build_F_k(prof, 1, spec, band_limit=band).values
        assert np.max(np.abs(v.imag)) < 1e-14
        # x_m and x_{N-m} are mirror images; index 0 (x = -L) has no partner
        inner = v.real[1:, 1:]
        scale = np.max(np.abs(inner))
        assert np.max(np.abs(inner - inner[::-1, :])) < 1e-12 * scale
        assert np.max(np.abs(inner - inner[:, ::-1])) < 1e-12 * scale


def test_F_k_nyquist_guard():
    with pytest.raises(NyquistError):
        build_F_k(make_profile((1.0,)), 6, GridSpec.uniform(1, 10.0, 64))
    with pytest.raises(DomainError):
        build_F_k(make_profile((1.0,)), -1, GridSpec.uniform(1, 10.0, 64))


@pytest.mark.parametrize("d, r", [(1, (1.0,)), (2, (1.0, 2.0)), (3, (1.0, 1.0, 3.0))])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_bounds_scale_like_two_to_dk_over_pconj(d, r, p):
    prof = make_profile(r)
    pc = conjugate(p)
    const = (2 / math.pi) ** (d / 2) * sinc_lp_constant(p) ** (d / p)
    for k in range(1, 7):
        lo, up = F_k_norm_bounds(prof, k, p)
        assert up / 2 ** (d * k / pc) == pytest.approx(const * (1 + 2 ** (-d / pc)), rel=1e-12)
        assert lo / 2 ** (d * k / pc) == pytest.approx(const * (1 - 2 ** (-d / pc)), rel=1e-12)


def test_bounds_need_positive_k():
    with pytest.raises(DomainError):
        F_k_norm_bounds(make_profile((1.0,)), 0, 2)


def test_quadrature_norm_inside_bounds_1d():
    prof = make_profile((1.0,))
    spec = nyquist_grid(prof, 5, 2**14)
    for k in range(1, 6):
        lo, up = F_k_norm_bounds(prof, k, 2)
        v = lp_norm(build_F_k(prof, k, spec), 2)
        assert lo * 0.95 <= v <= up * 1.05


@pytest.fixture(scope="module")
def g1_setup():
    prof = make_profile((1.0,))
    spec = nyquist_grid(prof, 6, 2**13)
    return prof, spec


def test_g1_is_normalized_and_has_empty_lower_section(g1_setup):
    prof, spec = g1_setup
    for n in (2, 4):
        g1 = build_g1(prof, n, 2.0, spec)
        assert block_norm(g1, BesovParams(prof, 2.0, 1.0)) == pytest.approx(1.0, abs=1e-12)
        sec = fourier_section(g1, FrequencyBox.dyadic(prof, n - 1))
        assert np.max(np.abs(sec.values)) <= 1e-10


def test_g1_constant_is_uniform_in_n(g1_setup):
    prof, spec = g1_setup
    consts = [build_g1(prof, n, 2.0, spec, return_constant=True)[1] for n in range(2, 6)]
    assert max(consts) / min(consts) < 4


def test_g1_constant_is_uniform_in_n_2d():
    prof = make_profile((1.0, 2.0))
    spec = nyquist_grid(prof, 5, (1024, 256))
    consts = [build_g1(prof, n, 2.0, spec, return_constant=True)[1] for n in range(2, 6)]
    assert max(consts) / min(consts) < 4


def test_g1_rejects_n_zero(g1_setup):
    with pytest.raises(DomainError):
        build_g1(*g1_setup[:1], 0, 2.0, g1_setup[1])
