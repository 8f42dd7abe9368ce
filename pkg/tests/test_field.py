import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from anisobesov import GridSpec, SampledField, SpectralField, build_F_k, lp_norm, make_profile, sample, transform
from anisobesov.exceptions import DomainError, SpecMismatchError
from anisobesov.field import tail_estimate

from conftest import random_field, rel


def test_grid_geometry():
    spec = GridSpec((2.0, 5.0), (8, 10))
    assert np.allclose(spec.spacing, [0.5, 1.0])
    assert np.allclose(spec.axes()[0], [-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5])
    assert np.allclose(spec.frequency_axes()[1], np.pi / 5 * np.arange(-5, 5))
    assert np.allclose(spec.nyquist, [2 * np.pi, np.pi])


@pytest.mark.parametrize("hw, n", [((1.0,), (7,)), ((1.0, 2.0), (8,)), ((-1.0,), (8,)), ((1,) * 4, (8,) * 4)])
def test_grid_rejects_bad_shapes(hw, n):
    with pytest.raises(DomainError):
        GridSpec(hw, n)


def test_sample_constant_and_gaussian(gauss_grid, unit_gaussian):
    ones = sample(lambda x: np.ones_like(x), gauss_grid)
    assert np.all(ones.values == 1)
    vals = unit_gaussian.values.real
    assert np.all(vals > 0)
    mid = gauss_grid.samples[0] // 2
    assert np.argmax(vals) == mid
    # x_m and x_{N-m} are mirror images about 0
    assert np.allclose(vals[1:mid], vals[:mid:-1], rtol=0, atol=1e-15)


def test_sample_sinc_product_at_origin():
    prof = make_profile((1.0, 1.0))
    spec = GridSpec.uniform(2, 10.0, 64)
    F0 = build_F_k(prof, 0, spec, band_limit=False)
    assert F0.values[32, 32].real == pytest.approx(2 / math.pi, rel=1e-14)


def test_sample_reports_nonfinite_point():
    spec = GridSpec.uniform(1, 1.0, 4)
    with pytest.raises(DomainError, match=r"index \(2,\)"):
        sample(lambda x: 1.0 / x, spec)


def test_round_trip_identity(rng):
    for spec in (GridSpec.uniform(1, 3.0, 64), GridSpec((2.0, 7.0), (16, 32)), GridSpec.uniform(3, 1.0, 8)):
        f = random_field(spec, rng)
        back = transform(transform(f), "inverse")
        assert np.linalg.norm(back.values - f.values) / np.linalg.norm(f.values) < 1e-10


def test_gaussian_is_its_own_transform(gauss_grid, unit_gaussian):
    coef = transform(unit_gaussian).coefficients
    lam = gauss_grid.frequency_axes()[0]
    assert np.max(np.abs(coef - np.exp(-0.5 * lam**2))) < 1e-8


def test_gaussian_2d_separable_transform():
    spec = GridSpec((10.0, 14.0), (128, 160))
    f = sample(lambda x, y: np.exp(-0.5 * (x**2 + y**2)), spec)
    lx, ly = spec.frequency_mesh()
    assert np.max(np.abs(transform(f).coefficients - np.exp(-0.5 * (lx**2 + ly**2)))) < 1e-8


def test_transform_of_F0_is_unit_box_indicator(line_grid, iso1):
    F0 = build_F_k(iso1, 0, line_grid, band_limit=False)
    coef = transform(F0).coefficients
    lam = line_grid.frequency_axes()[0]
    away = np.abs(np.abs(lam) - 1) > 0.1
    assert np.max(np.abs(coef[away] - (np.abs(lam[away]) < 1))) < 0.05


def test_transform_direction_checks(unit_gaussian):
    with pytest.raises(SpecMismatchError):
        transform(unit_gaussian, "inverse")
    with pytest.raises(SpecMismatchError):
        transform(transform(unit_gaussian), "forward")
    with pytest.raises(DomainError):
        transform(unit_gaussian, "sideways")


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lp_norm_of_box_indicator(d):
    spec = GridSpec.uniform(d, 2.0, 16)
    box = sample(lambda *xs: np.all([(x >= -1) & (x < 1) for x in xs], axis=0).astype(float), spec)
    assert lp_norm(box, 1.5) == pytest.approx(2 ** (d / 1.5), rel=1e-12)
    assert lp_norm(box, "inf") == 1.0


def test_gaussian_l2_norm(unit_gaussian):
    assert abs(lp_norm(unit_gaussian, 2) - math.pi**0.25) < 1e-8


def test_F0_l2_norm_by_quadrature(iso1):
    spec = GridSpec.uniform(1, 200.0, 8192)
    F0 = build_F_k(iso1, 0, spec, band_limit=False)
    assert rel(lp_norm(F0, 2), math.sqrt(2)) < 0.02
    # what the box cuts away is of the order of the tail model
    assert tail_estimate(F0, 2) < 0.1


@pytest.mark.parametrize("p", [1.0, 0.5, -1, float("nan")])
def test_lp_norm_rejects_small_exponents(unit_gaussian, p):
    with pytest.raises(DomainError):
        lp_norm(unit_gaussian, p)


def test_parseval_and_linearity(rng):
    for spec in (GridSpec.uniform(1, 5.0, 128), GridSpec((3.0, 1.0), (32, 16))):
        f, g = random_field(spec, rng), random_field(spec, rng)
        ff = transform(f)
        assert rel(ff.energy(), lp_norm(f, 2) ** 2) < 1e-10
        alpha, beta = 0.3 - 1.2j, 2.5
        lhs = transform(alpha * f + beta * g).coefficients
        rhs = alpha * ff.coefficients + beta * transform(g).coefficients
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))


finite_arrays = hnp.arrays(np.float64, (32,), elements=st.floats(-1e3, 1e3, allow_subnormal=False))


@settings(max_examples=100, deadline=None)
@given(finite_arrays, finite_arrays, st.floats(-50, 50), st.sampled_from([1.2, 2.0, 3.5, math.inf]))
def test_lp_norm_is_a_norm(u, v, lam, p):
    spec = GridSpec.uniform(1, 4.0, 32)
    f, g = SampledField(spec, u), SampledField(spec, v)
    nf = lp_norm(f, p)
    assert lp_norm(lam * f, p) == pytest.approx(abs(lam) * nf, rel=1e-12, abs=1e-300)
    assert lp_norm(f + g, p) <= (nf + lp_norm(g, p)) * (1 + 1e-12) + 1e-300


def test_fields_are_read_only(unit_gaussian):
    with pytest.raises(ValueError):
        unit_gaussian.values[0] = 1.0


def test_arithmetic_requires_same_grid(unit_gaussian):
    other = sample(lambda x: x, GridSpec.uniform(1, 1.0, 256))
    with pytest.raises(SpecMismatchError):
        unit_gaussian + other


def test_spectral_field_shape_check():
    with pytest.raises(SpecMismatchError):
        SpectralField(GridSpec.uniform(1, 1.0, 8), np.zeros(4))
