"""Anisotropic Nikol'skii-Besov norms of sampled fields.

Two routes are provided and kept independent of each other:

* :func:`block_norm` weights the ``L_p`` norms of the a-layers by ``b**s``
  and takes their ``l^theta`` norm;
* :func:`definition_norm` integrates moduli of smoothness of spectral
  derivatives along each axis.

They are equivalent up to constants, which is what the cross-checks test.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from anisobesov.anisotropy import AnisotropyProfile
from anisobesov.exceptions import DomainError, NumericalGuardError, ResidualError
from anisobesov.field import SampledField, SpectralField, _lp_of_array, check_exponent, lp_norm, transform
from anisobesov.spectral import layer_decompose, max_layer


class ShiftWarning(UserWarning):
    """No grid shift fits below the requested step ``t``."""


@dataclass(frozen=True)
class BesovParams:
    """Exponents and truncation for a Besov norm.

    ``s_max=None`` uses the finest layer the grid can represent.
    ``residual_tol`` bounds ``||residual||_p / ||f||_p`` for the block norm.
    """

    profile: AnisotropyProfile
    p: float
    theta: float
    s_max: int | None = None
    residual_tol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        theta = self.theta
        if isinstance(theta, str):
            theta = math.inf if theta.strip().lower() in {"inf", "infinity"} else float(theta)
        theta = float(theta)
        if math.isnan(theta) or theta < 1:
            raise DomainError(f"theta = {theta} must satisfy theta >= 1")
        object.__setattr__(self, "theta", theta)
        if self.s_max is not None and (self.s_max < 0 or int(self.s_max) != self.s_max):
            raise DomainError(f"S_max = {self.s_max} must be a non-negative integer")

    def with_theta(self, theta) -> "BesovParams":
        return BesovParams(self.profile, self.p, theta, self.s_max, self.residual_tol)


def lq_sequence_norm(terms, theta: float) -> float:
    """``l^theta`` norm of non-negative terms, scaled by the largest one."""
    terms = np.asarray(terms, dtype=float)
    peak = float(terms.max()) if terms.size else 0.0
    if peak == 0.0 or theta == math.inf:
        return peak
    return peak * float(np.sum((terms / peak) ** theta)) ** (1.0 / theta)


def block_terms(f: SampledField, params: BesovParams) -> np.ndarray:
    """Weighted layer norms ``b**s * ||f_{a^s}||_p`` for ``s = 0..S_max``.

    Raises
    ------
    ResidualError
        If the part of ``f`` beyond ``D_{a^S_max}`` is not negligible.
    """
    profile = params.profile
    s_max = params.s_max if params.s_max is not None else max_layer(profile, f.spec)
    stack = layer_decompose(f, profile, s_max)
    total = lp_norm(f, params.p)
    resid = lp_norm(stack.residual, params.p)
    if resid > params.residual_tol * total:
        raise ResidualError(
            f"grid under-resolves spectrum: residual beyond layer {s_max} has relative "
            f"L_{params.p:g} norm {resid / total:.3g} > {params.residual_tol:g}"
        )
    return np.array([profile.b**s * lp_norm(layer, params.p) for s, layer in enumerate(stack.layers)])


def block_norm(f: SampledField, params: BesovParams) -> float:
    """Dyadic block norm ``(sum_s (b^s ||f_{a^s}||_p)^theta)^{1/theta}``.

    ``theta = inf`` gives ``max_s b^s ||f_{a^s}||_p``.
    """
    return lq_sequence_norm(block_terms(f, params), params.theta)


# fraction of derivative energy tolerated in the upper half of the band
HIGH_BAND_TOL = 1e-6


def spectral_derivative(f: SampledField, axis: int, order: int) -> SampledField:
    """``order``-th partial derivative along ``axis`` via ``(i lam)^order``.

    Raises
    ------
    NumericalGuardError
        If more than ``1e-6`` of the differentiated spectrum's energy sits in
        the upper half of the frequency band along ``axis``; the field is
        then too rough for its derivative to be trusted on this grid.
    """
    spec = f.spec
    if not 0 <= axis < spec.d:
        raise DomainError(f"axis {axis} out of range for d = {spec.d}")
    if order < 0 or int(order) != order:
        raise DomainError(f"derivative order {order} must be a non-negative integer")
    if order == 0:
        return f
    lam = spec.frequency_axes()[axis]
    factor = (1j * lam) ** order
    if order % 2:
        # the lone -N/2 frequency has no conjugate partner
        factor[0] = 0.0
    shape = [1] * spec.d
    shape[axis] = -1
    coef = transform(f).coefficients * factor.reshape(shape)
    energy = np.abs(coef) ** 2
    total = float(energy.sum())
    if total > 0.0:
        high = (np.abs(lam) > spec.nyquist[axis] / 2).reshape(shape)
        frac = float(np.sum(energy * high)) / total
        if frac > HIGH_BAND_TOL:
            raise NumericalGuardError(
                f"derivative of order {order} along axis {axis} keeps {frac:.2e} of its energy "
                f"in the upper half band; refine the grid or smooth the field"
            )
    return transform(SpectralField(spec, coef), "inverse")


def _difference_norms(values: np.ndarray, axis: int, k: int, p: float, cell: float, m_max: int) -> np.ndarray:
    """``||Delta^k_{m h} f||_p`` for grid steps ``m = 1..m_max``.

    The field is extended by zero outside the box, and the domain is padded
    so that every point where the difference is non-zero is counted.
    """
    out = np.empty(m_max)
    n = values.shape[axis]
    weights = [(-1) ** (k - l) * comb(k, l) for l in range(k + 1)]
    for m in range(1, m_max + 1):
        pad = [(0, 0)] * values.ndim
        pad[axis] = (k * m, k * m)
        ext = np.pad(values, pad)
        diff = np.zeros_like(ext)
        for l, w in enumerate(weights):
            # f(x + l m h) on the padded grid
            diff += w * np.roll(ext, -l * m, axis=axis)
        out[m - 1] = _lp_of_array(diff, p, cell)
        if m >= n:
            # the shifted copies no longer overlap; the norm is constant from here on
            out[m:] = out[m - 1]
            break
    return out


def modulus_of_smoothness(f: SampledField, order: int, axis: int, t: float, p) -> float:
    """``sup_{0 < h <= t} ||Delta^order_{h e_axis} f||_p`` over grid steps ``h``.

    Only shifts by whole grid steps are used; values beyond the box are zero.
    ``t`` smaller than one grid step gives 0 with a :class:`ShiftWarning`.
    """
    p = check_exponent(p)
    if order < 1:
        raise DomainError(f"difference order {order} must be at least 1")
    if t < 0:
        raise DomainError(f"t = {t} must be non-negative")
    h = f.spec.spacing[axis]
    m_max = int(math.floor(t / h * (1 + 1e-12)))
    if m_max < 1:
        if t > 0:
            warnings.warn(f"t = {t:g} is below the grid step {h:g}; no shift is representable", ShiftWarning)
        return 0.0
    m_max = min(m_max, f.spec.samples[axis])
    norms = _difference_norms(f.values, axis, order, p, f.spec.cell_volume, m_max)
    return float(norms.max())


@dataclass(frozen=True)
class DefinitionNormDetails:
    value: float
    base_norm: float
    axis_terms: tuple[float, ...]
    lower_tails: tuple[float, ...]
    upper_tails: tuple[float, ...]


def definition_norm(
    f: SampledField,
    params: BesovParams,
    m_range: int = 12,
    per_octave: int = 4,
    return_details: bool = False,
):
    """Besov norm through moduli of smoothness of derivatives.

    ``||f||_p + sum_i (int_0^inf t^{-theta alpha_i - 1}
    omega_{1+[alpha_i]}(D_i^{rbar_i} f, t)_p^theta dt)^{1/theta}``.

    The integral runs over ``t = 2^{j/per_octave}``, ``|j| <= m_range *
    per_octave``, by the trapezoid rule in ``log t``. Steps below the grid
    spacing are dropped. Both discarded ends are filled in from their
    asymptotics: ``omega ~ t^k`` below the first resolved ``t``, and a
    saturated ``omega`` above the last. These tail terms are reported in the
    details. For ``theta = inf`` the integral becomes ``sup_t t^{-alpha_i}
    omega(t)``.
    """
    profile = params.profile
    spec = f.spec
    if spec.d > 2:
        raise DomainError("the modulus-of-smoothness norm is implemented for d <= 2")
    if profile.d != spec.d:
        raise DomainError(f"profile has d = {profile.d}, grid has d = {spec.d}")
    p, theta = params.p, params.theta
    base = lp_norm(f, p)

    exps = np.arange(-m_range * per_octave, m_range * per_octave + 1) / per_octave
    t_grid = 2.0**exps
    terms, lowers, uppers = [], [], []
    for i in range(spec.d):
        rbar = profile.integer_parts[i]
        alpha = profile.fractional_parts[i]
        k = 1 + int(math.floor(alpha))
        g = spectral_derivative(f, i, rbar)
        h = spec.spacing[i]
        t = t_grid[t_grid >= h * (1 - 1e-12)]
        m_of_t = np.minimum(np.floor(t / h * (1 + 1e-12)).astype(int), spec.samples[i])
        norms = _difference_norms(g.values, i, k, p, spec.cell_volume, int(m_of_t.max()))
        omega = np.maximum.accumulate(norms)[m_of_t - 1]

        if theta == math.inf:
            terms.append(float(np.max(t ** (-alpha) * omega)))
            lowers.append(0.0)
            uppers.append(0.0)
            continue
        log_t = np.log(t)
        integrand = t ** (-theta * alpha) * omega**theta
        core = float(np.sum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(log_t)))
        # omega(s) ~ omega(t0) (s/t0)^k for s < t0
        low = float(omega[0] ** theta * t[0] ** (-theta * alpha) / (theta * (k - alpha)))
        # omega(s) ~ omega(t1) for s > t1
        up = float(omega[-1] ** theta * t[-1] ** (-theta * alpha) / (theta * alpha))
        terms.append((core + low + up) ** (1.0 / theta))
        lowers.append(low)
        uppers.append(up)

    value = base + float(sum(terms))
    if return_details:
        return DefinitionNormDetails(value, base, tuple(terms), tuple(lowers), tuple(uppers))
    return value
