"""Sinc-product entire functions and analytic bounds on their norms.

``sqrt(2/pi) sin(nu x) / x`` is the inverse unitary transform of the
indicator of ``|lam| < nu``; products of such factors therefore have spectra
equal to box indicators, and differences of two nested products have
spectra equal to shell indicators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from anisobesov.anisotropy import AnisotropyProfile
from anisobesov.exceptions import DomainError
from anisobesov.field import GridSpec, SampledField, SpectralField, check_exponent, transform
from anisobesov.spectral import shell_masks

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

# below |nu x| < this the Taylor form of sin(nu x)/x is used
_TAYLOR_SWITCH = 1e-4


@dataclass(frozen=True)
class SincProductSpec:
    """``amplitude * prod_j sin(nu_j x_j) / x_j``."""

    degrees: tuple[float, ...]
    amplitude: float | None = None

    def __post_init__(self):
        nu = tuple(float(v) for v in np.atleast_1d(self.degrees))
        for j, v in enumerate(nu):
            if not v > 0:
                raise DomainError(f"degree nu[{j}] = {v} must be positive")
        object.__setattr__(self, "degrees", nu)
        if self.amplitude is None:
            object.__setattr__(self, "amplitude", SQRT_2_OVER_PI ** len(nu))

    @property
    def d(self) -> int:
        return len(self.degrees)


def sinc_factor(x: np.ndarray, nu: float) -> np.ndarray:
    """``sin(nu x) / x`` with a Taylor branch near the removable singularity."""
    x = np.asarray(x, dtype=float)
    u = nu * x
    small = np.abs(u) < _TAYLOR_SWITCH
    out = np.empty_like(x)
    safe = ~small
    out[safe] = np.sin(u[safe]) / x[safe]
    u2 = u[small] ** 2
    out[small] = nu * (1.0 - u2 / 6.0 + u2 * u2 / 120.0)
    return out


def sinc_product(spec: SincProductSpec, grid: GridSpec) -> SampledField:
    if spec.d != grid.d:
        raise DomainError(f"sinc product has d = {spec.d}, grid has d = {grid.d}")
    factors = [sinc_factor(x, nu) for x, nu in zip(grid.axes(), spec.degrees)]
    values = factors[0]
    for fac in factors[1:]:
        values = np.multiply.outer(values, fac)
    return SampledField(grid, spec.amplitude * values)


# number of half-periods integrated explicitly before the asymptotic tail
_SINC_PERIODS = 256


@lru_cache(maxsize=64)
def _sinc_lp_constant(p: float) -> float:
    def piece(k: int) -> float:
        # one half-period [k pi, (k+1) pi]; t = k pi + u keeps |sin u|^p exact
        def integrand(u):
            t = k * math.pi + u
            return 1.0 if t == 0.0 else abs(math.sin(u) / t) ** p

        val, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-13, limit=200)
        return val

    head = math.fsum(piece(k) for k in range(_SINC_PERIODS))
    return 2.0 * (head + _sinc_tail(p, _SINC_PERIODS * math.pi))


def _sinc_tail(p: float, T: float) -> float:
    """``int_T^inf |sin t|^p t^{-p} dt`` for ``T`` a multiple of ``pi``.

    Writing ``|sin t|^p = m0 + sum_n c_n cos(2nt)`` and integrating the
    oscillating terms by parts twice gives

        m0 T^{1-p}/(p-1) + (p/4) (sum_n c_n / n^2) T^{-p-1} + O(T^{-p-3}),

    where ``sum_n c_n / n^2 = (2/pi) int_0^pi (s - pi/2)^2 (|sin s|^p - m0) ds``.
    """
    m0 = math.gamma((p + 1) / 2) / (math.sqrt(math.pi) * math.gamma(p / 2 + 1))
    moment, _ = integrate.quad(
        lambda s: (s - math.pi / 2) ** 2 * (abs(math.sin(s)) ** p - m0), 0.0, math.pi, epsabs=1e-15, limit=200
    )
    s2 = 2.0 / math.pi * moment
    return m0 * T ** (1.0 - p) / (p - 1.0) + 0.25 * p * s2 * T ** (-p - 1.0)


def tail_bound(p: float, T: float) -> float:
    """Crude bound ``int_T^inf t^{-p} dt`` on one tail of ``|sin t / t|^p``."""
    return T ** (1.0 - p) / (p - 1.0)


def sinc_lp_constant(p) -> float:
    """``c_p = int_R |sin t / t|^p dt`` for ``p > 1``.

    The first few hundred half-periods are integrated adaptively; beyond
    them an asymptotic tail with error ``O(T^{-p-3})`` is added. The crude
    bound ``T^{1-p}/(p-1)`` alone would need ``T ~ 1e16`` near ``p = 1.5``.

    Raises
    ------
    DomainError
        For ``p <= 1`` where the integral diverges, or ``p = inf``.
    """
    p = check_exponent(p)
    if p == math.inf:
        raise DomainError("c_p is defined for finite p only")
    return _sinc_lp_constant(p)


def analytic_sinc_norm(spec: SincProductSpec, p) -> float:
    """Exact ``L_p(R^d)`` norm of a sinc product.

    Substituting ``t = nu_j x_j`` axis by axis gives
    ``|amplitude| * prod_j (nu_j^{p-1} c_p)^{1/p}``.
    """
    p = check_exponent(p)
    if p == math.inf:
        # every factor peaks at x = 0 with value nu_j
        return abs(spec.amplitude) * float(np.prod(spec.degrees))
    cp = sinc_lp_constant(p)
    return abs(spec.amplitude) * float(np.prod([(nu ** (p - 1.0) * cp) ** (1.0 / p) for nu in spec.degrees]))


def conjugate(p: float) -> float:
    """Conjugate exponent ``p'`` with ``1/p + 1/p' = 1``."""
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


def _sinc_pair(profile: AnisotropyProfile, k: int) -> tuple[SincProductSpec, SincProductSpec | None]:
    if k < 0 or int(k) != k:
        raise DomainError(f"k = {k} must be a non-negative integer")
    outer = SincProductSpec(tuple(profile.box(k)))
    inner = SincProductSpec(tuple(profile.box(k - 1))) if k >= 1 else None
    return outer, inner


def build_F_k(profile: AnisotropyProfile, k: int, spec: GridSpec, band_limit: bool = True) -> SampledField:
    """Sample the extremal function whose spectrum is the shell indicator.

    ``F_0`` is the sinc product of degree 1 on every axis. For ``k >= 1``,
    ``F_k`` is the product of degrees ``a_j**k`` minus the product of degrees
    ``a_j**(k-1)``, so its transform is 1 on ``D_{a^k}`` minus ``D_{a^(k-1)}``.

    Truncating a sinc to a finite box smears its spectrum slightly across
    the shell edges. With ``band_limit`` (the default) the samples are
    projected back onto the shell ``Gamma_{a^k}`` of the grid, which makes
    the layering of the result exact. ``band_limit=False`` returns the raw
    point samples.

    Raises
    ------
    NyquistError
        If ``a_j**k`` is not representable on the grid.
    """
    _, shell = shell_masks(profile, k, spec)
    outer, inner = _sinc_pair(profile, k)
    values = sinc_product(outer, spec).values
    if inner is not None:
        values = values - sinc_product(inner, spec).values
    field = SampledField(spec, values)
    if not band_limit:
        return field
    coef = transform(field).coefficients * shell
    projected = transform(SpectralField(spec, coef), "inverse")
    # the shell mask is symmetric, so the projection of a real field is real
    return SampledField(spec, projected.values.real)


def F_k_norm_bounds(profile: AnisotropyProfile, k: int, p) -> tuple[float, float]:
    """Triangle-inequality bounds ``(lower, upper)`` on ``||F_k||_p``.

    ``upper = A_k + A_{k-1}`` and ``lower = |A_k - A_{k-1}|`` where ``A_k``
    is the analytic norm of the sinc product of degrees ``a**k``. Both scale
    like ``2**(d k / p')`` because ``prod_j a_j = 2**d``.
    """
    if k < 1:
        raise DomainError(f"bounds are defined for k >= 1, got k = {k}")
    outer, inner = _sinc_pair(profile, k)
    A = analytic_sinc_norm(outer, p)
    B = analytic_sinc_norm(inner, p)
    return abs(A - B), A + B


def g1_scale(profile: AnisotropyProfile, n: int, p) -> float:
    """``2**(-n (g + d/p'))``, the order of the lower-bound witness scale."""
    p = check_exponent(p)
    return 2.0 ** (-n * (profile.g + profile.d / conjugate(p)))


def build_g1(
    profile: AnisotropyProfile,
    n: int,
    p,
    spec: GridSpec,
    s_max: int | None = None,
    return_constant: bool = False,
):
    """Lower-bound witness ``C_1 2^{-n(g + d/p')} F_n`` normalized into the class.

    ``C_1`` is computed so that the ``theta = 1`` block norm of the result is
    exactly one at the working resolution. With ``return_constant`` the pair
    ``(field, C_1)`` is returned.
    """
    from anisobesov.besov import BesovParams, block_norm

    if n < 1:
        raise DomainError(f"n = {n} must be at least 1")
    F = build_F_k(profile, n, spec)
    params = BesovParams(profile, p, 1.0, s_max)
    scale = g1_scale(profile, n, p)
    c1 = 1.0 / (scale * block_norm(F, params))
    g1 = (c1 * scale) * F
    return (g1, c1) if return_constant else g1
