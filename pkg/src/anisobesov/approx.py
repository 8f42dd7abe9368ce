"""Approximation by Fourier sections, rate estimation and Nikol'skii checks."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from anisobesov.anisotropy import AnisotropyProfile
from anisobesov.besov import BesovParams, block_norm
from anisobesov.exceptions import DomainError, NumericalGuardError
from anisobesov.field import SampledField, check_exponent, lp_norm, tail_estimate
from anisobesov.spectral import FrequencyBox, energy_outside, fourier_section

logger = logging.getLogger(__name__)

THREADS_ENV = "ANISO_BESOV_THREADS"

# class membership slack for rate-scan families
MEMBERSHIP_TOL = 1e-6
# an error must exceed this multiple of the round-off level to be fitted
NOISE_FLOOR_FACTOR = 1e3


def _finite_exponent(q, name: str) -> float:
    q = check_exponent(q, name=name)
    if q == math.inf:
        raise DomainError(f"{name} must be finite here; sections and best approximations agree in order only for {name} < inf")
    return q


def truncation_error(f: SampledField, profile: AnisotropyProfile, n: int, q) -> float:
    """``||f - S_{a^(n-1)} f||_q``, the error of the ``a^n`` Fourier section."""
    q = _finite_exponent(q, "q")
    if n < 1 or int(n) != n:
        raise DomainError(f"n = {n} must be a positive integer")
    section = fourier_section(f, FrequencyBox.dyadic(profile, n - 1))
    return lp_norm(f - section, q)


def theoretical_rate(profile: AnisotropyProfile, p, q) -> float:
    """Decay exponent ``g(r) - d (1/p - 1/q)`` of the class approximation error.

    A non-positive result means the class is not compactly approximated at
    this ``(p, q)``; a warning is logged and the value is returned as is.
    """
    p = _finite_exponent(p, "p")
    q = _finite_exponent(q, "q")
    if p > q:
        raise DomainError(f"need p <= q, got p = {p}, q = {q}")
    rate = profile.g - profile.d * (1.0 / p - 1.0 / q)
    if rate <= 0:
        logger.warning("g(r) = %.6g does not exceed d(1/p - 1/q); rate %.6g is infeasible", profile.g, rate)
    return rate


def fit_log2_slope(ns: Sequence[float], errors: Sequence[float]) -> float:
    """Unweighted least-squares slope of ``log2(error)`` against ``n``."""
    ns = np.asarray(ns, dtype=float)
    if ns.size < 3:
        raise NumericalGuardError(f"slope fit needs at least 3 points, got {ns.size}")
    slope, _ = np.polyfit(ns, np.log2(np.asarray(errors, dtype=float)), 1)
    return float(slope)


@dataclass
class RateReport:
    rows: list[tuple[int, float]]
    fitted_slope: float
    theoretical_exponent: float
    p: float
    q: float
    r: tuple[float, ...]
    grid: dict = field(default_factory=dict)
    discarded: list[int] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n,error,log2_error"]
        for n, err in self.rows:
            lines.append(f"{n},{err:.17g},{math.log2(err):.17g}")
        return "\n".join(lines) + "\n"

    def sidecar(self) -> dict:
        return {
            "fitted_slope": self.fitted_slope,
            "theoretical_exponent": self.theoretical_exponent,
            "p": self.p,
            "q": self.q,
            "r": list(self.r),
            "grid": self.grid,
            "discarded": list(self.discarded),
        }


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None


def rate_scan(
    family: Callable[[int], SampledField],
    profile: AnisotropyProfile,
    p,
    q,
    n_range: Iterable[int],
    check_membership: bool = True,
) -> RateReport:
    """Tabulate ``truncation_error(family(n), n, q)`` and fit its log2 slope.

    Every member must lie in the unit ball of the ``theta = 1`` block norm,
    the smallest of the classes. An error is left out of the fit when it is
    below ``1e3`` times the round-off level or below the estimated mass the
    box truncation discards from the error field itself.

    Raises
    ------
    DomainError
        On a membership violation.
    NumericalGuardError
        If fewer than three points survive the noise-floor guard.
    """
    p = _finite_exponent(p, "p")
    q = _finite_exponent(q, "q")
    ns = [int(n) for n in n_range]
    if len(ns) < 3:
        raise NumericalGuardError(f"a rate scan needs at least 3 values of n, got {len(ns)}")

    def row(n: int):
        f = family(n)
        if check_membership:
            norm = block_norm(f, BesovParams(profile, p, 1.0))
            if norm > 1 + MEMBERSHIP_TOL:
                raise DomainError(f"family member n = {n} has block norm {norm:.8g} > 1")
        residue = f - fourier_section(f, FrequencyBox.dyadic(profile, n - 1))
        err = lp_norm(residue, q)
        roundoff = np.finfo(float).eps * lp_norm(f, q) * math.sqrt(f.values.size)
        floor = max(NOISE_FLOOR_FACTOR * roundoff, tail_estimate(residue, q))
        return n, err, floor, f.spec

    workers = min(thread_count(), len(ns))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(row, ns))
    else:
        results = [row(n) for n in ns]

    kept, discarded = [], []
    for n, err, floor, _ in results:
        if err > floor:
            kept.append((n, err))
        else:
            logger.info("n = %d dropped: error %.3g is within the noise floor %.3g", n, err, floor)
            discarded.append(n)
    if len(kept) < 3:
        raise NumericalGuardError(
            f"only {len(kept)} of {len(ns)} errors rise above the noise floor; refine the grid or enlarge the box"
        )
    slope = fit_log2_slope([n for n, _ in kept], [e for _, e in kept])
    grid = results[0][3].to_dict()
    return RateReport(
        rows=kept,
        fitted_slope=slope,
        theoretical_exponent=theoretical_rate(profile, p, q),
        p=p,
        q=q,
        r=profile.r,
        grid=grid,
        discarded=discarded,
    )


# spectral energy fraction allowed outside the declared band
BAND_LIMIT_TOL = 1e-8


@dataclass(frozen=True)
class NikolskiiResult:
    lhs: float
    rhs: float
    ratio: float
    passed: bool


def nikolskii_check(g: SampledField, nu: Sequence[float], p1, p2) -> NikolskiiResult:
    """Compare ``||g||_{p2}`` with ``2^d (prod nu_j)^{1/p1 - 1/p2} ||g||_{p1}``.

    ``g`` must be band-limited to the box ``|lam_j| <= nu_j``; this is
    checked spectrally before the norms are compared.
    """
    p1 = check_exponent(p1, name="p1")
    p2 = check_exponent(p2, name="p2")
    if p1 > p2:
        raise DomainError(f"need p1 <= p2, got p1 = {p1}, p2 = {p2}")
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if nu.size != g.spec.d or np.any(nu <= 0):
        raise DomainError(f"nu must hold {g.spec.d} positive degrees, got {nu.tolist()}")
    # closed box: nudge the open-box mask outward by a hair
    outside = energy_outside(g, np.minimum(nu * (1 + 1e-12), g.spec.nyquist))
    if outside > BAND_LIMIT_TOL:
        raise DomainError(f"field is not band-limited to nu = {nu.tolist()}: {outside:.2e} of its energy lies outside")
    d = g.spec.d
    inv = (1.0 / p1) - (0.0 if p2 == math.inf else 1.0 / p2)
    lhs = lp_norm(g, p2)
    rhs = 2.0**d * float(np.prod(nu)) ** inv * lp_norm(g, p1)
    ratio = lhs / rhs if rhs > 0 else 0.0
    return NikolskiiResult(lhs, rhs, ratio, bool(lhs <= rhs * (1 + 1e-6)))


def random_band_limited(spec, nu: Sequence[float], rng: np.random.Generator, kind: str | None = None) -> SampledField:
    """Random real field whose spectrum lies in the open box ``|lam_j| < nu_j``.

    ``kind="noise"`` draws independent complex Gaussian coefficients on every
    grid frequency of the box; ``kind="bump"`` draws a smooth random envelope
    shifted to a random centre, giving a concentrated peak that stresses the
    ``p2 = inf`` side of the inequality. ``None`` picks one at random.
    """
    from anisobesov.field import SpectralField, transform
    from anisobesov.spectral import box_mask

    if kind is None:
        kind = "noise" if rng.random() < 0.5 else "bump"
    mask = box_mask(nu, spec)
    shape = spec.shape
    if kind == "noise":
        coef = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    elif kind == "bump":
        lam = spec.frequency_mesh()
        centre = [rng.uniform(-0.5, 0.5) * L for L in spec.half_width]
        width = [rng.uniform(0.2, 1.0) * v for v in nu]
        envelope = np.ones(shape)
        phase = np.zeros(shape)
        for lj, cj, wj in zip(lam, centre, width):
            envelope = envelope * np.exp(-0.5 * (lj / wj) ** 2)
            phase = phase - lj * cj
        coef = envelope * np.exp(1j * phase) * (1 + 0.3 * rng.standard_normal(shape))
    else:
        raise DomainError(f"unknown random field kind {kind!r}")
    field = transform(SpectralField(spec, coef * mask), "inverse")
    # the real part keeps the spectrum inside the symmetric box
    return SampledField(spec, field.values.real)
