"""Frequency boxes, sharp Fourier sections and the dyadic a-layering.

Boxes are open: a grid frequency lying exactly on ``|lam_j| = sigma_j`` is
outside the box. The sharp 0/1 masks therefore partition the frequency grid
and layers add back to the original field up to FFT round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from anisobesov.anisotropy import AnisotropyProfile
from anisobesov.exceptions import DomainError, NyquistError
from anisobesov.field import GridSpec, SampledField, SpectralField, transform

# relative slack when comparing a box edge with the grid's Nyquist frequency
_NYQ_RTOL = 1e-12


@dataclass(frozen=True)
class FrequencyBox:
    """Open box ``|lam_j| < sigma_j`` in frequency space."""

    bounds: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in np.atleast_1d(self.bounds))
        for j, s in enumerate(b):
            if not s > 0:
                raise DomainError(f"box bound sigma[{j}] = {s} must be positive")
        object.__setattr__(self, "bounds", b)

    @classmethod
    def dyadic(cls, profile: AnisotropyProfile, s: float) -> "FrequencyBox":
        """The box ``D_{a^s}`` of the layering."""
        return cls(tuple(profile.box(s)))


def _check_nyquist(bounds: Sequence[float], spec: GridSpec) -> None:
    if len(bounds) != spec.d:
        raise DomainError(f"box has {len(bounds)} axes, grid has {spec.d}")
    nyq = spec.nyquist
    for j, (s, lam) in enumerate(zip(bounds, nyq)):
        if s > lam * (1 + _NYQ_RTOL):
            raise NyquistError(
                f"box edge {s:.6g} on axis {j} exceeds the grid Nyquist frequency {lam:.6g}; "
                f"use a finer grid (more samples or a smaller half_width)"
            )


def box_mask(bounds: Sequence[float], spec: GridSpec) -> np.ndarray:
    """Boolean indicator of the open box on the frequency grid of ``spec``."""
    _check_nyquist(bounds, spec)
    mask = np.ones(spec.shape, dtype=bool)
    for j, (lam, s) in enumerate(zip(spec.frequency_axes(), bounds)):
        shape = [1] * spec.d
        shape[j] = -1
        mask = mask & (np.abs(lam) < s).reshape(shape)
    return mask


def shell_masks(profile: AnisotropyProfile, s: int, spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Indicators of ``D_{a^s}`` and of the shell ``D_{a^s} minus D_{a^{s-1}}``.

    For ``s = 0`` the shell is the unit box itself.

    Raises
    ------
    NyquistError
        If ``a_j**s`` exceeds the Nyquist frequency on some axis.
    """
    if s < 0 or int(s) != s:
        raise DomainError(f"layer index s = {s} must be a non-negative integer")
    if profile.d != spec.d:
        raise DomainError(f"profile has d = {profile.d}, grid has d = {spec.d}")
    inner = box_mask(profile.box(s), spec)
    if s == 0:
        return inner, inner.copy()
    return inner, inner & ~box_mask(profile.box(s - 1), spec)


def fourier_section(f: SampledField, box: FrequencyBox) -> SampledField:
    """Keep only the frequencies of ``f`` inside ``box``."""
    mask = box_mask(box.bounds, f.spec)
    spectrum = transform(f)
    return transform(SpectralField(f.spec, spectrum.coefficients * mask), "inverse")


def energy_outside(f: SampledField, bounds: Sequence[float]) -> float:
    """Fraction of the spectral energy of ``f`` lying outside the open box."""
    coef = transform(f).coefficients
    mask = box_mask(bounds, f.spec)
    total = float(np.sum(np.abs(coef) ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sum(np.abs(coef[~mask]) ** 2)) / total


@dataclass(frozen=True, eq=False)
class LayerStack:
    """Shell components ``f_{a^s}``, ``s = 0..S_max``, and what lies beyond."""

    profile: AnisotropyProfile
    layers: tuple[SampledField, ...]
    residual: SampledField

    @property
    def s_max(self) -> int:
        return len(self.layers) - 1

    def reconstruct(self) -> SampledField:
        total = self.residual.values.copy()
        for layer in self.layers:
            total = total + layer.values
        return SampledField(self.residual.spec, total)

    def manifest(self) -> dict:
        return {"profile": self.profile.to_dict(), "S_max": self.s_max}


def layer_decompose(f: SampledField, profile: AnisotropyProfile, s_max: int) -> LayerStack:
    """Split ``f`` into its a-layers up to ``s_max`` plus a residual.

    A single forward transform is shared by every layer; each layer is the
    inverse transform of the coefficients restricted to its shell.
    """
    if s_max < 0 or int(s_max) != s_max:
        raise DomainError(f"S_max = {s_max} must be a non-negative integer")
    spec = f.spec
    coef = transform(f).coefficients
    layers = []
    for s in range(int(s_max) + 1):
        inner, shell = shell_masks(profile, s, spec)
        layers.append(transform(SpectralField(spec, coef * shell), "inverse"))
    residual = transform(SpectralField(spec, coef * ~inner), "inverse")
    return LayerStack(profile, tuple(layers), residual)


def max_layer(profile: AnisotropyProfile, spec: GridSpec) -> int:
    """Largest ``s`` with ``a_j**s`` inside the Nyquist range on every axis."""
    s = 0
    while np.all(profile.box(s + 1) <= spec.nyquist * (1 + _NYQ_RTOL)):
        s += 1
    return s
