"""Sampled functions on a truncated box of R^d and their spectra.

Sign and scaling follow the unitary continuous transform

    F f(lam) = (2 pi)^{-d/2} int f(x) exp(-i (lam, x)) dx,

discretized with the rectangle rule on the grid ``x_j = -L_j + m h_j`` and
evaluated at ``lam_j = k pi / L_j`` for ``k = -N_j/2 .. N_j/2 - 1``. With
these choices the forward/inverse pair is exactly inverse on the grid and
Parseval holds with the measures ``prod h_j`` and ``prod dlam_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from anisobesov.exceptions import DomainError, SpecMismatchError

MAX_DIM = 3


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid on ``[-L_1, L_1) x ... x [-L_d, L_d)``."""

    half_width: tuple[float, ...]
    samples: tuple[int, ...]

    def __post_init__(self):
        hw = tuple(float(x) for x in np.atleast_1d(self.half_width))
        ns = tuple(int(n) for n in np.atleast_1d(self.samples))
        if len(hw) != len(ns):
            raise DomainError(f"half_width has {len(hw)} entries but samples has {len(ns)}")
        if not 1 <= len(hw) <= MAX_DIM:
            raise DomainError(f"dimension must be between 1 and {MAX_DIM}, got {len(hw)}")
        for j, (L, n) in enumerate(zip(hw, ns)):
            if not (np.isfinite(L) and L > 0):
                raise DomainError(f"half_width[{j}] = {L} must be positive")
            if n <= 0 or n % 2:
                raise DomainError(f"samples[{j}] = {n} must be a positive even integer")
        object.__setattr__(self, "half_width", hw)
        object.__setattr__(self, "samples", ns)

    @classmethod
    def uniform(cls, d: int, half_width: float, samples: int) -> "GridSpec":
        return cls((half_width,) * d, (samples,) * d)

    @property
    def d(self) -> int:
        return len(self.samples)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.samples

    @property
    def spacing(self) -> np.ndarray:
        return 2.0 * np.asarray(self.half_width) / np.asarray(self.samples)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def frequency_spacing(self) -> np.ndarray:
        return np.pi / np.asarray(self.half_width)

    @property
    def nyquist(self) -> np.ndarray:
        """Largest representable frequency ``pi / h_j`` per axis."""
        return np.pi / self.spacing

    def axes(self) -> list[np.ndarray]:
        return [-L + h * np.arange(n) for L, h, n in zip(self.half_width, self.spacing, self.samples)]

    def frequency_axes(self) -> list[np.ndarray]:
        return [dl * np.arange(-n // 2, n // 2) for dl, n in zip(self.frequency_spacing, self.samples)]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(), indexing="ij")

    def frequency_mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.frequency_axes(), indexing="ij")

    def to_dict(self) -> dict:
        return {"d": self.d, "half_width": list(self.half_width), "samples": list(self.samples)}

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        spec = cls(tuple(data["half_width"]), tuple(data["samples"]))
        if "d" in data and int(data["d"]) != spec.d:
            raise DomainError(f"header d = {data['d']} disagrees with {spec.d} axes")
        return spec


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=complex)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class SampledField:
    """Complex samples of a function on the points of ``spec``."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != self.spec.shape:
            raise SpecMismatchError(f"values have shape {vals.shape}, grid expects {self.spec.shape}")
        object.__setattr__(self, "values", vals)

    def _check(self, other: "SampledField") -> None:
        if not isinstance(other, SampledField) or other.spec != self.spec:
            raise SpecMismatchError("fields live on different grids")

    def __add__(self, other: "SampledField") -> "SampledField":
        self._check(other)
        return SampledField(self.spec, self.values + other.values)

    def __sub__(self, other: "SampledField") -> "SampledField":
        self._check(other)
        return SampledField(self.spec, self.values - other.values)

    def __mul__(self, scalar: complex) -> "SampledField":
        return SampledField(self.spec, scalar * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "SampledField":
        return SampledField(self.spec, -self.values)

    @property
    def real(self) -> np.ndarray:
        return self.values.real


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Approximate continuous unitary transform on the frequency grid of
    ``spec``, stored in ascending frequency order along every axis."""

    spec: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        coef = _frozen(self.coefficients)
        if coef.shape != self.spec.shape:
            raise SpecMismatchError(f"coefficients have shape {coef.shape}, grid expects {self.spec.shape}")
        object.__setattr__(self, "coefficients", coef)

    def energy(self) -> float:
        """``sum |coef|^2 * prod dlam_j`` (equals the squared L2 norm)."""
        return float(np.sum(np.abs(self.coefficients) ** 2) * np.prod(self.spec.frequency_spacing))


def sample(f: Callable[..., np.ndarray], spec: GridSpec) -> SampledField:
    """Evaluate ``f(x_1, ..., x_d)`` on the grid (ij-indexed mesh arrays)."""
    mesh = spec.mesh()
    with np.errstate(all="ignore"):
        values = np.broadcast_to(np.asarray(f(*mesh), dtype=complex), spec.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        point = tuple(float(m[idx]) for m in mesh)
        raise DomainError(f"non-finite sample at grid index {idx}, x = {point}")
    return SampledField(spec, values)


def _alternating_signs(spec: GridSpec) -> np.ndarray:
    # exp(i lam_k L) = (-1)^k accounts for the grid starting at -L.
    signs = [(-1.0) ** np.arange(-n // 2, n // 2) for n in spec.samples]
    out = signs[0]
    for s in signs[1:]:
        out = np.multiply.outer(out, s)
    return out


def transform(field, direction: str = "forward"):
    """Unitary discrete Fourier transform between grid and frequency samples.

    ``forward`` maps a :class:`SampledField` to a :class:`SpectralField` and
    ``inverse`` goes back. Measure factors ``h_j / sqrt(2 pi)`` and
    ``dlam_j / sqrt(2 pi)`` are included, so coefficients approximate the
    continuous transform of the sampled function.
    """
    if direction == "forward":
        if not isinstance(field, SampledField):
            raise SpecMismatchError("forward transform expects a SampledField")
        spec = field.spec
        scale = np.prod(spec.spacing / math.sqrt(2 * math.pi))
        coef = np.fft.fftshift(np.fft.fftn(field.values)) * _alternating_signs(spec) * scale
        return SpectralField(spec, coef)
    if direction == "inverse":
        if not isinstance(field, SpectralField):
            raise SpecMismatchError("inverse transform expects a SpectralField")
        spec = field.spec
        scale = np.prod(spec.frequency_spacing * np.asarray(spec.samples) / math.sqrt(2 * math.pi))
        vals = np.fft.ifftn(np.fft.ifftshift(field.coefficients * _alternating_signs(spec))) * scale
        return SampledField(spec, vals)
    raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def check_exponent(p, *, name: str = "p") -> float:
    """Coerce an integrability exponent and require ``p > 1`` (``inf`` allowed)."""
    if isinstance(p, str):
        p = p.strip().lower()
        p = math.inf if p in {"inf", "infinity", "oo"} else float(p)
    p = float(p)
    if math.isnan(p) or p <= 1:
        raise DomainError(f"{name} = {p} is not allowed; exponents must satisfy {name} > 1")
    return p


def _lp_of_array(values: np.ndarray, p: float, cell: float) -> float:
    mag = np.abs(values)
    peak = float(mag.max()) if mag.size else 0.0
    if p == math.inf or peak == 0.0:
        return peak
    # scale by the peak so |v|^p neither under- nor overflows
    return peak * float(np.sum((mag / peak) ** p) * cell) ** (1.0 / p)


def lp_norm(field: SampledField, p) -> float:
    """Rectangle-rule ``L_p`` norm over the grid box; ``p = inf`` is the max."""
    p = check_exponent(p)
    return _lp_of_array(field.values, p, field.spec.cell_volume)


def tail_estimate(field: SampledField, p) -> float:
    """Rough size of the ``L_p`` mass discarded by truncating to the box.

    Beyond each face the field is modelled as ``f(face) * L_j / |x_j|``,
    the decay of sinc-type test functions. Using
    ``int_L^inf (L/t)^p dt = L/(p-1)`` the discarded ``p``-th power is
    ``L_j/(p-1)`` times the face integral of ``|f|^p``. Zero for ``p = inf``.
    """
    p = check_exponent(p)
    if p == math.inf:
        return 0.0
    spec = field.spec
    mag = np.abs(field.values)
    total = 0.0
    for j in range(spec.d):
        face_cell = float(np.prod([spec.spacing[i] for i in range(spec.d) if i != j]))
        faces = np.sum(np.take(mag, 0, axis=j) ** p) + np.sum(np.take(mag, -1, axis=j) ** p)
        total += float(faces) * face_cell * spec.half_width[j] / (p - 1.0)
    return total ** (1.0 / p)
