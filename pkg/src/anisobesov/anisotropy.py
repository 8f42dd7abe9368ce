"""Smoothness vectors and the dyadic parameters derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from anisobesov.exceptions import DomainError


def _as_smoothness(r: Sequence[float] | float) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(r, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"smoothness vector must be a non-empty 1-d sequence, got {r!r}")
    for j, rj in enumerate(arr):
        if not np.isfinite(rj) or rj <= 0:
            raise DomainError(f"smoothness component r[{j}] = {rj} must be a positive finite number")
    return arr


def harmonic_exponent(r: Sequence[float] | float) -> float:
    """Harmonic mean ``(d^{-1} sum_j 1/r_j)^{-1}`` of a smoothness vector.

    Raises
    ------
    DomainError
        If any component is not positive; the message names the index.
    """
    arr = _as_smoothness(r)
    return float(arr.size / np.sum(1.0 / arr))


@dataclass(frozen=True)
class AnisotropyProfile:
    """Immutable bundle of a smoothness vector and its derived quantities.

    Attributes
    ----------
    r : tuple of float
        Smoothness orders, one per axis.
    g : float
        Harmonic exponent of ``r``.
    a : tuple of float
        Layer bases ``a_j = 2**(g / r_j)``; the boxes of the layering are
        ``|lambda_j| < a_j**s``.
    b : float
        Weight base ``2**g``; satisfies ``a_j**r_j == b`` for every axis.
    integer_parts, fractional_parts : tuple
        Split ``r_j = rbar_j + alpha_j`` with integer ``rbar_j`` and
        ``alpha_j`` in ``(0, 1]``. Integer ``r_j`` gives ``alpha_j = 1``.
    """

    r: tuple[float, ...]
    g: float = field(init=False)
    a: tuple[float, ...] = field(init=False)
    b: float = field(init=False)
    integer_parts: tuple[int, ...] = field(init=False)
    fractional_parts: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        arr = _as_smoothness(self.r)
        g = harmonic_exponent(arr)
        rbar = tuple(int(math.ceil(rj)) - 1 for rj in arr)
        alpha = tuple(float(rj - rb) for rj, rb in zip(arr, rbar))
        object.__setattr__(self, "r", tuple(float(x) for x in arr))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "a", tuple(float(2.0 ** (g / rj)) for rj in arr))
        object.__setattr__(self, "b", float(2.0**g))
        object.__setattr__(self, "integer_parts", rbar)
        object.__setattr__(self, "fractional_parts", alpha)

    @property
    def d(self) -> int:
        return len(self.r)

    def box(self, s: float) -> np.ndarray:
        """Half-widths ``a_j**s`` of the frequency box of level ``s``."""
        return np.asarray(self.a) ** s

    def to_dict(self) -> dict:
        return {"r": list(self.r), "g": self.g, "a": list(self.a), "b": self.b}


def make_profile(r: Sequence[float] | float) -> AnisotropyProfile:
    """Build an :class:`AnisotropyProfile` from a smoothness vector."""
    return AnisotropyProfile(tuple(_as_smoothness(r)))
