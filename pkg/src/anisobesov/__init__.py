"""Anisotropic dyadic Fourier layering, Nikol'skii-Besov norms and
band-limited approximation of functions sampled on R^d."""

from anisobesov.anisotropy import AnisotropyProfile, harmonic_exponent, make_profile
from anisobesov.field import GridSpec, SampledField, SpectralField, lp_norm, sample, transform
from anisobesov.spectral import (
    FrequencyBox,
    LayerStack,
    fourier_section,
    layer_decompose,
    shell_masks,
)
from anisobesov.besov import (
    BesovParams,
    block_norm,
    definition_norm,
    modulus_of_smoothness,
    spectral_derivative,
)
from anisobesov.extremal import (
    SincProductSpec,
    analytic_sinc_norm,
    build_F_k,
    build_g1,
    F_k_norm_bounds,
    sinc_lp_constant,
)
from anisobesov.approx import (
    RateReport,
    nikolskii_check,
    rate_scan,
    theoretical_rate,
    truncation_error,
)
from anisobesov.estimators import FourierSectionApproximator, LayerDecomposer

__version__ = "0.1.0"

__all__ = [
    "AnisotropyProfile",
    "BesovParams",
    "F_k_norm_bounds",
    "FourierSectionApproximator",
    "FrequencyBox",
    "GridSpec",
    "LayerDecomposer",
    "LayerStack",
    "RateReport",
    "SampledField",
    "SincProductSpec",
    "SpectralField",
    "analytic_sinc_norm",
    "block_norm",
    "build_F_k",
    "build_g1",
    "definition_norm",
    "fourier_section",
    "harmonic_exponent",
    "layer_decompose",
    "lp_norm",
    "make_profile",
    "modulus_of_smoothness",
    "nikolskii_check",
    "rate_scan",
    "sample",
    "shell_masks",
    "sinc_lp_constant",
    "spectral_derivative",
    "theoretical_rate",
    "transform",
    "truncation_error",
]
