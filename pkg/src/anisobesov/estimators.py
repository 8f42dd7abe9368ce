"""scikit-learn style wrappers around the layering and section operators.

The estimators take :class:`~anisobesov.field.SampledField` inputs rather
than feature matrices. ``fit`` records the grid so later calls can be
checked against it, and ``get_params``/``set_params``/``clone`` work as
usual, so the operators can sit inside parameter searches.
"""

from __future__ import annotations

import math

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from anisobesov.anisotropy import make_profile
from anisobesov.exceptions import DomainError, SpecMismatchError
from anisobesov.field import SampledField, check_exponent, lp_norm
from anisobesov.spectral import FrequencyBox, fourier_section, layer_decompose, max_layer


def check_field(X, spec=None) -> SampledField:
    """Validate that ``X`` is a field, optionally on a given grid."""
    if not isinstance(X, SampledField):
        raise TypeError(f"expected a SampledField, got {type(X).__name__}")
    if spec is not None and X.spec != spec:
        raise SpecMismatchError("field grid differs from the grid seen in fit")
    return X


class LayerDecomposer(TransformerMixin, BaseEstimator):
    """Split fields into their a-layers.

    Parameters
    ----------
    r : sequence of float
        Smoothness vector defining the layer bases.
    s_max : int or None, default=None
        Finest layer kept; ``None`` uses the finest one the grid resolves.
    """

    def __init__(self, r=(1.0,), s_max=None):
        self.r = r
        self.s_max = s_max

    def fit(self, X, y=None):
        X = check_field(X)
        self.profile_ = make_profile(self.r)
        if self.profile_.d != X.spec.d:
            raise DomainError(f"r has {self.profile_.d} entries but the field is {X.spec.d}-dimensional")
        self.spec_ = X.spec
        self.s_max_ = self.s_max if self.s_max is not None else max_layer(self.profile_, X.spec)
        return self

    def transform(self, X):
        check_is_fitted(self, "profile_")
        X = check_field(X, self.spec_)
        return layer_decompose(X, self.profile_, self.s_max_)

    def inverse_transform(self, stack):
        check_is_fitted(self, "profile_")
        return stack.reconstruct()


class FourierSectionApproximator(TransformerMixin, BaseEstimator):
    """Approximate fields by their ``D_{a^(n-1)}`` Fourier section.

    Parameters
    ----------
    r : sequence of float
        Smoothness vector defining the boxes.
    n : int, default=1
        Approximation level; the section keeps ``|lam_j| < a_j**(n-1)``.
    q : float, default=2.0
        Metric used by :meth:`score` (reported as a negative error).
    """

    def __init__(self, r=(1.0,), n=1, q=2.0):
        self.r = r
        self.n = n
        self.q = q

    def fit(self, X, y=None):
        X = check_field(X)
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n = {self.n} must be a positive integer")
        check_exponent(self.q, name="q")
        self.profile_ = make_profile(self.r)
        self.spec_ = X.spec
        self.box_ = FrequencyBox.dyadic(self.profile_, self.n - 1)
        return self

    def transform(self, X):
        check_is_fitted(self, "box_")
        return fourier_section(check_field(X, self.spec_), self.box_)

    predict = transform

    def error(self, X) -> float:
        X = check_field(X, getattr(self, "spec_", None))
        if not hasattr(self, "box_"):
            raise NotFittedError("call fit before error")
        q = check_exponent(self.q, name="q")
        if q == math.inf:
            raise DomainError("q must be finite for section errors")
        return lp_norm(X - self.transform(X), q)

    def score(self, X, y=None) -> float:
        return -self.error(X)
