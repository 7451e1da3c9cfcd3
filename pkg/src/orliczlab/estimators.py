"""scikit-learn transformers over Orlicz quasi-norms.

Rows of ``X`` are functions on a common atomic space; columns are atoms.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .orlicz import OrliczSpace
from .qbfs import space_from_spec
from .young import validate


class _OrliczBase(BaseEstimator, TransformerMixin):
    def __init__(self, base=None, phi=None, tol=1e-10):
        self.base = base
        self.phi = phi
        self.tol = tol

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        base = self.base if self.base is not None else {"kind": "l1mu"}
        phi = self.phi if self.phi is not None else {"kind": "power", "p": 2.0}
        base_space = space_from_spec(base, n_atoms=X.shape[1])
        if base_space.n_atoms != X.shape[1]:
            raise ValueError(f"X has {X.shape[1]} columns, the base space has {base_space.n_atoms} atoms")
        self.space_ = OrliczSpace(base_space, validate(phi), tol=self.tol)
        self.n_features_in_ = X.shape[1]
        return self

    def _norms(self, X):
        check_is_fitted(self, "space_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return X, self.space_.norms(X)


class OrliczNorm(_OrliczBase):
    """Map each row to its Luxemburg quasi-norm (one output column).

    Parameters
    ----------
    base : dict, optional
        Space spec for the base quasi-normed space (default ``{"kind": "l1mu"}``
        with unit weights).
    phi : dict, optional
        Young function spec (default ``t**2``).
    tol : float
        Relative bracket width of the Luxemburg solve.
    """

    def transform(self, X):
        _, n = self._norms(X)
        return n[:, None]


class LuxemburgNormalizer(_OrliczBase):
    """Scale each row to unit Luxemburg quasi-norm; zero rows are left at zero."""

    def transform(self, X):
        X, n = self._norms(X)
        safe = np.where(n > 0, n, 1.0)
        return X / safe[:, None]
