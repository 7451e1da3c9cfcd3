import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from orliczlab.estimators import LuxemburgNormalizer, OrliczNorm


def test_orlicz_norm_defaults_to_l2():
    X = np.array([[3.0, 4.0], [0.0, 0.0]])
    out = OrliczNorm().fit(X).transform(X)
    np.testing.assert_allclose(out, [[5.0], [0.0]], rtol=1e-10)


def test_normalizer_rows_unit():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(10, 3))
    X[4] = 0
    est = LuxemburgNormalizer(phi={"kind": "power-log", "p": 2, "q": 1})
    Y = est.fit_transform(X)
    n = OrliczNorm(phi=est.phi).fit(Y).transform(Y).ravel()
    np.testing.assert_allclose(np.delete(n, 4), 1.0, rtol=1e-9)
    assert not Y[4].any()


def test_params_and_clone():
    est = OrliczNorm(phi={"kind": "exp", "a": 1}, tol=1e-8)
    assert est.get_params()["tol"] == 1e-8
    assert clone(est).get_params() == est.get_params()
    make_pipeline(LuxemburgNormalizer(), OrliczNorm()).fit(np.ones((2, 2)))


def test_validation():
    with pytest.raises(NotFittedError):
        OrliczNorm().transform(np.ones((1, 2)))
    est = OrliczNorm().fit(np.ones((1, 2)))
    with pytest.raises(ValueError):
        est.transform(np.ones((1, 3)))
    with pytest.raises(ValueError):
        OrliczNorm(phi={"kind": "power", "p": 0.5}).fit(np.ones((1, 2)))
