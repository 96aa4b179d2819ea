import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from majorana_probe import ModelParams, ParameterError, ProbeSusceptibility, chi1, steady_state


def test_params_round_trip():
    est = ProbeSusceptibility(delta_c=0.5, path="closed_form")
    params = est.get_params()
    assert params["delta_c"] == 0.5 and params["path"] == "closed_form"
    twin = clone(est)
    assert twin.get_params() == params
    assert est.set_params(beta1=0.1).beta1 == 0.1


def test_fit_predict_transform():
    p = ModelParams(delta_c=0.5, delta_m=-0.5)
    est = ProbeSusceptibility.from_params(p).fit()
    assert est.w0_ == steady_state(p).w0
    x = np.linspace(-1, 1, 7)
    chi = est.predict(x)
    assert np.array_equal(chi, chi1(p, x + 0.5))
    out = est.transform(x.reshape(-1, 1))
    assert out.shape == (7, 2)
    assert np.array_equal(out[:, 1], chi.imag)
    assert list(est.get_feature_names_out()) == ["re_chi", "im_chi"]


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ProbeSusceptibility().predict([0.0])


def test_input_validation():
    est = ProbeSusceptibility().fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        est.predict([np.nan])
    with pytest.raises(ParameterError):
        ProbeSusceptibility(gamma2=0.0).fit()


def test_group_index_matches_function():
    from majorana_probe import group_index

    est = ProbeSusceptibility().fit()
    assert est.group_index().ng_over_pi == group_index(est.model_params()).ng_over_pi
