"""scikit-learn style front end.

``ProbeSusceptibility`` holds the model parameters as constructor arguments,
``fit`` solves the steady state, and ``predict``/``transform`` map probe
detunings to chi(1). It therefore drops into pipelines, ``clone`` and
``GridSearchCV``-style parameter handling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .params import GroupIndexScale, ModelParams, validate_params
from .response import DEFAULT_EQ10_VARIANT, GroupIndexResult, chi1, group_index
from .steady import steady_state


class ProbeSusceptibility(TransformerMixin, BaseEstimator):
    """Probe response of a pumped quantum dot coupled to a Majorana pair.

    Parameters mirror :class:`~majorana_probe.params.ModelParams` plus the
    evaluation route. Inputs ``X`` are probe-exciton detunings delta_s in GHz,
    shape ``(n_samples,)`` or ``(n_samples, 1)``.

    Attributes
    ----------
    steady_state_ : SteadyState
    w0_, s0_, f0_ : population inversion and steady coherences
    n_features_in_ : int
    """

    def __init__(
        self,
        delta_c=0.0,
        delta_m=0.0,
        beta1=0.05,
        beta2=0.05,
        gamma1=0.3,
        gamma2=0.15,
        kappa_m=1e-4,
        omega_c_rabi_sq=0.005,
        path="linear_system",
        eq3_variant="symmetrized",
        eq10_variant=DEFAULT_EQ10_VARIANT,
    ):
        self.delta_c = delta_c
        self.delta_m = delta_m
        self.beta1 = beta1
        self.beta2 = beta2
        self.gamma1 = gamma1
        self.gamma2 = gamma2
        self.kappa_m = kappa_m
        self.omega_c_rabi_sq = omega_c_rabi_sq
        self.path = path
        self.eq3_variant = eq3_variant
        self.eq10_variant = eq10_variant

    @classmethod
    def from_params(cls, p: ModelParams, **kwargs) -> "ProbeSusceptibility":
        return cls(**p.to_dict(), **kwargs)

    def model_params(self) -> ModelParams:
        return ModelParams(**{k: float(getattr(self, k)) for k in ModelParams.field_names()})

    def fit(self, X=None, y=None):
        """Solve the steady state. ``X`` and ``y`` are accepted and ignored."""
        p = self.model_params()
        validate_params(p).raise_if_invalid()
        if X is not None:
            self._validate_X(X)
        self.params_ = p
        self.steady_state_ = steady_state(p)
        self.w0_ = self.steady_state_.w0
        self.s0_ = self.steady_state_.s0
        self.f0_ = self.steady_state_.f0
        self.n_features_in_ = 1
        return self

    def _validate_X(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        X = check_array(X, ensure_2d=True)
        if X.shape[1] != 1:
            raise ValueError(f"X must hold one column of detunings, got {X.shape[1]}")
        return X[:, 0]

    def predict(self, X) -> np.ndarray:
        """Complex chi(1) at each probe detuning."""
        check_is_fitted(self, "steady_state_")
        ds = self._validate_X(X)
        return np.asarray(
            chi1(
                self.params_,
                ds + self.params_.delta_c,
                ss=self.steady_state_,
                path=self.path,
                eq3_variant=self.eq3_variant,
                eq10_variant=self.eq10_variant,
            ),
            dtype=complex,
        )

    def transform(self, X) -> np.ndarray:
        """Columns (Re chi, Im chi): dispersion and absorption."""
        chi = self.predict(X)
        return np.column_stack([chi.real, chi.imag])

    def group_index(self, scale_pi: float = 1.0) -> GroupIndexResult:
        check_is_fitted(self, "steady_state_")
        return group_index(
            self.params_,
            GroupIndexScale(scale_pi),
            path=self.path,
            eq3_variant=self.eq3_variant,
            eq10_variant=self.eq10_variant,
        )

    def get_feature_names_out(self, input_features=None):
        return np.array(["re_chi", "im_chi"], dtype=object)
