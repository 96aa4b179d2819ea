"""Mean-field equations of motion for <S^z>, <S^->, <f>.

Two forms of the dot-Majorana term in the inversion equation are available:

``"symmetrized"``
    -beta1 (S f* + S* f) - i beta2 (S f* - S* f), the form that follows from a
    Hermitian Hamiltonian and keeps <S^z> real.
``"as-printed"``
    -(beta1 + i beta2)(S f* + S* f), kept for comparison; it lets <S^z>
    pick up an imaginary part.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ParameterError
from .params import ModelParams

EQ3_VARIANTS = ("symmetrized", "as-printed")


def check_eq3_variant(variant: str) -> str:
    if variant not in EQ3_VARIANTS:
        raise ParameterError(f"unknown inversion-equation variant {variant!r}; expected one of {EQ3_VARIANTS}")
    return variant


def mean_field_rhs(
    p: ModelParams,
    sz: complex,
    sm: complex,
    f: complex,
    probe: complex = 0.0,
    variant: str = "symmetrized",
) -> tuple[complex, complex, complex]:
    """Time derivatives of (<S^z>, <S^->, <f>) in the pump frame.

    ``probe`` is the instantaneous probe term mu E_s e^{-i delta t} / hbar.
    Noise operators have zero mean and drop out.
    """
    b = p.coupling
    bc = b.conjugate()
    omega = p.omega_c
    sp = np.conj(sm)
    if variant == "symmetrized":
        mf = -p.beta1 * (sm * np.conj(f) + sp * f) - 1j * p.beta2 * (sm * np.conj(f) - sp * f)
    else:
        mf = -b * (sm * np.conj(f) + sp * f)
    dsz = (
        -p.gamma1 * (sz + 0.5)
        + mf
        + 1j * omega * (sp - sm)
        + 1j * (sp * probe - sm * np.conj(probe))
    )
    dsm = -(1j * p.delta_c + p.gamma2) * sm + 2 * bc * sz * f - 2j * omega * sz - 2j * probe * sz
    df = -(1j * p.delta_m + p.kappa_m / 2) * f + b * sm
    return dsz, dsm, df
