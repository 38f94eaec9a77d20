import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from upblockade.fock import FockSpace
from upblockade.model import (
    DrivePair, SystemParams, build_hamiltonian, drive_pair, input_mixing, optimal_detunings,
    optimal_nonlinearity, upb_parameters,
)


def test_input_mixing_examples():
    d = input_mixing(0.01, 0.4, 0.0)
    assert (d.F1, d.F2) == pytest.approx((0.01, 0))
    d = input_mixing(1, 0.3, 0.3)
    assert (d.F1, d.F2) == pytest.approx((0.70711, 0.70711), abs=1e-5)
    d = input_mixing(0.01, 0.4, 0.1)
    assert (d.F1, d.F2) == pytest.approx((0.0089443, 0.0044721), abs=1e-7)
    with pytest.raises(ValueError):
        input_mixing(1, 0, 0)


@given(
    st.floats(1e-6, 10), st.floats(0, 0.5), st.floats(0, 0.5),
)
def test_input_mixing_norm(F, g1, g2):
    if g1 + g2 == 0:
        return
    assert input_mixing(F, g1, g2).norm == pytest.approx(abs(F), rel=1e-12)


def test_drive_pair_without_mixing():
    p = upb_parameters(gamma2=0.04)
    assert drive_pair(p) == DrivePair(p.F, 0)
    assert drive_pair(p.replace(input_mixing=True)).F2 != 0


def test_params_validation():
    with pytest.raises(ValueError):
        upb_parameters(gamma1=0.6)  # kappa < 0
    with pytest.raises(ValueError):
        upb_parameters(Gpd1=-1)
    with pytest.raises(ValueError):
        upb_parameters(Gamma2=2.0)
    p = upb_parameters(Gamma2=2.0, allow_unequal_losses=True)
    assert p.kappa2 == pytest.approx(2.0)
    assert upb_parameters(gamma1=0.4).kappa1 == pytest.approx(0.2)


def test_params_dict_roundtrip():
    p = upb_parameters(gamma2=0.02, F=0.3)
    assert SystemParams.from_dict(p.to_dict()) == p
    with pytest.raises((TypeError, ValueError)):
        SystemParams.from_dict({**p.to_dict(), "bogus": 1})


def test_hamiltonian_zero():
    p = SystemParams(E1=0, E2=0, U=0, J=0, F=0, gamma1=0, Gamma1=0, Gamma2=0)
    assert abs(build_hamiltonian(p)).max() == 0


def test_hamiltonian_elements():
    space = FockSpace(3, 3)
    p = upb_parameters(E1=0.7, E2=-0.3, U=0.11, J=1.3, F=0.2)
    H = build_hamiltonian(p, space=space).toarray()
    i20, i10, i01, i00 = (space.index(*jk) for jk in ((2, 0), (1, 0), (0, 1), (0, 0)))
    assert H[i20, i20] == pytest.approx(2 * 0.7 + 2 * 0.11)
    assert H[i10, i01] == pytest.approx(-1.3)
    assert H[i10, i00] == pytest.approx(0.2)


@given(
    st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.floats(0, 5), st.floats(0, 2),
    st.floats(0, 0.5),
)
def test_hamiltonian_hermitian(E1, E2, U, J, F, g2):
    p = upb_parameters(E1=E1, E2=E2, U=U, J=J, F=F, gamma2=g2, input_mixing=True)
    H = build_hamiltonian(p, space=FockSpace(3, 3))
    assert abs(H - H.conj().T).max() < 1e-12


def test_optimal_detunings():
    e = 1 / (2 * math.sqrt(3))
    assert optimal_detunings(1) == pytest.approx((0.288675, 0.288675), abs=1e-6)
    assert optimal_detunings(2) == pytest.approx((0.577350, 0.577350), abs=1e-6)
    # mirrored reading kept for comparison
    assert optimal_detunings(1, opposite=True) == pytest.approx((e, -e))
    assert optimal_detunings(2, opposite=True) == pytest.approx((0.577350, -0.577350), abs=1e-6)
    with pytest.raises(ValueError):
        optimal_detunings(0)


def test_optimal_nonlinearity():
    assert optimal_nonlinearity(1, 2.5) == pytest.approx(0.0615840, abs=1e-7)
    assert optimal_nonlinearity(1, 0.5) == pytest.approx(1.539601, abs=1e-6)
    assert optimal_nonlinearity(1, 5.0) == pytest.approx(optimal_nonlinearity(1, 2.5) / 4)
    with pytest.raises(ValueError):
        optimal_nonlinearity(1, 0)


def test_upb_defaults():
    p = upb_parameters()
    assert (p.J, p.gamma1, p.gamma2, p.F) == (2.5, 0.4, 0.0, 0.01)
    assert p.delta12 == pytest.approx(0)
    assert np.isclose(p.U, optimal_nonlinearity(1, 2.5))
