import numpy as np
import pytest
from hypothesis import given, strategies as st

from upblockade.analytic import (
    SingularAmplitudeError, WeakPumpAmplitudes, analytic_g2, analytic_n_out, leading_order_residuals,
    overdetermined_residuals, perfect_antibunching_check, printed_amplitudes, two_photon_numerator,
    weak_pump_amplitudes,
)
from upblockade.fock import FockSpace
from upblockade.inout import OutputMode, output_mode
from upblockade.lindblad import solve
from upblockade.model import upb_parameters

detuning = st.floats(-3, 3)
ratio = st.floats(0, 0.5)
NAMES = ("C10", "C01", "C20", "C02", "C11")


def _amps(**kw):
    return weak_pump_amplitudes(upb_parameters(**kw))


def test_zero_drive():
    a = _amps(F=0)
    assert all(getattr(a, n) == 0 for n in NAMES)
    assert a.C00 == 1


def test_decoupled_single_cavity():
    a = _amps(J=0, U=0.1, E1=0.4)
    assert a.C10 == pytest.approx(-0.01 / (0.4 - 0.5j))
    assert a.C01 == 0


def test_singular_denominator():
    # J^2 = Et1 Et2 needs a vanishing loss rate
    p = upb_parameters(E1=1.0, E2=1.0, J=1.0, Gamma1=0, Gamma2=0, gamma1=0)
    with pytest.raises(SingularAmplitudeError, match="J\\^2"):
        weak_pump_amplitudes(p)


@given(detuning, detuning, ratio, st.booleans(), st.floats(1e-4, 1e-1))
def test_amplitude_scaling(E1, E2, r, mixing, F):
    p = upb_parameters(E1=E1, E2=E2, gamma2=0.4 * r, input_mixing=mixing, F=F)
    a, b = weak_pump_amplitudes(p), weak_pump_amplitudes(p.replace(F=2 * F))
    for n in ("C10", "C01"):
        assert getattr(b, n) == pytest.approx(2 * getattr(a, n), rel=1e-10, abs=1e-300)
    for n in ("C20", "C02", "C11"):
        assert getattr(b, n) == pytest.approx(4 * getattr(a, n), rel=1e-10, abs=1e-300)


@given(detuning, detuning, ratio, st.booleans(), st.floats(0, 3), st.floats(0, 1))
def test_leading_order_residuals(E1, E2, r, mixing, J, U):
    F = 1e-2
    a = _amps(E1=E1, E2=E2, gamma2=0.4 * r, input_mixing=mixing, J=J, U=U, F=F)
    res = leading_order_residuals(a)
    for key in ("10", "01"):
        assert abs(res[key]) < 1e-12 * F
    for key in ("20", "02", "11"):
        assert abs(res[key]) < 1e-12 * F**2


def test_printed_two_photon_forms_violate_equations(upb):
    p = upb.replace(gamma2=0.04)
    pa = printed_amplitudes(p)
    mine = weak_pump_amplitudes(p, normalization="printed")
    assert pa.C10 == pytest.approx(mine.C10, rel=1e-12)
    assert pa.C01 == pytest.approx(mine.C01, rel=1e-12)
    res = leading_order_residuals(pa)
    assert max(abs(res[k]) for k in ("20", "02", "11")) > 1e-3 * abs(pa.C10) ** 2


def test_overdetermined_relations_are_diagnostic(upb):
    res = overdetermined_residuals(weak_pump_amplitudes(upb.replace(gamma2=0.04, input_mixing=True)))
    assert set(res) == {"F1C10+F2C01", "F1C02+sqrt2F2C11", "F2C02+sqrt2F1C11"}
    assert abs(res["F1C10+F2C01"]) > 0


def test_amplitudes_match_master_equation(upb):
    p = upb.replace(F=1e-3, gamma2=0.04, input_mixing=True)
    space = FockSpace()
    rho = solve(p, space)
    amps = weak_pump_amplitudes(p)
    ref = rho[space.index(0, 0), space.index(0, 0)]
    for name, jk in zip(NAMES, ((1, 0), (0, 1), (2, 0), (0, 2), (1, 1))):
        proj = rho[space.index(*jk), space.index(0, 0)] / ref
        assert abs(proj / getattr(amps, name) - 1) < 1e-2, name


def test_analytic_n_out(upb):
    a = weak_pump_amplitudes(upb)
    assert analytic_n_out(a, OutputMode(0.4, 0)) == pytest.approx(0.4 * abs(a.C10) ** 2)
    assert analytic_n_out(_amps(F=0), OutputMode(0.4, 0.1)) == 0


def test_single_channel_forms_agree(upb):
    a = weak_pump_amplitudes(upb)
    out = OutputMode(0.4, 0)
    expected = 2 * abs(a.C20) ** 2 / abs(a.C10) ** 4
    for form in ("exact", "paper"):
        assert analytic_g2(a, out, form) == pytest.approx(expected, rel=1e-12)


def test_empty_two_photon_manifold():
    a = WeakPumpAmplitudes(0.1, 0.05, 0, 0, 0, 0.3 - 0.5j, 0.3 - 0.5j, 0.06, 2.5, 0.01, 0)
    for form in ("exact", "paper"):
        assert analytic_g2(a, OutputMode(0.4, 0.1), form) == 0
    with pytest.raises(ValueError):
        two_photon_numerator(a, OutputMode(0.4, 0.1), "other")


@given(detuning, detuning, ratio, st.floats(1e-3, 1e3))
def test_g2_scale_invariance(E1, E2, r, s):
    a = _amps(E1=E1, E2=E2, gamma2=0.4 * r)
    out = OutputMode(0.4, 0.4 * r)
    for form in ("exact", "paper"):
        g = analytic_g2(a, out, form)
        assert analytic_g2(a.scaled(s), out, form) == pytest.approx(g, rel=1e-9)


def test_normalization_leaves_g2_unchanged(upb):
    p = upb.replace(gamma2=0.04, input_mixing=True)
    out = output_mode(p)
    a, b = weak_pump_amplitudes(p), weak_pump_amplitudes(p, normalization="printed")
    assert analytic_g2(a, out) == pytest.approx(analytic_g2(b, out), rel=1e-10)
    assert analytic_n_out(b, out) == pytest.approx(0.44 * analytic_n_out(a, out), rel=1e-10)


def test_vectorized_over_detunings(upb):
    E = np.linspace(-1, 1, 7)
    a = weak_pump_amplitudes(upb, E, -E)
    assert a.C11.shape == (7,)
    assert a.C20[3] == pytest.approx(weak_pump_amplitudes(upb.replace(E1=E[3], E2=-E[3])).C20)


def test_antibunching_check_verdict():
    out = OutputMode(0.4, 0.04)
    v = perfect_antibunching_check(out)
    assert not v.achievable
    assert v.determinant == pytest.approx(-2 * 0.4 * 0.04 * np.sqrt(0.4 * 0.04))
    zero = WeakPumpAmplitudes(0, 0, 0, 0, 0, -0.5j, -0.5j, 0.06, 2.5, 0, 0)
    assert perfect_antibunching_check(out, zero).residual == 0
    with pytest.raises(ValueError):
        perfect_antibunching_check(OutputMode(0.4, 0))


def test_antibunching_residual_positive_and_continuous(upb):
    p = upb.replace(gamma2=0.02)
    out = output_mode(p)
    r0 = perfect_antibunching_check(out, weak_pump_amplitudes(p)).residual
    assert r0 > 0
    h = 1e-6
    r1 = perfect_antibunching_check(out, weak_pump_amplitudes(p.replace(E1=p.E1 + h))).residual
    r2 = perfect_antibunching_check(out, weak_pump_amplitudes(p.replace(E1=p.E1 + 2 * h))).residual
    # first-order behaviour: equal increments give nearly equal changes
    assert abs(r1 - r0) < 1e-3 * r0
    assert (r2 - r1) == pytest.approx(r1 - r0, rel=1e-2)
