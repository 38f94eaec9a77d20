"""Closed-form weak-pump solution on the two-photon manifold.

The stationary wavefunction is expanded as
``|psi> = |00> + C10|10> + C01|01> + C20|20> + C02|02> + C11|11>`` under the
non-Hermitian Hamiltonian ``H - i sum_j Gamma_j/2 a_j^+ a_j``. Keeping the
leading order in the drive, the one-photon amplitudes solve a 2x2 system and
the two-photon amplitudes a 3x3 system sourced by them; both are solved here
in closed form and vectorize over arrays of detunings.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .inout import OutputMode, ZeroOutputError
from .model import SystemParams, drive_pair

__all__ = [
    "WeakPumpAmplitudes",
    "SingularAmplitudeError",
    "AntibunchingVerdict",
    "weak_pump_amplitudes",
    "printed_amplitudes",
    "analytic_n_out",
    "analytic_g2",
    "two_photon_amplitude",
    "two_photon_numerator",
    "analytic_observables",
    "perfect_antibunching_check",
    "leading_order_residuals",
    "overdetermined_residuals",
]

SQRT2 = math.sqrt(2.0)


class SingularAmplitudeError(ZeroDivisionError):
    """A denominator of the closed-form amplitudes vanishes."""


@dataclass(frozen=True)
class WeakPumpAmplitudes:
    """Two-photon-manifold amplitudes (``C00 = 1``) and the inputs that produced them.

    Fields are scalars or broadcast arrays of equal shape.
    """

    C10: complex
    C01: complex
    C20: complex
    C02: complex
    C11: complex
    Etilde1: complex
    Etilde2: complex
    U: float
    J: float
    F1: complex
    F2: complex

    @property
    def C00(self) -> float:
        return 1.0

    def scaled(self, s: float) -> "WeakPumpAmplitudes":
        """Amplitudes for a drive rescaled by ``s`` (one-photon ~ s, two-photon ~ s^2)."""
        return WeakPumpAmplitudes(
            self.C10 * s, self.C01 * s,
            self.C20 * s**2, self.C02 * s**2, self.C11 * s**2,
            self.Etilde1, self.Etilde2, self.U, self.J, self.F1 * s, self.F2 * s,
        )


def _guard(value, name: str):
    bad = np.abs(value) < 1e-300
    if np.any(bad):
        raise SingularAmplitudeError(f"vanishing denominator: {name}")


def _solve(Et1, Et2, U, J, F1, F2):
    D = J**2 - Et1 * Et2
    _guard(D, "J^2 - Et1*Et2 (one-photon determinant)")
    C10 = (F1 * Et2 + J * F2) / D
    C01 = (F2 * Et1 + J * F1) / D

    # two-photon block: a C20 - r C11 = y1, b C02 - r C11 = y2, -r (C20 + C02) + c C11 = y3
    a = 2 * (Et1 + U)
    b = 2 * (Et2 + U)
    c = Et1 + Et2
    r = SQRT2 * J
    _guard(a, "Et1 + U")
    _guard(b, "Et2 + U")
    y1 = -SQRT2 * F1 * C10
    y2 = -SQRT2 * F2 * C01
    y3 = -(F2 * C10 + F1 * C01)
    det = a * b * c - r**2 * (a + b)
    _guard(det, "two-photon determinant")
    C11 = (a * b * y3 + r * b * y1 + r * a * y2) / det
    C20 = (y1 + r * C11) / a
    C02 = (y2 + r * C11) / b
    return C10, C01, C20, C02, C11


def _drive(params: SystemParams, normalization: str):
    if normalization == "model":
        d = drive_pair(params)
        return d.F1, d.F2
    if normalization == "printed":
        return math.sqrt(params.gamma1) * params.F, math.sqrt(params.gamma2) * params.F
    raise ValueError(f"unknown normalization {normalization!r}")


def weak_pump_amplitudes(
    params: SystemParams, E1=None, E2=None, normalization: str = "model"
) -> WeakPumpAmplitudes:
    """Leading-order amplitudes for ``params``.

    ``E1``/``E2`` override the detunings and may be arrays (for sweeps).
    ``normalization="model"`` uses the same per-cavity drives as the master
    equation (split with weights ``gamma_j/(gamma1+gamma2)`` when input mixing
    is on, cavity 1 only otherwise). ``"printed"`` uses ``F_j = sqrt(gamma_j) F``;
    this rescales every amplitude by a power of ``sqrt(gamma1+gamma2)`` and
    leaves g2 unchanged.
    """
    E1 = params.E1 if E1 is None else np.asarray(E1, dtype=float)
    E2 = params.E2 if E2 is None else np.asarray(E2, dtype=float)
    Et1 = E1 - 0.5j * params.Gamma1
    Et2 = E2 - 0.5j * params.Gamma2
    F1, F2 = _drive(params, normalization)
    amps = _solve(Et1, Et2, params.U, params.J, F1, F2)
    return WeakPumpAmplitudes(*amps, Et1, Et2, params.U, params.J, F1, F2)


def printed_amplitudes(params: SystemParams) -> WeakPumpAmplitudes:
    """Literal transcription of the published closed forms (``F_j = sqrt(gamma_j) F``).

    The one-photon amplitudes agree with :func:`weak_pump_amplitudes`; the
    published two-photon expressions do not satisfy the stationarity
    equations they derive from (see :func:`leading_order_residuals`), so this
    is kept for comparison only.
    """
    Et1 = params.E1 - 0.5j * params.Gamma1
    Et2 = params.E2 - 0.5j * params.Gamma2
    U, J, F = params.U, params.J, params.F
    g1, g2 = params.gamma1, params.gamma2
    s1, s2, s12 = math.sqrt(g1), math.sqrt(g2), math.sqrt(g1 * g2)
    D = J**2 - Et1 * Et2
    C10 = F * (Et2 * s1 + J * s2) / D
    C01 = F * (Et1 * s2 + J * s1) / D
    C20 = F**2 * (
        (Et2**3 + Et2**2 * (Et1 + U) + U * J**2) * g1
        + J**2 * (Et1 + Et2 + U) * g2
        + 2 * J * s12 * (Et1 + Et2) * (Et2 + U)
    ) / (
        SQRT2 * (Et1 * Et2 - J**2)
        * (Et1**2 * (Et2 + U) + Et1 * ((Et2 + U) ** 2 - J**2) + Et2**2 * U + J**2 * (Et2 - 2 * U))
    )
    C02 = F**2 * (
        (Et1**3 + Et1**2 * (Et2 + U) + U * J**2) * g2
        + J**2 * (Et1 + Et2 + U) * g1
        + 2 * J * s12 * (Et1 + Et2) * (Et1 + U)
    ) / (
        SQRT2 * (Et1 * Et2 - J**2)
        * (Et2**2 * (Et1 + U) + Et2 * ((Et1 + U) ** 2 - J**2) + Et1**2 * U + J**2 * (Et1 - 2 * U))
    )
    den11 = (Et1 * Et2 - J**2) * (
        Et1**2 * (Et2 + U) + Et2**2 * (Et1 + U) - J**2 * (Et1 + Et2 - 2 * U)
    )
    C11 = F**2 * J * (Et1 + Et2 + U) * ((Et2 + U) * g1 + J * (Et1 + U) * g2) / den11 + F**2 * s12 * (
        (Et1 + Et2) * (Et1 * Et2 + J**2 + U**2)
        + U * (Et1**2 + Et2**2)
        + 2 * U * Et1 * Et2
        + 2 * U * J**2
    ) / den11
    return WeakPumpAmplitudes(C10, C01, C20, C02, C11, Et1, Et2, U, J, s1 * F, s2 * F)


def _one_photon_output(amps: WeakPumpAmplitudes, out: OutputMode):
    return math.sqrt(out.gamma1) * amps.C10 + math.sqrt(out.gamma2) * amps.C01


def analytic_n_out(amps: WeakPumpAmplitudes, out: OutputMode):
    """``|sqrt(g1) C10 + sqrt(g2) C01|^2``."""
    return np.abs(_one_photon_output(amps, out)) ** 2


def two_photon_amplitude(amps: WeakPumpAmplitudes, out: OutputMode):
    """``<00| c c |psi> = sqrt2 g1 C20 + sqrt2 g2 C02 + 2 sqrt(g1 g2) C11``."""
    g1, g2 = out.gamma1, out.gamma2
    return SQRT2 * g1 * amps.C20 + SQRT2 * g2 * amps.C02 + 2 * math.sqrt(g1 * g2) * amps.C11


def two_photon_numerator(amps: WeakPumpAmplitudes, out: OutputMode, form: str = "exact"):
    """Numerator of g2 in the weak-pump limit.

    ``form="exact"`` is ``|<00|c c|psi>|^2``; ``form="paper"`` is the
    published grouping
    ``|g1 C20 + g2 C02|^2 + |g1 C20 + s C11|^2 + |g2 C02 + s C11|^2`` with
    ``s = sqrt(g1 g2)``.
    """
    if form == "exact":
        return np.abs(two_photon_amplitude(amps, out)) ** 2
    if form == "paper":
        g1, g2 = out.gamma1, out.gamma2
        s = math.sqrt(g1 * g2)
        return (
            np.abs(g1 * amps.C20 + g2 * amps.C02) ** 2
            + np.abs(g1 * amps.C20 + s * amps.C11) ** 2
            + np.abs(g2 * amps.C02 + s * amps.C11) ** 2
        )
    raise ValueError(f"unknown form {form!r}")


def analytic_g2(amps: WeakPumpAmplitudes, out: OutputMode, form: str = "exact"):
    """Weak-pump ``g2_out(0)``; see :func:`two_photon_numerator` for ``form``."""
    den = np.abs(_one_photon_output(amps, out)) ** 4
    if np.any(den == 0):
        raise ZeroOutputError("one-photon output amplitude vanishes; g2 undefined")
    return two_photon_numerator(amps, out, form) / den


def analytic_observables(params: SystemParams, E1=None, E2=None, form: str = "exact"):
    """``(g2_out, n_out)`` from the weak-pump solution, vectorized over ``E1``/``E2``."""
    amps = weak_pump_amplitudes(params, E1, E2)
    out = OutputMode(params.gamma1, params.gamma2)
    return analytic_g2(amps, out, form), analytic_n_out(amps, out)


def leading_order_residuals(amps: WeakPumpAmplitudes) -> dict[str, complex]:
    """Residuals of the stationarity equations projected on ``|10>, |01>, |20>,
    |02>, |11>`` with the sub-leading drive terms dropped."""
    Et1, Et2, U, J, F1, F2 = amps.Etilde1, amps.Etilde2, amps.U, amps.J, amps.F1, amps.F2
    return {
        "10": F1 + Et1 * amps.C10 - J * amps.C01,
        "01": F2 + Et2 * amps.C01 - J * amps.C10,
        "20": SQRT2 * F1 * amps.C10 + 2 * (Et1 + U) * amps.C20 - SQRT2 * J * amps.C11,
        "02": SQRT2 * F2 * amps.C01 + 2 * (Et2 + U) * amps.C02 - SQRT2 * J * amps.C11,
        "11": F2 * amps.C10 + F1 * amps.C01 - SQRT2 * J * (amps.C20 + amps.C02) + (Et1 + Et2) * amps.C11,
    }


def overdetermined_residuals(amps: WeakPumpAmplitudes) -> dict[str, complex]:
    """The three extra published relations (``F1 C10 + F2 C01 = 0`` and the two
    ``C02``/``C11`` relations). They are not used to build the solution and are
    generally non-zero; this only reports how far from zero they are."""
    F1, F2 = amps.F1, amps.F2
    return {
        "F1C10+F2C01": F1 * amps.C10 + F2 * amps.C01,
        "F1C02+sqrt2F2C11": F1 * amps.C02 + SQRT2 * F2 * amps.C11,
        "F2C02+sqrt2F1C11": F2 * amps.C02 + SQRT2 * F1 * amps.C11,
    }


@dataclass(frozen=True)
class AntibunchingVerdict:
    """Outcome of :func:`perfect_antibunching_check`.

    ``achievable`` is False whenever the only joint solution of the three
    vanishing conditions is the empty two-photon manifold (non-zero
    ``determinant``). ``residual`` is the distance of concrete amplitudes from
    joint satisfaction, ``relative_residual`` the same divided by the squared
    one-photon output amplitude.
    """

    achievable: bool
    determinant: float
    conditions: tuple[str, str, str]
    residual: float | None = None
    relative_residual: float | None = None
    exact_two_photon_amplitude: complex | None = None


def perfect_antibunching_check(
    out: OutputMode, amps: WeakPumpAmplitudes | None = None
) -> AntibunchingVerdict:
    """Can the grouped two-photon numerator vanish for this output mixing?

    Zeroing all three grouped terms requires
    ``C02 = -(g1/g2) C20``, ``C11 = -sqrt(g1/g2) C20`` and ``C11 = +sqrt(g1/g2) C20``,
    a homogeneous linear system in ``(C20, C02, C11)`` with determinant
    ``-2 g1 g2 sqrt(g1 g2)``; for ``g1, g2 > 0`` only the trivial solution exists.
    """
    g1, g2 = out.gamma1, out.gamma2
    if g2 == 0:
        raise ValueError("gamma2 = 0: conditions degenerate, perfect antibunching is possible")
    if g1 == 0:
        raise ValueError("gamma1 = 0: conditions degenerate")
    s = math.sqrt(g1 * g2)
    M = np.array([[g1, g2, 0.0], [g1, 0.0, s], [0.0, g2, s]])
    det = float(np.linalg.det(M))
    conditions = (
        "C02 = -(gamma1/gamma2) C20",
        "C11 = -sqrt(gamma1/gamma2) C20",
        "C11 = +sqrt(gamma1/gamma2) C20",
    )
    verdict = dict(achievable=abs(det) == 0.0, determinant=det, conditions=conditions)
    if amps is not None:
        res = np.sqrt(two_photon_numerator(amps, out, form="paper"))
        one = np.abs(_one_photon_output(amps, out)) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(one > 0, res / one, np.inf)
        verdict.update(
            residual=res if np.ndim(res) else float(res),
            relative_residual=rel if np.ndim(rel) else float(rel),
            exact_two_photon_amplitude=two_photon_amplitude(amps, out),
        )
    return AntibunchingVerdict(**verdict)
