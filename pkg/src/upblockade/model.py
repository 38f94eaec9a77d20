"""Physical parameters, drive mixing and the two-cavity Kerr Hamiltonian.

All energies and rates are expressed in units of the total cavity loss rate
(``Gamma = 1`` by default). Mode energies ``E1``, ``E2`` are measured from the
drive frequency (rotating frame).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
import math

import numpy as np
import scipy.sparse as sps

from .fock import FockSpace, annihilation, creation, number_operator

__all__ = [
    "SystemParams",
    "DrivePair",
    "input_mixing",
    "drive_pair",
    "build_hamiltonian",
    "loss_channels",
    "optimal_detunings",
    "optimal_nonlinearity",
    "upb_parameters",
    "DEFAULT_J",
]

DEFAULT_J = 2.5

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class DrivePair:
    """Per-cavity drive amplitudes."""

    F1: complex
    F2: complex

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.F1) ** 2 + abs(self.F2) ** 2)


@dataclass(frozen=True)
class SystemParams:
    """Rates and energies of the driven coupled-cavity system.

    ``gamma1``/``gamma2`` are the evanescent couplings of cavity 1/2 to *each*
    of the two (symmetric) waveguides, so the intrinsic loss is
    ``kappa_j = Gamma_j - 2 gamma_j``. ``F`` is the total drive amplitude; with
    ``input_mixing`` it is split between the cavities with the same weights
    as the output, otherwise only cavity 1 is driven.
    """

    E1: float = 0.0
    E2: float = 0.0
    U: float = 0.0
    J: float = 0.0
    F: complex = 0.0
    gamma1: float = 0.4
    gamma2: float = 0.0
    Gamma1: float = 1.0
    Gamma2: float = 1.0
    Gpd1: float = 0.0
    Gpd2: float = 0.0
    input_mixing: bool = False
    allow_unequal_losses: bool = False

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "Gamma1", "Gamma2", "Gpd1", "Gpd2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be a finite non-negative rate, got {value!r}")
        for name in ("E1", "E2", "U", "J"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not np.isfinite(abs(self.F)):
            raise ValueError("F must be finite")
        if not self.allow_unequal_losses and not math.isclose(
            self.Gamma1, self.Gamma2, rel_tol=0, abs_tol=1e-14
        ):
            raise ValueError("Gamma1 != Gamma2; pass allow_unequal_losses=True to override")
        for j in (1, 2):
            if self.kappa(j) < -1e-14:
                raise ValueError(
                    f"gamma{j} exceeds Gamma{j}/2: intrinsic loss kappa{j} would be negative"
                )
        if self.input_mixing and self.gamma1 + self.gamma2 <= 0:
            raise ValueError("input mixing needs at least one non-zero coupling")

    def kappa(self, mode: int) -> float:
        if mode == 1:
            return self.Gamma1 - 2 * self.gamma1
        if mode == 2:
            return self.Gamma2 - 2 * self.gamma2
        raise ValueError(f"mode must be 1 or 2, got {mode!r}")

    @property
    def kappa1(self) -> float:
        return self.kappa(1)

    @property
    def kappa2(self) -> float:
        return self.kappa(2)

    @property
    def delta12(self) -> float:
        return self.E1 - self.E2

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if isinstance(d["F"], complex):
            if d["F"].imag == 0:
                d["F"] = d["F"].real
            else:
                d["F"] = [d["F"].real, d["F"].imag]
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter(s): {sorted(unknown)}")
        data = dict(data)
        if isinstance(data.get("F"), (list, tuple)):
            re, im = data["F"]
            data["F"] = complex(re, im)
        return cls(**data)


def input_mixing(F: complex, gamma1: float, gamma2: float) -> DrivePair:
    """Split the total drive ``F`` with weights ``gamma_j / (gamma1 + gamma2)``.

    The amplitudes satisfy ``|F1|^2 + |F2|^2 = |F|^2``.
    """
    if gamma1 < 0 or gamma2 < 0:
        raise ValueError("couplings must be non-negative")
    total = gamma1 + gamma2
    if total <= 0:
        raise ValueError("no input channel: gamma1 + gamma2 must be positive")
    return DrivePair(math.sqrt(gamma1 / total) * F, math.sqrt(gamma2 / total) * F)


def drive_pair(params: SystemParams) -> DrivePair:
    if params.input_mixing:
        return input_mixing(params.F, params.gamma1, params.gamma2)
    return DrivePair(params.F, 0.0)


def build_hamiltonian(
    params: SystemParams, drive: DrivePair | None = None, space: FockSpace | None = None
) -> sps.csr_matrix:
    """Rotating-frame Hamiltonian

    ``H = sum_j [E_j n_j + U a_j^+2 a_j^2 + F_j a_j^+ + F_j^* a_j] - J (a_1^+ a_2 + a_2^+ a_1)``.
    """
    if drive is None:
        drive = drive_pair(params)
    if space is None:
        space = FockSpace()
    H = sps.csr_matrix((space.dim, space.dim), dtype=complex)
    for mode, E, F in ((1, params.E1, drive.F1), (2, params.E2, drive.F2)):
        a = annihilation(space, mode)
        ad = creation(space, mode)
        n = number_operator(space, mode)
        H = H + E * n + params.U * (ad @ ad @ a @ a) + F * ad + np.conj(F) * a
    a1, a2 = annihilation(space, 1), annihilation(space, 2)
    hop = creation(space, 1) @ a2 + creation(space, 2) @ a1
    H = (H - params.J * hop).tocsr()
    if H.shape != (space.dim, space.dim):
        raise ValueError("Hamiltonian dimension does not match the Fock space")
    H.eliminate_zeros()
    return H


def loss_channels(params: SystemParams, space: FockSpace) -> list[tuple[sps.csr_matrix, float]]:
    """Collapse operators with their rates: photon loss and pure dephasing.

    Zero-rate channels are omitted.
    """
    channels = []
    for mode, rate in ((1, params.Gamma1), (2, params.Gamma2)):
        if rate > 0:
            channels.append((annihilation(space, mode), rate))
    for mode, rate in ((1, params.Gpd1), (2, params.Gpd2)):
        if rate > 0:
            channels.append((number_operator(space, mode), rate))
    return channels


def optimal_detunings(Gamma: float = 1.0, opposite: bool = False) -> tuple[float, float]:
    """Detunings maximizing intracavity antibunching of mode 1 at large ``J``.

    Both cavities sit at ``+Gamma / (2 sqrt 3)`` above the drive, so the
    inter-cavity detuning is zero in the unmixed case. ``opposite=True``
    returns the mirrored pair ``(+e, -e)`` for comparison; that point is not
    an antibunching optimum of the coupled system.
    """
    if Gamma <= 0:
        raise ValueError("Gamma must be positive")
    e = Gamma / (2 * math.sqrt(3))
    return (e, -e) if opposite else (e, e)


def optimal_nonlinearity(Gamma: float, J: float) -> float:
    """Kerr strength ``2 Gamma^3 / (3 sqrt(3) J^2)`` paired with :func:`optimal_detunings`."""
    if J == 0:
        raise ValueError("optimal nonlinearity diverges for J = 0")
    if Gamma <= 0:
        raise ValueError("Gamma must be positive")
    return 2 * Gamma**3 / (3 * math.sqrt(3) * J**2)


def upb_parameters(
    J: float = DEFAULT_J,
    gamma1: float = 0.4,
    gamma2: float = 0.0,
    F: complex = 1e-2,
    Gamma: float = 1.0,
    **overrides,
) -> SystemParams:
    """Parameter set at the optimal detunings and nonlinearity for coupling ``J``."""
    E1, E2 = optimal_detunings(Gamma)
    base = dict(
        E1=E1,
        E2=E2,
        U=overrides.pop("U") if "U" in overrides else optimal_nonlinearity(Gamma, J),
        J=J,
        F=F,
        gamma1=gamma1,
        gamma2=gamma2,
        Gamma1=Gamma,
        Gamma2=Gamma,
    )
    base.update(overrides)
    return SystemParams(**base)
