"""Liouvillian construction and stationary density matrices.

Density matrices are vectorized by stacking columns, ``vec(rho)[i + j*d] =
rho[i, j]``, so that ``vec(A rho B) = (B^T kron A) vec(rho)``.
"""
from __future__ import annotations

from functools import lru_cache
import logging

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import reverse_cuthill_mckee

from . import inout
from .fock import FockSpace, annihilation, creation, dag, number_operator
from .model import SystemParams, build_hamiltonian, drive_pair, loss_channels

__all__ = [
    "SteadyStateError",
    "DegenerateSteadyStateError",
    "UnphysicalStateError",
    "ConvergenceError",
    "spre",
    "spost",
    "sprepost",
    "build_liouvillian",
    "liouvillian",
    "apply_liouvillian",
    "steady_state",
    "solve",
    "check_density_matrix",
    "convergence_check",
    "TRACE_TOL",
    "HERMITIAN_TOL",
    "POSITIVITY_TOL",
    "RESIDUAL_TOL",
]

log = logging.getLogger(__name__)

TRACE_TOL = 1e-10
HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = -1e-8
RESIDUAL_TOL = 1e-9
# pivot ratio below which the bordered system is treated as singular
_SINGULAR_PIVOT = 1e-13


class SteadyStateError(RuntimeError):
    """Numerical failure while computing a stationary state."""


class DegenerateSteadyStateError(SteadyStateError):
    """The Liouvillian has more than one stationary state."""


class UnphysicalStateError(SteadyStateError):
    """A computed state violates trace, hermiticity, positivity or stationarity."""


class ConvergenceError(RuntimeError):
    """Truncation did not converge below the cap."""


def spre(A) -> sps.csr_matrix:
    """Superoperator of ``rho -> A rho``."""
    d = A.shape[0]
    return sps.kron(sps.identity(d, dtype=complex), A, format="csr")


def spost(A) -> sps.csr_matrix:
    """Superoperator of ``rho -> rho A``."""
    d = A.shape[0]
    return sps.kron(sps.csr_matrix(A).T, sps.identity(d, dtype=complex), format="csr")


def sprepost(A, B) -> sps.csr_matrix:
    """Superoperator of ``rho -> A rho B``."""
    return sps.kron(sps.csr_matrix(B).T, sps.csr_matrix(A), format="csr")


def _dissipator(c) -> sps.csr_matrix:
    cd = dag(c)
    cdc = cd @ c
    return sprepost(c, cd) - 0.5 * spre(cdc) - 0.5 * spost(cdc)


def build_liouvillian(H, channels, hermitian_tol: float = 1e-10) -> sps.csc_matrix:
    """Generator ``L[rho] = -i[H, rho] + sum_k r_k (c rho c^+ - {c^+ c, rho}/2)``.

    ``channels`` is an iterable of ``(collapse_operator, rate)`` pairs.
    """
    H = sps.csr_matrix(H, dtype=complex)
    if H.shape[0] != H.shape[1]:
        raise ValueError("Hamiltonian must be square")
    herm_err = abs(H - dag(H)).max() if H.nnz else 0.0
    if herm_err > hermitian_tol:
        raise ValueError(f"Hamiltonian is not Hermitian (max |H - H^+| = {herm_err:.3g})")
    L = -1j * (spre(H) - spost(H))
    for c, rate in channels:
        if rate < 0:
            raise ValueError(f"negative dissipation rate {rate!r}")
        if c.shape != H.shape:
            raise ValueError("collapse operator dimension does not match the Hamiltonian")
        if rate:
            L = L + rate * _dissipator(sps.csr_matrix(c, dtype=complex))
    return sps.csc_matrix(L)


@lru_cache(maxsize=16)
def _liouvillian_terms(space: FockSpace) -> dict[str, sps.csr_matrix]:
    # each term is the Liouvillian contribution per unit of its parameter
    a1, a2 = annihilation(space, 1), annihilation(space, 2)
    ad1, ad2 = creation(space, 1), creation(space, 2)
    n1, n2 = number_operator(space, 1), number_operator(space, 2)

    def comm(A):
        return -1j * (spre(A) - spost(A))

    terms = {
        "E1": comm(n1),
        "E2": comm(n2),
        "U": comm(ad1 @ ad1 @ a1 @ a1 + ad2 @ ad2 @ a2 @ a2),
        "J": comm(-(ad1 @ a2 + ad2 @ a1)),
        "F1": comm(ad1),
        "F1c": comm(a1),
        "F2": comm(ad2),
        "F2c": comm(a2),
        "Gamma1": _dissipator(a1),
        "Gamma2": _dissipator(a2),
        "Gpd1": _dissipator(n1),
        "Gpd2": _dissipator(n2),
    }
    for m in terms.values():
        m.eliminate_zeros()
    return terms


def liouvillian(params: SystemParams, space: FockSpace) -> sps.csc_matrix:
    """Liouvillian of the coupled-cavity model, assembled from cached terms."""
    drive = drive_pair(params)
    coeffs = {
        "E1": params.E1,
        "E2": params.E2,
        "U": params.U,
        "J": params.J,
        "F1": drive.F1,
        "F1c": np.conj(drive.F1),
        "F2": drive.F2,
        "F2c": np.conj(drive.F2),
        "Gamma1": params.Gamma1,
        "Gamma2": params.Gamma2,
        "Gpd1": params.Gpd1,
        "Gpd2": params.Gpd2,
    }
    terms = _liouvillian_terms(space)
    d2 = space.dim**2
    L = sps.csr_matrix((d2, d2), dtype=complex)
    for name, value in coeffs.items():
        if value != 0:
            L = L + complex(value) * terms[name]
    return sps.csc_matrix(L)


def reference_liouvillian(params: SystemParams, space: FockSpace) -> sps.csc_matrix:
    """Same generator built from the Hamiltonian and explicit channels."""
    H = build_hamiltonian(params, drive_pair(params), space)
    return build_liouvillian(H, loss_channels(params, space))


def apply_liouvillian(L, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    return (L @ np.asarray(rho).reshape(-1, order="F")).reshape(d, d, order="F")


def check_density_matrix(rho: np.ndarray, L=None) -> dict:
    """Measure the physicality of ``rho``; raise :class:`UnphysicalStateError` on violation.

    Returns the measured deviations (trace error, hermiticity error, smallest
    eigenvalue and, when ``L`` is given, the stationarity residual).
    """
    rho = np.asarray(rho)
    report = {
        "trace_error": abs(np.trace(rho) - 1.0),
        "hermiticity_error": float(np.abs(rho - rho.conj().T).max()),
        "min_eigenvalue": float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()),
    }
    if L is not None:
        report["residual"] = float(np.abs(L @ rho.reshape(-1, order="F")).max())
    problems = []
    if not report["trace_error"] <= TRACE_TOL:
        problems.append(f"trace error {report['trace_error']:.3g}")
    if not report["hermiticity_error"] <= HERMITIAN_TOL:
        problems.append(f"hermiticity error {report['hermiticity_error']:.3g}")
    if not report["min_eigenvalue"] >= POSITIVITY_TOL:
        problems.append(f"negative eigenvalue {report['min_eigenvalue']:.3g}")
    if L is not None and not report["residual"] < RESIDUAL_TOL:
        problems.append(f"stationarity residual {report['residual']:.3g}")
    if problems:
        raise UnphysicalStateError("; ".join(problems))
    return report


def _vacuum_row(d: int) -> int:
    return 0  # vec index of rho[0, 0] under column stacking


def steady_state(L, validate: bool = True) -> np.ndarray:
    """Unique stationary density matrix of ``L``.

    The row of ``L`` belonging to the vacuum population is replaced by the
    trace functional and the bordered system is solved by sparse LU after a
    reverse Cuthill-McKee reordering.
    """
    L = sps.csr_matrix(L)
    n = L.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n or L.shape[1] != n:
        raise ValueError("Liouvillian must be square with a square-number dimension")
    row = _vacuum_row(d)
    trace_row = sps.csr_matrix(
        (np.ones(d, dtype=complex), (np.zeros(d, dtype=int), np.arange(d) * (d + 1))),
        shape=(1, n),
    )
    A = sps.vstack([L[:row], trace_row, L[row + 1 :]], format="csr")
    b = np.zeros(n, dtype=complex)
    b[row] = 1.0

    perm = reverse_cuthill_mckee(sps.csr_matrix(abs(A) + abs(A.T)), symmetric_mode=True)
    Ap = sps.csc_matrix(A[perm][:, perm])
    try:
        lu = spla.splu(Ap, permc_spec="NATURAL")
    except RuntimeError as exc:
        raise DegenerateSteadyStateError(f"bordered Liouvillian is singular: {exc}") from exc
    pivots = np.abs(lu.U.diagonal())
    if pivots.min() <= _SINGULAR_PIVOT * pivots.max():
        raise DegenerateSteadyStateError(
            "bordered Liouvillian is numerically singular; the stationary state is not unique"
        )
    y = lu.solve(b[perm])
    x = np.empty_like(y)
    x[perm] = y
    if not np.all(np.isfinite(x)):
        raise SteadyStateError("non-finite entries in the stationary solution")
    rho = x.reshape(d, d, order="F")
    if validate:
        _check_physical(rho, L)
    return rho


def _check_physical(rho, L):
    return check_density_matrix(rho, L)


def solve(params: SystemParams, space: FockSpace | None = None, validate: bool = True) -> np.ndarray:
    """Stationary state of the model for ``params``."""
    space = space or FockSpace()
    return steady_state(liouvillian(params, space), validate=validate)


def _g2_and_n(params: SystemParams, n_max: int):
    space = FockSpace.uniform(n_max)
    rho = solve(params, space)
    out = inout.OutputMode(params.gamma1, params.gamma2)
    n = inout.n_out(rho, out, space)
    if n <= 0:
        return 0.0, 0.0
    return inout.g2_out(rho, out, space), n


def convergence_check(
    params: SystemParams, tol: float = 1e-3, start: int = 1, cap: int = 10
) -> int:
    """Smallest per-mode truncation whose output g2 changes by less than ``tol``
    (relative) when one more photon per mode is kept."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if start < 1 or start >= cap:
        raise ValueError("need 1 <= start < cap")
    g_prev, n_prev = _g2_and_n(params, start)
    for n_max in range(start, cap):
        g_next, n_next = _g2_and_n(params, n_max + 1)
        if n_prev == 0 and n_next == 0:
            return n_max
        scale = max(abs(g_next), np.finfo(float).tiny)
        change = abs(g_next - g_prev) / scale
        log.debug("n_max=%d: g2=%.6g, relative change %.3g", n_max, g_prev, change)
        if change < tol:
            return n_max
        g_prev, n_prev = g_next, n_next
    raise ConvergenceError(f"g2 not converged to {tol:g} below n_max={cap}")
