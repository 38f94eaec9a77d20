"""Truncated two-mode Fock space and bosonic ladder operators.

Basis states ``|j, k>`` (``j`` photons in mode 1, ``k`` in mode 2) are ordered
row-major with the mode-1 occupation as the slow index::

    index(j, k) = j * (n_max_2 + 1) + k

Every serialized matrix in the package relies on this ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sps

__all__ = [
    "FockSpace",
    "annihilation",
    "creation",
    "number_operator",
    "identity",
    "expectation",
    "dag",
]


@dataclass(frozen=True)
class FockSpace:
    """Two bosonic modes truncated at ``n_max_1`` and ``n_max_2`` photons."""

    n_max_1: int = 5
    n_max_2: int = 5

    def __post_init__(self):
        for n in (self.n_max_1, self.n_max_2):
            if int(n) != n or n < 0:
                raise ValueError(f"truncation must be a non-negative integer, got {n!r}")

    @classmethod
    def uniform(cls, n_max: int) -> "FockSpace":
        return cls(n_max, n_max)

    @property
    def dims(self) -> tuple[int, int]:
        return self.n_max_1 + 1, self.n_max_2 + 1

    @property
    def dim(self) -> int:
        d1, d2 = self.dims
        return d1 * d2

    def index(self, j: int, k: int) -> int:
        if not (0 <= j <= self.n_max_1 and 0 <= k <= self.n_max_2):
            raise IndexError(f"occupation ({j}, {k}) outside the truncated space")
        return j * (self.n_max_2 + 1) + k

    def occupation(self, index: int) -> tuple[int, int]:
        if not 0 <= index < self.dim:
            raise IndexError(f"basis index {index} out of range")
        return divmod(index, self.n_max_2 + 1)

    def occupations(self) -> np.ndarray:
        """Array of shape ``(dim, 2)`` with ``(j, k)`` for every basis index."""
        j, k = np.divmod(np.arange(self.dim), self.n_max_2 + 1)
        return np.column_stack([j, k])

    def basis_vector(self, j: int, k: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(j, k)] = 1.0
        return v

    def projector(self, j: int, k: int) -> np.ndarray:
        """Dense density matrix ``|j,k><j,k|``."""
        v = self.basis_vector(j, k)
        return np.outer(v, v.conj())


def _check_mode(mode) -> None:
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode!r}")


@lru_cache(maxsize=64)
def _ladder(space: FockSpace, mode: int) -> sps.csr_matrix:
    d1, d2 = space.dims
    a1 = sps.diags(np.sqrt(np.arange(1, d1)), 1, shape=(d1, d1), dtype=complex)
    a2 = sps.diags(np.sqrt(np.arange(1, d2)), 1, shape=(d2, d2), dtype=complex)
    if mode == 1:
        op = sps.kron(a1, sps.identity(d2), format="csr")
    else:
        op = sps.kron(sps.identity(d1), a2, format="csr")
    op.eliminate_zeros()
    return op


def dag(op):
    """Hermitian adjoint of a sparse or dense operator."""
    return op.conj().T.tocsr() if sps.issparse(op) else op.conj().T


def annihilation(space: FockSpace, mode: int) -> sps.csr_matrix:
    """Annihilation operator of ``mode``: ``<j-1,k| a_1 |j,k> = sqrt(j)``."""
    _check_mode(mode)
    return _ladder(space, mode).copy()


def creation(space: FockSpace, mode: int) -> sps.csr_matrix:
    _check_mode(mode)
    return dag(_ladder(space, mode))


def number_operator(space: FockSpace, mode: int) -> sps.csr_matrix:
    _check_mode(mode)
    occ = space.occupations()[:, mode - 1]
    return sps.diags(occ.astype(complex), format="csr")


def identity(space: FockSpace) -> sps.csr_matrix:
    return sps.identity(space.dim, dtype=complex, format="csr")


def expectation(op, rho: np.ndarray) -> complex:
    """``Tr(op @ rho)`` for a sparse or dense operator."""
    rho = np.asarray(rho)
    if op.shape != rho.shape:
        raise ValueError(f"dimension mismatch: operator {op.shape} vs state {rho.shape}")
    if sps.issparse(op):
        # Tr(A rho) = sum_ij A_ij rho_ji
        coo = op.tocoo()
        return complex(np.sum(coo.data * rho[coo.col, coo.row]))
    return complex(np.einsum("ij,ji->", op, rho))
