"""Output-field observables of the waveguide channel.

With only classical drives on top of vacuum inputs, normally ordered output
moments equal those of the effective intracavity operator
``c = sqrt(gamma1) a1 + sqrt(gamma2) a2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import itertools
import math

import numpy as np

from .fock import FockSpace, annihilation, creation, dag, expectation

__all__ = [
    "OutputMode",
    "CorrelationResult",
    "ZeroOutputError",
    "output_mode",
    "output_operator",
    "n_out",
    "n_out_expanded",
    "g2_out",
    "g2_out_quadruple_sum",
    "correlations",
]


class ZeroOutputError(ValueError):
    """g2 is undefined because the output occupation vanishes."""


@dataclass(frozen=True)
class OutputMode:
    """Coupling weights of the two cavities to the collected output channel."""

    gamma1: float
    gamma2: float

    def __post_init__(self):
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("output couplings must be non-negative")
        if self.gamma1 == 0 and self.gamma2 == 0:
            raise ValueError("output mode couples to neither cavity")


@dataclass(frozen=True)
class CorrelationResult:
    n_out: float
    g2_out: float


def output_mode(params, channel: str = "c") -> OutputMode:
    """Output mode of waveguide ``"b"`` or ``"c"``; identical for symmetric guides."""
    if channel not in ("b", "c"):
        raise ValueError(f"unknown channel {channel!r}")
    return OutputMode(params.gamma1, params.gamma2)


def _space_for(rho, space):
    if space is not None:
        if rho.shape != (space.dim, space.dim):
            raise ValueError(f"dimension mismatch: state {rho.shape} vs space dim {space.dim}")
        return space
    d = rho.shape[0]
    n = math.isqrt(d)
    if n * n != d:
        raise ValueError("cannot infer a uniform Fock space; pass `space`")
    return FockSpace.uniform(n - 1)


def output_operator(space: FockSpace, out: OutputMode):
    """``sqrt(gamma1) a1 + sqrt(gamma2) a2`` (vacuum input drops out)."""
    return (
        math.sqrt(out.gamma1) * annihilation(space, 1)
        + math.sqrt(out.gamma2) * annihilation(space, 2)
    ).tocsr()


@lru_cache(maxsize=64)
def _moment_operators(space: FockSpace, out: OutputMode):
    c = output_operator(space, out)
    cd = dag(c)
    return (cd @ c).tocsr(), (cd @ cd @ c @ c).tocsr()


def n_out(rho, out: OutputMode, space: FockSpace | None = None) -> float:
    """Mean output occupation ``<c^+ c>``."""
    rho = np.asarray(rho)
    space = _space_for(rho, space)
    N, _ = _moment_operators(space, out)
    return expectation(N, rho).real


def n_out_expanded(
    rho, out: OutputMode, space: FockSpace | None = None, cross_weight: float = 1.0
) -> float:
    """``gamma1 <n1> + gamma2 <n2> + w sqrt(gamma1 gamma2) <a1^+ a2 + a2^+ a1>``.

    ``cross_weight = 1`` is the direct expansion of ``<c^+ c>``; other weights
    are only useful for comparing alternative printed forms.
    """
    rho = np.asarray(rho)
    space = _space_for(rho, space)
    a1, a2 = annihilation(space, 1), annihilation(space, 2)
    ad1, ad2 = creation(space, 1), creation(space, 2)
    g1, g2 = out.gamma1, out.gamma2
    value = (
        g1 * expectation(ad1 @ a1, rho)
        + g2 * expectation(ad2 @ a2, rho)
        + cross_weight * math.sqrt(g1 * g2) * expectation(ad1 @ a2 + ad2 @ a1, rho)
    )
    return value.real


def g2_out(rho, out: OutputMode, space: FockSpace | None = None) -> float:
    """Zero-delay ``<c^+ c^+ c c> / <c^+ c>^2`` of the output field."""
    rho = np.asarray(rho)
    space = _space_for(rho, space)
    N, G = _moment_operators(space, out)
    n = expectation(N, rho).real
    if not n > 0:
        raise ZeroOutputError("output occupation is zero; g2 undefined")
    return expectation(G, rho).real / n**2


def g2_out_quadruple_sum(rho, out: OutputMode, space: FockSpace | None = None) -> float:
    """Same quantity as :func:`g2_out`, summed mode by mode over
    ``sqrt(g_j g_k g_l g_m) <a_j^+ a_k^+ a_l a_m>``."""
    rho = np.asarray(rho)
    space = _space_for(rho, space)
    a = {1: annihilation(space, 1), 2: annihilation(space, 2)}
    ad = {1: creation(space, 1), 2: creation(space, 2)}
    g = {1: out.gamma1, 2: out.gamma2}
    num = 0.0 + 0.0j
    for j, k, l, m in itertools.product((1, 2), repeat=4):
        w = math.sqrt(g[j] * g[k] * g[l] * g[m])
        if w:
            num += w * expectation(ad[j] @ ad[k] @ a[l] @ a[m], rho)
    n = n_out_expanded(rho, out, space)
    if not n > 0:
        raise ZeroOutputError("output occupation is zero; g2 undefined")
    return num.real / n**2


def correlations(rho, out: OutputMode, space: FockSpace | None = None) -> CorrelationResult:
    n = n_out(rho, out, space)
    g = g2_out(rho, out, space) if n > 0 else float("nan")
    return CorrelationResult(n_out=n, g2_out=g)
