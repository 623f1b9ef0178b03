"""Energies, operators and gradients on the modal coefficient space.

A field is ``y = sum_k c_k phi_k`` over the eigenfunctions of a
:class:`~crackdyn.modal_solver.ModalBasis`. The bending operator is diagonal
there (``lam_k**4``); the slope operator is the Gram matrix
``G_ij = (phi_i', phi_j')_H``, which is its weak form. The point masses
that the strong form of the slope operator carries at the cracks never
have to be formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modal_solver import ModalBasis, evaluate

__all__ = [
    "State",
    "EnergyReport",
    "apply_A",
    "apply_B",
    "energy_kinetic",
    "energy_bending",
    "energy_axial",
    "energies",
    "grad_Ub",
    "grad_Ua",
    "reconstruct_field",
    "crack_slopes",
]


@dataclass(frozen=True)
class State:
    """Modal coefficients ``c`` and their time derivatives ``v``."""

    c: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        v = np.array(self.v, dtype=float)
        if c.shape != v.shape or c.ndim != 1:
            raise ValueError("c and v must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(v))):
            raise ValueError("state has non-finite entries")
        c.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "v", v)

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n), np.zeros(n))

    @property
    def n(self) -> int:
        return self.c.size


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    bending: float
    axial: float

    @property
    def total(self) -> float:
        return self.kinetic + self.bending + self.axial


def _check(basis, c):
    c = np.asarray(c, dtype=float)
    if c.shape != (basis.n,):
        raise ValueError(f"expected {basis.n} modal coefficients, got shape {c.shape}")
    return c


def apply_A(basis: ModalBasis, c):
    """Bending operator in its own eigenbasis: ``lam_k**4 c_k``."""
    return basis.eigenvalues * _check(basis, c)


def apply_B(basis: ModalBasis, c):
    """Slope operator ``<B u, v> = (u', v')_H`` projected on the basis: ``G c``."""
    return basis.gram @ _check(basis, c)


def energy_kinetic(v) -> float:
    v = np.asarray(v, dtype=float)
    return 0.5 * float(v @ v)


def energy_bending(basis: ModalBasis, c) -> float:
    c = _check(basis, c)
    return 0.5 * float(np.sum(basis.eigenvalues * c * c))


def _axial_factor(basis, c, beta):
    return beta + 0.5 * float(c @ (basis.gram @ c))


def energy_axial(basis: ModalBasis, c, beta: float) -> float:
    """``(beta + |y'|_H**2 / 2)**2 / (2 pi)``."""
    c = _check(basis, c)
    return _axial_factor(basis, c, beta) ** 2 / (2.0 * math.pi)


def energies(basis: ModalBasis, state: State, beta: float = 0.0, arch: bool = True) -> EnergyReport:
    """Kinetic, bending and (for an arch) axial energy of `state`."""
    axial = energy_axial(basis, state.c, beta) if arch else 0.0
    return EnergyReport(energy_kinetic(state.v), energy_bending(basis, state.c), axial)


def grad_Ub(basis: ModalBasis, c):
    return apply_A(basis, c)


def grad_Ua(basis: ModalBasis, c, beta: float):
    """Gradient of the axial energy: ``(beta + c.G.c / 2) G c / pi``."""
    c = _check(basis, c)
    Gc = basis.gram @ c
    return (beta + 0.5 * float(c @ Gc)) * Gc / math.pi


def reconstruct_field(basis: ModalBasis, c, x, order=0, side="right"):
    """``sum_k c_k phi_k^(order)(x)``; right limits at cracks unless ``side="left"``."""
    c = _check(basis, c)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x)
    for ck, phi in zip(c, basis.pairs):
        if ck != 0.0:
            out += ck * evaluate(phi, x, order, side)
    return out


def crack_slopes(basis: ModalBasis, c):
    """Left and right slope of the field at every crack, shape ``(m, 2)``."""
    xs = np.array(basis.model.crack_positions)
    if xs.size == 0:
        return np.zeros((0, 2))
    left = reconstruct_field(basis, c, xs, 1, "left")
    right = reconstruct_field(basis, c, xs, 1, "right")
    return np.column_stack([left, right])
