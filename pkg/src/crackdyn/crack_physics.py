"""Crack flexibility models and the physical <-> non-dimensional transformation.

Lengths are mapped onto the interval (0, pi), deflections are measured in
radii of gyration and time in units of ``1 / omega0``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CrackKind",
    "CrackSpec",
    "PhysicalBeam",
    "NondimSummary",
    "NondimModel",
    "flexibility_double_sided",
    "flexibility_single_sided",
    "resolve_flexibility",
    "nondimensionalize",
    "summarize",
    "natural_frequencies",
    "field_to_physical",
    "field_to_nondim",
    "load_to_nondim",
    "MIN_FLEXIBILITY",
    "MIN_SEPARATION",
]

log = logging.getLogger(__name__)

#: cracks whose non-dimensional flexibility falls below this are dropped
MIN_FLEXIBILITY = 1e-14
#: minimum distance between cracks, and between a crack and an end
MIN_SEPARATION = 1e-6

_DOUBLE_COEFS = (0.535, -0.929, 3.500, -3.181, 5.793)
_SINGLE_COEFS = (0.6384, -1.035, 3.7201, -5.1773, 7.553, -7.332)


class CrackKind(str, enum.Enum):
    SINGLE_SIDED = "single_sided"
    DOUBLE_SIDED = "double_sided"
    DIRECT = "direct"


def _check_ratio(height, mu_hat):
    if not height > 0:
        raise ValueError(f"section height must be positive, got {height!r}")
    if not 0.0 <= mu_hat < 1.0:
        raise ValueError(f"crack depth ratio must lie in [0, 1), got {mu_hat!r}")


def _flexibility(height, mu_hat, coefs):
    _check_ratio(height, mu_hat)
    poly = 0.0
    for a in reversed(coefs):
        poly = poly * mu_hat + a
    if poly < 0.0:
        # the single-sided fit turns negative for deep cracks (mu_hat > ~0.84)
        raise ValueError(f"depth ratio {mu_hat!r} lies outside the range of the flexibility fit")
    return 6.0 * math.pi * height * mu_hat**2 * poly


def flexibility_double_sided(height: float, mu_hat: float) -> float:
    """Rotational-spring flexibility of a double-sided crack.

    Parameters
    ----------
    height : float
        Half-height of the rectangular cross-section.
    mu_hat : float
        Crack depth ratio ``a / height`` in [0, 1).

    Returns
    -------
    float
        Flexibility ``EI / k`` in the length unit of `height`.
    """
    return _flexibility(height, mu_hat, _DOUBLE_COEFS)


def flexibility_single_sided(height: float, mu_hat: float) -> float:
    """Rotational-spring flexibility of a single-sided crack.

    Same as :func:`flexibility_double_sided` except that `height` is the
    full section height. The polynomial fit is negative for depth ratios
    above about 0.84; those raise ``ValueError``.
    """
    return _flexibility(height, mu_hat, _SINGLE_COEFS)


@dataclass(frozen=True)
class CrackSpec:
    """A crack: its position, and either a depth ratio or a direct flexibility."""

    position: float
    kind: CrackKind = CrackKind.DIRECT
    depth_ratio: float = 0.0
    flexibility: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CrackKind(self.kind))
        if not 0.0 <= self.depth_ratio < 1.0:
            raise ValueError(f"depth_ratio must lie in [0, 1), got {self.depth_ratio!r}")
        if not self.flexibility >= 0.0:
            raise ValueError(f"flexibility must be nonnegative, got {self.flexibility!r}")


def resolve_flexibility(crack: CrackSpec, height: float) -> float:
    """Flexibility of `crack` in the units of `height` (or as given for ``direct``)."""
    if crack.kind is CrackKind.DOUBLE_SIDED:
        return flexibility_double_sided(height, crack.depth_ratio)
    if crack.kind is CrackKind.SINGLE_SIDED:
        return flexibility_single_sided(height, crack.depth_ratio)
    return float(crack.flexibility)


@dataclass(frozen=True)
class PhysicalBeam:
    """Dimensional description of a hinged beam or shallow arch (SI units).

    ``axial_force`` is the initial axial force, positive in tension.
    ``section_height`` is the half-height for double-sided cracks and the
    full height for single-sided ones; supply the value matching the crack
    kinds in use.
    """

    length: float
    youngs_modulus: float
    area_moment: float
    cross_section_area: float
    density: float
    damping: float = 0.0
    viscosity: float = 0.0
    axial_force: float = 0.0
    section_height: float = 1.0
    cracks: tuple[CrackSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cracks", tuple(self.cracks))
        for name in ("length", "youngs_modulus", "area_moment",
                     "cross_section_area", "density", "section_height"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        for name in ("damping", "viscosity"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be nonnegative, got {value!r}")
        if not math.isfinite(self.axial_force):
            raise ValueError("axial_force must be finite")
        prev = 0.0
        for i, crack in enumerate(self.cracks):
            if not prev < crack.position < self.length or (i > 0 and crack.position <= prev):
                raise ValueError(
                    f"crack {i} at {crack.position!r}: positions must be strictly "
                    f"increasing inside (0, {self.length!r})"
                )
            prev = crack.position

    @property
    def flexural_rigidity(self) -> float:
        return self.youngs_modulus * self.area_moment


@dataclass(frozen=True)
class NondimSummary:
    omega0: float
    gyration_radius: float
    beta: float
    energy_factor: float


@dataclass(frozen=True)
class NondimModel:
    """Non-dimensional cracked beam on (0, pi)."""

    crack_positions: tuple[float, ...] = ()
    flexibilities: tuple[float, ...] = ()
    beta: float = 0.0
    c_d: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        xs = tuple(float(x) for x in self.crack_positions)
        th = tuple(float(t) for t in self.flexibilities)
        object.__setattr__(self, "crack_positions", xs)
        object.__setattr__(self, "flexibilities", th)
        if len(xs) != len(th):
            raise ValueError("crack_positions and flexibilities differ in length")
        bounds = (0.0, *xs, math.pi)
        gaps = np.diff(bounds)
        if np.any(gaps < MIN_SEPARATION):
            raise ValueError(
                f"crack positions must be increasing in (0, pi) and at least "
                f"{MIN_SEPARATION:g} apart (and from the ends): {xs}"
            )
        if any(not (t > 0 and math.isfinite(t)) for t in th):
            raise ValueError(f"flexibilities must be positive and finite: {th}")
        if not math.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if self.c_d < 0 or self.mu < 0:
            raise ValueError("c_d and mu must be nonnegative")

    @property
    def n_cracks(self) -> int:
        return len(self.crack_positions)

    @property
    def breakpoints(self) -> np.ndarray:
        """Segment end points ``0, x_1, ..., x_m, pi``."""
        return np.array([0.0, *self.crack_positions, math.pi])


def summarize(pb: PhysicalBeam) -> NondimSummary:
    EI = pb.flexural_rigidity
    rho_a = pb.density * pb.cross_section_area
    omega0 = (math.pi / pb.length) ** 2 * math.sqrt(EI / rho_a)
    r = math.sqrt(pb.area_moment / pb.cross_section_area)
    beta = pb.length**2 * pb.axial_force / (
        pb.youngs_modulus * pb.cross_section_area * math.pi * r**2
    )
    e_i = (math.pi / pb.length) ** 3 * r**2 * EI
    return NondimSummary(omega0=omega0, gyration_radius=r, beta=beta, energy_factor=e_i)


def nondimensionalize(pb: PhysicalBeam) -> tuple[NondimModel, NondimSummary]:
    """Map a physical beam onto the non-dimensional problem on (0, pi).

    Crack flexibilities are resolved from their kind first and then scaled
    by ``pi / L``. Cracks whose scaled flexibility is below
    :data:`MIN_FLEXIBILITY` are dropped with a warning.
    """
    summary = summarize(pb)
    scale = math.pi / pb.length
    xs, thetas = [], []
    for i, crack in enumerate(pb.cracks):
        theta = resolve_flexibility(crack, pb.section_height) * scale
        if theta < MIN_FLEXIBILITY:
            log.warning("crack %d at %g has negligible flexibility %g; dropped",
                        i, crack.position, theta)
            continue
        xs.append(crack.position * scale)
        thetas.append(theta)
    c_d = pb.damping / (pb.density * pb.cross_section_area * summary.omega0)
    model = NondimModel(tuple(xs), tuple(thetas), beta=summary.beta, c_d=c_d, mu=pb.viscosity)
    return model, summary


def natural_frequencies(lambdas, pb: PhysicalBeam) -> list[float]:
    """Natural frequencies (rad/s) from non-dimensional eigenvalue roots."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.size and (np.any(lam <= 0) or np.any(np.diff(lam) < 0)):
        raise ValueError("lambdas must be positive and sorted increasing")
    omega0 = summarize(pb).omega0
    return [float(x) for x in lam**2 * omega0]


def field_to_physical(pb: PhysicalBeam, x, y, t):
    """Map non-dimensional samples ``(x, y, t)`` to physical ``(x, y, t)``."""
    s = summarize(pb)
    x = np.asarray(x, dtype=float) * pb.length / math.pi
    y = np.asarray(y, dtype=float) * s.gyration_radius
    t = np.asarray(t, dtype=float) / s.omega0
    return x, y, t


def field_to_nondim(pb: PhysicalBeam, x, y, t):
    """Inverse of :func:`field_to_physical`."""
    s = summarize(pb)
    x = np.asarray(x, dtype=float) * math.pi / pb.length
    y = np.asarray(y, dtype=float) / s.gyration_radius
    t = np.asarray(t, dtype=float) * s.omega0
    return x, y, t


def load_to_nondim(pb: PhysicalBeam, p):
    """Scale a distributed load (N/m) to its non-dimensional value."""
    r = summarize(pb).gyration_radius
    return np.asarray(p, dtype=float) / (pb.flexural_rigidity * r) * (pb.length / math.pi) ** 4
