"""Modal time integration of cracked beams and shallow arches.

The equation of motion ``y'' + dU_b(y) + dU_a(y) + mu A y' + c_d y' = p``
projected on ``n`` eigenfunctions reads, per mode,

    v_k' = g(t) P_k - lam_k**4 c_k - (mu lam_k**4 + c_d) v_k
           - (beta + c.G.c / 2) (G c)_k / pi        (arch only)

with ``c_k' = v_k``. A beam drops the axial term. Integration is classical
fixed-step RK4.
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .crack_physics import NondimModel
from .errors import InstabilityError
from .modal_algebra import State
from .modal_solver import ModalBasis, evaluate
from .quadrature import adaptive_integrate

__all__ = [
    "ModelKind",
    "LoadModel",
    "SimConfig",
    "Trajectory",
    "rhs",
    "step_rk4",
    "simulate",
    "STABILITY_LIMIT",
]

log = logging.getLogger(__name__)

#: advisory bound on dt * lam_max**2 for explicit RK4
STABILITY_LIMIT = 2.5
_ENERGY_BLOWUP = 1e6


class ModelKind(str, enum.Enum):
    BEAM = "beam"
    ARCH = "arch"


@dataclass(frozen=True)
class LoadModel:
    """Separable load ``p(x, t) = g(t) p(x)``.

    ``kind`` is ``"zero"``, ``"modal"`` (``modal`` holds the projections
    ``(p, phi_k)_H`` directly) or ``"uniform"`` (``p(x) = p0``). The time
    profile is ``"constant"`` (``g = 1``) or ``"sinusoid"``
    (``g = amplitude * sin(omega t + phase)``).
    """

    kind: str = "zero"
    p0: float = 0.0
    modal: tuple = ()
    profile: str = "constant"
    amplitude: float = 1.0
    omega: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "modal", "uniform"):
            raise ValueError(f"unknown load kind {self.kind!r}")
        if self.profile not in ("constant", "sinusoid"):
            raise ValueError(f"unknown load profile {self.profile!r}")
        object.__setattr__(self, "modal", tuple(float(a) for a in self.modal))

    @property
    def is_zero(self) -> bool:
        if self.kind == "zero":
            return True
        if self.kind == "uniform":
            return self.p0 == 0.0
        return not any(self.modal)

    def project(self, basis: ModalBasis) -> np.ndarray:
        """Modal amplitudes ``P_k = (p, phi_k)_H`` of the spatial profile."""
        n = basis.n
        if self.kind == "zero":
            return np.zeros(n)
        if self.kind == "modal":
            P = np.zeros(n)
            amps = np.asarray(self.modal)
            P[: min(n, amps.size)] = amps[:n]
            return P
        bps = basis.model.breakpoints
        width = 1.0 / max(1.0, float(basis.lambdas.max()))

        def integrand(x, seg):
            return np.array([evaluate(phi, x) for phi in basis.pairs])

        return self.p0 * adaptive_integrate(integrand, bps, width)

    def time_factor(self, t: float) -> float:
        if self.profile == "constant":
            return 1.0
        return self.amplitude * math.sin(self.omega * t + self.phase)


@dataclass(frozen=True)
class SimConfig:
    model_kind: ModelKind = ModelKind.BEAM
    t_final: float = 1.0
    dt: float = 1e-3
    initial_state: State | None = None
    record_every: int = 1

    def __post_init__(self):
        object.__setattr__(self, "model_kind", ModelKind(self.model_kind))
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_final > 0:
            raise ValueError("t_final must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be at least 1")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_final / self.dt)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded samples of a run.

    ``balance`` is ``E(t) - E(0) + dissipated work - external work``, which
    vanishes for the exact solution.
    """

    times: np.ndarray
    c: np.ndarray
    v: np.ndarray
    kinetic: np.ndarray
    bending: np.ndarray
    axial: np.ndarray
    balance: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.kinetic + self.bending + self.axial

    def state(self, i) -> State:
        return State(self.c[i], self.v[i])


@dataclass(frozen=True, eq=False)
class _System:
    """Precomputed arrays of the first-order system ``(c, v)``."""

    lam4: np.ndarray
    gram: np.ndarray
    damping: np.ndarray
    load: np.ndarray
    beta: float
    arch: bool
    c_d: float
    mu: float

    @classmethod
    def build(cls, basis, model, load, model_kind):
        lam4 = basis.eigenvalues
        return cls(
            lam4=lam4,
            gram=np.asarray(basis.gram),
            damping=model.mu * lam4 + model.c_d,
            load=load.project(basis),
            beta=model.beta,
            arch=ModelKind(model_kind) is ModelKind.ARCH,
            c_d=model.c_d,
            mu=model.mu,
        )

    def accel(self, g, c, v):
        a = g * self.load - self.lam4 * c - self.damping * v
        if self.arch:
            Gc = self.gram @ c
            a -= (self.beta + 0.5 * (c @ Gc)) / math.pi * Gc
        return a

    def energies(self, c, v):
        kin = 0.5 * (v @ v)
        bend = 0.5 * np.sum(self.lam4 * c * c)
        ax = 0.0
        if self.arch:
            ax = (self.beta + 0.5 * (c @ (self.gram @ c))) ** 2 / (2.0 * math.pi)
        return kin, bend, ax

    def dissipation_rate(self, v):
        return float(np.sum(self.damping * v * v))

    def power(self, g, v):
        return g * float(self.load @ v)

    def step(self, load, t, c, v, dt):
        h2 = 0.5 * dt
        g0 = load.time_factor(t)
        g1 = load.time_factor(t + h2)
        g2 = load.time_factor(t + dt)
        k1c, k1v = v, self.accel(g0, c, v)
        c2, v2 = c + h2 * k1c, v + h2 * k1v
        k2c, k2v = v2, self.accel(g1, c2, v2)
        c3, v3 = c + h2 * k2c, v + h2 * k2v
        k3c, k3v = v3, self.accel(g1, c3, v3)
        c4, v4 = c + dt * k3c, v + dt * k3v
        k4c, k4v = v4, self.accel(g2, c4, v4)
        c_new = c + dt / 6.0 * (k1c + 2.0 * (k2c + k3c) + k4c)
        v_new = v + dt / 6.0 * (k1v + 2.0 * (k2v + k3v) + k4v)
        return c_new, v_new


def rhs(basis: ModalBasis, model: NondimModel, load: LoadModel, t, state: State,
        model_kind=ModelKind.BEAM):
    """Time derivative ``(c', v')`` of the modal state."""
    if state.n != basis.n:
        raise ValueError(f"state has {state.n} modes, basis has {basis.n}")
    system = _System.build(basis, model, load, model_kind)
    return state.v.copy(), system.accel(load.time_factor(t), state.c, state.v)


def step_rk4(basis: ModalBasis, model: NondimModel, load: LoadModel, t, state: State, dt,
             model_kind=ModelKind.BEAM) -> State:
    """One classical RK4 step of size `dt` from time `t`."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if state.n != basis.n:
        raise ValueError(f"state has {state.n} modes, basis has {basis.n}")
    system = _System.build(basis, model, load, model_kind)
    c, v = system.step(load, t, state.c, state.v, dt)
    if not (np.all(np.isfinite(c)) and np.all(np.isfinite(v))):
        raise InstabilityError(f"non-finite state at t = {t + dt!r}", t + dt)
    return State(c, v)


def simulate(basis: ModalBasis, model: NondimModel, load: LoadModel, config: SimConfig) -> Trajectory:
    """Integrate from ``t = 0`` to ``config.t_final`` with fixed-step RK4.

    Samples are kept every ``record_every`` steps and at the final step.
    The dissipated and external work in the balance residual are
    accumulated with the trapezoid rule over every integration step.
    """
    n = basis.n
    state = config.initial_state or State.zeros(n)
    if state.n != n:
        raise ValueError(f"initial state has {state.n} modes, basis has {n}")
    dt = config.dt
    lam_max = float(basis.lambdas.max())
    if dt * lam_max**2 > STABILITY_LIMIT:
        warnings.warn(
            f"dt * lam_max**2 = {dt * lam_max**2:.3g} exceeds {STABILITY_LIMIT}; "
            "explicit RK4 may be unstable", RuntimeWarning, stacklevel=2,
        )

    system = _System.build(basis, model, load, config.model_kind)
    conservative = load.is_zero and model.c_d == 0.0 and model.mu == 0.0
    c, v = state.c.copy(), state.v.copy()
    n_steps = config.n_steps
    rec = [i for i in range(0, n_steps + 1, config.record_every)]
    if rec[-1] != n_steps:
        rec.append(n_steps)
    n_rec = len(rec)
    times = np.array(rec, dtype=float) * dt
    cs, vs = np.empty((n_rec, n)), np.empty((n_rec, n))
    kin, bend, ax, bal = (np.empty(n_rec) for _ in range(4))

    e0 = sum(system.energies(c, v))
    net_work = 0.0  # dissipated minus supplied
    rate = system.dissipation_rate(v) - system.power(load.time_factor(0.0), v)
    j = 0
    for i in range(n_steps + 1):
        if i == rec[j]:
            k, b, a = system.energies(c, v)
            e = k + b + a
            if conservative and e0 > 0 and e > _ENERGY_BLOWUP * e0:
                raise InstabilityError(f"energy grew by more than {_ENERGY_BLOWUP:g}x at t = {i * dt!r}", i * dt)
            cs[j], vs[j] = c, v
            kin[j], bend[j], ax[j] = k, b, a
            bal[j] = e - e0 + net_work
            j += 1
        if i == n_steps:
            break
        t = i * dt
        c, v = system.step(load, t, c, v, dt)
        if not (math.isfinite(float(np.sum(c))) and math.isfinite(float(np.sum(v)))):
            raise InstabilityError(f"non-finite state at t = {t + dt!r}", t + dt)
        new_rate = system.dissipation_rate(v) - system.power(load.time_factor(t + dt), v)
        net_work += 0.5 * dt * (rate + new_rate)
        rate = new_rate
    log.debug("simulated %d steps, %d records", n_steps, n_rec)
    return Trajectory(times, cs, vs, kin, bend, ax, bal)
