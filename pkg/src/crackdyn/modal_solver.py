"""Eigenpairs of the cracked hinged beam operator by state-vector transfer matrices.

On every segment the eigenfunctions solve ``u'''' = lam**4 u``; at a crack
the state ``(u, u', u'', u''')`` is continuous except for the slope, which
jumps by ``theta * u''``. Both ends are hinged (``u = u'' = 0``).

Internally states are carried in the scaled form
``z = (u, u'/lam, u''/lam**2, u'''/lam**3)``. The two solutions leaving
``x = 0`` are re-orthonormalized after every sub-step of length at most
``SUBSTEP / lam``; this keeps the pair from collapsing onto the growing
exponential, while the triangular factors have positive diagonals so the
sign and zero set of the characteristic determinant are unchanged.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .crack_physics import NondimModel
from .errors import EigenSolveError, RootSearchError
from .quadrature import adaptive_integrate

__all__ = [
    "Eigenpair",
    "ModalBasis",
    "krylov_duncan",
    "segment_propagator",
    "crack_jump_matrix",
    "characteristic_value",
    "find_eigenvalues",
    "build_eigenfunction",
    "evaluate",
    "inner_product",
    "gram_matrix",
    "bending_form_matrix",
    "derivative_products",
    "modal_basis",
]

#: largest lam * dx between re-orthonormalizations
SUBSTEP = 1.0
_EXP_SPLIT = 30.0
_LAMBDA_MIN = 1e-3


def krylov_duncan(s):
    """Krylov-Duncan functions ``S, T, U, V`` of ``s = lam * dx``.

    ``S = (cosh + cos)/2``, ``T = (sinh + sin)/2``, ``U = (cosh - cos)/2``,
    ``V = (sinh - sin)/2``. For ``s > 30`` the hyperbolic parts are formed
    as ``exp(s)/2 * (1 +- exp(-2 s))``.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s > 700.0):
        raise OverflowError("lam * dx too large for a single propagator; split the interval")
    big = s > _EXP_SPLIT
    with np.errstate(over="ignore"):
        ch = np.where(big, 0.5 * np.exp(s) * (1.0 + np.exp(-2.0 * s)), np.cosh(s))
        sh = np.where(big, 0.5 * np.exp(s) * (1.0 - np.exp(-2.0 * s)), np.sinh(s))
    c, sn = np.cos(s), np.sin(s)
    return 0.5 * (ch + c), 0.5 * (sh + sn), 0.5 * (ch - c), 0.5 * (sh - sn)


def _scaled_propagator(s):
    S, T, U, V = krylov_duncan(s)
    return np.stack([
        np.stack([S, T, U, V], axis=-1),
        np.stack([V, S, T, U], axis=-1),
        np.stack([U, V, S, T], axis=-1),
        np.stack([T, U, V, S], axis=-1),
    ], axis=-2)


def segment_propagator(lam: float, dx: float) -> np.ndarray:
    """Fundamental matrix carrying ``(u, u', u'', u''')`` a distance `dx`.

    Exact for ``u'''' = lam**4 u``.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    if not dx >= 0:
        raise ValueError("dx must be nonnegative")
    powers = lam ** np.arange(4)
    return _scaled_propagator(lam * dx) * powers[:, None] / powers[None, :]


def crack_jump_matrix(theta: float) -> np.ndarray:
    """Map from the left to the right limit of the state across a crack."""
    m = np.eye(4)
    m[1, 2] = theta
    return m


def _orthonormalize(Y):
    """Gram-Schmidt on the two columns of a stack of 4x2 blocks.

    Returns ``Q`` and the upper-triangular ``R`` with ``Y = Q R``; the
    diagonal of ``R`` is positive.
    """
    y1, y2 = Y[..., 0], Y[..., 1]
    r11 = np.linalg.norm(y1, axis=-1)
    q1 = y1 / r11[..., None]
    r12 = np.sum(q1 * y2, axis=-1)
    y2 = y2 - r12[..., None] * q1
    # second pass keeps the columns orthogonal to working precision
    c = np.sum(q1 * y2, axis=-1)
    y2 = y2 - c[..., None] * q1
    r12 = r12 + c
    r22 = np.linalg.norm(y2, axis=-1)
    q2 = y2 / r22[..., None]
    R = np.zeros(Y.shape[:-2] + (2, 2))
    R[..., 0, 0], R[..., 0, 1], R[..., 1, 1] = r11, r12, r22
    return np.stack([q1, q2], axis=-1), R


def _substeps(length, lam_max):
    return max(1, math.ceil(lam_max * length / SUBSTEP))


def _sweep(model: NondimModel, lam, record=False):
    """Carry the hinged-start solution pair from 0 to pi.

    With ``record`` (scalar `lam` only) the orthonormal bases, the
    triangular factors and the knot abscissae are returned for back
    substitution.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    lam_max = float(lam.max())
    bps = model.breakpoints
    Y = np.zeros(lam.shape + (4, 2))
    Y[..., 1, 0] = 1.0
    Y[..., 3, 1] = 1.0
    trace = []  # per segment: (knot x, Q at knots, R factors leading to each following basis)
    for i in range(len(bps) - 1):
        a, b = bps[i], bps[i + 1]
        nsub = _substeps(b - a, lam_max)
        h = (b - a) / nsub
        P = _scaled_propagator(lam * h)
        if record:
            xs = a + h * np.arange(nsub + 1)
            xs[-1] = b
            Qs, Rs = [Y[0].copy()], []
        for _ in range(nsub):
            Y, R = _orthonormalize(P @ Y)
            if record:
                Qs.append(Y[0].copy())
                Rs.append(R[0])
        if record:
            trace.append((xs, Qs, Rs))
        if i < model.n_cracks:
            Y = Y.copy()
            Y[..., 1, :] += (model.flexibilities[i] * lam)[..., None] * Y[..., 2, :]
            Y, R = _orthonormalize(Y)
            if record:
                trace.append(("jump", Y[0].copy(), R[0]))
    return Y, trace


def characteristic_value(model: NondimModel, lam):
    """Sign-faithful characteristic determinant at `lam` (scalar or array).

    The value is a positive multiple of the 2x2 determinant of the
    ``(u(pi), u''(pi))`` components of the solutions started from
    ``(0, 1, 0, 0)`` and ``(0, 0, 0, 1)`` at ``x = 0``; it vanishes exactly
    at the eigenvalue roots.
    """
    scalar = np.ndim(lam) == 0
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("lam must be positive")
    Y, _ = _sweep(model, lam)
    det = Y[..., 0, 0] * Y[..., 2, 1] - Y[..., 0, 1] * Y[..., 2, 0]
    return float(det[0]) if scalar else det.reshape(lam.shape)


def _bisect(model, lo, hi, flo, tol):
    lo, hi, flo = lo.copy(), hi.copy(), flo.copy()
    for _ in range(200):
        if not np.any(hi - lo > tol):
            break
        mid = 0.5 * (lo + hi)
        fmid = characteristic_value(model, mid)
        left = np.sign(fmid) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)
        hit = fmid == 0.0
        lo = np.where(hit, mid, lo)
        hi = np.where(hit, mid, hi)
    return 0.5 * (lo + hi)


def find_eigenvalues(model: NondimModel, n: int, lambda_max=None, step=0.01, tol=1e-12):
    """First `n` eigenvalue roots ``lam_k`` (the operator eigenvalue is ``lam_k**4``).

    Sign changes of :func:`characteristic_value` are located on a uniform
    grid of spacing `step` and refined by bisection until the bracket is
    narrower than `tol`. If fewer than `n` roots are found the scan range
    grows by a factor 1.5, at most 8 times.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if lambda_max is None:
        lambda_max = max(n + 2.0, 2.0 * n)
    lo_edge = _LAMBDA_MIN
    roots = []
    for _ in range(9):
        count = max(1, math.ceil((lambda_max - lo_edge) / step))
        grid = lo_edge + step * np.arange(count + 1)
        grid[-1] = lambda_max
        f = characteristic_value(model, grid)
        exact = grid[1:][f[1:] == 0.0]
        idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
        if idx.size:
            roots.extend(_bisect(model, grid[idx], grid[idx + 1], f[idx], tol).tolist())
        roots.extend(exact.tolist())
        roots.sort()
        if len(roots) >= n:
            break
        lo_edge = float(grid[-1])
        lambda_max *= 1.5
    else:
        raise RootSearchError(
            f"found only {len(roots)} of {n} eigenvalues below lambda = {lo_edge:g}"
        )
    roots = roots[:n]
    gaps = np.diff(roots)
    if np.any(gaps < 1e-8):
        k = int(np.argmin(gaps))
        warnings.warn(
            f"near-degenerate eigenvalues lambda_{k + 1} = {roots[k]!r}, "
            f"lambda_{k + 2} = {roots[k + 1]!r}", RuntimeWarning, stacklevel=2,
        )
    return roots


@dataclass(frozen=True, eq=False)
class Eigenpair:
    """One normalized eigenfunction.

    ``segment_states[i]`` holds ``(phi, phi', phi'', phi''')`` at the left
    end of segment ``i`` (right limit at a crack). The knot arrays keep
    the state at the re-orthonormalization points, which evaluation
    propagates from.
    """

    lam: float
    model: NondimModel
    segment_states: np.ndarray
    norm: float
    knot_x: tuple = field(repr=False)
    knot_states: tuple = field(repr=False)

    @property
    def eigenvalue(self) -> float:
        return self.lam**4

    def __call__(self, x, order=0, side="right"):
        return evaluate(self, x, order, side)


def _null_vector(M, tol):
    _, s, vt = np.linalg.svd(M)
    scale = max(1.0, s[0])
    if s[0] < tol:
        raise EigenSolveError("boundary matrix vanishes: degenerate (double) eigenvalue")
    if s[1] > tol * scale:
        raise EigenSolveError(
            f"boundary matrix has full rank (sigma_min = {s[1]:.3g}); not an eigenvalue"
        )
    return vt[1]


def build_eigenfunction(model: NondimModel, lam: float, tol=1e-8) -> Eigenpair:
    """Eigenfunction for the root `lam`, normalized in H with ``phi'(0) > 0``."""
    lam = float(lam)
    Y, trace = _sweep(model, lam, record=True)
    Y = Y[0]
    a = _null_vector(Y[[0, 2], :], tol)

    # back substitution: the basis before a step is Q_prev = Op^-1 Q_new R,
    # so coefficients go back as a_prev = R^-1 a_new
    knot_x, knot_z = [None] * (model.n_cracks + 1), [None] * (model.n_cracks + 1)
    seg = model.n_cracks
    for item in reversed(trace):
        if isinstance(item[0], str):
            _, _, R = item
            a = np.linalg.solve(R, a)
            continue
        xs, Qs, Rs = item
        coeffs = [a]
        for R in reversed(Rs):
            a = np.linalg.solve(R, a)
            coeffs.append(a)
        coeffs.reverse()
        knot_x[seg] = xs
        knot_z[seg] = np.array([Q @ c for Q, c in zip(Qs, coeffs)])
        seg -= 1

    pair = Eigenpair(lam, model, np.empty((0, 4)), 1.0, tuple(knot_x), tuple(knot_z))
    norm = math.sqrt(inner_product(pair, pair))
    sign = 1.0
    z0 = knot_z[0][0]
    lead = z0[1] if abs(z0[1]) > 1e-12 * np.max(np.abs(z0)) else z0[3]
    if lead < 0:
        sign = -1.0
    knot_z = tuple(z * (sign / norm) for z in knot_z)
    powers = lam ** np.arange(4)
    starts = np.array([z[0] * powers for z in knot_z])
    return Eigenpair(lam, model, starts, norm, tuple(knot_x), knot_z)


def evaluate(phi: Eigenpair, x, order=0, side="right"):
    """Value of the `order`-th derivative of `phi` at `x` (scalar or array).

    At a crack abscissa the right limit is returned unless ``side="left"``.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be 0, 1, 2 or 3")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0) or np.any(x > math.pi):
        raise ValueError("x must lie in [0, pi]")
    bps = phi.model.breakpoints
    inner = bps[1:-1]
    if side == "right":
        seg = np.searchsorted(inner, x, side="right")
    else:
        seg = np.searchsorted(inner, x, side="left")
    return _evaluate_on_segments(phi, x, seg, order, scalar)


def _evaluate_on_segments(phi, x, seg, order, scalar=False):
    out = np.empty_like(x)
    for i in np.unique(seg):
        sel = seg == i
        kx, kz = phi.knot_x[i], phi.knot_states[i]
        k = np.clip(np.searchsorted(kx, x[sel], side="right") - 1, 0, len(kx) - 2)
        P = _scaled_propagator(phi.lam * (x[sel] - kx[k]))
        out[sel] = phi.lam**order * np.einsum("nj,nj->n", P[:, order, :], kz[k])
    return float(out[0]) if scalar else out


def _quad_width(lams):
    return SUBSTEP / max(1.0, max(lams))


def inner_product(phi: Eigenpair, psi: Eigenpair, order=0) -> float:
    """``(phi^(order), psi^(order))_H`` by adaptive composite Gauss-Legendre."""
    bps = phi.model.breakpoints

    def integrand(x, seg):
        return (_evaluate_on_segments(phi, x, seg, order)
                * _evaluate_on_segments(psi, x, seg, order))

    return float(adaptive_integrate(integrand, bps, _quad_width([phi.lam, psi.lam])))


def derivative_products(pairs, order):
    """Matrix of ``(phi_i^(order), phi_j^(order))_H`` over `pairs`."""
    if not pairs:
        return np.zeros((0, 0))
    bps = pairs[0].model.breakpoints

    def integrand(x, seg):
        vals = np.array([_evaluate_on_segments(p, x, seg, order) for p in pairs])
        return vals[:, None, :] * vals[None, :, :]

    G = adaptive_integrate(integrand, bps, _quad_width([p.lam for p in pairs]))
    return 0.5 * (G + G.T)


def bending_form_matrix(pairs) -> np.ndarray:
    """``sum_i (phi'', psi'')_i + sum_i J[phi'] J[psi'] / theta_i`` over `pairs`.

    Evaluated by quadrature and one-sided limits at the cracks, independent
    of the eigenvalues; for exact eigenpairs it is ``diag(lam**4)``.
    """
    pairs = list(pairs)
    A = derivative_products(pairs, 2)
    model = pairs[0].model
    for x, theta in zip(model.crack_positions, model.flexibilities):
        jumps = np.array([evaluate(p, x, 1, "right") - evaluate(p, x, 1, "left") for p in pairs])
        A = A + np.outer(jumps, jumps) / theta
    return A


def gram_matrix(pairs) -> np.ndarray:
    """``G_ij = (phi_i', phi_j')_H``, symmetrized."""
    return derivative_products(list(pairs), 1)


@dataclass(frozen=True, eq=False)
class ModalBasis:
    model: NondimModel
    pairs: tuple
    gram: np.ndarray

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.pairs])

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.lambdas**4

    @property
    def n(self) -> int:
        return len(self.pairs)


def modal_basis(model: NondimModel, n: int = 16, **scan) -> ModalBasis:
    """First `n` normalized eigenpairs of `model` and their slope Gram matrix."""
    lams = find_eigenvalues(model, n, **scan)
    pairs = tuple(build_eigenfunction(model, lam) for lam in lams)
    G = gram_matrix(pairs)
    G.flags.writeable = False
    return ModalBasis(model, pairs, G)
