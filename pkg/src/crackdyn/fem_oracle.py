"""Hermite cubic finite elements for the cracked beam eigenproblem.

An independent check on the transfer-matrix solver. Displacement is
continuous everywhere; a crack node carries two slope unknowns (left and
right) coupled by a rotational spring of stiffness ``1 / theta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .crack_physics import NondimModel
from .errors import EigenSolveError

__all__ = [
    "FemMesh",
    "build_mesh",
    "assemble",
    "slope_matrix",
    "solve_modes",
    "bending_form",
    "fem_lambdas",
    "richardson",
    "extrapolated_lambdas",
    "interpolate",
    "crack_slope_jumps",
]


@dataclass(frozen=True, eq=False)
class FemMesh:
    """Nodes on [0, pi] and their degree-of-freedom numbering.

    ``w_dof[j]`` is the displacement unknown of node ``j`` (-1 where the
    hinge removes it); ``slope_left[j]`` and ``slope_right[j]`` differ only
    at crack nodes.
    """

    nodes: np.ndarray
    counts: tuple
    crack_nodes: tuple
    w_dof: np.ndarray
    slope_left: np.ndarray
    slope_right: np.ndarray
    n_dof: int

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1


def build_mesh(model: NondimModel, n_elements=None, counts=None) -> FemMesh:
    """Mesh with crack abscissae as nodes.

    Either give the total `n_elements` (spread over the segments in
    proportion to their lengths, at least one each) or explicit per-segment
    `counts`.
    """
    bps = model.breakpoints
    if counts is None:
        if n_elements is None or n_elements < 4:
            raise ValueError("n_elements must be at least 4")
        lengths = np.diff(bps)
        counts = tuple(max(1, int(round(n_elements * L / np.pi))) for L in lengths)
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(bps) - 1 or min(counts) < 1:
        raise ValueError("need a positive element count for every segment")

    pieces = [np.linspace(a, b, c + 1)[:-1] for a, b, c in zip(bps[:-1], bps[1:], counts)]
    nodes = np.append(np.concatenate(pieces), bps[-1])
    crack_nodes = tuple(int(k) for k in np.cumsum(counts)[:-1])

    n_nodes = len(nodes)
    w_dof = np.full(n_nodes, -1)
    slope_left = np.empty(n_nodes, dtype=int)
    slope_right = np.empty(n_nodes, dtype=int)
    cracks = set(crack_nodes)
    dof = 0
    for j in range(n_nodes):
        if 0 < j < n_nodes - 1:
            w_dof[j] = dof
            dof += 1
        slope_left[j] = dof
        dof += 1
        if j in cracks:
            slope_right[j] = dof
            dof += 1
        else:
            slope_right[j] = slope_left[j]
    return FemMesh(nodes, counts, crack_nodes, w_dof, slope_left, slope_right, dof)


def _element_matrices(h):
    k = np.array([
        [12.0, 6 * h, -12.0, 6 * h],
        [6 * h, 4 * h * h, -6 * h, 2 * h * h],
        [-12.0, -6 * h, 12.0, -6 * h],
        [6 * h, 2 * h * h, -6 * h, 4 * h * h],
    ]) / h**3
    m = np.array([
        [156.0, 22 * h, 54.0, -13 * h],
        [22 * h, 4 * h * h, 13 * h, -3 * h * h],
        [54.0, 13 * h, 156.0, -22 * h],
        [-13 * h, -3 * h * h, -22 * h, 4 * h * h],
    ]) * h / 420.0
    return k, m


def _element_dofs(mesh, e):
    return np.array([mesh.w_dof[e], mesh.slope_right[e], mesh.w_dof[e + 1], mesh.slope_left[e + 1]])


def assemble(model: NondimModel, n_elements=None, counts=None, mesh=None):
    """Stiffness and mass matrices of the cracked hinged beam.

    ``K`` discretizes ``sum_i (u'', v'')_i + sum_i J[u'] J[v'] / theta_i`` and
    ``M`` the H inner product. Element integrals are exact for cubics.

    Returns
    -------
    K, M : ndarray
        Dense symmetric matrices over the free unknowns.
    mesh : FemMesh
    """
    if any(t <= 0 for t in model.flexibilities):
        raise ValueError("crack flexibilities must be positive")
    if mesh is None:
        mesh = build_mesh(model, n_elements, counts)
    n = mesh.n_dof
    K = np.zeros((n, n))
    M = np.zeros((n, n))
    for e in range(mesh.n_elements):
        ke, me = _element_matrices(mesh.nodes[e + 1] - mesh.nodes[e])
        dofs = _element_dofs(mesh, e)
        keep = dofs >= 0
        idx = dofs[keep]
        K[np.ix_(idx, idx)] += ke[np.ix_(keep, keep)]
        M[np.ix_(idx, idx)] += me[np.ix_(keep, keep)]
    for j, theta in zip(mesh.crack_nodes, model.flexibilities):
        a, b = mesh.slope_left[j], mesh.slope_right[j]
        K[a, a] += 1.0 / theta
        K[b, b] += 1.0 / theta
        K[a, b] -= 1.0 / theta
        K[b, a] -= 1.0 / theta
    return K, M, mesh


def slope_matrix(mesh: FemMesh):
    """Matrix of ``(u', v')_H`` on the mesh (exact for cubics)."""
    n = mesh.n_dof
    G = np.zeros((n, n))
    for e in range(mesh.n_elements):
        h = mesh.nodes[e + 1] - mesh.nodes[e]
        ge = np.array([
            [36.0, 3 * h, -36.0, 3 * h],
            [3 * h, 4 * h * h, -3 * h, -h * h],
            [-36.0, -3 * h, 36.0, -3 * h],
            [3 * h, -h * h, -3 * h, 4 * h * h],
        ]) / (30.0 * h)
        dofs = _element_dofs(mesh, e)
        keep = dofs >= 0
        idx = dofs[keep]
        G[np.ix_(idx, idx)] += ge[np.ix_(keep, keep)]
    return G


def solve_modes(K, M, n):
    """Lowest `n` generalized eigenpairs ``K v = lam4 M v``, M-orthonormal.

    The pencil is solved in inverted form ``M v = (1/lam4) K v``: its
    rounding error is relative to the largest ``1/lam4``, which keeps the
    low modes accurate on fine meshes where ``K`` spans many decades.
    """
    dof = K.shape[0]
    if n > dof:
        raise ValueError(f"requested {n} modes from {dof} unknowns")
    try:
        scipy.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError("mass matrix is not positive definite") from exc
    try:
        inv, vecs = scipy.linalg.eigh(M, K, subset_by_index=[dof - n, dof - 1])
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(f"generalized eigensolve failed: {exc}") from exc
    vals = 1.0 / inv[::-1]
    vecs = vecs[:, ::-1]
    vecs /= np.sqrt(np.einsum("ij,ik,kj->j", vecs, M, vecs))
    return vals, vecs


def bending_form(model: NondimModel, mesh: FemMesh, vecs):
    """``sum_e int (w'')**2 + sum_i J[w']**2 / theta_i`` for each column of `vecs`.

    Summed element by element from the linear curvature on each element,
    which avoids the cancellation in ``v @ K @ v`` on fine meshes.
    """
    vecs = np.asarray(vecs, dtype=float)
    if vecs.ndim == 1:
        vecs = vecs[:, None]
    u = np.vstack([vecs, np.zeros((1, vecs.shape[1]))])
    e = np.arange(mesh.n_elements)
    h = np.diff(mesh.nodes)
    dofs = np.stack([mesh.w_dof[e], mesh.slope_right[e], mesh.w_dof[e + 1], mesh.slope_left[e + 1]])
    ue = u[dofs]  # (4, elements, columns)
    left = np.array([-6 / h**2, -4 / h, 6 / h**2, -2 / h])
    right = np.array([6 / h**2, 2 / h, -6 / h**2, 4 / h])
    a = np.einsum("ke,kec->ec", left, ue)
    b = np.einsum("ke,kec->ec", right, ue) - a
    total = np.sum(h[:, None] * (a * a + a * b + b * b / 3.0), axis=0)
    for j, theta in zip(mesh.crack_nodes, model.flexibilities):
        total += (vecs[mesh.slope_right[j]] - vecs[mesh.slope_left[j]]) ** 2 / theta
    return total


def fem_lambdas(model, n_modes, n_elements=None, counts=None):
    """``lam**4`` estimates of the lowest `n_modes` modes.

    The eigensolver values are replaced by Rayleigh quotients of the
    computed eigenvectors (second-order accurate in the vector error).
    """
    K, M, mesh = assemble(model, n_elements, counts)
    _, vecs = solve_modes(K, M, n_modes)
    mass = np.einsum("ij,ik,kj->j", vecs, M, vecs)
    return bending_form(model, mesh, vecs) / mass


def richardson(coarse, medium, fine):
    """Two-level Richardson extrapolation for errors ``C4 h**4 + C6 h**6``."""
    coarse, medium, fine = (np.asarray(a, dtype=float) for a in (coarse, medium, fine))
    r1 = (16.0 * medium - coarse) / 15.0
    r2 = (16.0 * fine - medium) / 15.0
    return (64.0 * r2 - r1) / 63.0


def extrapolated_lambdas(model, n_modes, n_elements=100, levels=(1, 2, 4)):
    """FEM ``lam`` on three nested meshes and the extrapolated ``lam``.

    Returns
    -------
    per_mesh : list of ndarray
        ``lam`` on each mesh (coarse first).
    extrapolated : ndarray
    """
    base = build_mesh(model, n_elements).counts
    lam4 = [fem_lambdas(model, n_modes, counts=[c * f for c in base]) for f in levels]
    extrapolated = richardson(*lam4)
    return [v**0.25 for v in lam4], np.abs(extrapolated) ** 0.25


def _shape_functions(xi, h, order):
    if order == 0:
        return np.array([1 - 3 * xi**2 + 2 * xi**3, h * (xi - 2 * xi**2 + xi**3),
                         3 * xi**2 - 2 * xi**3, h * (xi**3 - xi**2)])
    if order == 1:
        return np.array([(-6 * xi + 6 * xi**2) / h, 1 - 4 * xi + 3 * xi**2,
                         (6 * xi - 6 * xi**2) / h, 3 * xi**2 - 2 * xi])
    if order == 2:
        return np.array([(-6 + 12 * xi) / h**2, (-4 + 6 * xi) / h,
                         (6 - 12 * xi) / h**2, (-2 + 6 * xi) / h])
    raise ValueError("order must be 0, 1 or 2")


def interpolate(mesh: FemMesh, u, x, order=0, side="right"):
    """Evaluate the FEM field `u` (or its derivatives) at abscissae `x`."""
    u = np.append(np.asarray(u, dtype=float), 0.0)  # index -1 -> clamped zero
    x = np.atleast_1d(np.asarray(x, dtype=float))
    nodes = mesh.nodes
    if side == "right":
        e = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, mesh.n_elements - 1)
    else:
        e = np.clip(np.searchsorted(nodes, x, side="left") - 1, 0, mesh.n_elements - 1)
    out = np.empty_like(x)
    for k, (ek, xk) in enumerate(zip(e, x)):
        h = nodes[ek + 1] - nodes[ek]
        dofs = _element_dofs(mesh, ek)
        out[k] = _shape_functions((xk - nodes[ek]) / h, h, order) @ u[dofs]
    return out


def crack_slope_jumps(mesh: FemMesh, u):
    """Per crack: slope jump ``w'+ - w'-`` and the mean of the one-sided curvatures."""
    jumps, curv = [], []
    for j in mesh.crack_nodes:
        x = mesh.nodes[j]
        jumps.append(u[mesh.slope_right[j]] - u[mesh.slope_left[j]])
        left = interpolate(mesh, u, x, 2, side="left")[0]
        right = interpolate(mesh, u, x, 2, side="right")[0]
        curv.append(0.5 * (left + right))
    return np.array(jumps), np.array(curv)
