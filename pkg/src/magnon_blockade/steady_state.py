"""Liouvillian construction and steady-state solvers.

Vectorization uses column stacking: vec(A X B) = (B^T kron A) vec(X).
With that convention the generator reads

    L = -i (I kron H - H^T kron I)
        + sum_o (kappa_o / 2) [2 conj(o) kron o - I kron o^dag o - (o^dag o)^T kron I]

which reproduces d rho / dt = -i [H, rho] + sum_o (kappa_o/2) (2 o rho o^dag
- o^dag o rho - rho o^dag o).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .model import ModelParams, build_dissipators, build_effective_hamiltonian
from .operators import DensityMatrix, HilbertSpec, QuantumOperator

#: Largest Hilbert dimension D for which a D^2 x D^2 generator is built.
MAX_HILBERT_DIM = 500

#: Residual bound for the direct solve, relative to the generator norm.
RESIDUAL_RTOL = 1e-10


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix."""
    return rho.reshape(-1, order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    return v.reshape((dim, dim), order="F")


@dataclass(frozen=True)
class Liouvillian:
    """Sparse generator acting on column-stacked density matrices."""

    matrix: sp.csr_matrix
    spec: HilbertSpec

    @property
    def dim(self) -> int:
        return self.spec.dim

    def trace_residual(self) -> float:
        """Max entry of vec(I)^T L; zero for a trace-preserving generator."""
        ident = vectorize(np.eye(self.dim, dtype=complex))
        return float(np.max(np.abs(ident @ self.matrix)))


def liouvillian_matrix(
    h: np.ndarray, dissipators: list[tuple[np.ndarray, float]]
) -> sp.csr_matrix:
    """Generator from a Hamiltonian and (collapse operator, rate) pairs."""
    d = h.shape[0]
    ident = sp.identity(d, dtype=complex, format="csr")
    h_s = sp.csr_matrix(h)
    lv = -1j * (sp.kron(ident, h_s) - sp.kron(h_s.T, ident))
    for op, rate in dissipators:
        o = sp.csr_matrix(op)
        odo = (o.conj().T @ o).tocsr()
        lv = lv + 0.5 * rate * (
            2.0 * sp.kron(o.conj(), o) - sp.kron(ident, odo) - sp.kron(odo.T, ident)
        )
    return lv.tocsr()


def build_liouvillian(p: ModelParams, spec: HilbertSpec | None = None) -> Liouvillian:
    spec = spec or p.hilbert_spec()
    if spec.dim > MAX_HILBERT_DIM:
        raise ValueError(
            f"Hilbert dimension {spec.dim} exceeds the generator cap "
            f"{MAX_HILBERT_DIM}; reduce the Fock cutoff or mode count"
        )
    h = build_effective_hamiltonian(p, spec).matrix
    dissipators = [(op.matrix, rate) for op, rate in build_dissipators(p, spec)]
    return Liouvillian(liouvillian_matrix(h, dissipators), spec)


class SteadyStateError(RuntimeError):
    pass


def solve_steady_state(lv: Liouvillian) -> DensityMatrix:
    """Unique steady state via L vec(rho) = 0 with one row traded for trace = 1.

    Falls back to a dense null-space extraction if the row-replaced system
    is too ill-conditioned to meet the residual bound.
    """
    d = lv.dim
    n = d * d
    ident_vec = vectorize(np.eye(d, dtype=complex))

    mat = lv.matrix.tolil(copy=True)
    mat[0, :] = ident_vec
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0

    if n <= 4096:
        v = np.linalg.solve(mat.toarray(), rhs)
    else:
        v = spla.spsolve(mat.tocsc(), rhs)

    l_norm = spla.norm(lv.matrix)
    residual = np.linalg.norm(lv.matrix @ v)
    if residual > RESIDUAL_RTOL * l_norm:
        v = _null_space_steady_state(lv)
        residual = np.linalg.norm(lv.matrix @ v)
        if residual > RESIDUAL_RTOL * l_norm:
            raise SteadyStateError(
                f"steady-state residual {residual:.3e} exceeds "
                f"{RESIDUAL_RTOL:.1e} * ||L|| = {RESIDUAL_RTOL * l_norm:.3e}"
            )

    rho = unvectorize(v, d)
    rho = rho / np.trace(rho)
    return DensityMatrix(rho, lv.spec)


def _null_space_steady_state(lv: Liouvillian) -> np.ndarray:
    """Debug path: eigendecomposition of the full generator."""
    n = lv.dim * lv.dim
    if n > 4096:
        raise SteadyStateError(
            "row-replaced solve failed and the generator is too large for the "
            "dense null-space fallback"
        )
    w, vecs = np.linalg.eig(lv.matrix.toarray())
    order = np.argsort(np.abs(w))
    if len(w) > 1 and np.abs(w[order[1]]) < 1e-10:
        raise SteadyStateError(
            "non-unique steady state: generator null space has rank > 1"
        )
    v = vecs[:, order[0]]
    rho = unvectorize(v, lv.dim)
    return vectorize(rho / np.trace(rho))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    w = np.linalg.eigvalsh(0.5 * ((a - b) + (a - b).conj().T))
    return 0.5 * float(np.sum(np.abs(w)))


def evolve_to_steady_state(
    p: ModelParams,
    rho0: DensityMatrix,
    t_final: float | None = None,
    dt_checkpoint: float | None = None,
    settle_tol: float = 1e-9,
    max_time_factor: float = 400.0,
) -> DensityMatrix:
    """Integrate the master equation until the state settles.

    Independent oracle for :func:`solve_steady_state`.  Runs an adaptive
    explicit Runge-Kutta scheme in checkpoint chunks; integration continues
    past t_final (default 20 / kappa) until the trace distance between
    successive checkpoints drops below settle_tol, and fails if that
    distance stops decreasing.
    """
    spec = rho0.spec
    lv = build_liouvillian(p, spec)
    t_final = t_final if t_final is not None else 20.0 / p.decay
    chunk = dt_checkpoint if dt_checkpoint is not None else 5.0 / p.decay
    mat = lv.matrix

    def rhs(_t, v):
        return mat @ v

    v = vectorize(rho0.matrix)
    prev = unvectorize(v, spec.dim)
    t = 0.0
    last_dist = np.inf
    while True:
        sol = solve_ivp(
            rhs,
            (t, t + chunk),
            v,
            method="RK45",
            rtol=1e-9,
            atol=1e-12,
            dense_output=False,
        )
        if not sol.success:
            raise SteadyStateError(f"integrator failed: {sol.message}")
        v = sol.y[:, -1]
        t += chunk
        cur = unvectorize(v, spec.dim)
        dist = trace_distance(cur, prev)
        if t >= t_final and dist < settle_tol:
            break
        if t > max_time_factor / p.decay:
            if dist >= last_dist:
                raise SteadyStateError(
                    "time evolution is not converging to a steady state "
                    f"(checkpoint distance {dist:.3e})"
                )
            raise SteadyStateError(
                f"time evolution did not settle below {settle_tol:.1e} "
                f"within t = {max_time_factor}/kappa (distance {dist:.3e})"
            )
        prev = cur
        last_dist = dist
    rho = unvectorize(v, spec.dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho)
    return DensityMatrix(rho, spec)


class TruncationError(RuntimeError):
    pass


def converge_truncation(
    p: ModelParams,
    observable,
    tol: float = 1e-3,
    n_max_start: int = 2,
    n_max_limit: int = 8,
):
    """Escalate the Fock cutoff until the observable stops moving.

    observable maps a steady-state DensityMatrix to a float.  Returns
    (value, n_max_used).  Raises TruncationError with the observed trend if
    the relative change has not dropped below tol by n_max_limit.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    trend = []
    previous = None
    for n_max in range(n_max_start, n_max_limit + 1):
        rho = solve_steady_state(build_liouvillian(p.with_(fock_cutoff=n_max)))
        value = observable(rho)
        trend.append((n_max, value))
        if previous is not None:
            scale = max(abs(value), abs(previous), 1e-300)
            if abs(value - previous) / scale < tol:
                # n_max - 1 already sufficed: report the smaller cutoff.
                return value, n_max - 1
        previous = value
    raise TruncationError(
        f"observable did not converge to rtol {tol} by fock cutoff "
        f"{n_max_limit}; trend: {trend}"
    )
