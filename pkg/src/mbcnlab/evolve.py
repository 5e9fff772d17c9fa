"""Ground states by implicitly restarted Lanczos and Krylov time propagation.

The propagator builds a Lanczos basis with full reorthogonalization and
grows the subspace until the a-posteriori estimate
|duration| * beta_{m+1} * |[exp(-i*duration*T_m)]_{m,1}| drops below
tolerance; intervals that cannot converge at the maximum subspace size are
split in half.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .basis import FockState
from .errors import ConvergenceError, PropagationAccuracyError
from .hamiltonians import build_quench_step

DENSE_CUTOVER = 64          # below this dimension, solve densely
DEGENERACY_FACTOR = 10.0    # gap < factor * tol flags a degenerate ground state


@dataclass
class GroundStateResult:
    energy: float
    state: FockState
    gap: float | None
    residual: float
    warnings: tuple = ()

    @property
    def degenerate(self):
        return any("degenerate" in w for w in self.warnings)


def _fix_phase(vec):
    k = int(np.argmax(np.abs(vec)))
    ph = vec[k] / abs(vec[k])
    return vec / ph


def _gs_result(op, energy, vec, gap, tol):
    vec = _fix_phase(vec / np.linalg.norm(vec))
    residual = float(np.linalg.norm(op.matvec(vec) - energy * vec))
    warnings = ()
    if gap is not None and gap < DEGENERACY_FACTOR * tol:
        warnings = (f"degenerate ground state: gap estimate {gap:.3e}",)
    return GroundStateResult(float(energy), FockState(op.basis, vec), gap, residual, warnings)


def ground_state(op, tol=1e-9, max_iter=None, guess=None):
    """Minimal eigenpair of a Hermitian sparse operator.

    Returns energy, normalized state (largest amplitude phase-fixed to be
    real positive), the gap estimate to the next level and the residual
    norm. Degeneracy (gap < 10*tol) is reported as a warning on the
    result, not an error. `guess` warm-starts the Lanczos iteration.
    """
    dim = op.dimension
    if dim <= DENSE_CUTOVER:
        vals, vecs = np.linalg.eigh(op.matrix.toarray())
        gap = float(vals[1] - vals[0]) if dim > 1 else None
        return _gs_result(op, vals[0], vecs[:, 0], gap, tol)
    if op.matrix.nnz == 0:
        vec = np.zeros(dim, dtype=np.complex128)
        vec[0] = 1.0
        return _gs_result(op, 0.0, vec, 0.0, tol)

    if guess is not None:
        v0 = np.asarray(guess, dtype=np.complex128)
    else:
        # deterministic start; ARPACK's default random v0 would break
        # run-to-run reproducibility
        v0 = np.ones(dim, dtype=np.complex128) / np.sqrt(dim)
    maxiter = max_iter if max_iter is not None else dim * 100
    try:
        vals, vecs = spla.eigsh(op.matrix, k=2, which="SA", tol=tol * 1e-2, v0=v0, maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        best = None
        if exc.eigenvalues is not None and len(exc.eigenvalues) >= 1:
            vec = exc.eigenvectors[:, 0]
            best = float(np.linalg.norm(op.matvec(vec) - exc.eigenvalues[0] * vec))
        raise ConvergenceError(
            f"ground state did not converge within {maxiter} iterations", best_residual=best
        ) from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    result = _gs_result(op, vals[0], vecs[:, 0], float(vals[1] - vals[0]), tol)
    if result.residual > max(tol, tol * abs(result.energy)):
        raise ConvergenceError(
            f"ground-state residual {result.residual:.3e} exceeds tol {tol:.1e}",
            best_residual=result.residual,
        )
    return result


def _small_expm(alphas, betas, duration):
    """First column of exp(-1i*duration*T) for the tridiagonal Lanczos T."""
    a = np.asarray(alphas, dtype=np.float64)
    if a.size == 1:
        return np.exp(-1j * duration * a)
    b = np.asarray(betas, dtype=np.float64)[: a.size - 1]
    lam, S = sla.eigh_tridiagonal(a, b)
    return (S * np.exp(-1j * duration * lam)) @ S[0]


def _lanczos_expm(matvec, v0, duration, tol, m_max):
    """exp(-1i*duration*H) v0 on an adaptively grown Lanczos subspace.

    Returns (vector, error_estimate); vector is None when m_max was not
    enough to meet tol.
    """
    dim = v0.shape[0]
    m_cap = min(m_max, dim)
    beta0 = np.linalg.norm(v0)
    V = np.empty((m_cap, dim), dtype=np.complex128)
    V[0] = v0 / beta0
    alphas, betas = [], []
    m = 0
    while True:
        w = matvec(V[m])
        alphas.append(float(np.real(np.vdot(V[m], w))))
        # two-pass full reorthogonalization: keeps V orthonormal to machine
        # precision, which is what preserves the propagated norm
        for _ in range(2):
            w = w - (V[: m + 1].conj() @ w) @ V[: m + 1]
        b = float(np.linalg.norm(w))
        m += 1
        y = _small_expm(alphas, betas, duration)
        if b < 1e-14:  # happy breakdown: subspace is invariant, result exact
            return beta0 * (y @ V[:m]), 0.0
        err = abs(duration) * b * abs(y[-1])
        if err <= tol:
            return beta0 * (y @ V[:m]), err
        if m == m_cap:
            return None, err
        betas.append(b)
        V[m] = w / b


def propagate(op, state, duration, tol=1e-10, m_max=64, _depth=0):
    """Apply exp(-1i * H * duration) to a state (H Hermitian).

    Splits the interval recursively when the maximum Krylov dimension
    cannot reach the tolerance; raises PropagationAccuracyError when even
    the deepest splitting fails.
    """
    if duration == 0.0:
        return state.copy()
    amps = state.amplitudes
    if op.dimension == 1:
        h00 = op.matrix[0, 0] if op.matrix.nnz else 0.0
        return FockState(state.basis, amps * np.exp(-1j * duration * h00))
    vec, err = _lanczos_expm(op.matvec, amps, duration, tol, m_max)
    if vec is None:
        if _depth >= 12:
            raise PropagationAccuracyError(
                f"Krylov propagation stuck at error estimate {err:.3e} > tol {tol:.1e}",
                best_residual=err,
            )
        mid = propagate(op, state, duration / 2.0, tol=tol / 2.0, m_max=m_max, _depth=_depth + 1)
        return propagate(op, mid, duration / 2.0, tol=tol / 2.0, m_max=m_max, _depth=_depth + 1)
    return FockState(state.basis, vec)


def apply_random_quench_unitary(state, geometry, quench_spec, tol=1e-10):
    """Apply the eta-step random quench unitary; deterministic in the seed."""
    out = state.copy()
    for k in range(quench_spec.eta):
        h_k = build_quench_step(geometry, state.basis, quench_spec, k)
        out = propagate(h_k, out, quench_spec.t_step, tol=tol)
    return out
