"""Dense generalized Hermitian eigensolver K v = omega^2 M v.

The pencil is reduced with a Cholesky factorization M = L L^H to a standard
Hermitian problem L^-1 K L^-H, which is diagonalized by cyclic Jacobi
rotations.  Jacobi is preferred over a closed-form cubic for the 3x3 blocks
because the transverse double roots of isotropic media are exact
degeneracies, where the rotation method keeps orthogonal eigenvectors
without any special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class EigenSolveError(Exception):
    """Base class for failures of the generalized eigensolver."""


class NotHermitianError(EigenSolveError):
    """Input matrix is not Hermitian within tolerance."""


class NotPositiveDefiniteError(EigenSolveError):
    """Mass matrix has a Cholesky pivot at or below the admissible floor."""


class NegativeEigenvalueError(EigenSolveError):
    """An eigenvalue is negative beyond the roundoff clamp (invalid pencil)."""


@dataclass(frozen=True)
class EigenSolution:
    """Eigenpairs of the pencil (K, M), sorted by ascending eigenvalue.

    Attributes:
        omega_sq: real eigenvalues [rad^2/s^2], ascending, ties allowed
        vectors: complex eigenvectors as columns, M-orthonormal (v^H M v = 1)
    """

    omega_sq: np.ndarray
    vectors: np.ndarray


def _assert_hermitian(a: np.ndarray, name: str, rel_tol: float) -> None:
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return
    if np.linalg.norm(a - a.conj().T) > rel_tol * scale:
        raise NotHermitianError(f"{name} deviates from its conjugate transpose "
                                f"by more than {rel_tol:g} relative")


def _cholesky_lower(m: np.ndarray, pivot_rel_tol: float) -> np.ndarray:
    """Lower Cholesky factor of a Hermitian positive definite matrix.

    Raises NotPositiveDefiniteError when a pivot falls below
    ``pivot_rel_tol * trace(M) / n``.
    """
    n = m.shape[0]
    floor = pivot_rel_tol * float(np.trace(m).real) / n
    lower = np.zeros((n, n), dtype=complex)
    for j in range(n):
        pivot = float(m[j, j].real) - float(np.sum(np.abs(lower[j, :j]) ** 2))
        if pivot <= floor:
            raise NotPositiveDefiniteError(
                f"Cholesky pivot {pivot:g} at index {j} is below floor {floor:g}")
        lower[j, j] = math.sqrt(pivot)
        for i in range(j + 1, n):
            acc = m[i, j] - np.dot(lower[i, :j], lower[j, :j].conj())
            lower[i, j] = acc / lower[j, j]
    return lower


def _hermitian_jacobi(a: np.ndarray, offdiag_rel_tol: float = 1e-14,
                      max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns (eigenvalues, unitary V) with A = V diag(w) V^H, unsorted.
    Iterates until the off-diagonal Frobenius norm drops to
    ``offdiag_rel_tol`` times the matrix norm.
    """
    n = a.shape[0]
    a = np.array(a, dtype=complex)
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        # off-diagonal norm summed directly; deriving it from the full norm
        # minus the diagonal loses the small entries to cancellation
        off_sq = float(np.sum(np.abs(a - np.diag(np.diagonal(a))) ** 2))
        if math.sqrt(off_sq) <= offdiag_rel_tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= offdiag_rel_tol * norm / n:
                    continue
                # Phase factor turns the 2x2 sub-problem real symmetric,
                # then a classical rotation annihilates the off-diagonal.
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # column p' = c*col_p - s*conj(phase)*col_q
                # column q' = s*phase*col_p + c*col_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p - s * np.conj(phase) * vcol_q
                v[:, q] = s * phase * vcol_p + c * vcol_q
    return np.real(np.diagonal(a)).copy(), v


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-magnitude component is real positive."""
    idx = int(np.argmax(np.abs(vec)))
    pivot = vec[idx]
    mag = abs(pivot)
    if mag == 0.0:
        return vec
    return vec * (np.conj(pivot) / mag)


def general_eig(k_matrix: np.ndarray, m_matrix: np.ndarray, *,
                hermitian_rel_tol: float = 1e-12,
                pivot_rel_tol: float = 1e-14,
                offdiag_rel_tol: float = 1e-14,
                clamp_rel_tol: float = 1e-9) -> EigenSolution:
    """Solve K v = w M v for a Hermitian K and Hermitian PD M.

    Eigenvalues come back ascending (stable order on ties) and eigenvectors
    M-orthonormal with the phase fixed so that the largest-magnitude
    component is real and positive.  Small negative eigenvalues (roundoff on
    a positive semidefinite K) are clamped to zero; negatives beyond
    ``clamp_rel_tol * |K| / |M|`` raise NegativeEigenvalueError.
    """
    k_matrix = np.asarray(k_matrix, dtype=complex)
    m_matrix = np.asarray(m_matrix, dtype=complex)
    _assert_hermitian(k_matrix, "stiffness matrix", hermitian_rel_tol)
    _assert_hermitian(m_matrix, "mass matrix", hermitian_rel_tol)

    lower = _cholesky_lower(m_matrix, pivot_rel_tol)
    # B = L^-1 K L^-H, Hermitian by construction up to roundoff
    x = np.linalg.solve(lower, k_matrix)
    b = np.linalg.solve(lower, x.conj().T).conj().T
    b = 0.5 * (b + b.conj().T)

    w, v = _hermitian_jacobi(b, offdiag_rel_tol=offdiag_rel_tol)
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]

    k_norm = float(np.linalg.norm(k_matrix))
    m_norm = float(np.linalg.norm(m_matrix))
    scale = k_norm / m_norm if m_norm > 0.0 else 0.0
    if w.size and float(w[0]) < -clamp_rel_tol * scale:
        raise NegativeEigenvalueError(
            f"eigenvalue {w[0]:g} below -{clamp_rel_tol:g} * |K|/|M|")
    w = np.where(w < 0.0, 0.0, w)

    # back-transform and M-normalize
    vecs = np.linalg.solve(lower.conj().T, v)
    for j in range(vecs.shape[1]):
        nrm = float(np.real(vecs[:, j].conj() @ (m_matrix @ vecs[:, j])))
        vecs[:, j] = _fix_phase(vecs[:, j] / math.sqrt(nrm))
    return EigenSolution(omega_sq=w, vectors=vecs)
