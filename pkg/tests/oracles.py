"""Independent reference computations used to cross-check the solvers.

The cubic route below never touches the production eigensolver: the
characteristic polynomial det(K - lam*M) is sampled at four nodes, the
cubic coefficients are recovered from the Vandermonde system, and the three
real roots come out of the closed-form trigonometric solution.
"""

import math

import numpy as np


def det3(a: np.ndarray) -> complex:
    """3x3 determinant by cofactor expansion (no factorization library)."""
    return (a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]))


def _real_cubic_roots(c3: float, c2: float, c1: float, c0: float):
    """All-real roots of c3 x^3 + c2 x^2 + c1 x + c0 (Hermitian pencil case)."""
    a = c2 / c3
    b = c1 / c3
    c = c0 / c3
    # depressed cubic t^3 + p t + q with x = t - a/3
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    shift = -a / 3.0
    if p >= 0.0:
        # degenerate (near-triple root); p > 0 cannot happen for three
        # real roots except by roundoff
        t = -np.cbrt(q)
        return sorted((t + shift,) * 3)
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = max(-1.0, min(1.0, -4.0 * q / (m ** 3)))
    phi = math.acos(arg)
    roots = [m * math.cos((phi + 2.0 * math.pi * k) / 3.0) + shift
             for k in range(3)]
    return sorted(roots)


def cubic_pencil_eigenvalues(k_matrix: np.ndarray, m_matrix: np.ndarray):
    """Ascending eigenvalues of a 3x3 pencil via its characteristic cubic.

    The pencil is first equilibrated by the diagonal congruence
    D (K - lam M) D with D = diag(M)^(-1/2), which leaves the eigenvalues
    untouched but removes the many-decade row scaling that physical mass
    matrices carry; the polynomial is then sampled on nodes spanning the
    eigenvalue range so all four coefficients are well determined.
    """
    k_matrix = np.asarray(k_matrix, dtype=complex)
    m_matrix = np.asarray(m_matrix, dtype=complex)
    d = 1.0 / np.sqrt(np.real(np.diagonal(m_matrix)))
    k_eq = k_matrix * np.outer(d, d)
    m_eq = m_matrix * np.outer(d, d)
    scale = np.linalg.norm(k_eq) / np.linalg.norm(m_eq)
    if scale == 0.0:
        scale = 1.0
    nodes = scale * np.array([0.0, 1.0, 2.0, 3.0])
    samples = [det3(k_eq - t * m_eq).real for t in nodes]
    vander = np.vander(nodes, 4, increasing=True)
    c0, c1, c2, c3 = np.linalg.solve(vander, samples)
    return _real_cubic_roots(c3, c2, c1, c0)
