"""Dense symmetric eigensolver built on cyclic Jacobi rotations.

Kept in-repo (rather than delegating to LAPACK) so the verification layers
have a numerical route that is independent of the library eigensolvers used
as oracles in the test suite, with explicit control of the termination
tolerance.  Matrices here are small (at most a few hundred rows), where Jacobi
iteration is both simple and accurate.
"""

import numpy as np

from .errors import ConvergenceFailure

__all__ = ["jacobi_eigh", "offdiag_max"]

#: Termination: largest off-diagonal magnitude must fall below this factor
#: times the largest magnitude of the input matrix.
OFFDIAG_TOL_FACTOR = 1e-12

MAX_SWEEPS = 100


def offdiag_max(matrix):
    """Largest absolute off-diagonal entry."""
    if matrix.shape[0] < 2:
        return 0.0
    off = matrix.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.max(np.abs(off)))


def jacobi_eigh(matrix, tol_factor=OFFDIAG_TOL_FACTOR, max_sweeps=MAX_SWEEPS):
    """Full eigendecomposition of a real symmetric matrix.

    Repeatedly applies two-sided Givens rotations over all index pairs until
    every off-diagonal entry is at most ``tol_factor`` times the largest
    magnitude of the input.  Returns ``(values, vectors)`` with eigenvalues
    ascending and eigenvectors as the corresponding columns.

    Raises
    ------
    ValueError
        If the matrix is not square or not symmetric.
    ConvergenceFailure
        If the sweep budget is exhausted before reaching tolerance.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if n else 0.0
    if n and float(np.max(np.abs(a - a.T))) > 1e-12 * max(scale, 1.0):
        raise ValueError("matrix is not symmetric")
    vectors = np.eye(n)
    if n < 2 or scale == 0.0:
        values = np.diag(a).copy()
        order = np.argsort(values, kind="stable")
        return values[order], vectors[:, order]

    threshold = tol_factor * scale
    # rotating entries already far below threshold wastes sweeps without
    # improving the final off-diagonal maximum
    skip = 0.1 * threshold
    for sweep in range(max_sweeps + 1):
        if offdiag_max(a) <= threshold:
            break
        if sweep == max_sweeps:
            raise ConvergenceFailure(
                f"Jacobi iteration did not reach off-diagonal tolerance "
                f"{threshold:.3e} within {max_sweeps} sweeps "
                f"(current {offdiag_max(a):.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                # rotation angle annihilating a[p, q]
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p = vectors[:, p].copy()
                vectors[:, p] = c * vec_p - s * vectors[:, q]
                vectors[:, q] = s * vec_p + c * vectors[:, q]
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]
