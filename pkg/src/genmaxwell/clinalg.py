"""Small dense complex linear algebra used throughout the package.

Matrices and vectors are plain ``numpy`` complex arrays. The helpers here
add shape checking, deterministic eigenvalue ordering and a kernel
extractor with a fixed phase convention, which the dispersion and
verification code relies on for reproducible output.
"""

from __future__ import annotations

import numpy as np

#: Relative kernel tolerance used when none is given.
KERNEL_TOL = 1e-10

#: Condition number above which a pencil's leading matrix counts as singular.
PENCIL_COND_MAX = 1e12


class DimensionError(ValueError):
    """Raised when an operand has the wrong shape."""


class SingularPencilError(ArithmeticError):
    """Raised when the E-coefficient of a pencil is numerically singular."""


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionError(f"expected a 2-d matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _square(M) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def anticommutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B + B @ A


def max_abs(M) -> float:
    """Largest absolute entry, the residual norm used by all checks."""
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def sort_eigenvalues(values) -> np.ndarray:
    """Order complex numbers by real part, then imaginary part."""
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    return values[order]


def determinant(M) -> complex:
    """Determinant by LU factorisation with partial pivoting.

    >>> determinant(np.diag([2, 3j]))
    6j
    """
    M = _square(M)
    if not M.any():
        return 0j
    return complex(np.linalg.det(M))


def pencil_spectrum(A, B) -> np.ndarray:
    """Roots ``E`` of ``det(E*A - B) = 0``, i.e. the eigenvalues of ``A^-1 B``.

    Returned in deterministic order (real part, then imaginary part).
    Complex roots are kept as they are so that spurious branches stay
    visible to the caller.
    """
    A = _square(A)
    B = _square(B)
    if A.shape != B.shape:
        raise DimensionError(f"pencil matrices differ in shape: {A.shape} vs {B.shape}")
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > PENCIL_COND_MAX:
        raise SingularPencilError(f"leading pencil matrix is singular (cond={cond:.3g})")
    return sort_eigenvalues(np.linalg.eigvals(np.linalg.solve(A, B)))


def fix_phase(v: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    """Rotate ``v`` so that its first non-negligible component is real positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    if not mags.any():
        return v
    idx = int(np.argmax(mags > rel * mags.max()))
    return v * (abs(v[idx]) / v[idx])


def null_space(M, tol: float = KERNEL_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel of ``M``.

    A right singular vector belongs to the kernel when its singular value is
    at most ``tol`` times the largest one. ``M`` may be rectangular (the
    stacked spin-s system is overdetermined).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = as_matrix(M)
    n = M.shape[1]
    _, s, vh = np.linalg.svd(M)
    s_full = np.zeros(n)
    s_full[: s.size] = s
    smax = s_full.max()
    mask = s_full <= tol * smax
    return [fix_phase(vh[i].conj()) for i in np.flatnonzero(mask)]
