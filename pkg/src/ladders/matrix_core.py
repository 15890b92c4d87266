"""Dense complex matrix arithmetic and spectral primitives.

All operators in this package are plain square ``numpy`` arrays of
``complex128``; vectors are 1-D arrays.  Functions here are pure and never
mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError

__all__ = [
    "EigenSystem",
    "adjoint",
    "commutator",
    "eigensystem",
    "matrix_exponential",
    "qmutator",
    "rank_one",
]


def as_operator(x, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex matrix, validating shape."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"{name} must be a nonempty square matrix, got shape {a.shape}")
    return a


def as_vector(x, name: str = "vector") -> np.ndarray:
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 1 or a.shape[0] == 0:
        raise ValueError(f"{name} must be a nonempty 1-D vector, got shape {a.shape}")
    return a


def adjoint(x) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(x, dtype=np.complex128).conj().T


def qmutator(x, y, q: float) -> np.ndarray:
    """Deformed bracket ``x @ y - q * (y @ x)``.

    Reduces to the commutator at ``q = 1`` and to the anticommutator at
    ``q = -1``.

    Parameters
    ----------
    x, y : array_like
        Square matrices of the same dimension.
    q : float
        Deformation parameter.

    Returns
    -------
    ndarray
        ``x @ y - q * y @ x``.
    """
    a = as_operator(x, "x")
    b = as_operator(y, "y")
    if a.shape != b.shape:
        raise ValueError(f"incompatible operands: shapes {a.shape} and {b.shape}")
    return a @ b - q * (b @ a)


def commutator(x, y) -> np.ndarray:
    """Ordinary commutator ``x @ y - y @ x``."""
    return qmutator(x, y, 1.0)


def rank_one(u, v) -> np.ndarray:
    """Outer product ``|u><v|`` with entry ``(j, k) = u[j] * conj(v[k])``."""
    a = as_vector(u, "u")
    b = as_vector(v, "v")
    if a.shape != b.shape:
        raise ValueError(f"incompatible operands: shapes {a.shape} and {b.shape}")
    return np.outer(a, b.conj())


@dataclass(frozen=True)
class EigenSystem:
    """Right eigenpairs of a square matrix.

    ``right_vectors[:, j]`` is the unit-norm eigenvector for ``values[j]``,
    with its first nonzero component rotated to be real positive so output is
    deterministic.  ``distinct`` is True when the smallest pairwise eigenvalue
    gap exceeds the separation threshold, the precondition for a reliable
    biorthogonal dual basis.
    """

    values: np.ndarray
    right_vectors: np.ndarray
    distinct: bool


def eigensystem(a, distinct_tol: float = 1e-8) -> EigenSystem:
    """Full right eigendecomposition with deterministic normalization.

    Eigenvalues are sorted by complex argument, ties broken by modulus.
    Raises :class:`ConvergenceError` if the underlying QR iteration fails.
    """
    m = as_operator(a)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc

    order = np.lexsort((np.abs(values), np.angle(values)))
    values = values[order]
    vectors = vectors[:, order]

    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        col = col / np.linalg.norm(col)
        mags = np.abs(col)
        lead = np.argmax(mags > 1e-12 * mags.max())
        phase = col[lead] / abs(col[lead])
        vectors[:, j] = col * phase.conjugate()

    n = values.shape[0]
    if n == 1:
        distinct = True
    else:
        gaps = np.abs(values[:, None] - values[None, :])
        gaps[np.diag_indices(n)] = np.inf
        distinct = bool(gaps.min() > distinct_tol * np.abs(values).max())
    return EigenSystem(values=values, right_vectors=vectors, distinct=distinct)


def matrix_exponential(x) -> np.ndarray:
    """Matrix exponential ``exp(x)``.

    Diagonal input is exponentiated entrywise (exact up to scalar rounding);
    the general case uses scaling-and-squaring.
    """
    m = as_operator(x)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if np.count_nonzero(m - np.diag(np.diagonal(m))) == 0:
        return np.diag(np.exp(np.diagonal(m)))
    return scipy.linalg.expm(m)
