"""Principal component analysis via SVD of the centered data matrix."""

from __future__ import annotations

import numpy as np


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    # Sign convention: first nonzero coordinate of each component positive.
    fixed = basis.copy()
    for i, row in enumerate(fixed):
        nz = np.flatnonzero(np.abs(row) > 1e-12)
        if nz.size and row[nz[0]] < 0:
            fixed[i] = -row
    return fixed


def pca_fit(rows: np.ndarray, n_components: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (mean, basis) with ``basis`` the top components as orthonormal rows.

    Requires at least 2 rows and n_components <= min(len(rows) - 1, dim).
    """
    data = np.asarray(rows, dtype=np.float64)
    if data.ndim != 2 or data.shape[0] < 2:
        raise ValueError("need a 2-D array with at least 2 rows")
    max_rank = min(data.shape[0] - 1, data.shape[1])
    if not 1 <= n_components <= max_rank:
        raise ValueError(f"n_components must be in [1, {max_rank}], got {n_components}")
    mean = data.mean(axis=0)
    _, _, vt = np.linalg.svd(data - mean, full_matrices=False)
    return mean, _fix_signs(vt[:n_components])


def pca_project(rows: np.ndarray, mean: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return (np.atleast_2d(rows) - mean) @ basis.T


def pca_reconstruct(projected: np.ndarray, mean: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.atleast_2d(projected) @ basis + mean
