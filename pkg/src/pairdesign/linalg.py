"""Dense SPD linear algebra kernels shared by every selection engine.

All routines operate on plain numpy arrays. Matrices handed back to callers
are explicitly symmetrized so that rank-one update chains do not accumulate
asymmetric drift.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DegenerateUpdate, NotPositiveDefinite

# Denominator 1 + x^T A^-1 x is positive for SPD state; anything at or below
# this threshold signals corrupted state rather than a legitimate update.
_DEGENERATE_TOL = 1e-14


def symmetrize(m: np.ndarray) -> np.ndarray:
    """Average a matrix with its transpose."""
    return (m + m.T) * 0.5


def cholesky_factor(m: np.ndarray) -> np.ndarray:
    """Lower-triangular F with F @ F.T = m.

    Raises NotPositiveDefinite when a pivot is non-positive; callers treat
    this as a signal to rebuild their inverse state from scratch.
    """
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def gram_factor(m: np.ndarray) -> np.ndarray:
    """Upper-triangular U with U.T @ U = m.

    Applied to the inverse design matrix: with U in hand, the quadratic form
    x^T m x equals ||U x||^2.
    """
    return cholesky_factor(m).T.copy()


def invert_spd(m: np.ndarray) -> np.ndarray:
    """Invert an SPD matrix via its Cholesky factor and triangular solves."""
    f = cholesky_factor(m)
    inv = scipy.linalg.cho_solve((f, True), np.eye(m.shape[0]))
    return symmetrize(inv)


def _update_denominator(ainv: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, float]:
    ax = ainv @ x
    denom = 1.0 + float(x @ ax)
    if denom <= _DEGENERATE_TOL:
        raise DegenerateUpdate(f"1 + x^T A^-1 x = {denom!r}; inverse state is corrupted")
    return ax, denom


def sherman_morrison_downdate(ainv: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Return (A + x x^T)^-1 given A^-1, via the Sherman-Morrison formula."""
    ax, denom = _update_denominator(ainv, x)
    return symmetrize(ainv - np.outer(ax, ax) / denom)


def update_vector(ainv: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vector v with A^-1 - v v^T = (A + x x^T)^-1.

    Both scalar-update engines reuse v: its inner products with the sample
    features drive the O(1)-per-pair gain downdates.
    """
    ax, denom = _update_denominator(ainv, x)
    return ax / np.sqrt(denom)
