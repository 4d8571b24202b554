"""Dense matrix kernel: exponentials, rank, nonnegativity, monomial tests.

Matrices are plain float ndarrays.  Extended matrices (entries in R plus
+inf, used for the positivity matrix of a system on a dense scale) are
ndarrays containing ``math.inf``; they only ever get added and compared,
never multiplied or inverted.
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import NegativeHorizon, NotSquare

#: Default relative tolerance for rank/sign/monomial decisions.
DEFAULT_TOL = 1e-9


def as_matrix(X) -> np.ndarray:
    M = np.asarray(X, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def _require_square(X: np.ndarray) -> np.ndarray:
    if X.shape[0] != X.shape[1]:
        raise NotSquare(f"matrix of shape {X.shape} is not square")
    return X


def expm(X, s: float = 1.0) -> np.ndarray:
    """Matrix exponential e^(X s); exact identity at s == 0."""
    X = _require_square(as_matrix(X))
    if s == 0.0:
        return np.eye(X.shape[0])
    return scipy.linalg.expm(X * s)


def expm_integral(X, s: float) -> np.ndarray:
    """Integral of e^(X tau) for tau in [0, s], via the block-augmented exponential.

    The top-right block of exp([[X, I], [0, 0]] * s) is the integral.
    """
    X = _require_square(as_matrix(X))
    if s < 0:
        raise NegativeHorizon(f"integration horizon s = {s} is negative")
    n = X.shape[0]
    if s == 0.0:
        return np.zeros((n, n))
    blk = np.zeros((2 * n, 2 * n))
    blk[:n, :n] = X
    blk[:n, n:] = np.eye(n)
    return scipy.linalg.expm(blk * s)[:n, n:]


def rank(X, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above tol times the largest one."""
    X = as_matrix(X)
    if X.size == 0:
        return 0
    sv = np.linalg.svd(X, compute_uv=False)
    top = sv.max(initial=0.0)
    if top <= 0.0:
        return 0
    return int(np.sum(sv > tol * top))


def is_nonneg(X, tol: float = DEFAULT_TOL) -> bool:
    """True when every entry is >= -tol (inf entries count as nonnegative)."""
    return bool(np.all(np.asarray(X, dtype=float) >= -tol))


def monomial_index(v, tol: float = DEFAULT_TOL) -> int | None:
    """Index of the single positive entry of a monomial vector, else None.

    A vector is i-monomial when entry i is positive and every other entry
    vanishes.  Numerically: v[i] > tol, and all |v[j]|, j != i, are at most
    tol times the max-norm of v.  Zero and mixed vectors give None.
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    scale = np.max(np.abs(v), initial=0.0)
    if scale <= 0.0:
        return None
    big = np.flatnonzero(np.abs(v) > tol * scale)
    if big.size != 1:
        return None
    i = int(big[0])
    if v[i] <= tol:
        return None
    return i


def is_monomial(X, tol: float = DEFAULT_TOL) -> bool:
    """True when every column and every row has exactly one positive entry.

    Equivalently, the columns are monomial with pairwise distinct indices;
    such matrices are exactly the nonnegative matrices with nonnegative
    inverses.
    """
    X = _require_square(as_matrix(X))
    seen = set()
    for j in range(X.shape[1]):
        i = monomial_index(X[:, j], tol)
        if i is None or i in seen:
            return False
        seen.add(i)
    return True


class MonomialWitness(NamedTuple):
    found: bool
    #: row index -> column index of one column that is monomial at that row
    columns: dict


def has_monomial_submatrix(X, tol: float = DEFAULT_TOL) -> MonomialWitness:
    """Check whether the columns contain an n x n monomial submatrix.

    True exactly when, for every row index i, some column is i-monomial.
    The witness maps each row index to the first such column.
    """
    X = as_matrix(X)
    n = X.shape[0]
    witness: dict = {}
    for j in range(X.shape[1]):
        i = monomial_index(X[:, j], tol)
        if i is not None and i not in witness:
            witness[i] = j
    return MonomialWitness(len(witness) == n, witness)
