"""Time-scale matrix exponential.

The exponential e_A(t, t0) is the unique forward solution of X^Delta = A X
with X(t0) = I.  Across a window it factors into one matrix per partition
event: exp(A * length) over a continuous segment and (I + mu * A) at a
right-scattered point, multiplied with later factors on the left.  The
factorisation is kept available (``exp_path``) so reachability certificates
can be audited.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import matrices
from .errors import BackwardWindow, NotSquare
from .timescale import Atom, TimeScale


def _square(A) -> np.ndarray:
    A = matrices.as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"system matrix of shape {A.shape} is not square")
    return A


@dataclass(frozen=True)
class ExpFactor:
    kind: str  # "discrete" | "continuous"
    start: float
    end: float
    matrix: np.ndarray

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class ExpPath:
    """Factorised evaluation of the exponential over [t_start, t_end)."""

    scale: TimeScale
    A: np.ndarray
    t_start: float
    t_end: float
    factors: tuple

    @property
    def value(self) -> np.ndarray:
        n = self.A.shape[0]
        return reduce(lambda acc, f: f.matrix @ acc, self.factors, np.eye(n))


def _factor_matrices(A: np.ndarray, ts: TimeScale, t0: float, t1: float):
    for ev in ts.partition(t0, t1):
        if isinstance(ev, Atom):
            yield ExpFactor("discrete", ev.t, ev.end, np.eye(A.shape[0]) + ev.mu * A)
        else:
            yield ExpFactor("continuous", ev.start, ev.end, matrices.expm(A, ev.length))


def exp_path(A, ts: TimeScale, t: float, t0: float) -> ExpPath:
    """Factor list for e_A(t, t0); factors are ordered by time."""
    A = _square(A)
    t0s, ts_ = ts.snap(t0), ts.snap(t)
    if ts_ < t0s:
        raise BackwardWindow(
            f"e_A({t}, {t0}) runs backward; only forward evaluation is defined"
        )
    if ts_ == t0s:
        return ExpPath(ts, A, t0s, ts_, ())
    return ExpPath(ts, A, t0s, ts_, tuple(_factor_matrices(A, ts, t0s, ts_)))


def ts_exp(A, ts: TimeScale, t: float, t0: float) -> np.ndarray:
    """e_A(t, t0) for t >= t0, both members of the scale."""
    A = _square(A)
    t0s, ts_ = ts.snap(t0), ts.snap(t)
    if ts_ < t0s:
        raise BackwardWindow(
            f"e_A({t}, {t0}) runs backward; only forward evaluation is defined"
        )
    out = np.eye(A.shape[0])
    if ts_ == t0s:
        return out
    for f in _factor_matrices(A, ts, t0s, ts_):
        out = f.matrix @ out
    return out


def ts_exp_at_sigma(A, ts: TimeScale, t1: float, tau: float) -> np.ndarray:
    """e_A(t1, sigma(tau)), the kernel appearing in the forced response."""
    return ts_exp(A, ts, t1, ts.sigma(tau))
