"""Bounded time scales: finite unions of closed real intervals.

A time scale is a nonempty closed subset of the reals used as a time domain.
This module represents bounded scales (or bounded truncations of unbounded
ones) as an ordered union of closed intervals; a degenerate interval is an
isolated point.  It provides the forward/backward jump operators, the
graininess function, and the partition of a half-open window [t0, t1) into
right-scattered points and maximal continuous segments.  Everything
downstream (exponentials, simulation, Gram integrals) consumes that
partition.

Unbounded scales are modelled as truncations carrying a structure tag so
that the maximal graininess reflects the full scale rather than the stored
components:

    ``real_line``  truncation of the real line (max graininess 0)
    ``h_grid``     truncation of the uniform grid h*Z (max graininess h)
    ``q_grid``     truncation of the geometric grid {q^k} (max graininess inf)
    ``custom``     exactly the stored components
"""

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import EmptyWindow, PointNotInScale

#: Absolute tolerance used to match a float against a scale member.
MEMBERSHIP_TOL = 1e-12

TAG_CUSTOM = "custom"
TAG_REAL_LINE = "real_line"
TAG_H_GRID = "h_grid"
TAG_Q_GRID = "q_grid"
_TAGS = (TAG_CUSTOM, TAG_REAL_LINE, TAG_H_GRID, TAG_Q_GRID)


class Atom(NamedTuple):
    """A right-scattered point t together with its forward jump."""

    t: float
    end: float  # sigma(t)

    @property
    def mu(self) -> float:
        return self.end - self.t


class Segment(NamedTuple):
    """A maximal right-dense stretch [start, end) inside a window."""

    start: float
    end: float

    @property
    def length(self) -> float:
        return self.end - self.start


def _canonical_components(raw) -> tuple:
    comps = []
    for pair in raw:
        a, b = float(pair[0]), float(pair[1])
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("time-scale endpoints must be finite")
        if b < a:
            raise ValueError(f"interval [{a}, {b}] has negative length")
        comps.append((a, b))
    if not comps:
        raise ValueError("a time scale must be nonempty")
    comps.sort()
    merged = [comps[0]]
    for a, b in comps[1:]:
        la, lb = merged[-1]
        if a <= lb:  # touching or overlapping: merge
            merged[-1] = (la, max(lb, b))
        else:
            merged.append((a, b))
    # geometry finer than the membership tolerance would make snapping
    # ambiguous; endpoints are stored exactly, so reject instead of rounding
    for a, b in merged:
        if 0.0 < b - a <= 2 * MEMBERSHIP_TOL:
            raise ValueError(f"interval [{a}, {b}] is narrower than the membership tolerance")
    for (_, b), (a2, _) in zip(merged, merged[1:]):
        if a2 - b <= 2 * MEMBERSHIP_TOL:
            raise ValueError(f"gap between {b} and {a2} is below the membership tolerance")
    return tuple(merged)


@dataclass(frozen=True)
class TimeScale:
    """Canonical finite union of closed intervals, optionally tagged.

    Components are stored sorted with strictly separated endpoints; touching
    or overlapping inputs are merged on construction.  Instances are
    immutable and safe to share across threads.
    """

    components: tuple = field()
    tag: str = TAG_CUSTOM
    h: float | None = None
    q: float | None = None

    def __post_init__(self):
        comps = _canonical_components(self.components)
        object.__setattr__(self, "components", comps)
        if self.tag not in _TAGS:
            raise ValueError(f"unknown time-scale tag {self.tag!r}")
        if self.tag == TAG_H_GRID:
            if self.h is None or self.h <= 0:
                raise ValueError("h_grid scales need a positive step h")
            self._check_grid([c[0] for c in comps], self.h)
        elif self.tag == TAG_Q_GRID:
            if self.q is None or self.q <= 1:
                raise ValueError("q_grid scales need a ratio q > 1")
            pts = [c[0] for c in comps]
            if any(p <= 0 for p in pts):
                raise ValueError("q_grid points must be positive")
            self._check_grid([math.log(p) for p in pts], math.log(self.q))
        elif self.tag == TAG_REAL_LINE:
            if len(comps) != 1 or comps[0][0] == comps[0][1]:
                raise ValueError("real_line truncations are a single interval")
        if self.tag in (TAG_H_GRID, TAG_Q_GRID):
            if any(a != b for a, b in comps):
                raise ValueError(f"{self.tag} scales consist of isolated points")

    @staticmethod
    def _check_grid(pts, step):
        for p, nxt in zip(pts, pts[1:]):
            if abs((nxt - p) - step) > 1e-9 * max(1.0, abs(step)):
                raise ValueError("grid points are not uniformly spaced")

    # -- constructors ----------------------------------------------------

    @classmethod
    def points(cls, pts: Iterable[float], tag: str = TAG_CUSTOM, **kw) -> "TimeScale":
        """Scale made of isolated points."""
        return cls(tuple((float(p), float(p)) for p in pts), tag=tag, **kw)

    @classmethod
    def interval(cls, a: float, b: float) -> "TimeScale":
        """Single closed interval [a, b] with custom tag."""
        return cls(((float(a), float(b)),))

    @classmethod
    def real_line(cls, a: float, b: float) -> "TimeScale":
        """Truncation [a, b] of the real line (max graininess 0)."""
        return cls(((float(a), float(b)),), tag=TAG_REAL_LINE)

    @classmethod
    def h_grid(cls, h: float, start: float, steps: int) -> "TimeScale":
        """Truncation {start, start+h, ..., start+steps*h} of h*Z."""
        pts = [start + j * h for j in range(steps + 1)]
        return cls.points(pts, tag=TAG_H_GRID, h=float(h))

    @classmethod
    def q_grid(cls, q: float, k_min: int, k_max: int) -> "TimeScale":
        """Truncation {q^k : k_min <= k <= k_max} of the geometric grid."""
        pts = [float(q) ** k for k in range(k_min, k_max + 1)]
        return cls.points(pts, tag=TAG_Q_GRID, q=float(q))

    # -- membership ------------------------------------------------------

    @cached_property
    def _starts(self) -> tuple:
        return tuple(a for a, _ in self.components)

    @property
    def t_min(self) -> float:
        return self.components[0][0]

    @property
    def t_max(self) -> float:
        return self.components[-1][1]

    def snap(self, t: float) -> float:
        """Return the member of the scale within ``MEMBERSHIP_TOL`` of t.

        Endpoint values are snapped to the exact stored endpoints; interior
        points of a component are members as given.  Raises
        ``PointNotInScale`` otherwise.
        """
        t = float(t)
        i = bisect_right(self._starts, t)
        for j in (i - 1, i):
            if 0 <= j < len(self.components):
                a, b = self.components[j]
                if abs(t - a) <= MEMBERSHIP_TOL:
                    return a
                if abs(t - b) <= MEMBERSHIP_TOL:
                    return b
                if a < t < b:
                    return t
        raise PointNotInScale(f"t = {t!r} is not a member of the time scale")

    def __contains__(self, t) -> bool:
        try:
            self.snap(t)
        except PointNotInScale:
            return False
        return True

    def _component_index(self, t: float) -> int:
        # t must already be a snapped member
        i = bisect_right(self._starts, t) - 1
        if i >= 0 and self.components[i][0] <= t <= self.components[i][1]:
            return i
        raise PointNotInScale(f"t = {t!r} is not a member of the time scale")

    # -- jump operators ---------------------------------------------------

    def sigma(self, t: float) -> float:
        """Forward jump: the next scale point after t (t itself if right-dense)."""
        s = self.snap(t)
        j = self._component_index(s)
        a, b = self.components[j]
        if s < b:
            return s
        if j + 1 < len(self.components):
            return self.components[j + 1][0]
        return s  # sigma(sup T) = sup T

    def rho(self, t: float) -> float:
        """Backward jump: the previous scale point before t (t itself if left-dense)."""
        s = self.snap(t)
        j = self._component_index(s)
        a, b = self.components[j]
        if s > a:
            return s
        if j > 0:
            return self.components[j - 1][1]
        return s  # rho(inf T) = inf T

    def mu(self, t: float) -> float:
        """Forward graininess sigma(t) - t."""
        s = self.snap(t)
        return self.sigma(s) - s

    def max_graininess(self) -> float:
        """Supremum of the graininess over the full (tagged) scale.

        For tagged truncations this is a property of the underlying
        unbounded scale: 0 for the real line, h for h*Z and inf for the
        geometric grid.  Custom scales compute it from their components.
        """
        if self.tag == TAG_REAL_LINE:
            return 0.0
        if self.tag == TAG_H_GRID:
            return float(self.h)
        if self.tag == TAG_Q_GRID:
            return math.inf
        gaps = [
            self.components[j + 1][0] - self.components[j][1]
            for j in range(len(self.components) - 1)
        ]
        return max(gaps, default=0.0)

    # -- window partition --------------------------------------------------

    def _check_window(self, t0: float, t1: float) -> tuple:
        a, b = self.snap(t0), self.snap(t1)
        if a >= b:
            raise EmptyWindow(f"window [{t0}, {t1}) is empty")
        return a, b

    def partition(self, t0: float, t1: float) -> list:
        """Ordered atoms and segments covering [t0, t1) inside the scale."""
        t0, t1 = self._check_window(t0, t1)
        events = []
        last = len(self.components) - 1
        for j, (a, b) in enumerate(self.components):
            if b < t0 or a >= t1:
                continue
            c, d = max(a, t0), min(b, t1)
            if c < d:
                events.append(Segment(c, d))
            if j < last and t0 <= b < t1:
                events.append(Atom(b, self.components[j + 1][0]))
        return events

    def scattered_points(self, t0: float, t1: float) -> list:
        """All right-scattered t in [t0, t1) with their graininess."""
        return [(ev.t, ev.mu) for ev in self.partition(t0, t1) if isinstance(ev, Atom)]

    def continuous_segments(self, t0: float, t1: float) -> list:
        """Maximal positive-length right-dense stretches of [t0, t1)."""
        return [
            (ev.start, ev.end)
            for ev in self.partition(t0, t1)
            if isinstance(ev, Segment)
        ]

    def element_count(self, t0: float | None = None, t1: float | None = None):
        """Number of scale points in [t0, t1]; ``math.inf`` for dense windows."""
        if t0 is None:
            t0 = self.t_min
        if t1 is None:
            t1 = self.t_max
        t0, t1 = self.snap(t0), self.snap(t1)
        if t0 > t1:
            return 0
        if t0 == t1:
            return 1
        count = 1  # the right endpoint t1
        for ev in self.partition(t0, t1):
            if isinstance(ev, Segment):
                return math.inf
            count += 1
        return count


def _canonical_pieces(scale: TimeScale, raw) -> tuple:
    pieces = []
    for pair in raw:
        c, d = scale.snap(pair[0]), scale.snap(pair[1])
        if d < c:
            raise ValueError(f"delta piece [{pair[0]}, {pair[1]}) is reversed")
        if c < d:
            pieces.append((c, d))
    pieces.sort()
    merged = []
    for c, d in pieces:
        if merged and c <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], d))
        else:
            merged.append((c, d))
    return tuple(merged)


@dataclass(frozen=True)
class DeltaSet:
    """Finite union of half-open intervals [c, d) with endpoints in the scale.

    Pieces are canonicalised on construction: endpoints snapped to scale
    members, empty pieces dropped, and touching or overlapping pieces merged
    (union semantics).
    """

    scale: TimeScale
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _canonical_pieces(self.scale, self.pieces))

    @classmethod
    def window(cls, scale: TimeScale, t0: float, t1: float) -> "DeltaSet":
        return cls(scale, ((t0, t1),))

    @classmethod
    def empty(cls, scale: TimeScale) -> "DeltaSet":
        return cls(scale, ())

    def union(self, other: "DeltaSet") -> "DeltaSet":
        if other.scale != self.scale:
            raise ValueError("delta sets live on different scales")
        return DeltaSet(self.scale, self.pieces + other.pieces)

    def events(self) -> list:
        """Atoms and segments of every piece, in time order."""
        out = []
        for c, d in self.pieces:
            out.extend(self.scale.partition(c, d))
        return out

    def delta_measure(self) -> float:
        """Delta measure: graininess mass of atoms plus dense lengths."""
        total = 0.0
        for ev in self.events():
            total += ev.mu if isinstance(ev, Atom) else ev.length
        return total

    def is_within(self, t0: float, t1: float) -> bool:
        return all(t0 <= c and d <= t1 for c, d in self.pieces)
