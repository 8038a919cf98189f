"""Deadline extraction: farthest delay pair still meeting each quality level.

For a threshold eps, the deadline point is the grid cell inside the
superlevel set that lies farthest from the origin in Euclidean norm; the
curve traces those points over a uniform ladder of thresholds. Later
stages spend budget to land on (or inside) one of these points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .surface import QualitySurface

__all__ = [
    "UnachievableThresholdError",
    "DeadlinePoint",
    "DeadlineCurve",
    "VisitCounter",
    "deadline_point",
    "deadline_curve",
    "curve_to_csv",
]


class UnachievableThresholdError(ValueError):
    """No delay pair on the surface reaches the requested quality level."""


@dataclass
class VisitCounter:
    """Counts grid-cell inspections, for complexity checks."""

    cells: int = 0


@dataclass(frozen=True)
class DeadlinePoint:
    """Farthest-from-origin delay pair (seconds) meeting quality ``epsilon``.

    Both delays are multiples of the surface step duration.
    """

    epsilon: float
    t_s: float
    t_l: float


@dataclass(frozen=True)
class DeadlineCurve:
    """Deadline points over a uniform threshold ladder on [eps_th, 1].

    ``points[k]`` belongs to ``epsilons[k]``; a ``None`` entry marks a
    threshold no cell achieves. Thresholds increase with k and always end
    exactly at 1.0.
    """

    eps_th: float
    omega: float
    epsilons: tuple[float, ...] = field(repr=False)
    points: tuple[DeadlinePoint | None, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.epsilons) != len(self.points):
            raise ValueError("epsilons and points must have equal length")
        if len(self.points) < 2:
            raise ValueError("a curve needs at least 2 thresholds")

    @property
    def K(self) -> int:
        return len(self.points)


def deadline_point(
    surface: QualitySurface,
    eps: float,
    counter: VisitCounter | None = None,
) -> DeadlinePoint:
    """Farthest grid cell from the origin with quality >= ``eps``.

    The argmax is made total by tie-breaking on (1) larger min(t_s, t_l),
    then (2) smaller t_s; all comparisons run on integer step indexes so
    the result is exactly reproducible. Scans every cell once.
    """
    if math.isnan(eps) or not 0.0 <= eps <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {eps}")
    q = surface.q
    n = surface.steps + 1
    best: tuple[int, int, int] | None = None
    best_cell = (0, 0)
    for a in range(n):
        for b in range(n):
            if counter is not None:
                counter.cells += 1
            if q[a, b] >= eps:
                key = (a * a + b * b, min(a, b), -a)
                if best is None or key > best:
                    best = key
                    best_cell = (a, b)
    if best is None:
        raise UnachievableThresholdError(f"no delay pair reaches quality {eps}")
    a, b = best_cell
    return DeadlinePoint(epsilon=eps, t_s=a * surface.omega, t_l=b * surface.omega)


def deadline_curve(
    surface: QualitySurface,
    eps_th: float,
    K: int,
    counter: VisitCounter | None = None,
) -> DeadlineCurve:
    """Deadline points for K evenly spaced thresholds on [eps_th, 1].

    Each threshold costs one full grid scan, so the total work is
    K * (steps+1)^2 cell visits. Unachievable thresholds are recorded as
    ``None`` rather than raising.
    """
    if math.isnan(eps_th) or not 0.0 <= eps_th < 1.0:
        raise ValueError(f"eps_th must be in [0, 1), got {eps_th}")
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    epsilons = []
    points: list[DeadlinePoint | None] = []
    for k in range(K):
        # Pin the top threshold to exactly 1.0 to dodge float drift.
        eps = 1.0 if k == K - 1 else eps_th + (1.0 - eps_th) * k / (K - 1)
        epsilons.append(eps)
        try:
            points.append(deadline_point(surface, eps, counter))
        except UnachievableThresholdError:
            points.append(None)
    return DeadlineCurve(
        eps_th=eps_th,
        omega=surface.omega,
        epsilons=tuple(epsilons),
        points=tuple(points),
    )


def curve_to_csv(curve: DeadlineCurve) -> str:
    """CSV rendering with columns eps,t_s,t_l,achievable.

    Unachievable thresholds carry ``nan`` delays and achievable 0.
    """
    lines = ["eps,t_s,t_l,achievable"]
    for eps, point in zip(curve.epsilons, curve.points):
        if point is None:
            lines.append(f"{eps},nan,nan,0")
        else:
            lines.append(f"{eps},{point.t_s},{point.t_l},1")
    return "\n".join(lines) + "\n"
