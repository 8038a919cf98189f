"""Bandwidth split policies for the two semantic links.

The proposed policy works in two stages: first find the highest quality
threshold whose deadline point is affordable within the budget (each
point's cost is the per-link minimum bandwidth meeting its delays), then
spend the leftover budget pushing the delays from that point toward the
next threshold's point. Two baselines ignore the quality surface: a
rate-proportional split and a total-transmission-time minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .channel import InfiniteBandwidthError, LinkSpec, required_bandwidth, transmission_time
from .deadline import DeadlineCurve, deadline_curve
from .surface import QualitySurface

__all__ = [
    "Allocation",
    "min_bandwidths",
    "solve_p2",
    "solve_p3",
    "allocate_from_curve",
    "allocate_proposed",
    "allocate_benchmark1",
    "allocate_benchmark2",
    "evaluate_allocation",
]

Links = tuple[LinkSpec, LinkSpec]


@dataclass(frozen=True)
class Allocation:
    """One policy's bandwidth split and its outcome.

    ``eps_star`` is the threshold the proposed policy locked in, or None
    for baselines and for the below-feasibility fallback. ``t_s``/``t_l``
    are the resulting delays (infinite when a link gets no bandwidth).
    Achieved quality fields stay NaN until filled by
    :func:`evaluate_allocation`.
    """

    policy: str
    B_s: float
    B_l: float
    t_s: float
    t_l: float
    eps_star: float | None = None
    achieved_psnr: float = math.nan
    achieved_q: float = math.nan

    @property
    def total_bandwidth(self) -> float:
        return self.B_s + self.B_l


def _delay(link: LinkSpec, bandwidth: float) -> float:
    """Transmission delay, with zero bandwidth meaning "never arrives"."""
    if bandwidth <= 0:
        return math.inf
    return transmission_time(link, bandwidth)


def min_bandwidths(point, links: Links) -> tuple[float, float]:
    """Per-link minimum bandwidth meeting a deadline point's delays.

    A zero delay on either coordinate yields ``inf`` for that link,
    marking the threshold as unaffordable at any finite budget.
    """
    link_s, link_l = links
    out = []
    for link, t in ((link_s, point.t_s), (link_l, point.t_l)):
        try:
            out.append(required_bandwidth(link, t))
        except InfiniteBandwidthError:
            out.append(math.inf)
    return out[0], out[1]


def solve_p2(
    curve: DeadlineCurve,
    links: Links,
    B_total: float,
) -> tuple[float, tuple[float, float]] | None:
    """Highest threshold whose deadline point is affordable, with its
    per-link minimum bandwidths.

    Scans thresholds from highest to lowest and stops at the first
    feasible one (the curve is sorted, so this is the maximum). Returns
    None when even the lowest threshold cannot be met.
    """
    if B_total <= 0:
        raise ValueError(f"B_total must be positive, got {B_total}")
    for eps, point in zip(reversed(curve.epsilons), reversed(curve.points)):
        if point is None:
            continue
        base_s, base_l = min_bandwidths(point, links)
        if base_s + base_l <= B_total:
            return eps, (base_s, base_l)
    return None


def _leftover_share(
    curve: DeadlineCurve,
    index: int,
    links: Links,
    base_s: float,
    base_l: float,
) -> float:
    """Fraction of the leftover budget handed to the mask link.

    The share is proportional to the extra bandwidth each link needs to
    move its delay from the chosen point to the next threshold's point
    (inverse-delay difference scaled by payload over rate). Shares are
    floored at zero so a link whose deadline loosens at the next point is
    never drained below its minimum. Degenerate cases (no next point, a
    zero-delay next point, or an all-zero gradient) fall back to splitting
    proportionally to the minimum bandwidths themselves, which shrinks
    both delays uniformly.
    """
    point = curve.points[index]
    nxt = curve.points[index + 1] if index + 1 < len(curve.points) else None
    if nxt is not None and nxt.t_s > 0 and nxt.t_l > 0:
        link_s, link_l = links
        alpha_s = max(
            0.0,
            (1.0 / nxt.t_s - 1.0 / point.t_s) * link_s.data_size / link_s.spectral_efficiency,
        )
        alpha_l = max(
            0.0,
            (1.0 / nxt.t_l - 1.0 / point.t_l) * link_l.data_size / link_l.spectral_efficiency,
        )
        if alpha_s + alpha_l > 0:
            return alpha_s / (alpha_s + alpha_l)
    return base_s / (base_s + base_l)


def solve_p3(
    curve: DeadlineCurve,
    eps_star: float,
    links: Links,
    B_total: float,
) -> Allocation:
    """Full-budget allocation anchored at the chosen threshold's point.

    Each link first receives the minimum bandwidth for the point's delay;
    the leftover is split per :func:`_leftover_share`, so the budget is
    consumed exactly and neither link drops below its minimum.
    """
    if eps_star is None:
        raise ValueError("eps_star is required; run solve_p2 first")
    try:
        index = curve.epsilons.index(eps_star)
    except ValueError:
        raise ValueError(f"eps_star {eps_star} is not a threshold of the curve") from None
    point = curve.points[index]
    if point is None:
        raise ValueError(f"threshold {eps_star} is unachievable on this curve")
    base_s, base_l = min_bandwidths(point, links)
    leftover = B_total - base_s - base_l
    if not leftover >= 0:
        raise ValueError(
            f"budget {B_total} is below the minimum {base_s + base_l} for eps {eps_star}"
        )
    share_s = _leftover_share(curve, index, links, base_s, base_l)
    link_s, link_l = links
    B_s = base_s + leftover * share_s
    B_l = base_l + leftover * (1.0 - share_s)
    return Allocation(
        policy="proposed",
        B_s=B_s,
        B_l=B_l,
        t_s=_delay(link_s, B_s),
        t_l=_delay(link_l, B_l),
        eps_star=eps_star,
    )


def allocate_from_curve(
    curve: DeadlineCurve,
    surface: QualitySurface,
    links: Links,
    B_total: float,
    policy: str = "proposed",
) -> Allocation:
    """Run the two-stage policy against a precomputed deadline curve.

    When no threshold is affordable, falls back to the benchmark-2 split
    (with ``eps_star`` left as None). The returned allocation has its
    achieved quality filled in.
    """
    solution = solve_p2(curve, links, B_total)
    if solution is None:
        alloc = replace(allocate_benchmark2(links, B_total), policy=policy, eps_star=None)
    else:
        eps_star, _ = solution
        alloc = replace(solve_p3(curve, eps_star, links, B_total), policy=policy)
    return evaluate_allocation(alloc, links, surface)


def allocate_proposed(
    surface: QualitySurface,
    links: Links,
    B_total: float,
    K: int = 20,
    eps_th: float = 0.6,
    policy: str = "proposed",
) -> Allocation:
    """End-to-end proposed policy: extract the curve, then allocate."""
    return allocate_from_curve(
        deadline_curve(surface, eps_th, K), surface, links, B_total, policy
    )


def allocate_benchmark1(links: Links, B_total: float, corner: bool = False) -> Allocation:
    """Throughput-motivated baseline: split proportional to spectral efficiency.

    Ignores payload sizes entirely. The literal throughput maximizer is a
    corner solution (everything on the better channel); pass
    ``corner=True`` for that variant, which starves the other link.
    """
    if B_total <= 0:
        raise ValueError(f"B_total must be positive, got {B_total}")
    link_s, link_l = links
    r_s, r_l = link_s.spectral_efficiency, link_l.spectral_efficiency
    if corner:
        B_s, B_l = (B_total, 0.0) if r_s >= r_l else (0.0, B_total)
    else:
        B_s = B_total * r_s / (r_s + r_l)
        B_l = B_total * r_l / (r_s + r_l)
    return Allocation(
        policy="benchmark1",
        B_s=B_s,
        B_l=B_l,
        t_s=_delay(link_s, B_s),
        t_l=_delay(link_l, B_l),
    )


def allocate_benchmark2(links: Links, B_total: float, objective: str = "total") -> Allocation:
    """Delay-motivated baseline: minimize the summed transmission times.

    With times t_i = D_i / (B_i r_i) and the budget met with equality, the
    minimizer of t_s + t_l puts bandwidth proportional to sqrt(D_i / r_i).
    ``objective="makespan"`` instead equalizes the two times (weights
    D_i / r_i), minimizing max(t_s, t_l).
    """
    if B_total <= 0:
        raise ValueError(f"B_total must be positive, got {B_total}")
    if objective not in ("total", "makespan"):
        raise ValueError(f"objective must be 'total' or 'makespan', got {objective!r}")
    link_s, link_l = links
    w_s = link_s.data_size / link_s.spectral_efficiency
    w_l = link_l.data_size / link_l.spectral_efficiency
    if objective == "total":
        w_s, w_l = math.sqrt(w_s), math.sqrt(w_l)
    B_s = B_total * w_s / (w_s + w_l)
    B_l = B_total * w_l / (w_s + w_l)
    return Allocation(
        policy="benchmark2",
        B_s=B_s,
        B_l=B_l,
        t_s=_delay(link_s, B_s),
        t_l=_delay(link_l, B_l),
    )


def evaluate_allocation(alloc: Allocation, links: Links, surface: QualitySurface) -> Allocation:
    """Fill in the delays and achieved quality for a bandwidth split.

    Recomputes the delays from the bandwidths (zero bandwidth clamps to
    "never arrives") and looks the pair up on the surface.
    """
    link_s, link_l = links
    t_s = _delay(link_s, alloc.B_s)
    t_l = _delay(link_l, alloc.B_l)
    psnr_db, q = surface.evaluate(t_s, t_l)
    return replace(alloc, t_s=t_s, t_l=t_l, achieved_psnr=psnr_db, achieved_q=q)
