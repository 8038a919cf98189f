"""Monte Carlo sweep over fading draws and bandwidth budgets.

Each trial derives its own RNG stream from (base_seed, trial index), draws
one squared gain per link, and runs every policy at every budget in the
sweep, producing one record per (trial, budget, policy). Output is plain
CSV; plotting is left to whatever consumes it.
"""

from __future__ import annotations

import dataclasses
import json
import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .allocator import (
    allocate_benchmark1,
    allocate_benchmark2,
    allocate_from_curve,
    evaluate_allocation,
)
from .channel import FadingModel, LinkSpec, sample_gain
from .deadline import deadline_curve
from .surface import QualitySurface
from .toy_diffusion import ToyDiffusionConfig

__all__ = [
    "ParametricConfig",
    "SimConfig",
    "TrialRecord",
    "SummaryRow",
    "load_config",
    "build_surface",
    "trial_rng",
    "run_sweep",
    "summarize",
    "records_to_csv",
    "summary_to_csv",
    "RECORD_FIELDS",
    "SUMMARY_FIELDS",
]


@dataclass(frozen=True)
class ParametricConfig:
    """Parameters of the synthetic concave quality surface."""

    weight_mask: float = 0.6
    weight_text: float = 0.5
    exponent: float = 2.0
    steps: int = 20
    step_duration: float = 0.05


@dataclass(frozen=True)
class SimConfig:
    """Everything a sweep needs, JSON-loadable.

    ``proposed_k`` lists the curve resolutions run side by side in the
    sweep; the scalar ``K`` serves the single-shot CLI commands.
    ``surface_source`` is "toy", "parametric", or "file:<path>".
    """

    bandwidth_sweep: tuple[float, ...] = (1e5, 2e5, 3e5, 4e5, 5e5)
    trials: int = 200
    base_seed: int = 0
    fading: FadingModel = field(default_factory=FadingModel)
    power_over_noise: float = 2.0
    mask_bits: int = 32768
    text_bits: int = 8192
    K: int = 20
    proposed_k: tuple[int, ...] = (4, 20)
    eps_th: float = 0.6
    surface_source: str = "toy"
    toy: ToyDiffusionConfig = field(default_factory=ToyDiffusionConfig)
    parametric: ParametricConfig = field(default_factory=ParametricConfig)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if len(self.bandwidth_sweep) == 0:
            raise ValueError("bandwidth_sweep must not be empty")
        if any(not b > 0 for b in self.bandwidth_sweep):
            raise ValueError("bandwidth_sweep values must all be positive")
        if self.base_seed < 0:
            raise ValueError(f"base_seed must be non-negative, got {self.base_seed}")
        if not self.power_over_noise > 0:
            raise ValueError(f"power_over_noise must be positive, got {self.power_over_noise}")
        if self.mask_bits < 1 or self.text_bits < 1:
            raise ValueError("payload sizes must be at least 1 bit")
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if len(self.proposed_k) == 0 or any(k < 2 for k in self.proposed_k):
            raise ValueError("proposed_k must be non-empty with values >= 2")
        if math.isnan(self.eps_th) or not 0.0 <= self.eps_th < 1.0:
            raise ValueError(f"eps_th must be in [0, 1), got {self.eps_th}")
        source = self.surface_source
        if source not in ("toy", "parametric") and not source.startswith("file:"):
            raise ValueError(
                f"surface_source must be 'toy', 'parametric', or 'file:<path>', got {source!r}"
            )

    @classmethod
    def from_dict(cls, raw: dict) -> "SimConfig":
        """Build a config from parsed JSON, rejecting unknown keys."""
        if not isinstance(raw, dict):
            raise ValueError(f"config must be an object, got {type(raw).__name__}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = dict(raw)
        if "bandwidth_sweep" in kwargs:
            kwargs["bandwidth_sweep"] = tuple(float(b) for b in kwargs["bandwidth_sweep"])
        if "proposed_k" in kwargs:
            kwargs["proposed_k"] = tuple(int(k) for k in kwargs["proposed_k"])
        if "fading" in kwargs:
            kwargs["fading"] = FadingModel(**kwargs["fading"])
        if "toy" in kwargs:
            kwargs["toy"] = ToyDiffusionConfig(**kwargs["toy"])
        if "parametric" in kwargs:
            kwargs["parametric"] = ParametricConfig(**kwargs["parametric"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ValueError(f"invalid config: {exc}") from exc


def load_config(path: str) -> SimConfig:
    """Read a JSON config file."""
    with open(path, "r", encoding="utf-8") as handle:
        return SimConfig.from_dict(json.load(handle))


def build_surface(config: SimConfig) -> QualitySurface:
    """Materialize the quality surface the config points at."""
    source = config.surface_source
    if source == "toy":
        return QualitySurface.from_toy(config.toy)
    if source == "parametric":
        p = config.parametric
        return QualitySurface.from_parametric(
            p.weight_mask, p.weight_text, p.exponent, p.steps, p.step_duration
        )
    path = source[len("file:"):]
    with open(path, "r", encoding="utf-8") as handle:
        return QualitySurface.from_grid(json.load(handle))


@dataclass(frozen=True)
class TrialRecord:
    """One policy run at one budget within one fading trial."""

    trial: int
    B_total: float
    policy: str
    gamma_s: float
    gamma_l: float
    B_s: float
    B_l: float
    t_s: float
    t_l: float
    eps_star: float | None
    psnr: float
    q: float


@dataclass(frozen=True)
class SummaryRow:
    """Aggregate over trials for one (budget, policy) pair."""

    B_total: float
    policy: str
    mean_psnr: float
    std_psnr: float
    mean_q: float
    std_q: float


def trial_rng(base_seed: int, trial: int) -> np.random.Generator:
    """Per-trial generator, mixed from (base_seed, trial index).

    The two integers seed one SeedSequence, so any trial's stream is
    independent of how many other trials run and in what order.
    """
    return np.random.default_rng([base_seed, trial])


def run_sweep(config: SimConfig) -> list[TrialRecord]:
    """Run every policy at every budget for every fading trial.

    Per trial the gains are drawn once (mask link first) and shared by
    all budgets and policies. Deadline curves are computed once per
    requested resolution since they depend only on the surface. Records
    come back sorted by (trial, B_total, policy).
    """
    surface = build_surface(config)
    curves = {k: deadline_curve(surface, config.eps_th, k) for k in config.proposed_k}
    records: list[TrialRecord] = []
    for trial in range(config.trials):
        rng = trial_rng(config.base_seed, trial)
        gamma_s = config.power_over_noise * sample_gain(rng, config.fading)
        gamma_l = config.power_over_noise * sample_gain(rng, config.fading)
        links = (LinkSpec(config.mask_bits, gamma_s), LinkSpec(config.text_bits, gamma_l))
        for B_total in config.bandwidth_sweep:
            allocations = [
                evaluate_allocation(allocate_benchmark1(links, B_total), links, surface),
                evaluate_allocation(allocate_benchmark2(links, B_total), links, surface),
            ]
            for k in config.proposed_k:
                allocations.append(
                    allocate_from_curve(
                        curves[k], surface, links, B_total, policy=f"proposed_k{k}"
                    )
                )
            for alloc in allocations:
                records.append(
                    TrialRecord(
                        trial=trial,
                        B_total=float(B_total),
                        policy=alloc.policy,
                        gamma_s=gamma_s,
                        gamma_l=gamma_l,
                        B_s=alloc.B_s,
                        B_l=alloc.B_l,
                        t_s=alloc.t_s,
                        t_l=alloc.t_l,
                        eps_star=alloc.eps_star,
                        psnr=alloc.achieved_psnr,
                        q=alloc.achieved_q,
                    )
                )
    records.sort(key=lambda r: (r.trial, r.B_total, r.policy))
    return records


def summarize(records: list[TrialRecord]) -> list[SummaryRow]:
    """Mean and population stddev of psnr and q per (budget, policy)."""
    if not records:
        raise ValueError("cannot summarize an empty record list")
    groups: dict[tuple[float, str], list[TrialRecord]] = {}
    for record in records:
        groups.setdefault((record.B_total, record.policy), []).append(record)
    rows = []
    for (B_total, policy), group in sorted(groups.items()):
        psnrs = [r.psnr for r in group]
        qs = [r.q for r in group]
        rows.append(
            SummaryRow(
                B_total=B_total,
                policy=policy,
                mean_psnr=statistics.fmean(psnrs),
                std_psnr=statistics.pstdev(psnrs),
                mean_q=statistics.fmean(qs),
                std_q=statistics.pstdev(qs),
            )
        )
    return rows


RECORD_FIELDS = (
    "trial",
    "B_total",
    "policy",
    "gamma_s",
    "gamma_l",
    "B_s",
    "B_l",
    "t_s",
    "t_l",
    "eps_star",
    "psnr",
    "q",
)

SUMMARY_FIELDS = ("B_total", "policy", "mean_psnr", "std_psnr", "mean_q", "std_q")


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value)


def records_to_csv(records: list[TrialRecord]) -> str:
    """Render records as CSV; reruns of the same config are byte-identical."""
    lines = [",".join(RECORD_FIELDS)]
    for r in records:
        lines.append(",".join(_cell(getattr(r, name)) for name in RECORD_FIELDS))
    return "\n".join(lines) + "\n"


def summary_to_csv(rows: list[SummaryRow]) -> str:
    lines = [",".join(SUMMARY_FIELDS)]
    for row in rows:
        lines.append(",".join(_cell(getattr(row, name)) for name in SUMMARY_FIELDS))
    return "\n".join(lines) + "\n"
