"""Deterministic surrogate for a step-based generative receiver.

The receiver refines a latent vector over ``steps`` fixed-duration steps.
Each modality (mask, text) contributes a conditioning vector; until a
modality arrives, a placeholder vector of the same norm stands in for it.
The step update is a linear pull toward the weighted conditioning sum,

    z[j+1] = (1 - eta) * z[j] + eta * (w_s * c_s(j) + w_l * c_l(j)),

which keeps the arrival-schedule semantics of the real model while staying
verifiable in closed form. Mask vectors live on the first half of the
latent coordinates and text vectors on the second half, so the two
modalities' errors are orthogonal and quality degrades monotonically in
each arrival delay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ToyDiffusionConfig",
    "ConditioningSet",
    "CASE_NEITHER",
    "CASE_MASK_ONLY",
    "CASE_TEXT_ONLY",
    "CASE_BOTH",
    "arrival_step",
    "case_schedule",
    "initial_latent",
    "run",
    "reference",
    "psnr",
    "generate_grid",
    "grid_document",
]

# Conditioning regimes for one step, by which modalities have arrived.
CASE_NEITHER = 1
CASE_MASK_ONLY = 2
CASE_TEXT_ONLY = 3
CASE_BOTH = 4

# Slack absorbing float noise when a delay sits exactly on a step boundary
# (t = j * omega computed in floating point).
_STEP_EPS = 1e-9

# Child-stream tags so the initial latent and the conditioning vectors can
# be derived independently from one config seed.
_LATENT_STREAM = 0
_COND_STREAM = 1


@dataclass(frozen=True)
class ToyDiffusionConfig:
    """Parameters of the surrogate receiver.

    ``latent_dim`` must be even: the first half of the coordinates carries
    mask conditioning, the second half text conditioning. ``psnr_cap`` is
    the finite stand-in for the unbounded quality of a zero-delay run, and
    ``max_signal`` is the assumed peak magnitude of latent values.
    """

    latent_dim: int = 16
    steps: int = 20
    step_duration: float = 0.05
    pull_rate: float = 0.3
    weight_mask: float = 1.0
    weight_text: float = 1.0
    seed: int = 0
    psnr_cap: float = 100.0
    max_signal: float = 6.0

    def __post_init__(self) -> None:
        if self.latent_dim < 2 or self.latent_dim % 2 != 0:
            raise ValueError(f"latent_dim must be even and >= 2, got {self.latent_dim}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not self.step_duration > 0:
            raise ValueError(f"step_duration must be positive, got {self.step_duration}")
        if not 0 < self.pull_rate <= 1:
            raise ValueError(f"pull_rate must be in (0, 1], got {self.pull_rate}")
        if self.weight_mask < 0 or self.weight_text < 0:
            raise ValueError("conditioning weights must be non-negative")
        if self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")
        if not self.psnr_cap > 0:
            raise ValueError(f"psnr_cap must be positive, got {self.psnr_cap}")
        if not self.max_signal > 0:
            raise ValueError(f"max_signal must be positive, got {self.max_signal}")


def _frozen_unit_vector(rng: np.random.Generator, dim: int, lo: int, hi: int) -> np.ndarray:
    """Random unit vector supported on coordinates [lo, hi), read-only."""
    vec = np.zeros(dim)
    part = rng.standard_normal(hi - lo)
    norm = np.linalg.norm(part)
    while norm == 0.0:  # essentially impossible, but keeps the contract total
        part = rng.standard_normal(hi - lo)
        norm = np.linalg.norm(part)
    vec[lo:hi] = part / norm
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True, eq=False)
class ConditioningSet:
    """The four conditioning vectors: true and placeholder per modality.

    All four are unit-norm. Mask vectors are supported on the first half
    of the coordinates and text vectors on the second half, so the
    true-minus-placeholder difference vectors of the two modalities are
    orthogonal by construction.
    """

    mask_true: np.ndarray
    mask_placeholder: np.ndarray
    text_true: np.ndarray
    text_placeholder: np.ndarray

    def __post_init__(self) -> None:
        vectors = {
            "mask_true": self.mask_true,
            "mask_placeholder": self.mask_placeholder,
            "text_true": self.text_true,
            "text_placeholder": self.text_placeholder,
        }
        dims = {v.shape for v in vectors.values()}
        if len(dims) != 1 or any(v.ndim != 1 for v in vectors.values()):
            raise ValueError("all conditioning vectors must be 1-D and equally sized")
        dim = self.mask_true.shape[0]
        if dim < 2 or dim % 2 != 0:
            raise ValueError(f"conditioning dimension must be even and >= 2, got {dim}")
        half = dim // 2
        for name, vec in vectors.items():
            arr = np.asarray(vec, dtype=float)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
            if abs(np.linalg.norm(arr) - 1.0) > 1e-9:
                raise ValueError(f"{name} must be unit-norm")
            lo, hi = (0, half) if name.startswith("mask") else (half, dim)
            outside = np.delete(arr, np.s_[lo:hi])
            if np.any(outside != 0.0):
                raise ValueError(f"{name} must be supported on coordinates [{lo}, {hi})")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.array_equal(self.mask_true, self.mask_placeholder):
            raise ValueError("mask_true and mask_placeholder must differ")
        if np.array_equal(self.text_true, self.text_placeholder):
            raise ValueError("text_true and text_placeholder must differ")

    @classmethod
    def from_config(cls, cfg: ToyDiffusionConfig) -> "ConditioningSet":
        """Derive the four vectors deterministically from ``cfg.seed``.

        Draw order is fixed: mask_true, mask_placeholder, text_true,
        text_placeholder.
        """
        rng = np.random.default_rng([cfg.seed, _COND_STREAM])
        d, half = cfg.latent_dim, cfg.latent_dim // 2
        mask_true = _frozen_unit_vector(rng, d, 0, half)
        mask_placeholder = _frozen_unit_vector(rng, d, 0, half)
        while np.array_equal(mask_placeholder, mask_true):
            mask_placeholder = _frozen_unit_vector(rng, d, 0, half)
        text_true = _frozen_unit_vector(rng, d, half, d)
        text_placeholder = _frozen_unit_vector(rng, d, half, d)
        while np.array_equal(text_placeholder, text_true):
            text_placeholder = _frozen_unit_vector(rng, d, half, d)
        return cls(mask_true, mask_placeholder, text_true, text_placeholder)


def initial_latent(cfg: ToyDiffusionConfig) -> np.ndarray:
    """Seed-derived starting latent z0 (read-only)."""
    rng = np.random.default_rng([cfg.seed, _LATENT_STREAM])
    z0 = rng.standard_normal(cfg.latent_dim)
    z0.setflags(write=False)
    return z0


def arrival_step(t: float, omega: float, steps: int) -> int:
    """First step index whose start time is at or after the arrival delay.

    Returns ``ceil(t / omega)`` clamped to ``[0, steps]``; a modality
    conditions correctly at every step ``j`` with ``j * omega >= t``. The
    top value ``steps`` means the payload never influences the output.
    An infinite delay maps to ``steps``.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if math.isnan(t) or t < 0:
        raise ValueError(f"delay must be non-negative, got {t}")
    if math.isinf(t):
        return steps
    k = math.ceil(t / omega - _STEP_EPS)
    return min(max(k, 0), steps)


def case_schedule(k_s: int, k_l: int, steps: int) -> list[int]:
    """Per-step conditioning regime given the two arrival steps.

    Step ``j`` uses the true mask iff ``j >= k_s`` and the true text iff
    ``j >= k_l``; the four combinations map to the ``CASE_*`` constants.
    """
    for name, k in (("k_s", k_s), ("k_l", k_l)):
        if not 0 <= k <= steps:
            raise ValueError(f"{name} must be in [0, {steps}], got {k}")
    schedule = []
    for j in range(steps):
        mask_in, text_in = j >= k_s, j >= k_l
        if mask_in and text_in:
            schedule.append(CASE_BOTH)
        elif mask_in:
            schedule.append(CASE_MASK_ONLY)
        elif text_in:
            schedule.append(CASE_TEXT_ONLY)
        else:
            schedule.append(CASE_NEITHER)
    return schedule


def _pull_targets(cfg: ToyDiffusionConfig, cond: ConditioningSet) -> dict[int, np.ndarray]:
    """Weighted conditioning sum for each of the four regimes."""
    w_s, w_l = cfg.weight_mask, cfg.weight_text
    return {
        CASE_NEITHER: w_s * cond.mask_placeholder + w_l * cond.text_placeholder,
        CASE_MASK_ONLY: w_s * cond.mask_true + w_l * cond.text_placeholder,
        CASE_TEXT_ONLY: w_s * cond.mask_placeholder + w_l * cond.text_true,
        CASE_BOTH: w_s * cond.mask_true + w_l * cond.text_true,
    }


def run(
    k_s: int,
    k_l: int,
    cfg: ToyDiffusionConfig,
    cond: ConditioningSet | None = None,
) -> np.ndarray:
    """Final latent after all steps, for the given per-modality arrival steps.

    Fully deterministic given the config seed; ``cond`` defaults to the
    seed-derived conditioning set.
    """
    if cond is None:
        cond = ConditioningSet.from_config(cfg)
    pulls = _pull_targets(cfg, cond)
    eta = cfg.pull_rate
    z = initial_latent(cfg).copy()
    for case in case_schedule(k_s, k_l, cfg.steps):
        z = (1.0 - eta) * z + eta * pulls[case]
    return z


def reference(cfg: ToyDiffusionConfig, cond: ConditioningSet | None = None) -> np.ndarray:
    """Ideal final latent: both modalities available from step 0."""
    return run(0, 0, cfg, cond)


def psnr(z_ref: np.ndarray, z: np.ndarray, max_signal: float = 6.0, cap: float = 100.0) -> float:
    """Quality of ``z`` against the reference, in dB.

    Uses ``10 * log10(max_signal**2 / ||z_ref - z||_2)`` with the plain
    (un-squared) Euclidean distance in the denominator, capped at ``cap``
    (zero distance returns the cap).
    """
    z_ref = np.asarray(z_ref, dtype=float)
    z = np.asarray(z, dtype=float)
    if z_ref.shape != z.shape:
        raise ValueError(f"latent shapes differ: {z_ref.shape} vs {z.shape}")
    distance = float(np.linalg.norm(z_ref - z))
    if distance == 0.0:
        return cap
    return min(10.0 * math.log10(max_signal**2 / distance), cap)


def generate_grid(
    cfg: ToyDiffusionConfig,
    cond: ConditioningSet | None = None,
) -> np.ndarray:
    """PSNR over all arrival-step pairs: entry (a, b) compares run(a, b)
    with the zero-delay reference. Shape (steps+1, steps+1); row index is
    the mask arrival step, column index the text arrival step.
    """
    if cond is None:
        cond = ConditioningSet.from_config(cfg)
    z_ref = reference(cfg, cond)
    n = cfg.steps + 1
    grid = np.empty((n, n))
    for a in range(n):
        for b in range(n):
            grid[a, b] = psnr(z_ref, run(a, b, cfg, cond), cfg.max_signal, cfg.psnr_cap)
    return grid


def grid_document(cfg: ToyDiffusionConfig, grid: np.ndarray) -> dict:
    """JSON-ready export of a PSNR grid.

    Fields: ``omega`` (step duration, seconds), ``T`` (step count),
    ``psnr_cap`` (dB), ``grid`` (row-major list of (T+1)^2 dB values).
    The same layout is accepted when loading externally produced grids.
    """
    grid = np.asarray(grid, dtype=float)
    expected = (cfg.steps + 1, cfg.steps + 1)
    if grid.shape != expected:
        raise ValueError(f"grid shape {grid.shape} does not match config {expected}")
    return {
        "omega": cfg.step_duration,
        "T": cfg.steps,
        "psnr_cap": cfg.psnr_cap,
        "grid": [float(v) for v in grid.ravel()],
    }
