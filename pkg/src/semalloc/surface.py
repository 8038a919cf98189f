"""Quality surfaces over arrival-delay pairs.

A surface holds a PSNR matrix indexed by (mask step, text step) together
with a normalization reference, giving a quality ratio q in [0, 1] that
downstream threshold logic consumes. Surfaces can come from the toy
receiver, from an external grid document, or from a parametric shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .toy_diffusion import ConditioningSet, ToyDiffusionConfig, arrival_step, generate_grid

__all__ = ["GridFormatError", "QualitySurface", "PARAMETRIC_PSNR_REF"]

# dB value assigned to q == 1 when a surface is built from a parametric
# quality function rather than from measured PSNR.
PARAMETRIC_PSNR_REF = 60.0


class GridFormatError(ValueError):
    """Malformed or inconsistent grid document."""


@dataclass(frozen=True, eq=False)
class QualitySurface:
    """Immutable PSNR surface plus its [0, 1] quality normalization.

    ``psnr_ref`` anchors the normalization: q = clamp(psnr / psnr_ref, 0, 1).
    For measured grids it is the best finite entry away from the capped
    origin, so the origin always normalizes to q = 1.
    """

    omega: float
    steps: int
    psnr: np.ndarray
    psnr_ref: float
    psnr_cap: float

    def __post_init__(self) -> None:
        matrix = np.asarray(self.psnr, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"psnr must be a square matrix, got shape {matrix.shape}")
        if matrix.shape[0] != self.steps + 1:
            raise ValueError(
                f"psnr side {matrix.shape[0]} does not match steps {self.steps} + 1"
            )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("psnr entries must all be finite")
        if np.any(matrix > self.psnr_cap):
            raise ValueError(f"psnr entries must not exceed the cap {self.psnr_cap}")
        if not (self.psnr_ref > 0 and math.isfinite(self.psnr_ref)):
            raise ValueError(f"psnr_ref must be positive and finite, got {self.psnr_ref}")
        matrix = matrix.copy()
        matrix.setflags(write=False)
        object.__setattr__(self, "psnr", matrix)
        q = np.clip(matrix / self.psnr_ref, 0.0, 1.0)
        q.setflags(write=False)
        object.__setattr__(self, "_q", q)

    @property
    def q(self) -> np.ndarray:
        """Normalized quality matrix, read-only, entries in [0, 1]."""
        return self._q

    @property
    def horizon(self) -> float:
        """Latest distinguishable delay: steps * omega."""
        return self.steps * self.omega

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_matrix(
        cls,
        omega: float,
        matrix: np.ndarray,
        psnr_cap: float,
        psnr_ref: float | None = None,
    ) -> "QualitySurface":
        """Wrap a square PSNR matrix.

        When ``psnr_ref`` is omitted it is taken as the maximum entry
        excluding the origin cell (0, 0), which holds the capped
        zero-delay value.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
        side = matrix.shape[0]
        if side < 2:
            raise ValueError("grid must be at least 2x2 (one step horizon)")
        if psnr_ref is None:
            masked = matrix.copy()
            masked[0, 0] = -np.inf
            psnr_ref = float(masked.max())
            if not psnr_ref > 0:
                raise ValueError(
                    f"maximum off-origin entry must be positive, got {psnr_ref}"
                )
        return cls(
            omega=omega,
            steps=side - 1,
            psnr=matrix,
            psnr_ref=float(psnr_ref),
            psnr_cap=float(psnr_cap),
        )

    @classmethod
    def from_grid(cls, document: dict) -> "QualitySurface":
        """Build a surface from a grid document (see ``grid_document``).

        ``T`` may be omitted, in which case it is inferred from the grid
        length; when present it must match. Raises
        :class:`GridFormatError` naming the offending field on any
        malformed input.
        """
        if not isinstance(document, dict):
            raise GridFormatError(f"document must be an object, got {type(document).__name__}")
        for key in ("omega", "psnr_cap", "grid"):
            if key not in document:
                raise GridFormatError(f"missing required field '{key}'")
        omega = document["omega"]
        if not isinstance(omega, (int, float)) or not omega > 0:
            raise GridFormatError(f"omega: expected a positive number, got {omega!r}")
        psnr_cap = document["psnr_cap"]
        if not isinstance(psnr_cap, (int, float)) or not math.isfinite(psnr_cap):
            raise GridFormatError(f"psnr_cap: expected a finite number, got {psnr_cap!r}")
        flat = document["grid"]
        if not isinstance(flat, (list, tuple)) or len(flat) == 0:
            raise GridFormatError("grid: expected a non-empty array of numbers")
        for i, value in enumerate(flat):
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise GridFormatError(f"grid[{i}]: expected a finite number, got {value!r}")
        side = math.isqrt(len(flat))
        if side * side != len(flat):
            raise GridFormatError(f"grid: length {len(flat)} is not a perfect square")
        if side < 2:
            raise GridFormatError("grid: need at least a 2x2 grid")
        if "T" in document:
            steps = document["T"]
            if not isinstance(steps, int) or isinstance(steps, bool):
                raise GridFormatError(f"T: expected an integer, got {steps!r}")
            if steps != side - 1:
                raise GridFormatError(
                    f"T: value {steps} does not match grid side {side} (expected {side - 1})"
                )
        matrix = np.asarray(flat, dtype=float).reshape(side, side)
        try:
            return cls.from_matrix(float(omega), matrix, float(psnr_cap))
        except ValueError as exc:
            raise GridFormatError(str(exc)) from exc

    @classmethod
    def from_toy(
        cls,
        cfg: ToyDiffusionConfig,
        cond: ConditioningSet | None = None,
    ) -> "QualitySurface":
        """Generate the toy receiver's PSNR grid and wrap it."""
        return cls.from_matrix(cfg.step_duration, generate_grid(cfg, cond), cfg.psnr_cap)

    @classmethod
    def from_parametric(
        cls,
        weight_mask: float,
        weight_text: float,
        exponent: float,
        steps: int,
        omega: float,
    ) -> "QualitySurface":
        """Synthetic concave surface q = clamp(1 - w_s*u_s^p - w_l*u_l^p, 0, 1).

        ``u_i`` is the delay as a fraction of the horizon, clamped to 1.
        The generating function is concave and non-increasing on the unit
        square for ``exponent >= 1``, so superlevel sets are convex. The
        quality ratio is mapped to dB against ``PARAMETRIC_PSNR_REF``.
        """
        if weight_mask < 0 or weight_text < 0:
            raise ValueError("weights must be non-negative")
        if exponent < 1:
            raise ValueError(f"exponent must be >= 1, got {exponent}")
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {steps}")
        if not omega > 0:
            raise ValueError(f"omega must be positive, got {omega}")
        u = np.arange(steps + 1) / steps
        q = 1.0 - weight_mask * u[:, None] ** exponent - weight_text * u[None, :] ** exponent
        q = np.clip(q, 0.0, 1.0)
        return cls(
            omega=omega,
            steps=steps,
            psnr=q * PARAMETRIC_PSNR_REF,
            psnr_ref=PARAMETRIC_PSNR_REF,
            psnr_cap=PARAMETRIC_PSNR_REF,
        )

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def index_of(self, t: float) -> int:
        """Grid index for a delay in seconds (ceil to step, clamped)."""
        return arrival_step(t, self.omega, self.steps)

    def evaluate(self, t_s: float, t_l: float) -> tuple[float, float]:
        """(PSNR dB, quality ratio) at the given delays in seconds.

        Delays quantize to step boundaries (conditioning only changes
        between steps) and clamp to the never-arrived edge beyond the
        horizon; there is no interpolation.
        """
        a = self.index_of(t_s)
        b = self.index_of(t_l)
        return float(self.psnr[a, b]), float(self._q[a, b])

    def superlevel_set(self, eps: float) -> set[tuple[int, int]]:
        """All grid index pairs whose quality ratio is at least ``eps``."""
        if math.isnan(eps) or not 0.0 <= eps <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {eps}")
        rows, cols = np.nonzero(self._q >= eps)
        return {(int(a), int(b)) for a, b in zip(rows, cols)}

    def to_document(self) -> dict:
        """Grid document round-tripping exactly through ``from_grid``."""
        return {
            "omega": self.omega,
            "T": self.steps,
            "psnr_cap": self.psnr_cap,
            "grid": [float(v) for v in self.psnr.ravel()],
        }
