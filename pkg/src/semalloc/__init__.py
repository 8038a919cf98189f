"""Deadline-aware bandwidth allocation for two-modality semantic links.

The pipeline: model per-link transmission delays (`channel`), generate a
quality surface over arrival-delay pairs with a deterministic receiver
surrogate (`toy_diffusion`, `surface`), extract the deadline curve of
farthest delay pairs per quality level (`deadline`), split a bandwidth
budget against that curve and against two baselines (`allocator`), and
sweep it all under Monte Carlo fading (`sim`).
"""

from .allocator import (
    Allocation,
    allocate_benchmark1,
    allocate_benchmark2,
    allocate_from_curve,
    allocate_proposed,
    evaluate_allocation,
    min_bandwidths,
    solve_p2,
    solve_p3,
)
from .channel import (
    FadingModel,
    InfiniteBandwidthError,
    LinkSpec,
    db_to_linear,
    linear_to_db,
    required_bandwidth,
    sample_gain,
    transmission_time,
)
from .deadline import (
    DeadlineCurve,
    DeadlinePoint,
    UnachievableThresholdError,
    VisitCounter,
    curve_to_csv,
    deadline_curve,
    deadline_point,
)
from .sim import (
    ParametricConfig,
    SimConfig,
    SummaryRow,
    TrialRecord,
    build_surface,
    load_config,
    records_to_csv,
    run_sweep,
    summarize,
    summary_to_csv,
    trial_rng,
)
from .surface import PARAMETRIC_PSNR_REF, GridFormatError, QualitySurface
from .toy_diffusion import (
    CASE_BOTH,
    CASE_MASK_ONLY,
    CASE_NEITHER,
    CASE_TEXT_ONLY,
    ConditioningSet,
    ToyDiffusionConfig,
    arrival_step,
    case_schedule,
    generate_grid,
    grid_document,
    initial_latent,
    psnr,
    reference,
    run,
)

__version__ = "0.1.0"
