"""slameval: trajectory evaluation for visual SLAM.

Pose-level geometry, TUM-format trajectory I/O with timestamp
association, closed-form rigid alignment, ATE/RPE accuracy metrics, and
cohort-level robustness statistics (multi-run medians, cumulative
distributions, failure-gap detection, attribute correlations).
"""

__version__ = "0.1.0"

from .align import AlignmentResult, horn_align
from .cohort import (
    CohortSummary,
    Gap,
    MetricRecord,
    SequenceResult,
    aggregate_runs,
    cdf,
    detect_gap,
    spearman,
    success_rate,
    summarize,
)
from .errors import (
    EmptyAssociationError,
    ParseError,
    SlamEvalError,
    UndefinedCorrelationError,
    ValidationError,
)
from .geom3d import (
    Pose,
    Rotation,
    Trajectory,
    angle_of,
    apply,
    compose,
    inverse,
    relative,
    rot,
    trans,
)
from .metrics import AteReport, RpeReport, ate, rpe
from .synth import PerturbationSpec, perturb, random_trajectory
from .trajio import (
    Association,
    associate,
    associate_by_index,
    dumps_tum,
    load_tum,
    parse_tum,
    save_tum,
    write_tum,
)
from .trajstats import SequenceStats, cohort_stats, resample_stride, sequence_stats

__all__ = [
    "__version__",
    "AlignmentResult",
    "horn_align",
    "CohortSummary",
    "Gap",
    "MetricRecord",
    "SequenceResult",
    "aggregate_runs",
    "cdf",
    "detect_gap",
    "spearman",
    "success_rate",
    "summarize",
    "SlamEvalError",
    "ValidationError",
    "ParseError",
    "EmptyAssociationError",
    "UndefinedCorrelationError",
    "Pose",
    "Rotation",
    "Trajectory",
    "angle_of",
    "apply",
    "compose",
    "inverse",
    "relative",
    "rot",
    "trans",
    "AteReport",
    "RpeReport",
    "ate",
    "rpe",
    "PerturbationSpec",
    "perturb",
    "random_trajectory",
    "Association",
    "associate",
    "associate_by_index",
    "dumps_tum",
    "load_tum",
    "parse_tum",
    "save_tum",
    "write_tum",
    "SequenceStats",
    "cohort_stats",
    "resample_stride",
    "sequence_stats",
]
