"""Per-sequence motion attributes and frame-skip resampling.

The attributes characterize how hard a sequence is for a tracking
system: mean velocity per frame (meters), mean angular velocity per
frame (degrees), frame count, path length, and wall-clock duration when
timestamps exist. Angular velocity is the one value the library reports
in degrees, since per-frame angular rates of handheld or robot footage
land in the single-digit-degree range and read naturally there; every
internal computation stays in radians.

Stride resampling keeps every s-th frame and is the standard way to
emulate a faster agent from recorded footage ("skip k" frames equals
stride k + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .geom3d import Trajectory, quat_angle, quat_conj, quat_mul

__all__ = ["SequenceStats", "sequence_stats", "resample_stride", "cohort_stats"]


@dataclass(frozen=True)
class SequenceStats:
    """Motion attributes of one trajectory (or averages over a cohort).

    frame_count is integral for a single sequence but fractional when
    averaged across sequences.
    """

    mean_vel_per_frame: float
    mean_ang_vel_per_frame: float
    frame_count: float
    duration: float | None
    path_length: float

    @property
    def mean_vel_per_sec(self) -> float | None:
        """Velocity in m/s, derivable only when a duration is known."""
        if self.duration is None or self.duration <= 0.0:
            return None
        return self.path_length / self.duration


def sequence_stats(t: Trajectory) -> SequenceStats:
    """Attributes of one trajectory; a single-pose trajectory has zero motion."""
    n = len(t)
    ts = t.timestamps()
    duration = float(ts[-1] - ts[0]) if ts is not None else None
    if n == 1:
        return SequenceStats(0.0, 0.0, 1, duration, 0.0)

    tr = t.translations()
    steps = np.linalg.norm(np.diff(tr, axis=0), axis=1)
    path_length = math.fsum(steps.tolist())

    q = t.quaternions()
    angles = np.atleast_1d(quat_angle(quat_mul(quat_conj(q[:-1]), q[1:])))
    mean_ang = math.degrees(math.fsum(angles.tolist()) / (n - 1))

    return SequenceStats(
        mean_vel_per_frame=path_length / (n - 1),
        mean_ang_vel_per_frame=mean_ang,
        frame_count=n,
        duration=duration,
        path_length=path_length,
    )


def resample_stride(t: Trajectory, stride: int) -> Trajectory:
    """Keep poses at indices 0, stride, 2*stride, ...

    stride = 1 returns the trajectory unchanged; "skip k" frames is
    stride k + 1. Composition collapses: resampling by a then b equals
    resampling by a * b.
    """
    stride = int(stride)
    if stride < 1:
        raise ValidationError(f"stride must be >= 1, got {stride}")
    if stride == 1:
        return t
    return Trajectory(t.poses[::stride], t.traj_id)


def cohort_stats(stats: Sequence[SequenceStats]) -> SequenceStats:
    """Arithmetic mean of each attribute over a cohort.

    duration is averaged over the sequences that have one (None when
    none do).
    """
    if not stats:
        raise ValidationError("cohort_stats needs at least one SequenceStats")
    k = len(stats)
    durations = [s.duration for s in stats if s.duration is not None]
    return SequenceStats(
        mean_vel_per_frame=math.fsum(s.mean_vel_per_frame for s in stats) / k,
        mean_ang_vel_per_frame=math.fsum(s.mean_ang_vel_per_frame for s in stats) / k,
        frame_count=math.fsum(s.frame_count for s in stats) / k,
        duration=(math.fsum(durations) / len(durations)) if durations else None,
        path_length=math.fsum(s.path_length for s in stats) / k,
    )
