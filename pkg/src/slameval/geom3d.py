"""Rigid-body geometry: rotations, poses, trajectories and the SE(3) group operations.

Conventions used throughout the package:

- Rotations are stored as unit quaternions in Hamilton convention with
  internal component order (w, x, y, z). The sign is canonicalized to
  w >= 0 on construction so equal rotations compare equal.
- A pose is a rotation plus a translation in meters, equivalent to the
  4x4 homogeneous matrix with bottom row (0 0 0 1). It acts on points as
  x' = R x + t.
- Angles are radians everywhere inside the library. Degrees appear only
  at reporting boundaries.

The module has two layers: array-level quaternion helpers (``quat_*``)
that broadcast over stacked arrays of shape (..., 4) / (..., 3), and the
``Rotation`` / ``Pose`` / ``Trajectory`` value types with the group
operations ``compose``, ``inverse``, ``apply``, ``trans``, ``rot``,
``angle_of`` and ``relative``. The metric code uses the array layer for
whole-trajectory computations; both layers share the same formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "Rotation",
    "Pose",
    "Trajectory",
    "compose",
    "inverse",
    "apply",
    "trans",
    "rot",
    "angle_of",
    "relative",
    "quat_normalize",
    "quat_mul",
    "quat_conj",
    "quat_rotate",
    "quat_angle",
    "quat_to_matrix",
    "quat_from_matrix",
    "quat_from_axis_angle",
]

# Construction rejects quaternions whose norm falls outside this range;
# anything inside is treated as rounding drift and renormalized.
_QUAT_NORM_MIN = 0.9
_QUAT_NORM_MAX = 1.1


# ---------------------------------------------------------------------------
# Array-level quaternion helpers (w, x, y, z), broadcasting over (..., 4)
# ---------------------------------------------------------------------------

def quat_normalize(q: np.ndarray, check: bool = False) -> np.ndarray:
    """Return unit quaternions with the canonical sign w >= 0.

    With ``check=True`` raises ValidationError for norms outside
    [0.9, 1.1] instead of silently rescaling wild inputs.
    """
    q = np.asarray(q, dtype=float)
    norm = np.linalg.norm(q, axis=-1, keepdims=True)
    if check:
        bad = (norm < _QUAT_NORM_MIN) | (norm > _QUAT_NORM_MAX)
        if np.any(bad):
            raise ValidationError(
                f"quaternion norm {float(norm.ravel()[np.argmax(bad)]):.6g} outside "
                f"[{_QUAT_NORM_MIN}, {_QUAT_NORM_MAX}]"
            )
    if np.any(norm == 0.0):
        raise ValidationError("zero-norm quaternion")
    out = q / norm
    sign = np.where(out[..., :1] < 0.0, -1.0, 1.0)
    return out * sign


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product a * b, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def quat_conj(q: np.ndarray) -> np.ndarray:
    """Conjugate quaternion; the inverse for unit quaternions."""
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def quat_rotate(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate vectors v (..., 3) by unit quaternions q (..., 4)."""
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    u = q[..., 1:]
    w = q[..., :1]
    uv = np.cross(u, v)
    return v + 2.0 * (w * uv + np.cross(u, uv))


def quat_angle(q: np.ndarray) -> np.ndarray:
    """Rotation angle in [0, pi] via arccos((tr(R) - 1) / 2).

    The trace is assembled from the same diagonal terms as
    ``quat_to_matrix`` and the arccos argument is clamped to [-1, 1];
    without the clamp rounding can push it out of domain near 0 and pi.
    """
    q = np.asarray(q, dtype=float)
    x, y, z = q[..., 1], q[..., 2], q[..., 3]
    m00 = 1.0 - 2.0 * (y * y + z * z)
    m11 = 1.0 - 2.0 * (x * x + z * z)
    m22 = 1.0 - 2.0 * (x * x + y * y)
    tr = m00 + m11 + m22
    return np.arccos(np.clip((tr - 1.0) / 2.0, -1.0, 1.0))


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    """Convert unit quaternions (..., 4) to rotation matrices (..., 3, 3)."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    row0 = np.stack([1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)], axis=-1)
    row1 = np.stack([2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)], axis=-1)
    row2 = np.stack([2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)], axis=-1)
    return np.stack([row0, row1, row2], axis=-2)


def quat_from_matrix(m: np.ndarray) -> np.ndarray:
    """Convert one 3x3 rotation matrix to a (w, x, y, z) quaternion.

    Shepperd's branching keeps the division well conditioned for any
    rotation; the result is normalized and sign-canonicalized.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValidationError(f"expected 3x3 rotation matrix, got shape {m.shape}")
    # a reflection (det = -1) would convert silently into some unrelated
    # rotation; reject anything far from orthonormal-with-positive-det
    if not np.allclose(m @ m.T, np.eye(3), atol=0.1) or np.linalg.det(m) < 0.5:
        raise ValidationError("matrix is not a rotation (must be orthogonal with det +1)")
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    if tr > 0.0:
        s = math.sqrt(tr + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
        )
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        q = np.array(
            [(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
        )
    elif m[1, 1] > m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        q = np.array(
            [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s, (m[1, 2] + m[2, 1]) / s]
        )
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        q = np.array(
            [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, 0.25 * s]
        )
    return quat_normalize(q)


def quat_from_axis_angle(axis: Sequence[float], angle: float) -> np.ndarray:
    """Quaternion for a rotation of ``angle`` radians about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise ValidationError("rotation axis must be nonzero")
    axis = axis / norm
    half = 0.5 * float(angle)
    return quat_normalize(np.concatenate([[math.cos(half)], math.sin(half) * axis]))


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

def _locked(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Rotation:
    """A 3D rotation stored as a unit quaternion (w, x, y, z).

    Inputs are renormalized on construction; norms outside [0.9, 1.1]
    are rejected. The sign is canonicalized to w >= 0 (q and -q denote
    the same rotation). Instances are immutable.
    """

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (4,):
            raise ValidationError(f"quaternion must have shape (4,), got {q.shape}")
        object.__setattr__(self, "q", _locked(quat_normalize(q, check=True)))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.array([1.0, 0.0, 0.0, 0.0]))

    @classmethod
    def from_axis_angle(cls, axis: Sequence[float], angle: float) -> "Rotation":
        return cls(quat_from_axis_angle(axis, angle))

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Rotation":
        return cls(quat_from_matrix(m))

    @property
    def matrix(self) -> np.ndarray:
        """The equivalent 3x3 rotation matrix (derived on demand)."""
        return quat_to_matrix(self.q)

    def inverse(self) -> "Rotation":
        return Rotation(quat_conj(self.q))

    def rotate(self, v: Sequence[float]) -> np.ndarray:
        return quat_rotate(self.q, np.asarray(v, dtype=float))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rotation):
            return NotImplemented
        return bool(np.array_equal(self.q, other.q))

    def __repr__(self) -> str:
        w, x, y, z = self.q
        return f"Rotation(w={w:.9g}, x={x:.9g}, y={y:.9g}, z={z:.9g})"


@dataclass(frozen=True, eq=False)
class Pose:
    """A rigid transform (rotation, translation) with an optional timestamp.

    Equivalent to the homogeneous matrix [[R, t], [0, 1]]; acts on points
    as x' = R x + t. Timestamps are seconds.
    """

    rotation: Rotation
    translation: np.ndarray
    timestamp: float | None = None

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=float)
        if t.shape != (3,):
            raise ValidationError(f"translation must have shape (3,), got {t.shape}")
        object.__setattr__(self, "translation", _locked(t))
        if self.timestamp is not None:
            object.__setattr__(self, "timestamp", float(self.timestamp))

    @classmethod
    def identity(cls, timestamp: float | None = None) -> "Pose":
        return cls(Rotation.identity(), np.zeros(3), timestamp)

    @classmethod
    def from_matrix(cls, m: np.ndarray, timestamp: float | None = None) -> "Pose":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4):
            raise ValidationError(f"expected 4x4 homogeneous matrix, got shape {m.shape}")
        if not np.allclose(m[3], [0.0, 0.0, 0.0, 1.0], atol=1e-9):
            raise ValidationError("bottom row of a homogeneous matrix must be (0 0 0 1)")
        return cls(Rotation.from_matrix(m[:3, :3]), m[:3, 3], timestamp)

    @property
    def matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation.matrix
        m[:3, 3] = self.translation
        return m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pose):
            return NotImplemented
        return (
            self.rotation == other.rotation
            and bool(np.array_equal(self.translation, other.translation))
            and self.timestamp == other.timestamp
        )

    def __repr__(self) -> str:
        ts = "" if self.timestamp is None else f", t={self.timestamp:.6f}"
        return f"Pose({self.rotation!r}, trans={np.array2string(self.translation, precision=6)}{ts})"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """An ordered sequence of poses, optionally timestamped.

    Invariants: at least one pose; timestamps, where present on
    consecutive poses, strictly increase.
    """

    poses: tuple[Pose, ...]
    traj_id: str = ""

    def __post_init__(self):
        poses = tuple(self.poses)
        if len(poses) < 1:
            raise ValidationError("a trajectory must contain at least one pose")
        object.__setattr__(self, "poses", poses)
        prev = None
        for i, p in enumerate(poses):
            if p.timestamp is None:
                continue
            if prev is not None and p.timestamp <= prev:
                raise ValidationError(
                    f"timestamps must be strictly increasing; pose {i} has "
                    f"{p.timestamp!r} after {prev!r}"
                )
            prev = p.timestamp

    def __len__(self) -> int:
        return len(self.poses)

    def __iter__(self) -> Iterator[Pose]:
        return iter(self.poses)

    def __getitem__(self, i: int) -> Pose:
        return self.poses[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self.traj_id == other.traj_id and self.poses == other.poses

    @property
    def has_timestamps(self) -> bool:
        return all(p.timestamp is not None for p in self.poses)

    def timestamps(self) -> np.ndarray | None:
        """All timestamps as an array, or None if any pose is unstamped."""
        if not self.has_timestamps:
            return None
        return np.array([p.timestamp for p in self.poses])

    def translations(self) -> np.ndarray:
        """Stacked translations, shape (n, 3)."""
        return np.stack([p.translation for p in self.poses])

    def quaternions(self) -> np.ndarray:
        """Stacked rotation quaternions (w, x, y, z), shape (n, 4)."""
        return np.stack([p.rotation.q for p in self.poses])

    def subset(self, indices: Sequence[int]) -> "Trajectory":
        """Trajectory restricted to the given pose indices (kept in order)."""
        return Trajectory(tuple(self.poses[int(i)] for i in indices), self.traj_id)


# ---------------------------------------------------------------------------
# Group operations
# ---------------------------------------------------------------------------

def compose(a: Pose, b: Pose) -> Pose:
    """The product a * b of two rigid transforms.

    Rotation is Ra Rb, translation Ra tb + ta, matching the homogeneous
    matrix product. The result carries no timestamp.
    """
    q = quat_mul(a.rotation.q, b.rotation.q)  # renormalized by Rotation
    t = quat_rotate(a.rotation.q, b.translation) + a.translation
    return Pose(Rotation(q), t)


def inverse(p: Pose) -> Pose:
    """The inverse transform: rotation R^T, translation -R^T t."""
    qc = quat_conj(p.rotation.q)
    return Pose(Rotation(qc), -quat_rotate(qc, p.translation))


def apply(p: Pose, x: Sequence[float]) -> np.ndarray:
    """Apply the transform to a point: R x + t."""
    return quat_rotate(p.rotation.q, np.asarray(x, dtype=float)) + p.translation


def trans(p: Pose) -> np.ndarray:
    """Translation component of a pose."""
    return p.translation


def rot(p: Pose) -> Rotation:
    """Rotation component of a pose."""
    return p.rotation


def angle_of(r: Rotation) -> float:
    """Rotation angle in [0, pi]: arccos of the clamped (tr(R) - 1) / 2."""
    return float(quat_angle(r.q))


def relative(a: Pose, b: Pose) -> Pose:
    """The transform taking frame a to frame b: inverse(a) * b."""
    return compose(inverse(a), b)
