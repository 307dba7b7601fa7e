"""Pipeline stage 1: per-segment sphere clipping and the opacity volume.

A voxel is clipped when it lies strictly inside at least one clipping
sphere whose mask marks the voxel's label as clippable:

    clipped(v) = OR_i inside(s_i, v) AND mask(s_i, label(v))

The test runs in world space: the voxel's world position is

    world = translation + scale * (R @ (origin + index * spacing))

with R the rotation matrix of the pose quaternion (w, x, y, z), computed
component-wise in double precision. Unclipped voxels get the transfer
function applied to their intensity; clipped voxels get opacity 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimsMismatch

R_MIN_DEFAULT = 1.0
R_MAX_DEFAULT = 500.0


def quat_to_matrix(q):
    """Rotation matrix for a unit quaternion (w, x, y, z)."""
    w, x, y, z = (float(c) for c in q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ],
        dtype=np.float64,
    )


@dataclass(frozen=True)
class Pose:
    """Rigid pose plus uniform scale; maps volume-local mm to world mm."""
    translation: np.ndarray
    matrix: np.ndarray  # 3x3 rotation
    scale: float

    @classmethod
    def from_spec(cls, spec):
        return cls(
            translation=np.asarray(spec.translation, dtype=np.float64),
            matrix=quat_to_matrix(spec.rotation),
            scale=float(spec.scale),
        )

    @classmethod
    def identity(cls):
        return cls(np.zeros(3), np.eye(3), 1.0)

    def apply(self, points):
        """local -> world; points is (..., 3).

        Evaluated component-wise (no matmul) so scalar and vectorized
        callers produce bit-identical doubles.
        """
        p = np.asarray(points, dtype=np.float64)
        x, y, z = p[..., 0], p[..., 1], p[..., 2]
        m = self.matrix
        t = self.translation
        s = self.scale
        return np.stack(
            [
                t[0] + s * (m[0, 0] * x + m[0, 1] * y + m[0, 2] * z),
                t[1] + s * (m[1, 0] * x + m[1, 1] * y + m[1, 2] * z),
                t[2] + s * (m[2, 0] * x + m[2, 1] * y + m[2, 2] * z),
            ],
            axis=-1,
        )

    def apply_inverse(self, points):
        """world -> local."""
        p = np.asarray(points, dtype=np.float64)
        x = (p[..., 0] - self.translation[0]) / self.scale
        y = (p[..., 1] - self.translation[1]) / self.scale
        z = (p[..., 2] - self.translation[2]) / self.scale
        m = self.matrix  # inverse rotation = transpose
        return np.stack(
            [
                m[0, 0] * x + m[1, 0] * y + m[2, 0] * z,
                m[0, 1] * x + m[1, 1] * y + m[2, 1] * z,
                m[0, 2] * x + m[1, 2] * y + m[2, 2] * z,
            ],
            axis=-1,
        )

    def rotate_inverse(self, vectors):
        v = np.asarray(vectors, dtype=np.float64)
        x, y, z = v[..., 0], v[..., 1], v[..., 2]
        m = self.matrix
        return np.stack(
            [
                m[0, 0] * x + m[1, 0] * y + m[2, 0] * z,
                m[0, 1] * x + m[1, 1] * y + m[2, 1] * z,
                m[0, 2] * x + m[1, 2] * y + m[2, 2] * z,
            ],
            axis=-1,
        )


@dataclass(frozen=True)
class OpacityTransferFunction:
    """Piecewise-linear intensity -> opacity map, clamped outside the
    control-point domain."""
    points: tuple  # ((intensity, opacity), ...), >= 2 entries

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("transfer function needs >= 2 control points")
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("control-point intensities must strictly increase")
        if any(not 0.0 <= p[1] <= 1.0 for p in self.points):
            raise ValueError("opacities must be in [0, 1]")

    def __call__(self, intensity):
        """Evaluate for a scalar or array of intensities; returns float32."""
        xs = np.array([p[0] for p in self.points], dtype=np.float64)
        ys = np.array([p[1] for p in self.points], dtype=np.float64)
        x = np.asarray(intensity, dtype=np.float64)
        idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
        x0, x1 = xs[idx], xs[idx + 1]
        y0, y1 = ys[idx], ys[idx + 1]
        t = np.clip((x - x0) / (x1 - x0), 0.0, 1.0)
        out = (y0 + t * (y1 - y0)).astype(np.float32)
        return out if out.ndim else np.float32(out)


def eval_transfer(tf, intensity):
    return tf(intensity)


class ClipMask:
    """Bitset over label ids 0..max_label; a set bit means the label is
    clippable by the owning sphere. Instances are immutable; mutating
    operations return new masks."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=bool).copy()
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("ClipMask is immutable")

    @classmethod
    def all_clippable(cls, label_universe):
        return cls(np.ones(label_universe + 1, dtype=bool))

    @classmethod
    def none_clippable(cls, label_universe):
        return cls(np.zeros(label_universe + 1, dtype=bool))

    @classmethod
    def from_labels(cls, labels, label_universe):
        bits = np.zeros(label_universe + 1, dtype=bool)
        for label in labels:
            bits[label] = True
        return cls(bits)

    def toggled(self, label):
        bits = self.bits.copy()
        bits[label] = not bits[label]
        return ClipMask(bits)

    def labels(self):
        return tuple(int(i) for i in np.nonzero(self.bits)[0])

    def popcount(self):
        return int(self.bits.sum())

    def __len__(self):
        return len(self.bits)

    def __eq__(self, other):
        return isinstance(other, ClipMask) and np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return "ClipMask(%s)" % self.bits.astype(int).tolist()


@dataclass(frozen=True)
class ClippingSphere:
    """World-space clipping sphere with its per-label mask."""
    center: tuple  # world mm
    radius: float
    mask: ClipMask

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("sphere radius must be > 0")


@dataclass(frozen=True)
class OpacityVolume:
    dims: tuple
    spacing: tuple
    origin: tuple
    values: np.ndarray  # float32 in [0, 1]

    def __post_init__(self):
        if self.values.shape != tuple(self.dims):
            raise DimsMismatch("opacity shape does not match dims")
        self.values.setflags(write=False)


def voxel_world_positions(dims, spacing, origin, pose):
    """(nx, ny, nz, 3) array of voxel-center world positions."""
    nx, ny, nz = dims
    ii, jj, kk = np.meshgrid(
        np.arange(nx, dtype=np.float64),
        np.arange(ny, dtype=np.float64),
        np.arange(nz, dtype=np.float64),
        indexing="ij",
    )
    local = np.stack(
        [
            origin[0] + ii * spacing[0],
            origin[1] + jj * spacing[1],
            origin[2] + kk * spacing[2],
        ],
        axis=-1,
    )
    return pose.apply(local)


def clipped_mask(labelmap, spheres, pose):
    """Boolean (nx, ny, nz) array: True where the voxel is clipped."""
    clipped = np.zeros(labelmap.dims, dtype=bool)
    if not spheres:
        return clipped
    world = voxel_world_positions(labelmap.dims, labelmap.spacing, labelmap.origin, pose)
    for sphere in spheres:
        cx, cy, cz = (float(c) for c in sphere.center)
        d2 = (
            (world[..., 0] - cx) ** 2
            + (world[..., 1] - cy) ** 2
            + (world[..., 2] - cz) ** 2
        )
        inside = d2 < float(sphere.radius) ** 2  # strict: boundary stays visible
        bits = sphere.mask.bits
        labels = labelmap.labels
        clippable = bits[np.minimum(labels, len(bits) - 1)] & (labels < len(bits))
        clipped |= inside & clippable
    return clipped


def is_clipped(index, labelmap, spheres, pose):
    """Scalar form of the clipping predicate for voxel (i, j, k)."""
    i, j, k = index
    local = np.array(
        [
            labelmap.origin[0] + i * labelmap.spacing[0],
            labelmap.origin[1] + j * labelmap.spacing[1],
            labelmap.origin[2] + k * labelmap.spacing[2],
        ]
    )
    world = pose.apply(local)
    label = int(labelmap.labels[i, j, k])
    for sphere in spheres:
        d2 = float(np.sum((world - np.asarray(sphere.center, dtype=np.float64)) ** 2))
        if d2 < float(sphere.radius) ** 2 and label < len(sphere.mask.bits) and sphere.mask.bits[label]:
            return True
    return False


def compute_opacity_volume(intensity, labelmap, tf, spheres, pose):
    """Apply the transfer function, zeroing clipped voxels.

    Output is independent of sphere order and of any parallel schedule;
    clipped voxels are exactly 0.
    """
    if intensity.dims != labelmap.dims:
        raise DimsMismatch(
            "intensity dims %s != label dims %s" % (intensity.dims, labelmap.dims)
        )
    opacity = tf(intensity.values)
    clipped = clipped_mask(labelmap, spheres, pose)
    values = np.where(clipped, np.float32(0.0), opacity)
    return OpacityVolume(intensity.dims, intensity.spacing, intensity.origin, values)


def clamp_radius(radius, r_min=R_MIN_DEFAULT, r_max=R_MAX_DEFAULT):
    return float(min(max(radius, r_min), r_max))
