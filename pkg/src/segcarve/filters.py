"""Pipeline stages 2 and 3: opacity anti-aliasing and normal estimation.

Stage 2 smooths the opacity volume only where it is locally edgy: a
voxel whose 6-neighborhood contrast (max - min, border indices clamped)
exceeds the threshold is replaced by the 3x3x3 tent-weighted average
with weights (1,2,1) x (1,2,1) x (1,2,1) / 64; all other voxels are
copied through.

Stage 3 estimates normals from the (anti-aliased) opacity volume with a
3D Sobel operator: derivative kernel (-1, 0, 1) along the axis,
smoothing (1,2,1) across the other two, normalized by 1/32 so a
unit-slope ramp yields gradient magnitude 1. The normal is the negative
normalized gradient (opacity grows into the material), or the zero
vector where the gradient magnitude is <= 1e-6.

Both stages clamp indices at the borders (replicate edge) and are
voxel-parallel with deterministic output.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

GRAD_EPS = 1e-6
_TENT = np.array([1.0, 2.0, 1.0])


@dataclass(frozen=True)
class AaParams:
    contrast_threshold: float = 0.125
    enabled: bool = True

    def __post_init__(self):
        if not 0.0 < self.contrast_threshold <= 1.0:
            raise ValueError("contrast_threshold must be in (0, 1]")


@dataclass(frozen=True)
class NormalVolume:
    dims: tuple
    normals: np.ndarray  # (nx, ny, nz, 3) float32, unit or exactly zero

    def __post_init__(self):
        self.normals.setflags(write=False)


def _pad_edge(values):
    return np.pad(values, 1, mode="edge")


def _neighborhood_contrast(values):
    """max - min over the voxel's 6-connected neighborhood (incl. itself)."""
    p = _pad_edge(values)
    c = p[1:-1, 1:-1, 1:-1]
    shifts = [
        p[:-2, 1:-1, 1:-1], p[2:, 1:-1, 1:-1],
        p[1:-1, :-2, 1:-1], p[1:-1, 2:, 1:-1],
        p[1:-1, 1:-1, :-2], p[1:-1, 1:-1, 2:],
    ]
    lo = c.copy()
    hi = c.copy()
    for s in shifts:
        np.minimum(lo, s, out=lo)
        np.maximum(hi, s, out=hi)
    return hi - lo


def _tent_average(values):
    """3x3x3 tent-weighted average, accumulated in a fixed tap order so
    the result is bit-reproducible against a naive triple-loop sum."""
    p = _pad_edge(values.astype(np.float64))
    acc = np.zeros(values.shape, dtype=np.float64)
    for di in (-1, 0, 1):
        wi = _TENT[di + 1]
        for dj in (-1, 0, 1):
            wij = wi * _TENT[dj + 1]
            for dk in (-1, 0, 1):
                w = wij * _TENT[dk + 1]
                acc += w * p[
                    1 + di : p.shape[0] - 1 + di,
                    1 + dj : p.shape[1] - 1 + dj,
                    1 + dk : p.shape[2] - 1 + dk,
                ]
    return acc / 64.0


def antialias_opacity(ov, params=AaParams()):
    """Contrast-gated tent smoothing of the opacity volume."""
    from .core import OpacityVolume

    if not params.enabled:
        return ov
    values = ov.values
    contrast = _neighborhood_contrast(values)
    smoothed = _tent_average(values).astype(np.float32)
    out = np.where(contrast > params.contrast_threshold, smoothed, values)
    return OpacityVolume(ov.dims, ov.spacing, ov.origin, out)


def compute_normals(ov):
    """Sobel gradient of the opacity volume, returned as outward normals."""
    values = ov.values.astype(np.float64)
    deriv = np.array([-1.0, 0.0, 1.0])
    grad = np.empty(values.shape + (3,), dtype=np.float64)
    for axis in range(3):
        g = ndimage.correlate1d(values, deriv, axis=axis, mode="nearest")
        for other in range(3):
            if other != axis:
                g = ndimage.correlate1d(g, _TENT, axis=other, mode="nearest")
        grad[..., axis] = g / 32.0

    mag = np.sqrt(np.sum(grad * grad, axis=-1))
    safe = np.where(mag > GRAD_EPS, mag, 1.0)
    normals = np.where(
        (mag > GRAD_EPS)[..., None], -grad / safe[..., None], 0.0
    ).astype(np.float32)
    return NormalVolume(ov.dims, normals)
