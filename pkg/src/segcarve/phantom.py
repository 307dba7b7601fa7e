"""Synthetic nested-shell phantom with analytically known geometry.

Shells are concentric spheres around the volume center. A voxel at
normalized world distance d from the center (d = 1 at the half-extent,
the smallest world half-size over the axes) gets the label and
intensity of the innermost shell whose radius fraction is >= d; voxels
outside every shell are background (label 0, intensity 0).
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadSpec
from .io import ColorTable, IntensityVolume, LabelMap
from .scene import CameraSpec, PoseSpec, RenderSpec, Scene, ShadingSpec

DEFAULT_FRACTIONS = (0.45, 0.35, 0.25, 0.12)
DEFAULT_LABELS = (1, 2, 3, 4)  # outermost .. innermost
DEFAULT_INTENSITIES = (40.0, 80.0, 120.0, 200.0)
DEFAULT_TF = ((0.0, 0.0), (20.0, 0.0), (40.0, 0.6), (200.0, 0.9))

SHELL_NAMES = ("outer_shell", "second_shell", "third_shell", "core")


@dataclass(frozen=True)
class PhantomSpec:
    dims: tuple = (128, 128, 128)
    spacing: tuple = (1.0, 1.0, 1.0)
    origin: tuple = (0.0, 0.0, 0.0)
    fractions: tuple = DEFAULT_FRACTIONS
    labels: tuple = DEFAULT_LABELS
    intensities: tuple = DEFAULT_INTENSITIES

    def __post_init__(self):
        if min(self.dims) < 2 or min(self.spacing) <= 0:
            raise BadSpec("dims must be >= 2 and spacing > 0")
        if any(b >= a for a, b in zip(self.fractions, self.fractions[1:])):
            raise BadSpec("radius fractions must strictly decrease")
        if len(set(self.labels)) != len(self.labels) or min(self.labels) <= 0:
            raise BadSpec("shell labels must be distinct and > 0")
        if not len(self.fractions) == len(self.labels) == len(self.intensities):
            raise BadSpec("fractions, labels and intensities must align")

    @property
    def center_world(self):
        return tuple(
            o + (n - 1) / 2.0 * s
            for o, n, s in zip(self.origin, self.dims, self.spacing)
        )

    @property
    def half_extent(self):
        return min((n - 1) / 2.0 * s for n, s in zip(self.dims, self.spacing))

    def shell_radius(self, shell_index):
        """World-space outer radius of a shell (0 = outermost)."""
        return self.fractions[shell_index] * self.half_extent


def phantom_generate(spec=PhantomSpec()):
    """Deterministic (IntensityVolume, LabelMap) pair for the spec."""
    nx, ny, nz = spec.dims
    sx, sy, sz = spec.spacing
    cx, cy, cz = spec.center_world
    ox, oy, oz = spec.origin
    ii, jj, kk = np.meshgrid(
        np.arange(nx, dtype=np.float64),
        np.arange(ny, dtype=np.float64),
        np.arange(nz, dtype=np.float64),
        indexing="ij",
    )
    dist = np.sqrt(
        (ox + ii * sx - cx) ** 2 + (oy + jj * sy - cy) ** 2 + (oz + kk * sz - cz) ** 2
    )
    d = dist / spec.half_extent

    labels = np.zeros(spec.dims, dtype=np.uint16)
    values = np.zeros(spec.dims, dtype=np.float32)
    # Walk outermost -> innermost; later (smaller) shells overwrite, which
    # realizes "innermost shell with fraction >= d".
    for fraction, label, intensity in zip(spec.fractions, spec.labels, spec.intensities):
        inside = d <= fraction
        labels[inside] = label
        values[inside] = intensity

    vol = IntensityVolume(spec.dims, spec.spacing, spec.origin, values)
    lab = LabelMap(spec.dims, spec.spacing, spec.origin, labels)
    return vol, lab


def phantom_color_table(spec=PhantomSpec()):
    entries = {0: ((0.0, 0.0, 0.0), "background")}
    palette = [
        (0.9, 0.75, 0.6),
        (0.8, 0.3, 0.25),
        (0.95, 0.85, 0.3),
        (0.3, 0.5, 0.9),
    ]
    for i, label in enumerate(spec.labels):
        name = SHELL_NAMES[i] if i < len(SHELL_NAMES) else "shell_%d" % label
        entries[label] = (palette[i % len(palette)], name)
    return ColorTable(entries)


def phantom_scene(
    spec=PhantomSpec(),
    intensity_path="phantom_intensity.nrrd",
    labels_path="phantom_labels.nrrd",
    color_table_path="phantom_colors.txt",
    width=256,
    height=256,
    spheres=(),
    tf=DEFAULT_TF,
    aa_enabled=True,
    tau_hit=0.05,
):
    """Frontal default scene: camera on +z looking at the volume center."""
    cx, cy, cz = spec.center_world
    distance = 3.2 * spec.half_extent
    camera = CameraSpec(
        position=(cx, cy, cz + distance),
        look_at=(cx, cy, cz),
        up=(0.0, 1.0, 0.0),
        vfov_deg=45.0,
        width=width,
        height=height,
    )
    return Scene(
        intensity=intensity_path,
        labels=labels_path,
        color_table=color_table_path,
        transfer_function=tuple(tf),
        pose=PoseSpec(),
        spheres=tuple(spheres),
        camera=camera,
        render=RenderSpec(
            step_size_voxels=0.5,
            early_term_alpha=0.99,
            tau_hit=tau_hit,
            aa_enabled=aa_enabled,
            shading=ShadingSpec(),
        ),
    )
