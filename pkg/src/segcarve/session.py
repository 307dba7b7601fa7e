"""Carving interaction state machine.

A session always carries one active clipping sphere; fixed spheres are
immutable once pushed. Fixing the active sphere appends it and spawns a
smaller replacement with a deep copy of the mask, so later toggles never
leak back into already-fixed spheres. All operations return a new
session value; sessions are never mutated in place.
"""

from dataclasses import dataclass, replace

import numpy as np

from .core import ClipMask, ClippingSphere, R_MAX_DEFAULT, R_MIN_DEFAULT, clamp_radius
from .errors import LabelOutOfRange, NothingToRemove
from .render import generate_ray, march_rays, prepare_volumes
from .scene import SphereSpec

SHRINK_FACTOR_DEFAULT = 0.75

ALL_CLIPPABLE = "all_clippable"
NONE_CLIPPABLE = "none_clippable"


@dataclass(frozen=True)
class PickResult:
    label: int | None
    position: tuple | None  # world mm of the first-hit sample

    @property
    def hit(self):
        return self.label is not None


@dataclass(frozen=True)
class CarveSession:
    fixed_spheres: tuple  # (ClippingSphere, ...), immutable once pushed
    active_sphere: ClippingSphere
    label_universe: int
    r_min: float = R_MIN_DEFAULT
    r_max: float = R_MAX_DEFAULT
    shrink_factor: float = SHRINK_FACTOR_DEFAULT

    def all_spheres(self):
        return list(self.fixed_spheres) + [self.active_sphere]


def new_session(
    label_universe,
    center=(0.0, 0.0, 0.0),
    radius=50.0,
    r_min=R_MIN_DEFAULT,
    r_max=R_MAX_DEFAULT,
    shrink_factor=SHRINK_FACTOR_DEFAULT,
):
    """Fresh session: one active sphere, all segments clippable."""
    active = ClippingSphere(
        center=tuple(float(c) for c in center),
        radius=clamp_radius(radius, r_min, r_max),
        mask=ClipMask.all_clippable(label_universe),
    )
    return CarveSession(
        fixed_spheres=(),
        active_sphere=active,
        label_universe=label_universe,
        r_min=r_min,
        r_max=r_max,
        shrink_factor=shrink_factor,
    )


def toggle_label(sess, label):
    """Flip one label bit on the active sphere only."""
    if not 0 <= label <= sess.label_universe:
        raise LabelOutOfRange("label %d outside 0..%d" % (label, sess.label_universe))
    active = replace(sess.active_sphere, mask=sess.active_sphere.mask.toggled(label))
    return replace(sess, active_sphere=active)


def reset_mask(sess, target):
    if target == ALL_CLIPPABLE:
        mask = ClipMask.all_clippable(sess.label_universe)
    elif target == NONE_CLIPPABLE:
        mask = ClipMask.none_clippable(sess.label_universe)
    else:
        raise ValueError("target must be %r or %r" % (ALL_CLIPPABLE, NONE_CLIPPABLE))
    return replace(sess, active_sphere=replace(sess.active_sphere, mask=mask))


def set_active_sphere(sess, center, radius):
    active = replace(
        sess.active_sphere,
        center=tuple(float(c) for c in center),
        radius=clamp_radius(radius, sess.r_min, sess.r_max),
    )
    return replace(sess, active_sphere=active)


def fix_active_sphere(sess):
    """Deposit the active sphere; spawn a shrunken copy with a cloned mask."""
    fixed = sess.active_sphere
    new_active = ClippingSphere(
        center=fixed.center,
        radius=clamp_radius(fixed.radius * sess.shrink_factor, sess.r_min, sess.r_max),
        mask=ClipMask(fixed.mask.bits),  # deep copy; toggles must not alias
    )
    return replace(
        sess,
        fixed_spheres=sess.fixed_spheres + (fixed,),
        active_sphere=new_active,
    )


def remove_last_sphere(sess):
    if not sess.fixed_spheres:
        raise NothingToRemove("no fixed spheres to remove")
    return replace(sess, fixed_spheres=sess.fixed_spheres[:-1])


def pick_segment(sess, ray, scene, intensity, labelmap, color_table):
    """First visible segment along a ray under the session's clip state.

    Shares the renderer's marching code, so a picked label always equals
    the first-hit buffer value for the corresponding pixel.
    """
    aa_opacity, normals, pose = prepare_volumes(
        scene, intensity, labelmap, spheres=sess.all_spheres()
    )
    lut = color_table.lut(labelmap.max_label)
    origins = np.asarray(ray.origin, dtype=np.float64)[None, :]
    dirs = np.asarray(ray.direction, dtype=np.float64)[None, :]
    _rgba, _depth, first_label, t_hit, have_hit = march_rays(
        origins, dirs, aa_opacity, normals, labelmap, lut, pose, scene.render
    )
    if not have_hit[0]:
        return PickResult(label=None, position=None)
    hit_world = origins[0] + t_hit[0] * dirs[0]
    return PickResult(
        label=int(first_label[0]), position=tuple(float(c) for c in hit_world)
    )


def pick_pixel(sess, pixel, scene, intensity, labelmap, color_table):
    ray = generate_ray(scene.camera, pixel)
    return pick_segment(sess, ray, scene, intensity, labelmap, color_table)


def snapshot(sess, scene):
    """Scene whose sphere list is fixed spheres followed by the active one."""
    specs = tuple(
        SphereSpec(
            center=tuple(float(c) for c in s.center),
            radius=float(s.radius),
            clipped_labels=s.mask.labels(),
        )
        for s in sess.all_spheres()
    )
    return replace(scene, spheres=specs)
