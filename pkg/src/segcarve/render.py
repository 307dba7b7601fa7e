"""Pipeline stage 4: perspective ray casting over the filtered volumes.

Rays are marched front-to-back through the anti-aliased opacity volume
at a world step of ``step_size_voxels * min(spacing)``. Per sample:
opacity is trilinear, the segment label nearest-neighbor, the normal
trilinear and renormalized. Opacity is corrected for step length,
``a' = 1 - (1 - a) ** (step / min(spacing))``, samples are shaded with
Blinn-Phong under a headlight (light along the negative ray direction),
and composited front-to-back with early termination. The first sample
whose corrected opacity reaches ``tau_hit`` defines the first-hit label
and the normalized depth ``(t - t_enter) / (t_exit - t_enter)``; rays
with no such sample get depth 1.0 and the miss sentinel 65535.

Rendering is pixel-parallel over row blocks and byte-identical across
thread counts.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import ClipMask, ClippingSphere, OpacityTransferFunction, Pose, compute_opacity_volume
from .errors import DimsMismatch
from .filters import AaParams, antialias_opacity, compute_normals
from .io import MISS_LABEL, FrameSet


@dataclass(frozen=True)
class Ray:
    origin: np.ndarray
    direction: np.ndarray  # unit length


def camera_basis(cam):
    position = np.asarray(cam.position, dtype=np.float64)
    look_at = np.asarray(cam.look_at, dtype=np.float64)
    up = np.asarray(cam.up, dtype=np.float64)
    forward = look_at - position
    forward = forward / np.linalg.norm(forward)
    right = np.cross(forward, up)
    norm = np.linalg.norm(right)
    if norm < 1e-12:
        raise ValueError("camera up is parallel to the view direction")
    right = right / norm
    true_up = np.cross(right, forward)
    return position, forward, right, true_up


def generate_rays(cam, px, py):
    """Pinhole rays through pixel centers; px/py may be arrays."""
    position, forward, right, true_up = camera_basis(cam)
    tan_half = math.tan(math.radians(cam.vfov_deg) / 2.0)
    aspect = cam.width / cam.height
    x = ((np.asarray(px, dtype=np.float64) + 0.5) / cam.width) * 2.0 - 1.0
    y = 1.0 - ((np.asarray(py, dtype=np.float64) + 0.5) / cam.height) * 2.0
    d = (
        forward
        + (x * aspect * tan_half)[..., None] * right
        + (y * tan_half)[..., None] * true_up
    )
    d = d / np.linalg.norm(d, axis=-1, keepdims=True)
    origins = np.broadcast_to(position, d.shape).copy()
    return origins, d


def generate_ray(cam, pixel):
    px, py = pixel
    if not (0 <= px < cam.width and 0 <= py < cam.height):
        raise ValueError("pixel (%s, %s) outside the image" % (px, py))
    origins, dirs = generate_rays(cam, np.array([px]), np.array([py]))
    return Ray(origin=origins[0], direction=dirs[0])


def intersect_aabb(origin, direction, lo, hi):
    """Slab test. Returns (t_enter, t_exit) with t_enter clamped to 0
    when the origin is inside, or None on a miss. Array inputs return
    (t_enter, t_exit, hit_mask)."""
    origin = np.asarray(origin, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / direction
        t0 = (lo - origin) * inv
        t1 = (hi - origin) * inv
    tmin = np.minimum(t0, t1)
    tmax = np.maximum(t0, t1)
    # Parallel rays: inside the slab -> (-inf, inf), outside -> empty.
    parallel = direction == 0.0
    if np.any(parallel):
        inside = (origin >= lo) & (origin <= hi)
        tmin = np.where(parallel, np.where(inside, -np.inf, np.inf), tmin)
        tmax = np.where(parallel, np.where(inside, np.inf, -np.inf), tmax)
    near = tmin.max(axis=-1)
    far = tmax.min(axis=-1)
    t_enter = np.maximum(near, 0.0)
    hit = far >= t_enter
    if origin.ndim == 1:
        return (float(t_enter), float(far)) if hit else None
    return t_enter, far, hit


def _trilinear_setup(values):
    nx, ny, nz = values.shape[:3]
    return nx, ny, nz


def _trilinear(values, ix, iy, iz):
    """Trilinear interpolation at fractional index coordinates, clamped
    to the valid range. ``values`` is (nx, ny, nz) or (nx, ny, nz, C)."""
    nx, ny, nz = values.shape[:3]
    ix = np.clip(ix, 0.0, nx - 1.0)
    iy = np.clip(iy, 0.0, ny - 1.0)
    iz = np.clip(iz, 0.0, nz - 1.0)
    x0 = np.minimum(ix.astype(np.int64), nx - 2) if nx > 1 else np.zeros_like(ix, np.int64)
    y0 = np.minimum(iy.astype(np.int64), ny - 2) if ny > 1 else np.zeros_like(iy, np.int64)
    z0 = np.minimum(iz.astype(np.int64), nz - 2) if nz > 1 else np.zeros_like(iz, np.int64)
    x1 = np.minimum(x0 + 1, nx - 1)
    y1 = np.minimum(y0 + 1, ny - 1)
    z1 = np.minimum(z0 + 1, nz - 1)
    fx = ix - x0
    fy = iy - y0
    fz = iz - z0
    if values.ndim == 4:
        fx = fx[..., None]
        fy = fy[..., None]
        fz = fz[..., None]
    v000 = values[x0, y0, z0]
    v100 = values[x1, y0, z0]
    v010 = values[x0, y1, z0]
    v110 = values[x1, y1, z0]
    v001 = values[x0, y0, z1]
    v101 = values[x1, y0, z1]
    v011 = values[x0, y1, z1]
    v111 = values[x1, y1, z1]
    c00 = v000 + fx * (v100 - v000)
    c10 = v010 + fx * (v110 - v010)
    c01 = v001 + fx * (v101 - v001)
    c11 = v011 + fx * (v111 - v011)
    c0 = c00 + fy * (c10 - c00)
    c1 = c01 + fy * (c11 - c01)
    return c0 + fz * (c1 - c0)


def _nearest_label(labels, ix, iy, iz):
    nx, ny, nz = labels.shape
    i = np.clip(np.rint(ix).astype(np.int64), 0, nx - 1)
    j = np.clip(np.rint(iy).astype(np.int64), 0, ny - 1)
    k = np.clip(np.rint(iz).astype(np.int64), 0, nz - 1)
    return labels[i, j, k]


def march_rays(origins, dirs, aa_opacity, normals, labelmap, color_lut, pose, params):
    """March a batch of world-space rays.

    Returns (rgba uint8 (N, 4), depth float32 (N,), first_label uint16
    (N,), t_hit float64 (N,), hit mask). ``t_hit`` is NaN for rays that
    never cross ``tau_hit``.
    """
    n = origins.shape[0]
    spacing = np.asarray(aa_opacity.spacing, dtype=np.float64)
    origin_mm = np.asarray(aa_opacity.origin, dtype=np.float64)
    dims = aa_opacity.dims
    shading = params.shading
    background = np.asarray(shading.background, dtype=np.float64)

    # Local-space ray: point(t) = o_l + t * d_l with t in world mm.
    o_l = pose.apply_inverse(origins)
    d_l = pose.rotate_inverse(dirs) / pose.scale

    lo = origin_mm
    hi = origin_mm + (np.asarray(dims, dtype=np.float64) - 1.0) * spacing
    t_enter, t_exit, entered = intersect_aabb(o_l, d_l, lo, hi)

    accum_color = np.zeros((n, 3), dtype=np.float64)
    accum_alpha = np.zeros(n, dtype=np.float64)
    depth = np.ones(n, dtype=np.float64)
    first_label = np.full(n, MISS_LABEL, dtype=np.uint16)
    t_hit = np.full(n, np.nan, dtype=np.float64)
    have_hit = np.zeros(n, dtype=bool)

    step = params.step_size_voxels * float(spacing.min())
    exponent = params.step_size_voxels  # step / min(spacing)
    light_l = -d_l / np.linalg.norm(d_l, axis=-1, keepdims=True)

    active = entered & (t_exit >= t_enter)
    idx_active = np.nonzero(active)[0]
    k = 0
    opac = aa_opacity.values
    labels = labelmap.labels
    nrm = normals.normals
    while idx_active.size:
        t_k = t_enter[idx_active] + k * step
        alive = t_k <= t_exit[idx_active]
        idx_active = idx_active[alive]
        if not idx_active.size:
            break
        t_k = t_k[alive]

        p = o_l[idx_active] + t_k[:, None] * d_l[idx_active]
        ix = (p[:, 0] - origin_mm[0]) / spacing[0]
        iy = (p[:, 1] - origin_mm[1]) / spacing[1]
        iz = (p[:, 2] - origin_mm[2]) / spacing[2]

        alpha = _trilinear(opac, ix, iy, iz)
        corrected = 1.0 - np.power(1.0 - alpha, exponent)
        occupied = corrected > 0.0
        if np.any(occupied):
            sel = idx_active[occupied]
            a = corrected[occupied]

            # first-hit bookkeeping
            hit_now = (a >= params.tau_hit) & ~have_hit[sel]
            if np.any(hit_now):
                hit_idx = sel[hit_now]
                span = t_exit[hit_idx] - t_enter[hit_idx]
                span = np.where(span > 0.0, span, 1.0)
                depth[hit_idx] = (t_k[occupied][hit_now] - t_enter[hit_idx]) / span
                first_label[hit_idx] = _nearest_label(
                    labels, ix[occupied][hit_now], iy[occupied][hit_now], iz[occupied][hit_now]
                )
                t_hit[hit_idx] = t_k[occupied][hit_now]
                have_hit[hit_idx] = True

            # shading
            lbl = _nearest_label(labels, ix[occupied], iy[occupied], iz[occupied])
            base = color_lut[np.minimum(lbl, color_lut.shape[0] - 1)].astype(np.float64)
            nvec = _trilinear(nrm, ix[occupied], iy[occupied], iz[occupied])
            nmag = np.linalg.norm(nvec, axis=-1)
            has_n = nmag > 1e-6
            ndotl = np.zeros(a.shape, dtype=np.float64)
            if np.any(has_n):
                unit_n = nvec[has_n] / nmag[has_n, None]
                ndotl[has_n] = np.maximum(
                    0.0, np.sum(unit_n * light_l[sel][has_n], axis=-1)
                )
            shaded = shading.ka * base
            shaded += shading.kd * ndotl[:, None] * base
            shaded += (shading.ks * np.power(ndotl, shading.shininess))[:, None]

            trans = 1.0 - accum_alpha[sel]
            accum_color[sel] += (trans * a)[:, None] * shaded
            accum_alpha[sel] += trans * a

        # early termination
        still = accum_alpha[idx_active] < params.early_term_alpha
        idx_active = idx_active[still]
        k += 1

    depth32 = depth.astype(np.float32)
    # Depth 1.0 is reserved for misses; nudge boundary hits just below it.
    hit_at_exit = have_hit & (depth32 >= 1.0)
    depth32[hit_at_exit] = np.nextafter(np.float32(1.0), np.float32(0.0))

    out_rgb = accum_color + (1.0 - accum_alpha)[:, None] * background[:3]
    out_a = accum_alpha + (1.0 - accum_alpha) * background[3]
    rgba = np.empty((n, 4), dtype=np.uint8)
    rgba[:, :3] = np.rint(np.clip(out_rgb, 0.0, 1.0) * 255.0).astype(np.uint8)
    rgba[:, 3] = np.rint(np.clip(out_a, 0.0, 1.0) * 255.0).astype(np.uint8)
    return rgba, depth32, first_label, t_hit, have_hit


def spheres_from_scene(scene, label_universe):
    spheres = []
    for spec in scene.spheres:
        mask = ClipMask.from_labels(
            [l for l in spec.clipped_labels if l <= label_universe], label_universe
        )
        spheres.append(ClippingSphere(tuple(spec.center), spec.radius, mask))
    return spheres


def prepare_volumes(scene, intensity, labelmap, spheres=None):
    """Run pipeline stages 1-3 for a scene; returns (aa_opacity, normals, pose)."""
    if intensity.dims != labelmap.dims:
        raise DimsMismatch("intensity and label dims differ")
    pose = Pose.from_spec(scene.pose)
    tf = OpacityTransferFunction(scene.transfer_function)
    if spheres is None:
        spheres = spheres_from_scene(scene, labelmap.max_label)
    ov = compute_opacity_volume(intensity, labelmap, tf, spheres, pose)
    if scene.render.aa_enabled:
        ov = antialias_opacity(ov, AaParams())
    normals = compute_normals(ov)
    return ov, normals, pose


def render(scene, intensity, labelmap, color_table, threads=1, spheres=None):
    """Full pipeline: stages 1-4 into a FrameSet.

    ``spheres`` overrides the scene's sphere list with prebuilt
    ClippingSphere instances (used by the session layer). Output is
    byte-identical for identical inputs regardless of ``threads``.
    """
    aa_opacity, normals, pose = prepare_volumes(scene, intensity, labelmap, spheres)
    color_table.validate_covers(labelmap)
    lut = color_table.lut(labelmap.max_label)
    cam = scene.camera
    w, h = cam.width, cam.height

    pxg, pyg = np.meshgrid(np.arange(w), np.arange(h))
    color = np.empty((h, w, 4), dtype=np.uint8)
    depth = np.empty((h, w), dtype=np.float32)
    seg = np.empty((h, w), dtype=np.uint16)

    def do_block(y0, y1):
        origins, dirs = generate_rays(cam, pxg[y0:y1].ravel(), pyg[y0:y1].ravel())
        rgba, d, lbl, _t, _hit = march_rays(
            origins, dirs, aa_opacity, normals, labelmap, lut, pose, scene.render
        )
        rows = y1 - y0
        color[y0:y1] = rgba.reshape(rows, w, 4)
        depth[y0:y1] = d.reshape(rows, w)
        seg[y0:y1] = lbl.reshape(rows, w)

    block = max(1, math.ceil(h / max(threads * 4, 1)))
    bounds = [(y, min(y + block, h)) for y in range(0, h, block)]
    if threads <= 1:
        for y0, y1 in bounds:
            do_block(y0, y1)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda b: do_block(*b), bounds))
    return FrameSet(color=color, depth=depth, first_seg=seg)
