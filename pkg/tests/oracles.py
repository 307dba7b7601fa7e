"""Independent brute-force oracles used by the test suite.

Everything here is written as plain scalar loops, deliberately ignoring
the vectorized pipeline, so agreement between the two is meaningful.
"""

import math

import numpy as np


def quat_matrix(q):
    w, x, y, z = (float(c) for c in q)
    return [
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ]


def world_position(index, spacing, origin, translation, rotation_q, scale):
    i, j, k = index
    lx = origin[0] + i * spacing[0]
    ly = origin[1] + j * spacing[1]
    lz = origin[2] + k * spacing[2]
    m = quat_matrix(rotation_q)
    wx = translation[0] + scale * (m[0][0] * lx + m[0][1] * ly + m[0][2] * lz)
    wy = translation[1] + scale * (m[1][0] * lx + m[1][1] * ly + m[1][2] * lz)
    wz = translation[2] + scale * (m[2][0] * lx + m[2][1] * ly + m[2][2] * lz)
    return wx, wy, wz


def eval_tf_scalar(points, x):
    """Piecewise-linear transfer function, clamped outside the domain."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if x <= xs[0]:
        seg = 0
    elif x >= xs[-1]:
        seg = len(xs) - 2
    else:
        seg = 0
        for i in range(len(xs) - 1):
            if xs[i] <= x < xs[i + 1]:
                seg = i
                break
    x0, x1 = xs[seg], xs[seg + 1]
    y0, y1 = ys[seg], ys[seg + 1]
    t = (x - x0) / (x1 - x0)
    t = min(max(t, 0.0), 1.0)
    return np.float32(y0 + t * (y1 - y0))


def brute_force_opacity(
    intensity_values,
    labels,
    tf_points,
    spheres,
    translation,
    rotation_q,
    scale,
    spacing=(1.0, 1.0, 1.0),
    origin=(0.0, 0.0, 0.0),
):
    """Per-voxel application of the clipping disjunction and the transfer
    function. ``spheres`` is a list of (center, radius, clippable_bits)."""
    nx, ny, nz = intensity_values.shape
    out = np.zeros((nx, ny, nz), dtype=np.float32)
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                wx, wy, wz = world_position(
                    (i, j, k), spacing, origin, translation, rotation_q, scale
                )
                label = int(labels[i, j, k])
                clipped = False
                for center, radius, bits in spheres:
                    d2 = (
                        (wx - center[0]) ** 2
                        + (wy - center[1]) ** 2
                        + (wz - center[2]) ** 2
                    )
                    if d2 < radius ** 2 and bits[label]:
                        clipped = True
                        break
                if not clipped:
                    out[i, j, k] = eval_tf_scalar(
                        tf_points, float(intensity_values[i, j, k])
                    )
    return out


def _clamp(v, lo, hi):
    return max(lo, min(v, hi))


def tent_blur_reference(values, threshold):
    """Naive 3x3x3 tent-weighted anti-aliasing with 6-neighbor contrast
    gating and index clamping at borders."""
    weights = [1.0, 2.0, 1.0]
    nx, ny, nz = values.shape
    out = np.empty_like(values)
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                center = values[i, j, k]
                lo = hi = float(center)
                for di, dj, dk in (
                    (-1, 0, 0), (1, 0, 0),
                    (0, -1, 0), (0, 1, 0),
                    (0, 0, -1), (0, 0, 1),
                ):
                    v = float(
                        values[
                            _clamp(i + di, 0, nx - 1),
                            _clamp(j + dj, 0, ny - 1),
                            _clamp(k + dk, 0, nz - 1),
                        ]
                    )
                    lo = min(lo, v)
                    hi = max(hi, v)
                if hi - lo > threshold:
                    acc = 0.0
                    for di in (-1, 0, 1):
                        for dj in (-1, 0, 1):
                            for dk in (-1, 0, 1):
                                w = weights[di + 1] * weights[dj + 1] * weights[dk + 1]
                                acc += w * float(
                                    values[
                                        _clamp(i + di, 0, nx - 1),
                                        _clamp(j + dj, 0, ny - 1),
                                        _clamp(k + dk, 0, nz - 1),
                                    ]
                                )
                    out[i, j, k] = np.float32(acc / 64.0)
                else:
                    out[i, j, k] = center
    return out


def sobel_normals_reference(values):
    """Naive per-voxel 3D Sobel (derivative (-1,0,1), smoothing (1,2,1)
    across the other axes, /32), negated and normalized."""
    weights = [1.0, 2.0, 1.0]
    nx, ny, nz = values.shape
    out = np.zeros((nx, ny, nz, 3), dtype=np.float32)
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                g = [0.0, 0.0, 0.0]
                for di in (-1, 0, 1):
                    for dj in (-1, 0, 1):
                        for dk in (-1, 0, 1):
                            v = float(
                                values[
                                    _clamp(i + di, 0, nx - 1),
                                    _clamp(j + dj, 0, ny - 1),
                                    _clamp(k + dk, 0, nz - 1),
                                ]
                            )
                            g[0] += di * weights[dj + 1] * weights[dk + 1] * v
                            g[1] += dj * weights[di + 1] * weights[dk + 1] * v
                            g[2] += dk * weights[di + 1] * weights[dj + 1] * v
                g = [c / 32.0 for c in g]
                mag = math.sqrt(g[0] ** 2 + g[1] ** 2 + g[2] ** 2)
                if mag > 1e-6:
                    out[i, j, k] = [-c / mag for c in g]
    return out


def pl_loglik(worths, rankings, index):
    """Plain Plackett-Luce log-likelihood of partial rankings."""
    ll = 0.0
    for ranking in rankings:
        ids = [index[item] for item in ranking]
        for j in range(len(ids) - 1):
            pool = sum(worths[i] for i in ids[j:])
            ll += math.log(worths[ids[j]] / pool)
    return ll


def pl_grid_search_3(rankings, items, smoothing, step=0.005):
    """Exhaustive smoothed-likelihood maximization on the 3-simplex.

    Maximizes loglik + smoothing * sum(log w_i), the simplex restriction
    of the Gamma-smoothed objective.
    """
    index = {item: i for i, item in enumerate(items)}
    best = None
    best_w = None
    n_steps = int(round(1.0 / step))
    for a_i in range(1, n_steps - 1):
        a = a_i * step
        for b_i in range(1, n_steps - a_i):
            b = b_i * step
            c = 1.0 - a - b
            if c < step / 2:
                continue
            w = [a, b, c]
            score = pl_loglik(w, rankings, index) + smoothing * sum(
                math.log(x) for x in w
            )
            if best is None or score > best:
                best = score
                best_w = w
    return best_w


def sample_ranking(rng, items, worths):
    """Draw a full ranking from a Plackett-Luce model."""
    remaining = list(items)
    weights = list(worths)
    out = []
    while remaining:
        total = sum(weights)
        r = rng.random() * total
        acc = 0.0
        for idx, w in enumerate(weights):
            acc += w
            if r <= acc:
                break
        out.append(remaining.pop(idx))
        weights.pop(idx)
    return tuple(out)
