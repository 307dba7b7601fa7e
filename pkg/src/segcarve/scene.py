"""Scene documents: the serializable unit of rendering.

A scene bundles volume file references, the opacity transfer function,
the volume pose, the ordered clipping-sphere list, the camera, and the
render parameters. The JSON layout (field names normative):

{
  "intensity": path, "labels": path, "color_table": path,
  "transfer_function": [[intensity, opacity], ...],
  "pose": {"translation": [x,y,z], "rotation": [w,x,y,z], "scale": s},
  "spheres": [{"center": [x,y,z], "radius": r, "clipped_labels": [id, ...]}],
  "camera": {"position": [..], "look_at": [..], "up": [..],
             "vfov_deg": f, "width": W, "height": H},
  "render": {"step_size_voxels": 0.5, "early_term_alpha": 0.99,
             "tau_hit": 0.05, "aa_enabled": true,
             "shading": {"ka": 0.2, "kd": 0.7, "ks": 0.3, "shininess": 32}}
}

Sphere centers and radii are in world millimeters. "clipped_labels"
lists the labels the sphere DOES clip. parse/serialize round-trip is
structurally exact (floats serialized at full precision).
"""

import json
import math
from dataclasses import dataclass, field

from .errors import SchemaError

QUAT_NORM_TOL = 1e-6


@dataclass(frozen=True)
class PoseSpec:
    translation: tuple = (0.0, 0.0, 0.0)
    rotation: tuple = (1.0, 0.0, 0.0, 0.0)  # unit quaternion, (w, x, y, z)
    scale: float = 1.0

    def __post_init__(self):
        norm = math.sqrt(sum(c * c for c in self.rotation))
        if abs(norm - 1.0) > QUAT_NORM_TOL:
            raise ValueError("rotation quaternion not normalized (|q| = %r)" % norm)
        if self.scale <= 0:
            raise ValueError("pose scale must be > 0")


@dataclass(frozen=True)
class CameraSpec:
    position: tuple
    look_at: tuple
    up: tuple
    vfov_deg: float
    width: int
    height: int

    def __post_init__(self):
        if self.position == self.look_at:
            raise ValueError("camera position equals look_at")
        if not 0.0 < self.vfov_deg < 180.0:
            raise ValueError("vfov_deg must be in (0, 180)")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")


@dataclass(frozen=True)
class ShadingSpec:
    ka: float = 0.2
    kd: float = 0.7
    ks: float = 0.3
    shininess: float = 32.0
    background: tuple = (0.0, 0.0, 0.0, 1.0)  # RGBA in [0,1]

    def __post_init__(self):
        for coeff in (self.ka, self.kd, self.ks):
            if not 0.0 <= coeff <= 1.0:
                raise ValueError("shading coefficients must be in [0,1]")
        if self.shininess < 1.0:
            raise ValueError("shininess must be >= 1")


@dataclass(frozen=True)
class RenderSpec:
    step_size_voxels: float = 0.5
    early_term_alpha: float = 0.99
    tau_hit: float = 0.05
    aa_enabled: bool = True
    shading: ShadingSpec = field(default_factory=ShadingSpec)

    def __post_init__(self):
        if self.step_size_voxels <= 0:
            raise ValueError("step_size_voxels must be > 0")
        if not 0.0 < self.early_term_alpha <= 1.0:
            raise ValueError("early_term_alpha must be in (0, 1]")
        if not 0.0 < self.tau_hit <= 1.0:
            raise ValueError("tau_hit must be in (0, 1]")


@dataclass(frozen=True)
class SphereSpec:
    center: tuple
    radius: float
    clipped_labels: tuple

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("sphere radius must be > 0")
        if any(l < 0 for l in self.clipped_labels):
            raise ValueError("negative label id in clipped_labels")


@dataclass(frozen=True)
class Scene:
    intensity: str
    labels: str
    color_table: str
    transfer_function: tuple  # ((intensity, opacity), ...)
    pose: PoseSpec
    spheres: tuple  # (SphereSpec, ...)
    camera: CameraSpec
    render: RenderSpec


def _need(mapping, key, types, where):
    if not isinstance(mapping, dict):
        raise SchemaError("%s must be an object" % where)
    if key not in mapping:
        raise SchemaError("missing field %r in %s" % (key, where))
    value = mapping[key]
    if not isinstance(value, types):
        raise SchemaError("field %r in %s has wrong type" % (key, where))
    return value


def _vec(mapping, key, n, where):
    value = _need(mapping, key, list, where)
    if len(value) != n or not all(isinstance(x, (int, float)) for x in value):
        raise SchemaError("field %r in %s must be %d numbers" % (key, where, n))
    return tuple(float(x) for x in value)


def parse_scene(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("invalid JSON: %s" % exc)
    if not isinstance(doc, dict):
        raise SchemaError("scene document must be a JSON object")

    intensity = _need(doc, "intensity", str, "scene")
    labels = _need(doc, "labels", str, "scene")
    color_table = _need(doc, "color_table", str, "scene")

    tf_raw = _need(doc, "transfer_function", list, "scene")
    tf = []
    for pair in tf_raw:
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) for x in pair)
        ):
            raise SchemaError("transfer_function entries must be [intensity, opacity]")
        tf.append((float(pair[0]), float(pair[1])))

    pose_doc = _need(doc, "pose", dict, "scene")
    pose = PoseSpec(
        translation=_vec(pose_doc, "translation", 3, "pose"),
        rotation=_vec(pose_doc, "rotation", 4, "pose"),
        scale=float(_need(pose_doc, "scale", (int, float), "pose")),
    )

    spheres = []
    for i, sphere_doc in enumerate(_need(doc, "spheres", list, "scene")):
        where = "spheres[%d]" % i
        ids = _need(sphere_doc, "clipped_labels", list, where)
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in ids):
            raise SchemaError("clipped_labels must be integers in %s" % where)
        spheres.append(
            SphereSpec(
                center=_vec(sphere_doc, "center", 3, where),
                radius=float(_need(sphere_doc, "radius", (int, float), where)),
                clipped_labels=tuple(ids),
            )
        )

    cam_doc = _need(doc, "camera", dict, "scene")
    camera = CameraSpec(
        position=_vec(cam_doc, "position", 3, "camera"),
        look_at=_vec(cam_doc, "look_at", 3, "camera"),
        up=_vec(cam_doc, "up", 3, "camera"),
        vfov_deg=float(_need(cam_doc, "vfov_deg", (int, float), "camera")),
        width=int(_need(cam_doc, "width", int, "camera")),
        height=int(_need(cam_doc, "height", int, "camera")),
    )

    render_doc = doc.get("render", {})
    if not isinstance(render_doc, dict):
        raise SchemaError("render must be an object")
    shading_doc = render_doc.get("shading", {})
    if not isinstance(shading_doc, dict):
        raise SchemaError("render.shading must be an object")
    shading_kwargs = {}
    for key in ("ka", "kd", "ks", "shininess"):
        if key in shading_doc:
            shading_kwargs[key] = float(shading_doc[key])
    if "background" in shading_doc:
        shading_kwargs["background"] = _vec(shading_doc, "background", 4, "shading")
    render_kwargs = {"shading": ShadingSpec(**shading_kwargs)}
    for key in ("step_size_voxels", "early_term_alpha", "tau_hit"):
        if key in render_doc:
            render_kwargs[key] = float(render_doc[key])
    if "aa_enabled" in render_doc:
        if not isinstance(render_doc["aa_enabled"], bool):
            raise SchemaError("aa_enabled must be a boolean")
        render_kwargs["aa_enabled"] = render_doc["aa_enabled"]

    return Scene(
        intensity=intensity,
        labels=labels,
        color_table=color_table,
        transfer_function=tuple(tf),
        pose=pose,
        spheres=tuple(spheres),
        camera=camera,
        render=RenderSpec(**render_kwargs),
    )


def serialize_scene(scene):
    doc = {
        "intensity": scene.intensity,
        "labels": scene.labels,
        "color_table": scene.color_table,
        "transfer_function": [list(p) for p in scene.transfer_function],
        "pose": {
            "translation": list(scene.pose.translation),
            "rotation": list(scene.pose.rotation),
            "scale": scene.pose.scale,
        },
        "spheres": [
            {
                "center": list(s.center),
                "radius": s.radius,
                "clipped_labels": list(s.clipped_labels),
            }
            for s in scene.spheres
        ],
        "camera": {
            "position": list(scene.camera.position),
            "look_at": list(scene.camera.look_at),
            "up": list(scene.camera.up),
            "vfov_deg": scene.camera.vfov_deg,
            "width": scene.camera.width,
            "height": scene.camera.height,
        },
        "render": {
            "step_size_voxels": scene.render.step_size_voxels,
            "early_term_alpha": scene.render.early_term_alpha,
            "tau_hit": scene.render.tau_hit,
            "aa_enabled": scene.render.aa_enabled,
            "shading": {
                "ka": scene.render.shading.ka,
                "kd": scene.render.shading.kd,
                "ks": scene.render.shading.ks,
                "shininess": scene.render.shading.shininess,
                "background": list(scene.render.shading.background),
            },
        },
    }
    # json emits repr-exact floats, so parse(serialize(s)) == s.
    return json.dumps(doc, indent=2)
