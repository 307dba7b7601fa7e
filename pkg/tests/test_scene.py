import json

import pytest

from segcarve import (
    CameraSpec,
    PoseSpec,
    RenderSpec,
    Scene,
    ShadingSpec,
    SphereSpec,
    parse_scene,
    serialize_scene,
)
from segcarve.errors import SchemaError

MINIMAL = {
    "intensity": "a.nrrd",
    "labels": "b.nrrd",
    "color_table": "c.txt",
    "transfer_function": [[0.0, 0.0], [100.0, 1.0]],
    "pose": {"translation": [0, 0, 0], "rotation": [1, 0, 0, 0], "scale": 1.0},
    "spheres": [],
    "camera": {
        "position": [0, 0, 100],
        "look_at": [0, 0, 0],
        "up": [0, 1, 0],
        "vfov_deg": 45.0,
        "width": 64,
        "height": 64,
    },
}


def make_scene_doc(**overrides):
    doc = json.loads(json.dumps(MINIMAL))
    doc.update(overrides)
    return json.dumps(doc)


def test_minimal_scene_empty_spheres():
    scene = parse_scene(make_scene_doc())
    assert scene.spheres == ()
    assert scene.render.step_size_voxels == 0.5  # defaults applied


def test_negative_radius_rejected():
    doc = make_scene_doc(
        spheres=[{"center": [0, 0, 0], "radius": -1.0, "clipped_labels": [1]}]
    )
    with pytest.raises(ValueError):
        parse_scene(doc)


def test_non_unit_quaternion_rejected():
    doc = make_scene_doc(
        pose={"translation": [0, 0, 0], "rotation": [1, 1, 0, 0], "scale": 1.0}
    )
    with pytest.raises(ValueError):
        parse_scene(doc)


def test_missing_field_schema_error():
    doc = json.loads(make_scene_doc())
    del doc["camera"]
    with pytest.raises(SchemaError):
        parse_scene(json.dumps(doc))


def test_ill_typed_field_schema_error():
    with pytest.raises(SchemaError):
        parse_scene(make_scene_doc(intensity=5))


def test_three_sphere_roundtrip_structural_equality():
    scene = Scene(
        intensity="i.nrrd",
        labels="l.nrrd",
        color_table="c.txt",
        transfer_function=((0.0, 0.0), (37.125, 0.3), (210.0, 0.9375)),
        pose=PoseSpec(
            translation=(1.5, -2.25, 3.0),
            rotation=(0.7071067811865476, 0.0, 0.7071067811865476, 0.0),
            scale=1.75,
        ),
        spheres=(
            SphereSpec((10.1, 20.2, 30.3), 5.5, (1, 3)),
            SphereSpec((0.0, 0.0, 0.0), 12.0, ()),
            SphereSpec((-7.0, 8.0, 9.0), 0.125, (0, 2, 4)),
        ),
        camera=CameraSpec(
            position=(0.0, 0.0, 123.456),
            look_at=(1.0, 2.0, 3.0),
            up=(0.0, 1.0, 0.0),
            vfov_deg=33.3,
            width=320,
            height=200,
        ),
        render=RenderSpec(
            step_size_voxels=0.25,
            early_term_alpha=0.995,
            tau_hit=0.07,
            aa_enabled=False,
            shading=ShadingSpec(ka=0.1, kd=0.8, ks=0.2, shininess=16.0),
        ),
    )
    assert parse_scene(serialize_scene(scene)) == scene


def test_roundtrip_preserves_full_float_precision():
    scene = parse_scene(make_scene_doc())
    tricky = Scene(
        **{
            **scene.__dict__,
            "transfer_function": ((0.1, 0.2), (1.0 / 3.0, 0.123456789012345678)),
        }
    )
    assert parse_scene(serialize_scene(tricky)) == tricky
