"""
An interactive carving session, scripted
========================================

Walks the session state machine through a typical editing flow: place the
active sphere, pick a segment under a pixel, protect it by toggling its
mask bit, fix the sphere (the replacement spawns at 75% radius with a
copied mask), carve deeper, then undo. Fixed spheres never change after
the fact; every step is a new immutable session value.

Run demos/01_generate_phantom.py first.
"""

import os

from segcarve import (
    fix_active_sphere,
    new_session,
    pick_pixel,
    remove_last_sphere,
    set_active_sphere,
    snapshot,
    toggle_label,
)
from segcarve.io import parse_color_table, parse_nrrd
from segcarve.scene import parse_scene, serialize_scene

OUT = os.path.join(os.path.dirname(__file__), "output")
prefix = os.path.join(OUT, "shells")

with open(prefix + "_scene.json") as f:
    scene = parse_scene(f.read())
with open(prefix + "_intensity.nrrd", "rb") as f:
    intensity = parse_nrrd(f.read(), kind="intensity")
with open(prefix + "_labels.nrrd", "rb") as f:
    labelmap = parse_nrrd(f.read(), kind="labels")
with open(prefix + "_colors.txt") as f:
    colors = parse_color_table(f.read())


def show(tag, sess):
    print(
        "%-22s fixed=%d  active r=%.1f  clippable=%s"
        % (tag, len(sess.fixed_spheres), sess.active_sphere.radius,
           sess.active_sphere.mask.labels())
    )


center = scene.camera.look_at
sess = new_session(labelmap.max_label)
sess = set_active_sphere(sess, (center[0], center[1], center[2] + 12.0), 10.0)
show("start", sess)

mid = (scene.camera.width // 2, scene.camera.height // 2)
picked = pick_pixel(sess, mid, scene, intensity, labelmap, colors)
if picked.hit:
    _rgb, name = colors.entries.get(picked.label, (None, "?"))
    print("picked pixel %s -> label %d (%s) at %s"
          % (mid, picked.label, name, tuple(round(c, 1) for c in picked.position)))
    # protect the picked segment from this sphere
    sess = toggle_label(sess, picked.label)
    show("after protect toggle", sess)

sess = fix_active_sphere(sess)
show("after fix", sess)

sess = set_active_sphere(sess, (center[0], center[1], center[2] + 6.0), 6.0)
sess = fix_active_sphere(sess)
show("after second fix", sess)

sess = remove_last_sphere(sess)
show("after undo", sess)

# Any session state exports to a plain scene document the CLI can replay.
exported = snapshot(sess, scene)
with open(os.path.join(OUT, "session_scene.json"), "w") as f:
    f.write(serialize_scene(exported) + "\n")
print("exported session to output/session_scene.json"
      " (render it with: segcarve render --scene ... )")
