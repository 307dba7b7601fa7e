"""
Generating the synthetic nested-shell dataset
=============================================

Builds the concentric-shell phantom (four labelled shells around a hollow
core), writes the volume pair plus its colour table to disk, and prints a
quick census of the labels. Every other demo starts from these files.
"""

import os

import numpy as np

from segcarve import (
    PhantomSpec,
    phantom_color_table,
    phantom_generate,
    phantom_scene,
)
from segcarve.io import write_color_table, write_nrrd
from segcarve.scene import serialize_scene

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

# A modest 64-cube keeps the demos quick; the defaults are 128-cube.
spec = PhantomSpec(dims=(64, 64, 64))
intensity, labelmap = phantom_generate(spec)
colors = phantom_color_table(spec)

print("volume dims:", intensity.dims, "spacing:", intensity.spacing)
for label in np.unique(labelmap.labels):
    count = int(np.sum(labelmap.labels == label))
    _rgb, name = colors.entries.get(int(label), (None, "background"))
    print("  label %d (%s): %d voxels" % (label, name, count))

prefix = os.path.join(OUT, "shells")
with open(prefix + "_intensity.nrrd", "wb") as f:
    f.write(write_nrrd(intensity))
with open(prefix + "_labels.nrrd", "wb") as f:
    f.write(write_nrrd(labelmap))
with open(prefix + "_colors.txt", "w") as f:
    f.write(write_color_table(colors))

scene = phantom_scene(
    spec,
    intensity_path="shells_intensity.nrrd",
    labels_path="shells_labels.nrrd",
    color_table_path="shells_colors.txt",
    width=128,
    height=128,
)
with open(prefix + "_scene.json", "w") as f:
    f.write(serialize_scene(scene) + "\n")

print("wrote", prefix + "_{intensity.nrrd,labels.nrrd,colors.txt,scene.json}")
