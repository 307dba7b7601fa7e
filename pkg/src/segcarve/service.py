"""Stateless HTTP render/pick service.

Datasets are preloaded at startup from a configured root directory; a
dataset named ``<name>`` consists of ``<name>_intensity.nrrd``,
``<name>_labels.nrrd`` and ``<name>_colors.txt``. Scene documents
reference those files by path relative to the root; anything that does
not resolve to a preloaded dataset file (including path traversal) is a
404.

Endpoints:
  GET  /datasets        registered names, dims, label ids and names
  POST /render          Scene JSON -> multipart buffers (parts "color",
                        "depth", "seg"); ?part=color|depth|seg for one
  POST /pick            {"scene": .., "pixel": [px, py]} -> pick result

Every response is a pure function of the request body, so identical
requests return byte-identical bodies in any order.
"""

import os
from dataclasses import dataclass

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import io as vio
from .errors import DimsMismatch, SchemaError, SegcarveError
from .render import generate_ray, render
from .scene import parse_scene
from .session import CarveSession, pick_segment
from .render import spheres_from_scene

MULTIPART_BOUNDARY = "segcarve-frame-boundary"


@dataclass(frozen=True)
class Dataset:
    name: str
    intensity: object
    labelmap: object
    color_table: object
    paths: frozenset  # root-relative paths this dataset answers to


def _scan_datasets(root):
    datasets = {}
    for entry in sorted(os.listdir(root)):
        if not entry.endswith("_intensity.nrrd"):
            continue
        name = entry[: -len("_intensity.nrrd")]
        files = {
            "intensity": name + "_intensity.nrrd",
            "labels": name + "_labels.nrrd",
            "color_table": name + "_colors.txt",
        }
        if not all(os.path.exists(os.path.join(root, p)) for p in files.values()):
            continue
        with open(os.path.join(root, files["intensity"]), "rb") as f:
            intensity = vio.parse_nrrd(f.read(), kind="intensity")
        with open(os.path.join(root, files["labels"]), "rb") as f:
            labelmap = vio.parse_nrrd(f.read(), kind="labels")
        with open(os.path.join(root, files["color_table"]), "r") as f:
            color_table = vio.parse_color_table(f.read())
        datasets[name] = Dataset(
            name=name,
            intensity=intensity,
            labelmap=labelmap,
            color_table=color_table,
            paths=frozenset(files.values()),
        )
    return datasets


def _multipart_body(parts):
    """multipart/mixed with fixed part names and a fixed boundary, so
    identical framesets serialize to identical bytes."""
    chunks = []
    for name, content_type, payload in parts:
        chunks.append(
            (
                "--%s\r\n"
                'Content-Disposition: form-data; name="%s"\r\n'
                "Content-Type: %s\r\n"
                "Content-Length: %d\r\n\r\n" % (MULTIPART_BOUNDARY, name, content_type, len(payload))
            ).encode("ascii")
        )
        chunks.append(payload)
        chunks.append(b"\r\n")
    chunks.append(("--%s--\r\n" % MULTIPART_BOUNDARY).encode("ascii"))
    return b"".join(chunks)


def create_app(dataset_root, threads=1):
    root = os.path.abspath(dataset_root)
    datasets = _scan_datasets(root)
    by_path = {}
    for ds in datasets.values():
        for rel in ds.paths:
            by_path[rel] = ds

    app = FastAPI(title="segcarve render service")

    def resolve_dataset(scene):
        """Map the scene's file references onto one preloaded dataset."""
        found = None
        for ref in (scene.intensity, scene.labels, scene.color_table):
            resolved = os.path.abspath(os.path.join(root, ref))
            if not resolved.startswith(root + os.sep):
                return None
            rel = os.path.relpath(resolved, root)
            ds = by_path.get(rel)
            if ds is None:
                return None
            if found is None:
                found = ds
            elif ds is not found:
                return None
        return found

    def scene_from_request(raw):
        try:
            return parse_scene(raw), None
        except (SchemaError, ValueError) as exc:
            return None, JSONResponse({"detail": str(exc)}, status_code=400)

    @app.get("/datasets")
    def list_datasets():
        out = []
        for name in sorted(datasets):
            ds = datasets[name]
            import numpy as np

            present = [int(l) for l in np.unique(ds.labelmap.labels)]
            out.append(
                {
                    "name": name,
                    "dims": list(ds.intensity.dims),
                    "spacing": list(ds.intensity.spacing),
                    "labels": [
                        {
                            "id": label,
                            "name": ds.color_table.entries.get(label, (None, "?"))[1],
                        }
                        for label in present
                    ],
                }
            )
        return out

    @app.post("/render")
    async def handle_render(request: Request, part: str | None = None):
        raw = (await request.body()).decode("utf-8", errors="replace")
        scene, err = scene_from_request(raw)
        if err is not None:
            return err
        ds = resolve_dataset(scene)
        if ds is None:
            return JSONResponse({"detail": "unknown dataset"}, status_code=404)
        try:
            fs = render(scene, ds.intensity, ds.labelmap, ds.color_table, threads=threads)
        except DimsMismatch as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        except SegcarveError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=500)
        encoded = {
            "color": ("image/png", vio.encode_png(fs.color)),
            "depth": ("image/x-portable-floatmap", vio.encode_pfm(fs.depth)),
            "seg": ("image/x-portable-graymap", vio.encode_pgm16(fs.first_seg)),
        }
        if part is not None:
            if part not in encoded:
                return JSONResponse({"detail": "unknown part %r" % part}, status_code=400)
            content_type, payload = encoded[part]
            return Response(content=payload, media_type=content_type)
        body = _multipart_body(
            [(name, ctype, payload) for name, (ctype, payload) in encoded.items()]
        )
        return Response(
            content=body,
            media_type="multipart/form-data; boundary=%s" % MULTIPART_BOUNDARY,
        )

    @app.post("/pick")
    async def handle_pick(request: Request):
        import json

        try:
            doc = json.loads(await request.body())
        except ValueError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=400)
        if not isinstance(doc, dict) or "scene" not in doc or "pixel" not in doc:
            return JSONResponse(
                {"detail": "body must contain 'scene' and 'pixel'"}, status_code=400
            )
        scene, err = scene_from_request(json.dumps(doc["scene"]))
        if err is not None:
            return err
        pixel = doc["pixel"]
        if (
            not isinstance(pixel, list)
            or len(pixel) != 2
            or not all(isinstance(x, int) for x in pixel)
        ):
            return JSONResponse({"detail": "pixel must be [px, py]"}, status_code=400)
        ds = resolve_dataset(scene)
        if ds is None:
            return JSONResponse({"detail": "unknown dataset"}, status_code=404)
        cam = scene.camera
        if not (0 <= pixel[0] < cam.width and 0 <= pixel[1] < cam.height):
            return JSONResponse({"detail": "pixel outside image"}, status_code=400)

        label_universe = ds.labelmap.max_label
        spheres = spheres_from_scene(scene, label_universe)
        if spheres:
            sess = CarveSession(
                fixed_spheres=tuple(spheres[:-1]),
                active_sphere=spheres[-1],
                label_universe=label_universe,
            )
        else:
            # Scenes without spheres still support picking; use an empty
            # neutral active sphere far outside any volume.
            from .core import ClipMask, ClippingSphere

            sess = CarveSession(
                fixed_spheres=(),
                active_sphere=ClippingSphere(
                    (1e12, 1e12, 1e12), 1.0, ClipMask.none_clippable(label_universe)
                ),
                label_universe=label_universe,
            )
        try:
            ray = generate_ray(cam, (pixel[0], pixel[1]))
            result = pick_segment(
                sess, ray, scene, ds.intensity, ds.labelmap, ds.color_table
            )
        except DimsMismatch as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        except SegcarveError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=500)
        if not result.hit:
            return {"label": None, "name": None, "position": None,
                    "active_mask_clippable": None}
        label = result.label
        clippable = (
            bool(sess.active_sphere.mask.bits[label])
            if label < len(sess.active_sphere.mask.bits)
            else False
        )
        return {
            "label": label,
            "name": ds.color_table.entries.get(label, (None, None))[1],
            "position": list(result.position),
            "active_mask_clippable": clippable,
        }

    return app
