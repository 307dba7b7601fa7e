import io as _io
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from segcarve import render
from segcarve.cli import main
from segcarve.io import decode_pfm, decode_pgm16, read_png
from segcarve.scene import parse_scene
from segcarve.service import MULTIPART_BOUNDARY, create_app


@pytest.fixture(scope="module")
def service(tmp_path_factory):
    root = tmp_path_factory.mktemp("datasets")
    prefix = str(root / "shells")
    assert main(["phantom", "--out", prefix, "--dims", "32", "--size", "24"]) == 0
    app = create_app(str(root))
    with open(prefix + "_scene.json") as f:
        scene_json = f.read()
    return TestClient(app), root, scene_json


def split_multipart(body):
    delim = b"--" + MULTIPART_BOUNDARY.encode()
    parts = {}
    for chunk in body.split(delim)[1:-1]:
        head, payload = chunk.split(b"\r\n\r\n", 1)
        name = head.split(b'name="')[1].split(b'"')[0].decode()
        parts[name] = payload[:-2]  # strip trailing CRLF
    return parts


class TestDatasets:
    def test_lists_registered_dataset(self, service):
        client, _root, _scene = service
        resp = client.get("/datasets")
        assert resp.status_code == 200
        docs = resp.json()
        assert len(docs) == 1
        doc = docs[0]
        assert doc["name"] == "shells"
        assert doc["dims"] == [32, 32, 32]
        names = {entry["id"]: entry["name"] for entry in doc["labels"]}
        assert names[1] == "outer_shell"
        assert 0 in names


class TestRenderEndpoint:
    def test_multipart_parts_decode_and_match_library(self, service):
        client, root, scene_json = service
        resp = client.post("/render", content=scene_json)
        assert resp.status_code == 200
        assert MULTIPART_BOUNDARY in resp.headers["content-type"]
        parts = split_multipart(resp.content)
        assert set(parts) == {"color", "depth", "seg"}

        from segcarve.io import parse_color_table, parse_nrrd

        scene = parse_scene(scene_json)
        with open(root / "shells_intensity.nrrd", "rb") as f:
            intensity = parse_nrrd(f.read(), kind="intensity")
        with open(root / "shells_labels.nrrd", "rb") as f:
            labelmap = parse_nrrd(f.read(), kind="labels")
        with open(root / "shells_colors.txt") as f:
            colors = parse_color_table(f.read())
        expected = render(scene, intensity, labelmap, colors)
        assert np.array_equal(read_png(_io.BytesIO(parts["color"])), expected.color)
        assert np.array_equal(decode_pfm(parts["depth"]), expected.depth)
        assert np.array_equal(decode_pgm16(parts["seg"]), expected.first_seg)

    def test_stateless_byte_identical_repeats(self, service):
        client, _root, scene_json = service
        a = client.post("/render", content=scene_json)
        # interleave an unrelated request to show no state leaks
        client.get("/datasets")
        b = client.post("/render", content=scene_json)
        assert a.content == b.content

    def test_single_part_selection(self, service):
        client, _root, scene_json = service
        full = split_multipart(client.post("/render", content=scene_json).content)
        for part, ctype in (
            ("color", "image/png"),
            ("depth", "image/x-portable-floatmap"),
            ("seg", "image/x-portable-graymap"),
        ):
            resp = client.post("/render?part=%s" % part, content=scene_json)
            assert resp.status_code == 200
            assert resp.headers["content-type"].startswith(ctype)
            assert resp.content == full[part]

    def test_unknown_part_is_400(self, service):
        client, _root, scene_json = service
        assert client.post("/render?part=nope", content=scene_json).status_code == 400

    def test_malformed_scene_is_400(self, service):
        client, _root, _scene = service
        assert client.post("/render", content="{not json").status_code == 400
        assert client.post("/render", content='{"a": 1}').status_code == 400

    def test_unknown_dataset_is_404(self, service):
        client, _root, scene_json = service
        doc = json.loads(scene_json)
        doc["intensity"] = "other_intensity.nrrd"
        assert client.post("/render", content=json.dumps(doc)).status_code == 404

    def test_path_traversal_is_404(self, service):
        client, _root, scene_json = service
        doc = json.loads(scene_json)
        doc["intensity"] = "../../../etc/passwd"
        assert client.post("/render", content=json.dumps(doc)).status_code == 404


class TestPickEndpoint:
    def test_center_pixel_hit(self, service):
        client, _root, scene_json = service
        resp = client.post(
            "/pick", content=json.dumps({"scene": json.loads(scene_json), "pixel": [12, 12]})
        )
        assert resp.status_code == 200
        doc = resp.json()
        # with a soft transfer function the first sample over the hit
        # threshold may fall in the nearest-neighbour region of any label,
        # including background (0); a hit just has to report one
        assert doc["label"] in (0, 1, 2, 3, 4)
        assert doc["name"] is not None
        assert len(doc["position"]) == 3
        assert isinstance(doc["active_mask_clippable"], bool)

    def test_corner_pixel_miss(self, service):
        client, _root, scene_json = service
        resp = client.post(
            "/pick", content=json.dumps({"scene": json.loads(scene_json), "pixel": [0, 0]})
        )
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["label"] is None and doc["position"] is None

    def test_pick_agrees_with_render_seg(self, service):
        client, _root, scene_json = service
        seg = decode_pgm16(client.post("/render?part=seg", content=scene_json).content)
        scene_doc = json.loads(scene_json)
        rng = np.random.default_rng(17)
        for _ in range(10):
            px, py = int(rng.integers(0, 24)), int(rng.integers(0, 24))
            doc = client.post(
                "/pick", content=json.dumps({"scene": scene_doc, "pixel": [px, py]})
            ).json()
            expected = int(seg[py, px])
            if expected == 65535:
                assert doc["label"] is None
            else:
                assert doc["label"] == expected

    def test_bad_pixel_is_400(self, service):
        client, _root, scene_json = service
        scene_doc = json.loads(scene_json)
        for pixel in ([1], [1, 2, 3], ["a", 0], [24, 0]):
            resp = client.post(
                "/pick", content=json.dumps({"scene": scene_doc, "pixel": pixel})
            )
            assert resp.status_code == 400

    def test_missing_fields_is_400(self, service):
        client, _root, _scene = service
        assert client.post("/pick", content="[]").status_code == 400
        assert client.post("/pick", content='{"scene": {}}').status_code == 400
