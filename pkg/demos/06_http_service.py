"""
Talking to the stateless render service
=======================================

Mounts the HTTP app in-process (no sockets needed) and exercises all three
endpoints: dataset discovery, a render returning multipart image buffers,
and a pick. Identical requests always return byte-identical responses —
the service holds no session state.

Run demos/01_generate_phantom.py first. To serve over a real socket:

    segcarve serve --dataset-root demos/output --port 8000
"""

import json
import os

from fastapi.testclient import TestClient

from segcarve.service import MULTIPART_BOUNDARY, create_app

OUT = os.path.join(os.path.dirname(__file__), "output")

client = TestClient(create_app(OUT))

print("GET /datasets")
for ds in client.get("/datasets").json():
    print("  %s %s labels=%s"
          % (ds["name"], ds["dims"], [l["name"] for l in ds["labels"]]))

with open(os.path.join(OUT, "shells_scene.json")) as f:
    scene_json = f.read()

print("\nPOST /render")
resp = client.post("/render", content=scene_json)
parts = resp.content.split(b"--" + MULTIPART_BOUNDARY.encode())
print("  %d bytes, %d multipart parts (color PNG, depth PFM, segment PGM)"
      % (len(resp.content), len(parts) - 2))

again = client.post("/render", content=scene_json)
print("  repeat request byte-identical:", resp.content == again.content)

print("\nPOST /pick at the image center")
doc = json.loads(scene_json)
pick = client.post(
    "/pick",
    content=json.dumps({"scene": doc, "pixel": [doc["camera"]["width"] // 2,
                                                doc["camera"]["height"] // 2]}),
).json()
print("  label=%s name=%s position=%s" % (pick["label"], pick["name"],
                                          pick["position"]))
