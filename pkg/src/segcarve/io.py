"""Volume and buffer I/O.

Handles the external data formats used by the pipeline:

* a restricted NRRD subset (raw encoding, attached data, little-endian,
  3D, axis-aligned spacing) for intensity volumes and label maps,
* 3D Slicer style color-table text files,
* output buffers: 8-bit RGBA PNG (color), binary PFM (depth),
  16-bit binary PGM (first-hit segment).

All readers/writers round-trip bit-exactly for supported inputs.
"""

from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import (
    BadMagic,
    DimsMismatch,
    DuplicateLabel,
    ParseError,
    TruncatedData,
    UnsupportedField,
)

MISS_LABEL = 65535  # ray-miss sentinel, never a valid segment label

_NRRD_TYPES = {
    "uchar": np.uint8,
    "short": np.int16,
    "ushort": np.uint16,
    "float": np.float32,
}
_NRRD_TYPE_NAMES = {np.dtype(v): k for k, v in _NRRD_TYPES.items()}


@dataclass(frozen=True)
class IntensityVolume:
    """Scalar 3D grid. ``values`` is float32 with shape (nx, ny, nz),
    x-fastest in memory order when serialized."""
    dims: tuple
    spacing: tuple
    origin: tuple
    values: np.ndarray

    def __post_init__(self):
        nx, ny, nz = self.dims
        if min(self.dims) < 1:
            raise DimsMismatch("dims components must be >= 1")
        if min(self.spacing) <= 0:
            raise DimsMismatch("spacing components must be > 0")
        if self.values.shape != (nx, ny, nz):
            raise DimsMismatch(
                "value shape %s does not match dims %s"
                % (self.values.shape, self.dims)
            )
        self.values.setflags(write=False)


@dataclass(frozen=True)
class LabelMap:
    """Per-voxel segment labels, co-registered with an IntensityVolume.
    Label 0 is background; 65535 is reserved as the ray-miss sentinel."""
    dims: tuple
    spacing: tuple
    origin: tuple
    labels: np.ndarray

    def __post_init__(self):
        nx, ny, nz = self.dims
        if self.labels.shape != (nx, ny, nz):
            raise DimsMismatch(
                "label shape %s does not match dims %s"
                % (self.labels.shape, self.dims)
            )
        if self.labels.dtype != np.uint16:
            raise DimsMismatch("labels must be uint16")
        if self.labels.max(initial=0) >= MISS_LABEL:
            raise DimsMismatch("label %d collides with the miss sentinel" % MISS_LABEL)
        self.labels.setflags(write=False)

    @property
    def max_label(self):
        return int(self.labels.max(initial=0))


@dataclass(frozen=True)
class ColorTable:
    """Mapping label id -> ((r, g, b) in [0,1], display name)."""
    entries: dict

    def color(self, label):
        return self.entries[label][0]

    def name(self, label):
        return self.entries[label][1]

    def lut(self, max_label):
        """Dense (max_label+1, 3) float32 lookup table; missing ids are black."""
        table = np.zeros((max_label + 1, 3), dtype=np.float32)
        for label, (rgb, _name) in self.entries.items():
            if label <= max_label:
                table[label] = rgb
        return table

    def validate_covers(self, labelmap):
        present = np.unique(labelmap.labels)
        missing = [int(l) for l in present if int(l) not in self.entries]
        if missing:
            raise ParseError("color table missing labels %s" % missing)


@dataclass(frozen=True)
class FrameSet:
    """Rendered output: color (H, W, 4) uint8, depth (H, W) float32 in
    [0, 1], first-hit segment (H, W) uint16 with 65535 = miss."""
    color: np.ndarray
    depth: np.ndarray
    first_seg: np.ndarray

    def __post_init__(self):
        h, w = self.depth.shape
        if self.color.shape != (h, w, 4) or self.first_seg.shape != (h, w):
            raise DimsMismatch("frame buffers must share dimensions")


# ---------------------------------------------------------------------------
# NRRD subset
# ---------------------------------------------------------------------------

def _parse_vector(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise UnsupportedField("malformed vector %r" % text)
    return [float(x) for x in text[1:-1].split(",")]


def parse_nrrd(data, kind="intensity"):
    """Parse an attached-data raw NRRD into a volume.

    ``kind`` selects the returned type: "intensity" -> IntensityVolume
    (values exposed as float32), "labels" -> LabelMap (requires an
    unsigned integer payload).
    """
    if not (data[:7] == b"NRRD000" and data[7:8].isdigit()):
        raise BadMagic("input does not start with NRRD magic")
    end = data.find(b"\n\n")
    if end < 0:
        raise TruncatedData("missing blank line terminating the header")
    header_text = data[:end].decode("ascii", errors="replace")
    payload = data[end + 2:]

    fields = {}
    for line in header_text.splitlines()[1:]:
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise UnsupportedField("malformed header line %r" % line)
        key, _, value = line.partition(":")
        fields[key.strip().lower()] = value.strip()

    if fields.get("dimension") != "3":
        raise UnsupportedField("only dimension: 3 supported")
    if fields.get("encoding", "raw") != "raw":
        raise UnsupportedField("only raw encoding supported")
    endian = fields.get("endian", "little")
    if endian != "little":
        raise UnsupportedField("only little-endian supported")
    type_name = fields.get("type")
    if type_name not in _NRRD_TYPES:
        raise UnsupportedField("unsupported type %r" % type_name)
    if "sizes" not in fields:
        raise UnsupportedField("missing sizes field")
    dims = tuple(int(x) for x in fields["sizes"].split())
    if len(dims) != 3 or min(dims) < 1:
        raise UnsupportedField("bad sizes %r" % fields["sizes"])

    spacing = (1.0, 1.0, 1.0)
    if "space directions" in fields:
        vecs = [v for v in fields["space directions"].split(") ") if v.strip()]
        vecs = [_parse_vector(v if v.endswith(")") else v + ")") for v in vecs]
        if len(vecs) != 3:
            raise UnsupportedField("need 3 space direction vectors")
        for axis, vec in enumerate(vecs):
            for other in range(3):
                if other != axis and vec[other] != 0.0:
                    raise UnsupportedField("non-diagonal space directions")
            if vec[axis] <= 0:
                raise UnsupportedField("non-positive space direction")
        spacing = tuple(vec[i] for i, vec in enumerate(vecs))
    elif "spacings" in fields:
        spacing = tuple(float(x) for x in fields["spacings"].split())
        if len(spacing) != 3 or min(spacing) <= 0:
            raise UnsupportedField("bad spacings %r" % fields["spacings"])

    origin = (0.0, 0.0, 0.0)
    if "space origin" in fields:
        vec = _parse_vector(fields["space origin"])
        if len(vec) != 3:
            raise UnsupportedField("bad space origin")
        origin = tuple(vec)

    dtype = np.dtype(_NRRD_TYPES[type_name]).newbyteorder("<")
    count = dims[0] * dims[1] * dims[2]
    need = count * dtype.itemsize
    if len(payload) < need:
        raise TruncatedData(
            "payload has %d bytes, need %d" % (len(payload), need)
        )
    raw = np.frombuffer(payload[:need], dtype=dtype)
    # NRRD raw data is x-fastest; store as [i, j, k] indexable array.
    grid = raw.reshape(dims, order="F")

    if kind == "labels":
        if type_name == "float":
            raise UnsupportedField("label maps require an integer type")
        labels = np.ascontiguousarray(grid.astype(np.uint16))
        return LabelMap(dims, spacing, origin, labels)
    values = np.ascontiguousarray(grid.astype(np.float32))
    return IntensityVolume(dims, spacing, origin, values)


def write_nrrd(volume):
    """Serialize a volume back into the supported NRRD subset."""
    if isinstance(volume, LabelMap):
        grid = volume.labels
        type_name = "ushort"
        store = np.uint16
    else:
        grid = volume.values
        type_name = _NRRD_TYPE_NAMES[np.dtype(np.float32)]
        store = np.float32
    sx, sy, sz = volume.spacing
    ox, oy, oz = volume.origin
    header = (
        "NRRD0004\n"
        "type: %s\n"
        "dimension: 3\n"
        "sizes: %d %d %d\n"
        "endian: little\n"
        "encoding: raw\n"
        "space directions: (%r,0,0) (0,%r,0) (0,0,%r)\n"
        "space origin: (%r,%r,%r)\n"
        "\n"
    ) % ((type_name,) + volume.dims + (sx, sy, sz, ox, oy, oz))
    payload = np.asfortranarray(grid.astype(store)).tobytes(order="F")
    return header.encode("ascii") + payload


# ---------------------------------------------------------------------------
# Color tables (3D Slicer text layout: "id name R G B A")
# ---------------------------------------------------------------------------

def parse_color_table(text):
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ParseError("expected 'id name R G B A'", line=lineno)
        try:
            label = int(parts[0])
            channels = [int(x) for x in parts[2:6]]
        except ValueError:
            raise ParseError("non-integer field in %r" % line, line=lineno)
        if label < 0:
            raise ParseError("negative label id", line=lineno)
        if any(c < 0 or c > 255 for c in channels):
            raise ParseError("channel out of range 0-255", line=lineno)
        if label in entries:
            raise DuplicateLabel("label %d appears more than once" % label)
        rgb = tuple(c / 255.0 for c in channels[:3])  # alpha parsed, unused
        entries[label] = (rgb, parts[1])
    return ColorTable(entries)


def write_color_table(table):
    lines = ["# id name R G B A"]
    for label in sorted(table.entries):
        rgb, name = table.entries[label]
        r, g, b = (int(round(c * 255)) for c in rgb)
        lines.append("%d %s %d %d %d 255" % (label, name, r, g, b))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Frame buffers: PNG / PFM / PGM
# ---------------------------------------------------------------------------

def write_png(color, path):
    Image.fromarray(color, mode="RGBA").save(path, format="PNG")


def read_png(path):
    with Image.open(path) as img:
        return np.asarray(img.convert("RGBA"))


def encode_png(color):
    import io as _io

    buf = _io.BytesIO()
    Image.fromarray(color, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def encode_pfm(depth):
    """Grayscale PFM, little-endian (negative scale), rows bottom-to-top."""
    h, w = depth.shape
    header = ("Pf\n%d %d\n-1.0\n" % (w, h)).encode("ascii")
    return header + np.flipud(depth.astype("<f4")).tobytes()


def decode_pfm(data):
    parts = data.split(b"\n", 3)
    if parts[0] != b"Pf":
        raise ParseError("not a grayscale PFM")
    w, h = (int(x) for x in parts[1].split())
    scale = float(parts[2])
    if scale >= 0:
        raise ParseError("only little-endian PFM supported")
    raster = np.frombuffer(parts[3][: w * h * 4], dtype="<f4")
    if raster.size != w * h:
        raise TruncatedData("PFM raster too short")
    return np.flipud(raster.reshape(h, w)).copy()


def encode_pgm16(seg):
    """Binary PGM with maxval 65535; samples are big-endian per the format."""
    h, w = seg.shape
    header = ("P5\n%d %d\n65535\n" % (w, h)).encode("ascii")
    return header + seg.astype(">u2").tobytes()


def decode_pgm16(data):
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5" or parts[2] != b"65535":
        raise ParseError("not a 16-bit binary PGM")
    w, h = (int(x) for x in parts[1].split())
    raster = np.frombuffer(parts[3][: w * h * 2], dtype=">u2")
    if raster.size != w * h:
        raise TruncatedData("PGM raster too short")
    return raster.reshape(h, w).astype(np.uint16)


def write_frameset(fs, prefix):
    """Write <prefix>.png, <prefix>_depth.pfm and <prefix>_seg.pgm."""
    prefix = str(prefix)
    write_png(fs.color, prefix + ".png")
    with open(prefix + "_depth.pfm", "wb") as f:
        f.write(encode_pfm(fs.depth))
    with open(prefix + "_seg.pgm", "wb") as f:
        f.write(encode_pgm16(fs.first_seg))


def read_frameset(prefix):
    prefix = str(prefix)
    color = read_png(prefix + ".png")
    with open(prefix + "_depth.pfm", "rb") as f:
        depth = decode_pfm(f.read()).astype(np.float32)
    with open(prefix + "_seg.pgm", "rb") as f:
        seg = decode_pgm16(f.read())
    return FrameSet(color=color, depth=depth, first_seg=seg)
