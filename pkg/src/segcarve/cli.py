"""Command-line front door.

Subcommands:
  phantom   generate the synthetic shell dataset + default scene
  render    render a scene document to PNG/PFM/PGM buffers
  metrics   compare two rendered buffer sets
  pl-rank   fit Plackett-Luce worths from a rankings file
  regress   OLS of metric value on rank from a two-column file
  serve     run the stateless HTTP render service

Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
stderr.
"""

import argparse
import os
import sys

from . import io as vio
from .errors import SegcarveError
from .metrics import (
    global_rank,
    mae_first_segment,
    parse_rankings,
    plackett_luce_fit,
    rank_metric_regression,
    rmse_depth,
)
from .phantom import PhantomSpec, phantom_color_table, phantom_generate, phantom_scene
from .render import render
from .scene import parse_scene, serialize_scene


def _load_scene_volumes(scene, scene_dir):
    def resolve(path):
        return path if os.path.isabs(path) else os.path.join(scene_dir, path)

    with open(resolve(scene.intensity), "rb") as f:
        intensity = vio.parse_nrrd(f.read(), kind="intensity")
    with open(resolve(scene.labels), "rb") as f:
        labelmap = vio.parse_nrrd(f.read(), kind="labels")
    with open(resolve(scene.color_table), "r") as f:
        color_table = vio.parse_color_table(f.read())
    return intensity, labelmap, color_table


def cmd_phantom(args):
    spec = PhantomSpec(dims=(args.dims, args.dims, args.dims))
    intensity, labelmap = phantom_generate(spec)
    prefix = args.out
    with open(prefix + "_intensity.nrrd", "wb") as f:
        f.write(vio.write_nrrd(intensity))
    with open(prefix + "_labels.nrrd", "wb") as f:
        f.write(vio.write_nrrd(labelmap))
    with open(prefix + "_colors.txt", "w") as f:
        f.write(vio.write_color_table(phantom_color_table(spec)))
    base = os.path.basename(prefix)
    scene = phantom_scene(
        spec,
        intensity_path=base + "_intensity.nrrd",
        labels_path=base + "_labels.nrrd",
        color_table_path=base + "_colors.txt",
        width=args.size,
        height=args.size,
    )
    with open(prefix + "_scene.json", "w") as f:
        f.write(serialize_scene(scene) + "\n")
    return 0


def cmd_render(args):
    with open(args.scene, "r") as f:
        scene = parse_scene(f.read())
    scene_dir = os.path.dirname(os.path.abspath(args.scene))
    intensity, labelmap, color_table = _load_scene_volumes(scene, scene_dir)
    fs = render(scene, intensity, labelmap, color_table, threads=args.threads)
    vio.write_frameset(fs, args.out_prefix)
    return 0


def cmd_metrics(args):
    with open(args.ref, "rb") as f:
        ref_seg = vio.decode_pgm16(f.read())
    with open(args.test, "rb") as f:
        test_seg = vio.decode_pgm16(f.read())
    print("mae_first_segment=%.9g" % mae_first_segment(ref_seg, test_seg))
    if args.ref_depth and args.test_depth:
        with open(args.ref_depth, "rb") as f:
            ref_depth = vio.decode_pfm(f.read())
        with open(args.test_depth, "rb") as f:
            test_depth = vio.decode_pfm(f.read())
        print("rmse_depth=%.9g" % rmse_depth(ref_depth, test_depth))
    return 0


def cmd_pl_rank(args):
    with open(args.rankings, "r") as f:
        data = parse_rankings(f.read())
    fit = plackett_luce_fit(data, smoothing=args.smoothing)
    for item in global_rank(fit):
        print("%s %.9g" % (item, fit.worth(item)))
    return 0


def cmd_regress(args):
    ranks = []
    values = []
    with open(args.data, "r") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rank_tok, value_tok = line.split()[:2]
            ranks.append(float(rank_tok))
            values.append(float(value_tok))
    slope, intercept, r_squared = rank_metric_regression(ranks, values)
    print("slope=%.9g" % slope)
    print("intercept=%.9g" % intercept)
    print("r_squared=%.9g" % r_squared)
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    app = create_app(args.dataset_root, threads=args.threads)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="segcarve")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="generate the synthetic shell dataset")
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--dims", type=int, default=128)
    p.add_argument("--size", type=int, default=256, help="default scene image size")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("render", help="render a scene document")
    p.add_argument("--scene", required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--threads", type=int, default=int(os.environ.get("SEGCARVE_THREADS", "1")))
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("metrics", help="compare rendered buffers")
    p.add_argument("--ref", required=True, help="reference _seg.pgm")
    p.add_argument("--test", required=True, help="test _seg.pgm")
    p.add_argument("--ref-depth", help="reference _depth.pfm")
    p.add_argument("--test-depth", help="test _depth.pfm")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("pl-rank", help="fit Plackett-Luce worths")
    p.add_argument("rankings", help="one ranking per line, comma-separated, best first")
    p.add_argument("--smoothing", type=float, default=0.01)
    p.set_defaults(func=cmd_pl_rank)

    p = sub.add_parser("regress", help="OLS of value on rank")
    p.add_argument("data", help="lines of '<rank> <value>'")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("serve", help="run the stateless render service")
    p.add_argument("--dataset-root", default=os.environ.get("SEGCARVE_DATASET_ROOT", "."))
    p.add_argument("--host", default=os.environ.get("SEGCARVE_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(os.environ.get("SEGCARVE_PORT", "8000")))
    p.add_argument("--threads", type=int, default=int(os.environ.get("SEGCARVE_THREADS", "1")))
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except SegcarveError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
