"""Command line front end.

Exit status: 0 success, 1 validation failure or obstruction-style negative
finding reported as failure, 2 parse or usage errors.  File emission goes
through a temporary file and an atomic rename.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import formats
from .bornmap import validate_born_map
from .core import euler_characteristic, is_normal, validate_polyhedron
from .errors import ParseError, SpineForgeError
from .gallery import build_base_example, build_surgered_example, klein_plan
from .homology import z2_homology
from .obstruction import build_graph, graph_to_dot, maximal_graph, s3_obstruction
from .render import render_svg
from .surgery import attach_surface, normalize_into_disk


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_spineforge_")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _load_polyhedron(path):
    with open(path) as handle:
        return formats.parse_spoly(handle.read())


def _load_born(spoly_path, arr_path):
    poly = _load_polyhedron(spoly_path)
    with open(arr_path) as handle:
        arr, data = formats.parse_arr(handle.read())
    return formats.assemble_born_map(poly, arr, data)


def _load_plan(plan_path, base_dir=None):
    with open(plan_path) as handle:
        plan, (spoly_name, arr_name) = formats.parse_plan(handle.read())
    root = base_dir or os.path.dirname(os.path.abspath(plan_path))
    base = _load_born(os.path.join(root, spoly_name),
                      os.path.join(root, arr_name))
    from dataclasses import replace
    return replace(plan, base=base)


def cmd_validate(args):
    poly = _load_polyhedron(args.spoly)
    report = validate_polyhedron(poly)
    print(f"polyhedron: {report}")
    ok = report.ok
    if ok:
        print(f"normal: {is_normal(poly)}")
    if args.arr:
        if not ok:
            return 1
        born = _load_born(args.spoly, args.arr)
        born_report = validate_born_map(born)
        print(f"born map: {born_report}")
        ok = ok and born_report.ok
    return 0 if ok else 1


def cmd_euler(args):
    poly = _load_polyhedron(args.spoly)
    report = validate_polyhedron(poly)
    if not report.ok:
        print(report)
        return 1
    print(euler_characteristic(poly))
    return 0


def cmd_homology(args):
    poly = _load_polyhedron(args.spoly)
    report = validate_polyhedron(poly)
    if not report.ok:
        print(report)
        return 1
    b0, b1, b2 = z2_homology(poly)
    print(f"b0={b0} b1={b1} b2={b2}")
    return 0


def cmd_surgery(args):
    plan = _load_plan(args.plan)
    result = attach_surface(plan)
    spoly_path = _write_atomic(args.output + ".spoly",
                               formats.emit_spoly(result.polyhedron))
    arr_path = _write_atomic(args.output + ".arr", formats.emit_arr(result))
    print(f"attached {plan.patch.id} along {len(plan.circles)} circles")
    print(f"characteristic: {euler_characteristic(result.polyhedron)}")
    print(f"wrote {spoly_path} {arr_path}")
    return 0


def cmd_normalize(args):
    plan = _load_plan(args.plan)
    result = normalize_into_disk(plan)
    spoly_path = _write_atomic(args.output + ".spoly",
                               formats.emit_spoly(result.polyhedron))
    arr_path = _write_atomic(args.output + ".arr", formats.emit_arr(result))
    print(f"relocated {len(plan.circles)} circle images")
    print(f"wrote {spoly_path} {arr_path}")
    return 0


def cmd_obstruct(args):
    poly = _load_polyhedron(args.spoly)
    report = validate_polyhedron(poly)
    if not report.ok:
        print(report)
        return 1
    verdict, witness, truncated = s3_obstruction(poly, args.bound)
    if truncated:
        print(f"search truncated at bound {args.bound}")
    if verdict == "obstructed":
        sheets = ",".join(sorted(witness.sheets))
        kind = "nonorientable"
        print(f"obstructed: closed {kind} subsurface [{sheets}] "
              f"chi={witness.euler}")
        print("no embedding into the 3-sphere or any mod-2 homology 3-sphere")
    else:
        print("not obstructed by a closed non-orientable subsurface")
    return 0


def cmd_graph(args):
    plan = _load_plan(args.plan)
    from .obstruction import DiskInP
    born = plan.base
    disks = []
    for circle in plan.circles:
        sheets = tuple(sorted({seg.sheet for seg in circle.segments}))
        arcs = tuple((e.arc, e.slot_in, e.slot_out, False) for e in circle.events)
        disks.append(DiskInP(id=f"disk_{circle.id}", boundary_circle=circle.id,
                             sheets=sheets, arcs=arcs))
    graphs = [build_graph(born, d) for d in disks]
    paths = []
    for graph in graphs:
        path = f"{args.output}_{graph.disk}.dot"
        _write_atomic(path, graph_to_dot(graph))
        paths.append(path)
    index = maximal_graph(graphs)
    print(f"maximal graph: {'absent' if index is None else graphs[index].disk}")
    print("wrote " + " ".join(paths))
    return 0


def cmd_example(args):
    if args.which == "base":
        born = build_base_example()
        prefix = args.output or "roundmap"
    else:
        born = build_surgered_example()
        prefix = args.output or "surgered"
    spoly_path = _write_atomic(prefix + ".spoly",
                               formats.emit_spoly(born.polyhedron))
    arr_path = _write_atomic(prefix + ".arr", formats.emit_arr(born))
    written = [spoly_path, arr_path]
    if args.which == "base":
        plan_path = _write_atomic(
            prefix + "_klein.plan",
            formats.emit_plan(klein_plan(born), prefix + ".spoly",
                              prefix + ".arr"))
        written.append(plan_path)
    print("wrote " + " ".join(written))
    return 0


def cmd_render(args):
    born = _load_born(args.spoly, args.arr)
    svg = render_svg(born)
    _write_atomic(args.output, svg)
    print(f"wrote {args.output}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spineforge",
        description="validators, surgeries and obstructions for normal "
                    "simple polyhedra carrying plane maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a .spoly (and .arr) pair")
    p.add_argument("spoly")
    p.add_argument("arr", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("euler", help="Euler characteristic")
    p.add_argument("spoly")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("homology", help="mod-2 Betti numbers")
    p.add_argument("spoly")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("surgery", help="attach the plan's patch")
    p.add_argument("plan")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("normalize", help="relocate circle images into a disk")
    p.add_argument("plan")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("obstruct", help="closed non-orientable subsurface search")
    p.add_argument("spoly")
    p.add_argument("--bound", type=int, default=100000)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("graph", help="incidence graphs of the plan's disks (DOT)")
    p.add_argument("plan")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("example", help="emit a gallery fixture")
    p.add_argument("which", choices=["base", "surgered"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("render", help="draw the map as SVG")
    p.add_argument("spoly")
    p.add_argument("arr")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except SpineForgeError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
