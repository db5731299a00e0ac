"""Command-line front end.

Triangulations, move scripts and annulus patterns are read from text files
(``-`` means standard input).  Domain errors print ``error[CODE]: message``
and exit with status 1; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import inspect
import sys

from . import explorer, macros, rewriter, sweep
from .errors import TriSpineError
from .moves import MoveScript, replay
from .signature import canonical_signature, signature_hex
from .skeleton import Skeleton, classify_vertices, euler_characteristic, is_orientable, is_simplicial, validate
from .triangulation import parse, serialize


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _tri(path: str):
    return parse(_read(path))


def _moves(text: str):
    return tuple(m.strip() for m in text.split(",") if m.strip())


def _address(text: str):
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"address must be comma-separated integers, got {text!r}") from None


# -- subcommands ----------------------------------------------------------------------

def cmd_validate(args, out):
    tri = _tri(args.tri)
    report = validate(tri)
    if report.valid:
        out.write("valid\n")
        return 0
    out.write(f"invalid: reversed edges {list(report.reversed_edges)}\n")
    return 1


def cmd_info(args, out):
    tri = _tri(args.tri)
    skel = Skeleton(tri)
    v, e, f, t = skel.counts()
    kinds, material, ideal = classify_vertices(tri, skel)
    out.write(f"signature {signature_hex(tri)}\n")
    out.write(f"closed {int(tri.is_closed())} valid {int(bool(validate(tri, skel)))}\n")
    out.write(f"vertices {v} edges {e} triangles {f} tetrahedra {t}\n")
    out.write(f"euler characteristic {euler_characteristic(tri, skel)}\n")
    out.write(f"orientable {int(is_orientable(tri))} simplicial {int(is_simplicial(tri, skel))}\n")
    out.write(f"material {material} ideal {ideal}\n")
    for link, kind in zip(skel.links, kinds):
        out.write(f"vertex {link.vertex}: {kind.lower()}, link {link.classification}, chi {link.euler_characteristic}\n")
    return 0


def cmd_apply(args, out):
    tri = _tri(args.tri)
    script = MoveScript.parse(_read(args.script))
    out.write(serialize(replay(tri, script)))
    return 0


def cmd_macro(args, out):
    fn = macros.MACROS[args.name]
    tri = _tri(args.tri)
    try:
        inspect.signature(fn).bind(tri, *args.address)
    except TypeError:
        raise argparse.ArgumentTypeError(f"wrong number of address integers for {args.name}") from None
    result = fn(tri, *args.address)
    out.write(result.script.to_text())
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(serialize(result.output))
    for key in sorted(result.landmarks):
        out.write(f"# landmark {key} {result.landmarks[key]}\n")
    return 0


def cmd_subdivide(args, out):
    tri = _tri(args.tri)
    new = macros.barycentric_direct(tri) if args.direct else macros.barycentric(tri).output
    out.write(serialize(new))
    return 0


def cmd_census1(args, out):
    out.write(explorer.census_csv(explorer.census_one_tet()))
    return 0


def cmd_explore(args, out):
    graph = explorer.bfs_component(_tri(args.tri), moves=_moves(args.moves), tet_cap=args.tet_cap,
                                   node_cap=args.node_cap, workers=args.workers)
    out.write(graph.to_dot() if args.format == "dot" else graph.to_text())
    return 0


def cmd_path(args, out):
    script = explorer.find_path(_tri(args.tri_a), _tri(args.tri_b), moves=_moves(args.moves),
                                tet_cap=args.tet_cap, node_cap=args.node_cap, workers=args.workers)
    out.write(script.to_text())
    return 0


def cmd_rewrite(args, out):
    tri = _tri(args.tri)
    script = MoveScript.parse(_read(args.script))
    if canonical_signature(tri) != script.base_signature:
        replay(tri, script)  # raises the signature mismatch
    new = rewriter.pillow_rewrite(tri, script, args.floor)
    out.write(new.to_text())
    counts = rewriter.floor_report(tri, new)
    out.write(f"# floor {min(counts)} counts {' '.join(map(str, counts))}\n")
    return 0


def cmd_sweep(args, out):
    pattern = sweep.parse_pattern(_read(args.pattern))
    report = sweep.sweep_report(pattern)
    out.write(report.expanded.to_text())
    if not args.no_trace:
        trace = []
        sweep.simulate(pattern, report.expanded.events, trace=trace)
        out.write(f"# start: {sweep.CurvePosition.initial(pattern).describe()}\n")
        out.writelines(f"# {line}\n" for line in trace)
    return 0


# -- wiring ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trispine", description="Singular triangulations, moves, spines and sweeps.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check that no edge is glued to itself in reverse")
    s.add_argument("tri")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("info", help="counts, vertex links, Euler characteristic, simpliciality")
    s.add_argument("tri")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("apply", help="replay a move script and print the result")
    s.add_argument("tri")
    s.add_argument("script")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("macro", help="compile a derived move into a move script")
    s.add_argument("name", choices=sorted(macros.MACROS))
    s.add_argument("tri")
    s.add_argument("address", nargs="?", default=[], type=_address, help="comma-separated integers")
    s.add_argument("-o", "--output", help="also write the resulting triangulation here")
    s.set_defaults(func=cmd_macro)

    s = sub.add_parser("subdivide", help="barycentric subdivision")
    s.add_argument("tri")
    s.add_argument("--direct", action="store_true", help="build it directly instead of by moves")
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("census1", help="closed valid one-tetrahedron triangulations as CSV")
    s.set_defaults(func=cmd_census1)

    for name, func, helptext in (("explore", cmd_explore, "flip-graph component of a triangulation"),
                                 ("path", cmd_path, "shortest move sequence between two triangulations")):
        s = sub.add_parser(name, help=helptext)
        if name == "explore":
            s.add_argument("tri")
            s.add_argument("--format", choices=("text", "dot"), default="text")
            s.add_argument("--node-cap", type=int, default=100000)
        else:
            s.add_argument("tri_a")
            s.add_argument("tri_b")
            s.add_argument("--node-cap", type=int, default=200000)
        s.add_argument("--moves", default="23,32")
        s.add_argument("--tet-cap", type=int)
        s.add_argument("--workers", type=int, default=1)
        s.set_defaults(func=func)

    s = sub.add_parser("rewrite", help="lift a script above a material-vertex floor")
    s.add_argument("tri")
    s.add_argument("script")
    s.add_argument("--floor", type=int, required=True)
    s.set_defaults(func=cmd_rewrite)

    s = sub.add_parser("sweep", help="sweep an annulus pattern and print the event script")
    s.add_argument("pattern")
    s.add_argument("--no-trace", action="store_true")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except argparse.ArgumentTypeError as exc:
        sys.stderr.write(f"trispine: {exc}\n")
        return 2
    except TriSpineError as exc:
        sys.stderr.write(f"error[{exc.code}]: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error[E_IO]: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
