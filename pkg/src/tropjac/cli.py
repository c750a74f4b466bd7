"""Command-line front end.

Exit status: 0 success, 1 unreadable or malformed input, 2 domain error
(machine-readable JSON on stderr), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from . import __version__
from .errors import InvalidInput, NotCertifiedError, TropJacError, UnsupportedDimension
from .exact.numbers import fmt_rational, to_rational

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2, 64


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- I/O helpers ----------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load(path: str, parse: Callable):
    obj = _read_json(path)
    try:
        return parse(obj)
    except InvalidInput as exc:
        raise InputError(f"{path}: {exc}") from None
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{path}: malformed input ({exc!r})") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _graph(path: str):
    from .metric_graph import WeightedMetricGraph
    return _load(path, WeightedMetricGraph.from_json)


def _form(path: str):
    from .period_matrix import QuadraticForm
    return _load(path, QuadraticForm.from_json)


def _point(text: str) -> List[Fraction]:
    try:
        return [to_rational(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError, InvalidInput):
        raise InputError(f"cannot parse point {text!r}") from None


def _graph_point(text: str):
    from .abel_jacobi import GraphPoint
    try:
        return GraphPoint.parse(text)
    except InvalidInput as exc:
        raise InputError(str(exc)) from None


def _vec(v) -> List[str]:
    return [fmt_rational(x) for x in v]


# -- subcommands ----------------------------------------------------------------

def cmd_hyperelliptic(args) -> None:
    from .admissible_cover import hyperelliptic_pipeline_full
    from .phylo import MarkedPoints
    pts = _load(args.input, MarkedPoints.from_json)
    res = hyperelliptic_pipeline_full(pts)
    _write(args.out, dumps(res.graph.to_json()))
    if args.emit_cover:
        _write(args.emit_cover, dumps(res.cover.to_json()))
    if res.warnings:
        sys.stderr.write(dumps({"warnings": sorted(res.warnings)}))


def cmd_plane_trop(args) -> None:
    from .plane_tropical import PlaneCurveInput, faithfulness_certificate, newton_subdivision, skeleton, \
        to_svg, tropical_curve
    f = _load(args.input, PlaneCurveInput.from_json)
    S = newton_subdivision(f)
    C = tropical_curve(S)
    cert = faithfulness_certificate(C, args.genus, f.smooth)
    out = {"subdivision": S.to_json(), "curve": C.to_json(), "certificate": cert.to_json()}
    if args.svg:
        _write(args.svg, to_svg(C))
    if args.skeleton:
        _write(args.skeleton, dumps(skeleton(C, cert).to_json()))
    _write(None, dumps(out))
    if args.certify and not cert.certified:
        raise NotCertifiedError("tropical curve is not certified faithful",
                                violations=[f"{k}: {d}" for k, d in cert.violations])


def cmd_period_matrix(args) -> None:
    from .period_matrix import cycle_basis, period_matrix
    G = _graph(args.graph)
    basis = None
    if args.tree is not None:
        tree = [int(x) for x in args.tree.split(",") if x.strip()]
        basis = cycle_basis(G, tree=tree, orientation="stored")
    _write(args.out, dumps(period_matrix(G, basis).to_json()))


def _cone_json(cone) -> dict:
    eqs, ineqs = cone.constraints()
    return {"dim": cone.dim, "rays": [list(r) for r in cone.rays()],
            "equations": [list(e) for e in eqs], "inequalities": [list(a) for a in ineqs]}


def cmd_secondary_cone(args) -> None:
    obj = _read_json(args.input)
    if isinstance(obj, dict) and "edges" in obj:
        from .period_matrix import secondary_cone_of_graph
        cone = secondary_cone_of_graph(_graph(args.input))
    else:
        from .delaunay import secondary_cone_of_form
        cone = secondary_cone_of_form(_form(args.input))
    _write(None, dumps(_cone_json(cone)))


def cmd_delaunay(args) -> None:
    from .delaunay import delaunay_subdivision
    _write(None, dumps(delaunay_subdivision(_form(args.input)).to_json()))


def cmd_voronoi(args) -> None:
    from .delaunay import voronoi_cell
    cell = voronoi_cell(_form(args.input))
    if args.f_vector:
        _write(None, dumps({"f_vector": list(cell.f_vector), "divisor_counts": list(cell.divisor_counts)}))
    else:
        _write(None, dumps(cell.to_json()))


def cmd_theta(args) -> None:
    from .delaunay import ThetaFunction
    Q = _form(args.input)
    x = _point(args.point)
    if len(x) != Q.g:
        raise InputError(f"point has {len(x)} coordinates, form has g = {Q.g}")
    value, argmax = ThetaFunction(Q)(x)
    _write(None, dumps({"value": fmt_rational(value), "argmax": [_vec(a) for a in argmax],
                        "on_divisor": len(argmax) >= 2}))


def cmd_abel_jacobi(args) -> None:
    from .abel_jacobi import AbelJacobi
    G = _graph(args.graph)
    p0 = _graph_point(args.basepoint) if args.basepoint else None
    aj = AbelJacobi(G, None, p0)
    p = _graph_point(args.point)
    chain = aj.chain(p)
    _write(None, dumps({"point": _vec(aj.point(p)), "lift": _vec(aj.lift(chain)),
                        "pairing": _vec(aj.pairing(chain)),
                        "period_matrix": _aj_form(aj)}))


def _aj_form(aj) -> dict:
    return {"g": aj.g, "entries": [_vec(row) for row in aj.Q]}


def cmd_w_cells(args) -> None:
    from .abel_jacobi import w_cells
    cells = w_cells(_graph(args.graph))
    _write(None, dumps({"cells": [c.to_json() for c in cells], "count": len(cells)}))


def cmd_theta_check(args) -> None:
    from .abel_jacobi import theta_correspondence_check
    res = theta_correspondence_check(_graph(args.graph))
    _write(None, dumps(res.to_json()))


def cmd_schottky(args) -> None:
    from .delaunay import reduce_to_definite
    from .schottky import graph_catalog, schottky_recover
    Q = _form(args.input)
    _, _, k = reduce_to_definite(Q)
    gp = Q.g - k
    if gp > args.genus_max:
        raise UnsupportedDimension(f"definite rank {gp} exceeds --genus-max {args.genus_max}", g=gp)
    res = schottky_recover(Q, graph_catalog(gp) if gp else None)
    _write(None, dumps(res.to_json(witness=args.emit_witness)))


def cmd_realize(args) -> None:
    from .realization import realization_blueprint
    bp = realization_blueprint(_graph(args.graph))
    out = bp.to_json()
    out["arithmetic_genus"] = bp.arithmetic_genus()
    _write(None, dumps(out))


def cmd_export_dot(args) -> None:
    _write(args.out, _graph(args.graph).to_dot())


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropjac", description="Tropical Jacobians of curves, and back.")
    p.add_argument("--version", action="version", version=f"tropjac {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("hyperelliptic", help="marked points -> metric graph via admissible cover")
    s.add_argument("--input", required=True)
    s.add_argument("--out")
    s.add_argument("--emit-cover")
    s.set_defaults(func=cmd_hyperelliptic)

    s = sub.add_parser("plane-trop", help="plane curve -> subdivision, tropical curve, certificate")
    s.add_argument("--input", required=True)
    s.add_argument("--genus", type=int)
    s.add_argument("--certify", action="store_true", help="exit 2 unless the curve is certified")
    s.add_argument("--skeleton")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_plane_trop)

    s = sub.add_parser("period-matrix", help="graph -> period matrix")
    s.add_argument("graph")
    s.add_argument("--tree", help="comma-separated spanning tree edge ids (stored orientation)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_period_matrix)

    s = sub.add_parser("secondary-cone", help="graph or form -> secondary cone")
    s.add_argument("input")
    s.set_defaults(func=cmd_secondary_cone)

    for name, func, helptext in (("delaunay", cmd_delaunay, "form -> Delaunay subdivision"),
                                 ("voronoi", cmd_voronoi, "form -> Voronoi cell")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("input")
        if name == "voronoi":
            s.add_argument("--f-vector", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("theta", help="evaluate the tropical theta function")
    s.add_argument("input")
    s.add_argument("--point", required=True)
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("abel-jacobi", help="Abel-Jacobi image of a point on a graph")
    s.add_argument("graph")
    s.add_argument("--point", required=True)
    s.add_argument("--basepoint")
    s.set_defaults(func=cmd_abel_jacobi)

    for name, func, helptext in (("w-cells", cmd_w_cells, "cells of W_{g-1}"),
                                 ("theta-check", cmd_theta_check, "search the W_{g-1} to theta shift"),
                                 ("realize", cmd_realize, "stable graph -> nodal curve blueprint")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("graph")
        s.set_defaults(func=func)

    s = sub.add_parser("schottky", help="form -> metric graph, or not in the locus")
    s.add_argument("input")
    s.add_argument("--genus-max", type=int, default=4)
    s.add_argument("--emit-witness", action="store_true")
    s.set_defaults(func=cmd_schottky)

    s = sub.add_parser("export-dot", help="graph -> Graphviz DOT")
    s.add_argument("graph")
    s.add_argument("--out")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        sys.stderr.write(dumps({"error": "input_error", "message": str(exc)}))
        return EXIT_IO
    except TropJacError as exc:
        sys.stderr.write(dumps(exc.to_json()))
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
