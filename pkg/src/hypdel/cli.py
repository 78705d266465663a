"""Command-line front end: construction, certification, audits, figures.

Thin shell over the library modules; every certificate the CLI emits is
byte-identical to the corresponding library call.  Exit codes: 0 all
checks pass, 1 a check failed, 2 input or resource errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import delaunay as D
from . import equilateral as E
from . import geometry as G
from . import linearbound as L
from . import surface as S
from . import thickthin as TT
from . import tiling as T
from . import verify as V
from .errors import HypDelError, RadiusCap


def _load_atlas(path):
    text = Path(path).read_text()
    graph, fn = S.spec_from_json(text)
    return S.SurfaceAtlas(graph, fn)


def cmd_build_surface(args):
    atlas = _load_atlas(args.spec)
    cyls = TT.detect_thin_part(atlas, args.epsilon)
    thin = [c for c in cyls if c.kind == "thin"]
    out = {
        "genus": atlas.genus,
        "pants": 2 * atlas.genus - 2,
        "cuff_lengths": [G.translation_length(h)
                         for h in atlas.cuff_generators],
        "epsilon": args.epsilon,
        "short_geodesics": [c.length for c in cyls],
        "thin_cylinders": len(thin),
    }
    print(f"genus {out['genus']}, {out['pants']} pants, "
          f"{len(out['cuff_lengths'])} cuffs")
    print(f"cuff lengths: {out['cuff_lengths']}")
    print(f"short geodesics below 2*{args.epsilon}: "
          f"{out['short_geodesics']} ({out['thin_cylinders']} thin)")
    if args.out:
        Path(args.out).write_text(json.dumps(out, indent=1))
    return 0


def cmd_triangulate(args):
    atlas = _load_atlas(args.spec)
    res = D.thick_thin_triangulation(atlas, args.epsilon)
    tc = res.complex
    text = D.complex_to_json(tc)
    g = atlas.genus
    print(f"v = {tc.n_vertices} (bound 151g = {151 * g}, floor "
          f"jungerman_ringel({g}) = {V.jungerman_ringel(g)})")
    print(f"e = {len(tc.edges)}, f = {len(tc.triangles)}, "
          f"cylinder vertices {len(res.p1)}, net vertices {len(res.p2)}")
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return 0


def cmd_verify(args):
    atlas = _load_atlas(args.spec)
    text = Path(args.triangulation).read_text()
    cert = V.verify_json(atlas, text,
                         delaunay_tol=args.tol or V.DELAUNAY_TOL)
    print(cert.summary())
    if args.out:
        Path(args.out).write_text(cert.to_json())
    if args.svg:
        lc = D.complex_from_json(atlas, text)
        Path(args.svg).write_text(render_svg(atlas, lc))
    return 0 if cert.passed else 1


def cmd_bounds(args):
    atlas = _load_atlas(args.spec)
    text = Path(args.triangulation).read_text()
    lc = D.complex_from_json(atlas, text)
    lens = [G.translation_length(h) for h in atlas.cuff_generators]
    pc = L.pants_constants(min(lens), max(lens))
    checks = L.edge_bound_audit(atlas, lc, pc)
    checks += L.appendixB_audit(atlas, lc, pc)
    cert = V.Certificate(checks)
    print(f"m = {pc.m:.6f}, M = {pc.M:.6f}, N = {pc.N}, "
          f"denominator {pc.denominator()}")
    print(cert.summary())
    if args.out:
        Path(args.out).write_text(cert.to_json())
    return 0 if cert.passed else 1


def cmd_equilateral(args):
    rot = E.parse_rotation(Path(args.rotation).read_text())
    verdict = E.check_hyperbolizable(rot)
    if not verdict.ok:
        print("not hyperbolizable: " + "; ".join(verdict.reasons))
        return 1
    print(f"K_{verdict.n}: genus {verdict.genus}, side {verdict.side:.6f}")
    surf = E.hyperbolize(rot)
    cert, text = E.certify_equilateral(surf)
    print(cert.summary())
    print(f"v = {surf.n}, jungerman_ringel({surf.genus}) = "
          f"{V.jungerman_ringel(surf.genus)}")
    if args.out:
        Path(args.out).write_text(text)
    if args.svg:
        lc = D.complex_from_json(surf, text)
        Path(args.svg).write_text(render_svg(surf, lc))
    return 0 if cert.passed else 1


def cmd_report(args):
    atlas = _load_atlas(args.spec)
    res = D.thick_thin_triangulation(atlas, args.epsilon)
    text = D.complex_to_json(res.complex)
    cert = V.verify_json(atlas, text)
    lens = [G.translation_length(h) for h in atlas.cuff_generators]
    pc = L.pants_constants(min(lens), max(lens))
    lc = D.complex_from_json(atlas, text)
    bound_checks = L.edge_bound_audit(atlas, lc, pc)
    report = {
        "genus": atlas.genus,
        "v": res.complex.n_vertices,
        "e": len(res.complex.edges),
        "f": len(res.complex.triangles),
        "bound_151g": 151 * atlas.genus,
        "jungerman_ringel": V.jungerman_ringel(atlas.genus),
        "verify": json.loads(cert.to_json()),
        "bounds": json.loads(V.Certificate(bound_checks).to_json()),
    }
    out = json.dumps(report, indent=1)
    if args.out:
        Path(args.out).write_text(out)
    else:
        print(out)
    ok = cert.passed and all(c.passed for c in bound_checks)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# SVG rendering: fundamental domain plus one ring of translates
# ---------------------------------------------------------------------------

def _geodesic_path(p: complex, q: complex, scale: float) -> str:
    """SVG path for the geodesic segment between two disk points."""
    det = 2.0 * (p.real * q.imag - p.imag * q.real)
    x1, y1 = p.real * scale, -p.imag * scale
    x2, y2 = q.real * scale, -q.imag * scale
    if abs(det) < 1e-9:
        return f"M {x1:.2f} {y1:.2f} L {x2:.2f} {y2:.2f}"
    b1 = 1.0 + abs(p) ** 2
    b2 = 1.0 + abs(q) ** 2
    cx = (b1 * q.imag - b2 * p.imag) / det
    cy = (b2 * p.real - b1 * q.real) / det
    r = math.sqrt(cx * cx + cy * cy - 1.0) * scale
    sweep = 1 if (q.real - p.real) * (cy - p.imag) - \
        (q.imag - p.imag) * (cx - p.real) > 0 else 0
    return (f"M {x1:.2f} {y1:.2f} A {r:.2f} {r:.2f} 0 0 {sweep} "
            f"{x2:.2f} {y2:.2f}")


def render_svg(atlas, lc, radius: float = 2.6, scale: float = 360.0) -> str:
    """Lifted triangulation inside the unit disk: one development ball
    around the first vertex (roughly the fundamental domain and a ring
    of translates)."""
    base = lc.points[0]
    tiles = T.lift_ball(atlas.cc, base, radius)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="{-scale-6} {-scale-6} {2*scale+12} {2*scale+12}">',
             f'<circle cx="0" cy="0" r="{scale}" fill="white" '
             f'stroke="black" stroke-width="1.5"/>']
    seeds = {u: G.Mobius.translate_to(p.z).inverse()
             for u, p in enumerate(lc.points)}
    drawn = set()
    by_chart = {}
    for u, p in enumerate(lc.points):
        by_chart.setdefault(p.chart, []).append(u)
    for tile in tiles:
        for u in by_chart.get(tile.chart, ()):
            start = tile.placement(lc.points[u].z)
            if abs(start) > 0.995:
                continue
            frame = tile.placement @ seeds[u].inverse()
            for (a, b, m) in lc.edges:
                if a != u:
                    continue
                end = frame(m(lc.points[b].z))
                if abs(end) > 0.995:
                    continue
                key = (round(start.real, 5), round(start.imag, 5),
                       round(end.real, 5), round(end.imag, 5))
                if key in drawn:
                    continue
                drawn.add(key)
                parts.append(f'<path d="{_geodesic_path(start, end, scale)}"'
                             f' fill="none" stroke="#3366aa" '
                             f'stroke-width="0.8"/>')
            parts.append(f'<circle cx="{start.real*scale:.2f}" '
                         f'cy="{-start.imag*scale:.2f}" r="2.2" '
                         f'fill="#aa3322"/>')
    parts.append("</svg>")
    return "\n".join(parts)


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="hypdel",
        description="Distance Delaunay triangulations of closed "
                    "hyperbolic surfaces")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--epsilon", type=float,
                        default=TT.EPSILON_DEFAULT)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--rmax", type=float, default=8.0)
        sp.add_argument("--svg", default=None)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("build-surface")
    sp.add_argument("spec")
    common(sp)
    sp.set_defaults(fn=cmd_build_surface)

    sp = sub.add_parser("triangulate")
    sp.add_argument("spec")
    common(sp)
    sp.set_defaults(fn=cmd_triangulate)

    sp = sub.add_parser("verify")
    sp.add_argument("spec")
    sp.add_argument("triangulation")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("bounds")
    sp.add_argument("spec")
    sp.add_argument("triangulation")
    common(sp)
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("equilateral")
    sp.add_argument("rotation")
    common(sp)
    sp.set_defaults(fn=cmd_equilateral)

    sp = sub.add_parser("report")
    sp.add_argument("spec")
    common(sp)
    sp.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except RadiusCap as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 2
    except HypDelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
