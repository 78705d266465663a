"""Closed hyperbolic surfaces from pants decompositions.

A genus-g surface is specified by a trivalent pants graph (2g-2 nodes,
3g-3 edges) plus Fenchel-Nielsen coordinates (length and twist per edge).
Each pair of pants is realized as two right-angled hexagon charts glued
along the three seam orthogeodesics; pants are glued to each other along
cuff sides with the twist applied as a shift of the cuff parametrization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from . import geometry as G
from . import tiling as T
from .errors import (ConstructionFailure, DomainError, InvalidGenus,
                     InvalidGraph, InvalidLength)


@dataclass(frozen=True)
class PantsGraph:
    """Trivalent multigraph: one node per pair of pants, one edge per cuff."""
    genus: int
    edges: tuple  # tuple of (u, v) pairs; loops and multi-edges allowed

    @property
    def n_nodes(self) -> int:
        return 2 * self.genus - 2

    def validate(self):
        g, edges = self.genus, self.edges
        if g < 2:
            raise InvalidGenus(f"genus {g} < 2")
        n = 2 * g - 2
        if len(edges) != 3 * g - 3:
            raise InvalidGraph(f"expected {3*g-3} edges, got {len(edges)}")
        deg = [0] * n
        adj = [set() for _ in range(n)]
        for (u, v) in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge ({u},{v}) out of range")
            deg[u] += 1
            deg[v] += 1
            adj[u].add(v)
            adj[v].add(u)
        bad = [i for i, d in enumerate(deg) if d != 3]
        if bad:
            raise InvalidGraph(f"nodes {bad} do not have degree 3")
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise InvalidGraph("pants graph is disconnected")


def linear_graph(g: int) -> PantsGraph:
    """The linear trivalent graph: a chain v_1..v_{2g-2} with a loop at each
    end, single edges at odd chain positions and double edges at even ones."""
    if g < 2:
        raise InvalidGenus(f"genus {g} < 2")
    edges = [(0, 0)]
    for i in range(1, 2 * g - 2):  # chain position i (1-based), nodes i-1, i
        edges.append((i - 1, i))
        if i % 2 == 0:
            edges.append((i - 1, i))
    edges.append((2 * g - 3, 2 * g - 3))
    pg = PantsGraph(g, tuple(edges))
    pg.validate()
    return pg


@dataclass(frozen=True)
class FNCoordinates:
    lengths: tuple
    twists: tuple

    def validate(self, n_edges: int):
        if len(self.lengths) != n_edges or len(self.twists) != n_edges:
            raise DomainError("coordinate arrays do not match edge count")
        for l in self.lengths:
            if not (l > 0):
                raise InvalidLength(f"non-positive cuff length {l}")


def _hexagon_sides(a1: float, a2: float, a3: float) -> list:
    """Alternating sides [a1, s12, a2, s23, a3, s31] of the right-angled
    hexagon with half-cuffs a1, a2, a3 (seams from the hexagon relation)."""
    def seam(x, y, z):  # seam between half-cuffs x, y; z opposite
        return math.acosh((math.cosh(z) + math.cosh(x) * math.cosh(y))
                          / (math.sinh(x) * math.sinh(y)))
    return [a1, seam(a1, a2, a3), a2, seam(a2, a3, a1), a3, seam(a3, a1, a2)]


def _march_hexagon(sides: list) -> list:
    """Vertices of the right-angled polygon traced by the side sequence,
    starting at 0 heading along +x, turning pi/2 at each corner."""
    f = G.Mobius.identity()
    verts = []
    for s in sides:
        verts.append(f(0))
        f = f @ G.Mobius.translation_x(s) @ G.Mobius.rotation(0.5 * math.pi)
    if not f.is_identity(1e-8):
        raise ConstructionFailure(
            "hexagon march did not close up", witness=(f.a, f.b))
    return verts


@dataclass
class CuffEnd:
    pants: int
    slot: int  # 0, 1, 2


class SurfaceAtlas:
    """Chart atlas of a closed hyperbolic surface.

    Charts 2p and 2p+1 are the front/back hexagons of pants p.  On chart
    2p, side 2i is the half-cuff of slot i and odd sides are seams; chart
    2p+1 mirrors chart 2p, side k matching front side 5-k.
    """

    def __init__(self, graph: PantsGraph, fn: FNCoordinates):
        graph.validate()
        fn.validate(len(graph.edges))
        self.graph = graph
        self.fn = fn
        self.genus = graph.genus

        # cuff slot assignment: edge order fixes slots at each node
        self.ends: list[tuple[CuffEnd, CuffEnd]] = []
        counters = [0] * graph.n_nodes
        for (u, v) in graph.edges:
            eu = CuffEnd(u, counters[u]); counters[u] += 1
            ev = CuffEnd(v, counters[v]); counters[v] += 1
            self.ends.append((eu, ev))
        # half-cuff length per (pants, slot)
        self.slot_half: dict[tuple[int, int], float] = {}
        self.slot_edge: dict[tuple[int, int], int] = {}
        for ei, (eu, ev) in enumerate(self.ends):
            for e in (eu, ev):
                self.slot_half[(e.pants, e.slot)] = 0.5 * fn.lengths[ei]
                self.slot_edge[(e.pants, e.slot)] = ei

        charts = []
        for p in range(graph.n_nodes):
            a = [self.slot_half[(p, i)] for i in range(3)]
            sides = _hexagon_sides(*a)
            verts = _march_hexagon(sides)
            front = T.Chart(verts, label=f"P{p}+")
            back = T.Chart([v.conjugate() for v in
                            [verts[0]] + verts[:0:-1]], label=f"P{p}-")
            charts.append(front)
            charts.append(back)
        self.cc = T.ChartComplex(charts)

        self._glue_seams()
        self._glue_cuffs()
        self.cc.check_reciprocal()
        self.cuff_generators = [self._cuff_holonomy(ei)
                                for ei in range(len(graph.edges))]
        for ei, g in enumerate(self.cuff_generators):
            got = G.translation_length(g)
            want = fn.lengths[ei]
            if abs(got - want) > 1e-7:
                raise ConstructionFailure(
                    f"cuff {ei} holonomy length {got} != {want}",
                    witness=(ei, got, want))

    # -- gluing ------------------------------------------------------------

    def _glue_seams(self):
        for p in range(self.graph.n_nodes):
            cf, cb = 2 * p, 2 * p + 1
            front, back = self.cc.charts[cf], self.cc.charts[cb]
            for j in (1, 3, 5):
                k = 5 - j
                # back side k reversed onto front side j
                t = G.segment_map(back.vertices[k], back.vertices[(k + 1) % 6],
                                  front.vertices[(j + 1) % 6], front.vertices[j])
                front.add_transition(j, cb, t)
                back.add_transition(k, cf, t.inverse())

    def _cuff_side(self, end: CuffEnd, half: int) -> tuple[int, int]:
        """(chart, side) of the front (half=0) or back (half=1) cuff arc."""
        if half == 0:
            return 2 * end.pants, 2 * end.slot
        return 2 * end.pants + 1, 5 - 2 * end.slot

    def _glue_cuffs(self):
        for ei, (eu, ev) in enumerate(self.ends):
            l = self.fn.lengths[ei]
            tau = self.fn.twists[ei]
            a = 0.5 * l
            for near, far in ((eu, ev), (ev, eu)):
                for half in (0, 1):
                    ci, si = self._cuff_side(near, half)
                    off = half * a  # cuff param = side param + off
                    # breakpoints of u in (0, a) where the far-side arc
                    # switches between the far front and back charts
                    brk = {0.0, a}
                    for target in (tau - off, tau - off - a):
                        u = target % l
                        if 1e-12 < u < a - 1e-12:
                            brk.add(u)
                    brk = sorted(brk)
                    ch = self.cc.charts[ci]
                    for lo, hi in zip(brk, brk[1:]):
                        um = 0.5 * (lo + hi)
                        tq = (tau - off - um) % l
                        if tq < a:
                            cj, sj = self._cuff_side(far, 0)
                            up = tq
                        else:
                            cj, sj = self._cuff_side(far, 1)
                            up = tq - a
                        sigma = um + up
                        t = (ch.side_frames[si]
                             @ G.Mobius.translation_x(sigma)
                             @ G.Mobius.rotation(math.pi)
                             @ self.cc.charts[cj].side_frames[sj].inverse())
                        ch.add_transition(si, cj, t)

    def _cuff_holonomy(self, ei: int) -> G.Mobius:
        """Deck element of the pants curve: loop through the two seams
        bordering the cuff slot, inside one pair of pants."""
        end = self.ends[ei][0]
        cf = 2 * end.pants
        i = end.slot
        front = self.cc.charts[cf]
        t1 = _single_transition(front, (2 * i + 1) % 6, 2 * end.pants + 1)
        back = self.cc.charts[2 * end.pants + 1]
        t2 = _single_transition(back, (6 - 2 * i) % 6, cf)
        return t1 @ t2

    # -- queries -----------------------------------------------------------

    def lift_ball(self, base: T.SurfacePoint, radius: float,
                  r_max: float = 8.0) -> list[T.Tile]:
        from .errors import RadiusCap
        if radius > r_max:
            raise RadiusCap(f"radius {radius} exceeds cap {r_max}")
        return T.lift_ball(self.cc, base, radius)

    def surface_distance(self, u: T.SurfacePoint, v: T.SurfacePoint,
                         r_max: float = 8.0) -> float:
        return T.surface_distance(self.cc, u, v, r_max=r_max)

    def point(self, chart: int, z: complex) -> T.SurfacePoint:
        return T.SurfacePoint(chart, z)

    def vertex_angle_audit(self, tol: float = 1e-8):
        """Total chart angle around every hexagon vertex must be 2*pi.

        Develops a small ball around each vertex and sums, over the tiles
        whose closed polygon contains the center, the interior angle (at a
        matching polygon vertex) or pi (center interior to a side).  This is
        the transition-consistency check: a bad gluing breaks the sum.
        """
        for ci, ch in enumerate(self.cc.charts):
            for vi, v in enumerate(ch.vertices):
                seed = G.Mobius.translate_to(v).inverse()
                tiles = T.ball_tiles(self.cc, ci, seed, 0.05)
                total = 0.0
                for t in tiles:
                    z = t.placement.inverse()(0)
                    c2 = self.cc.charts[t.chart]
                    ang = _corner_angle(c2, z)
                    if ang is not None:
                        total += ang
                if abs(total - 2 * math.pi) > tol:
                    raise ConstructionFailure(
                        f"angle sum {total} around vertex {vi} of chart {ci}",
                        witness=(ci, vi, total))

    def short_geodesics(self, threshold: float,
                        depth_cap: int = T.WORD_CAP) -> list["ShortGeodesic"]:
        """All primitive closed geodesics shorter than threshold, one per
        free homotopy class up to inversion."""
        found: list[ShortGeodesic] = []
        for ci, ch in enumerate(self.cc.charts):
            radius = threshold + 2.0 * ch.center_radius + 0.2
            seed = G.Mobius.translate_to(ch.center).inverse()
            tiles = T.ball_tiles(self.cc, ci, seed, radius,
                                 depth_cap=depth_cap)
            cands = []
            for t in tiles:
                if t.chart != ci:
                    continue
                g = t.placement @ seed.inverse()
                if g.is_identity(1e-8):
                    continue
                kind, length = G.classify(g)
                if kind != "hyperbolic" or length >= threshold:
                    continue
                # keep only conjugates whose axis passes through this chart:
                # every geodesic is still found from a chart it crosses, and
                # dedup relies on axes staying near the seed tile
                d_axis, _ = G.dist_to_diameter(G.axis_frame(g).inverse()(0))
                if d_axis <= ch.center_radius + 1e-6:
                    cands.append((length, g))
            for length, g in sorted(cands, key=lambda p: p[0]):
                sg = ShortGeodesic(self, ci, g, length, tiles)
                for prev in found:
                    # only an inverse or power of prev can coincide with sg,
                    # so the length must be a near-integer multiple
                    k = round(length / prev.length)
                    if k < 1 or abs(length - k * prev.length) > 1e-6:
                        continue
                    if prev.same_geodesic(sg):
                        break
                else:
                    found.append(sg)
        found.sort(key=lambda s: s.length)
        return found


def _corner_angle(ch: T.Chart, z: complex, tol: float = 1e-7):
    """Angle the chart polygon subtends at a boundary point z (None if z is
    not on the closed polygon)."""
    n = ch.n_sides
    for i, v in enumerate(ch.vertices):
        if G.dist(v, z) < tol:
            d1 = G.direction(v, ch.vertices[(i + 1) % n])
            d2 = G.direction(v, ch.vertices[(i - 1) % n])
            return (d2 - d1) % (2 * math.pi)
    for fr, L in zip(ch.side_frames, ch.side_lengths):
        if G.dist_to_segment(z, fr, L) < tol:
            return math.pi
    if ch.contains(z, -tol):
        return 2 * math.pi
    return None


def _single_transition(ch: T.Chart, side: int, want_chart: int) -> G.Mobius:
    cands = [t for cj, t in ch.transitions[side] if cj == want_chart]
    if len(cands) != 1:
        raise ConstructionFailure(
            f"expected unique transition on side {side}, got {len(cands)}")
    return cands[0]


class ShortGeodesic:
    """A closed geodesic found by deck-element enumeration.

    The deck element g lives in the development seeded at chart `chart`
    recentered at its intrinsic center.  Sample points along one period
    identify the geodesic as a subset of the surface for deduplication.
    """

    def __init__(self, atlas: SurfaceAtlas, chart: int, g: G.Mobius,
                 length: float, tiles: list[T.Tile]):
        self.atlas = atlas
        self.chart = chart
        self.element = g
        self.length = length
        af = G.axis_frame(g)
        self.samples: list[T.SurfacePoint] = []
        for k in range(4):
            z = af(math.tanh(0.5 * (k * length / 4.0)))
            sp = _locate_in_tiles(atlas.cc, tiles, z)
            if sp is not None:
                self.samples.append(sp)
        if not self.samples:
            raise ConstructionFailure("could not locate geodesic samples")
        # per-sample tile-ball cache: (radius, tiles); balls computed at a
        # larger radius are supersets, so they can be reused for smaller ones
        self._ball_cache: list = [None] * len(self.samples)

    def sample_ball(self, k: int, radius: float) -> list[T.Tile]:
        cached = self._ball_cache[k]
        if cached is not None and cached[0] >= radius:
            return cached[1]
        r = radius + 0.5  # headroom so near-identical requests hit the cache
        tiles = T.lift_ball(self.atlas.cc, self.samples[k], r)
        self._ball_cache[k] = (r, tiles)
        return tiles

    def _dist_via_tiles(self, tiles: list[T.Tile]) -> float:
        """Min distance from the ball's center to this geodesic, searching
        the lifts reachable through the given tiles."""
        seed = G.Mobius.translate_to(self.atlas.cc.charts[self.chart].center
                                     ).inverse()
        best = math.inf
        for t in tiles:
            if t.chart != self.chart:
                continue
            h = t.placement @ seed.inverse()
            gp = h @ self.element @ h.inverse()
            z = G.axis_frame(gp).inverse()(0)
            d, _ = G.dist_to_diameter(z)
            best = min(best, d)
        return best

    def _ball_radius(self) -> float:
        ch = self.atlas.cc.charts[self.chart]
        return 0.5 * self.length + 2.0 * ch.center_radius + 0.3

    def dist_to(self, p: T.SurfacePoint) -> float:
        """Distance from a surface point to this closed geodesic."""
        tiles = T.lift_ball(self.atlas.cc, p, self._ball_radius())
        return self._dist_via_tiles(tiles)

    def same_geodesic(self, other: "ShortGeodesic", tol: float = 1e-6) -> bool:
        """True if both wrap the same geodesic set (a power or inverse of
        the same primitive also matches; keep the shorter one)."""
        r = self._ball_radius()
        return all(self._dist_via_tiles(other.sample_ball(k, r)) < tol
                   for k in range(len(other.samples)))

    def basepoint(self) -> T.SurfacePoint:
        return self.samples[0]


def _locate_in_tiles(cc: T.ChartComplex, tiles: list[T.Tile],
                     z: complex) -> T.SurfacePoint | None:
    for t in tiles:
        w = t.placement.inverse()(z)
        if abs(w) < 1.0 - 1e-9 and cc.charts[t.chart].contains(w, 1e-9):
            return T.SurfacePoint(t.chart, w)
    return None


# -- serialization ----------------------------------------------------------

def spec_to_json(graph: PantsGraph, fn: FNCoordinates) -> str:
    return json.dumps({
        "genus": graph.genus,
        "graph": [list(e) for e in graph.edges],
        "lengths": list(fn.lengths),
        "twists": list(fn.twists),
    }, indent=2)


def spec_from_json(text: str) -> tuple[PantsGraph, FNCoordinates]:
    d = json.loads(text)
    graph = PantsGraph(int(d["genus"]),
                       tuple((int(u), int(v)) for u, v in d["graph"]))
    fn = FNCoordinates(tuple(float(x) for x in d["lengths"]),
                       tuple(float(x) for x in d["twists"]))
    graph.validate()
    fn.validate(len(graph.edges))
    return graph, fn


def build_atlas(graph: PantsGraph, fn: FNCoordinates) -> SurfaceAtlas:
    return SurfaceAtlas(graph, fn)
