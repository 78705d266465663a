"""Delaunay triangulations of point sets on closed hyperbolic surfaces.

The triangulation of the lifted (infinite, Gamma-invariant) point set is
computed star by star: each vertex is recentered at the origin, the lifts
of all points inside an adaptively grown ball are triangulated with the
euclidean Delaunay algorithm (valid hyperbolically, since hyperbolic
circles are euclidean circles), and the star of the center is kept.  A
star triangle is certified when its circumdisk lies well inside the
enumerated ball, so no unseen lift could invade it.  Cocircular degenerate
polygons are re-fanned by a canonical, label-based rule, which makes the
output independent of insertion order and invariant under the deck group.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay as _EuclideanDelaunay
from scipy.spatial import QhullError

from . import geometry as G
from . import tiling as T
from .errors import (ConstructionFailure, DegenerateTriangle, DomainError,
                     NoCompactCircumdisk, RadiusCap)
from .surface import SurfaceAtlas

DEGEN_TOL = 1e-9  # cocircularity detection, hyperbolic distance units
KEY_DECIMALS = 6


@dataclass
class Edge:
    u: int
    v: int
    placement: G.Mobius  # chart(points[v]) placed in u's centered frame
    length: float


@dataclass
class Triangle:
    labels: tuple  # vertex indices (ccw)
    lifts: tuple   # their lifts in the frame of the anchor vertex labels[0]
    placements: tuple  # tile placements realizing the lifts
    edge_keys: tuple


@dataclass
class TriComplex:
    atlas: SurfaceAtlas
    points: list  # SurfacePoints
    edges: list   # Edge
    triangles: list  # Triangle, with edge_keys resolved to edge indices
    genus: int

    @property
    def n_vertices(self):
        return len(self.points)

    def euler_check(self):
        v, e, f = len(self.points), len(self.edges), len(self.triangles)
        if v - e + f != 2 - 2 * self.genus:
            raise ConstructionFailure(
                f"Euler count v-e+f = {v - e + f} != {2 - 2*self.genus}",
                witness=(v, e, f))
        if 2 * e != 3 * f:
            raise ConstructionFailure(f"2e != 3f ({e}, {f})")

    def seed(self, i: int) -> G.Mobius:
        return G.Mobius.translate_to(self.points[i].z).inverse()

    def triangle_lifts(self, t: Triangle) -> tuple:
        return t.lifts

    def label_triples(self) -> set:
        return {frozenset(t.labels) if len(set(t.labels)) == 3
                else tuple(sorted(t.labels)) for t in self.triangles}


def _vertex_sort_key(p: T.SurfacePoint):
    return (p.chart, round(p.z.real, 12), round(p.z.imag, 12))


class _Cloud:
    """Lifts of all points around one recentered vertex."""

    def __init__(self, atlas, points, center_idx, radius):
        self.center_idx = center_idx
        base = points[center_idx]
        tiles = T.lift_ball(atlas.cc, base, radius)
        by_chart = {}
        for j, p in enumerate(points):
            by_chart.setdefault(p.chart, []).append(j)
        labels, lifts, placements = [], [], []
        # keep the ball exactly round: the tile horizon is ragged (up to a
        # tile diameter deep), and stray far lifts create empty crescent
        # circles that pollute the euclidean Delaunay star near the rim
        cutoff = math.tanh(0.5 * radius)
        for t in tiles:
            for j in by_chart.get(t.chart, ()):
                w = t.placement(points[j].z)
                if abs(w) > cutoff:
                    continue
                labels.append(j)
                lifts.append(w)
                placements.append(t.placement)
        self.labels = labels
        self.lifts = lifts
        self.placements = placements
        # locate the trivial lift of the center (distance 0 from origin)
        self.center_pos = None
        for k, (j, w) in enumerate(zip(labels, lifts)):
            if j == center_idx and abs(w) < 1e-9:
                self.center_pos = k
        if self.center_pos is None:
            raise ConstructionFailure("center lift missing from its own ball")
        for k, w in enumerate(self.lifts):
            if k != self.center_pos and abs(w) < 1e-9:
                raise DomainError(
                    f"points {center_idx} and {labels[k]} coincide")


def _quant(z: complex) -> tuple:
    return (round(z.real, KEY_DECIMALS), round(z.imag, KEY_DECIMALS))


def _triangle_key(labels, lifts):
    """Deck-invariant canonical key of a lifted triangle (ccw corners)."""
    best = None
    for r in range(3):
        la = labels[r], labels[(r + 1) % 3], labels[(r + 2) % 3]
        za = lifts[r], lifts[(r + 1) % 3], lifts[(r + 2) % 3]
        f = G.Mobius.frame(za[0], G.direction(za[0], za[1])).inverse()
        key = (la[0], la[1], la[2], _quant(f(za[1])), _quant(f(za[2])))
        if best is None or key < best:
            best = key
    return best


def _edge_view(points, label_a, label_b, lift_b, placement_b):
    """The canonical unordered key of the surface edge between the center
    lift of label_a and the lift of label_b, as seen from a's frame."""
    seed_b = G.Mobius.translate_to(points[label_b].z).inverse()
    conv = seed_b @ placement_b.inverse()  # a-frame -> b-frame
    pos_a_in_b = conv(0.0)
    va = (label_a, _quant(lift_b))
    vb = (label_b, _quant(pos_a_in_b))
    return tuple(sorted((va, vb)))


class _StarBuilder:
    def __init__(self, atlas, points, fan_preference=None,
                 tol: G.Tolerance = G.DEFAULT_TOL):
        self.atlas = atlas
        self.points = points
        self.fan_preference = fan_preference
        self.tol = tol

    def _default_fan(self, poly_labels, poly_order):
        """Fan from the orbit-lexicographically minimal vertex."""
        def orbit_key(k):
            p = self.points[poly_labels[k]]
            return (p.chart, round(p.z.real, 12), round(p.z.imag, 12),
                    poly_labels[k])
        return poly_order[min(range(len(poly_order)),
                              key=lambda r: orbit_key(poly_order[r]))]

    def _fan_triangles(self, cloud, poly):
        """Canonical triangulation (list of corner index triples, ccw) of a
        cocircular polygon given by cloud indices."""
        pts = [cloud.lifts[k] for k in poly]
        ec = sum(pts) / len(pts)
        order = sorted(range(len(poly)),
                       key=lambda r: math.atan2((pts[r] - ec).imag,
                                                (pts[r] - ec).real))
        ordered = [poly[r] for r in order]
        labels = [cloud.labels[k] for k in ordered]
        apex_label = None
        if self.fan_preference is not None:
            apex_label = self.fan_preference(labels)
        if apex_label is not None and apex_label in labels:
            a_pos = labels.index(apex_label)
        else:
            poly_labels = {k: cloud.labels[k] for k in ordered}
            apex = self._default_fan(poly_labels, ordered)
            a_pos = ordered.index(apex)
        n = len(ordered)
        tris = []
        for r in range(1, n - 1):
            tris.append((ordered[a_pos], ordered[(a_pos + r) % n],
                         ordered[(a_pos + r + 1) % n]))
        return tris

    def star(self, i, r_start=1.0, r_max=8.0):
        """Star triangles of vertex i: list of (labels, lifts, placements)."""
        r = r_start
        while True:
            cloud = _Cloud(self.atlas, self.points, i, r)
            result = self._try_star(cloud, r)
            if result is not None:
                return result, cloud
            if r >= r_max:
                raise RadiusCap(f"star of vertex {i} not certified at "
                                f"radius cap {r_max}")
            r = min(2.0 * r, r_max)

    def _try_star(self, cloud, r):
        if len(cloud.lifts) < 3:
            return None
        arr = np.array([[w.real, w.imag] for w in cloud.lifts])
        try:
            dt = _EuclideanDelaunay(arr)
        except QhullError:
            return None  # degenerate small cloud (e.g. collinear); grow
        c = cloud.center_pos
        if len(dt.coplanar):
            # qhull dropped points; unsafe if any sit near the center
            for k in dt.coplanar[:, 0]:
                if G.dist(0.0, cloud.lifts[k]) < r - 0.1:
                    raise ConstructionFailure(
                        "euclidean Delaunay dropped a lift near the center",
                        witness=int(k))
        raw = [tuple(s) for s in dt.simplices if c in s]
        margin = 0.05
        tris = []
        degen_polys = {}
        for s in raw:
            pts = [cloud.lifts[k] for k in s]
            try:
                disk = G.circumdisk(*pts, self.tol)
            except NoCompactCircumdisk:
                return None  # circumdisk escapes: ball too small
            if 2.0 * disk.radius > r - margin:
                return None  # not certified; grow the ball
            # cocircularity scan
            on_circle = [k for k, w in enumerate(cloud.lifts)
                         if abs(G.dist(disk.center, w) - disk.radius)
                         <= DEGEN_TOL]
            if len(on_circle) > 3:
                degen_polys[tuple(sorted(on_circle))] = None
            else:
                tris.append(s)
        out = []
        seen = set()
        for s in tris:
            out.append(self._orient(cloud, s))
        for poly in degen_polys:
            for s in self._fan_triangles(cloud, list(poly)):
                if c in s and s not in seen:
                    seen.add(s)
                    out.append(self._orient(cloud, s))
        # closure: the star must wind all the way around the center, i.e.
        # every center-incident edge borders exactly two star triangles
        # (sparse sets can leave the center near the local hull otherwise)
        neighbor_use: dict = {}
        for s in out:
            for k in s:
                if k != c:
                    neighbor_use[k] = neighbor_use.get(k, 0) + 1
        if not out or any(n != 2 for n in neighbor_use.values()):
            return None  # partial star; grow the ball
        return out

    @staticmethod
    def _orient(cloud, s):
        a, b, cc_ = (cloud.lifts[k] for k in s)
        cross = ((b - a).real * (cc_ - a).imag - (b - a).imag * (cc_ - a).real)
        if cross < 0:
            s = (s[0], s[2], s[1])
        return s


def lifted_delaunay(atlas: SurfaceAtlas, points: list, r_start: float = 1.0,
                    r_max: float = 8.0, fan_preference=None,
                    tol: G.Tolerance = G.DEFAULT_TOL) -> TriComplex:
    """Delaunay triangulation of a point set on the surface.

    fan_preference, if given, maps the label list of a cocircular polygon
    to the label to fan from (or None to use the default canonical rule);
    it must depend only on the labels so the result stays Gamma-invariant.
    """
    if len(points) < 3:
        raise DomainError("need at least 3 points")
    builder = _StarBuilder(atlas, points, fan_preference, tol)
    tri_instances = {}   # key -> (labels, lifts, placements)
    stars = {}           # vertex -> set of keys
    for i in range(len(points)):
        star, cloud = builder.star(i, r_start, r_max)
        keys = set()
        for s in star:
            labels = tuple(cloud.labels[k] for k in s)
            lifts = tuple(cloud.lifts[k] for k in s)
            placements = tuple(cloud.placements[k] for k in s)
            key = _triangle_key(labels, lifts)
            keys.add(key)
            tri_instances.setdefault(key, (labels, lifts, placements))
        stars[i] = keys

    # star consistency: every triangle must appear in the star of each of
    # its (distinct) corner labels
    for key, (labels, _, _) in tri_instances.items():
        for l in set(labels):
            if key not in stars[l]:
                raise ConstructionFailure(
                    f"inconsistent stars: triangle {labels} missing at {l}",
                    witness=key)

    # assemble edges
    edge_index = {}
    edges = []
    triangles = []
    for key, (labels, lifts, placements) in tri_instances.items():
        ekeys = []
        for r in range(3):
            a, b = r, (r + 1) % 3
            # express corner b's tile in a's canonical centered frame; the
            # instance frame differs from it by the placement of a's tile
            seed_pa = G.Mobius.translate_to(points[labels[a]].z).inverse()
            to_a_frame = seed_pa @ placements[a].inverse()
            lift_b = to_a_frame(lifts[b])
            placement_b = to_a_frame @ placements[b]
            ek = _edge_view(points, labels[a], labels[b], lift_b, placement_b)
            if ek not in edge_index:
                edge_index[ek] = len(edges)
                edges.append(Edge(labels[a], labels[b], placement_b,
                                  G.dist(0.0, lift_b)))
            ekeys.append(edge_index[ek])
        triangles.append(Triangle(labels, lifts, placements, tuple(ekeys)))

    # each edge must border exactly two triangles
    use = {}
    for ti, t in enumerate(triangles):
        for ek in t.edge_keys:
            use.setdefault(ek, []).append(ti)
    for ek, tis in use.items():
        if len(tis) != 2:
            e = edges[ek]
            raise ConstructionFailure(
                f"edge ({e.u},{e.v}) borders {len(tis)} triangles",
                witness=(e.u, e.v, tis))

    tc = TriComplex(atlas, list(points), edges, triangles, atlas.genus)
    tc.euler_check()
    return tc


# ---------------------------------------------------------------------------
# thick-thin pipeline
# ---------------------------------------------------------------------------

@dataclass
class ThickThinResult:
    complex: TriComplex
    cylinders: list
    standard: list   # StandardTriangulation / StandardCycle per cylinder
    p1: list         # cylinder vertex indices
    p2: list         # net vertex indices


def thick_thin_triangulation(atlas: SurfaceAtlas, eps: float = 0.72,
                             delta: float | None = None) -> ThickThinResult:
    """Main construction: cylinder vertices plus a greedy thick
    net, triangulated by lifted_delaunay; asserts the standard triangles
    survive and the counting bounds hold."""
    from . import thickthin as TT
    cylinders = TT.detect_thin_part(atlas, eps)
    points = []
    standard = []
    quad_fans = {}  # frozenset of labels -> fan label
    p1 = []
    for cyl in cylinders:
        if cyl.kind == "thin":
            st = TT.standard_triangulation(atlas, cyl)
            idx = {}
            for name in TT._VERTEX_NAMES:
                idx[name] = len(points)
                points.append(st.vertices[name])
                p1.append(idx[name])
            standard.append((cyl, st, idx))
            for i in range(3):
                a, b = i + 1, (i + 1) % 3 + 1
                # the cocircular cylinder quads fan from the vertex that
                # reproduces the standard diagonals
                quad_fans[frozenset((idx[f"x{a}"], idx[f"x{b}"],
                                     idx[f"x{a}+"], idx[f"x{b}+"]))] = \
                    idx[f"x{a}"]
                quad_fans[frozenset((idx[f"x{a}-"], idx[f"x{b}-"],
                                     idx[f"x{a}"], idx[f"x{b}"]))] = \
                    idx[f"x{a}-"]
        else:
            cyc = TT.standard_cycle(atlas, cyl)
            idx = {}
            for name in ("x1", "x2", "x3"):
                idx[name] = len(points)
                points.append(cyc.vertices[name])
                p1.append(idx[name])
            standard.append((cyl, cyc, idx))

    net = TT.thick_net(atlas, cylinders, eps, delta)
    p2 = list(range(len(points), len(points) + len(net.points)))
    points.extend(net.points)

    def fan_preference(labels):
        return quad_fans.get(frozenset(labels))

    tc = lifted_delaunay(atlas, points, fan_preference=fan_preference)

    # Assertions from the construction's statement
    g = atlas.genus
    if len(points) > 151 * g:
        raise ConstructionFailure(
            f"vertex count {len(points)} exceeds 151g = {151*g}")
    if len(p1) > 27 * g - 27:
        raise ConstructionFailure(
            f"cylinder vertex count {len(p1)} exceeds 27g-27")
    triples = tc.label_triples()
    for cyl, st, idx in standard:
        if cyl.kind != "thin":
            continue
        for tri in st.triangles:
            want = frozenset(idx[n] for n in tri)
            if want not in triples:
                raise ConstructionFailure(
                    f"standard triangle {tri} missing from output",
                    witness=(cyl.length, tri))
    return ThickThinResult(tc, cylinders, standard, p1, p2)


# ---------------------------------------------------------------------------
# brute-force oracle (test support)
# ---------------------------------------------------------------------------

def brute_force_delaunay_keys(atlas: SurfaceAtlas, points: list,
                              radius: float = 3.0,
                              tol: float = 1e-9) -> set:
    """Canonical keys of every lifted triple with an empty circumdisk,
    found by exhaustive search around each vertex.  O(n^3 * lifts)."""
    keys = set()
    for i in range(len(points)):
        cloud = _Cloud(atlas, points, i, radius)
        n = len(cloud.lifts)
        c = cloud.center_pos
        arr = np.array(cloud.lifts)
        for a in range(n):
            if a == c:
                continue
            for b in range(a + 1, n):
                if b == c:
                    continue
                pts = (cloud.lifts[c], cloud.lifts[a], cloud.lifts[b])
                try:
                    disk = G.circumdisk(*pts)
                except (NoCompactCircumdisk, DegenerateTriangle):
                    continue
                if 2.0 * disk.radius > radius - 0.05:
                    continue  # not certifiable at this radius; skip
                d = G.dist_many(disk.center, arr)
                if np.all(d >= disk.radius - tol):
                    s = (c, a, b)
                    s = _StarBuilder._orient(cloud, s)
                    keys.add(_triangle_key(
                        tuple(cloud.labels[k] for k in s),
                        tuple(cloud.lifts[k] for k in s)))
    return keys


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def complex_to_json(tc: TriComplex) -> str:
    """Interchange format: vertices sorted by (chart, x, y); edges carry
    the coefficients of the placement realizing the second endpoint's lift
    in the first endpoint's centered frame."""
    order = sorted(range(len(tc.points)),
                   key=lambda i: _vertex_sort_key(tc.points[i]))
    rank = {old: new for new, old in enumerate(order)}
    verts = [[tc.points[i].chart, tc.points[i].z.real, tc.points[i].z.imag]
             for i in order]
    edges = []
    for e in sorted(tc.edges, key=lambda e: (rank[e.u], rank[e.v], e.length)):
        m = e.placement
        edges.append([rank[e.u], rank[e.v],
                      [m.a.real, m.a.imag, m.b.real, m.b.imag]])
    tris = sorted(sorted(rank[l] for l in t.labels) for t in tc.triangles)
    return json.dumps({"genus": tc.genus, "vertices": verts,
                       "edges": edges, "triangles": tris}, indent=1)


def complex_from_json(atlas: SurfaceAtlas, text: str) -> "LoadedComplex":
    d = json.loads(text)
    points = [T.SurfacePoint(int(c), complex(x, y))
              for c, x, y in d["vertices"]]
    edges = []
    for u, v, (ar, ai, br, bi) in d["edges"]:
        m = G.Mobius(complex(ar, ai), complex(br, bi), normalize=False)
        edges.append((int(u), int(v), m))
    tris = [tuple(int(x) for x in t) for t in d["triangles"]]
    return LoadedComplex(atlas, int(d["genus"]), points, edges, tris)


@dataclass
class LoadedComplex:
    """A triangulation as read back from the interchange format."""
    atlas: SurfaceAtlas
    genus: int
    points: list
    edges: list      # (u, v, Mobius)
    triangles: list  # sorted index triples
