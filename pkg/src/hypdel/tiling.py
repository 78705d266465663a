"""Chart complexes and universal-cover tilings.

A closed surface is presented as an atlas of convex geodesic polygons
("charts") with side-crossing transitions.  A *tile* is a chart together
with a placement isometry into the disk; breadth-first crossing of sides
develops the universal cover around any base point.  All queries recenter
their base point at the origin first, since placements far from 0 lose
precision quickly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry as G
from .errors import DomainError, RadiusCap

WORD_CAP = 64  # maximum number of side crossings in any development


def karcher_mean(points: list[complex], iters: int = 40) -> complex:
    """Intrinsic mean of disk points; lies in their convex hull."""
    z = points[0]
    for _ in range(iters):
        f = G.Mobius.translate_to(z)
        fi = f.inverse()
        v = 0.0 + 0.0j
        for p in points:
            w = fi(p)
            aw = abs(w)
            if aw > 1e-15:
                v += (w / aw) * (2.0 * math.atanh(aw))
        v /= len(points)
        step = abs(v)
        z = f(cmath.rect(math.tanh(0.5 * step), cmath.phase(v))) if step > 0 else z
        if step < 1e-14:
            break
    return z


class Chart:
    """Convex geodesic polygon with per-side transition candidates.

    Side i runs from vertices[i] to vertices[i+1] (indices mod n, ccw).
    transitions[i] is a list of (chart_index, T) pairs: crossing side i of
    a tile placed by M can land in a tile (chart_index, M @ T).  Several
    candidates per side are allowed when the neighbouring charts subdivide
    the side differently on the far side of a gluing curve.
    """

    def __init__(self, vertices: list[complex], label: str = ""):
        if len(vertices) < 3:
            raise DomainError("chart needs at least 3 vertices")
        self.vertices = [G.check_in_disk(v) for v in vertices]
        self.label = label
        n = len(vertices)
        self.transitions: list[list[tuple[int, G.Mobius]]] = [[] for _ in range(n)]
        self.side_frames = []
        self.side_lengths = []
        for i in range(n):
            p, q = vertices[i], vertices[(i + 1) % n]
            self.side_frames.append(G.Mobius.frame(p, G.direction(p, q)))
            self.side_lengths.append(G.dist(p, q))
        self.center = karcher_mean(self.vertices)
        self.diameter = max(G.dist(p, q) for i, p in enumerate(vertices)
                            for q in vertices[i + 1:])
        self.center_radius = max(G.dist(self.center, v) for v in vertices)

    @property
    def n_sides(self) -> int:
        return len(self.vertices)

    def add_transition(self, side: int, chart_index: int, t: G.Mobius):
        self.transitions[side].append((chart_index, t))

    def side_signs(self, z: complex) -> list[float]:
        """Per side: >0 strictly inside the supporting half-plane."""
        return [fr.inverse()(z).imag for fr in self.side_frames]

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return all(s >= -tol for s in self.side_signs(z))

    def dist_to_boundary_from_outside(self, z: complex) -> float:
        """Distance from z to the polygon (0 if inside)."""
        if self.contains(z):
            return 0.0
        return min(G.dist_to_segment(z, fr, L)
                   for fr, L in zip(self.side_frames, self.side_lengths))


class ChartComplex:
    """A closed surface as a finite list of glued charts."""

    def __init__(self, charts: list[Chart]):
        self.charts = charts

    def check_reciprocal(self, tol: float = 1e-8):
        """Every transition must appear with its inverse on the far chart."""
        for ci, c in enumerate(self.charts):
            for side in range(c.n_sides):
                for cj, t in c.transitions[side]:
                    ti = t.inverse()
                    other = self.charts[cj]
                    ok = any(
                        ck == ci and _mob_close(u, ti, tol)
                        for s2 in range(other.n_sides)
                        for ck, u in other.transitions[s2]
                    )
                    if not ok:
                        raise DomainError(
                            f"transition on chart {ci} side {side} -> {cj} "
                            f"has no reciprocal")

    def area(self) -> float:
        return sum(_polygon_area(c) for c in self.charts)


def _polygon_area(c: Chart) -> float:
    # Gauss-Bonnet: area = (n-2)*pi - sum of interior angles
    n = c.n_sides
    total = 0.0
    for i in range(n):
        prev = c.vertices[(i - 1) % n]
        nxt = c.vertices[(i + 1) % n]
        a1 = G.direction(c.vertices[i], prev)
        a2 = G.direction(c.vertices[i], nxt)
        ang = abs((a1 - a2 + math.pi) % (2 * math.pi) - math.pi)
        total += ang
    return (n - 2) * math.pi - total


def _mob_close(m1: G.Mobius, m2: G.Mobius, tol: float) -> bool:
    k1, k2 = m1.key(), m2.key()
    return all(abs(a - b) < tol for a, b in zip(k1, k2))


@dataclass
class Tile:
    chart: int
    placement: G.Mobius
    depth: int = 0


_BUCKET = 1e-5
_MATCH_TOL = 1e-7


class _TileStore:
    """Dedup store for tiles keyed by (chart, sign-normalized placement)."""

    def __init__(self):
        self.tiles: list[Tile] = []
        self._buckets: dict = {}

    def _bucket_keys(self, chart: int, key: tuple):
        lo = [math.floor((v - _MATCH_TOL) / _BUCKET) for v in key]
        hi = [math.floor((v + _MATCH_TOL) / _BUCKET) for v in key]
        out = []
        for k0 in {lo[0], hi[0]}:
            for k1 in {lo[1], hi[1]}:
                for k2 in {lo[2], hi[2]}:
                    for k3 in {lo[3], hi[3]}:
                        out.append((chart, k0, k1, k2, k3))
        return out

    def add(self, chart: int, placement: G.Mobius, depth: int):
        key = placement.key()
        bks = self._bucket_keys(chart, key)
        for bk in bks:
            for idx in self._buckets.get(bk, ()):
                t = self.tiles[idx]
                k2 = t.placement.key()
                if all(abs(a - b) < _MATCH_TOL for a, b in zip(key, k2)):
                    return idx, False
        idx = len(self.tiles)
        self.tiles.append(Tile(chart, placement, depth))
        self._buckets.setdefault(bks[0], []).append(idx)
        return idx, True


def _tile_ball_distance(cc: ChartComplex, tile: Tile, center: complex) -> float:
    """Distance from center to the placed polygon of the tile."""
    c = cc.charts[tile.chart]
    z = tile.placement.inverse()(center)
    if abs(z) >= 1.0 - G.BOUNDARY_GUARD:
        # center unreachable in this tile's local frame: definitely far
        return math.inf
    return c.dist_to_boundary_from_outside(z)


def ball_tiles(cc: ChartComplex, seed_chart: int, seed_placement: G.Mobius,
               radius: float, center: complex = 0.0, depth_cap: int = WORD_CAP,
               store: _TileStore | None = None) -> list[Tile]:
    """All tiles of the development meeting the closed ball B(center, radius).

    Breadth-first over side crossings starting from the seed tile.  Tiles
    and the ball are convex, so every tile meeting the ball is reachable
    through a chain of tiles meeting the ball; the frontier may therefore
    be pruned to tiles within the radius.
    """
    if store is None:
        store = _TileStore()
    idx0, _ = store.add(seed_chart, seed_placement, 0)
    if _tile_ball_distance(cc, store.tiles[idx0], center) > radius:
        return []
    out = [idx0]
    frontier = [idx0]
    while frontier:
        new_frontier = []
        for ti in frontier:
            tile = store.tiles[ti]
            if tile.depth >= depth_cap:
                raise RadiusCap(
                    f"development exceeded {depth_cap} side crossings "
                    f"within radius {radius}")
            ch = cc.charts[tile.chart]
            for side in range(ch.n_sides):
                for cj, t in ch.transitions[side]:
                    m = tile.placement @ t
                    idx, new = store.add(cj, m, tile.depth + 1)
                    if not new:
                        continue
                    if _tile_ball_distance(cc, store.tiles[idx], center) <= radius:
                        out.append(idx)
                        new_frontier.append(idx)
        frontier = new_frontier
    return [store.tiles[i] for i in out]


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the surface in chart-local coordinates."""
    chart: int
    z: complex


def lift_ball(cc: ChartComplex, base: SurfacePoint, radius: float,
              depth_cap: int = WORD_CAP) -> list[Tile]:
    """Tiles meeting B(0, radius) with the base point recentered at 0.

    The seed tile is base.chart placed by translate_to(base.z)^-1, so the
    base point sits at the origin and all returned placements are well
    conditioned out to the given radius.
    """
    seed = G.Mobius.translate_to(base.z).inverse()
    return ball_tiles(cc, base.chart, seed, radius, 0.0, depth_cap)


def lifts_of_point(tiles: list[Tile], p: SurfacePoint) -> list[complex]:
    return [t.placement(p.z) for t in tiles if t.chart == p.chart]


def surface_distance(cc: ChartComplex, p: SurfacePoint, q: SurfacePoint,
                     r_max: float = 8.0, r_start: float = 1.0) -> float:
    """Length of the shortest path between two surface points.

    Grows a lift ball around p until the nearest lift of q is closer than
    the ball radius; that lift then realizes the global minimum.
    """
    r = r_start
    while True:
        tiles = lift_ball(cc, p, r)
        best = math.inf
        for t in tiles:
            if t.chart == q.chart:
                best = min(best, G.dist(0.0, t.placement(q.z)))
        if best <= r:
            return best
        if r >= r_max:
            raise RadiusCap(f"no path found within radius cap {r_max}")
        r = min(max(2.0 * r, best + 0.1), r_max)


def injectivity_radius_bound(cc: ChartComplex, p: SurfacePoint,
                             radius: float) -> float:
    """Shortest nontrivial geodesic loop through p, capped at 2*radius.

    Looks at all pairs of lifts of p inside B(0, radius); returns the
    smallest positive distance between distinct lifts (inf if none).
    """
    tiles = lift_ball(cc, p, radius)
    lifts = lifts_of_point(tiles, p)
    best = math.inf
    for i, a in enumerate(lifts):
        for b in lifts[i + 1:]:
            d = G.dist(a, b)
            if d > 1e-9:
                best = min(best, d)
    return best


def deck_elements_near(cc: ChartComplex, chart: int, radius: float,
                       depth_cap: int = WORD_CAP) -> list[G.Mobius]:
    """Nontrivial deck elements g with g(chart tile) meeting B(center, radius).

    Works in coordinates recentered at the chart's intrinsic center.  Every
    returned element moves the base copy of the chart to another tile of
    the development inside the ball.
    """
    ch = cc.charts[chart]
    seed = G.Mobius.translate_to(ch.center).inverse()
    tiles = ball_tiles(cc, chart, seed, radius, 0.0, depth_cap)
    seed_inv = seed.inverse()
    out = []
    for t in tiles:
        if t.chart != chart:
            continue
        g = t.placement @ seed_inv
        # skip the base tile itself
        if g.is_identity(1e-8):
            continue
        out.append(g)
    return out


def locate(cc: ChartComplex, chart: int, z: complex,
           tol: float = 1e-9) -> SurfacePoint:
    """Re-express a point near (possibly outside) a chart in a chart that
    actually contains it, by crossing violated sides greedily."""
    for _ in range(WORD_CAP):
        ch = cc.charts[chart]
        signs = ch.side_signs(z)
        worst = min(range(ch.n_sides), key=lambda i: signs[i])
        if signs[worst] >= -tol:
            return SurfacePoint(chart, z)
        moved = False
        for cj, t in ch.transitions[worst]:
            w = t.inverse()(z)
            if cc.charts[cj].contains(w, 1e-6):
                chart, z = cj, w
                moved = True
                break
        if not moved:
            # cross anyway with the first candidate and keep walking
            cj, t = ch.transitions[worst][0]
            chart, z = cj, t.inverse()(z)
    raise DomainError("point location walk did not terminate")
