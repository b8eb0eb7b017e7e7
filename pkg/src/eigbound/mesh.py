"""Conforming triangulations of polygonal domains.

Meshes are generated from a rectilinear tensor grid (or an ear-clipping
triangulation for general polygons) and refined by longest-edge bisection
(Rivara's LEPP algorithm), which keeps them conforming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class MeshError(RuntimeError):
    """Invalid mesh, polygon, or failed mesh operation."""


# -- polygons --------------------------------------------------------------------

def polygon_area(poly):
    """Signed area by the shoelace formula (positive for counterclockwise)."""
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def validate_polygon(poly):
    p = np.asarray(poly, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2 or p.shape[0] < 3:
        raise MeshError("polygon needs at least three 2D vertices")
    n = len(p)
    for i in range(n):
        a, b, c = p[i - 1], p[i], p[(i + 1) % n]
        if np.allclose(a, b):
            raise MeshError(f"repeated polygon vertex {i}")
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if abs(cross) <= 1e-14 * (np.linalg.norm(b - a) * np.linalg.norm(c - b)):
            raise MeshError(f"collinear consecutive vertices at polygon vertex {i}")
    if polygon_area(p) <= 0:
        raise MeshError("polygon must be counterclockwise with positive area")
    return p


def template_domain(kind, bar_width=0.40625, bar_length=1.0, layout="flush"):
    """Counterclockwise vertex list of one of the built-in domains.

    The dumbbell joins the unit squares [0,1]^2 and [1+L, 2+L] x [0,1] by a
    bar of width ``bar_width`` and length ``L``.  With ``layout="flush"`` the
    bar lies along the bottom edge (two re-entrant corners); ``"centered"``
    puts it at mid-height (four re-entrant corners).
    """
    if kind == "square":
        return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    if kind == "lshape":
        return np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])
    if kind == "dumbbell":
        w = float(bar_width)
        L = float(bar_length)
        if not 0.0 < w < 1.0:
            raise MeshError("bar width must lie in (0, 1)")
        if not L > 0.0:
            raise MeshError("bar length must be positive")
        a, b = 1.0, 1.0 + L
        if layout == "flush":
            return np.array([
                [0.0, 0.0], [b + 1.0, 0.0], [b + 1.0, 1.0], [b, 1.0], [b, w], [a, w], [a, 1.0], [0.0, 1.0],
            ])
        if layout == "centered":
            y0, y1 = 0.5 * (1.0 - w), 0.5 * (1.0 + w)
            return np.array([
                [0.0, 0.0], [a, 0.0], [a, y0], [b, y0], [b, 0.0], [b + 1.0, 0.0],
                [b + 1.0, 1.0], [b, 1.0], [b, y1], [a, y1], [a, 1.0], [0.0, 1.0],
            ])
        raise MeshError(f"unknown dumbbell layout {layout!r}")
    raise MeshError(f"unknown domain kind {kind!r}")


def reentrant_corners(poly):
    """Vertices with interior angle larger than pi."""
    p = np.asarray(poly, dtype=float)
    n = len(p)
    out = []
    for i in range(n):
        a, b, c = p[i - 1], p[i], p[(i + 1) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross < 0:
            out.append(b)
    return np.array(out).reshape(-1, 2)


def read_polygon(path):
    pts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                x, y = line.split()[:2]
                pts.append((float(x), float(y)))
    return validate_polygon(pts)


def _point_in_polygon(pt, poly):
    x, y = pt
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xs = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xs > x:
                inside = not inside
    return inside


def _is_rectilinear(poly):
    d = np.roll(poly, -1, axis=0) - poly
    return bool(np.all((d[:, 0] == 0) | (d[:, 1] == 0)))


# -- mesh type ----------------------------------------------------------------------

LOCAL_EDGES = ((1, 2), (2, 0), (0, 1))  # local edge i is opposite vertex i


class Mesh:
    """Triangulation with boundary edge markers.

    Parameters
    ----------
    vertices : (nv, 2) array_like
    triangles : (nt, 3) array_like of int
        Vertex indices with positive orientation.
    boundary_edges : (nb, 2) array_like of int, optional
        Defaults to the topological boundary.
    markers : (nb,) array_like of int, optional
    polygon : (m, 2) array_like, optional
        Domain outline, used for conformity checks.
    """

    def __init__(self, vertices, triangles, boundary_edges=None, markers=None, polygon=None):
        self.vertices = np.ascontiguousarray(vertices, dtype=float).reshape(-1, 2)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64).reshape(-1, 3)
        self.polygon = None if polygon is None else np.asarray(polygon, dtype=float)
        if boundary_edges is None:
            be = self.edges[self.edge_tris[:, 1] < 0]
            boundary_edges = be
            if markers is None:
                markers = self._default_markers(be)
        self.boundary_edges = np.asarray(boundary_edges, dtype=np.int64).reshape(-1, 2)
        if markers is None:
            markers = np.ones(len(self.boundary_edges), dtype=np.int64)
        self.markers = np.asarray(markers, dtype=np.int64).reshape(-1)

    def _default_markers(self, be):
        if self.polygon is None or len(be) == 0:
            return np.ones(len(be), dtype=np.int64)
        mid = 0.5 * (self.vertices[be[:, 0]] + self.vertices[be[:, 1]])
        poly = self.polygon
        out = np.ones(len(be), dtype=np.int64)
        for s in range(len(poly)):
            a, b = poly[s], poly[(s + 1) % len(poly)]
            t = b - a
            cross = (mid[:, 0] - a[0]) * t[1] - (mid[:, 1] - a[1]) * t[0]
            dot = (mid - a) @ t
            on = (np.abs(cross) <= 1e-12 * (t @ t)) & (dot >= 0) & (dot <= t @ t)
            out[on] = s + 1
        return out

    @property
    def nv(self):
        return len(self.vertices)

    @property
    def nt(self):
        return len(self.triangles)

    @cached_property
    def _edge_data(self):
        tri = self.triangles
        loc = np.array(LOCAL_EDGES)
        a = tri[:, loc[:, 0]]
        b = tri[:, loc[:, 1]]
        lo = np.minimum(a, b).ravel()
        hi = np.maximum(a, b).ravel()
        keys = lo * max(self.nv, 1) + hi
        uniq, inv = np.unique(keys, return_inverse=True)
        edges = np.stack([uniq // max(self.nv, 1), uniq % max(self.nv, 1)], axis=1)
        tri_edges = inv.reshape(-1, 3)
        sign = np.where(a < b, 1, -1)
        ne = len(edges)
        edge_tris = -np.ones((ne, 2), dtype=np.int64)
        counts = np.zeros(ne, dtype=np.int64)
        tri_ids = np.repeat(np.arange(self.nt), 3)
        for e, t in zip(inv, tri_ids):
            c = counts[e]
            if c >= 2:
                raise MeshError(f"edge {tuple(edges[e])} shared by more than two triangles")
            edge_tris[e, c] = t
            counts[e] = c + 1
        return edges, tri_edges, sign, edge_tris

    @property
    def edges(self):
        """(ne, 2) unique edges with ascending vertex indices."""
        return self._edge_data[0]

    @property
    def tri_edges(self):
        """(nt, 3) global edge of local edge i (opposite vertex i)."""
        return self._edge_data[1]

    @property
    def edge_signs(self):
        """(nt, 3) +1 where the counterclockwise local edge runs low to high index."""
        return self._edge_data[2]

    @property
    def edge_tris(self):
        """(ne, 2) adjacent triangles; -1 marks a missing neighbour."""
        return self._edge_data[3]

    @cached_property
    def boundary_edge_ids(self):
        e = self.boundary_edges
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        keys = self.edges[:, 0] * max(self.nv, 1) + self.edges[:, 1]
        bkeys = lo * max(self.nv, 1) + hi
        idx = np.searchsorted(keys, bkeys)
        if np.any(idx >= len(keys)) or np.any(keys[np.minimum(idx, len(keys) - 1)] != bkeys):
            raise MeshError("boundary edge not present in the triangulation")
        return idx

    @cached_property
    def is_boundary_edge(self):
        mask = np.zeros(len(self.edges), dtype=bool)
        mask[self.boundary_edge_ids] = True
        return mask

    @cached_property
    def boundary_vertices(self):
        return np.unique(self.boundary_edges.ravel())

    @cached_property
    def areas(self):
        p = self.vertices[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @cached_property
    def edge_lengths(self):
        d = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    @cached_property
    def h_elements(self):
        """Longest edge length of every triangle."""
        return self.edge_lengths[self.tri_edges].max(axis=1)

    @property
    def h_max(self):
        return float(self.h_elements.max())

    @cached_property
    def centroids(self):
        return self.vertices[self.triangles].mean(axis=1)

    @cached_property
    def boundary_edge_count(self):
        """Number of boundary edges of every triangle."""
        return self.is_boundary_edge[self.tri_edges].sum(axis=1)

    def boundary_elements(self):
        """Triangles touching the boundary with an edge, their (single) local
        boundary edge, and the height relative to that edge.

        Returns
        -------
        tris : ndarray of int
        local_edge : ndarray of int
        heights : ndarray
            ``H_K = 2 |K| / |e|``.
        """
        cnt = self.boundary_edge_count
        tris = np.nonzero(cnt > 0)[0]
        if np.any(cnt[tris] != 1):
            raise MeshError("a boundary element has more than one boundary edge")
        local = np.argmax(self.is_boundary_edge[self.tri_edges[tris]], axis=1)
        elen = self.edge_lengths[self.tri_edges[tris, local]]
        return tris, local, 2.0 * self.areas[tris] / elen

    def boundary_sides(self):
        """``(tris, local_edge)`` for every boundary edge (corner elements repeat)."""
        ib = np.nonzero(self.is_boundary_edge[self.tri_edges])
        return ib[0], ib[1]

    def __repr__(self):
        return f"Mesh(nv={self.nv}, nt={self.nt}, nb={len(self.boundary_edges)}, h_max={self.h_max:.4g})"


def check_mesh(mesh, area=None):
    """Raise :class:`MeshError` unless the mesh satisfies all invariants."""
    if mesh.nt == 0:
        raise MeshError("mesh has no triangles")
    if np.any(mesh.areas <= 0):
        bad = int(np.nonzero(mesh.areas <= 0)[0][0])
        raise MeshError(f"triangle {bad} has non-positive signed area")
    edge_tris = mesh.edge_tris
    topo = np.nonzero(edge_tris[:, 1] < 0)[0]
    ids = mesh.boundary_edge_ids
    if len(np.unique(ids)) != len(ids):
        raise MeshError("boundary edge listed twice")
    if not np.array_equal(np.sort(ids), topo):
        raise MeshError("boundary edge list does not match the topological boundary (hanging node?)")
    if mesh.polygon is not None:
        poly = mesh.polygon
        a = polygon_area(poly)
        if abs(mesh.areas.sum() - a) > 1e-12 * abs(a):
            raise MeshError("element areas do not add up to the polygon area")
        perim = float(np.sum(np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1)))
        blen = float(mesh.edge_lengths[ids].sum())
        if abs(blen - perim) > 1e-10 * perim:
            raise MeshError("boundary length differs from the polygon perimeter (hanging node?)")
    elif area is not None and abs(mesh.areas.sum() - area) > 1e-12 * abs(area):
        raise MeshError("element areas do not add up to the domain area")
    return True


# -- generators -----------------------------------------------------------------------

def uniform_square(N):
    """N x N grid on the unit square; every cell split by the same diagonal."""
    N = int(N)
    if N < 1:
        raise MeshError("N must be a positive integer")
    g = np.linspace(0.0, 1.0, N + 1)
    g[-1] = 1.0
    X, Y = np.meshgrid(g, g, indexing="xy")
    verts = np.stack([X.ravel(), Y.ravel()], axis=1)
    tris = _grid_triangles(N, N, np.ones((N, N), dtype=bool))
    mesh = Mesh(verts, tris, polygon=template_domain("square"))
    check_mesh(mesh)
    return mesh


def _grid_triangles(nx, ny, keep):
    tris = []
    idx = lambda i, j: j * (nx + 1) + i  # noqa: E731
    for j in range(ny):
        for i in range(nx):
            if not keep[j, i]:
                continue
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return np.array(tris, dtype=np.int64).reshape(-1, 3)


def _breakpoints(values, step):
    vals = np.unique(values)
    out = [vals[0]]
    for a, b in zip(vals[:-1], vals[1:]):
        m = max(1, int(math.ceil((b - a) / step - 1e-12)))
        for k in range(1, m):
            out.append(a + (b - a) * k / m)
        out.append(b)
    return np.array(out)


def grid_mesh(poly, h_max):
    """Tensor-grid triangulation of a rectilinear polygon with cell diagonals
    not exceeding ``h_max``."""
    poly = validate_polygon(poly)
    if not _is_rectilinear(poly):
        raise MeshError("grid meshing needs an axis-aligned polygon")
    step = h_max / math.sqrt(2.0)
    xs = _breakpoints(poly[:, 0], step)
    ys = _breakpoints(poly[:, 1], step)
    nx, ny = len(xs) - 1, len(ys) - 1
    keep = np.zeros((ny, nx), dtype=bool)
    for j in range(ny):
        for i in range(nx):
            c = (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
            keep[j, i] = _point_in_polygon(c, poly)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    verts = np.stack([X.ravel(), Y.ravel()], axis=1)
    tris = _grid_triangles(nx, ny, keep)
    used = np.unique(tris)
    remap = -np.ones(len(verts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    mesh = Mesh(verts[used], remap[tris], polygon=poly)
    check_mesh(mesh)
    return mesh


def ear_clip(poly):
    """Triangulate a simple counterclockwise polygon by ear clipping."""
    poly = validate_polygon(poly)
    idx = list(range(len(poly)))
    tris = []

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * len(poly) ** 2:
            raise MeshError("ear clipping failed; polygon not simple?")
        for k in range(len(idx)):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            a, b, c = poly[i0], poly[i1], poly[i2]
            if cross(a, b, c) <= 0:
                continue
            ok = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                p = poly[j]
                if cross(a, b, p) >= 0 and cross(b, c, p) >= 0 and cross(c, a, p) >= 0:
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                del idx[k]
                break
    tris.append(tuple(idx))
    mesh = Mesh(poly, tris, polygon=poly)
    check_mesh(mesh)
    return mesh


@dataclass
class SizeField:
    """Target element size ``h_max * min(1, (r / cutoff) ** exponent)`` where
    ``r`` is the distance from the element centroid to the nearest corner."""

    h_max: float
    corners: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    exponent: float = 1.0 / 3.0
    cutoff: float = 1.0

    def __post_init__(self):
        self.corners = np.asarray(self.corners, dtype=float).reshape(-1, 2)
        if not self.h_max > 0:
            raise MeshError("h_max must be positive")
        if not 0.0 < self.exponent <= 1.0:
            raise MeshError("grading exponent must lie in (0, 1]")
        if not self.cutoff > 0:
            raise MeshError("cutoff radius must be positive")

    def target(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if len(self.corners) == 0:
            return np.full(len(pts), self.h_max)
        d = np.sqrt(((pts[:, None, :] - self.corners[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
        return self.h_max * np.minimum(1.0, (d / self.cutoff) ** self.exponent)

    def violations(self, mesh):
        return np.nonzero(mesh.h_elements > self.target(mesh.centroids))[0]


class _Bisector:
    """Mutable triangulation supporting conforming edge bisection."""

    def __init__(self, mesh):
        self.xy = [tuple(v) for v in mesh.vertices.tolist()]
        self.tris = {}
        self.edge_tris = {}
        self.marks = {}
        self.polygon = mesh.polygon
        for t, tri in enumerate(mesh.triangles.tolist()):
            self._add(t, tuple(tri))
        self.next_id = mesh.nt
        for (a, b), m in zip(mesh.boundary_edges.tolist(), mesh.markers.tolist()):
            self.marks[(min(a, b), max(a, b))] = m

    @staticmethod
    def _key(a, b):
        return (a, b) if a < b else (b, a)

    def _add(self, t, tri):
        self.tris[t] = tri
        for i in range(3):
            self.edge_tris.setdefault(self._key(tri[i], tri[(i + 1) % 3]), []).append(t)

    def _remove(self, t):
        tri = self.tris.pop(t)
        for i in range(3):
            k = self._key(tri[i], tri[(i + 1) % 3])
            lst = self.edge_tris[k]
            lst.remove(t)
            if not lst:
                del self.edge_tris[k]
        return tri

    def _len2(self, key):
        (x0, y0), (x1, y1) = self.xy[key[0]], self.xy[key[1]]
        return (x1 - x0) ** 2 + (y1 - y0) ** 2

    def longest(self, t):
        tri = self.tris[t]
        keys = [self._key(tri[i], tri[(i + 1) % 3]) for i in range(3)]
        return max(keys, key=lambda k: (self._len2(k), k))

    def split_edge(self, key):
        a, b = key
        (x0, y0), (x1, y1) = self.xy[a], self.xy[b]
        m = len(self.xy)
        self.xy.append((0.5 * (x0 + x1), 0.5 * (y0 + y1)))
        for t in list(self.edge_tris.get(key, [])):
            tri = self._remove(t)
            r = 0
            while self._key(tri[r], tri[(r + 1) % 3]) != key:
                r += 1
            p, q, s = tri[r], tri[(r + 1) % 3], tri[(r + 2) % 3]
            self._add(self.next_id, (p, m, s))
            self._add(self.next_id + 1, (m, q, s))
            self.next_id += 2
        if key in self.marks:
            mk = self.marks.pop(key)
            self.marks[self._key(a, m)] = mk
            self.marks[self._key(m, b)] = mk
        return m

    def refine(self, t):
        """Longest-edge bisection of ``t`` with LEPP closure."""
        guard = 0
        while t in self.tris:
            guard += 1
            if guard > 10000:
                raise MeshError(f"bisection of element {t} does not terminate")
            cur = t
            while True:
                e = self.longest(cur)
                nbrs = [x for x in self.edge_tris[e] if x != cur]
                if not nbrs or self.longest(nbrs[0]) == e:
                    self.split_edge(e)
                    break
                cur = nbrs[0]

    def to_mesh(self):
        tris = np.array(list(self.tris.values()), dtype=np.int64).reshape(-1, 3)
        be = sorted(self.marks.items())
        edges = np.array([k for k, _ in be], dtype=np.int64).reshape(-1, 2)
        marks = np.array([v for _, v in be], dtype=np.int64)
        return Mesh(np.array(self.xy), tris, edges, marks, polygon=self.polygon)


def refine_graded(mesh, field, max_rounds=200):
    """Bisect elements until ``h_K <= field.target(centroid)`` everywhere."""
    work = _Bisector(mesh)
    cur = mesh
    for _ in range(max_rounds):
        bad = field.violations(cur)
        if len(bad) == 0:
            check_mesh(cur)
            return cur
        ids = list(work.tris.keys())
        for b in bad:
            work.refine(ids[b])
        cur = work.to_mesh()
    bad = field.violations(cur)
    raise MeshError(f"graded refinement did not terminate; element {int(bad[0])} still too large")


def is_steklov_compatible(mesh):
    """True iff every boundary element has exactly one boundary edge."""
    return bool(np.all(mesh.boundary_edge_count <= 1))


def steklov_compatible(mesh, max_rounds=100):
    """Return ``(was_compatible, fixed_mesh)``.

    Elements with two or more boundary edges are split through the
    midpoint of an interior edge (the neighbour across it is split at the
    same point, which keeps the mesh conforming).
    """
    if is_steklov_compatible(mesh):
        return True, mesh
    work = _Bisector(mesh)
    cur = mesh
    for _ in range(max_rounds):
        cnt = cur.boundary_edge_count
        bad = np.nonzero(cnt >= 2)[0]
        if len(bad) == 0:
            check_mesh(cur)
            return False, cur
        ids = list(work.tris.keys())
        for b in bad:
            t = ids[b]
            if t not in work.tris:
                continue
            tri = work.tris[t]
            keys = [work._key(tri[i], tri[(i + 1) % 3]) for i in range(3)]
            interior = [k for k in keys if k not in work.marks]
            pool = interior if interior else keys
            work.split_edge(max(pool, key=lambda k: (work._len2(k), k)))
        cur = work.to_mesh()
    raise MeshError("Steklov fixup did not terminate")


def generate_mesh(poly, h_max, corners=None, exponent=1.0 / 3.0, cutoff=1.0):
    """Mesh a polygon with maximal edge length ``h_max``, graded towards
    ``corners`` (``"auto"`` selects the re-entrant corners)."""
    poly = validate_polygon(poly)
    if isinstance(corners, str):
        if corners != "auto":
            raise MeshError(f"unknown grading corners {corners!r}")
        corners = reentrant_corners(poly)
    if corners is None:
        corners = np.zeros((0, 2))
    if _is_rectilinear(poly):
        base = grid_mesh(poly, h_max)
    else:
        base = ear_clip(poly)
    return refine_graded(base, SizeField(h_max, corners, exponent, cutoff))


# -- text format ---------------------------------------------------------------------------

def write_mesh(mesh, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_mesh(mesh))


def format_mesh(mesh):
    lines = [f"{mesh.nv} {mesh.nt} {len(mesh.boundary_edges)}"]
    lines += [f"{x:.17g} {y:.17g}" for x, y in mesh.vertices.tolist()]
    lines += [f"{i} {j} {k}" for i, j, k in mesh.triangles.tolist()]
    lines += [f"{i} {j} {m}" for (i, j), m in zip(mesh.boundary_edges.tolist(), mesh.markers.tolist())]
    return "\n".join(lines) + "\n"


def parse_mesh(text):
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        nv, nt, nb = (int(v) for v in rows[0])
        verts = np.array([[float(a), float(b)] for a, b in rows[1:1 + nv]])
        tris = np.array([[int(v) for v in r] for r in rows[1 + nv:1 + nv + nt]], dtype=np.int64)
        bnd = np.array([[int(v) for v in r] for r in rows[1 + nv + nt:1 + nv + nt + nb]], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise MeshError(f"malformed mesh file: {exc}") from exc
    if len(verts) != nv or len(tris) != nt or len(bnd) != nb:
        raise MeshError("mesh file shorter than its header announces")
    bnd = bnd.reshape(-1, 3)
    mesh = Mesh(verts, tris, bnd[:, :2], bnd[:, 2])
    check_mesh(mesh)
    return mesh


def read_mesh(path):
    with open(path, encoding="utf-8") as fh:
        return parse_mesh(fh.read())
