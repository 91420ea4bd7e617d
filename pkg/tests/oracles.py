"""Independent reference implementations used only to check the library.

Everything here is deliberately written from first principles (plane
projections, heap Dijkstra, BFS over an adjacency dict) so it shares no
code path with the implementations under test.
"""
from __future__ import annotations

import heapq
from collections import defaultdict

import numpy as np


def segment_distance(a, b, p):
    """Distance from p to segment ab, via clamped parametric projection."""
    ab = b - a
    denom = float(np.dot(ab, ab))
    t = 0.0 if denom == 0.0 else float(np.dot(p - a, ab)) / denom
    t = min(max(t, 0.0), 1.0)
    q = a + t * ab
    return float(np.linalg.norm(p - q)), q


def point_triangle_distance(tri, p):
    """Point-to-triangle distance: plane foot if inside, else edge minimum."""
    a, b, c = tri
    n = np.cross(b - a, c - a)
    nn = float(np.dot(n, n))
    if nn > 0:
        foot = p - n * (np.dot(p - a, n) / nn)
        # inside test by consistent cross-product orientation
        s1 = np.dot(np.cross(b - a, foot - a), n)
        s2 = np.dot(np.cross(c - b, foot - b), n)
        s3 = np.dot(np.cross(a - c, foot - c), n)
        if s1 >= -1e-12 * nn and s2 >= -1e-12 * nn and s3 >= -1e-12 * nn:
            return float(np.linalg.norm(p - foot)), foot
    best = (np.inf, None)
    for u, v in ((a, b), (b, c), (c, a)):
        d, q = segment_distance(u, v, p)
        if d < best[0]:
            best = (d, q)
    return best


def exhaustive_nearest(vertices, triangles, p):
    """Nearest point on a triangle soup by looping over every triangle."""
    best = (np.inf, None, -1)
    for t, tri in enumerate(triangles):
        d, q = point_triangle_distance(vertices[tri], p)
        if d < best[0]:
            best = (d, q, t)
    return best


def bfs_rings(triangles, seed, k):
    """Vertices within [1, k] hops of seed over the edge graph (BFS)."""
    neighbors = defaultdict(set)
    for tri in triangles:
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            neighbors[a].add(b)
            neighbors[b].add(a)
    seen = {seed}
    frontier = [seed]
    out = set()
    for _ in range(k):
        nxt = []
        for v in frontier:
            for w in neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    out.add(w)
        frontier = nxt
    return out


def heap_dijkstra(vertices, triangles, source):
    """Textbook binary-heap Dijkstra over Euclidean edge weights."""
    adj = defaultdict(list)
    seen_edges = set()
    for tri in triangles:
        for i in range(3):
            a, b = int(tri[i]), int(tri[(i + 1) % 3])
            key = (min(a, b), max(a, b))
            if key in seen_edges:
                continue
            seen_edges.add(key)
            w = float(np.linalg.norm(vertices[a] - vertices[b]))
            adj[a].append((b, w))
            adj[b].append((a, w))
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist.get(v, np.inf):
            continue
        for w, length in adj[v]:
            nd = d + length
            if nd < dist.get(w, np.inf):
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def chamfer_loops(a, b):
    """O(n^2) symmetric mean squared nearest-neighbor distance."""
    d_ab = [min(float(np.sum((p - q) ** 2)) for q in b) for p in a]
    d_ba = [min(float(np.sum((p - q) ** 2)) for q in a) for p in b]
    return 0.5 * (sum(d_ab) / len(d_ab) + sum(d_ba) / len(d_ba))


def grid_mesh(nx=8, ny=8, z=0.0, scale=1.0):
    """Regular triangulated grid in the z-plane. Returns (vertices, tris)."""
    xs, ys = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    verts = np.stack([xs.ravel() * scale, ys.ravel() * scale,
                      np.full(nx * ny, z)], axis=1).astype(float)
    tris = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            v00 = i * ny + j
            v10 = (i + 1) * ny + j
            v01 = i * ny + j + 1
            v11 = (i + 1) * ny + j + 1
            tris.append((v00, v10, v11))
            tris.append((v00, v11, v01))
    return verts, np.asarray(tris, dtype=np.int64)


def icosphere(subdiv=2, radius=1.0):
    """Icosahedron subdivision sphere. Returns (vertices, triangles)."""
    t = (1.0 + 5 ** 0.5) / 2.0
    verts = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [v for v in verts]
    cache = {}

    def midpoint(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            m = (verts[i] + verts[j]) / 2.0
            m /= np.linalg.norm(m)
            cache[key] = len(verts)
            verts.append(m)
        return cache[key]

    for _ in range(subdiv):
        nxt = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            nxt += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = nxt
    return np.asarray(verts) * radius, np.asarray(faces, dtype=np.int64)
