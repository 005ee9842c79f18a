"""Shared fixtures and random instance generators."""

from __future__ import annotations

import math

import numpy as np
import pytest

from phtdist.complexes import Complex, Simplex


def make_complex(dim, vertices, simplex_ids):
    return Complex(dim, vertices, [Simplex(tuple(sorted(s))) for s in simplex_ids])


def single_vertex(coords):
    coords = list(coords)
    return make_complex(len(coords), [coords], [(0,)])


def hollow_triangle(offset=(0.0, 0.0), scale=1.0):
    o = np.asarray(offset, dtype=float)
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]) * scale + o
    return make_complex(2, verts, [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)])


def filled_triangle(offset=(0.0, 0.0)):
    o = np.asarray(offset, dtype=float)
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]) + o
    return make_complex(
        2, verts, [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    )


def tetra_boundary(offset=(0.0, 0.0, 0.0)):
    o = np.asarray(offset, dtype=float)
    verts = (
        np.array(
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        )
        + o
    )
    simp = [(i,) for i in range(4)]
    simp += [(a, b) for a in range(4) for b in range(a + 1, 4)]
    simp += [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    return make_complex(3, verts, simp)


def _segments_cross(p, q, r, s):
    """Proper crossing test for segments pq and rs sharing no endpoint."""

    def orient(a, b, c):
        val = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(val) < 1e-12:
            return 0
        return 1 if val > 0 else -1

    o1, o2 = orient(p, q, r), orient(p, q, s)
    o3, o4 = orient(r, s, p), orient(r, s, q)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def random_complex_2d(rng, n_simplices, scale=1.0, triangles=True):
    """Random planar complex with roughly ``n_simplices`` simplices.

    Vertices are drawn in a disk; edges are added greedily without proper
    crossings (so the straight-line complex is honestly embedded), and empty
    triangles may be filled.  Always face-closed.
    """
    n_simplices = max(1, int(n_simplices))
    nv = max(1, int(round(n_simplices * 0.45)))
    pts = rng.normal(size=(nv, 2))
    pts = pts / np.maximum(1.0, np.sqrt((pts**2).sum(axis=1)))[:, None]
    pts = pts * scale + rng.normal(scale=0.25 * scale, size=(nv, 2))
    simplices = [(i,) for i in range(nv)]
    budget = n_simplices - nv
    edges = []
    candidates = [(a, b) for a in range(nv) for b in range(a + 1, nv)]
    rng.shuffle(candidates)
    for a, b in candidates:
        if budget <= 0:
            break
        ok = True
        for c, d in edges:
            if {a, b} & {c, d}:
                continue
            if _segments_cross(pts[a], pts[b], pts[c], pts[d]):
                ok = False
                break
        if ok:
            edges.append((a, b))
            simplices.append((a, b))
            budget -= 1
    if triangles and budget > 0:
        edge_set = set(edges)
        tris = [
            (a, b, c)
            for a in range(nv)
            for b in range(a + 1, nv)
            for c in range(b + 1, nv)
            if {(a, b), (a, c), (b, c)} <= edge_set
        ]
        rng.shuffle(tris)
        for t in tris:
            if budget <= 0:
                break
            inside = False
            for v in range(nv):
                if v in t:
                    continue
                if _point_in_triangle(pts[v], pts[t[0]], pts[t[1]], pts[t[2]]):
                    inside = True
                    break
            if not inside:
                simplices.append(t)
                budget -= 1
    return make_complex(2, pts, simplices)


def _point_in_triangle(p, a, b, c):
    def sgn(u, v, w):
        return (u[0] - w[0]) * (v[1] - w[1]) - (v[0] - w[0]) * (u[1] - w[1])

    d1, d2, d3 = sgn(p, a, b), sgn(p, b, c), sgn(p, c, a)
    neg = (d1 < 0) or (d2 < 0) or (d3 < 0)
    pos = (d1 > 0) or (d2 > 0) or (d3 > 0)
    return not (neg and pos)


def random_diagram(rng, n_points, n_essential=0, dim=0, spread=2.0):
    from phtdist.persistence import Diagram, PersistencePair

    pairs = []
    for i in range(n_points):
        b = float(rng.uniform(-spread, spread))
        d = b + float(rng.uniform(0.05, spread))
        pairs.append(PersistencePair(dim, b, d, 1000 + i, 2000 + i))
    for i in range(n_essential):
        b = float(rng.uniform(-spread, spread))
        pairs.append(PersistencePair(dim, b, math.inf, 3000 + i, None))
    return Diagram(tuple(pairs))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
