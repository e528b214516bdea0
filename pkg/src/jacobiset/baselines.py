"""Comparison methods: grid smoothing filters and Loop subdivision.

The binomial and Gaussian filters run separably on structured grids only.
Loop subdivision refines a triangle mesh 1-to-4 per step; the field values
get the classic subdivision weights while vertex positions use plain
midpoint refinement, which keeps the planar domain outline fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .fileio import GridField
from .mesh import TriField

_BOUNDARY_MODES = {"clamp": "nearest", "mirror": "mirror"}


@dataclass
class FilterSpec:
    kind: str = "binomial"
    radius: int = 1
    sigma: float = 1.0
    truncation: float = 3.0
    boundary: str = "clamp"

    def __post_init__(self):
        if self.kind not in ("binomial", "gaussian"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if self.boundary not in _BOUNDARY_MODES:
            raise ValueError(f"boundary must be one of {sorted(_BOUNDARY_MODES)}")


def _binomial_kernel(radius: int) -> np.ndarray:
    k = np.array([math.comb(2 * radius, i) for i in range(2 * radius + 1)], dtype=np.float64)
    return k / 4.0**radius


def _gaussian_kernel(sigma: float, truncation: float, max_radius: int) -> np.ndarray:
    radius = min(int(math.ceil(truncation * sigma)), max_radius)
    radius = max(radius, 1)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _separable(data: np.ndarray, kx: np.ndarray, ky: np.ndarray, mode: str) -> np.ndarray:
    # Filter relative to the first sample so constant inputs come back
    # bit-identical (the normalized kernel need not sum to exactly 1).
    ref = data[0, 0]
    out = data - ref
    out = correlate1d(out, ky, axis=0, mode=mode)
    out = correlate1d(out, kx, axis=1, mode=mode)
    return out + ref


def binomial_filter(grid: GridField, spec: FilterSpec) -> GridField:
    """Separable binomial smoothing; r=1 is the [1, 2, 1]/4 kernel."""
    if not isinstance(grid, GridField):
        raise TypeError("binomial filter requires a structured grid")
    k = _binomial_kernel(spec.radius)
    mode = _BOUNDARY_MODES[spec.boundary]
    return GridField(
        grid.width,
        grid.height,
        grid.dx,
        grid.dy,
        _separable(grid.f, k, k, mode),
        _separable(grid.g, k, k, mode),
    )


def gaussian_filter(grid: GridField, spec: FilterSpec) -> GridField:
    """Separable sampled-Gaussian smoothing, truncated at
    ``truncation * sigma`` and capped at the grid size."""
    if not isinstance(grid, GridField):
        raise TypeError("gaussian filter requires a structured grid")
    mode = _BOUNDARY_MODES[spec.boundary]
    kx = _gaussian_kernel(spec.sigma, spec.truncation, grid.width - 1)
    ky = _gaussian_kernel(spec.sigma, spec.truncation, grid.height - 1)
    return GridField(
        grid.width,
        grid.height,
        grid.dx,
        grid.dy,
        _separable(grid.f, kx, ky, mode),
        _separable(grid.g, kx, ky, mode),
    )


def loop_subdivide(field: TriField, steps: int) -> TriField:
    """Refine ``steps`` times, splitting every triangle into four.

    New vertices sit at edge midpoints. Values use the Loop masks, written
    in difference form so constant fields are preserved exactly: interior
    edge vertex 3/8 (a+b) + 1/8 (c+d); boundary edge vertex (a+b)/2;
    interior old vertex (1-k*beta) v + beta * sum of ring neighbors with
    beta = (5/8 - (3/8 + cos(2 pi / k)/4)^2) / k; boundary old vertex
    3/4 v + 1/8 (left + right).
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = field.copy()
    for _ in range(steps):
        out = _loop_once(out)
    return out


def _loop_once(field: TriField) -> TriField:
    n = field.n_vertices
    edges = field.edges
    edge_tris = field.edge_triangles
    boundary_edge = edge_tris[:, 1] < 0
    edge_index = {(int(a), int(b)): i for i, (a, b) in enumerate(edges)}

    pos = field.positions
    val = field.values
    new_pos = 0.5 * (pos[edges[:, 0]] + pos[edges[:, 1]])

    # Edge-vertex values.
    a = val[edges[:, 0]]
    b = val[edges[:, 1]]
    new_val = a + 0.5 * (b - a)
    interior = ~boundary_edge
    if interior.any():
        opp = _opposite_vertices(field, edges[interior], edge_tris[interior])
        ai = val[edges[interior, 0]]
        bi = val[edges[interior, 1]]
        c = val[opp[:, 0]]
        d = val[opp[:, 1]]
        new_val[interior] = ai + 0.375 * (bi - ai) + 0.125 * (c - ai) + 0.125 * (d - ai)

    # Old-vertex values.
    boundary_vertex = np.zeros(n, dtype=bool)
    boundary_vertex[edges[boundary_edge].ravel()] = True
    boundary_nbrs: dict[int, list] = {}
    for ea, eb in edges[boundary_edge]:
        boundary_nbrs.setdefault(int(ea), []).append(int(eb))
        boundary_nbrs.setdefault(int(eb), []).append(int(ea))

    old_val = val.copy()
    for v in range(n):
        if boundary_vertex[v]:
            nbrs = boundary_nbrs[v]
            if len(nbrs) == 2:
                left, right = val[nbrs[0]], val[nbrs[1]]
                old_val[v] = val[v] + 0.125 * (left - val[v]) + 0.125 * (right - val[v])
            # Pinched boundary vertices keep their value.
        else:
            ring = field.vertex_neighbors(v)
            k = len(ring)
            beta = (0.625 - (0.375 + 0.25 * math.cos(2.0 * math.pi / k)) ** 2) / k
            old_val[v] = val[v] + beta * (val[ring] - val[v]).sum(axis=0)

    # 1-to-4 split; children of a CCW parent are CCW because the new
    # vertices are geometric midpoints.
    tri = field.triangles
    mid = np.empty((len(tri), 3), dtype=np.int64)
    for t in range(len(tri)):
        for e in range(3):
            key = field.edge_endpoints(t, e)
            mid[t, e] = n + edge_index[key]
    v0, v1, v2 = tri[:, 0], tri[:, 1], tri[:, 2]
    m01, m12, m20 = mid[:, 0], mid[:, 1], mid[:, 2]
    children = np.concatenate(
        [
            np.column_stack([v0, m01, m20]),
            np.column_stack([v1, m12, m01]),
            np.column_stack([v2, m20, m12]),
            np.column_stack([m01, m12, m20]),
        ]
    )
    order = np.arange(len(tri))
    interleave = np.concatenate([4 * order, 4 * order + 1, 4 * order + 2, 4 * order + 3])
    out_tris = np.empty_like(children)
    out_tris[interleave] = children

    return TriField(
        np.vstack([pos, new_pos]), np.vstack([old_val, new_val]), out_tris
    )


def _opposite_vertices(field, edges, edge_tris):
    """For interior edges, the third vertex of each adjacent triangle."""
    out = np.empty((len(edges), 2), dtype=np.int64)
    tri = field.triangles
    for i, ((a, b), (t1, t2)) in enumerate(zip(edges, edge_tris)):
        for j, t in enumerate((t1, t2)):
            verts = tri[t]
            out[i, j] = verts[(verts != a) & (verts != b)][0]
    return out
