"""Per-triangle linear maps, orientations, and Jacobi set extraction.

The field restricted to a triangle is an affine map ``x -> A x + b``.
The sign of ``det A`` is the triangle's orientation: positive maps keep
the winding in the range, negative maps mirror it, zero means the image
collapsed to a segment or point. The Jacobi set is the set of interior
mesh edges whose two triangles have opposite effective orientation, where
degenerate triangles borrow a sign from their neighborhood first.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .mesh import TriField
from .unionfind import UnionFind


class Orientation(IntEnum):
    POSITIVE = 1
    DEGENERATE = 0
    NEGATIVE = -1


@dataclass
class TriangleJacobian:
    """Affine map of one triangle: value(x) = a @ x + b."""

    a: np.ndarray
    b: np.ndarray
    det: float
    range_area: float


def jacobian(field: TriField, t: int) -> TriangleJacobian:
    """Solve the 3-point interpolation for triangle ``t``.

    ``det`` is computed as the value-edge cross product over the
    domain-edge cross product rather than from the entries of ``a``, so it
    is exactly zero whenever two vertices share identical values.
    """
    tri = field.triangles[t]
    p = field.positions[tri]
    w = field.values[tri]
    # a and b go through extended precision so the rounded result
    # reproduces the vertex values to within a few ulp.
    pl = p.astype(np.longdouble)
    wl = w.astype(np.longdouble)
    x1, y1 = pl[1] - pl[0]
    x2, y2 = pl[2] - pl[0]
    dl = x1 * y2 - x2 * y1  # = 2 * domain area, positive after CCW normalization
    f1, g1 = wl[1] - wl[0]
    f2, g2 = wl[2] - wl[0]
    a_l = np.array(
        [
            [(f1 * y2 - f2 * y1) / dl, (f2 * x1 - f1 * x2) / dl],
            [(g1 * y2 - g2 * y1) / dl, (g2 * x1 - g1 * x2) / dl],
        ],
        dtype=np.longdouble,
    )
    b = (wl[0] - a_l @ pl[0]).astype(np.float64)
    # det uses the plain double formula of the determinant cache: exactly
    # zero whenever an edge carries identical values.
    fd1, gd1 = w[1] - w[0]
    fd2, gd2 = w[2] - w[0]
    d = float(field._doubled_areas[t])
    det = (fd1 * gd2 - fd2 * gd1) / d
    return TriangleJacobian(
        a=a_l.astype(np.float64), b=b, det=float(det), range_area=abs(det) * d / 2.0
    )


def orientation(j: TriangleJacobian, epsilon: float = 0.0) -> Orientation:
    """Classify the sign of the determinant with a degeneracy band of
    ``+-epsilon`` (default 0: exact sign test)."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if j.det > epsilon:
        return Orientation.POSITIVE
    if j.det < -epsilon:
        return Orientation.NEGATIVE
    return Orientation.DEGENERATE


def orientation_signs(field: TriField, epsilon: float = 0.0) -> np.ndarray:
    """Vector of orientation signs (+1 / 0 / -1) for all triangles."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    d = field.dets
    return np.where(d > epsilon, 1, np.where(d < -epsilon, -1, 0)).astype(np.int8)


def assign_degenerate(field: TriField, signs: np.ndarray, prefer: int | None = None):
    """Assign +1 or -1 to every degenerate triangle from its neighborhood.

    The default rule sums the signs over the point neighborhood (all
    triangles sharing a vertex, degenerate ones counting 0) and takes the
    majority; ties and all-degenerate neighborhoods grow the neighborhood
    ring by ring until a strict majority appears. A fully degenerate mesh
    falls back to +1.

    With ``prefer`` set (+1 or -1), the first ring that contains any signed
    triangle decides: the preferred sign wins if present there at all,
    otherwise the other sign is taken.
    """
    out: dict[int, int] = {}
    for t in np.flatnonzero(signs == 0):
        out[int(t)] = _assign_one(field, signs, int(t), prefer)
    return out


def _assign_one(field, signs, seed, prefer):
    visited = {seed}
    frontier = [seed]
    total = 0
    while frontier:
        ring = []
        for u in frontier:
            for v in field.point_neighbors(u):
                v = int(v)
                if v not in visited:
                    visited.add(v)
                    ring.append(v)
        if not ring:
            break
        if prefer is None:
            total += int(sum(int(signs[v]) for v in ring))
            if total > 0:
                return 1
            if total < 0:
                return -1
        else:
            ring_signs = {int(signs[v]) for v in ring} - {0}
            if ring_signs:
                return prefer if prefer in ring_signs else -prefer
        frontier = ring
    return 1  # fully degenerate mesh


def effective_signs(field: TriField, signs: np.ndarray, assignment) -> np.ndarray:
    """Orientation signs with degenerate triangles replaced per `assignment`."""
    eff = signs.astype(np.int8).copy()
    for t, s in assignment.items():
        eff[t] = s
    return eff


@dataclass
class JacobiSet:
    """Interior edges separating opposite effective orientations.

    ``edges`` is an (E, 2) array of vertex-id pairs sorted by (min, max);
    ``degenerate_assignment`` records the sign borrowed by each degenerate
    triangle.
    """

    edges: np.ndarray
    degenerate_assignment: dict

    def __len__(self):
        return len(self.edges)


def extract_jacobi_set(field: TriField, signs: np.ndarray, assignment) -> JacobiSet:
    """Collect interior mesh edges whose two triangles disagree in
    effective sign. Boundary edges are never Jacobi edges."""
    eff = effective_signs(field, signs, assignment)
    et = field.edge_triangles
    interior = et[:, 1] >= 0
    differ = interior.copy()
    differ[interior] = eff[et[interior, 0]] != eff[et[interior, 1]]
    edges = field.edges[differ]
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return JacobiSet(edges=edges[order], degenerate_assignment=dict(assignment))


def compute_jacobi_set(field: TriField, epsilon: float = 0.0) -> JacobiSet:
    """Orientation, degenerate assignment, and extraction in one step."""
    signs = orientation_signs(field, epsilon)
    assignment = assign_degenerate(field, signs)
    return extract_jacobi_set(field, signs, assignment)


def jacobi_length(field: TriField, js: JacobiSet) -> float:
    """Total Euclidean length of the Jacobi edges in the domain."""
    if len(js.edges) == 0:
        return 0.0
    delta = field.positions[js.edges[:, 0]] - field.positions[js.edges[:, 1]]
    return float(np.hypot(delta[:, 0], delta[:, 1]).sum())


def component_count(field: TriField, js: JacobiSet) -> int:
    """Number of connected components of the Jacobi edge set, two edges
    being connected iff they share a vertex."""
    edges = js.edges
    if len(edges) == 0:
        return 0
    verts = np.unique(edges)
    index = {int(v): i for i, v in enumerate(verts)}
    uf = UnionFind(len(verts))
    for a, b in edges:
        uf.union(index[int(a)], index[int(b)])
    return len({uf.find(i) for i in range(len(verts))})


def measures(field: TriField, epsilon: float = 0.0) -> dict:
    """The two evaluation measures: total length and component count."""
    js = compute_jacobi_set(field, epsilon)
    return {"length": jacobi_length(field, js), "components": component_count(field, js)}


def jacobi_set_to_json(js: JacobiSet) -> dict:
    return {
        "edges": [[int(a), int(b)] for a, b in js.edges],
        "degenerate": {
            str(t): ("+" if s > 0 else "-")
            for t, s in sorted(js.degenerate_assignment.items())
        },
    }
