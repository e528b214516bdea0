"""Orientation regions and the neighborhood graph over them.

Triangles not separated by a Jacobi edge are merged into regions; the
neighborhood graph has one node per region and one edge per pair of
regions that touch across at least one mesh edge. Four variants control
extra merges across shared vertices:

* ``A`` - edge merges only.
* ``B`` - also merge vertex-connected pairs that are both negative;
  degenerate triangles side with a negative neighbor whenever one exists.
* ``C`` - mirror image of B for positive pairs.
* ``D`` - merge vertex-connected pairs with the same sign whose point
  neighborhoods also sum to the same total orientation.

Each node carries domain area, range area, and hypervolume (the summed
per-triangle product of the two), the quantity thresholded to pick
regions for collapsing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .jacobi import assign_degenerate, effective_signs, orientation_signs
from .mesh import TriField
from .unionfind import UnionFind

VARIANTS = ("A", "B", "C", "D")


@dataclass
class Region:
    id: int
    sign: int
    triangles: np.ndarray


@dataclass
class RegionDecomposition:
    variant: str
    label: np.ndarray
    regions: list
    field: TriField = dataclass_field(repr=False, default=None)
    signs: np.ndarray = dataclass_field(repr=False, default=None)

    def __len__(self):
        return len(self.regions)


@dataclass
class GraphNode:
    id: int
    sign: int
    domain_area: float
    range_area: float
    hypervolume: float
    triangle_count: int


@dataclass
class NeighborhoodGraph:
    variant: str
    nodes: list
    edges: list


def build_regions(field: TriField, signs, assignment, variant: str = "A"):
    """Union-find decomposition of the triangles into orientation regions.

    ``assignment`` is used as-is for variants A and D; variants B and C
    re-derive degenerate signs with their stated preference (negative for
    B, positive for C) before merging.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    signs = np.asarray(signs, dtype=np.int8)
    if variant == "B":
        assignment = assign_degenerate(field, signs, prefer=-1)
    elif variant == "C":
        assignment = assign_degenerate(field, signs, prefer=1)
    eff = effective_signs(field, signs, assignment)

    m = field.n_triangles
    uf = UnionFind(m)
    et = field.edge_triangles
    interior = et[:, 1] >= 0
    same = interior.copy()
    same[interior] = eff[et[interior, 0]] == eff[et[interior, 1]]
    for a, b in et[same]:
        uf.union(int(a), int(b))

    if variant in ("B", "C"):
        wanted = -1 if variant == "B" else 1
        for star in field.vertex_stars:
            members = [int(t) for t in star if eff[t] == wanted]
            for t in members[1:]:
                uf.union(members[0], t)
    elif variant == "D":
        nbr_sum = point_neighbor_sums(field, eff)
        for star in field.vertex_stars:
            for i in range(len(star)):
                for j in range(i + 1, len(star)):
                    a, b = int(star[i]), int(star[j])
                    if eff[a] == eff[b] and nbr_sum[a] == nbr_sum[b]:
                        uf.union(a, b)

    label = uf.labels()
    n_regions = int(label.max()) + 1 if m else 0
    members = [[] for _ in range(n_regions)]
    for t in range(m):
        members[label[t]].append(t)
    regions = [
        Region(id=r, sign=int(eff[tri_ids[0]]), triangles=np.array(tri_ids, dtype=np.int64))
        for r, tri_ids in enumerate(members)
    ]
    return RegionDecomposition(
        variant=variant, label=label, regions=regions, field=field, signs=eff
    )


def point_neighbor_sums(field: TriField, eff: np.ndarray) -> np.ndarray:
    """For each triangle, the summed effective sign over all triangles
    sharing at least one vertex with it (itself excluded)."""
    eff = eff.astype(np.int64)
    per_vertex = np.zeros(field.n_vertices, dtype=np.int64)
    np.add.at(per_vertex, field.triangles.ravel(), np.repeat(eff, 3))
    total = per_vertex[field.triangles].sum(axis=1)
    # Vertex sums count edge neighbors twice and the triangle itself three
    # times; correct both to get the plain point-neighborhood sum.
    nbr = field.neighbors
    edge_nbr_sum = np.where(nbr >= 0, eff[np.clip(nbr, 0, None)], 0).sum(axis=1)
    return total - edge_nbr_sum - 3 * eff


def build_graph(field: TriField, regions: RegionDecomposition) -> NeighborhoodGraph:
    """Aggregate per-node metrics and connect regions that share a mesh edge."""
    label = regions.label
    areas = field.domain_areas
    range_areas = np.abs(field.dets) * areas
    hv = areas * range_areas
    n = len(regions.regions)
    node_area = np.bincount(label, weights=areas, minlength=n)
    node_range = np.bincount(label, weights=range_areas, minlength=n)
    node_hv = np.bincount(label, weights=hv, minlength=n)
    counts = np.bincount(label, minlength=n)
    nodes = [
        GraphNode(
            id=r.id,
            sign=r.sign,
            domain_area=float(node_area[r.id]),
            range_area=float(node_range[r.id]),
            hypervolume=float(node_hv[r.id]),
            triangle_count=int(counts[r.id]),
        )
        for r in regions.regions
    ]
    et = field.edge_triangles
    interior = et[:, 1] >= 0
    la = label[et[interior, 0]]
    lb = label[et[interior, 1]]
    differ = la != lb
    pairs = {(int(min(a, b)), int(max(a, b))) for a, b in zip(la[differ], lb[differ])}
    return NeighborhoodGraph(variant=regions.variant, nodes=nodes, edges=sorted(pairs))


def _check_region(regions: RegionDecomposition, r: int) -> Region:
    if not 0 <= r < len(regions.regions):
        raise IndexError(f"region id {r} out of range")
    return regions.regions[r]


def region_domain_area(regions: RegionDecomposition, r: int) -> float:
    reg = _check_region(regions, r)
    return float(regions.field.domain_areas[reg.triangles].sum())


def region_range_area(regions: RegionDecomposition, r: int) -> float:
    reg = _check_region(regions, r)
    f = regions.field
    return float((np.abs(f.dets[reg.triangles]) * f.domain_areas[reg.triangles]).sum())


def region_hypervolume(regions: RegionDecomposition, r: int) -> float:
    """Sum over member triangles of domain area times range area."""
    reg = _check_region(regions, r)
    f = regions.field
    a = f.domain_areas[reg.triangles]
    return float((a * (np.abs(f.dets[reg.triangles]) * a)).sum())


def find_collapsible_cells(graph: NeighborhoodGraph, regions: RegionDecomposition, t: float):
    """Triangle ids of every region whose hypervolume is strictly below
    ``t``, in ascending order."""
    if t < 0:
        raise ValueError("threshold must be >= 0")
    picked = [n.id for n in graph.nodes if n.hypervolume < t]
    if not picked:
        return np.empty(0, dtype=np.int64)
    ids = np.concatenate([regions.regions[r].triangles for r in picked])
    return np.sort(ids)


def neighborhood_graph(field: TriField, variant: str = "A", epsilon: float = 0.0):
    """Convenience pipeline: signs, assignment, regions, and graph."""
    signs = orientation_signs(field, epsilon)
    assignment = assign_degenerate(field, signs)
    regions = build_regions(field, signs, assignment, variant)
    graph = build_graph(field, regions)
    return signs, assignment, regions, graph


def _sign_char(sign: int) -> str:
    return "+" if sign > 0 else "-" if sign < 0 else "0"


def graph_to_json(graph: NeighborhoodGraph) -> dict:
    return {
        "variant": graph.variant,
        "nodes": [
            {
                "id": n.id,
                "sign": _sign_char(n.sign),
                "domain_area": n.domain_area,
                "range_area": n.range_area,
                "hv": n.hypervolume,
                "triangles": n.triangle_count,
            }
            for n in graph.nodes
        ],
        "edges": [[a, b] for a, b in graph.edges],
    }


def graph_to_dot(graph: NeighborhoodGraph) -> str:
    lines = [f"graph neighborhood_{graph.variant} {{"]
    for n in graph.nodes:
        lines.append(f'  {n.id} [label="{n.id}|{_sign_char(n.sign)}|{n.hypervolume!r}"];')
    for a, b in graph.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
