"""From stable-tree decompositions of G to Hamilton cycles of L(G).

The hexagons of L(G) that stand for the black vertices of G form a tree of
faces. Since the face-origin faces of L(G) form a 2-factor and every G edge
has a black end, the boundary of that tree of faces passes every vertex
exactly once. An improper decomposition needs one extra face to tie its
three trees together; each available connector gives a different cycle.
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import networkx as nx

from .errors import (
    ConnectorShortage,
    CycleCollision,
    CycleVerificationFailure,
    Disconnected,
    HamiltonError,
    NotSpanning,
    NotTwoRegular,
)
from .fullerene import LeapfrogResult
from .planar_map import Edge, PlanarMap
from .serialization import to_dot
from .stable_tree import DecompositionKind, GeneralizedDecomposition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FaceRegion:
    faces: frozenset[int]
    connector: tuple[str, int] | None = None


@dataclass(frozen=True)
class HamiltonCycle:
    edges: tuple[Edge, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def digest(self) -> str:
        text = ";".join(f"{u}-{v}" for u, v in self.edges)
        return hashlib.sha256(text.encode()).hexdigest()

    def to_document(self) -> dict[str, Any]:
        return {"edges": [list(edge) for edge in self.edges]}


def region_is_tree(H: PlanarMap, faces: Iterable[int]) -> bool:
    members = set(faces)
    graph = nx.Graph()
    graph.add_nodes_from(members)
    for dart in range(H.dart_count):
        face, other = H.face_of_dart[dart], H.face_of_dart[H.twin[dart]]
        if face in members and other in members and face < other:
            graph.add_edge(face, other)
    return bool(members) and nx.is_tree(graph)


def connectors(
    decomposition: GeneralizedDecomposition, result: LeapfrogResult
) -> list[tuple[str, int, int]]:
    """Candidate connector faces as (kind, G id, H face), hexagons first."""
    found = [("hexagon", h, result.face_face[h]) for h in decomposition.graceful_hexagons]
    found.extend(("vertex", v, result.vertex_face[v]) for v in decomposition.graceful_vertices)
    return found


def build_regions(
    decomposition: GeneralizedDecomposition, result: LeapfrogResult
) -> list[FaceRegion]:
    black_faces = frozenset(result.vertex_face[v] for v in decomposition.black)
    if decomposition.kind is DecompositionKind.PROPER:
        regions = [FaceRegion(black_faces)]
    else:
        available = connectors(decomposition, result)
        if len(available) < 2:
            raise ConnectorShortage(
                f"improper decomposition {decomposition.digest[:12]} has "
                f"{len(available)} connector(s)",
                {
                    "graceful_hexagons": list(decomposition.graceful_hexagons),
                    "graceful_vertices": list(decomposition.graceful_vertices),
                },
            )
        if len(available) > 2:
            logger.debug("%d spare connectors left unused", len(available) - 2)
        regions = [
            FaceRegion(black_faces | {face}, (kind, index))
            for kind, index, face in available[:2]
        ]
    for region in regions:
        if not region_is_tree(result.H, region.faces):
            raise CycleVerificationFailure(
                f"region for {decomposition.digest[:12]} is not a tree of faces",
                {"connector": region.connector},
            )
    return regions


def region_boundary(H: PlanarMap, region: FaceRegion | Iterable[int]) -> list[Edge]:
    faces = region.faces if isinstance(region, FaceRegion) else frozenset(region)
    boundary = []
    for dart in range(H.dart_count):
        if H.origin[dart] > H.head[dart]:
            continue
        inside = H.face_of_dart[dart] in faces
        if inside != (H.face_of_dart[H.twin[dart]] in faces):
            boundary.append((H.origin[dart], H.head[dart]))
    return sorted(boundary)


def verify_hamilton(H: PlanarMap, edges: Iterable[Edge]) -> HamiltonCycle:
    canonical = sorted({(min(u, v), max(u, v)) for u, v in edges})
    degree: Counter[int] = Counter()
    for u, v in canonical:
        if not H.has_edge(u, v):
            raise NotTwoRegular(f"{u}-{v} is not an edge of H")
        degree[u] += 1
        degree[v] += 1
    odd = sorted(v for v, d in degree.items() if d != 2)
    if odd:
        raise NotTwoRegular(f"{len(odd)} vertices have degree other than 2, e.g. {odd[:5]}")

    graph = nx.Graph(canonical)
    if canonical and not nx.is_connected(graph):
        parts = nx.number_connected_components(graph)
        raise Disconnected(f"edge set splits into {parts} cycles")
    if len(degree) != H.vertex_count:
        raise NotSpanning(f"cycle visits {len(degree)} of {H.vertex_count} vertices")
    return HamiltonCycle(tuple(canonical))


@dataclass
class DedupReport:
    unique: list[HamiltonCycle] = field(default_factory=list)
    multiplicity: dict[HamiltonCycle, int] = field(default_factory=dict)

    @property
    def collisions(self) -> list[tuple[HamiltonCycle, int]]:
        return [(cycle, count) for cycle, count in self.multiplicity.items() if count > 1]


def dedup(cycles: Sequence[HamiltonCycle]) -> DedupReport:
    counts = Counter(cycles)
    report = DedupReport(sorted(counts, key=lambda c: c.edges), dict(counts))
    for cycle, count in report.collisions:
        logger.warning("cycle %s produced %d times", cycle.digest[:12], count)
    return report


@dataclass
class CycleConstruction:
    cycles: list[HamiltonCycle]
    sources: list[tuple[str, tuple[str, int] | None]]
    report: DedupReport
    findings: list[dict[str, Any]] = field(default_factory=list)


def construct_cycles(
    result: LeapfrogResult, decompositions: Sequence[GeneralizedDecomposition]
) -> CycleConstruction:
    """Build and verify the cycles of every decomposition, then deduplicate."""
    cycles: list[HamiltonCycle] = []
    sources: list[tuple[str, tuple[str, int] | None]] = []
    for decomposition in decompositions:
        for region in build_regions(decomposition, result):
            edges = region_boundary(result.H, region)
            try:
                cycle = verify_hamilton(result.H, edges)
            except HamiltonError as exc:
                raise CycleVerificationFailure(
                    f"boundary for {decomposition.digest[:12]} is not Hamiltonian: {exc}",
                    {"decomposition": decomposition.to_document(), "connector": region.connector},
                ) from exc
            cycles.append(cycle)
            sources.append((decomposition.digest, region.connector))

    report = dedup(cycles)
    findings = [
        CycleCollision(
            f"cycle {cycle.digest[:12]} constructed {count} times",
            {"cycle": cycle.digest, "multiplicity": count},
        ).record()
        for cycle, count in report.collisions
    ]
    return CycleConstruction(cycles, sources, report, findings)


def cycle_to_dot(H: PlanarMap, cycle: HamiltonCycle, *, name: str = "H") -> str:
    attributes = {edge: {"color": "red", "penwidth": 2} for edge in cycle.edges}
    return to_dot(H, name=name, edge_attributes=attributes)


def decomposition_to_dot(
    G: PlanarMap, decomposition: GeneralizedDecomposition, *, name: str = "G"
) -> str:
    attributes: dict[int, dict[str, Any]] = {}
    for vertex in decomposition.white:
        attributes[vertex] = {"style": "filled", "fillcolor": "white", "class": "W"}
    for vertex in decomposition.black:
        attributes[vertex] = {
            "style": "filled",
            "fillcolor": "black",
            "fontcolor": "white",
            "class": "B",
        }
    return to_dot(G, name=name, vertex_attributes=attributes)
