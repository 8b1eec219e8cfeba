from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any

import networkx as nx

from .errors import BadFaceSize, Not3Connected, NotCubic, PentagonCountMismatch
from .planar_map import PlanarMap, dual, truncate
from .serialization import map_to_document

logger = logging.getLogger(__name__)

PENTAGON_COUNT = 12

EdgeId = tuple[int, int]


@dataclass(frozen=True)
class FullereneGraph:
    planar_map: PlanarMap
    pentagons: tuple[int, ...]
    hexagons: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.planar_map.vertex_count

    @property
    def k(self) -> int | None:
        """The k with n = 4k - 2, or None when n is not 2 mod 4."""
        if self.n % 4 != 2:
            return None
        return (self.n + 2) // 4

    @property
    def face_count_is_odd(self) -> bool:
        return self.planar_map.face_count % 2 == 1

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.planar_map.neighbors(v)) for v in range(self.planar_map.vertex_count)
        )

    @cached_property
    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.planar_map.edges())
        return graph

    def is_hexagon(self, face: int) -> bool:
        return self.planar_map.face_size(face) == 6

    def is_pentagon(self, face: int) -> bool:
        return self.planar_map.face_size(face) == 5


def validate_fullerene(planar_map: PlanarMap) -> FullereneGraph:
    for vertex in range(planar_map.vertex_count):
        if planar_map.degree(vertex) != 3:
            raise NotCubic(f"vertex {vertex} has degree {planar_map.degree(vertex)}")

    pentagons: list[int] = []
    hexagons: list[int] = []
    for face in range(planar_map.face_count):
        size = planar_map.face_size(face)
        if size == 5:
            pentagons.append(face)
        elif size == 6:
            hexagons.append(face)
        else:
            raise BadFaceSize(
                f"face {face} has size {size} (vertices {planar_map.face_vertices(face)})"
            )
    if len(pentagons) != PENTAGON_COUNT:
        raise PentagonCountMismatch(
            f"found {len(pentagons)} pentagons; a cubic planar map with 5/6 faces has 12"
        )

    fullerene = FullereneGraph(planar_map, tuple(pentagons), tuple(hexagons))
    connectivity = nx.node_connectivity(fullerene.graph)
    if connectivity < 3:
        raise Not3Connected(f"graph on {fullerene.n} vertices is only {connectivity}-connected")
    logger.debug(
        "validated fullerene n=%d with %d hexagons", fullerene.n, len(fullerene.hexagons)
    )
    return fullerene


class OriginKind(str, Enum):
    FACE = "face"
    VERTEX = "vertex"


@dataclass(frozen=True)
class FaceOrigin:
    kind: OriginKind
    index: int

    def to_document(self) -> list[Any]:
        return [self.kind.value, self.index]


@dataclass(frozen=True)
class LeapfrogResult:
    """L(G) with every face and vertex traced back to G.

    ``face_origin[F]`` names the face or vertex of G that face F of H comes
    from. ``vertex_origin[x]`` is the G edge (as its dart pair) and the G face
    incident to that edge that H-vertex x sits in.
    """

    source: FullereneGraph
    H: PlanarMap
    face_origin: tuple[FaceOrigin, ...]
    vertex_origin: tuple[tuple[EdgeId, int], ...]

    @cached_property
    def vertex_face(self) -> tuple[int, ...]:
        table = [-1] * self.source.n
        for face, origin in enumerate(self.face_origin):
            if origin.kind is OriginKind.VERTEX:
                table[origin.index] = face
        return tuple(table)

    @cached_property
    def face_face(self) -> tuple[int, ...]:
        table = [-1] * self.source.planar_map.face_count
        for face, origin in enumerate(self.face_origin):
            if origin.kind is OriginKind.FACE:
                table[origin.index] = face
        return tuple(table)


def leapfrog(fullerene: FullereneGraph) -> LeapfrogResult:
    planar_map = fullerene.planar_map
    dual_map, _ = dual(planar_map)
    H, dart_of_vertex = truncate(dual_map)

    face_origin: list[FaceOrigin] = []
    for darts in H.faces:
        first = darts[0]
        dart, role = divmod(first, 3)
        if role == 2:
            origin = FaceOrigin(OriginKind.FACE, planar_map.face_of_dart[planar_map.twin[dart]])
        elif role == 0:
            origin = FaceOrigin(OriginKind.VERTEX, planar_map.origin[dart])
        else:
            origin = FaceOrigin(OriginKind.VERTEX, planar_map.origin[planar_map.twin[dart]])
        face_origin.append(origin)

    vertex_origin: list[tuple[EdgeId, int]] = []
    for dart in dart_of_vertex:
        twin = planar_map.twin[dart]
        edge_id = (min(dart, twin), max(dart, twin))
        vertex_origin.append((edge_id, planar_map.face_of_dart[twin]))

    result = LeapfrogResult(fullerene, H, tuple(face_origin), tuple(vertex_origin))
    logger.debug("leapfrog: %d -> %d vertices", fullerene.n, H.vertex_count)
    return result


def verify_two_factor(result: LeapfrogResult) -> bool:
    covered: set[int] = set()
    for face, origin in enumerate(result.face_origin):
        if origin.kind is not OriginKind.FACE:
            continue
        vertices = result.H.face_vertices(face)
        if covered.intersection(vertices):
            return False
        covered.update(vertices)
    return len(covered) == result.H.vertex_count


def leapfrog_to_document(result: LeapfrogResult) -> dict[str, Any]:
    return {
        "H": map_to_document(result.H),
        "face_origin": [origin.to_document() for origin in result.face_origin],
        "vertex_origin": [[list(edge), face] for edge, face in result.vertex_origin],
        "source": map_to_document(result.source.planar_map),
    }
