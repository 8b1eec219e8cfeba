"""Nice ear decompositions read off a LexBFS order of the dual graph.

E0 is the facial cycle of a hexagon. Adding the faces one by one in a dual
search order, the edges each new face brings are a union of paths (ears)
whose ends already lie in the covered part. The decomposition is nice when
no ear has more than four edges.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterator, Sequence

import networkx as nx

from .errors import (
    DanglingEar,
    EarDecompositionError,
    EarTooLong,
    NoHexagon,
    NoNiceDecompositionFound,
    NotAdjacent,
    NotHexagon,
    NotPentagon,
)
from .fullerene import FullereneGraph
from .planar_map import Edge, edge_set

logger = logging.getLogger(__name__)

MAX_EAR_EDGES = 4
ON_E0 = -1


@dataclass(frozen=True)
class Ear:
    vertices: tuple[int, ...]
    face: int
    order_index: int

    @property
    def edge_count(self) -> int:
        return len(self.vertices) - 1

    @property
    def internal(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def edges(self) -> list[Edge]:
        return [
            (min(u, v), max(u, v)) for u, v in zip(self.vertices, self.vertices[1:])
        ]


@dataclass(frozen=True)
class NiceEarDecomposition:
    e0: tuple[int, ...]
    ears: tuple[Ear, ...]
    source_order: tuple[int, ...]
    internal_vertex_of: tuple[int, ...]

    @property
    def seed(self) -> tuple[int, int]:
        return self.source_order[0], self.source_order[1]

    def e0_edges(self) -> list[Edge]:
        cycle = self.e0
        return [
            (min(u, v), max(u, v)) for u, v in zip(cycle, cycle[1:] + cycle[:1])
        ]

    def ears_with_internal_vertices(self) -> list[int]:
        return [index for index, ear in enumerate(self.ears) if ear.internal]


def dual_adjacency(fullerene: FullereneGraph) -> list[set[int]]:
    planar_map = fullerene.planar_map
    adjacency: list[set[int]] = [set() for _ in range(planar_map.face_count)]
    for dart in range(planar_map.dart_count):
        face = planar_map.face_of_dart[dart]
        other = planar_map.face_of_dart[planar_map.twin[dart]]
        adjacency[face].add(other)
    return adjacency


def lexbfs_dual_order(
    fullerene: FullereneGraph, start_hexagon: int, second_pentagon: int
) -> tuple[int, ...]:
    if not fullerene.is_hexagon(start_hexagon):
        raise NotHexagon(f"seed face {start_hexagon} is not a hexagon")
    if not fullerene.is_pentagon(second_pentagon):
        raise NotPentagon(f"second face {second_pentagon} is not a pentagon")
    adjacency = dual_adjacency(fullerene)
    if second_pentagon not in adjacency[start_hexagon]:
        raise NotAdjacent(f"faces {start_hexagon} and {second_pentagon} share no edge")

    face_count = len(adjacency)
    labels: list[list[int]] = [[] for _ in range(face_count)]
    visited = [False] * face_count
    order: list[int] = []
    forced = [start_hexagon, second_pentagon]
    for step in range(face_count):
        if step < len(forced):
            chosen = forced[step]
        else:
            chosen = -1
            for face in range(face_count):
                if visited[face]:
                    continue
                if chosen < 0 or labels[face] > labels[chosen]:
                    chosen = face
        visited[chosen] = True
        order.append(chosen)
        for neighbour in adjacency[chosen]:
            if not visited[neighbour]:
                labels[neighbour].append(face_count - step)
    return tuple(order)


def is_dual_search_order(fullerene: FullereneGraph, order: Sequence[int]) -> bool:
    adjacency = dual_adjacency(fullerene)
    if sorted(order) != list(range(len(adjacency))):
        return False
    seen = {order[0]}
    for face in order[1:]:
        if not adjacency[face] & seen:
            return False
        seen.add(face)
    return True


def _uncovered_runs(darts: Sequence[int], covered: list[bool]) -> list[list[int]]:
    """Maximal cyclic runs of uncovered darts, ordered by their first position."""
    size = len(darts)
    flags = [not covered[i] for i in range(size)]
    if all(flags):
        return [list(darts)]
    runs: list[tuple[int, list[int]]] = []
    for position in range(size):
        if not flags[position] or flags[position - 1]:
            continue
        run: list[int] = []
        cursor = position
        while flags[cursor % size]:
            run.append(darts[cursor % size])
            cursor += 1
        runs.append((position, run))
    return [run for _, run in sorted(runs)]


def build_ear_decomposition(
    fullerene: FullereneGraph, order: Sequence[int]
) -> NiceEarDecomposition:
    planar_map = fullerene.planar_map
    first = order[0]
    if not fullerene.is_hexagon(first):
        raise NotHexagon(f"first face {first} of the order is not a hexagon")

    covered_vertices: set[int] = set(planar_map.face_vertices(first))
    covered_edges: set[Edge] = set(planar_map.face_edges(first))
    internal_vertex_of = [ON_E0 if v in covered_vertices else -2 for v in range(fullerene.n)]
    ears: list[Ear] = []

    for order_index, face in enumerate(order[1:], start=1):
        darts = planar_map.faces[face]
        flags = [planar_map.edge_of_dart(d) in covered_edges for d in darts]
        if all(flags):
            continue
        for run in _uncovered_runs(darts, flags):
            path = [planar_map.origin[run[0]]] + [planar_map.head[d] for d in run]
            if not any(flags):
                covered_on_face = [i for i, v in enumerate(path[:-1]) if v in covered_vertices]
                if not covered_on_face:
                    raise DanglingEar(
                        f"face {face} at order position {order_index} touches no covered vertex"
                    )
                start = covered_on_face[0]
                path = path[start:-1] + path[:start] + [path[start]]
            for piece in list(_split_at_covered(path, covered_vertices)):
                ear = _make_ear(piece, face, order_index, covered_vertices)
                for vertex in ear.internal:
                    internal_vertex_of[vertex] = len(ears)
                    covered_vertices.add(vertex)
                covered_edges.update(ear.edges())
                ears.append(ear)

    if len(covered_edges) != planar_map.edge_count:
        raise DanglingEar(
            f"order covers {len(covered_edges)} of {planar_map.edge_count} edges"
        )
    decomposition = NiceEarDecomposition(
        e0=tuple(planar_map.face_vertices(first)),
        ears=tuple(ears),
        source_order=tuple(order),
        internal_vertex_of=tuple(internal_vertex_of),
    )
    logger.debug(
        "ear decomposition from seed %s: %d ears", decomposition.seed, len(decomposition.ears)
    )
    return decomposition


def _split_at_covered(path: list[int], covered_vertices: set[int]) -> Iterator[list[int]]:
    piece = [path[0]]
    for vertex in path[1:]:
        piece.append(vertex)
        if vertex in covered_vertices:
            yield piece
            piece = [vertex]
    if len(piece) > 1:
        yield piece


def _make_ear(
    path: list[int], face: int, order_index: int, covered_vertices: set[int]
) -> Ear:
    start, end = path[0], path[-1]
    if start not in covered_vertices or end not in covered_vertices:
        raise DanglingEar(f"ear {path} from face {face} has an uncovered endpoint")
    if start == end:
        raise DanglingEar(f"ear {path} from face {face} closes on itself at vertex {start}")
    if len(path) - 1 > MAX_EAR_EDGES:
        raise EarTooLong(
            f"ear {path} from face {face} at order position {order_index} "
            f"has {len(path) - 1} edges"
        )
    return Ear(tuple(path), face, order_index)


def seed_pairs(fullerene: FullereneGraph) -> list[tuple[int, int]]:
    adjacency = dual_adjacency(fullerene)
    return [
        (hexagon, pentagon)
        for hexagon in fullerene.hexagons
        for pentagon in fullerene.pentagons
        if pentagon in adjacency[hexagon]
    ]


def find_nice_decomposition(
    fullerene: FullereneGraph, seed: tuple[int, int] | None = None
) -> NiceEarDecomposition:
    if not fullerene.hexagons:
        raise NoHexagon(f"fullerene on {fullerene.n} vertices has no hexagonal face")

    candidates = [seed] if seed is not None else seed_pairs(fullerene)
    failures: list[dict[str, Any]] = []
    for hexagon, pentagon in candidates:
        try:
            order = lexbfs_dual_order(fullerene, hexagon, pentagon)
            return build_ear_decomposition(fullerene, order)
        except (EarTooLong, DanglingEar) as exc:
            logger.debug("seed (%d, %d) rejected: %s", hexagon, pentagon, exc)
            failures.append({"seed": [hexagon, pentagon], "reason": str(exc)})
    raise NoNiceDecompositionFound(
        f"no seed pair out of {len(candidates)} yields a nice ear decomposition",
        {"n": fullerene.n, "failures": failures},
    )


def validate_ear_decomposition(
    fullerene: FullereneGraph, decomposition: NiceEarDecomposition
) -> None:
    """Re-check every defining property from scratch; raise on the first failure."""
    planar_map = fullerene.planar_map
    e0 = decomposition.e0
    if len(e0) != 6 or len(set(e0)) != 6:
        raise EarDecompositionError(f"E0 {list(e0)} is not a 6-cycle")
    e0_edges = decomposition.e0_edges()
    target = edge_set(e0_edges)
    if not any(edge_set(planar_map.face_edges(f)) == target for f in fullerene.hexagons):
        raise EarDecompositionError("E0 is not the facial cycle of a hexagon")

    graph = nx.Graph()
    graph.add_edges_from(e0_edges)
    seen_edges = set(e0_edges)
    owner: dict[int, int] = {}
    for index, ear in enumerate(decomposition.ears):
        start, end = ear.endpoints
        if start == end or start not in graph or end not in graph:
            raise DanglingEar(f"ear {index} {list(ear.vertices)} does not hang on two vertices")
        if ear.edge_count > MAX_EAR_EDGES:
            raise EarTooLong(f"ear {index} has {ear.edge_count} edges")
        for vertex in ear.internal:
            if vertex in graph:
                raise EarDecompositionError(f"internal vertex {vertex} of ear {index} reused")
            owner[vertex] = index
        for u, v in ear.edges():
            if not planar_map.has_edge(u, v):
                raise EarDecompositionError(f"ear {index} uses non-edge {u}-{v}")
            if (u, v) in seen_edges:
                raise EarDecompositionError(f"edge {u}-{v} appears in two ears")
            seen_edges.add((u, v))
        graph.add_edges_from(ear.edges())
        if not nx.is_connected(graph) or min(degree for _, degree in graph.degree) < 2:
            raise EarDecompositionError(f"prefix through ear {index} is not 2-edge-hung")

    if seen_edges != set(planar_map.edges()):
        raise EarDecompositionError(
            f"ears cover {len(seen_edges)} of {planar_map.edge_count} edges"
        )
    for vertex in range(fullerene.n):
        expected = ON_E0 if vertex in e0 else owner.get(vertex)
        if expected is None or decomposition.internal_vertex_of[vertex] != expected:
            raise EarDecompositionError(f"vertex {vertex} has a wrong ear assignment")


def ear_decomposition_to_document(decomposition: NiceEarDecomposition) -> dict[str, Any]:
    return {
        "E0": list(decomposition.e0),
        "source_order": list(decomposition.source_order),
        "ears": [
            {"path": list(ear.vertices), "face": ear.face, "order_index": ear.order_index}
            for ear in decomposition.ears
        ],
    }
