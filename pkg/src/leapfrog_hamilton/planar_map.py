"""Dart-based combinatorial maps of 2-connected plane graphs.

Every undirected edge is stored as two darts. ``next_dart`` rotates
counterclockwise around the origin vertex, ``twin`` flips a dart onto the
same edge in the opposite direction. Faces are the orbits of
``next_dart . twin``; with counterclockwise rotations this walks every face
clockwise, keeping the face on the right of each dart.

Face ids are assigned in ascending order of each face's smallest dart, and
each face tuple starts at that dart, so face numbering is a pure function of
the dart numbering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DegreeTooLow, MalformedMap

Edge = tuple[int, int]


def _check_permutation(name: str, values: Sequence[int], size: int) -> None:
    if len(values) != size or sorted(values) != list(range(size)):
        raise MalformedMap(f"{name} is not a permutation of {size} darts")


@dataclass(frozen=True)
class PlanarMap:
    origin: tuple[int, ...]
    twin: tuple[int, ...]
    next_dart: tuple[int, ...]
    _vertex_count: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        size = len(self.origin)
        if size == 0 or size % 2:
            raise MalformedMap(f"a map needs a positive even number of darts, got {size}")
        _check_permutation("twin", self.twin, size)
        _check_permutation("next", self.next_dart, size)
        for dart in range(size):
            if self.twin[dart] == dart:
                raise MalformedMap(f"dart {dart} is its own twin")
            if self.origin[self.next_dart[dart]] != self.origin[dart]:
                raise MalformedMap(f"next({dart}) leaves vertex {self.origin[dart]}")
        vertex_count = max(self.origin) + 1
        object.__setattr__(self, "_vertex_count", vertex_count)

        seen_vertices: set[int] = set()
        visited = [False] * size
        for dart in range(size):
            if visited[dart]:
                continue
            vertex = self.origin[dart]
            if vertex in seen_vertices:
                raise MalformedMap(f"darts of vertex {vertex} form more than one rotation")
            seen_vertices.add(vertex)
            current = dart
            while not visited[current]:
                visited[current] = True
                current = self.next_dart[current]
        if len(seen_vertices) != vertex_count:
            raise MalformedMap("vertex ids must be contiguous from 0")

    # construction

    @classmethod
    def from_rotation(
        cls, rotation: Sequence[Sequence[int]], *, min_degree: int = 1
    ) -> PlanarMap:
        """Build a map from counterclockwise neighbour lists.

        Raises MalformedMap for loops, repeated neighbours, asymmetric lists,
        a disconnected graph or an embedding that is not planar (Euler
        characteristic other than 2), and DegreeTooLow below ``min_degree``.
        """
        n = len(rotation)
        if n == 0:
            raise MalformedMap("empty rotation system")
        origin: list[int] = []
        heads: list[int] = []
        first_dart: list[int] = []
        for vertex, neighbours in enumerate(rotation):
            if len(neighbours) < min_degree:
                raise DegreeTooLow(
                    f"vertex {vertex} has degree {len(neighbours)}, need at least {min_degree}"
                )
            if len(set(neighbours)) != len(neighbours):
                raise MalformedMap(f"vertex {vertex} lists a neighbour twice")
            first_dart.append(len(origin))
            for neighbour in neighbours:
                if not 0 <= neighbour < n:
                    raise MalformedMap(f"vertex {vertex} lists unknown neighbour {neighbour}")
                if neighbour == vertex:
                    raise MalformedMap(f"vertex {vertex} has a loop")
                origin.append(vertex)
                heads.append(neighbour)

        dart_of = {(origin[d], heads[d]): d for d in range(len(origin))}
        twin: list[int] = []
        for dart, (tail, head) in enumerate(zip(origin, heads)):
            reverse = dart_of.get((head, tail))
            if reverse is None:
                raise MalformedMap(f"edge {tail}-{head} is missing its reverse")
            twin.append(reverse)

        next_dart: list[int] = []
        for vertex, neighbours in enumerate(rotation):
            start = first_dart[vertex]
            degree = len(neighbours)
            next_dart.extend(start + (i + 1) % degree for i in range(degree))

        planar_map = cls(tuple(origin), tuple(twin), tuple(next_dart))
        planar_map.require_connected_sphere()
        return planar_map

    def to_rotation(self) -> list[list[int]]:
        return [self.neighbors(vertex) for vertex in range(self.vertex_count)]

    def require_connected_sphere(self) -> None:
        seen = {0}
        queue = deque([0])
        while queue:
            vertex = queue.popleft()
            for neighbour in self.neighbors(vertex):
                if neighbour not in seen:
                    seen.add(neighbour)
                    queue.append(neighbour)
        if len(seen) != self.vertex_count:
            raise MalformedMap("graph is disconnected")
        euler = self.vertex_count - self.edge_count + self.face_count
        if euler != 2:
            raise MalformedMap(f"rotation system is not planar (V - E + F = {euler})")

    # sizes

    @property
    def dart_count(self) -> int:
        return len(self.origin)

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def edge_count(self) -> int:
        return len(self.origin) // 2

    @property
    def face_count(self) -> int:
        return len(self.faces)

    # vertices and edges

    @cached_property
    def prev_dart(self) -> tuple[int, ...]:
        prev = [0] * self.dart_count
        for dart, successor in enumerate(self.next_dart):
            prev[successor] = dart
        return tuple(prev)

    @cached_property
    def head(self) -> tuple[int, ...]:
        return tuple(self.origin[self.twin[d]] for d in range(self.dart_count))

    @cached_property
    def _vertex_darts(self) -> tuple[tuple[int, ...], ...]:
        darts: list[tuple[int, ...]] = [()] * self.vertex_count
        for dart in range(self.dart_count):
            vertex = self.origin[dart]
            if darts[vertex]:
                continue
            orbit = [dart]
            current = self.next_dart[dart]
            while current != dart:
                orbit.append(current)
                current = self.next_dart[current]
            darts[vertex] = tuple(orbit)
        return tuple(darts)

    @cached_property
    def _dart_lookup(self) -> dict[Edge, int]:
        return {(self.origin[d], self.head[d]): d for d in range(self.dart_count)}

    def darts_of(self, vertex: int) -> tuple[int, ...]:
        """Outgoing darts of ``vertex`` in counterclockwise order."""
        return self._vertex_darts[vertex]

    def degree(self, vertex: int) -> int:
        return len(self._vertex_darts[vertex])

    def neighbors(self, vertex: int) -> list[int]:
        return [self.head[d] for d in self._vertex_darts[vertex]]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._dart_lookup

    def edge_of_dart(self, dart: int) -> Edge:
        u, v = self.origin[dart], self.head[dart]
        return (u, v) if u < v else (v, u)

    def edges(self) -> list[Edge]:
        return sorted(
            (self.origin[d], self.head[d])
            for d in range(self.dart_count)
            if self.origin[d] < self.head[d]
        )

    # faces

    def face_successor(self, dart: int) -> int:
        return self.next_dart[self.twin[dart]]

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Dart cycles of all faces, ordered by smallest dart."""
        faces: list[tuple[int, ...]] = []
        visited = [False] * self.dart_count
        for dart in range(self.dart_count):
            if visited[dart]:
                continue
            orbit: list[int] = []
            current = dart
            while not visited[current]:
                visited[current] = True
                orbit.append(current)
                current = self.face_successor(current)
            faces.append(tuple(orbit))
        return tuple(faces)

    @cached_property
    def face_of_dart(self) -> tuple[int, ...]:
        owner = [0] * self.dart_count
        for face_id, darts in enumerate(self.faces):
            for dart in darts:
                owner[dart] = face_id
        return tuple(owner)

    def face_size(self, face: int) -> int:
        return len(self.faces[face])

    def face_vertices(self, face: int) -> list[int]:
        return [self.origin[d] for d in self.faces[face]]

    def face_edges(self, face: int) -> list[Edge]:
        return [self.edge_of_dart(d) for d in self.faces[face]]

    def face_size_histogram(self) -> dict[int, int]:
        histogram: dict[int, int] = {}
        for darts in self.faces:
            histogram[len(darts)] = histogram.get(len(darts), 0) + 1
        return dict(sorted(histogram.items()))


def faces(planar_map: PlanarMap) -> tuple[tuple[int, ...], ...]:
    return planar_map.faces


def dual(planar_map: PlanarMap) -> tuple[PlanarMap, tuple[int, ...]]:
    """Geometric dual on the same dart indices.

    Dart ``d`` of the dual crosses the edge of ``d`` and starts in the face to
    the right of ``twin(d)``. Dual faces are exactly the primal vertices, and
    ``d -> twin(d)`` is an isomorphism from ``dual(dual(M))`` back to ``M``.

    Returns the dual map and, per dual vertex, the primal face it stands for.
    Dual vertex ids equal primal face ids, so that table is the identity.
    """
    size = planar_map.dart_count
    origin = tuple(planar_map.face_of_dart[planar_map.twin[d]] for d in range(size))
    next_dart = tuple(planar_map.prev_dart[planar_map.twin[d]] for d in range(size))
    dual_map = PlanarMap(origin, planar_map.twin, next_dart)
    return dual_map, tuple(range(planar_map.face_count))


# Roles of the three darts that leave the truncation vertex t_d of dart d.
ALONG_EDGE = 0
TO_CCW_NEIGHBOUR = 1
TO_CW_NEIGHBOUR = 2


def truncate(planar_map: PlanarMap) -> tuple[PlanarMap, tuple[int, ...]]:
    """Replace every vertex of degree m by a cycle of m new vertices.

    Output vertex ``d`` sits on dart ``d`` next to its origin and owns darts
    ``3d`` (along the original edge), ``3d + 1`` (to the vertex of the
    counterclockwise next dart) and ``3d + 2`` (to the vertex of the previous
    dart). Truncation vertex polygons are traced by the ``3d + 2`` darts and
    each old face of size s becomes a face of size 2s traced by the others.

    Returns the truncated map and, per output vertex, its input dart.
    """
    for vertex in range(planar_map.vertex_count):
        if planar_map.degree(vertex) < 3:
            raise DegreeTooLow(
                f"cannot truncate vertex {vertex} of degree {planar_map.degree(vertex)}"
            )
    size = planar_map.dart_count
    origin: list[int] = []
    twin: list[int] = []
    next_dart: list[int] = []
    for dart in range(size):
        base = 3 * dart
        origin.extend((dart, dart, dart))
        twin.extend(
            (
                3 * planar_map.twin[dart] + ALONG_EDGE,
                3 * planar_map.next_dart[dart] + TO_CW_NEIGHBOUR,
                3 * planar_map.prev_dart[dart] + TO_CCW_NEIGHBOUR,
            )
        )
        next_dart.extend((base + 1, base + 2, base))
    truncated = PlanarMap(tuple(origin), tuple(twin), tuple(next_dart))
    return truncated, tuple(range(size))


def canonical_code(planar_map: PlanarMap) -> tuple[int, ...]:
    """Smallest BFS relabelling code over all starting darts.

    Two maps share a code exactly when an orientation-preserving isomorphism
    exists between them.
    """
    best: tuple[int, ...] | None = None
    for start in range(planar_map.dart_count):
        code = _relabel_code(planar_map, start)
        if best is None or code < best:
            best = code
    assert best is not None
    return best


def _relabel_code(planar_map: PlanarMap, start: int) -> tuple[int, ...]:
    label = {start: 0}
    order = [start]
    code: list[int] = []
    position = 0
    while position < len(order):
        dart = order[position]
        position += 1
        for image in (planar_map.twin[dart], planar_map.next_dart[dart]):
            if image not in label:
                label[image] = len(order)
                order.append(image)
            code.append(label[image])
    return tuple(code)


def is_isomorphic(first: PlanarMap, second: PlanarMap) -> bool:
    if (first.dart_count, first.vertex_count, first.face_count) != (
        second.dart_count,
        second.vertex_count,
        second.face_count,
    ):
        return False
    target = _relabel_code(second, 0)
    return any(_relabel_code(first, start) == target for start in range(first.dart_count))


def edge_set(edges: Iterable[Edge]) -> frozenset[Edge]:
    return frozenset((u, v) if u < v else (v, u) for u, v in edges)
