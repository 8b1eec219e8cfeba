"""Stable-tree decompositions and the colouring state used to build them.

A (proper) stable-tree decomposition splits the vertices into a stable set W
and a set B inducing a tree. The improper variant lets B induce exactly
three trees as long as some hexagon meets all three (a graceful hexagon).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Iterable, Sequence

import networkx as nx

from .errors import InvariantViolation, NotADecomposition
from .fullerene import FullereneGraph

Adjacency = Sequence[Sequence[int]]


class Color(IntEnum):
    UNCOLORED = 0
    WHITE = 1
    BLACK = 2


class BlackForest:
    """Union-find over black vertices; every root keeps its member set."""

    def __init__(self, vertex_count: int) -> None:
        self.parent: list[int] = [-1] * vertex_count
        self.members: dict[int, set[int]] = {}

    def copy(self) -> BlackForest:
        clone = BlackForest(0)
        clone.parent = list(self.parent)
        clone.members = {root: set(members) for root, members in self.members.items()}
        return clone

    def __contains__(self, vertex: int) -> bool:
        return self.parent[vertex] >= 0

    def find(self, vertex: int) -> int:
        root = vertex
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[vertex] != root:
            self.parent[vertex], vertex = root, self.parent[vertex]
        return root

    def add(self, vertex: int, black_neighbours: Iterable[int]) -> None:
        self.parent[vertex] = vertex
        self.members[vertex] = {vertex}
        for neighbour in black_neighbours:
            self._unite(vertex, neighbour)

    def _unite(self, a: int, b: int) -> None:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            raise InvariantViolation(f"edge {a}-{b} closes a black cycle")
        if len(self.members[root_a]) < len(self.members[root_b]):
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        self.members[root_a] |= self.members.pop(root_b)

    def remove(self, vertex: int, adjacency: Adjacency) -> None:
        """Drop ``vertex`` and rebuild the component it belonged to."""
        root = self.find(vertex)
        remaining = self.members.pop(root)
        remaining.discard(vertex)
        self.parent[vertex] = -1
        for member in remaining:
            self.parent[member] = member
            self.members[member] = {member}
        for member in sorted(remaining):
            for neighbour in adjacency[member]:
                if neighbour in remaining and neighbour < member:
                    self._unite(member, neighbour)

    def component(self, vertex: int) -> set[int]:
        return self.members[self.find(vertex)]

    def components(self) -> list[frozenset[int]]:
        return sorted((frozenset(m) for m in self.members.values()), key=min)

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class DecompState:
    adjacency: tuple[tuple[int, ...], ...]
    colors: list[Color]
    forest: BlackForest
    frontier: int
    white_count: int = 0

    @classmethod
    def empty(cls, adjacency: tuple[tuple[int, ...], ...], frontier: int) -> DecompState:
        n = len(adjacency)
        return cls(adjacency, [Color.UNCOLORED] * n, BlackForest(n), frontier)

    def copy(self) -> DecompState:
        return DecompState(
            self.adjacency, list(self.colors), self.forest.copy(), self.frontier, self.white_count
        )

    def is_black(self, vertex: int) -> bool:
        return self.colors[vertex] is Color.BLACK

    def component_root(self, vertex: int) -> int | None:
        """Root of the black component holding ``vertex``; None for white or uncoloured."""
        if self.colors[vertex] is not Color.BLACK:
            return None
        return self.forest.find(vertex)

    def color_black(self, vertex: int) -> None:
        if self.colors[vertex] is not Color.UNCOLORED:
            raise InvariantViolation(f"vertex {vertex} is already {self.colors[vertex].name}")
        self.colors[vertex] = Color.BLACK
        self.forest.add(vertex, [u for u in self.adjacency[vertex] if self.is_black(u)])

    def color_white(self, vertex: int) -> None:
        if self.colors[vertex] is not Color.UNCOLORED:
            raise InvariantViolation(f"vertex {vertex} is already {self.colors[vertex].name}")
        self._require_no_white_neighbour(vertex)
        self.colors[vertex] = Color.WHITE
        self.white_count += 1

    def recolor_white(self, vertex: int, *, require_black_neighbours: bool = True) -> None:
        if not self.is_black(vertex):
            raise InvariantViolation(f"cannot recolour non-black vertex {vertex}")
        if require_black_neighbours:
            self.require_black_neighbourhood(vertex)
        self.forest.remove(vertex, self.adjacency)
        self.colors[vertex] = Color.WHITE
        self.white_count += 1

    def require_black_neighbourhood(self, vertex: int) -> None:
        if not all(self.is_black(u) for u in self.adjacency[vertex]):
            raise InvariantViolation(f"recoloured vertex {vertex} has a non-black neighbour")

    def _require_no_white_neighbour(self, vertex: int) -> None:
        for neighbour in self.adjacency[vertex]:
            if self.colors[neighbour] is Color.WHITE:
                raise InvariantViolation(f"white {vertex} would touch white {neighbour}")

    def contacts(self, vertex: int) -> list[int]:
        """Contact vertices of the component holding black ``vertex``."""
        return sorted(
            member
            for member in self.forest.component(vertex)
            if any(self.colors[u] is Color.UNCOLORED for u in self.adjacency[member])
        )

    def component_edges(self, vertex: int) -> list[tuple[int, int]]:
        members = self.forest.component(vertex)
        return sorted(
            (member, u) for member in members for u in self.adjacency[member]
            if u in members and member < u
        )

    def check_invariants(self) -> None:
        for vertex, color in enumerate(self.colors):
            if color is Color.WHITE:
                self._require_no_white_neighbour(vertex)
        uncolored_left = Color.UNCOLORED in self.colors
        for component in self.forest.components():
            edges = self.component_edges(min(component))
            if len(edges) != len(component) - 1:
                raise InvariantViolation(f"component {sorted(component)} is not a tree")
            if uncolored_left and not self.contacts(min(component)):
                raise InvariantViolation(f"component {sorted(component)} has no contact vertex")

    def white_set(self) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.colors) if c is Color.WHITE)

    def black_set(self) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.colors) if c is Color.BLACK)


class DecompositionKind(str, Enum):
    PROPER = "proper"
    IMPROPER = "improper"


@dataclass(frozen=True)
class GeneralizedDecomposition:
    kind: DecompositionKind
    white: frozenset[int]
    black: frozenset[int]
    components: tuple[frozenset[int], ...]
    graceful_hexagons: tuple[int, ...] = ()
    graceful_vertices: tuple[int, ...] = ()
    key: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", tuple(sorted(self.white)))

    @property
    def digest(self) -> str:
        """Stable hash of the colouring (W determines the partition)."""
        text = ",".join(str(v) for v in self.key)
        return hashlib.sha256(f"{len(self.white) + len(self.black)}:{text}".encode()).hexdigest()

    def to_document(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "W": sorted(self.white),
            "B": sorted(self.black),
            "components": [sorted(c) for c in self.components],
            "graceful_hexagons": list(self.graceful_hexagons),
            "graceful_vertices": list(self.graceful_vertices),
        }


def _component_index(components: Sequence[frozenset[int]]) -> dict[int, int]:
    return {vertex: index for index, members in enumerate(components) for vertex in members}


def find_graceful_hexagons(
    fullerene: FullereneGraph, components: Sequence[frozenset[int]]
) -> tuple[int, ...]:
    """Hexagons with exactly one vertex in each of the three black components."""
    index = _component_index(components)
    found = []
    for face in fullerene.hexagons:
        met = [index[v] for v in fullerene.planar_map.face_vertices(face) if v in index]
        if len(met) == 3 and len(set(met)) == 3:
            found.append(face)
    return tuple(found)


def find_graceful_vertices(
    fullerene: FullereneGraph, white: Iterable[int], components: Sequence[frozenset[int]]
) -> tuple[int, ...]:
    index = _component_index(components)
    found = []
    for vertex in sorted(white):
        met = {index.get(u) for u in fullerene.adjacency[vertex]}
        if None not in met and len(met) == 3:
            found.append(vertex)
    return tuple(found)


def classify(
    fullerene: FullereneGraph, white: Iterable[int], black: Iterable[int]
) -> GeneralizedDecomposition:
    white_set, black_set = frozenset(white), frozenset(black)
    if white_set & black_set or len(white_set | black_set) != fullerene.n:
        raise NotADecomposition("W and B do not partition the vertex set")
    for vertex in white_set:
        for neighbour in fullerene.adjacency[vertex]:
            if neighbour in white_set:
                raise NotADecomposition(f"W is not stable: {vertex}-{neighbour}")
    if not black_set:
        raise NotADecomposition("B is empty")

    induced = fullerene.graph.subgraph(black_set)
    if not nx.is_forest(induced):
        raise NotADecomposition("B induces a cycle")
    components = tuple(
        sorted((frozenset(c) for c in nx.connected_components(induced)), key=min)
    )
    if len(components) == 1:
        return GeneralizedDecomposition(
            DecompositionKind.PROPER, white_set, black_set, components
        )
    if len(components) != 3:
        raise NotADecomposition(f"B has {len(components)} components, expected 1 or 3")
    hexagons = find_graceful_hexagons(fullerene, components)
    if not hexagons:
        raise NotADecomposition("B has 3 components but no graceful hexagon")
    return GeneralizedDecomposition(
        DecompositionKind.IMPROPER,
        white_set,
        black_set,
        components,
        hexagons,
        find_graceful_vertices(fullerene, white_set, components),
    )


def check_white_count(decomposition: GeneralizedDecomposition, k: int) -> bool:
    if decomposition.kind is DecompositionKind.PROPER:
        return len(decomposition.white) == k
    return len(decomposition.white) == k + 1


def has_second_connector(decomposition: GeneralizedDecomposition) -> bool:
    """Improper decompositions have a second graceful hexagon or a graceful vertex."""
    if decomposition.kind is DecompositionKind.PROPER:
        return True
    return len(decomposition.graceful_hexagons) >= 2 or len(decomposition.graceful_vertices) >= 1
