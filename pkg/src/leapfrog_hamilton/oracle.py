"""Brute-force ground truth for small instances.

Both searches are plain backtracking so that their output can be trusted
without trusting the construction they are used to check.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Any, Sequence

from .batch_runner import run_batch
from .errors import InstanceTooLarge, NotADecomposition
from .fullerene import FullereneGraph
from .hamilton import HamiltonCycle
from .planar_map import PlanarMap
from .stable_tree import DecompositionKind, GeneralizedDecomposition, classify

logger = logging.getLogger(__name__)

DEFAULT_CYCLE_CAP = 10**7
DEFAULT_TIME_BUDGET_MS = 10 * 60 * 1000
DEFAULT_MAX_VERTICES = 32
_CLOCK_STRIDE = 4096


@dataclass(frozen=True)
class OracleReport:
    instance: str
    count: int
    complete: bool
    elapsed_ms: int

    def to_document(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "count": self.count,
            "complete": self.complete,
            "elapsed_ms": self.elapsed_ms,
        }


class _Stop(Exception):
    pass


class _HamiltonSearch:
    def __init__(
        self,
        planar_map: PlanarMap,
        cap: int | None,
        time_budget_ms: int | None,
        collect: bool,
    ) -> None:
        self.adjacency = [planar_map.neighbors(v) for v in range(planar_map.vertex_count)]
        self.n = planar_map.vertex_count
        self.cap = cap
        self.deadline = (
            None if time_budget_ms is None else time.monotonic() + time_budget_ms / 1000
        )
        self.collect = collect
        self.found: set[HamiltonCycle] = set()
        self.count = 0
        self.steps = 0
        self.stopped_by: str | None = None
        self.on_path = [False] * self.n
        self.path: list[int] = []

    def run(self) -> None:
        if self.n < 3:
            return
        self.on_path[0] = True
        self.path.append(0)
        try:
            self._extend(0)
        except _Stop:
            pass

    def _available(self, vertex: int, end: int) -> int:
        return sum(1 for u in self.adjacency[vertex] if not self.on_path[u] or u in (end, 0))

    def _extend(self, end: int) -> None:
        self.steps += 1
        if self.deadline is not None and self.steps % _CLOCK_STRIDE == 0:
            if time.monotonic() > self.deadline:
                self.stopped_by = "time budget"
                raise _Stop
        if len(self.path) == self.n:
            if 0 in self.adjacency[end] and self.path[1] < end:
                self._record()
            return
        for nxt in self.adjacency[end]:
            if self.on_path[nxt]:
                continue
            # once end becomes interior its other unvisited neighbours lose an option
            if any(
                not self.on_path[w] and w != nxt and self._available(w, nxt) < 2
                for w in self.adjacency[end]
            ):
                continue
            self.on_path[nxt] = True
            self.path.append(nxt)
            self._extend(nxt)
            self.path.pop()
            self.on_path[nxt] = False

    def _record(self) -> None:
        self.count += 1
        if self.collect:
            ring = self.path + self.path[:1]
            edges = sorted((min(u, v), max(u, v)) for u, v in zip(ring, ring[1:]))
            self.found.add(HamiltonCycle(tuple(edges)))
        if self.cap is not None and self.count >= self.cap:
            self.stopped_by = "cycle cap"
            raise _Stop


def enumerate_hamilton_cycles(
    planar_map: PlanarMap,
    cap: int | None = DEFAULT_CYCLE_CAP,
    *,
    time_budget_ms: int | None = DEFAULT_TIME_BUDGET_MS,
    collect: bool = False,
    instance: str = "",
) -> tuple[list[HamiltonCycle] | int, OracleReport]:
    """Count (or list, with ``collect``) the Hamilton cycles of ``planar_map``.

    Paths start at vertex 0 and each cycle is taken in the direction whose
    second vertex is smaller than its last. Hitting the cap or the time
    budget returns what was found so far with ``complete`` set to False.
    """
    started = time.monotonic()
    search = _HamiltonSearch(planar_map, cap, time_budget_ms, collect)
    search.run()
    elapsed_ms = int((time.monotonic() - started) * 1000)
    report = OracleReport(instance, search.count, search.stopped_by is None, elapsed_ms)
    if search.stopped_by:
        logger.warning(
            "hamilton oracle on %s stopped by %s after %d cycles",
            instance or "instance",
            search.stopped_by,
            search.count,
        )
    if collect:
        if len(search.found) != search.count:
            logger.warning("hamilton oracle found %d duplicate cycles",
                           search.count - len(search.found))
        return sorted(search.found, key=lambda c: c.edges), report
    return search.count, report


class RollbackUnionFind:
    """Union by size without path compression, so unions can be undone."""

    def __init__(self, size: int) -> None:
        self.parent = list(range(size))
        self.size = [1] * size
        self.history: list[int] = []

    def find(self, vertex: int) -> int:
        while self.parent[vertex] != vertex:
            vertex = self.parent[vertex]
        return vertex

    def union(self, a: int, b: int) -> bool:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return False
        if self.size[root_a] < self.size[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        self.size[root_a] += self.size[root_b]
        self.history.append(root_b)
        return True

    def mark(self) -> int:
        return len(self.history)

    def rollback(self, mark: int) -> None:
        while len(self.history) > mark:
            child = self.history.pop()
            root = self.parent[child]
            self.size[root] -= self.size[child]
            self.parent[child] = child


_UNSET, _WHITE, _BLACK = 0, 1, 2


class _DecompositionSearch:
    def __init__(self, fullerene: FullereneGraph, kinds: frozenset[DecompositionKind]) -> None:
        self.fullerene = fullerene
        self.adjacency = fullerene.adjacency
        self.kinds = kinds
        self.colors = [_UNSET] * fullerene.n
        self.forest = RollbackUnionFind(fullerene.n)
        self.found: list[GeneralizedDecomposition] = []

    def run(self, prefix: Sequence[int] = ()) -> list[GeneralizedDecomposition]:
        for vertex, color in enumerate(prefix):
            if not self._assign(vertex, color):
                return []
        self._descend(len(prefix))
        return self.found

    def _assign(self, vertex: int, color: int) -> bool:
        if color == _WHITE:
            if any(self.colors[u] == _WHITE for u in self.adjacency[vertex]):
                return False
        else:
            for u in self.adjacency[vertex]:
                if self.colors[u] == _BLACK and not self.forest.union(vertex, u):
                    return False
        self.colors[vertex] = color
        return True

    def _descend(self, vertex: int) -> None:
        if vertex == len(self.colors):
            self._leaf()
            return
        for color in (_WHITE, _BLACK):
            mark = self.forest.mark()
            if self._assign(vertex, color):
                self._descend(vertex + 1)
            self.colors[vertex] = _UNSET
            self.forest.rollback(mark)

    def _leaf(self) -> None:
        white = [v for v, c in enumerate(self.colors) if c == _WHITE]
        black = [v for v, c in enumerate(self.colors) if c == _BLACK]
        try:
            decomposition = classify(self.fullerene, white, black)
        except NotADecomposition:
            return
        if decomposition.kind in self.kinds:
            self.found.append(decomposition)


def _search_branch(
    task: tuple[FullereneGraph, frozenset[DecompositionKind], tuple[int, ...]],
) -> list[GeneralizedDecomposition]:
    fullerene, kinds, prefix = task
    return _DecompositionSearch(fullerene, kinds).run(prefix)


def parse_kind_filter(value: str) -> frozenset[DecompositionKind]:
    if value == "all":
        return frozenset(DecompositionKind)
    return frozenset({DecompositionKind(value)})


def enumerate_decompositions(
    fullerene: FullereneGraph,
    kinds: str | frozenset[DecompositionKind] = "all",
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    workers: int = 1,
    instance: str = "",
) -> tuple[list[GeneralizedDecomposition], OracleReport]:
    """Every stable-tree decomposition of ``fullerene`` whose kind passes the filter."""
    if fullerene.n > max_vertices:
        raise InstanceTooLarge(
            f"{fullerene.n} vertices exceeds the exhaustive-search limit of {max_vertices}"
        )
    if isinstance(kinds, str):
        kinds = parse_kind_filter(kinds)

    started = time.monotonic()
    # split on the colours of vertex 0; the branches are independent
    tasks = [(fullerene, kinds, (color,)) for color in (_WHITE, _BLACK)]
    found = [d for branch in run_batch(_search_branch, tasks, workers) for d in branch]
    found.sort(key=lambda d: d.key)
    elapsed_ms = int((time.monotonic() - started) * 1000)
    logger.info(
        "decomposition oracle on %s: %d decompositions in %d ms",
        instance or f"n={fullerene.n}",
        len(found),
        elapsed_ms,
    )
    return found, OracleReport(instance, len(found), True, elapsed_ms)
