"""Descending-ear propagation of stable-tree decompositions.

Ears are coloured from the last ear with internal vertices down to the
first, starting from an all-black path. Every step keeps W stable, B a
forest and every black tree touching an uncoloured vertex. Closing E0 then
turns each colouring of G minus E0 into proper or improper stable-tree
decompositions of G. Every branching adds exactly one white vertex, so the
leaves carry total weight 2^k with improper leaves counting twice.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import networkx as nx

from .batch_runner import run_batch
from .ear_decomp import Ear, NiceEarDecomposition
from .errors import (
    CandidateValidationFailure,
    ClaimViolation,
    InvariantViolation,
    NoInternalEars,
    NotADecomposition,
    NotSameComponent,
    ParityViolation,
    WrongResidue,
)
from .fullerene import FullereneGraph
from .stable_tree import (
    Color,
    DecompositionKind,
    DecompState,
    GeneralizedDecomposition,
    check_white_count,
    classify,
)

logger = logging.getLogger(__name__)

Adjacency = Sequence[Sequence[int]]

# ear index of tree nodes below the last ear, one per two-way choice while closing E0
E0_STEP = -1


@dataclass
class TreeNode:
    ear_index: int
    white_count: int
    depth: int
    colors: tuple[int, ...]
    children: list[TreeNode] = field(default_factory=list)
    leaves: list[GeneralizedDecomposition] = field(default_factory=list)

    def to_document(self) -> dict[str, Any]:
        return {
            "ear": self.ear_index,
            "white_count": self.white_count,
            "depth": self.depth,
            "colors": "".join(".WB"[c] for c in self.colors),
            "children": [child.to_document() for child in self.children],
            "leaves": [leaf.digest for leaf in self.leaves],
        }


@dataclass
class EnumerationAudit:
    nodes: int = 0
    branchings: int = 0
    checks: Counter = field(default_factory=Counter)
    subcases: Counter = field(default_factory=Counter)
    findings: list[dict[str, Any]] = field(default_factory=list)
    candidate_reports: list[dict[str, Any]] = field(default_factory=list)

    def violation(self, claim: str, message: str, **details: Any) -> None:
        finding = ClaimViolation(f"{claim}: {message}", {"claim": claim, **details})
        logger.warning("%s", finding)
        self.findings.append(finding.record())

    def merge(self, other: EnumerationAudit) -> None:
        self.nodes += other.nodes
        self.branchings += other.branchings
        self.checks.update(other.checks)
        self.subcases.update(other.subcases)
        self.findings.extend(other.findings)
        self.candidate_reports.extend(other.candidate_reports)

    def to_document(self) -> dict[str, Any]:
        return {
            "nodes": self.nodes,
            "branchings": self.branchings,
            "checks": dict(sorted(self.checks.items())),
            "subcases": dict(sorted(self.subcases.items())),
            "findings": self.findings,
        }


@dataclass(frozen=True)
class CertifiedCount:
    n: int
    k: int
    proper_count: int
    improper_count: int

    @property
    def hamilton_cycle_count(self) -> int:
        return self.proper_count + 2 * self.improper_count

    @property
    def bound(self) -> int:
        return 2**self.k

    @property
    def bound_met(self) -> bool:
        return self.hamilton_cycle_count >= self.bound


@dataclass
class EnumerationResult:
    count: CertifiedCount
    leaves: list[GeneralizedDecomposition]
    audit: EnumerationAudit
    tree: TreeNode | None = None


# building blocks


def root_state(fullerene: FullereneGraph, decomposition: NiceEarDecomposition) -> DecompState:
    nontrivial = decomposition.ears_with_internal_vertices()
    if not nontrivial:
        raise NoInternalEars("every ear is a single edge")
    j_max = nontrivial[-1]
    state = DecompState.empty(fullerene.adjacency, frontier=j_max)
    for vertex in decomposition.ears[j_max].internal:
        state.color_black(vertex)
    state.check_invariants()
    return state


def ear_anchors(adjacency: Adjacency, ear: Ear) -> list[int]:
    """The neighbour of each internal ear vertex that is not on the ear."""
    anchors = []
    path = ear.vertices
    for position in range(1, len(path) - 1):
        on_path = (path[position - 1], path[position + 1])
        outside = [u for u in adjacency[path[position]] if u not in on_path]
        if len(outside) != 1:
            raise InvariantViolation(
                f"internal ear vertex {path[position]} has {len(outside)} neighbours off the ear"
            )
        anchors.append(outside[0])
    if len(set(anchors)) != len(anchors) or set(anchors) & set(path):
        raise InvariantViolation(f"anchors {anchors} of ear {list(path)} are not distinct")
    return anchors


def tree_median(adjacency: Adjacency, component: Iterable[int], a: int, b: int, c: int) -> int:
    members = set(component)
    for vertex in (a, b, c):
        if vertex not in members:
            raise NotSameComponent(f"vertex {vertex} is not in the component")
    tree = nx.Graph()
    tree.add_nodes_from(members)
    tree.add_edges_from((v, u) for v in members for u in adjacency[v] if u in members)
    try:
        common = (
            set(nx.shortest_path(tree, a, b))
            & set(nx.shortest_path(tree, b, c))
            & set(nx.shortest_path(tree, a, c))
        )
    except nx.NetworkXNoPath as exc:
        raise NotSameComponent(f"{a}, {b} and {c} are not joined in the component") from exc
    if len(common) != 1:
        raise InvariantViolation(f"paths between {a}, {b}, {c} share {sorted(common)}")
    return common.pop()


def _child(
    state: DecompState,
    ear_index: int,
    black: Sequence[int],
    white: Sequence[int] = (),
    recolor: int | None = None,
) -> DecompState:
    child = state.copy()
    child.frontier = ear_index
    if recolor is not None:
        child.recolor_white(recolor, require_black_neighbours=False)
    for vertex in black:
        child.color_black(vertex)
    for vertex in white:
        child.color_white(vertex)
    if recolor is not None:
        child.require_black_neighbourhood(recolor)
    child.check_invariants()
    return child


def propagate_ear(
    state: DecompState, ear: Ear, ear_index: int, anchors: Sequence[int]
) -> list[DecompState]:
    internal = ear.internal
    roots = [state.component_root(u) for u in anchors]

    if len(internal) <= 1:
        return [_child(state, ear_index, internal)]

    if len(internal) == 2:
        v1, v2 = internal
        if roots[0] is not None and roots[0] == roots[1]:
            return [
                _child(state, ear_index, [v2], [v1]),
                _child(state, ear_index, [v1], [v2]),
            ]
        return [_child(state, ear_index, internal)]

    if len(internal) != 3:
        raise InvariantViolation(f"ear {ear_index} has {len(internal)} internal vertices")

    v1, v2, v3 = internal
    if roots[0] is not None and roots[0] == roots[1] == roots[2]:
        component = state.forest.component(anchors[0])
        median = tree_median(state.adjacency, component, *anchors)
        return [
            _child(state, ear_index, [v1, v3], [v2]),
            _child(state, ear_index, internal, recolor=median),
        ]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if roots[i] is not None and roots[i] == roots[j]:
            return [
                _child(state, ear_index, [v for v in internal if v != internal[i]], [internal[i]]),
                _child(state, ear_index, [v for v in internal if v != internal[j]], [internal[j]]),
            ]
    return [_child(state, ear_index, internal)]


# E0 closing


def _e0_anchors(adjacency: Adjacency, e0: Sequence[int]) -> list[int]:
    anchors = []
    for i, vertex in enumerate(e0):
        outside = [u for u in adjacency[vertex] if u not in (e0[i - 1], e0[(i + 1) % 6])]
        if len(outside) != 1:
            raise InvariantViolation(f"E0 vertex {vertex} has {len(outside)} outside neighbours")
        anchors.append(outside[0])
    if len(set(anchors)) != 6:
        raise InvariantViolation(f"E0 anchors {anchors} are not distinct")
    return anchors


@dataclass(frozen=True)
class _Candidate:
    label: str
    white_positions: tuple[int, ...]
    recolored: int | None


class _Finalizer:
    def __init__(
        self,
        fullerene: FullereneGraph,
        state: DecompState,
        e0: Sequence[int],
        k: int,
        audit: EnumerationAudit,
    ) -> None:
        self.fullerene = fullerene
        self.state = state
        self.e0 = tuple(e0)
        self.k = k
        self.audit = audit
        self.anchors = _e0_anchors(state.adjacency, e0)
        self.roots = [state.component_root(u) for u in self.anchors]

    def run(self) -> list[GeneralizedDecomposition]:
        state = self.state
        if any(state.colors[u] is Color.UNCOLORED for u in self.anchors):
            raise InvariantViolation("an E0 anchor is still uncoloured at finalisation")
        w0 = sum(1 for u in self.anchors if state.colors[u] is Color.WHITE)
        c = len(state.forest)
        groups: dict[int, list[int]] = {}
        for position, root in enumerate(self.roots):
            if root is not None:
                groups.setdefault(root, []).append(position)
        s = w0 + c
        details = {"w0": w0, "c": c, "w1": state.white_count, "k": self.k}

        self.audit.checks["finalization_classes"] += 1
        if len(groups) != c:
            self.audit.violation(
                "components-reach-E0", f"{c - len(groups)} component(s) miss E0", **details
            )
        self.audit.checks["finalization_parity"] += 1
        if s not in (1, 3, 5):
            raise ParityViolation(f"w0 + c = {s} is not one of 1, 3, 5", details)
        self.audit.checks["finalization_white_count"] += 1
        if state.white_count != self.k - (7 - s) // 2:
            self.audit.violation(
                "white-count-before-E0",
                f"w1 = {state.white_count}, expected {self.k - (7 - s) // 2}",
                **details,
            )

        sizes = tuple(sorted([len(p) for p in groups.values()] + [1] * w0, reverse=True))
        self.audit.subcases[",".join(map(str, sizes))] += 1
        if s == 5:
            pair = next(positions for positions in groups.values() if len(positions) == 2)
            return self._emit_all([self._plain(f"white {p}", [p]) for p in pair])
        if s == 1:
            candidates = []
            for base in ((1, 3, 5), (0, 2, 4)):
                candidates.append(self._plain(f"alternation {base}", base))
                root = self.roots[0]
                candidates.extend(self._recolor(base, r, root) for r in base)
            return self._emit_all(candidates)
        if sizes == (4, 1, 1):
            return self._four_one_one(groups, details)
        if sizes == (3, 2, 1):
            return self._three_two_one(groups)
        if sizes == (2, 2, 2):
            return self._emit_all(
                [
                    self._plain("alternation (1, 3, 5)", (1, 3, 5)),
                    self._plain("alternation (0, 2, 4)", (0, 2, 4)),
                ],
                kind=DecompositionKind.IMPROPER,
            )
        raise ParityViolation(f"unexpected anchor distribution {sizes}", details)

    # candidates

    @staticmethod
    def _plain(label: str, white_positions: Iterable[int]) -> _Candidate:
        return _Candidate(label, tuple(sorted(white_positions)), None)

    def _recolor(self, base: Sequence[int], position: int, root: int | None) -> _Candidate:
        """Blacken E0 position ``position`` and whiten the median of the merged run."""
        whites = sorted(set(base) - {position})
        label = f"{tuple(base)} recolour {position}"
        run = [position]
        for step in (1, -1):
            cursor = (position + step) % 6
            while cursor not in whites and cursor not in run:
                run.append(cursor)
                cursor = (cursor + step) % 6
        on_run = [
            self.anchors[p] for p in sorted(run) if root is not None and self.roots[p] == root
        ]
        if len(on_run) != 3:
            return _Candidate(label + f" ({len(on_run)} anchors on the merged run)", (), -1)
        component = self.state.forest.component(on_run[0])
        median = tree_median(self.state.adjacency, component, *on_run)
        return _Candidate(label, tuple(whites), median)

    def _realize(self, candidate: _Candidate) -> GeneralizedDecomposition:
        if candidate.recolored == -1:
            raise NotADecomposition(candidate.label)
        white = set(self.state.white_set())
        black = set(self.state.black_set())
        for position, vertex in enumerate(self.e0):
            (white if position in candidate.white_positions else black).add(vertex)
        if candidate.recolored is not None:
            black.discard(candidate.recolored)
            white.add(candidate.recolored)
        return classify(self.fullerene, white, black)

    def _check(
        self, candidate: _Candidate, kind: DecompositionKind
    ) -> tuple[GeneralizedDecomposition | None, str | None]:
        try:
            decomposition = self._realize(candidate)
        except NotADecomposition as exc:
            return None, str(exc)
        if decomposition.kind is not kind:
            return None, f"classified {decomposition.kind.value}, expected {kind.value}"
        if not check_white_count(decomposition, self.k):
            return None, f"|W| = {len(decomposition.white)} breaks the white count for k={self.k}"
        return decomposition, None

    def _emit_all(
        self, candidates: Sequence[_Candidate], kind: DecompositionKind = DecompositionKind.PROPER
    ) -> list[GeneralizedDecomposition]:
        emitted = []
        for candidate in candidates:
            decomposition, problem = self._check(candidate, kind)
            if decomposition is None:
                raise CandidateValidationFailure(
                    f"candidate '{candidate.label}' failed: {problem}",
                    {"candidate": candidate.label, "e0": list(self.e0)},
                )
            emitted.append(decomposition)
        return emitted

    def _four_one_one(
        self, groups: dict[int, list[int]], details: dict[str, Any]
    ) -> list[GeneralizedDecomposition]:
        root, positions = next((r, p) for r, p in groups.items() if len(p) == 4)
        s1, s2, s3, s4 = sorted(positions)
        candidates = [
            self._plain("base (s1, s3)", (s1, s3)),
            self._plain("base (s2, s4)", (s2, s4)),
        ]
        candidates.extend(self._recolor((s1, s3), r, root) for r in (s1, s3))
        candidates.extend(self._recolor((s2, s4), r, root) for r in (s2, s4))

        report = []
        valid: list[GeneralizedDecomposition] = []
        for candidate in candidates:
            decomposition, problem = self._check(candidate, DecompositionKind.PROPER)
            report.append(
                {
                    "candidate": candidate.label,
                    "valid": decomposition is not None,
                    "problem": problem,
                }
            )
            if decomposition is not None:
                valid.append(decomposition)
        self.audit.candidate_reports.append({"subcase": "4,1,1", "candidates": report, **details})
        if len(valid) < 4:
            raise CandidateValidationFailure(
                f"only {len(valid)} of 6 candidates are valid", {"candidates": report}
            )
        return valid[:4]

    def _three_two_one(self, groups: dict[int, list[int]]) -> list[GeneralizedDecomposition]:
        triple = next(p for p in groups.values() if len(p) == 3)
        pair = sorted(next(p for p in groups.values() if len(p) == 2))
        middle = None
        ordered = sorted(triple)
        for index in range(3):
            start, end = ordered[index], ordered[(index + 1) % 3]
            arc = {(start + step) % 6 for step in range(1, (end - start) % 6)}
            if set(pair) <= arc:
                middle = ordered[(index + 2) % 3]
        if middle is None:
            raise CandidateValidationFailure(
                f"two-anchor positions {pair} straddle the three-anchor positions {ordered}"
            )
        median = tree_median(
            self.state.adjacency,
            self.state.forest.component(self.anchors[ordered[0]]),
            *(self.anchors[p] for p in ordered),
        )
        candidates = [self._plain(f"white {middle}, {p}", (middle, p)) for p in pair]
        candidates.extend(_Candidate(f"median, white {p}", (p,), median) for p in pair)
        return self._emit_all(candidates)


def finalize_e0(
    fullerene: FullereneGraph,
    state: DecompState,
    e0: Sequence[int],
    k: int,
    audit: EnumerationAudit | None = None,
) -> list[GeneralizedDecomposition]:
    return _Finalizer(fullerene, state, e0, k, audit or EnumerationAudit()).run()


# expansion


@dataclass(frozen=True)
class _Context:
    fullerene: FullereneGraph
    decomposition: NiceEarDecomposition
    k: int
    anchors: tuple[tuple[int, ...], ...]


@dataclass
class _Pending:
    state: DecompState
    next_ear: int
    depth: int


def _white_neighbourhood_ok(state: DecompState, vertex: int) -> bool:
    roots = [state.component_root(u) for u in state.adjacency[vertex]]
    counts = Counter(root for root in roots if root is not None)
    return any(count >= 2 for count in counts.values())


def _attach_e0_choices(node: TreeNode, leaves: Sequence[GeneralizedDecomposition]) -> None:
    """Hang the E0 leaves below ``node`` as nested two-way choices."""
    if len(leaves) == 1:
        node.leaves = list(leaves)
        return
    half = len(leaves) // 2
    for part in (leaves[:half], leaves[half:]):
        child = TreeNode(E0_STEP, node.white_count, node.depth + 1, node.colors)
        _attach_e0_choices(child, part)
        node.children.append(child)


def _leaf_whites_without_a_tree(
    fullerene: FullereneGraph, leaf: GeneralizedDecomposition
) -> list[int]:
    """Whites of ``leaf`` that are neither graceful nor twice adjacent to one black tree."""
    tree_of = {v: i for i, members in enumerate(leaf.components) for v in members}
    lacking = []
    for vertex in sorted(leaf.white):
        if vertex in leaf.graceful_vertices:
            continue
        counts = Counter(tree_of[u] for u in fullerene.adjacency[vertex] if u in tree_of)
        if max(counts.values(), default=0) < 2:
            lacking.append(vertex)
    return lacking


def _audit_step(
    audit: EnumerationAudit, parent: DecompState, children: Sequence[DecompState], ear_index: int
) -> None:
    audit.checks["branching"] += 1
    whites = [child.white_count - parent.white_count for child in children]
    if not (whites == [0] or whites == [1, 1]):
        audit.violation("branching", f"children add {whites} whites", ear=ear_index)

    parent_components = parent.forest.components()
    for child in children:
        audit.checks["component-persistence"] += 1
        for component in parent_components:
            roots = {child.component_root(v) for v in component if child.is_black(v)}
            if len(roots) > 1:
                audit.violation(
                    "component-persistence",
                    f"component {sorted(component)} splits",
                    ear=ear_index,
                )
        for vertex in child.white_set():
            audit.checks["white-neighbourhood"] += 1
            if not _white_neighbourhood_ok(child, vertex):
                audit.violation(
                    "white-neighbourhood",
                    f"white {vertex} lacks two black neighbours in one tree",
                    ear=ear_index,
                )


def _expand(
    context: _Context, pending: _Pending, audit: EnumerationAudit, materialize: bool
) -> tuple[list[GeneralizedDecomposition], TreeNode | None]:
    state, ear_index, depth = pending.state, pending.next_ear, pending.depth
    audit.nodes += 1
    node = (
        TreeNode(state.frontier, state.white_count, depth, tuple(state.colors))
        if materialize
        else None
    )
    if ear_index < 0:
        leaves = finalize_e0(context.fullerene, state, context.decomposition.e0, context.k, audit)
        if node is not None:
            _attach_e0_choices(node, leaves)
        return leaves, node

    ear = context.decomposition.ears[ear_index]
    children = propagate_ear(state, ear, ear_index, context.anchors[ear_index])
    _audit_step(audit, state, children, ear_index)
    if len(children) > 1:
        audit.branchings += 1
    child_depth = depth + (1 if len(children) > 1 else 0)
    leaves: list[GeneralizedDecomposition] = []
    for child in children:
        child_leaves, child_node = _expand(
            context, _Pending(child, ear_index - 1, child_depth), audit, materialize
        )
        leaves.extend(child_leaves)
        if node is not None and child_node is not None:
            node.children.append(child_node)
    return leaves, node


def _expand_task(
    item: tuple[_Context, _Pending],
) -> tuple[list[GeneralizedDecomposition], EnumerationAudit]:
    context, pending = item
    audit = EnumerationAudit()
    leaves, _ = _expand(context, pending, audit, materialize=False)
    return leaves, audit


def _split_frontier(
    context: _Context, root: _Pending, target: int, audit: EnumerationAudit
) -> list[_Pending]:
    """Expand breadth-first until ``target`` independent subtrees exist."""
    frontier = [root]
    while len(frontier) < target and any(p.next_ear >= 0 for p in frontier):
        expanded: list[_Pending] = []
        for pending in frontier:
            if pending.next_ear < 0:
                expanded.append(pending)
                continue
            audit.nodes += 1
            ear = context.decomposition.ears[pending.next_ear]
            children = propagate_ear(
                pending.state, ear, pending.next_ear, context.anchors[pending.next_ear]
            )
            _audit_step(audit, pending.state, children, pending.next_ear)
            if len(children) > 1:
                audit.branchings += 1
            depth = pending.depth + (1 if len(children) > 1 else 0)
            expanded.extend(_Pending(child, pending.next_ear - 1, depth) for child in children)
        frontier = expanded
    return frontier


def run_enumeration(
    fullerene: FullereneGraph,
    decomposition: NiceEarDecomposition,
    *,
    workers: int = 1,
    materialize_tree: bool = False,
) -> EnumerationResult:
    k = fullerene.k
    if k is None:
        raise WrongResidue(f"n = {fullerene.n} is not 2 mod 4")

    anchors = tuple(
        tuple(ear_anchors(fullerene.adjacency, ear)) if ear.internal else ()
        for ear in decomposition.ears
    )
    context = _Context(fullerene, decomposition, k, anchors)
    state = root_state(fullerene, decomposition)
    root = _Pending(state, state.frontier - 1, 0)
    audit = EnumerationAudit()

    tree: TreeNode | None = None
    if workers <= 1 or materialize_tree:
        leaves, tree = _expand(context, root, audit, materialize_tree)
    else:
        frontier = _split_frontier(context, root, 4 * workers, audit)
        leaves = []
        for subtree_leaves, subtree_audit in run_batch(
            _expand_task, [(context, pending) for pending in frontier], workers
        ):
            leaves.extend(subtree_leaves)
            audit.merge(subtree_audit)

    leaves.sort(key=lambda leaf: leaf.key)
    audit.checks["leaf-distinctness"] += 1
    duplicates = [key for key, count in Counter(leaf.key for leaf in leaves).items() if count > 1]
    if duplicates:
        audit.violation("leaf-distinctness", f"{len(duplicates)} repeated leaf colourings")
    for leaf in leaves:
        audit.checks["leaf-white-count"] += 1
        if not check_white_count(leaf, k):
            audit.violation(
                "leaf-white-count", f"leaf {leaf.digest[:12]} has |W|={len(leaf.white)}"
            )
        audit.checks["leaf-white-neighbourhood"] += 1
        lacking = _leaf_whites_without_a_tree(fullerene, leaf)
        if lacking:
            audit.violation(
                "white-neighbourhood",
                f"leaf {leaf.digest[:12]}: whites {lacking} lack two black neighbours in one tree",
            )

    proper = sum(1 for leaf in leaves if leaf.kind is DecompositionKind.PROPER)
    count = CertifiedCount(fullerene.n, k, proper, len(leaves) - proper)
    logger.info(
        "n=%d k=%d: %d proper + %d improper leaves from %d nodes",
        fullerene.n,
        k,
        count.proper_count,
        count.improper_count,
        audit.nodes,
    )
    return EnumerationResult(count, leaves, audit, tree)
