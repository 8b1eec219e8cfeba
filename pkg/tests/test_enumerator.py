from __future__ import annotations

import unittest
from fractions import Fraction

import bootstrap  # noqa: F401
import networkx as nx
from bootstrap import load_fixture_map, load_fixture_maps
from hypothesis import given
from hypothesis import strategies as st

from leapfrog_hamilton.ear_decomp import find_nice_decomposition
from leapfrog_hamilton.enumerator import (
    E0_STEP,
    CertifiedCount,
    EnumerationAudit,
    ear_anchors,
    finalize_e0,
    propagate_ear,
    root_state,
    run_enumeration,
    tree_median,
)
from leapfrog_hamilton.errors import NotSameComponent, WrongResidue
from leapfrog_hamilton.fullerene import validate_fullerene
from leapfrog_hamilton.stable_tree import (
    DecompositionKind,
    DecompState,
    check_white_count,
    classify,
    has_second_connector,
)


def corpus(name: str):
    fullerene = validate_fullerene(load_fixture_map(f"{name}.json"))
    return fullerene, find_nice_decomposition(fullerene)


@st.composite
def trees_with_three_vertices(draw):
    size = draw(st.integers(min_value=3, max_value=15))
    parents = [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, size)]
    adjacency: list[list[int]] = [[] for _ in range(size)]
    for child, parent in enumerate(parents, start=1):
        adjacency[child].append(parent)
        adjacency[parent].append(child)
    picks = draw(st.lists(st.integers(min_value=0, max_value=size - 1), min_size=3, max_size=3))
    return adjacency, picks


class TreeMedianTests(unittest.TestCase):
    def test_path_median(self) -> None:
        path = [[1], [0, 2], [1, 3], [2, 4], [3]]

        self.assertEqual(tree_median(path, range(5), 0, 2, 4), 2)
        self.assertEqual(tree_median(path, range(5), 0, 1, 4), 1)
        self.assertEqual(tree_median(path, range(5), 3, 3, 0), 3)

    def test_vertices_outside_the_component(self) -> None:
        path = [[1], [0, 2], [1, 3], [2, 4], [3]]
        with self.assertRaises(NotSameComponent):
            tree_median(path, {0, 1, 2}, 0, 1, 4)

    def test_split_component_has_no_median(self) -> None:
        path = [[1], [0, 2], [1, 3], [2, 4], [3]]
        with self.assertRaises(NotSameComponent):
            tree_median(path, {0, 1, 3, 4}, 0, 1, 4)

    @given(trees_with_three_vertices())
    def test_median_matches_brute_force(self, case) -> None:
        adjacency, (a, b, c) = case
        graph = nx.Graph((u, v) for u, row in enumerate(adjacency) for v in row)
        graph.add_nodes_from(range(len(adjacency)))
        on_all = [
            v
            for v in graph
            if v in nx.shortest_path(graph, a, b)
            and v in nx.shortest_path(graph, b, c)
            and v in nx.shortest_path(graph, a, c)
        ]

        self.assertEqual(on_all, [tree_median(adjacency, range(len(adjacency)), a, b, c)])


class PropagationTests(unittest.TestCase):
    def test_anchors_sit_off_the_ear(self) -> None:
        fullerene, decomposition = corpus("c26")
        for ear in decomposition.ears:
            if not ear.internal:
                continue
            anchors = ear_anchors(fullerene.adjacency, ear)
            self.assertEqual(len(anchors), len(ear.internal))
            for vertex, anchor in zip(ear.internal, anchors):
                self.assertIn(anchor, fullerene.adjacency[vertex])
                self.assertNotIn(anchor, ear.vertices)

    def test_root_state_blackens_the_last_ear(self) -> None:
        fullerene, decomposition = corpus("c26")
        state = root_state(fullerene, decomposition)

        last = decomposition.ears[state.frontier]
        self.assertEqual(state.black_set(), frozenset(last.internal))
        self.assertEqual(state.white_count, 0)

    def test_each_step_adds_zero_or_two_by_one_whites(self) -> None:
        fullerene, decomposition = corpus("c30")
        state = root_state(fullerene, decomposition)
        index = state.frontier - 1
        while index >= 0:
            ear = decomposition.ears[index]
            anchors = ear_anchors(fullerene.adjacency, ear) if ear.internal else []
            children = propagate_ear(state, ear, index, anchors)
            added = [child.white_count - state.white_count for child in children]
            self.assertIn(added, ([0], [1, 1]))
            state = children[0]
            index -= 1


def ear_with_internal(size: int):
    """First ear with ``size`` internal vertices across the tube fullerenes."""
    for name in ("c50", "c40", "c30"):
        fullerene, decomposition = corpus(name)
        for index, ear in enumerate(decomposition.ears):
            if len(ear.internal) == size:
                return fullerene, index, ear
    raise AssertionError(f"no ear with {size} internal vertices in the corpus")


def off_ear_graph(fullerene, ear, *also_avoid: int) -> nx.Graph:
    return fullerene.graph.subgraph(set(fullerene.graph) - set(ear.vertices) - set(also_avoid))


def state_with_black(fullerene, black) -> DecompState:
    state = DecompState.empty(fullerene.adjacency, frontier=0)
    for vertex in black:
        state.color_black(vertex)
    state.check_invariants()
    return state


def pre_e0_states(fullerene, decomposition):
    anchors = [
        ear_anchors(fullerene.adjacency, ear) if ear.internal else []
        for ear in decomposition.ears
    ]

    def walk(state, index):
        if index < 0:
            yield state
            return
        ear = decomposition.ears[index]
        for child in propagate_ear(state, ear, index, anchors[index]):
            yield from walk(child, index - 1)

    state = root_state(fullerene, decomposition)
    yield from walk(state, state.frontier - 1)


class PropagationCaseTests(unittest.TestCase):
    def test_two_internal_vertices_with_joined_anchors_branch(self) -> None:
        fullerene, index, ear = ear_with_internal(2)
        u1, u2 = ear_anchors(fullerene.adjacency, ear)
        state = state_with_black(fullerene, nx.shortest_path(off_ear_graph(fullerene, ear), u1, u2))
        v1, v2 = ear.internal

        children = propagate_ear(state, ear, index, [u1, u2])

        self.assertEqual([c.white_set() for c in children], [frozenset({v1}), frozenset({v2})])
        self.assertIn(v2, children[0].black_set())
        self.assertIn(v1, children[1].black_set())

    def test_two_internal_vertices_with_one_uncoloured_anchor_stay_black(self) -> None:
        fullerene, index, ear = ear_with_internal(2)
        u1, u2 = ear_anchors(fullerene.adjacency, ear)
        state = state_with_black(fullerene, [u1])

        (child,) = propagate_ear(state, ear, index, [u1, u2])

        self.assertEqual(child.white_count, 0)
        self.assertTrue(set(ear.internal) <= child.black_set())

    def test_three_internal_vertices_with_one_joined_pair_branch(self) -> None:
        fullerene, index, ear = ear_with_internal(3)
        u1, u2, u3 = ear_anchors(fullerene.adjacency, ear)
        trunk = nx.shortest_path(off_ear_graph(fullerene, ear, u3), u1, u2)
        state = state_with_black(fullerene, trunk)
        v1, v2, v3 = ear.internal

        children = propagate_ear(state, ear, index, [u1, u2, u3])

        self.assertEqual([c.white_set() for c in children], [frozenset({v1}), frozenset({v2})])
        for child in children:
            self.assertIn(v3, child.black_set())

    def test_three_internal_vertices_in_one_tree_recolour_the_median(self) -> None:
        fullerene, index, ear = ear_with_internal(3)
        u1, u2, u3 = ear_anchors(fullerene.adjacency, ear)
        off_ear = off_ear_graph(fullerene, ear)
        trunk = nx.shortest_path(off_ear, u1, u3)
        reach = nx.single_source_shortest_path(off_ear, u2)
        branch = min((reach[t] for t in trunk if t in reach), key=len)
        black = set(trunk) | set(branch)
        state = state_with_black(fullerene, black)
        median = tree_median(fullerene.adjacency, black, u1, u2, u3)
        v1, v2, v3 = ear.internal

        plain, recoloured = propagate_ear(state, ear, index, [u1, u2, u3])

        self.assertEqual(plain.white_set(), frozenset({v2}))
        self.assertTrue({v1, v3} <= plain.black_set())
        self.assertEqual(recoloured.white_set(), frozenset({median}))
        self.assertEqual(len(recoloured.forest), 1)
        roots = {recoloured.component_root(u) for u in (u1, u2, u3, v1, v2, v3) if u != median}
        self.assertEqual(len(roots), 1)
        self.assertTrue({v1, v3} <= set(recoloured.contacts(v1)))


class FinalizeE0Tests(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        # the second C38 isomer reaches every way of closing E0
        cls.fullerene = validate_fullerene(load_fixture_maps("isomers_c38.pc")[1])
        cls.decomposition = find_nice_decomposition(cls.fullerene)
        cls.by_subcase: dict[str, list] = {}
        for state in pre_e0_states(cls.fullerene, cls.decomposition):
            audit = EnumerationAudit()
            leaves = finalize_e0(cls.fullerene, state, cls.decomposition.e0, 10, audit)
            (subcase,) = audit.subcases
            cls.by_subcase.setdefault(subcase, []).append(leaves)

    def test_every_subcase_is_reached(self) -> None:
        self.assertEqual(
            set(self.by_subcase), {"2,1,1,1,1", "2,2,2", "3,2,1", "4,1,1", "6"}
        )

    def test_five_classes_give_two_proper_leaves(self) -> None:
        for leaves in self.by_subcase["2,1,1,1,1"]:
            self.assertEqual(len(leaves), 2)
            self.assertTrue(all(leaf.kind is DecompositionKind.PROPER for leaf in leaves))

    def test_one_class_gives_eight_proper_leaves(self) -> None:
        for leaves in self.by_subcase["6"]:
            self.assertEqual(len(leaves), 8)
            self.assertEqual(len({leaf.key for leaf in leaves}), 8)
            self.assertTrue(all(leaf.kind is DecompositionKind.PROPER for leaf in leaves))

    def test_three_classes_give_four_proper_leaves(self) -> None:
        for subcase in ("4,1,1", "3,2,1"):
            for leaves in self.by_subcase[subcase]:
                self.assertEqual(len(leaves), 4)
                self.assertTrue(all(leaf.kind is DecompositionKind.PROPER for leaf in leaves))

    def test_three_pairs_give_two_improper_leaves(self) -> None:
        for leaves in self.by_subcase["2,2,2"]:
            self.assertEqual(len(leaves), 2)
            for leaf in leaves:
                self.assertIs(leaf.kind, DecompositionKind.IMPROPER)
                self.assertEqual(len(leaf.white), 11)
                self.assertTrue(has_second_connector(leaf))

    def test_leaf_weights_add_up_to_two_to_the_k(self) -> None:
        weight = sum(
            1 if leaf.kind is DecompositionKind.PROPER else 2
            for batches in self.by_subcase.values()
            for leaves in batches
            for leaf in leaves
        )
        self.assertEqual(weight, 2**10)


class RunEnumerationTests(unittest.TestCase):
    def test_c26_reaches_two_to_the_seventh(self) -> None:
        fullerene, decomposition = corpus("c26")
        result = run_enumeration(fullerene, decomposition)

        self.assertEqual(result.count.k, 7)
        self.assertGreaterEqual(result.count.hamilton_cycle_count, 128)
        self.assertTrue(result.count.bound_met)
        self.assertEqual(result.audit.findings, [])
        keys = [leaf.key for leaf in result.leaves]
        self.assertEqual(len(keys), len(set(keys)))
        self.assertEqual(keys, sorted(keys))

    def test_leaves_are_valid_decompositions_with_the_right_white_count(self) -> None:
        fullerene, decomposition = corpus("c30")
        result = run_enumeration(fullerene, decomposition)

        self.assertGreaterEqual(result.count.hamilton_cycle_count, 256)
        for leaf in result.leaves:
            self.assertTrue(check_white_count(leaf, 8))
            again = classify(fullerene, leaf.white, leaf.black)
            self.assertEqual(again.kind, leaf.kind)
            if leaf.kind is DecompositionKind.IMPROPER:
                self.assertEqual(len(leaf.white), 9)

    def test_claim_checks_run_without_violations(self) -> None:
        fullerene, decomposition = corpus("c50")
        result = run_enumeration(fullerene, decomposition)

        self.assertEqual(result.count.bound, 2**13)
        self.assertTrue(result.count.bound_met)
        self.assertEqual(result.audit.findings, [])
        for check in ("branching", "white-neighbourhood", "finalization_parity"):
            self.assertGreater(result.audit.checks[check], 0)

    def test_runs_are_deterministic(self) -> None:
        fullerene, decomposition = corpus("c26")
        first = run_enumeration(fullerene, decomposition)
        second = run_enumeration(fullerene, decomposition)

        self.assertEqual(
            [leaf.digest for leaf in first.leaves], [leaf.digest for leaf in second.leaves]
        )
        self.assertEqual(first.audit.to_document(), second.audit.to_document())

    def test_worker_pool_gives_the_same_leaves(self) -> None:
        fullerene, decomposition = corpus("c26")
        serial = run_enumeration(fullerene, decomposition)
        parallel = run_enumeration(fullerene, decomposition, workers=2)

        serial_keys = [leaf.key for leaf in serial.leaves]
        self.assertEqual([leaf.key for leaf in parallel.leaves], serial_keys)
        self.assertEqual(parallel.count, serial.count)

    def test_materialized_tree_holds_every_leaf(self) -> None:
        fullerene, decomposition = corpus("c26")
        result = run_enumeration(fullerene, decomposition, materialize_tree=True)

        def collect(node) -> list[str]:
            found = [leaf.digest for leaf in node.leaves]
            for child in node.children:
                found.extend(collect(child))
            return found

        self.assertIsNotNone(result.tree)
        expected = sorted(leaf.digest for leaf in result.leaves)
        self.assertEqual(sorted(collect(result.tree)), expected)
        self.assertIn("children", result.tree.to_document())

    def test_closing_e0_is_a_chain_of_two_way_choices(self) -> None:
        fullerene, decomposition = corpus("c26")
        result = run_enumeration(fullerene, decomposition, materialize_tree=True)

        def leaf_nodes(node):
            if node.ear_index == E0_STEP:
                self.assertTrue(len(node.leaves) == 1 or len(node.children) == 2)
            if node.leaves:
                self.assertEqual(len(node.leaves), 1)
                self.assertEqual(node.children, [])
                yield node
            for child in node.children:
                yield from leaf_nodes(child)

        found = list(leaf_nodes(result.tree))
        self.assertEqual(len(found), len(result.leaves))
        self.assertEqual(sum(Fraction(1, 2**node.depth) for node in found), 1)

    def test_finalized_leaves_pass_the_white_neighbourhood_check(self) -> None:
        fullerene, decomposition = corpus("c50")
        result = run_enumeration(fullerene, decomposition)

        self.assertEqual(result.audit.checks["leaf-white-neighbourhood"], len(result.leaves))
        self.assertEqual(result.audit.findings, [])

    def test_wrong_residue(self) -> None:
        fullerene, decomposition = corpus("c24")
        with self.assertRaises(WrongResidue):
            run_enumeration(fullerene, decomposition)


class CertifiedCountTests(unittest.TestCase):
    def test_improper_leaves_count_twice(self) -> None:
        count = CertifiedCount(n=26, k=7, proper_count=100, improper_count=14)

        self.assertEqual(count.hamilton_cycle_count, 128)
        self.assertEqual(count.bound, 128)
        self.assertTrue(count.bound_met)
        self.assertFalse(CertifiedCount(26, 7, 100, 13).bound_met)
