from __future__ import annotations

import unittest

import bootstrap  # noqa: F401
from bootstrap import load_fixture_map
from hypothesis import given
from hypothesis import strategies as st

from leapfrog_hamilton.errors import InvariantViolation, NotADecomposition
from leapfrog_hamilton.fullerene import validate_fullerene
from leapfrog_hamilton.stable_tree import (
    BlackForest,
    Color,
    DecompositionKind,
    DecompState,
    classify,
    find_graceful_hexagons,
    find_graceful_vertices,
)

C26 = validate_fullerene(load_fixture_map("c26.json"))
PATH_ADJACENCY = ((1,), (0, 2), (1, 3), (2, 4), (3,))


class BlackForestTests(unittest.TestCase):
    def test_adding_a_path_builds_one_component(self) -> None:
        forest = BlackForest(5)
        for vertex in range(5):
            forest.add(vertex, [vertex - 1] if vertex else [])

        self.assertEqual(len(forest), 1)
        self.assertEqual(forest.component(3), {0, 1, 2, 3, 4})
        self.assertIn(4, forest)

    def test_closing_a_cycle_is_refused(self) -> None:
        forest = BlackForest(4)
        forest.add(0, [])
        forest.add(1, [0])
        forest.add(2, [1])
        forest_copy = forest.copy()

        with self.assertRaises(InvariantViolation):
            forest.add(3, [2, 0])
        self.assertEqual(forest_copy.components(), [frozenset({0, 1, 2})])

    def test_removing_a_middle_vertex_splits_the_tree(self) -> None:
        forest = BlackForest(5)
        for vertex in range(5):
            forest.add(vertex, [vertex - 1] if vertex else [])
        forest.remove(2, PATH_ADJACENCY)

        self.assertNotIn(2, forest)
        self.assertEqual(forest.components(), [frozenset({0, 1}), frozenset({3, 4})])
        self.assertEqual(forest.find(0), forest.find(1))
        self.assertNotEqual(forest.find(1), forest.find(3))


class DecompStateTests(unittest.TestCase):
    def test_white_next_to_white_is_refused(self) -> None:
        state = DecompState.empty(C26.adjacency, frontier=0)
        neighbour = C26.adjacency[0][0]
        state.color_white(0)

        with self.assertRaises(InvariantViolation):
            state.color_white(neighbour)

    def test_recolouring_needs_black_neighbours(self) -> None:
        state = DecompState.empty(C26.adjacency, frontier=0)
        state.color_black(0)
        with self.assertRaises(InvariantViolation):
            state.recolor_white(0)

        for neighbour in C26.adjacency[0]:
            state.color_black(neighbour)
        state.recolor_white(0)
        self.assertIs(state.colors[0], Color.WHITE)
        self.assertEqual(state.white_count, 1)
        self.assertEqual(len(state.forest), 3)

    def test_contacts_and_invariants(self) -> None:
        state = DecompState.empty(C26.adjacency, frontier=0)
        state.color_black(0)
        for neighbour in C26.adjacency[0]:
            state.color_black(neighbour)

        self.assertEqual(state.contacts(0), sorted(C26.adjacency[0]))
        state.check_invariants()
        clone = state.copy()
        first = C26.adjacency[0][0]
        clone.color_black(next(u for u in C26.adjacency[first] if u != 0))
        self.assertNotEqual(clone.black_set(), state.black_set())


class ClassifyTests(unittest.TestCase):
    def test_overlapping_sets_are_not_a_partition(self) -> None:
        with self.assertRaises(NotADecomposition):
            classify(C26, {0}, set(range(26)))

    def test_empty_black_set(self) -> None:
        with self.assertRaises(NotADecomposition):
            classify(C26, set(range(26)), set())

    @given(st.sets(st.integers(min_value=0, max_value=25)))
    def test_random_colourings(self, white: set[int]) -> None:
        black = set(range(26)) - white
        stable = all(u not in white for v in white for u in C26.adjacency[v])
        try:
            decomposition = classify(C26, white, black)
        except NotADecomposition:
            return

        self.assertTrue(stable)
        self.assertEqual(decomposition.white | decomposition.black, frozenset(range(26)))
        self.assertEqual(frozenset().union(*decomposition.components), decomposition.black)
        black_edges = [e for e in C26.planar_map.edges() if e[0] in black and e[1] in black]
        self.assertEqual(len(black_edges), len(black) - len(decomposition.components))
        if decomposition.kind is DecompositionKind.PROPER:
            self.assertEqual(len(decomposition.components), 1)
        else:
            self.assertEqual(len(decomposition.components), 3)
            for hexagon in decomposition.graceful_hexagons:
                met = {
                    index
                    for index, component in enumerate(decomposition.components)
                    if component & set(C26.planar_map.face_vertices(hexagon))
                }
                self.assertEqual(len(met), 3)


class GracefulWitnessTests(unittest.TestCase):
    def setUp(self) -> None:
        self.hexagon = C26.hexagons[0]
        self.ring = C26.planar_map.face_vertices(self.hexagon)

    def test_alternating_hexagon_is_graceful(self) -> None:
        v0, _, v2, _, v4, _ = self.ring
        components = (frozenset({v0}), frozenset({v2}), frozenset({v4}))

        self.assertIn(self.hexagon, find_graceful_hexagons(C26, components))

    def test_hexagon_with_two_vertices_of_one_component_is_not_graceful(self) -> None:
        v0, v1, _, v3, v4, _ = self.ring
        components = (frozenset({v0, v1}), frozenset({v3}), frozenset({v4}))

        self.assertNotIn(self.hexagon, find_graceful_hexagons(C26, components))

    def test_white_vertex_touching_three_components_is_graceful(self) -> None:
        a, b, c = C26.adjacency[0]
        components = (frozenset({a}), frozenset({b}), frozenset({c}))

        self.assertEqual(find_graceful_vertices(C26, {0}, components), (0,))

    def test_white_vertex_with_two_neighbours_in_one_component_is_not_graceful(self) -> None:
        a, b, c = C26.adjacency[0]
        elsewhere = next(v for v in range(C26.n) if v != 0 and v not in C26.adjacency[0])
        components = (frozenset({a, b}), frozenset({c}), frozenset({elsewhere}))

        self.assertEqual(find_graceful_vertices(C26, {0}, components), ())
