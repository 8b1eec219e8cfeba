from __future__ import annotations

import dataclasses
import unittest

import bootstrap  # noqa: F401
from bootstrap import load_fixture_map

from leapfrog_hamilton.ear_decomp import (
    MAX_EAR_EDGES,
    ON_E0,
    build_ear_decomposition,
    dual_adjacency,
    ear_decomposition_to_document,
    find_nice_decomposition,
    is_dual_search_order,
    lexbfs_dual_order,
    seed_pairs,
    validate_ear_decomposition,
)
from leapfrog_hamilton.errors import (
    DanglingEar,
    EarDecompositionError,
    NoHexagon,
    NotAdjacent,
    NotHexagon,
    NotPentagon,
)
from leapfrog_hamilton.fullerene import validate_fullerene


def corpus(name: str):
    return validate_fullerene(load_fixture_map(f"{name}.json"))


class DualOrderTests(unittest.TestCase):
    def setUp(self) -> None:
        self.c26 = corpus("c26")
        self.hexagon, self.pentagon = seed_pairs(self.c26)[0]

    def test_order_starts_with_the_seed_and_is_a_search_order(self) -> None:
        order = lexbfs_dual_order(self.c26, self.hexagon, self.pentagon)

        self.assertEqual(order[:2], (self.hexagon, self.pentagon))
        self.assertEqual(sorted(order), list(range(15)))
        self.assertTrue(is_dual_search_order(self.c26, order))

    def test_order_is_deterministic(self) -> None:
        first = lexbfs_dual_order(self.c26, self.hexagon, self.pentagon)
        second = lexbfs_dual_order(self.c26, self.hexagon, self.pentagon)
        self.assertEqual(first, second)

    def test_seed_roles_are_checked(self) -> None:
        with self.assertRaises(NotHexagon):
            lexbfs_dual_order(self.c26, self.pentagon, self.pentagon)
        with self.assertRaises(NotPentagon):
            lexbfs_dual_order(self.c26, self.hexagon, self.hexagon)

    def test_seed_faces_must_share_an_edge(self) -> None:
        adjacency = dual_adjacency(self.c26)
        far = next(p for p in self.c26.pentagons if p not in adjacency[self.hexagon])
        with self.assertRaises(NotAdjacent):
            lexbfs_dual_order(self.c26, self.hexagon, far)

    def test_order_that_jumps_is_not_a_search_order(self) -> None:
        adjacency = dual_adjacency(self.c26)
        far = next(f for f in range(15) if f != self.hexagon and f not in adjacency[self.hexagon])
        rest = [f for f in range(15) if f not in (self.hexagon, far)]
        self.assertFalse(is_dual_search_order(self.c26, [self.hexagon, far, *rest]))


class NiceDecompositionTests(unittest.TestCase):
    def test_corpus_decompositions_are_nice(self) -> None:
        for name in ("c24", "c26", "c30", "c40", "c50"):
            with self.subTest(name=name):
                fullerene = corpus(name)
                decomposition = find_nice_decomposition(fullerene)

                validate_ear_decomposition(fullerene, decomposition)
                self.assertTrue(fullerene.is_hexagon(decomposition.source_order[0]))
                self.assertTrue(fullerene.is_pentagon(decomposition.source_order[1]))
                self.assertTrue(
                    all(1 <= ear.edge_count <= MAX_EAR_EDGES for ear in decomposition.ears)
                )
                edge_total = 6 + sum(ear.edge_count for ear in decomposition.ears)
                self.assertEqual(edge_total, fullerene.planar_map.edge_count)

    def test_every_vertex_is_on_e0_or_inside_one_ear(self) -> None:
        fullerene = corpus("c26")
        decomposition = find_nice_decomposition(fullerene)

        self.assertEqual(sum(1 for v in decomposition.internal_vertex_of if v == ON_E0), 6)
        for vertex, ear_index in enumerate(decomposition.internal_vertex_of):
            if ear_index != ON_E0:
                self.assertIn(vertex, decomposition.ears[ear_index].internal)

    def test_explicit_seed_reproduces_the_search(self) -> None:
        fullerene = corpus("c30")
        found = find_nice_decomposition(fullerene)

        self.assertEqual(find_nice_decomposition(fullerene, found.seed), found)

    def test_no_hexagon(self) -> None:
        with self.assertRaises(NoHexagon):
            find_nice_decomposition(corpus("c20"))

    def test_validator_notices_a_missing_ear(self) -> None:
        fullerene = corpus("c26")
        decomposition = find_nice_decomposition(fullerene)
        broken = dataclasses.replace(decomposition, ears=decomposition.ears[:-1])

        with self.assertRaises(EarDecompositionError):
            validate_ear_decomposition(fullerene, broken)

    def test_document_lists_every_ear(self) -> None:
        decomposition = find_nice_decomposition(corpus("c26"))
        document = ear_decomposition_to_document(decomposition)

        self.assertEqual(len(document["E0"]), 6)
        self.assertEqual(len(document["ears"]), len(decomposition.ears))
        for ear, entry in zip(decomposition.ears, document["ears"]):
            self.assertEqual(entry["path"], list(ear.vertices))
            self.assertEqual(entry["face"], ear.face)

    def test_order_jumping_to_an_untouched_face_leaves_a_dangling_ear(self) -> None:
        fullerene = corpus("c26")
        hexagon = fullerene.hexagons[0]
        on_hexagon = set(fullerene.planar_map.face_vertices(hexagon))
        far = next(
            f
            for f in range(fullerene.planar_map.face_count)
            if not on_hexagon & set(fullerene.planar_map.face_vertices(f))
        )
        rest = [f for f in range(fullerene.planar_map.face_count) if f not in (hexagon, far)]

        with self.assertRaises(DanglingEar):
            build_ear_decomposition(fullerene, [hexagon, far, *rest])
