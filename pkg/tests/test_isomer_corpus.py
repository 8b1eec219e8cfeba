from __future__ import annotations

import unittest

import bootstrap  # noqa: F401
from bootstrap import load_fixture_maps

from leapfrog_hamilton.cli import certify_graph
from leapfrog_hamilton.errors import WrongResidue

# every fullerene isomer of each size, counted up to mirror image
ISOMER_COUNTS = {"c28": 2, "c30": 3, "c34": 6, "c38": 17}


class IsomerCorpusTests(unittest.TestCase):
    def test_each_file_holds_every_isomer(self) -> None:
        for name, count in ISOMER_COUNTS.items():
            with self.subTest(name=name):
                maps = load_fixture_maps(f"isomers_{name}.pc")
                self.assertEqual(len(maps), count)
                self.assertTrue(all(m.vertex_count == int(name[1:]) for m in maps))

    def test_every_certifiable_isomer_gets_exactly_two_to_the_k_cycles(self) -> None:
        files = ["c26.pc", *(f"isomers_{name}.pc" for name in ("c30", "c34", "c38"))]
        for name in files:
            for index, planar_map in enumerate(load_fixture_maps(name)):
                with self.subTest(name=name, index=index):
                    report = certify_graph(planar_map)

                    self.assertTrue(report["bound_met"])
                    self.assertEqual(report["cycles"], 2 ** report["k"])
                    self.assertEqual(report["findings"], [])

    def test_c28_isomers_have_the_wrong_residue(self) -> None:
        for index, planar_map in enumerate(load_fixture_maps("isomers_c28.pc")):
            with self.subTest(index=index):
                with self.assertRaises(WrongResidue):
                    certify_graph(planar_map)
