from __future__ import annotations

import tempfile
import unittest
from pathlib import Path

from tests._bootstrap import ensure_src_on_path

ensure_src_on_path()

from ngsi._internal.evaluation import (  # noqa: E402
    CSV_HEADER,
    EvalRecord,
    cell_seed,
    evaluate_grid,
    parse_methods,
    read_csv,
    sample_cell,
    write_csv,
)
from ngsi._internal.guider import zero_model  # noqa: E402
from ngsi._internal.search import SearchConfig  # noqa: E402
from ngsi._internal.syntax import depth, pretty_print  # noqa: E402
from ngsi.enums import Method  # noqa: E402
from ngsi.exceptions import ConfigError  # noqa: E402


class TestCellSampling(unittest.TestCase):
    def test_cells_are_exact(self) -> None:
        programs = sample_cell(8, 8, 5, cell_seed(0, 8, 8))
        self.assertEqual(len(programs), 5)
        for tokens, tree in programs:
            self.assertEqual(len(tokens), 8)
            self.assertEqual(depth(tree), 8)
            self.assertEqual(pretty_print(tree), tokens)

    def test_infeasible_cell_is_empty(self) -> None:
        self.assertEqual(sample_cell(8, 7, 5, cell_seed(0, 8, 7)), [])
        self.assertEqual(sample_cell(6, 3, 5, cell_seed(0, 6, 3)), [])

    def test_training_seeds_are_refused(self) -> None:
        with self.assertRaises(ValueError):
            sample_cell(8, 8, 5, 12345)

    def test_same_seed_same_cell(self) -> None:
        self.assertEqual(sample_cell(9, 10, 3, cell_seed(4, 9, 10)), sample_cell(9, 10, 3, cell_seed(4, 9, 10)))


class TestEvaluateGrid(unittest.TestCase):
    def test_oracle_and_search_are_exact(self) -> None:
        records = evaluate_grid(
            None,
            "oracle,search",
            depths=[7, 8],
            lengths=[6, 7, 8],
            per_cell=3,
            search_cfg=SearchConfig(time_limit_seconds=60.0),
        )
        self.assertEqual(len(records), 2 * 2 * 3)
        self.assertEqual(records, sorted(records, key=EvalRecord.sort_key))
        by_cell = {(r.method, r.depth, r.length): r for r in records}
        self.assertGreater(by_cell[("oracle", 7, 6)].count, 0)
        for r in records:
            self.assertLessEqual(r.count, 3)
            if r.length == 7:
                self.assertEqual(r.count, 0)
                self.assertIsNone(r.mean_time_s)
            if r.count:
                self.assertEqual(r.exact_match, 1.0)
                self.assertEqual(r.errors, {})
                self.assertGreaterEqual(r.p95_time_s, 0.0)

    def test_zero_model_methods_run(self) -> None:
        records = evaluate_grid(
            zero_model(d_emb=2, d_h=2),
            [Method.NgsiGreedy, Method.NgsiFallback],
            depths=[6],
            lengths=[4],
            per_cell=2,
        )
        by_method = {r.method: r for r in records}
        # Uniform ties pick S1 first, which never fits a single statement.
        self.assertEqual(by_method["ngsi-greedy"].exact_match, 0.0)
        self.assertEqual(by_method["ngsi-greedy"].errors, {"unparseable": 2})
        self.assertEqual(by_method["ngsi-fallback"].exact_match, 1.0)

    def test_invalid_arguments(self) -> None:
        with self.assertRaises(ConfigError):
            evaluate_grid(None, "oracle", [6], [4], per_cell=0)
        with self.assertRaises(ConfigError):
            evaluate_grid(None, "ngsi", [6], [4], per_cell=1)
        with self.assertRaises(ConfigError):
            evaluate_grid(None, "oracle", [6], [4], per_cell=1, jobs=0)

    def test_parse_methods(self) -> None:
        self.assertEqual(parse_methods("ngsi, search,ngsi"), (Method.Ngsi, Method.Search))
        with self.assertRaises(ConfigError):
            parse_methods("ngsi,bogus")
        with self.assertRaises(ConfigError):
            parse_methods(" , ")


class TestCsv(unittest.TestCase):
    def test_round_trip(self) -> None:
        records = [
            EvalRecord("search", 7, 6, 4, 0.75, {"timeout": 1}, 0.5, 1.25),
            EvalRecord("ngsi", 7, 6, 4, 1.0, {}, 0.001, 0.002),
        ]
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "grid.csv"
            write_csv(records, path)
            lines = path.read_text(encoding="utf-8").splitlines()
            self.assertEqual(lines[0], ",".join(CSV_HEADER))
            self.assertEqual(lines[1], "ngsi,7,6,4,1.0000,0.001000,0.002000,")
            self.assertEqual(lines[2], "search,7,6,4,0.7500,0.500000,1.250000,timeout:1")
            self.assertEqual(read_csv(path), sorted(records, key=EvalRecord.sort_key))

    def test_without_timing(self) -> None:
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "grid.csv"
            write_csv([EvalRecord("oracle", 6, 4, 2, 1.0, {}, 0.1, 0.2)], path, timing=False)
            self.assertEqual(path.read_text(encoding="utf-8").splitlines()[1], "oracle,6,4,2,1.0000,,,")
            (rec,) = read_csv(path)
            self.assertIsNone(rec.mean_time_s)

    def test_empty_grid_is_header_only(self) -> None:
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "grid.csv"
            write_csv([], path)
            self.assertEqual(path.read_text(encoding="utf-8"), ",".join(CSV_HEADER) + "\n")
            self.assertEqual(read_csv(path), [])

    def test_bad_header(self) -> None:
        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "grid.csv"
            path.write_text("a,b\n1,2\n", encoding="utf-8")
            with self.assertRaises(ConfigError):
                read_csv(path)


if __name__ == "__main__":
    unittest.main()
