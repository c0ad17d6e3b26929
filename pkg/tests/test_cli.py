"""
Tests for the command-line entry point and its exit codes.
"""
import contextlib
import io
import json
import math
import os
import sys
import tempfile
import unittest

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from main import EXIT_FAILURE, EXIT_NO_PATH, EXIT_OK, EXIT_USAGE, main
from src.bench import load_result
from src.geometry import Disc, Point2
from src.world import Scenario, load_scenario, save_scenario, scenario_digest


def P(x, y):
    return Point2(x=x, y=y)


def quiet(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestCLI(unittest.TestCase):
    """Test the gen-scenario, plan, bench and render subcommands."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name
        self.open_map = os.path.join(self.dir, "open.json")
        save_scenario(
            Scenario(width=200.0, height=200.0, source=P(10, 10), destination=P(190, 190)),
            self.open_map,
        )

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def test_gen_scenario_is_deterministic(self):
        first, second = self.path("a.json"), self.path("b.json")
        for out in (first, second):
            code, stdout, _ = quiet(["gen-scenario", "--kind", "S3", "--seed", "123456789", "--out", out])
            self.assertEqual(code, EXIT_OK)
            self.assertIn("✓", stdout)
        with open(first, "rb") as a, open(second, "rb") as b:
            self.assertEqual(a.read(), b.read())
        self.assertEqual(len(load_scenario(first).obstacles), 68)

    def test_gen_scenario_count_override(self):
        out = self.path("s4.json")
        code, _, _ = quiet(["gen-scenario", "--kind", "S4", "--seed", "1", "--obstacles", "100", "--out", out])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(load_scenario(out).obstacles), 100)

    def test_unknown_kind(self):
        with self.assertRaises(SystemExit) as ctx:
            quiet(["gen-scenario", "--kind", "S9", "--out", self.path("x.json")])
        self.assertEqual(ctx.exception.code, EXIT_USAGE)

    def test_plan_both_planners(self):
        out = self.path("run.json")
        code, stdout, _ = quiet([
            "plan", "--scenario", self.open_map, "--planner", "both",
            "--iterations", "600", "--seed", "4", "--out", out,
        ])
        self.assertEqual(code, EXIT_OK)
        baseline = load_result(self.path("run.rrt_star.json"))
        directed = load_result(self.path("run.ad_rrt_star.json"))
        digest = scenario_digest(load_scenario(self.open_map))
        self.assertEqual(baseline.scenario_digest, digest)
        self.assertEqual(directed.scenario_digest, digest)
        self.assertEqual(baseline.seed, directed.seed)
        self.assertTrue(baseline.success and directed.success)
        self.assertIn("nodes=", stdout)

    def test_plan_with_svg(self):
        out, svg = self.path("one.json"), self.path("one.svg")
        code, _, _ = quiet([
            "plan", "--scenario", self.open_map, "--iterations", "300", "--out", out, "--svg", svg,
        ])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(load_result(out).planner.value, "ad_rrt_star")
        with open(svg, encoding="utf-8") as f:
            self.assertIn("final-path", f.read())

    def test_plan_unreachable(self):
        ring = tuple(
            Disc(center=P(150 + 30 * math.cos(k * math.pi / 12), 150 + 30 * math.sin(k * math.pi / 12)), radius=10.0)
            for k in range(24)
        )
        scenario_path = self.path("ring.json")
        save_scenario(
            Scenario(width=200.0, height=200.0, obstacles=ring, source=P(20, 20), destination=P(150, 150)),
            scenario_path,
        )
        out = self.path("ring.result.json")
        code, stdout, _ = quiet(["plan", "--scenario", scenario_path, "--iterations", "150", "--out", out])
        self.assertEqual(code, EXIT_NO_PATH)
        self.assertIn("✗", stdout)
        result = load_result(out)
        self.assertFalse(result.success)
        self.assertIsNone(result.path)

    def test_invalid_parameter(self):
        code, _, err = quiet(["plan", "--scenario", self.open_map, "--goal-bias", "2", "--out", self.path("x.json")])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Invalid parameters", err)

    def test_malformed_scenario(self):
        bad = self.path("bad.json")
        with open(bad, "w", encoding="utf-8") as f:
            f.write("{not json")
        code, _, _ = quiet(["plan", "--scenario", bad])
        self.assertEqual(code, EXIT_FAILURE)

    def test_missing_scenario(self):
        code, _, _ = quiet(["plan", "--scenario", self.path("absent.json")])
        self.assertEqual(code, EXIT_FAILURE)

    def test_render(self):
        out, svg = self.path("r.json"), self.path("r.svg")
        quiet(["plan", "--scenario", self.open_map, "--iterations", "300", "--out", out])
        code, _, _ = quiet(["render", "--result", out, "--scenario", self.open_map, "--out", svg, "--no-tree"])
        self.assertEqual(code, EXIT_OK)
        with open(svg, encoding="utf-8") as f:
            text = f.read()
        self.assertTrue(text.startswith("<?xml"))
        self.assertNotIn("tree-edges", text)

    def test_render_wrong_scenario(self):
        out = self.path("r.json")
        quiet(["plan", "--scenario", self.open_map, "--iterations", "300", "--out", out])
        other = self.path("other.json")
        quiet(["gen-scenario", "--kind", "S4", "--out", other])
        code, _, err = quiet(["render", "--result", out, "--scenario", other, "--out", self.path("x.svg")])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn("✗", err)

    def test_render_truncated_result(self):
        out = self.path("t.json")
        quiet(["plan", "--scenario", self.open_map, "--iterations", "300", "--out", out])
        with open(out, encoding="utf-8") as f:
            doc = json.load(f)
        del doc["tree"]
        with open(out, "w", encoding="utf-8") as f:
            json.dump(doc, f)
        code, _, err = quiet(["render", "--result", out, "--scenario", self.open_map, "--out", self.path("t.svg")])
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn("✗", err)

    def test_bench(self):
        csv_path = self.path("campaign.csv")
        code, stdout, _ = quiet([
            "bench", "--cells", "S4", "S2:20", "--trials", "1", "--iterations", "40",
            "--threads", "1", "--out", csv_path,
        ])
        self.assertEqual(code, EXIT_OK)
        with open(csv_path, encoding="utf-8") as f:
            self.assertEqual(len(f.read().splitlines()), 5)
        self.assertTrue(os.path.exists(self.path("campaign.summary.csv")))
        self.assertIn("Paired campaign", stdout)


if __name__ == '__main__':
    unittest.main()
