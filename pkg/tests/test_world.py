"""
Tests for the scenario model, generation and scenario files.
"""
import json
import os
import sys
import tempfile
import unittest

import numpy as np
from pydantic import ValidationError
from scipy import stats

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.geometry import Disc, Point2
from src.utils.errors import GenerationFailedError, ScenarioParseError, ScenarioValidationError
from src.world import (
    KIND_OBSTACLE_COUNTS,
    GenerationParams,
    Path,
    Scenario,
    ScenarioKind,
    dump_scenario,
    generate_scenario,
    is_free,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_digest,
)


def P(x, y):
    return Point2(x=x, y=y)


def custom(obstacles=(), source=(10, 10), destination=(90, 90), size=100.0):
    return Scenario(
        width=size,
        height=size,
        obstacles=tuple(Disc(center=P(x, y), radius=r) for x, y, r in obstacles),
        source=P(*source),
        destination=P(*destination),
    )


class TestScenario(unittest.TestCase):
    """Test Scenario invariants and free-space queries."""

    def test_is_free(self):
        s = custom([(50, 50, 10)])
        self.assertTrue(is_free(P(20, 20), s))
        self.assertFalse(is_free(P(50, 50), s))
        self.assertFalse(is_free(P(60, 50), s))  # boundary is not free
        self.assertFalse(is_free(P(-1, 20), s))
        self.assertFalse(is_free(P(20, 100.5), s))

    def test_empty_obstacles_free(self):
        s = custom()
        self.assertTrue(is_free(P(0, 0), s))
        self.assertTrue(is_free(P(100, 100), s))

    def test_source_inside_obstacle_rejected(self):
        with self.assertRaises(ValidationError):
            custom([(10, 10, 5)])

    def test_obstacle_center_out_of_bounds_rejected(self):
        with self.assertRaises(ValidationError):
            custom([(150, 50, 5)])

    def test_kind_count_enforced(self):
        with self.assertRaises(ValidationError):
            Scenario(width=100, height=100, source=P(1, 1), destination=P(99, 99), kind=ScenarioKind.S4)

    def test_path_cost_consistency(self):
        path = Path.from_points([P(0, 0), P(3, 4), P(3, 10)])
        self.assertEqual(path.total_cost, 11.0)
        self.assertEqual(path.edge_count, 2)
        self.assertEqual(path.average_cost, 5.5)
        with self.assertRaises(ValidationError):
            Path(waypoints=(P(0, 0), P(3, 4)), total_cost=4.0)
        with self.assertRaises(ValidationError):
            Path(waypoints=(P(0, 0),), total_cost=0.0)


class TestGeneration(unittest.TestCase):
    """Test deterministic S1-S6 generation."""

    def test_counts_per_kind(self):
        for kind, count in KIND_OBSTACLE_COUNTS.items():
            s = generate_scenario(kind, 5)
            self.assertEqual(len(s.obstacles), count, kind)
            self.assertTrue(is_free(s.source, s))
            self.assertTrue(is_free(s.destination, s))
            for disc in s.obstacles:
                self.assertTrue(s.in_bounds(disc.center.x, disc.center.y))

    def test_source_and_destination_corners(self):
        s = generate_scenario(ScenarioKind.S4, 0)
        self.assertAlmostEqual(s.source.x, 50.0)
        self.assertAlmostEqual(s.source.y, 50.0)
        self.assertAlmostEqual(s.destination.x, 950.0)
        self.assertAlmostEqual(s.destination.y, 950.0)

    def test_deterministic(self):
        first = dump_scenario(generate_scenario(ScenarioKind.S1, 42))
        for _ in range(5):
            self.assertEqual(dump_scenario(generate_scenario(ScenarioKind.S1, 42)), first)
        self.assertNotEqual(dump_scenario(generate_scenario(ScenarioKind.S1, 43)), first)

    def test_s3_has_68(self):
        self.assertEqual(len(generate_scenario(ScenarioKind.S3, 123456789).obstacles), 68)

    def test_count_override(self):
        s = generate_scenario(ScenarioKind.S4, 1, GenerationParams(obstacle_count=100))
        self.assertEqual(len(s.obstacles), 100)
        self.assertEqual(s.nominal_count, 100)
        self.assertEqual(generate_scenario(ScenarioKind.S4, 1).nominal_count, None)

    def test_custom_kind_not_generated(self):
        with self.assertRaises(ValueError):
            generate_scenario(ScenarioKind.CUSTOM, 0)

    def test_overcrowded_fails(self):
        params = GenerationParams(width=100, height=100, obstacle_radius=60, obstacle_count=1)
        with self.assertRaises(GenerationFailedError):
            generate_scenario(ScenarioKind.S4, 0, params)

    def test_s1_clusters_near_source(self):
        near, total = 0, 0
        for seed in range(100):
            s = generate_scenario(ScenarioKind.S1, seed)
            centers = s.obstacle_centers
            near += int(np.sum((centers[:, 0] <= s.width / 2) & (centers[:, 1] <= s.height / 2)))
            total += len(centers)
        self.assertGreaterEqual(near / total, 0.7)

    def test_s4_uniform_chi_square(self):
        params = GenerationParams(obstacle_radius=1.0, obstacle_count=1000)
        s = generate_scenario(ScenarioKind.S4, 7, params)
        counts, _, _ = np.histogram2d(
            s.obstacle_centers[:, 0], s.obstacle_centers[:, 1], bins=4, range=[[0, 1000], [0, 1000]]
        )
        _, p_value = stats.chisquare(counts.ravel())
        self.assertGreater(p_value, 0.01)

    def test_s5_concentrated_in_middle(self):
        s = generate_scenario(ScenarioKind.S5, 9)
        centers = s.obstacle_centers
        middle = np.sum((np.abs(centers[:, 0] - 500) < 250) & (np.abs(centers[:, 1] - 500) < 250))
        self.assertGreater(middle / len(centers), 0.4)


class TestScenarioFiles(unittest.TestCase):
    """Test scenario file round-trips and diagnostics."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "s.json")

    def tearDown(self):
        self.tmp.cleanup()

    def test_round_trip(self):
        s = generate_scenario(ScenarioKind.S6, 17)
        save_scenario(s, self.path)
        loaded = load_scenario(self.path)
        self.assertEqual(loaded, s)
        self.assertEqual(scenario_digest(loaded), scenario_digest(s))

    def test_round_trip_with_override(self):
        s = generate_scenario(ScenarioKind.S4, 2, GenerationParams(obstacle_count=100))
        self.assertEqual(parse_scenario(dump_scenario(s)), s)

    def test_source_inside_disc_is_validation_error(self):
        doc = json.loads(dump_scenario(custom([(50, 50, 5)])))
        doc["source"] = {"x": 50, "y": 50}
        with self.assertRaises(ScenarioValidationError):
            parse_scenario(json.dumps(doc))

    def test_unknown_field_is_parse_error(self):
        doc = json.loads(dump_scenario(custom()))
        doc["color"] = "red"
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario(json.dumps(doc))
        self.assertEqual(ctx.exception.field, "color")

    def test_malformed_reports_line(self):
        text = dump_scenario(custom()).replace('"kind"', 'kind', 1)
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario(text)
        self.assertIsNotNone(ctx.exception.line)

    def test_schema_error_reports_line_and_field(self):
        doc = json.loads(dump_scenario(custom([(20, 20, 2), (50, 50, 5), (80, 30, 3)])))
        doc["obstacles"][2]["r"] = "wide"
        text = json.dumps(doc, indent=2)
        expected = next(i for i, line in enumerate(text.splitlines(), 1) if '"wide"' in line)
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario(text)
        self.assertEqual(ctx.exception.field, "obstacles.2.r")
        self.assertEqual(ctx.exception.line, expected)

    def test_missing_field_reports_enclosing_line(self):
        doc = json.loads(dump_scenario(custom()))
        del doc["map"]["height"]
        text = json.dumps(doc, indent=2)
        expected = next(i for i, line in enumerate(text.splitlines(), 1) if '"map"' in line)
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario(text)
        self.assertEqual(ctx.exception.field, "map.height")
        self.assertEqual(ctx.exception.line, expected)

    def test_reals_written_with_17_digits(self):
        s = custom([(33.3, 66.6, 2.5)], source=(0.1, 10), destination=(90, 90))
        text = dump_scenario(s)
        self.assertIn('"x": 0.10000000000000001', text)
        self.assertIn('"x": 33.299999999999997', text)
        self.assertIn('"r": 2.5', text)
        self.assertIn('"width": 100.0', text)
        self.assertEqual(parse_scenario(text), s)
        self.assertEqual(dump_scenario(parse_scenario(text)), text)

    def test_bad_version(self):
        doc = json.loads(dump_scenario(custom()))
        doc["version"] = 2
        with self.assertRaises(ScenarioParseError) as ctx:
            parse_scenario(json.dumps(doc))
        self.assertEqual(ctx.exception.field, "version")

    def test_s4_with_70_obstacles_accepted(self):
        s = generate_scenario(ScenarioKind.S4, 3)
        doc = json.loads(dump_scenario(s))
        self.assertEqual(len(doc["obstacles"]), 70)
        self.assertEqual(parse_scenario(json.dumps(doc)).kind, ScenarioKind.S4)


if __name__ == '__main__':
    unittest.main()
