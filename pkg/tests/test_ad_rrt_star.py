"""
Tests for sector construction, bounded sampling, the angle schedule,
anchor advancement, path pruning and the angle-directed planner.
"""
import math
import os
import sys
import unittest
from unittest import mock

import numpy as np
from scipy import stats

# Add parent directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.geometry import Disc, Point2, Sector, euclidean_distance, point_in_sector
from src.planning import (
    ADRRTStarConfig,
    AdvanceRule,
    AngleSchedule,
    ConnectivityRegion,
    GlobalPath,
    RegionParams,
    RRTStarConfig,
    SamplingStats,
    advance_anchor,
    bounded_sample,
    build_region,
    check_tree_invariants,
    expansion_scale,
    extract_path,
    initialize_tree,
    insert_node,
    plan_ad_rrt_star,
    plan_rrt_star,
    prune_path,
    should_widen,
    widen,
)
from src.planning.ad_rrt_star import resolve_global_path
from src.utils.errors import NoGlobalPathError, NoPathFoundError, SamplingExhaustedError
from src.utils.rng import make_rng
from src.world import Scenario, ScenarioKind, generate_scenario, is_free


def P(x, y):
    return Point2(x=x, y=y)


def open_scenario(size=100.0, source=(5, 5), destination=(95, 95), obstacles=()):
    return Scenario(
        width=size, height=size,
        obstacles=tuple(Disc(center=P(x, y), radius=r) for x, y, r in obstacles),
        source=P(*source), destination=P(*destination),
    )


def region_at(apex, heading, half_angle, length):
    return ConnectivityRegion(
        sector=Sector(apex=apex, heading=heading, half_angle=half_angle, length=length),
        anchor_waypoint_index=0,
        expansion_scale=length,
        target_waypoint_index=0,
    )


def run(plan, scenario, cfg):
    try:
        return plan(scenario, cfg)
    except NoPathFoundError as e:
        return e.result


def chain_tree(points):
    tree = initialize_tree(P(*points[0]))
    leaf = 0
    for xy in points[1:]:
        leaf = insert_node(tree, leaf, P(*xy))
    return tree, leaf


PARAMS = RegionParams(step=30.0, expansion_scale=100.0, reach_distance=45.0)


class TestRegionConstruction(unittest.TestCase):
    """Test the expansion scale and sector construction."""

    def test_expansion_scale(self):
        self.assertEqual(expansion_scale(1000.0, 10.0), 100.0)
        self.assertEqual(expansion_scale(1000.0, 1.0), 1000.0)
        self.assertAlmostEqual(expansion_scale(707.1, 4.0), 176.775)
        with self.assertRaises(ValueError):
            expansion_scale(1000.0, 0.0)
        with self.assertRaises(ValueError):
            expansion_scale(-1.0, 2.0)

    def test_region_params_defaults(self):
        s = open_scenario(size=1000.0)
        params = ADRRTStarConfig().region_params(s)
        self.assertAlmostEqual(params.expansion_scale, s.diagonal / 10.0)
        self.assertEqual(params.reach_distance, 45.0)
        self.assertEqual(params.initial_half_angle, 0.0)

    def test_heading_and_length(self):
        gpath = GlobalPath(waypoints=(P(0, 0), P(60, 80)), grid_cost=100.0)
        region = build_region(P(0, 0), gpath, 0, 0.0, PARAMS)
        self.assertAlmostEqual(region.sector.heading, math.atan2(80, 60))
        self.assertEqual(region.sector.length, 130.0)
        self.assertEqual(region.target_waypoint_index, 1)
        self.assertEqual(region.sector.half_angle, 0.0)

    def test_length_floor_is_expansion_scale(self):
        gpath = GlobalPath(waypoints=(P(0, 0), P(60, 80)), grid_cost=100.0)
        params = PARAMS.model_copy(update={"expansion_scale": 200.0})
        self.assertEqual(build_region(P(0, 0), gpath, 0, 0.0, params).sector.length, 200.0)

    def test_skips_waypoints_within_reach(self):
        gpath = GlobalPath(waypoints=(P(0, 0), P(10, 0), P(0, 100)), grid_cost=110.0)
        region = build_region(P(0, 0), gpath, 0, 0.0, PARAMS)
        self.assertEqual(region.target_waypoint_index, 2)
        self.assertAlmostEqual(region.sector.heading, math.pi / 2)

    def test_anchor_on_last_waypoint(self):
        gpath = GlobalPath(waypoints=(P(0, 0), P(10, 0)), grid_cost=10.0)
        region = build_region(P(10, 0), gpath, 1, 0.0, PARAMS)
        self.assertEqual(region.target_waypoint_index, 1)
        self.assertEqual(region.sector.heading, 0.0)
        self.assertEqual(region.sector.length, 100.0)

    def test_full_disc(self):
        gpath = GlobalPath(waypoints=(P(0, 0), P(60, 80)), grid_cost=100.0)
        self.assertTrue(build_region(P(0, 0), gpath, 0, math.pi, PARAMS).sector.is_full_disc)

    def test_bad_anchor_index(self):
        gpath = GlobalPath(waypoints=(P(0, 0), P(60, 80)), grid_cost=100.0)
        with self.assertRaises(IndexError):
            build_region(P(0, 0), gpath, 5, 0.0, PARAMS)


class TestBoundedSample(unittest.TestCase):
    """Test sector-restricted sampling."""

    def test_samples_in_sector_and_free(self):
        s = generate_scenario(ScenarioKind.S4, 1)
        cfg = ADRRTStarConfig()
        gpath = resolve_global_path(s, cfg)
        region = build_region(s.source, gpath, 0, math.pi / 6, cfg.region_params(s))
        rng = make_rng(0)
        for _ in range(10_000):
            q = bounded_sample(region, s, rng)
            self.assertTrue(point_in_sector(q, region.sector))
            self.assertTrue(is_free(q, s))

    def test_ray_samples_stay_on_ray(self):
        s = open_scenario(size=300.0)
        heading = 0.7
        region = region_at(P(20, 30), heading, 0.0, 150.0)
        rng = make_rng(3)
        ux, uy = math.cos(heading), math.sin(heading)
        for _ in range(2000):
            q = bounded_sample(region, s, rng)
            cross = (q.x - 20) * uy - (q.y - 30) * ux
            self.assertLessEqual(abs(cross), 1e-9)
            self.assertLessEqual(euclidean_distance(q, P(20, 30)), 150.0 + 1e-9)

    def test_exhausted_inside_obstacle(self):
        s = open_scenario(obstacles=[(50, 50, 30)])
        region = region_at(P(50, 50), 0.0, 0.3, 20.0)
        counter = SamplingStats()
        with self.assertRaises(SamplingExhaustedError):
            bounded_sample(region, s, make_rng(0), counter)
        self.assertEqual(counter.rejected, 10_000)

    def test_full_disc_radius_distribution(self):
        """Radii over a full disc follow the area-uniform CDF (r / L)^2."""
        s = open_scenario()
        length = 40.0
        region = region_at(P(50, 50), 0.0, math.pi, length)
        rng = make_rng(11)
        radii = np.array([
            euclidean_distance(bounded_sample(region, s, rng), P(50, 50)) for _ in range(100_000)
        ])
        result = stats.kstest(radii, lambda r: np.clip((r / length) ** 2, 0.0, 1.0))
        self.assertLess(result.statistic, 0.01)

    def test_map_covering_disc_uses_uniform_sampling(self):
        s = open_scenario()
        region = region_at(P(50, 50), 0.0, math.pi, 200.0)
        sample = bounded_sample(region, s, make_rng(5))
        rng = make_rng(5)
        self.assertEqual(sample, P(float(rng.random()) * 100.0, float(rng.random()) * 100.0))


class TestAngleSchedule(unittest.TestCase):
    """Test widening triggers and the half-angle cap."""

    def test_should_widen(self):
        schedule = AngleSchedule()
        self.assertFalse(should_widen(0, schedule))
        self.assertFalse(should_widen(199, schedule))
        self.assertTrue(should_widen(200, schedule))
        timed = AngleSchedule(stall_seconds=1.0)
        self.assertTrue(should_widen(0, timed, idle_seconds=2.0))
        self.assertFalse(should_widen(0, timed, idle_seconds=0.5))
        self.assertFalse(should_widen(0, schedule, idle_seconds=100.0))

    def test_twelve_steps_reach_pi(self):
        schedule = AngleSchedule()
        half = 0.0
        for _ in range(11):
            half = widen(half, schedule)
        self.assertLess(half, math.pi)
        half = widen(half, schedule)
        self.assertEqual(half, math.pi)
        self.assertEqual(widen(half, schedule), math.pi)

    def test_custom_cap(self):
        schedule = AngleSchedule(increment=0.5, max_half_angle=1.2)
        self.assertEqual(widen(widen(widen(0.0, schedule), schedule), schedule), 1.2)

    def test_initial_above_cap_rejected(self):
        with self.assertRaises(ValueError):
            AngleSchedule(initial_half_angle=1.0, max_half_angle=0.5)


class TestAdvanceAnchor(unittest.TestCase):
    """Test anchor advancement along the global path."""

    def setUp(self):
        self.gpath = GlobalPath(
            waypoints=(P(0, 0), P(100, 0), P(200, 0), P(300, 0)), grid_cost=300.0
        )

    def test_unchanged_when_far(self):
        tree = initialize_tree(P(0, 0))
        region = build_region(P(0, 0), self.gpath, 0, 0.5, PARAMS)
        self.assertIs(advance_anchor(tree, self.gpath, region, PARAMS), region)

    def test_advances_and_resets_angle(self):
        tree, _ = chain_tree([(0, 0), (30, 0), (60, 0)])
        region = build_region(P(0, 0), self.gpath, 0, 0.5, PARAMS)
        advanced = advance_anchor(tree, self.gpath, region, PARAMS)
        self.assertIsNot(advanced, region)
        self.assertEqual(advanced.sector.apex, P(60, 0))
        self.assertEqual(advanced.anchor_waypoint_index, 1)
        self.assertEqual(advanced.target_waypoint_index, 2)
        self.assertEqual(advanced.sector.half_angle, 0.0)

    def test_disabled(self):
        tree, _ = chain_tree([(0, 0), (30, 0), (60, 0)])
        params = PARAMS.model_copy(update={"advance_enabled": False})
        region = build_region(P(0, 0), self.gpath, 0, 0.5, params)
        self.assertIs(advance_anchor(tree, self.gpath, region, params), region)

    def test_stops_at_last_waypoint(self):
        tree, _ = chain_tree([(250, 0), (280, 0), (300, 0)])
        region = build_region(P(250, 0), self.gpath, 2, 0.0, PARAMS)
        self.assertEqual(region.target_waypoint_index, 3)
        self.assertIs(advance_anchor(tree, self.gpath, region, PARAMS), region)

    def test_anchor_index_monotone(self):
        tree, _ = chain_tree([(x, 0) for x in range(0, 301, 30)])
        region = build_region(P(0, 0), self.gpath, 0, 0.0, PARAMS)
        seen = [region.anchor_waypoint_index]
        for _ in range(10):
            region = advance_anchor(tree, self.gpath, region, PARAMS)
            seen.append(region.anchor_waypoint_index)
        self.assertEqual(seen, sorted(seen))
        self.assertEqual(region.anchor_waypoint_index, 2)
        self.assertEqual(region.target_waypoint_index, 3)
        self.assertEqual(region.sector.apex, P(210, 0))


class TestPrunePath(unittest.TestCase):
    """Test shortcut pruning of the extracted path."""

    def test_collinear_chain_collapses(self):
        tree, leaf = chain_tree([(0, 0), (10, 0), (20, 0)])
        path = prune_path(tree, leaf, open_scenario())
        self.assertEqual(path.waypoints, (P(0, 0), P(20, 0)))

    def test_bent_chain_collapses(self):
        tree, leaf = chain_tree([(0, 0), (10, 0), (20, 0), (30, 5)])
        path = prune_path(tree, leaf, open_scenario())
        self.assertEqual(len(path.waypoints), 2)
        self.assertAlmostEqual(path.total_cost, math.hypot(30, 5))

    def test_obstacle_blocks_shortcut(self):
        s = open_scenario(size=200.0, source=(0, 0), destination=(100, 0), obstacles=[(50, 0, 10)])
        tree, leaf = chain_tree([(0, 0), (25, 20), (50, 40), (75, 20), (100, 0)])
        raw = extract_path(tree, leaf)
        path = prune_path(tree, leaf, s)
        self.assertEqual(path.waypoints, (P(0, 0), P(75, 20), P(100, 0)))
        self.assertLessEqual(path.total_cost, raw.total_cost)
        for a, b in zip(path.waypoints, path.waypoints[1:]):
            self.assertTrue(s.edge_free_xy(a.x, a.y, b.x, b.y))

    def test_shortcut_disabled(self):
        tree, leaf = chain_tree([(0, 0), (10, 0), (20, 0)])
        self.assertEqual(prune_path(tree, leaf, open_scenario(), shortcut=False), extract_path(tree, leaf))


class TestADRRTStar(unittest.TestCase):
    """Test the angle-directed planner loop."""

    def test_matches_rrt_star_with_map_covering_sector(self):
        for seed in range(5):
            s = generate_scenario(ScenarioKind.S4, seed)
            ad_cfg = ADRRTStarConfig(
                max_iterations=300,
                seed=seed,
                expansion_factor=1.0,
                angle=AngleSchedule(initial_half_angle=math.pi),
                advance=AdvanceRule(enabled=False),
            )
            base_cfg = RRTStarConfig(**{name: getattr(ad_cfg, name) for name in RRTStarConfig.model_fields})
            ad = run(plan_ad_rrt_star, s, ad_cfg)
            base = run(plan_rrt_star, s, base_cfg)
            self.assertEqual(ad.tree, base.tree, seed)
            self.assertEqual(ad.success, base.success)
            self.assertEqual(ad.cost_trace, base.cost_trace)

    def test_fewer_nodes_than_rrt_star_on_open_map(self):
        s = open_scenario(size=1000.0, source=(50, 50), destination=(950, 950))
        ad = run(plan_ad_rrt_star, s, ADRRTStarConfig(max_iterations=1500, seed=0))
        base = run(plan_rrt_star, s, RRTStarConfig(max_iterations=1500, seed=0))
        self.assertTrue(ad.success)
        self.assertLess(ad.metrics.node_count, base.metrics.node_count)
        self.assertGreater(ad.metrics.advancements, 0)

    def test_deterministic(self):
        s = generate_scenario(ScenarioKind.S4, 2)
        cfg = ADRRTStarConfig(max_iterations=400, seed=2)
        first, second = run(plan_ad_rrt_star, s, cfg), run(plan_ad_rrt_star, s, cfg)
        self.assertEqual(first.tree, second.tree)
        self.assertEqual(first.path, second.path)
        self.assertEqual(first.region_events, second.region_events)
        self.assertEqual(first.final_sector, second.final_sector)

    def test_audit_and_region_events(self):
        s = generate_scenario(ScenarioKind.S4, 4)
        cfg = ADRRTStarConfig(
            max_iterations=800, seed=4, audit=True, angle=AngleSchedule(stall_iterations=50),
        )
        result = run(plan_ad_rrt_star, s, cfg)
        self.assertTrue(result.audit)
        for entry in result.audit:
            self.assertTrue(point_in_sector(entry.sample, entry.sector), entry.iteration)

        events = result.region_events
        self.assertEqual(events[0].reason, "initial")
        for previous, current in zip(events, events[1:]):
            self.assertGreaterEqual(current.anchor_waypoint_index, previous.anchor_waypoint_index)
            if current.reason == "advance":
                self.assertEqual(current.half_angle, cfg.angle.initial_half_angle)
            else:
                self.assertGreaterEqual(current.half_angle, previous.half_angle)
            self.assertLessEqual(current.half_angle, math.pi)
        widened = sum(
            1 for previous, current in zip(events, events[1:])
            if current.reason in ("widen", "exhausted") and current.half_angle > previous.half_angle
        )
        self.assertEqual(result.metrics.widenings, widened)

    def test_pruned_path_no_longer_than_raw(self):
        s = open_scenario(size=400.0, source=(20, 20), destination=(380, 380), obstacles=[(200, 200, 50)])
        result = plan_ad_rrt_star(s, ADRRTStarConfig(max_iterations=1500, seed=1))
        self.assertEqual(check_tree_invariants(result.tree, s), [])
        self.assertTrue(result.success)
        self.assertLessEqual(result.path.total_cost, result.raw_path.total_cost + 1e-9)
        self.assertEqual(result.path.waypoints[0], s.source)
        self.assertEqual(result.path.waypoints[-1], result.raw_path.waypoints[-1])
        for a, b in zip(result.path.waypoints, result.path.waypoints[1:]):
            self.assertTrue(s.edge_free_xy(a.x, a.y, b.x, b.y))
        self.assertEqual(result.metrics.total_path_cost, result.path.total_cost)

    def test_blocked_grid_falls_back_to_straight_line(self):
        s = open_scenario(obstacles=[(14, 5, 6)])
        cfg = ADRRTStarConfig(max_iterations=200, seed=0, cell_size=10.0)
        gpath = resolve_global_path(s, cfg)
        self.assertTrue(gpath.fallback)
        self.assertEqual(gpath.waypoints, (s.source, s.destination))
        result = run(plan_ad_rrt_star, s, cfg)
        self.assertTrue(result.global_path.fallback)

    def test_routing_failure_is_logged(self):
        s = open_scenario()
        with mock.patch("src.planning.ad_rrt_star.plan_global_path", side_effect=NoGlobalPathError("walled")):
            with self.assertLogs("src.planning.ad_rrt_star", level="WARNING") as logs:
                gpath = resolve_global_path(s, ADRRTStarConfig())
        self.assertTrue(gpath.fallback)
        self.assertIn("walled", logs.output[0])


if __name__ == '__main__':
    unittest.main()
