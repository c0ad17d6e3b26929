#!/usr/bin/env python3
"""
Full-scale acceptance run for the sector planning toolkit.
Each check reproduces one acceptance criterion at the sizes the unit tests
scale down; the script exits non-zero when any of them fails.
"""
import argparse
import contextlib
import io
import json
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import stats

sys.path.insert(0, str(Path(__file__).parent))

from main import DEFAULT_CELLS
from main import main as cli
from src.bench import CampaignCell, CampaignSpec, run_campaign
from src.geometry import Disc, Point2, Sector, Segment, euclidean_distance, point_in_sector, segment_hits_disc
from src.observability import NONDETERMINISTIC_COLUMNS, format_summary, node_count_wins, summarize
from src.planning import (
    ADRRTStarConfig,
    AdvanceRule,
    AngleSchedule,
    ConnectivityRegion,
    GridMap,
    NearParams,
    RRTStarConfig,
    SteerParams,
    astar,
    bounded_sample,
    build_region,
    check_tree_invariants,
    dijkstra_oracle,
    extend_tree,
    initialize_tree,
    near,
    nearest,
    plan_ad_rrt_star,
    plan_rrt_star,
)
from src.planning.ad_rrt_star import resolve_global_path
from src.utils import NoGlobalPathError, NoPathFoundError, make_rng
from src.world import Scenario, ScenarioKind, generate_scenario, is_free


def section(title):
    print("\n" + "=" * 70)
    print(title)
    print("=" * 70)


def completed(plan, scenario, cfg):
    try:
        return plan(scenario, cfg)
    except NoPathFoundError as e:
        return e.result


def check_campaign_trend(trials, iterations, threads):
    """Directed planner grows fewer nodes in all but one cell at no more than 2% extra cost."""
    section(f"Campaign Trend ({trials} trials, N={iterations})")
    spec = CampaignSpec(
        cells=tuple(CampaignCell.parse(text) for text in DEFAULT_CELLS),
        trials=trials,
        planner=ADRRTStarConfig(max_iterations=iterations),
    )
    start = time.perf_counter()
    summary = summarize(run_campaign(spec, threads=threads))
    print(format_summary(summary))
    print(f"\nCampaign time: {time.perf_counter() - start:.1f}s")

    wins = node_count_wins(summary)
    cells = len(spec.cells)
    all_good = len(wins) >= cells - 1
    print(f"{'✓' if all_good else '✗'} Fewer median nodes in {len(wins)} of {cells} cells")

    for (kind, count), cell in summary.groupby(["scenario_kind", "obstacle_count"], sort=True):
        costs = cell.set_index("planner")["median_total_path_cost"]
        ad, base = costs.get("ad_rrt_star"), costs.get("rrt_star")
        if ad is None or base is None or pd.isna(ad) or pd.isna(base):
            print(f"⚠ {kind}:{count} has no paired successes")
            continue
        ok = ad <= 1.02 * base
        all_good &= ok
        print(f"{'✓' if ok else '✗'} {kind}:{count} median cost {ad:.1f} vs {base:.1f}")
    return all_good


def check_tree_substrate(trees, extensions):
    """Randomized extend/rewire keeps the tree healthy; nearest/near match linear scans."""
    section(f"Tree Substrate ({trees} trees x {extensions} extensions)")
    scenario = Scenario(
        width=300.0, height=300.0,
        obstacles=(Disc(center=Point2(x=150, y=150), radius=40), Disc(center=Point2(x=70, y=220), radius=25)),
        source=Point2(x=10, y=10), destination=Point2(x=290, y=290),
    )
    steer = SteerParams(step=20.0, min_separation=0.0)
    near_params = NearParams.for_scenario(scenario, steer)
    rng = np.random.default_rng(0)
    violations = mismatches = 0

    for _ in range(trees):
        tree = initialize_tree(scenario.source)
        for _ in range(extensions):
            x, y = rng.uniform(0.0, 300.0, 2)
            if scenario.free_xy(float(x), float(y)):
                extend_tree(tree, Point2(x=float(x), y=float(y)), scenario, steer, near_params)
        violations += len(check_tree_invariants(tree, scenario))

        positions = tree.positions
        for qx, qy in rng.uniform(0.0, 300.0, size=(5, 2)):
            d = np.array([math.sqrt((qx - px) * (qx - px) + (qy - py) * (qy - py)) for px, py in positions])
            q = Point2(x=float(qx), y=float(qy))
            radius = float(rng.uniform(0.0, 60.0))
            if nearest(tree, q) != int(np.argmin(d)):
                mismatches += 1
            if near(tree, q, radius) != [i for i in range(len(d)) if d[i] <= radius]:
                mismatches += 1

    print(f"{'✓' if violations == 0 else '✗'} Invariant violations: {violations}")
    print(f"{'✓' if mismatches == 0 else '✗'} nearest/near mismatches: {mismatches}")
    return violations == 0 and mismatches == 0


def check_astar(grids):
    """A* equals the Dijkstra oracle on random 20x20 grids at 25% density."""
    section(f"A* Optimality ({grids} grids)")
    rng = np.random.default_rng(2024)
    solved = disagreements = 0
    start = time.perf_counter()
    for _ in range(grids):
        blocked = rng.random((20, 20)) < 0.25
        blocked[0, 0] = blocked[19, 19] = False
        grid = GridMap(cols=20, rows=20, cell_size=1.0, blocked=blocked)
        try:
            expected = dijkstra_oracle(grid, (0, 0), (19, 19))
        except NoGlobalPathError:
            try:
                astar(grid, (0, 0), (19, 19))
                disagreements += 1
            except NoGlobalPathError:
                pass
            continue
        solved += 1
        if astar(grid, (0, 0), (19, 19)).grid_cost != expected:
            disagreements += 1
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 10.0
    print(f"{'✓' if ok else '✗'} {solved} solvable grids, {disagreements} disagreements, {elapsed:.2f}s")
    return ok


def check_collision(pairs):
    """Analytic segment/disc test agrees with dense sampling away from tangency."""
    section(f"Collision Exactness ({pairs} pairs)")
    rng = np.random.default_rng(11)
    t = np.linspace(0.0, 1.0, 10_001)
    checked = disagreements = 0
    while checked < pairs:
        a, b, c = rng.uniform(0.0, 2.0, size=(3, 2))
        radius = float(rng.uniform(0.05, 0.5))
        d = b - a
        length_sq = float(d @ d)
        s = 0.0 if length_sq == 0.0 else min(1.0, max(0.0, float((c - a) @ d) / length_sq))
        if abs(float(np.linalg.norm(a + s * d - c)) - radius) < 1e-6:
            continue
        points = a[None, :] + t[:, None] * d[None, :]
        sampled = bool(np.any(np.linalg.norm(points - c, axis=1) <= radius))
        analytic = segment_hits_disc(
            Segment(a=Point2(x=a[0], y=a[1]), b=Point2(x=b[0], y=b[1])),
            Disc(center=Point2(x=c[0], y=c[1]), radius=radius),
        )
        disagreements += int(analytic != sampled)
        checked += 1
    print(f"{'✓' if disagreements == 0 else '✗'} Disagreements: {disagreements}")
    return disagreements == 0


def check_sector_equivalence(seeds, iterations):
    """A map-covering, non-advancing sector reproduces the baseline tree exactly."""
    section(f"Sector Equivalence ({seeds} seeds)")
    all_good = True
    for seed in range(seeds):
        scenario = generate_scenario(ScenarioKind.S4, seed)
        ad_cfg = ADRRTStarConfig(
            max_iterations=iterations, seed=seed, expansion_factor=1.0,
            angle=AngleSchedule(initial_half_angle=math.pi), advance=AdvanceRule(enabled=False),
        )
        base_cfg = RRTStarConfig(**{name: getattr(ad_cfg, name) for name in RRTStarConfig.model_fields})
        same = completed(plan_ad_rrt_star, scenario, ad_cfg).tree == completed(plan_rrt_star, scenario, base_cfg).tree
        all_good &= same
        print(f"{'✓' if same else '✗'} seed {seed}")
    return all_good


def check_sampling(draws):
    """Sector draws are members and free; full-disc radii follow (r / L)^2."""
    section(f"Sampling Soundness ({draws} draws)")
    scenario = generate_scenario(ScenarioKind.S4, 1)
    cfg = ADRRTStarConfig()
    region = build_region(scenario.source, resolve_global_path(scenario, cfg), 0, math.pi / 4,
                          cfg.region_params(scenario))
    rng = make_rng(0)
    outside = 0
    for _ in range(draws):
        q = bounded_sample(region, scenario, rng)
        outside += int(not (point_in_sector(q, region.sector) and is_free(q, scenario)))
    print(f"{'✓' if outside == 0 else '✗'} Draws outside sector or free space: {outside}")

    open_map = Scenario(width=100.0, height=100.0, source=Point2(x=5, y=5), destination=Point2(x=95, y=95))
    apex = Point2(x=50, y=50)
    disc = ConnectivityRegion(
        sector=Sector(apex=apex, heading=0.0, half_angle=math.pi, length=40.0),
        anchor_waypoint_index=0, expansion_scale=40.0, target_waypoint_index=0,
    )
    radii = np.array([euclidean_distance(bounded_sample(disc, open_map, rng), apex) for _ in range(draws)])
    ks = stats.kstest(radii, lambda r: np.clip((r / 40.0) ** 2, 0.0, 1.0)).statistic
    print(f"{'✓' if ks < 0.01 else '✗'} Radial KS distance: {ks:.5f}")
    return outside == 0 and ks < 0.01


def _cli_outputs(workdir):
    def run(*argv):
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
            return cli(list(argv))

    d = Path(workdir)
    run("gen-scenario", "--kind", "S5", "--seed", "3", "--out", str(d / "s.json"))
    run("plan", "--scenario", str(d / "s.json"), "--planner", "both", "--iterations", "2000",
        "--seed", "3", "--out", str(d / "r.json"), "--svg", str(d / "r.svg"))
    run("render", "--result", str(d / "r.ad_rrt_star.json"), "--scenario", str(d / "s.json"),
        "--out", str(d / "again.svg"))
    run("bench", "--cells", "S2", "S6", "--trials", "2", "--iterations", "500", "--threads", "2",
        "--out", str(d / "c.csv"))

    outputs = {}
    for path in sorted(d.iterdir()):
        if path.suffix == ".csv":
            frame = pd.read_csv(path, dtype=str, keep_default_na=False)
            outputs[path.name] = frame.drop(columns=[c for c in NONDETERMINISTIC_COLUMNS if c in frame]).to_csv()
        elif path.suffix == ".json" and path.name.startswith("r."):
            doc = json.loads(path.read_text(encoding="utf-8"))
            doc["metrics"].pop("elapsed_seconds")
            outputs[path.name] = json.dumps(doc, sort_keys=True)
        else:
            outputs[path.name] = path.read_bytes()
    return outputs


def check_determinism():
    """Two consecutive CLI sessions produce identical files (wall-clock values masked)."""
    section("Determinism")
    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        a, b = _cli_outputs(first), _cli_outputs(second)
    all_good = sorted(a) == sorted(b)
    for name in sorted(a):
        same = a[name] == b.get(name)
        all_good &= same
        print(f"{'✓' if same else '✗'} {name}")
    return all_good


def check_monotonicity(seeds, iterations):
    """Cost traces never increase; pruned paths are no longer than raw ones and stay free."""
    section(f"Best-Cost Monotonicity ({seeds} seeds per kind)")
    all_good = True
    for kind in (k for k in ScenarioKind if k != ScenarioKind.CUSTOM):
        problems = 0
        for seed in range(seeds):
            scenario = generate_scenario(kind, seed)
            for result in (
                completed(plan_rrt_star, scenario, RRTStarConfig(max_iterations=iterations, seed=seed)),
                completed(plan_ad_rrt_star, scenario, ADRRTStarConfig(max_iterations=iterations, seed=seed)),
            ):
                costs = [cost for _, cost in result.cost_trace]
                problems += sum(1 for x, y in zip(costs, costs[1:]) if y > x)
                if result.raw_path is not None:
                    problems += int(result.path.total_cost > result.raw_path.total_cost + 1e-9)
                if result.path is not None:
                    w = result.path.waypoints
                    problems += sum(1 for p, q in zip(w, w[1:]) if not scenario.edge_free_xy(p.x, p.y, q.x, q.y))
        all_good &= problems == 0
        print(f"{'✓' if problems == 0 else '✗'} {kind.value}: {problems} problems")
    return all_good


def main():
    """Run all acceptance checks."""
    parser = argparse.ArgumentParser(description="Acceptance checks at full scale")
    parser.add_argument("--quick", action="store_true", help="Shrink every check for a smoke run")
    parser.add_argument("--threads", type=int, default=4)
    args = parser.parse_args()
    quick = args.quick

    print("\n" + "=" * 70)
    print("Sector Planning Toolkit Acceptance Validation")
    print("=" * 70)

    checks = [
        ("Campaign Trend", lambda: check_campaign_trend(3 if quick else 20, 2000 if quick else 10_000, args.threads)),
        ("Tree Substrate", lambda: check_tree_substrate(20 if quick else 1000, 200 if quick else 1000)),
        ("A* Optimality", lambda: check_astar(500)),
        ("Collision Exactness", lambda: check_collision(1000 if quick else 10_000)),
        ("Sector Equivalence", lambda: check_sector_equivalence(10, 500 if quick else 2000)),
        ("Sampling Soundness", lambda: check_sampling(100_000)),
        ("Determinism", check_determinism),
        ("Best-Cost Monotonicity", lambda: check_monotonicity(1 if quick else 3, 1000 if quick else 5000)),
    ]

    results = {}
    for name, check_func in checks:
        results[name] = check_func()

    section("Validation Summary")
    all_passed = True
    for name, result in results.items():
        print(f"{'✓ PASS' if result else '✗ FAIL'}: {name}")
        all_passed &= result

    print("\n" + "=" * 70)
    print("✓ All acceptance checks passed!" if all_passed else "✗ Some acceptance checks failed.")
    print("=" * 70 + "\n")
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
