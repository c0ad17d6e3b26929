"""
Command-line orchestrator for the sector planning toolkit.
Generates scenarios, runs single plans, runs paired benchmark campaigns and
re-renders saved results.

Exit codes: 0 success, 1 input/output or validation failure, 2 invalid
flags, 3 no path found.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.bench import (
    CampaignCell,
    CampaignSpec,
    RenderOptions,
    load_result,
    run_campaign,
    save_svg,
    write_result,
)
from src.observability import format_summary, node_count_wins, summarize, write_metrics_csv, write_summary
from src.planning import (
    AdvanceRule,
    ADRRTStarConfig,
    AngleSchedule,
    PlanResult,
    RRTStarConfig,
    SteerParams,
    plan_ad_rrt_star,
    plan_rrt_star,
)
from src.utils import (
    DigestMismatchError,
    GenerationFailedError,
    NoPathFoundError,
    ScenarioParseError,
    ScenarioValidationError,
    load_config,
)
from src.world import GenerationParams, ScenarioKind, generate_scenario, load_scenario, save_scenario

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_NO_PATH = 3

GENERATED_KINDS = [k.value for k in ScenarioKind if k != ScenarioKind.CUSTOM]
PLANNER_FLAGS = {"rrt-star": "rrt_star", "ad-rrt-star": "ad_rrt_star"}
DEFAULT_CELLS = GENERATED_KINDS + ["S4:100"]


def banner(title: str) -> None:
    print("=" * 70)
    print(title)
    print("=" * 70)


def add_planner_flags(parser: argparse.ArgumentParser, config) -> None:
    p = config.planner
    group = parser.add_argument_group("planner")
    group.add_argument("--iterations", type=int, default=p.iterations, help="Iterations N (default: %(default)s)")
    group.add_argument("--step", type=float, default=p.step, help="Incremental distance (default: %(default)s)")
    group.add_argument("--min-separation", type=float, default=None,
                       help="Minimum vertex spacing (default: step / 4)")
    group.add_argument("--goal-radius", type=float, default=p.goal_radius, help="Goal region radius")
    group.add_argument("--goal-bias", type=float, default=p.goal_bias, help="Probability of sampling the destination")
    group.add_argument("--cell-size", type=float, default=p.cell_size, help="Global grid cell size")
    group.add_argument("--inflation", type=float, default=None, help="Grid inflation (default: obstacle radius)")
    group.add_argument("--expansion-factor", type=float, default=p.expansion_factor, help="Expansion factor m")
    group.add_argument("--initial-angle", type=float, default=0.0, help="Initial half-angle, degrees")
    group.add_argument("--angle-increment", type=float, default=p.angle_increment_deg,
                       help="Half-angle widening step, degrees")
    group.add_argument("--max-angle", type=float, default=p.max_half_angle_deg, help="Maximum half-angle, degrees")
    group.add_argument("--stall-iterations", type=int, default=p.stall_iterations,
                       help="Iterations without progress before widening")
    group.add_argument("--stall-seconds", type=float, default=None,
                       help="Also widen after this many idle seconds (non-deterministic)")
    group.add_argument("--reach", type=float, default=None, help="Anchor reach distance (default: 1.5 * step)")
    group.add_argument("--no-advance", action="store_true", help="Keep the sector anchored at the source")
    group.add_argument("--no-shortcut", action="store_true", help="Return the raw parent-walk path")
    group.add_argument("--check-invariants", action="store_true", help="Verify tree invariants every insertion")


def planner_config(args, seed: int) -> ADRRTStarConfig:
    """Directed-planner config from flags; the baseline reuses its shared fields."""
    steer = SteerParams(
        step=args.step,
        min_separation=args.min_separation if args.min_separation is not None else args.step / 4.0,
    )
    return ADRRTStarConfig(
        max_iterations=args.iterations,
        steer=steer,
        goal_radius=args.goal_radius,
        goal_bias=args.goal_bias,
        seed=seed,
        check_invariants=args.check_invariants,
        cell_size=args.cell_size,
        inflation=args.inflation,
        expansion_factor=args.expansion_factor,
        angle=AngleSchedule(
            initial_half_angle=math.radians(args.initial_angle),
            increment=math.radians(args.angle_increment),
            max_half_angle=math.radians(args.max_angle),
            stall_iterations=args.stall_iterations,
            stall_seconds=args.stall_seconds,
        ),
        advance=AdvanceRule(reach_distance=args.reach, enabled=not args.no_advance),
        shortcut=not args.no_shortcut,
    )


def baseline_config(ad_config: ADRRTStarConfig) -> RRTStarConfig:
    return RRTStarConfig(**{name: getattr(ad_config, name) for name in RRTStarConfig.model_fields})


def metrics_line(result: PlanResult) -> str:
    m = result.metrics
    if not result.success:
        return f"{result.planner.value}: no path, nodes={m.node_count}, time={m.elapsed_seconds:.3f}s"
    return (
        f"{result.planner.value}: nodes={m.node_count}, total_cost={m.total_path_cost:.2f}, "
        f"average_cost={m.average_path_cost:.2f}, time={m.elapsed_seconds:.3f}s"
    )


def tagged(path: Path, tag: str) -> Path:
    return path.with_name(f"{path.stem}.{tag}{path.suffix}")


def cmd_gen_scenario(args) -> int:
    config = load_config()
    params = GenerationParams(
        width=args.map_size or config.map.width,
        height=args.map_size or config.map.height,
        obstacle_radius=args.radius or config.map.obstacle_radius,
        obstacle_count=args.obstacles,
    )
    scenario = generate_scenario(ScenarioKind(args.kind), args.seed, params)
    save_scenario(scenario, args.out)
    print(f"✓ {scenario.kind.value}: {len(scenario.obstacles)} obstacles, seed {scenario.seed} -> {args.out}")
    return EXIT_OK


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    ad_config = planner_config(args, args.seed)
    planners = ["rrt_star", "ad_rrt_star"] if args.planner == "both" else [PLANNER_FLAGS[args.planner]]
    out = Path(args.out) if args.out else Path(f"{Path(args.scenario).stem}.json")
    exit_code = EXIT_OK

    for name in planners:
        try:
            if name == "rrt_star":
                result = plan_rrt_star(scenario, baseline_config(ad_config))
            else:
                result = plan_ad_rrt_star(scenario, ad_config)
        except NoPathFoundError as e:
            result = e.result
            exit_code = EXIT_NO_PATH

        result_path = tagged(out, name) if len(planners) > 1 or not args.out else out
        write_result(result, result_path)
        mark = "✓" if result.success else "✗"
        print(f"{mark} {metrics_line(result)} -> {result_path}")
        if args.svg:
            svg_path = tagged(Path(args.svg), name) if len(planners) > 1 else Path(args.svg)
            save_svg(result, scenario, svg_path)
            print(f"✓ Rendered {svg_path}")
    return exit_code


def cmd_bench(args) -> int:
    config = load_config()
    cells = tuple(CampaignCell.parse(text) for text in args.cells)
    spec = CampaignSpec(
        cells=cells,
        trials=args.trials,
        base_seed=args.base_seed,
        planner=planner_config(args, args.base_seed),
        generation=GenerationParams(
            width=config.map.width,
            height=config.map.height,
            obstacle_radius=config.map.obstacle_radius,
        ),
    )
    threads = args.threads or config.bench.threads

    banner(f"Paired campaign: {len(cells)} cells x {spec.trials} trials ({spec.run_count} runs)")
    records = run_campaign(spec, threads=threads)
    frame = write_metrics_csv(records, args.out)
    print(f"\n✓ Wrote {len(frame)} rows to {args.out}")

    summary = summarize(frame)
    summary_path = Path(args.summary) if args.summary else tagged(Path(args.out), "summary")
    write_summary(summary, summary_path)
    print(f"✓ Wrote summary to {summary_path}\n")
    print(format_summary(summary))
    wins = node_count_wins(summary)
    print(f"\n📊 Directed planner grows fewer nodes in {len(wins)} of {len(cells)} cells")
    return EXIT_OK


def cmd_render(args) -> int:
    scenario = load_scenario(args.scenario)
    result = load_result(args.result)
    save_svg(result, scenario, args.out, RenderOptions(show_tree=not args.no_tree))
    print(f"✓ Rendered {result.planner.value} result -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    config = load_config()
    parser = argparse.ArgumentParser(description="Sector-directed path planning toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress at INFO level")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-scenario", help="Generate a scenario file")
    gen.add_argument("--kind", required=True, choices=GENERATED_KINDS)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="Scenario file to write")
    gen.add_argument("--obstacles", type=int, default=None, help="Override the kind's obstacle count")
    gen.add_argument("--map-size", type=float, default=None)
    gen.add_argument("--radius", type=float, default=None, help="Obstacle radius")
    gen.set_defaults(handler=cmd_gen_scenario)

    plan = commands.add_parser("plan", help="Plan on a scenario file")
    plan.add_argument("--scenario", required=True)
    plan.add_argument("--planner", choices=sorted(PLANNER_FLAGS) + ["both"], default="ad-rrt-star")
    plan.add_argument("--seed", type=int, default=0)
    plan.add_argument("--out", default=None, help="Result file (tagged per planner for 'both')")
    plan.add_argument("--svg", default=None, help="Also render an SVG")
    add_planner_flags(plan, config)
    plan.set_defaults(handler=cmd_plan)

    bench = commands.add_parser("bench", help="Run a paired benchmark campaign")
    bench.add_argument("--cells", nargs="+", default=DEFAULT_CELLS, help="KIND or KIND:COUNT entries")
    bench.add_argument("--trials", type=int, default=20)
    bench.add_argument("--base-seed", type=int, default=0)
    bench.add_argument("--threads", type=int, default=None, help="Worker processes (default: SECTORPLAN_THREADS)")
    bench.add_argument("--out", default="campaign.csv")
    bench.add_argument("--summary", default=None, help="Summary CSV (default: <out>.summary.csv)")
    add_planner_flags(bench, config)
    bench.set_defaults(handler=cmd_bench)

    render = commands.add_parser("render", help="Render a saved result over its scenario")
    render.add_argument("--result", required=True)
    render.add_argument("--scenario", required=True)
    render.add_argument("--out", required=True)
    render.add_argument("--no-tree", action="store_true")
    render.set_defaults(handler=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    level = "INFO" if args.verbose else load_config().logging.level
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")

    try:
        return args.handler(args)
    except ValidationError as e:
        print(f"✗ Invalid parameters: {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioParseError as e:
        print(f"✗ Scenario parse error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (ScenarioValidationError, GenerationFailedError, DigestMismatchError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (OSError, ValueError) as e:
        print(f"✗ Error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
