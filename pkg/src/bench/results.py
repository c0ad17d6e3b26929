"""
Result files: a PlanResult as a JSON document carrying the path, metrics,
config echo, convergence trace and the full tree.
"""
import json
from pathlib import Path as FilePath
from typing import Any, Dict, List, Optional, Union

from pydantic import ValidationError

from ..geometry import Point2, Sector
from ..planning import GlobalPath, PlanMetrics, PlannerKind, PlanResult, RegionEvent, Tree
from ..world import Path

RESULT_VERSION = 1


def _points(points) -> List[List[float]]:
    return [[p.x, p.y] for p in points]


def _path_doc(path: Optional[Path]) -> Optional[Dict[str, Any]]:
    if path is None:
        return None
    return {"waypoints": _points(path.waypoints), "total_cost": path.total_cost}


def result_to_document(result: PlanResult) -> Dict[str, Any]:
    tree = result.tree
    xs, ys, parents, costs = tree.snapshot()
    document: Dict[str, Any] = {
        "version": RESULT_VERSION,
        "planner": result.planner.value,
        "scenario_digest": result.scenario_digest,
        "rng": result.rng_algorithm,
        "seed": result.seed,
        "config": result.config,
        "config_digest": result.config_digest,
        "success": result.success,
        "metrics": result.metrics.model_dump(mode="json"),
        "path": _path_doc(result.path),
        "raw_path": _path_doc(result.raw_path),
        "cost_trace": [[iteration, cost] for iteration, cost in result.cost_trace],
        "global_path": None,
        "final_sector": None,
        "region_events": [event.model_dump(mode="json") for event in result.region_events],
        "tree": {"x": list(xs), "y": list(ys), "parent": list(parents), "cost": list(costs)},
    }
    if result.global_path is not None:
        document["global_path"] = {
            "waypoints": _points(result.global_path.waypoints),
            "grid_cost": result.global_path.grid_cost,
            "fallback": result.global_path.fallback,
        }
    if result.final_sector is not None:
        sector = result.final_sector
        document["final_sector"] = {
            "apex": [sector.apex.x, sector.apex.y],
            "heading": sector.heading,
            "half_angle": sector.half_angle,
            "length": sector.length,
        }
    return document


def dump_result(result: PlanResult) -> str:
    return json.dumps(result_to_document(result), indent=2) + "\n"


def write_result(result: PlanResult, path: Union[str, FilePath]) -> None:
    FilePath(path).write_text(dump_result(result), encoding="utf-8", newline="\n")


def _load_path(doc: Optional[Dict[str, Any]]) -> Optional[Path]:
    if doc is None:
        return None
    return Path(
        waypoints=tuple(Point2(x=x, y=y) for x, y in doc["waypoints"]),
        total_cost=doc["total_cost"],
    )


def parse_result(text: str) -> PlanResult:
    """Rebuild a PlanResult from result-file text; any malformed document raises ValueError."""
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("version") != RESULT_VERSION:
        version = doc.get("version") if isinstance(doc, dict) else None
        raise ValueError(f"unsupported result version {version!r}")
    try:
        return _result_from_document(doc)
    except (KeyError, IndexError, TypeError) as e:
        raise ValueError(f"malformed result document: {type(e).__name__} {e}") from e
    except ValidationError as e:
        raise ValueError(f"malformed result document: {e.errors()[0]['msg']}") from e


def _result_from_document(doc: Dict[str, Any]) -> PlanResult:
    tree_doc = doc["tree"]
    tree = Tree.from_records(tree_doc["x"], tree_doc["y"], tree_doc["parent"], tree_doc["cost"])

    global_path = None
    if doc.get("global_path") is not None:
        g = doc["global_path"]
        global_path = GlobalPath(
            waypoints=tuple(Point2(x=x, y=y) for x, y in g["waypoints"]),
            grid_cost=g["grid_cost"],
            fallback=g["fallback"],
        )
    final_sector = None
    if doc.get("final_sector") is not None:
        s = doc["final_sector"]
        final_sector = Sector(
            apex=Point2(x=s["apex"][0], y=s["apex"][1]),
            heading=s["heading"],
            half_angle=s["half_angle"],
            length=s["length"],
        )

    return PlanResult(
        planner=PlannerKind(doc["planner"]),
        scenario_digest=doc["scenario_digest"],
        seed=doc["seed"],
        rng_algorithm=doc["rng"],
        success=doc["success"],
        path=_load_path(doc.get("path")),
        raw_path=_load_path(doc.get("raw_path")),
        metrics=PlanMetrics.model_validate(doc["metrics"]),
        cost_trace=tuple((int(i), float(c)) for i, c in doc.get("cost_trace", [])),
        tree=tree,
        config=doc.get("config", {}),
        config_digest=doc.get("config_digest", ""),
        global_path=global_path,
        final_sector=final_sector,
        region_events=tuple(RegionEvent.model_validate(e) for e in doc.get("region_events", [])),
    )


def load_result(path: Union[str, FilePath]) -> PlanResult:
    return parse_result(FilePath(path).read_text(encoding="utf-8"))
