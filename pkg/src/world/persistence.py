"""
Scenario file ingestion and persistence.

Scenario files are JSON documents (version 1). Unknown fields are rejected.
Reals are written with 17 significant digits, so save -> load reproduces
every coordinate exactly.
"""
import hashlib
import json
import re
from pathlib import Path as FilePath
from typing import Any, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..geometry import Disc, Point2
from ..utils.errors import ScenarioParseError, ScenarioValidationError
from ..utils.rng import MAX_SEED
from .scenario import Scenario, ScenarioKind

# placeholder for reals while the document passes through json.dumps
_REAL_TAG = "@@real:"


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class _XY(_Strict):
    x: float
    y: float


class _Obstacle(_Strict):
    x: float
    y: float
    r: float


class _MapSize(_Strict):
    width: float
    height: float


class ScenarioDocument(_Strict):
    """On-disk schema of a scenario file."""
    version: Literal[1]
    kind: ScenarioKind
    seed: int = Field(ge=0, le=MAX_SEED)
    map: _MapSize
    source: _XY
    destination: _XY
    obstacles: List[_Obstacle]
    nominal_count: Optional[int] = None


def scenario_to_document(scenario: Scenario) -> ScenarioDocument:
    return ScenarioDocument(
        version=1,
        kind=scenario.kind,
        seed=scenario.seed,
        map=_MapSize(width=scenario.width, height=scenario.height),
        source=_XY(x=scenario.source.x, y=scenario.source.y),
        destination=_XY(x=scenario.destination.x, y=scenario.destination.y),
        obstacles=[_Obstacle(x=d.center.x, y=d.center.y, r=d.radius) for d in scenario.obstacles],
        nominal_count=scenario.nominal_count,
    )


def _real_text(value: float) -> str:
    text = format(value, ".17g")
    return text if ("." in text or "e" in text) else text + ".0"


def _tag_reals(value: Any, reals: List[str]) -> Any:
    if isinstance(value, float):
        reals.append(_real_text(value))
        return f"{_REAL_TAG}{len(reals) - 1}"
    if isinstance(value, dict):
        return {key: _tag_reals(item, reals) for key, item in value.items()}
    if isinstance(value, list):
        return [_tag_reals(item, reals) for item in value]
    return value


def dump_scenario(scenario: Scenario) -> str:
    """Canonical text of a scenario file; reals carry 17 significant digits."""
    reals: List[str] = []
    document = _tag_reals(scenario_to_document(scenario).model_dump(mode="json", exclude_none=True), reals)
    text = json.dumps(document, indent=2) + "\n"
    return re.sub(f'"{_REAL_TAG}(\\d+)"', lambda m: reals[int(m.group(1))], text)


def scenario_digest(scenario: Scenario) -> str:
    """Content hash identifying a scenario across result files."""
    return hashlib.sha256(dump_scenario(scenario).encode("utf-8")).hexdigest()


def save_scenario(scenario: Scenario, path: Union[str, FilePath]) -> None:
    FilePath(path).write_text(dump_scenario(scenario), encoding="utf-8", newline="\n")


def _skip_space(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _line_of(text: str, loc: Sequence[Any]) -> int:
    """Best-effort 1-based line of the value at a validation error location."""
    decoder = json.JSONDecoder()
    pos = 0
    try:
        for part in loc:
            if isinstance(part, int):
                pos = _skip_space(text, text.index("[", pos) + 1)
                for _ in range(part):
                    _, pos = decoder.raw_decode(text, pos)
                    pos = _skip_space(text, text.index(",", pos) + 1)
            else:
                found = text.find(json.dumps(str(part)), pos)
                if found < 0:
                    break
                pos = found
    except ValueError:
        pass
    return text.count("\n", 0, pos) + 1


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text, separating schema problems from invariant violations."""
    try:
        json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"malformed scenario document: {e.msg}", line=e.lineno) from e

    try:
        document = ScenarioDocument.model_validate_json(text)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise ScenarioParseError(
            f"schema error: {first['msg']}", line=_line_of(text, first["loc"]), field=field,
        ) from e

    try:
        return Scenario(
            width=document.map.width,
            height=document.map.height,
            obstacles=tuple(
                Disc(center=Point2(x=o.x, y=o.y), radius=o.r) for o in document.obstacles
            ),
            source=Point2(x=document.source.x, y=document.source.y),
            destination=Point2(x=document.destination.x, y=document.destination.y),
            kind=document.kind,
            seed=document.seed,
            nominal_count=document.nominal_count,
        )
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise ScenarioValidationError(f"invalid scenario: {messages}") from e


def load_scenario(path: Union[str, FilePath]) -> Scenario:
    return parse_scenario(FilePath(path).read_text(encoding="utf-8"))
