"""JSON ingestion and serialization for models, streams and trajectories.

Probabilities in input files may be decimal numbers or exact fraction
strings like ``"3/10"``; fractions are parsed exactly and then converted to
float, so hand-written matrices survive ingestion without parse round-off.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .atemporal import ModeAssignment
from .errors import ValidationError
from .markov import ModeDistribution, TransitionMatrix
from .model import (
    ComponentSpec,
    HornRule,
    Observation,
    ObservationStream,
    SystemModel,
)


def parse_probability(value: Any, where: str = "") -> float:
    """A probability from JSON: a number, or an exact fraction string."""
    if isinstance(value, bool):
        raise ValidationError(f"{where}: expected a probability, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ValidationError(
                f"{where}: cannot parse probability {value!r}") from None
    raise ValidationError(f"{where}: expected a probability, got {value!r}")


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise ValidationError(f"{where}: missing required key {key!r}",
                              element=key)
    return obj[key]


def component_from_dict(obj: dict) -> ComponentSpec:
    where = f"component {obj.get('id', '?')!r}"
    if not isinstance(obj, dict):
        raise ValidationError("component entries must be objects")
    comp_id = _require(obj, "id", where)
    modes = tuple(_require(obj, "modes", where))
    rows = _require(obj, "matrix", where)
    if not isinstance(rows, list) or len(rows) != len(modes):
        raise ValidationError(
            f"{where}: matrix must have one row per mode", element=comp_id)
    entries = [[parse_probability(x, f"{where} matrix") for x in row]
               for row in rows]
    initial = None
    if obj.get("initial_distribution") is not None:
        initial = ModeDistribution(
            modes, [parse_probability(x, f"{where} initial distribution")
                    for x in obj["initial_distribution"]])
    return ComponentSpec(
        id=comp_id, modes=modes,
        correct_mode=_require(obj, "correct_mode", where),
        matrix=TransitionMatrix(modes, entries),
        initial_distribution=initial)


def model_from_dict(obj: dict) -> SystemModel:
    if not isinstance(obj, dict):
        raise ValidationError("model file must contain a JSON object")
    components = tuple(component_from_dict(c)
                       for c in _require(obj, "components", "model"))
    rules = []
    for i, r in enumerate(obj.get("rules", [])):
        where = f"rule #{i}"
        body = frozenset(
            (_require(a, "component", where), _require(a, "mode", where))
            for a in _require(r, "body", where))
        rules.append(HornRule(body=body, head=_require(r, "head", where)))
    exclusive = tuple(frozenset(pair) for pair in obj.get("exclusive", []))
    return SystemModel(components=components, rules=tuple(rules),
                       exclusive=exclusive)


def model_to_dict(model: SystemModel) -> dict:
    return {
        "components": [
            {
                "id": c.id,
                "modes": list(c.modes),
                "correct_mode": c.correct_mode,
                "matrix": [[float(x) for x in row] for row in c.matrix.entries],
                "initial_distribution":
                    None if c.initial_distribution is None
                    else [float(x) for x in c.initial_distribution.probabilities],
            }
            for c in model.components
        ],
        "rules": [
            {
                "body": [{"component": comp, "mode": mode}
                         for comp, mode in sorted(r.body)],
                "head": r.head,
            }
            for r in model.rules
        ],
        "exclusive": sorted(sorted(pair) for pair in model.exclusive),
    }


def stream_from_list(entries: Sequence[dict]) -> ObservationStream:
    if not isinstance(entries, list):
        raise ValidationError("observation file must contain a JSON array")
    parsed = []
    for i, e in enumerate(entries):
        where = f"observation #{i}"
        parsed.append(Observation(
            t=int(_require(e, "t", where)),
            present=frozenset(e.get("present", [])),
            absent=frozenset(e.get("absent", []))))
    return ObservationStream(tuple(parsed))


def stream_to_list(stream: ObservationStream) -> list[dict]:
    return [
        {"t": e.t, "present": sorted(e.present), "absent": sorted(e.absent)}
        for e in stream.entries
    ]


def trajectories_from_list(entries: Sequence, ) -> list[tuple[ModeAssignment, ...]]:
    """Trajectories for the `rank` command: a JSON array of trajectories,
    each an array of ``{"t": ..., "assignment": {component: mode}}``."""
    if not isinstance(entries, list):
        raise ValidationError("trajectory file must contain a JSON array")
    out = []
    for i, steps in enumerate(entries):
        where = f"trajectory #{i}"
        if not isinstance(steps, list) or not steps:
            raise ValidationError(f"{where}: must be a nonempty array")
        out.append(tuple(
            ModeAssignment.from_mapping(int(_require(s, "t", where)),
                                        _require(s, "assignment", where))
            for s in steps))
    return out


def _load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"{path}: no such file", element=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})",
                              element=str(path)) from None


def load_model(path: str | Path) -> SystemModel:
    return model_from_dict(_load_json(path))


def load_stream(path: str | Path) -> ObservationStream:
    return stream_from_list(_load_json(path))


def load_trajectories(path: str | Path) -> list[tuple[ModeAssignment, ...]]:
    return trajectories_from_list(_load_json(path))


def dumps_report(report: dict) -> str:
    """Canonical report encoding: sorted keys, two-space indent, trailing
    newline. Identical inputs yield byte-identical output."""
    return json.dumps(report, indent=2, sort_keys=True,
                      allow_nan=False) + "\n"
