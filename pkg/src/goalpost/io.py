"""JSON schemas for instances, distributions, and solver results.

Rationals travel as strings ("7/2") or bare integers; floats are rejected to
keep every value exact.  Parse errors name the offending JSON path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

from .errors import InstanceParseError
from .learning import GroupMixture, PositionDistribution
from .model import (
    Agent,
    CapacityModel,
    Instance,
    TargetSet,
    rational,
    rational_str,
)


def _parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceParseError(
            f"{path}: expected an integer or \"num/den\" string, got {value!r}"
        )
    try:
        return rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InstanceParseError(
            f"{path}: expected an integer or \"num/den\" string, got {value!r}"
        ) from None


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise InstanceParseError(f"{path}: expected an object")
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise InstanceParseError(f"{path}: expected an array")
    return value


def parse_instance(payload: Any) -> Instance:
    """Instance from the documented JSON object; see README for the schema."""
    obj = _expect_object(payload, "$")
    raw_agents = _expect_list(obj.get("agents", []), "agents")
    agents = []
    for idx, entry in enumerate(raw_agents):
        record = _expect_object(entry, f"agents[{idx}]")
        position = _parse_rational(record.get("position"), f"agents[{idx}].position")
        capacity = _parse_rational(record.get("capacity"), f"agents[{idx}].capacity")
        group = record.get("group", 0)
        if not isinstance(group, int) or isinstance(group, bool):
            raise InstanceParseError(f"agents[{idx}].group: expected an integer")
        agents.append(Agent(position, capacity, group))
    default_groups = max((a.group for a in agents), default=0) + 1
    num_groups = obj.get("num_groups", default_groups)
    if not isinstance(num_groups, int) or isinstance(num_groups, bool):
        raise InstanceParseError("num_groups: expected an integer")
    model_name = obj.get("capacity_model", "individualized")
    try:
        model = CapacityModel(model_name)
    except ValueError:
        raise InstanceParseError(
            f"capacity_model: expected \"common\" or \"individualized\", "
            f"got {model_name!r}"
        ) from None
    return Instance(tuple(agents), num_groups, model)


def load_instance(path: str) -> Instance:
    return parse_instance(_load_json(path))


def parse_distribution(
    payload: Any,
) -> Union[PositionDistribution, GroupMixture]:
    """Distribution (or mixture of them) from the documented JSON object."""
    obj = _expect_object(payload, "$")
    if "components" in obj:
        raw = _expect_list(obj["components"], "components")
        components = []
        for idx, entry in enumerate(raw):
            record = _expect_object(entry, f"components[{idx}]")
            weight = _parse_rational(record.get("weight"), f"components[{idx}].weight")
            dist = _parse_single_distribution(
                record.get("dist"), f"components[{idx}].dist"
            )
            components.append((weight, dist))
        return GroupMixture(tuple(components))
    return _parse_single_distribution(obj, "$")


def _parse_single_distribution(payload: Any, path: str) -> PositionDistribution:
    obj = _expect_object(payload, path)
    capacity = _parse_rational(obj.get("capacity"), f"{path}.capacity")
    raw = _expect_list(obj.get("support", []), f"{path}.support")
    support = []
    for idx, entry in enumerate(raw):
        record = _expect_object(entry, f"{path}.support[{idx}]")
        position = _parse_rational(
            record.get("position"), f"{path}.support[{idx}].position"
        )
        probability = _parse_rational(
            record.get("probability"), f"{path}.support[{idx}].probability"
        )
        support.append((position, probability))
    return PositionDistribution(tuple(support), capacity)


def load_distribution(path: str) -> Union[PositionDistribution, GroupMixture]:
    return parse_distribution(_load_json(path))


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}: invalid JSON ({exc})") from None


def targets_jsonable(targets: TargetSet) -> list[str]:
    return targets.as_strings()


def rational_jsonable(value: Fraction) -> str:
    return rational_str(value)
