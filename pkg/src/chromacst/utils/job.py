"""
job.py
Job configuration: field validation tables, config files and the resolved
snapshot written into every output directory.
Created 17/10/2026
"""

from __future__ import annotations

import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

import attrs

from chromacst.errors import ConfigurationError, PathError
from chromacst.utils.store import dump_json

logger = logging.getLogger(__name__)

SNAPSHOT_NAME = "config.json"

# Field table entries:
#   (int, min, max) / (float, min, max)  numeric range, inclusive
#   (str, (choice, ...))                  enumerated string
#   (str,) / (bool,)                      free string / flag
#   (list, element_type, min_len, max_len)


def _check_number(field: str, value, entry: tuple):
    kind, low, high = entry
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"Field {field} must be {kind.__name__}, instead got: {type(value).__name__}.")
    if kind is int and float(value) != int(value):
        raise ConfigurationError(f"Field {field} must be an integer, instead got: {value}.")
    value = kind(value)
    if value < low:
        raise ConfigurationError(f"{field} must be greater than or equal to {low}, instead got {value}.")
    if value > high:
        raise ConfigurationError(f"{field} must be less than or equal to {high}, instead got {value}.")
    return value


def validate_field(field: str, value, entry: tuple):
    """
    Type and range check one value against its table entry.

    Returns:
        The value converted to the entry type.
    """
    kind = entry[0]
    if kind in (int, float):
        return _check_number(field, value, entry)
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigurationError(f"Field {field} must be true or false, instead got: {value!r}.")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"Field {field} must be a string, instead got: {type(value).__name__}.")
        if len(entry) > 1 and value not in entry[1]:
            raise ConfigurationError(f"{field} must be one of {', '.join(entry[1])}, instead got {value!r}.")
        return value
    if kind is list:
        _, element, low, high = entry
        if isinstance(value, str) or not hasattr(value, "__iter__"):
            raise ConfigurationError(f"Field {field} must be a list, instead got: {value!r}.")
        if element is str:
            value = [validate_field(f"{field}[{i}]", v, (str,)) for i, v in enumerate(value)]
        else:
            value = [_check_number(f"{field}[{i}]", v, (element, float("-inf"), float("inf"))) for i, v in enumerate(value)]
        if not low <= len(value) <= high:
            raise ConfigurationError(f"{field} must have between {low} and {high} entries, instead got {len(value)}.")
        return value
    raise ConfigurationError(f"No validator for field {field} of type {kind}.")


def load_config_file(path: Path, command: str) -> dict:
    """
    Read a .toml or .json job file. A table named after the command, when
    present, is used in place of the whole document.
    """
    path = Path(path)
    if not path.exists():
        raise PathError(path, "Pass --config a .toml or .json file.")
    if path.suffix == ".toml":
        with open(path, "rb") as file:
            document = tomllib.load(file)
    elif path.suffix == ".json":
        with open(path, "r") as file:
            document = json.load(file)
    else:
        raise ConfigurationError(f"Config files must be .toml or .json, instead got {path.name}.")

    if isinstance(document.get(command), dict):
        document = document[command]
    return document


@attrs.frozen
class JobConfig:
    """The fully resolved parameters of one job."""

    command: str
    values: dict[str, Any] = attrs.field(factory=dict)

    def __getitem__(self, field: str):
        return self.values[field]

    def to_json(self) -> dict:
        return {"command": self.command, **self.values}

    def save(self, out_dir: Path) -> Path:
        path = Path(out_dir) / SNAPSHOT_NAME
        dump_json(path, self.to_json())
        return path


def resolve_config(
    command: str,
    fields: dict[str, tuple],
    defaults: dict[str, Any],
    config_path: Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> JobConfig:
    """
    Resolve a job configuration: defaults, then the config file, then flags.

    Args:
        command (str): The command name.
        fields (dict): Field validation table.
        defaults (dict): Default per field. None marks a required field.
        config_path (Path, optional): A .toml or .json job file.
        overrides (dict, optional): Flag values; None means not given.

    Raises:
        ConfigurationError: Unknown field, bad value or missing required field.

    Returns:
        JobConfig: The resolved configuration.
    """
    values = dict(defaults)
    layers = []
    if config_path is not None:
        layers.append(("config file", load_config_file(config_path, command)))
    layers.append(("flags", {k: v for k, v in (overrides or {}).items() if v is not None}))

    for source, layer in layers:
        unknown = sorted(set(layer) - set(fields))
        if unknown:
            raise ConfigurationError(f"Unknown {command} field(s) in {source}: {', '.join(unknown)}.")
        values.update(layer)

    for field, entry in fields.items():
        if values.get(field) is None:
            raise ConfigurationError(f"Missing field for {command}: {field}.")
        values[field] = validate_field(field, values[field], entry)

    logger.debug("Resolved %s config: %s", command, values)
    return JobConfig(command, values)
