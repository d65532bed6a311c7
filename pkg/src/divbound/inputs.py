"""Load validated domain values from JSON or CSV files."""

from __future__ import annotations

import json
from pathlib import Path

from .classical import Distribution
from .coding import Code, Source
from .quantum import DensityMatrix

KINDS = ("distribution", "source", "code", "density_matrix")


class InputError(ValueError):
    """A file could not be parsed into the requested value."""


def _is_csv(path: Path, text: str) -> bool:
    if path.suffix.lower() == ".csv":
        return True
    if path.suffix.lower() == ".json":
        return False
    return not text.lstrip().startswith(("[", "{"))


def parse_inputs(path, kind: str):
    """Read ``path`` as ``kind``; errors name the file and the violated invariant."""
    if kind not in KINDS:
        raise InputError(f"unknown input kind {kind!r}; expected one of {KINDS}")
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        csv_format = _is_csv(path, text)
        if kind == "distribution":
            return Distribution.from_csv(text) if csv_format else Distribution.from_json(text)
        if kind == "source":
            return Source.from_csv(text) if csv_format else Source.from_json(text)
        if csv_format:
            raise InputError(f"{path}: {kind} files must be JSON")
        if kind == "code":
            return Code.from_json(text)
        return DensityMatrix.from_json(text)
    except InputError:
        raise
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: parse error: {exc}") from exc
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed {kind}: {exc!r}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: invalid {kind}: {exc}") from exc
