"""Bundled JSON fixtures and their loader."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import List, Optional

KINDS = ("zeroscheme", "gkm-graph", "bundle-data", "section", "component-set", "series")


class FixtureError(ValueError):
    """A fixture file that cannot be parsed or does not match its schema."""


def _bundled():
    return resources.files(__name__)


def bundled_names() -> List[str]:
    return sorted(p.name[:-5] for p in _bundled().iterdir() if p.name.endswith(".json"))


def load(ref: str) -> dict:
    """Load a fixture by bundled name or by file path."""
    path = Path(ref)
    if path.suffix == ".json" and path.exists():
        text = path.read_text(encoding="utf-8")
        where = str(path)
    else:
        name = ref[:-5] if ref.endswith(".json") else ref
        res = _bundled() / f"{name}.json"
        if not res.is_file():
            raise FixtureError(f"no fixture named {ref!r}")
        text = res.read_text(encoding="utf-8")
        where = f"{name}.json"
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    validate(data, where)
    return data


def validate(data, where: str = "<fixture>") -> None:
    if not isinstance(data, dict):
        raise FixtureError(f"{where}: top level must be an object")
    for key in ("name", "kind"):
        if key not in data:
            raise FixtureError(f"{where}: missing field {key!r}")
    if data["kind"] not in KINDS:
        raise FixtureError(f"{where}: unknown kind {data['kind']!r}")
    required = {
        "zeroscheme": ("section", "space"),
        "gkm-graph": ("graph", "betti"),
        "bundle-data": ("graph",),
        "section": ("section",),
        "component-set": ("components",),
        "series": ("series",),
    }[data["kind"]]
    for key in required:
        if key not in data:
            raise FixtureError(f"{where}: {data['kind']} fixture needs field {key!r}")


def catalog(kind: Optional[str] = None) -> List[dict]:
    out = []
    for name in bundled_names():
        data = load(name)
        if kind is not None and data["kind"] != kind:
            continue
        out.append(
            {
                "name": data["name"],
                "kind": data["kind"],
                "description": data.get("description", ""),
                "negative": bool(data.get("negative", False)),
                "long_running": bool(data.get("long_running", False)),
            }
        )
    return out
