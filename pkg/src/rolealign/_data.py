"""Loader for the bundled, checksummed JSON data files.

Each data file wraps its payload in an envelope:

    {"format_version": 1, "checksum_algorithm": "sha256",
     "checksum": "<hex>", "payload": {...}}

The checksum covers the canonical serialization of the payload (UTF-8 JSON,
sorted keys, no whitespace) so any edit to the shipped numbers is detected
at load time.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import ConfigError

SUPPORTED_FORMAT_VERSION = 1


def canonical_json(obj: Any) -> bytes:
    """Serialize deterministically: sorted keys, no whitespace, UTF-8."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def load_checked(text: str, source: str) -> dict[str, Any]:
    """Parse an envelope document and verify its payload checksum."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: not valid JSON: {exc}") from exc
    for field in ("format_version", "checksum_algorithm", "checksum", "payload"):
        if field not in doc:
            raise ConfigError(f"{source}: missing envelope field {field!r}")
    if doc["format_version"] != SUPPORTED_FORMAT_VERSION:
        raise ConfigError(f"{source}: unsupported format_version {doc['format_version']!r}")
    if doc["checksum_algorithm"] != "sha256":
        raise ConfigError(f"{source}: unsupported checksum algorithm {doc['checksum_algorithm']!r}")
    digest = hashlib.sha256(canonical_json(doc["payload"])).hexdigest()
    if digest != doc["checksum"]:
        raise ConfigError(f"{source}: checksum mismatch (file corrupted or hand-edited)")
    return doc["payload"]


def load_bundled(name: str) -> dict[str, Any]:
    """Load one of the data files shipped inside the package."""
    text = resources.files("rolealign.data").joinpath(name).read_text(encoding="utf-8")
    return load_checked(text, f"bundled {name}")


def load_file(path: str | Path) -> dict[str, Any]:
    """Load an external data file with the same envelope and checks."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"data file not found: {p}")
    return load_checked(p.read_text(encoding="utf-8"), str(p))
