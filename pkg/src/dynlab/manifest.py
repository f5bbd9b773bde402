"""Run manifests: what produced an artifact, with input digests and no timestamps."""

from __future__ import annotations

import hashlib
from pathlib import Path

from . import __version__


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()


def file_digest(path: str | Path) -> str:
    return digest(Path(path).read_bytes())


def build_manifest(command: str, *, inputs: dict | None = None, seed=None, params: dict | None = None) -> dict:
    """Manifest for one CLI invocation; ``inputs`` maps a role to a file path."""
    return {
        "command": command,
        "inputs": {role: file_digest(path) for role, path in sorted((inputs or {}).items())},
        "seed": seed,
        "params": dict(sorted((params or {}).items())),
        "version": __version__,
    }
