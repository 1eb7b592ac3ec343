"""On-disk JSON cache for sweep results.

Entries are keyed by (canonical group, command, caps, code version). A cached
beta_sep result is only served after its witness passes the group-atom test.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

from . import __version__
from .abelian import GroupSpec
from .blockmonoid import Context
from .errors import SepNoetherError
from .lattice import is_group_atom

log = logging.getLogger(__name__)


def cache_key(group: GroupSpec, command: str, params: dict) -> str:
    blob = json.dumps(
        {"group": list(group.moduli), "command": command, "params": params, "version": __version__},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def _path(cache_dir: Path, key: str) -> Path:
    return Path(cache_dir) / f"{key}.json"


def store(cache_dir: Path, key: str, payload: dict) -> None:
    path = _path(cache_dir, key)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"version": __version__, "payload": payload}, indent=2))
    tmp.replace(path)


def load(cache_dir: Path, key: str) -> dict | None:
    path = _path(cache_dir, key)
    if not path.exists():
        return None
    try:
        entry = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        log.warning("ignoring unreadable cache entry %s", path)
        return None
    if entry.get("version") != __version__:
        return None
    return entry.get("payload")


def witness_reverifies(group: GroupSpec, payload: dict) -> bool:
    """The stored witness is a group atom of the stored length."""
    try:
        ctx = Context.of(group, payload["witness"]["elements"])
        vec = tuple(payload["witness"]["vector"])
        return sum(vec) == payload["beta_sep"] and is_group_atom(ctx, vec).is_group_atom
    except (KeyError, TypeError, SepNoetherError):
        return False
