"""Disk cache for orbit decompositions.

Orbit label arrays are the expensive artifact shared by all claim
drivers.  Entries are keyed by (tool version, group name, restrict
flag); writes go to a temp file and are renamed into place so concurrent
readers never see a partial entry.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

SCHEMA_VERSION = 1
TOOL_VERSION = "0.1.0"

ENV_CACHE_DIR = "GENLIFT_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "genlift"


def _key(group_name: str, restrict: bool) -> str:
    safe = group_name.replace("(", "_").replace(")", "").replace(",", "-")
    ver = TOOL_VERSION.replace(".", "-")
    return f"v{ver}_{safe}_{'gamma' if restrict else 'full'}"


def load_labels(cache_dir: Path, group_name: str, n: int, restrict: bool) -> Optional[np.ndarray]:
    base = Path(cache_dir) / _key(group_name, restrict)
    # with_suffix would eat anything after a dot in the key, so append
    meta_path = Path(str(base) + ".json")
    data_path = Path(str(base) + ".npy")
    if not (meta_path.exists() and data_path.exists()):
        return None
    try:
        meta = json.loads(meta_path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if meta.get("schema") != SCHEMA_VERSION or meta.get("n") != n:
        return None
    labels = np.load(data_path)
    if labels.shape != (n * n,):
        return None
    return labels


def save_labels(cache_dir: Path, group_name: str, n: int, restrict: bool, labels: np.ndarray) -> None:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    base = cache_dir / _key(group_name, restrict)
    meta = {
        "schema": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "group": group_name,
        "n": n,
        "restrict": restrict,
    }
    for suffix, writer in ((".npy", lambda p: np.save(p, labels)), (".json", None)):
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=suffix + ".tmp")
        os.close(fd)
        try:
            if writer is not None:
                with open(tmp, "wb") as fh:
                    np.save(fh, labels)
            else:
                Path(tmp).write_text(json.dumps(meta, sort_keys=True))
            os.replace(tmp, str(base) + suffix)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
