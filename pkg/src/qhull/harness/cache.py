"""On-disk cache of hull computations, keyed by content hash.

Enabled by the ``QHULL_CACHE`` environment variable (a directory).  A cached
hull is only installed after its embedding is re-verified, so a stale or
corrupt entry costs a recomputation, never a wrong answer.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading

import numpy as np

from ..config import get_config
from ..finite_algebra import ModuleHom, RightModule
from ..finite_algebra.structures import module_from_action

_lock = threading.Lock()


def cache_dir() -> str | None:
    return os.environ.get("QHULL_CACHE") or None


def key(M: RightModule, op: str) -> str:
    cfg = get_config()
    h = hashlib.sha256()
    for arr in (M.ring.add, M.ring.mul, M.add, M.act):
        h.update(np.ascontiguousarray(arr, dtype=np.int64).tobytes())
    h.update(f"{M.ring.one}|{op}|{cfg.max_module_order}|{cfg.max_hom_maps}".encode())
    return h.hexdigest()


def _path(k: str) -> str:
    return os.path.join(cache_dir(), k + ".json")


def store(M: RightModule, op: str, hull: RightModule, embedding: np.ndarray) -> None:
    if cache_dir() is None:
        return
    os.makedirs(cache_dir(), exist_ok=True)
    payload = {"label": hull.label, "add": hull.add.tolist(), "act": hull.act.tolist(), "embed": [int(v) for v in embedding]}
    with _lock:
        fd, tmp = tempfile.mkstemp(dir=cache_dir(), suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, _path(key(M, op)))


def fetch(M: RightModule, op: str):
    """(hull module, embedding hom) from the cache, or None."""
    if cache_dir() is None:
        return None
    try:
        with open(_path(key(M, op))) as fh:
            payload = json.load(fh)
        hull = module_from_action(M.ring, payload["add"], payload["act"], label=payload["label"], name=f"{op}({M.name})")
        emb = ModuleHom(M, hull, payload["embed"])
        emb.check()
        if not emb.is_injective:
            return None
        return hull, emb
    except Exception:  # unreadable or stale entry: recompute
        return None


def injective_hull_cached(M: RightModule):
    """injective_hull with the disk cache in front; the cached hull is re-checked."""
    from ..density import is_essential
    from ..hulls import HullResult, _memo, injective_hull, is_injective

    memo = _memo(M)
    if "injective" not in memo:
        hit = fetch(M, "E")
        if hit is not None:
            hull, emb = hit
            if is_essential(emb.image()).answer and is_injective(hull):
                memo["injective"] = HullResult(hull, emb, "injective")
    res = injective_hull(M)
    if cache_dir() is not None and fetch(M, "E") is None:
        store(M, "E", res.hull, res.embedding.table)
    return res
