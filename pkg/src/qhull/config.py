"""Size caps and debug switches, scoped with a context variable."""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Config:
    max_module_order: int = 4096
    max_hom_maps: int = 2**20
    bruteforce_threshold: int = 2**16
    max_submodules: int = 20000
    max_end_ring: int = 1024
    max_projective_rank: int = 2
    racom_max_hull: int = 64
    debug_crosscheck: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


_current: contextvars.ContextVar[Config] = contextvars.ContextVar("qhull_config", default=Config())


def get_config() -> Config:
    return _current.get()


def set_config(cfg: Config) -> None:
    _current.set(cfg)


@contextlib.contextmanager
def configured(**overrides):
    token = _current.set(replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
