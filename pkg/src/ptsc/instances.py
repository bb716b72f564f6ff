"""JSON instance files and random instance generation."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .structural import is_structurally_controllable
from .structured import PerturbedStructuredSystem

__all__ = [
    "InstanceError",
    "GenerationError",
    "parse_instance",
    "load_instance",
    "instance_to_dict",
    "dump_instance",
    "instance_hash",
    "GenConfig",
    "random_instance",
]

log = logging.getLogger(__name__)


class InstanceError(ValueError):
    """Malformed instance file; the message names the offending field."""


class GenerationError(RuntimeError):
    pass


def _index_list(obj, key: str, width: int, n: int) -> list[tuple[int, ...]]:
    raw = obj.get(key, [])
    if not isinstance(raw, list):
        raise InstanceError(f"{key}: expected a list")
    limits = (n, n) if key == "A_stars" else (n,) if key == "b_stars" else (n, n + 1)
    out, seen = [], set()
    for k, item in enumerate(raw):
        if isinstance(item, int) and width == 1:
            item = [item]
        if (
            not isinstance(item, list)
            or len(item) != width
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise InstanceError(f"{key}[{k}]: expected {width} integer index(es), got {item!r}")
        for x, hi in zip(item, limits):
            if not 1 <= x <= hi:
                raise InstanceError(f"{key}[{k}]: index {x} out of range 1..{hi}")
        t = tuple(item)
        if t in seen:
            log.warning("%s[%d]: duplicate entry %s dropped", key, k, list(t))
            continue
        seen.add(t)
        out.append(t)
    return out


def parse_instance(text: str) -> PerturbedStructuredSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise InstanceError("top level: expected a JSON object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceError(f"n: expected a positive integer, got {n!r}")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise InstanceError("name: expected a string")
    a = _index_list(obj, "A_stars", 2, n)
    b = [i for (i,) in _index_list(obj, "b_stars", 1, n)]
    f = _index_list(obj, "F_stars", 2, n)
    return PerturbedStructuredSystem.from_stars(n, a, b, f, name)


def load_instance(path) -> PerturbedStructuredSystem:
    return parse_instance(Path(path).read_text())


def instance_to_dict(sys: PerturbedStructuredSystem, seed: int | None = None) -> dict:
    d: dict = {}
    if sys.name is not None:
        d["name"] = sys.name
    d["n"] = sys.n
    d["A_stars"] = [list(p) for p in sys.a_bar.sorted_stars()]
    d["b_stars"] = [r for r, _ in sys.b_bar.sorted_stars()]
    d["F_stars"] = [list(p) for p in sys.f_bar.sorted_stars()]
    if seed is not None:
        d["seed"] = seed
    return d


def dump_instance(sys: PerturbedStructuredSystem, seed: int | None = None) -> str:
    return json.dumps(instance_to_dict(sys, seed), separators=(", ", ": ")) + "\n"


def instance_hash(sys: PerturbedStructuredSystem) -> str:
    """sha256 of the canonical serialization (name and seed excluded)."""
    d = instance_to_dict(sys)
    d.pop("name", None)
    blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class GenConfig:
    n: int
    density_a: float = 0.3
    density_b: float | None = None
    density_f: float = 0.1
    require_struct_ctrl: bool = False
    max_attempts: int = 10_000
    # exact number of F stars; overrides density_f when set
    f_count: int | None = None
    # plant a random chain input -> x_p1 -> ... -> x_pn under the random stars
    backbone: bool = False

    def __post_init__(self):
        for name in ("density_a", "density_b", "density_f"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.n < 1:
            raise ValueError("n must be positive")


def _draw_one(cfg: GenConfig, rng) -> PerturbedStructuredSystem:
    import numpy as np

    n = cfg.n
    db = cfg.density_a if cfg.density_b is None else cfg.density_b
    amask = rng.random((n, n)) < cfg.density_a
    bmask = rng.random(n) < db
    if cfg.backbone:
        perm = rng.permutation(n)
        bmask[perm[0]] = True
        amask[perm[1:], perm[:-1]] = True
    a = [(int(r) + 1, int(c) + 1) for r, c in zip(*np.nonzero(amask))]
    b = [int(r) + 1 for r in np.flatnonzero(bmask)]
    if cfg.f_count is None:
        fmask = rng.random((n, n + 1)) < cfg.density_f
        f = [(int(r) + 1, int(c) + 1) for r, c in zip(*np.nonzero(fmask))]
    else:
        flat = rng.choice(n * (n + 1), size=cfg.f_count, replace=False)
        f = sorted((int(x) // (n + 1) + 1, int(x) % (n + 1) + 1) for x in flat)
    return PerturbedStructuredSystem.from_stars(n, a, b, f)


def random_instance(cfg: GenConfig, seed=None) -> PerturbedStructuredSystem:
    """Star positions i.i.d. by density; rejection-sampled when struct. ctrl. is required."""
    import numpy as np

    rng = np.random.default_rng(seed)
    for _ in range(cfg.max_attempts):
        sys = _draw_one(cfg, rng)
        if not cfg.require_struct_ctrl or is_structurally_controllable(sys.a_bar, sys.b_bar).ok:
            return sys
    raise GenerationError(
        f"no structurally controllable instance in {cfg.max_attempts} attempts; "
        "raise --density-a / --density-b"
    )
