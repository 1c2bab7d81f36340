"""Run configuration: a single TOML file, schema-validated before computation.

Grammar (all keys shown; [map] accepts either a catalog name or an explicit
map block mirroring MapSpec.to_dict):

    window = [x0, y0, x1, y1]

    [map]
    catalog = "exp_shear"            # or an explicit block:
    # kind = "translation"; dx = 1.0; dy = 0.0
    # symmetry = "none" | "annulus" | "torus"; fixed_point_free = true

    [tolerances]
    tol = 1e-6
    tol_inv = 1e-9
    tol_sym = 1e-9

    [pipeline]
    steps = 40
    spacing = 0.5
    seed = [0.0, 0.0]
    side = "high"

    [render]
    svg = false
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

try:
    import tomllib as tomli
except ModuleNotFoundError:  # Python < 3.11
    import tomli

from .catalog import by_name
from .errors import ConfigError
from .maps import MapSpec, PlaneMap, Rect


@dataclass
class Tolerances:
    tol: float = 1e-6
    tol_inv: float = 1e-9
    tol_sym: float = 1e-9


@dataclass
class PipelineParams:
    steps: int = 40
    spacing: float = 0.5
    seed: Tuple[float, float] = (0.0, 0.0)
    side: str = "high"


@dataclass
class RenderParams:
    svg: bool = False


@dataclass
class RunConfig:
    pmap: PlaneMap
    window: Rect
    tolerances: Tolerances
    pipeline: PipelineParams
    render: RenderParams
    raw: Dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        return hash_config(self.raw)


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _parse_window(raw: Dict) -> Rect:
    _require("window" in raw, "missing required field 'window'")
    w = raw["window"]
    _require(
        isinstance(w, (list, tuple)) and len(w) == 4
        and all(isinstance(v, (int, float)) for v in w),
        "'window' must be [x0, y0, x1, y1]",
    )
    _require(w[0] < w[2] and w[1] < w[3], "'window' is degenerate (need x0 < x1, y0 < y1)")
    return Rect(*map(float, w))


def _parse_map(raw: Dict, window: Rect) -> PlaneMap:
    _require("map" in raw and isinstance(raw["map"], dict), "missing required table [map]")
    m = dict(raw["map"])
    if "catalog" in m:
        try:
            base = by_name(m["catalog"])
        except KeyError as e:
            raise ConfigError(str(e)) from e
        return PlaneMap(base.spec, window, base.symmetry, base.fixed_point_free,
                        name=m["catalog"])
    _require("kind" in m, "[map] needs 'catalog' or 'kind'")
    symmetry = m.pop("symmetry", "none")
    _require(symmetry in ("none", "annulus", "torus"),
             f"[map] symmetry {symmetry!r} not one of none/annulus/torus")
    fpf = bool(m.pop("fixed_point_free", True))
    try:
        spec = MapSpec.from_dict(m)
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"[map] block invalid: {e}") from e
    return PlaneMap(spec, window, symmetry, fpf, name=m.get("kind", "custom"))


def _parse_tolerances(raw: Dict) -> Tolerances:
    t = raw.get("tolerances", {})
    out = Tolerances(
        tol=float(t.get("tol", 1e-6)),
        tol_inv=float(t.get("tol_inv", 1e-9)),
        tol_sym=float(t.get("tol_sym", 1e-9)),
    )
    for k in ("tol", "tol_inv", "tol_sym"):
        _require(getattr(out, k) > 0, f"[tolerances] {k} must be positive")
    return out


def _parse_pipeline(raw: Dict, window: Rect) -> PipelineParams:
    p = raw.get("pipeline", {})
    seed = p.get("seed", [0.0, 0.0])
    _require(isinstance(seed, (list, tuple)) and len(seed) == 2,
             "[pipeline] seed must be [x, y]")
    side = p.get("side", "high")
    _require(side in ("high", "low"), "[pipeline] side must be 'high' or 'low'")
    steps = int(p.get("steps", 40))
    _require(steps >= 0, "[pipeline] steps must be >= 0")
    spacing = float(p.get("spacing", 0.5))
    _require(spacing > 0, "[pipeline] spacing must be positive")
    return PipelineParams(steps, spacing, (float(seed[0]), float(seed[1])), side)


def parse_config(raw: Dict) -> RunConfig:
    window = _parse_window(raw)
    pmap = _parse_map(raw, window)
    tols = _parse_tolerances(raw)
    pipe = _parse_pipeline(raw, window)
    render = RenderParams(svg=bool(raw.get("render", {}).get("svg", False)))
    return RunConfig(pmap, window, tols, pipe, render, raw=raw)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"config parse error: {e}") from e
    return parse_config(raw)


def canonical_bytes(raw: Dict) -> bytes:
    """Stable byte serialization of a parsed config for hashing."""
    return json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()


def hash_config(raw: Dict) -> str:
    return hashlib.sha256(canonical_bytes(raw)).hexdigest()
