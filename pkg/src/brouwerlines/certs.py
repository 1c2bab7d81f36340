"""Certificate and report serialization, with independent re-verification.

A certificate embeds everything needed to re-check it from scratch: the map
(spec + symmetry + window), the geometric payload, and the producing config's
hash.  Verification rebuilds the map and re-runs the full checks; it never
trusts the recorded margins.
"""

from __future__ import annotations

import json
from typing import Dict, Optional, Tuple

import numpy as np

from .chains import BrouwerLineCert, verify_brouwer_line
from .classify import PeriodicLine, verify_periodic_line
from .config import RunConfig
from .errors import ConfigError, VerificationFailure
from .geometry import Polyline
from .maps import MapSpec, PlaneMap, Rect

FORMAT_VERSION = 1


def _map_to_dict(pmap: PlaneMap) -> Dict:
    return {
        "spec": pmap.spec.to_dict(),
        "window": [pmap.window.x0, pmap.window.y0, pmap.window.x1, pmap.window.y1],
        "symmetry": pmap.symmetry,
        "fixed_point_free": pmap.fixed_point_free,
        "name": pmap.name,
    }


def map_from_dict(d: Dict) -> PlaneMap:
    return PlaneMap(
        MapSpec.from_dict(d["spec"]),
        Rect(*d["window"]),
        d.get("symmetry", "none"),
        bool(d.get("fixed_point_free", True)),
        name=d.get("name", "custom"),
    )


def line_certificate(pmap: PlaneMap, cert: BrouwerLineCert, config_hash: str,
                     extra: Optional[Dict] = None) -> Dict:
    out = {
        "format_version": FORMAT_VERSION,
        "kind": "brouwer_line",
        "config_hash": config_hash,
        "map": _map_to_dict(pmap),
        "payload": cert.to_dict(),
    }
    if extra:
        out["extra"] = extra
    return out


def curve_certificate(pmap: PlaneMap, curve: PeriodicLine, config_hash: str,
                      extra: Optional[Dict] = None) -> Dict:
    out = {
        "format_version": FORMAT_VERSION,
        "kind": "essential_curve",
        "config_hash": config_hash,
        "map": _map_to_dict(pmap),
        "payload": curve.to_dict(),
    }
    if extra:
        out["extra"] = extra
    return out


def verify_certificate(cert: Dict, config: Optional[RunConfig] = None) -> Dict:
    """Re-run all checks in a certificate; returns fresh check results.

    Raises ConfigError on a config-hash mismatch and VerificationFailure with
    the first failing check named.
    """
    if config is not None and cert.get("config_hash") != config.config_hash:
        raise ConfigError(
            f"certificate config hash {cert.get('config_hash', '?')[:12]}… does not "
            f"match supplied config {config.config_hash[:12]}…"
        )
    try:
        pmap = map_from_dict(cert["map"])
        kind = cert["kind"]
        payload = cert["payload"]
    except (KeyError, TypeError, ValueError) as e:
        raise VerificationFailure(f"malformed certificate: {e}", check="parse") from e

    if kind == "brouwer_line":
        recorded = BrouwerLineCert.from_dict(payload)
        try:
            fresh = verify_brouwer_line(pmap, recorded.line, recorded.window)
        except Exception as e:
            raise VerificationFailure(f"line re-verification failed: {e}",
                                      check="brouwer_line") from e
        if not fresh.verified:
            raise VerificationFailure(
                f"line fails the Brouwer contract: margin {fresh.free_margin:.3e}, "
                f"sides {fresh.sep_d_ok}+{fresh.sep_g_ok}/{2 * fresh.sep_samples}",
                check="brouwer_line",
            )
        return {"kind": kind, "free_margin": fresh.free_margin,
                "sep_ok": fresh.sep_d_ok + fresh.sep_g_ok, "sep_samples": 2 * fresh.sep_samples}

    if kind == "essential_curve":
        recorded = PeriodicLine.from_dict(payload)
        try:
            fresh = verify_periodic_line(
                pmap, recorded.period_vertices, recorded.period, pmap.window
            )
        except Exception as e:
            raise VerificationFailure(f"curve re-verification failed: {e}",
                                      check="essential_curve") from e
        return {"kind": kind, "free_margin": fresh.free_margin,
                "period": list(fresh.period),
                "simple_in_quotient": fresh.simple_in_quotient}

    raise VerificationFailure(f"unknown certificate kind {kind!r}", check="kind")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def make_report(command: str, config_hash: str, outcome: Dict,
                warnings: Optional[list] = None) -> Dict:
    """Report envelope; timing is reported on stderr by the CLI, never in the
    payload, so identical configs produce byte-identical files."""
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "config_hash": config_hash,
        "outcome": outcome,
        "timing": None,
        "warnings": warnings or [],
    }


def dump_json(obj: Dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: str, obj: Dict):
    with open(path, "w") as fh:
        fh.write(dump_json(obj))


def read_json(path: str) -> Dict:
    with open(path) as fh:
        return json.load(fh)
