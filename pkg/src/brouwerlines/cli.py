"""Command-line drivers for the critical-disc and classification pipelines.

Exit codes: 0 success, 2 config error, 3 verification failure,
4 map-validation failure, 5 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from typing import Dict, Optional

import numpy as np

from . import certs, render
from .chains import build_bidirectional, build_chain, chain_union_free, check_escape, synth_brouwer_line
from .classify import classify_annulus, classify_torus
from .config import ConfigError, RunConfig, load_config
from .critical import critical_disc, find_strict_extension, radius_field
from .errors import (
    BrouwerError,
    ChainStall,
    CoverageStall,
    FixedPointSuspected,
    NoGapFound,
    StallDiagnostics,
    SymmetryViolation,
    VerificationFailure,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_MAP = 4
EXIT_INCONCLUSIVE = 5

_INCONCLUSIVE_ERRORS = (ChainStall, CoverageStall, NoGapFound, StallDiagnostics)
_MAP_ERRORS = (FixedPointSuspected, SymmetryViolation)


def _write_text(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _validate_map(cfg: RunConfig):
    """Reject maps violating their declared symmetry before any pipeline work."""
    if cfg.pmap.symmetry != "none":
        cfg.pmap.check_symmetry(tol=cfg.tolerances.tol_sym)
    seed = np.asarray(cfg.pipeline.seed, dtype=float)
    if not cfg.window.contains(seed.reshape(1, 2))[0]:
        raise ConfigError(
            f"[pipeline] seed ({seed[0]:g}, {seed[1]:g}) lies outside the window"
        )


def _disc_render_dict(cd) -> Dict:
    def span(arc):
        return [arc.theta_start, arc.theta_end]

    return {
        "center": [float(cd.center[0]), float(cd.center[1])],
        "radius": float(cd.radius),
        "arc_high": span(cd.alpha_high),
        "arc_low": span(cd.alpha_low),
        "epsilon": float(cd.epsilon),
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_radius_field(cfg: RunConfig, args) -> int:
    _validate_map(cfg)
    pts, radii = radius_field(cfg.pmap, cfg.window, cfg.pipeline.spacing, cfg.tolerances.tol)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "r"])
    for (x, y), r in zip(pts, radii):
        writer.writerow([f"{x:.9f}", f"{y:.9f}", f"{r:.9f}"])
    _write_text(args.out, buf.getvalue())
    if args.svg:
        _write_text(args.svg, render.render_radius_field(cfg.window, pts, radii,
                                                         cfg.pipeline.spacing))
    return EXIT_OK


def cmd_critical_disc(cfg: RunConfig, args) -> int:
    _validate_map(cfg)
    cd = critical_disc(cfg.pmap, cfg.pipeline.seed, cfg.tolerances.tol)
    outcome = {
        "disc": _disc_render_dict(cd),
        "r_bracket": [cd.r_bracket[0], cd.r_bracket[1]],
        "lam_span": [cd.lam.theta_start, cd.lam.theta_end],
        "mu_span": [cd.mu.theta_start, cd.mu.theta_end],
        "contacts_degenerate": cd.contacts_degenerate,
    }
    _write_text(args.out, certs.dump_json(
        certs.make_report("critical-disc", cfg.config_hash, outcome)))
    return EXIT_OK


def cmd_extend(cfg: RunConfig, args) -> int:
    _validate_map(cfg)
    cd = critical_disc(cfg.pmap, cfg.pipeline.seed, cfg.tolerances.tol)
    cert = find_strict_extension(cfg.pmap, cd, cfg.pipeline.side, cfg.tolerances.tol)
    outcome = {
        "base": _disc_render_dict(cd),
        "extension": {
            "center": [float(cert.ext.center[0]), float(cert.ext.center[1])],
            "radius": float(cert.ext.radius),
            "variant": cert.ext.variant,
            "exceptional": cert.exceptional,
            "strict": cert.strict,
            "min_margin": cert.min_margin,
        },
        "side": cfg.pipeline.side,
    }
    _write_text(args.out, certs.dump_json(
        certs.make_report("extend", cfg.config_hash, outcome)))
    return EXIT_OK if cert.strict else EXIT_VERIFY


def cmd_chain(cfg: RunConfig, args) -> int:
    _validate_map(cfg)
    cd = critical_disc(cfg.pmap, cfg.pipeline.seed, cfg.tolerances.tol)
    chain = build_chain(cfg.pmap, cd, cfg.pipeline.side, cfg.pipeline.steps,
                        cfg.tolerances.tol, stop_window=cfg.window.pad(1.0))
    union = chain_union_free(cfg.pmap, chain)
    escape = check_escape(chain, cfg.window)
    outcome = {
        "centers": chain.centers().tolist(),
        "radii": chain.radii().tolist(),
        "variants": [g.variant for g in chain.discs],
        "union_free": union.to_dict(),
        "escape": {
            "last_touch_index": escape.last_touch_index,
            "tail_clear_from": escape.tail_clear_from,
            "area_ratios": escape.area_ratios,
        },
    }
    _write_text(args.out, certs.dump_json(
        certs.make_report("chain", cfg.config_hash, outcome)))
    return EXIT_OK if union.is_free else EXIT_VERIFY


def cmd_line(cfg: RunConfig, args) -> int:
    _validate_map(cfg)
    cd = critical_disc(cfg.pmap, cfg.pipeline.seed, cfg.tolerances.tol)
    chain = build_bidirectional(cfg.pmap, cd, cfg.pipeline.steps, cfg.tolerances.tol,
                                stop_window=cfg.window)
    cert = synth_brouwer_line(cfg.pmap, chain, cfg.window, cfg.tolerances.tol)
    disc_dicts = [_disc_render_dict(g.underlying) for g in chain.discs]
    certificate = certs.line_certificate(cfg.pmap, cert, cfg.config_hash,
                                         extra={"discs": disc_dicts})
    report = certs.make_report("line", cfg.config_hash, {"certificate": certificate})
    _write_text(args.out, certs.dump_json(report))
    if args.svg:
        _write_text(args.svg, render.render_line_scene(
            cfg.pmap, cfg.window, cert.line.vertices, discs=disc_dicts))
    return EXIT_OK if cert.verified else EXIT_VERIFY


def cmd_classify(cfg: RunConfig, args, target: str) -> int:
    _validate_map(cfg)
    if target == "annulus":
        out = classify_annulus(cfg.pmap, cfg.pipeline.seed, cfg.pipeline.steps,
                               cfg.tolerances.tol, cfg.window)
    else:
        out = classify_torus(cfg.pmap, cfg.pipeline.seed, cfg.pipeline.steps,
                             cfg.tolerances.tol, cfg.window)
    outcome: Dict = {"kind": out.kind, "diagnostics": out.diagnostics}
    if target == "annulus":
        outcome["case"] = out.case
    if getattr(out, "curve", None) is not None:
        outcome["certificate"] = certs.curve_certificate(cfg.pmap, out.curve,
                                                         cfg.config_hash)
        if target == "torus":
            outcome["displacement_class"] = list(out.displacement_class)
    if getattr(out, "line_cert", None) is not None:
        outcome["certificate"] = certs.line_certificate(cfg.pmap, out.line_cert,
                                                        cfg.config_hash)
    report = certs.make_report(f"classify-{target}", cfg.config_hash, outcome)
    _write_text(args.out, certs.dump_json(report))
    if args.svg and "certificate" in outcome:
        _write_text(args.svg, render.render_report(report))
    return EXIT_INCONCLUSIVE if out.kind == "inconclusive" else EXIT_OK


def cmd_verify(args) -> int:
    obj = certs.read_json(args.certificate)
    # accept either a bare certificate or a report wrapping one
    cert = obj
    if "outcome" in obj and isinstance(obj["outcome"], dict):
        cert = obj["outcome"].get("certificate", obj["outcome"])
    cfg = load_config(args.config) if args.config else None
    result = certs.verify_certificate(cert, cfg)
    sys.stdout.write(certs.dump_json({"verified": True, "checks": result}))
    return EXIT_OK


def cmd_render(args) -> int:
    report = certs.read_json(args.report)
    _write_text(args.out, render.render_report(report))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="brouwerlines",
        description="Construct and verify free discs, extension chains, Brouwer "
                    "lines, and annulus/torus classifications.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        if name not in ("verify", "render"):
            sp.add_argument("--config", required=True, help="TOML run configuration")
            sp.add_argument("--out", default=None, help="output path (default stdout)")
            sp.add_argument("--svg", default=None, help="optional SVG output path")
        return sp

    add("radius-field", help="critical-radius field over the window grid (CSV x,y,r)")
    add("critical-disc", help="critical disc and boundary decomposition at the seed")
    add("extend", help="one strict extension from the seed disc")
    add("chain", help="extension chain with union-freeness and escape report")
    add("line", help="bidirectional chain, Brouwer-line synthesis and verification")
    add("classify-annulus", help="annulus outcome: essential curve or line joining ends")
    add("classify-torus", help="torus outcome: essential curve with displacement class")

    v = sub.add_parser("verify", help="independently re-verify a certificate file")
    v.add_argument("certificate", help="certificate or report JSON file")
    v.add_argument("--config", default=None, help="optional config to check the hash against")

    r = sub.add_parser("render", help="render a saved report to SVG")
    r.add_argument("report", help="report JSON file")
    r.add_argument("--out", default=None, help="SVG output path (default stdout)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.time()
    try:
        if args.command == "verify":
            code = cmd_verify(args)
        elif args.command == "render":
            code = cmd_render(args)
        else:
            cfg = load_config(args.config)
            if args.command == "radius-field":
                code = cmd_radius_field(cfg, args)
            elif args.command == "critical-disc":
                code = cmd_critical_disc(cfg, args)
            elif args.command == "extend":
                code = cmd_extend(cfg, args)
            elif args.command == "chain":
                code = cmd_chain(cfg, args)
            elif args.command == "line":
                code = cmd_line(cfg, args)
            elif args.command == "classify-annulus":
                code = cmd_classify(cfg, args, "annulus")
            else:
                code = cmd_classify(cfg, args, "torus")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except _MAP_ERRORS as e:
        print(f"map validation failed: {e}", file=sys.stderr)
        return EXIT_MAP
    except _INCONCLUSIVE_ERRORS as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except VerificationFailure as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except BrouwerError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"[{args.command}] completed in {time.time() - t0:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
