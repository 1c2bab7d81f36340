#!/usr/bin/env python3
"""Sweep the fixed-point-free catalog: build a critical disc, a bidirectional
chain, and a verified Brouwer line for each map, then classify the maps that
declare an annulus or torus symmetry.

Writes JSON reports and SVG scenes under the output directory.

Usage:
    python scripts/catalog_sweep.py [outdir]
"""

import sys
import time
from pathlib import Path

from brouwerlines import (
    build_bidirectional,
    classify_annulus,
    classify_torus,
    critical_disc,
    synth_brouwer_line,
)
from brouwerlines.catalog import FIXED_POINT_FREE
from brouwerlines.render import render_line_scene


def main() -> int:
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "sweep_out")
    outdir.mkdir(parents=True, exist_ok=True)

    for name, make in FIXED_POINT_FREE.items():
        pmap = make()
        t0 = time.time()
        seed = critical_disc(pmap, (0.0, 0.0))
        chain = build_bidirectional(pmap, seed, 40, stop_window=pmap.window.pad(1.0))
        cert = synth_brouwer_line(pmap, chain, pmap.window)
        svg = render_line_scene(pmap, pmap.window, cert.line.vertices)
        (outdir / f"{name}_line.svg").write_text(svg)
        print(f"{name:28s} line verified={cert.verified} "
              f"margin={cert.free_margin:.3g} discs={len(chain)} "
              f"({time.time() - t0:.1f}s)")

        if pmap.symmetry == "annulus":
            out = classify_annulus(pmap)
            print(f"{'':28s} annulus -> {out.kind} (case {out.case})")
        elif pmap.symmetry == "torus":
            out = classify_torus(pmap)
            print(f"{'':28s} torus -> {out.kind} class {out.displacement_class}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
