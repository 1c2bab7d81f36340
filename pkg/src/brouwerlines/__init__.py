"""Certified construction of free discs, extension chains, and Brouwer lines
for fixed-point-free plane homeomorphisms, with annulus/torus classification."""

from .maps import Func1D, MapSpec, PlaneMap, Rect
from .geometry import CircleArc, Disc, FreenessCert, Polyline, SideOracle
from .critical import CriticalDisc, ExtensionCert, GenDisc, critical_disc, critical_radius, radius_field
from .chains import (
    BrouwerLineCert,
    ExtensionChain,
    build_bidirectional,
    build_chain,
    chain_union_free,
    check_escape,
    franks_validate,
    synth_brouwer_line,
    trajectory,
    verify_brouwer_line,
)
from .classify import (
    AnnulusOutcome,
    PeriodicLine,
    TorusOutcome,
    classify_annulus,
    classify_torus,
    deck_free_line,
    konig_select,
)

__version__ = "0.1.0"
