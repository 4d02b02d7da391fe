"""Placing unit-length polygonal arcs inside a 30 degree sector of unit radius."""

from .geometry import (
    PI_SECTOR,
    InvalidInput,
    PolygonalArc,
    Ray,
    RigidMotion,
    Sector,
    arc_length,
    chord_length,
    compose_reflections,
    hull_corners,
    reflect,
    sector_contains,
)
from .support import (
    CertificatePair,
    WedgeCertificate,
    find_certificates,
    hull_angle_at,
    interlace,
    verify_certificate,
)
from .bounds import (
    LengthCertificate,
    SectorConfig,
    classify_case,
    lemma2_bound,
    replay_contradiction,
    sine_superadditive,
    unfold,
)
from .fitter import Placement, candidate_placements, fit, refine
from .harness import ArcFamily, baseline_sector, generate, run_campaign

__version__ = "0.1.0"
