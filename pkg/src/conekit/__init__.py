"""Exact certificates of monotonicity and non-expansivity for chemical
reaction networks under general kinetics."""

from .builder import Certificate, CertificateKind, SaturationConfig, apply_operation, closure_check, saturate
from .exactgeom import BallRep, ConeRep
from .netmodel import ReactionNetwork, dual_network, parse_network, r_graph, to_irreversible
from .orchestrate import AnalysisConfig, AnalysisReport, analyze_monotone, analyze_nonexpansive, dual_transfer

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig", "AnalysisReport", "BallRep", "Certificate", "CertificateKind", "ConeRep",
    "ReactionNetwork", "SaturationConfig", "analyze_monotone", "analyze_nonexpansive",
    "apply_operation", "closure_check", "dual_network", "dual_transfer", "parse_network",
    "r_graph", "saturate", "to_irreversible",
]
