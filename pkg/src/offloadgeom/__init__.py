"""Offloading performance analysis for cellular networks with WLAN coverage.

Closed-form performance metrics under homogeneous and three-level
inhomogeneous Poisson placement of WLAN access points, a geometric Monte
Carlo simulator that serves as the correctness oracle, and spatial
statistics for empirical AP-location data.
"""

from .geometry import ConvexShape, Line
from .pointprocess import Deployment, IntensityModel
from .formulas import CellModel, MetricsReport, OverlapSummary
from .simulator import SimConfig, SimResult

__all__ = [
    "ConvexShape",
    "Line",
    "IntensityModel",
    "Deployment",
    "CellModel",
    "OverlapSummary",
    "MetricsReport",
    "SimConfig",
    "SimResult",
]

__version__ = "0.1.0"
