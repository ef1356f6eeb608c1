"""Overcomplete coherent frames of finite groups: densities, frame measures,
the density/frame-measure identity and positive-density removal."""

from .errors import (FrameError, NotAFrame, NotOvercomplete, OrderTooLarge,
                     PipelineExhausted)
from .groups import (FiniteGroup, Window, box_window, ball_window,
                     canonical_windows, make_cyclic_product, make_heisenberg,
                     make_window)
from .reps import (ProjectiveRep, formal_degree, gabor_rep,
                   heisenberg_schroedinger_rep, matrix_coefficient)
from .frames import CoherentSystem, analyze, frame_bounds, make_system
from .density import (beurling_density, density_theorem_check, frame_measure,
                      fundamental_identity_report)
from .removal import (RemovalConfig, removal_certificate,
                      remove_positive_density)

__all__ = [
    "FrameError",
    "NotAFrame",
    "NotOvercomplete",
    "OrderTooLarge",
    "PipelineExhausted",
    "FiniteGroup",
    "Window",
    "box_window",
    "ball_window",
    "canonical_windows",
    "make_cyclic_product",
    "make_heisenberg",
    "make_window",
    "ProjectiveRep",
    "formal_degree",
    "gabor_rep",
    "heisenberg_schroedinger_rep",
    "matrix_coefficient",
    "CoherentSystem",
    "analyze",
    "frame_bounds",
    "make_system",
    "beurling_density",
    "density_theorem_check",
    "frame_measure",
    "fundamental_identity_report",
    "RemovalConfig",
    "removal_certificate",
    "remove_positive_density",
]

__version__ = "0.1.0"
