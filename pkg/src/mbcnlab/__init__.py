"""mbcnlab: many-body Chern numbers from randomized measurements, exactly simulated."""

from .basis import FockState, OccupationBasis
from .defects import DefectSpec, apply_V, apply_W, make_defect_spec, resta_T
from .hamiltonians import HofstadterSpec, QuenchSpec, SparseOperator, build_hofstadter, build_quench_step
from .lattice import LatticeGeometry, Region, default_regions
from .evolve import apply_random_quench_unitary, ground_state, propagate
from .swap import doubled_space_oracle, swap_correlator
from .chern import berry_chern, fit_depolarized, resta_chern, winding_number
from .designs import EnsembleSpec, frame_potential_check

__version__ = "0.1.0"

__all__ = [
    "FockState",
    "OccupationBasis",
    "DefectSpec",
    "apply_V",
    "apply_W",
    "make_defect_spec",
    "resta_T",
    "HofstadterSpec",
    "QuenchSpec",
    "SparseOperator",
    "build_hofstadter",
    "build_quench_step",
    "LatticeGeometry",
    "Region",
    "default_regions",
    "apply_random_quench_unitary",
    "ground_state",
    "propagate",
    "doubled_space_oracle",
    "swap_correlator",
    "berry_chern",
    "fit_depolarized",
    "resta_chern",
    "winding_number",
    "EnsembleSpec",
    "frame_potential_check",
]
