"""Exact polyhedral separating invariants for guarded affine transition systems."""
from __future__ import annotations

from .checker import CheckReport, check_separating, check_transition
from .errors import (
    InputError,
    PolyinvError,
    PreconditionViolated,
    RunNotHalted,
    UnboundedPolyhedron,
    UnsupportedGuard,
)
from .execution import Run, build_witness, reach_oracle, run
from .model import (
    AffineExpr,
    AffineUpdate,
    Config,
    ControlState,
    Guard,
    LinAtom,
    Monomial,
    PolyAtom,
    Transition,
    TransitionSystem,
    apply_update,
    eval_guard,
    parse_rational,
    render_rational,
    validate_system,
)
from .polyhedra import (
    Constraint,
    HPolyhedron,
    VPolytope,
    affine_image_h,
    affine_image_v,
    contains_point_h,
    fm_eliminate,
    h_entails,
    hrep_to_vrep,
    is_vertex,
    member_of_hull,
    substitute,
    vrep_to_hrep,
)
from .reductions import gadget_reduce, lift_invariant, project_invariant, state_encode
from .synth import TemplateSpec, encode_bounded_existence, search_bounded

__version__ = "0.1.0"
