"""Symmetric planar n-body choreographies: exact symmetry-group algebra,
Fourier-constrained action minimization, and topological invariants."""

from .groups import (
    GroupElement,
    SymmetryGroup,
    SymmetryGroupSpec,
    build_group,
    choreography_element,
    coercivity_check,
    kernels_and_core,
    parse_group_name,
    rcc_check,
    subconjugate,
)
from .loops import (
    ConstraintMask,
    FourierLoop,
    Trajectory,
    constraint_mask,
    project,
    sample_trajectory,
    symmetry_residual,
)
from .action import (
    MinimizeOptions,
    MinimizeResult,
    PotentialSpec,
    action,
    diagnostics,
    gradient,
    minimize,
)
from .topology import (
    BraidWord,
    WindingProfile,
    adjacency_necessary,
    braid_stats,
    extract_braid,
    winding_about_origin,
    winding_profile,
)

__version__ = "0.1.0"
