"""Spectral toolkit for Kazhdan-type rigidity estimates.

Subpackages cover dense subspace geometry (codistances, orthogonality
constants), weighted graph Laplacians and their spectral gaps, finite groups
with their unitary representations, closed-form Kazhdan-constant criteria,
and presentation emitters with Golod-Shafarevich checking.  The ``kazhdan-lab``
console script exposes every evaluator as a subcommand.
"""

from .subspaces import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    codistance,
    complement,
    is_eps_close,
    orthogonality_constant,
    orthonormalize,
    project,
    residual_witness,
    weighted_codistance,
)
from .graphs import (
    LaplacianMatrix,
    Topology,
    WeightedGraph,
    complete_graph,
    integer_spectrum,
    lambda1,
    magic_graph,
    standard_laplacian,
    weighted_laplacian,
)
from .groups import FiniteGroup, Subgroup, TableGroup, subgroup_closure
from .nilpotent import block_heisenberg, heisenberg, heisenberg_irreps
from .eln import eln_root_subgroups, verify_a2_system
from .reps import (
    UnitaryRep,
    fixed_subspace,
    group_codistance,
    group_epsilon,
    kazhdan_spectral_lower,
    regular_rep_complement,
)
from .criteria import (
    BoundReport,
    EpsilonMatrix,
    RingSpec,
    TriangleSolution,
    a2_kazhdan_constants,
    cover_kazhdan_bound,
    eln_kazhdan_bound,
    kazhdan_from_codistance,
    kazhdan_from_pairwise_eps,
    kazhdan_from_triple_eps,
    kms_kazhdan_bound,
    posdef_check,
    spectral_codistance_bound,
    triangle_weight_solve,
)
from .presentations import (
    CoverRing,
    HilbertSeries,
    KmsRing,
    Presentation,
    eln_cover_presentation,
    gs_check,
    kms_basic_presentation,
    kms_mixed_presentation,
)

__version__ = "0.1.0"
