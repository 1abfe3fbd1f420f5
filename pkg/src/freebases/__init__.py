"""Free bases of free groups: Stallings foldings, the free-bases graph,
certified free-factor witnesses, and hyperbolicity diagnostics."""

from .errors import (
    ContractibleGraphError,
    DomainError,
    FoldabilityError,
    NotABasisError,
    TrivialFactorError,
)
from .words import (
    DEFAULT_RANK,
    concat,
    conjugate,
    conjugate_related,
    cyclic_normal_form,
    cyclic_reduce,
    find_conjugator,
    invert,
    parse_word,
    parse_words,
    reduce,
    word_str,
    words_str,
)
from .agraph import (
    AGraph,
    Edge,
    MarkingEdge,
    MarkingGraph,
    basis_from_tree,
    canonical_code,
    core,
    labeled_isomorphic,
    marking_isomorphic,
    rose,
    smooth,
    spanning_tree,
)
from .folding import (
    FoldStep,
    FoldingPath,
    ensure_foldable,
    fold_completely,
    fold_to_rose,
    is_basis,
    maximal_fold,
    random_basis,
    single_fold,
    subgroup_membership,
    wedge_graph,
)
from .complexes import (
    WITNESS_BOUNDS,
    ChainHop,
    ChainReport,
    FBAdjacency,
    FBVertex,
    FFStep,
    FFVertex,
    SplittingVertex,
    WitnessPath,
    density_path,
    fb_adjacent,
    fb_chain_report,
    fb_equivalent,
    ff_step_witness,
    folding_chain,
    folding_path_bases,
    h_lipschitz_path,
    h_map,
    hq_path,
    identity_basis,
    q_map,
    substitute,
    tau,
    witness_path_from_json,
)
from .hyperbolicity import (
    FiniteGraph,
    ThinReport,
    apsp,
    check_path_family,
    check_thin_triangles,
    complete_graph,
    cone_off,
    cycle_graph,
    delta_four_point,
    delta_slim,
    geodesic_family,
    grid_graph,
    hausdorff_distance,
    is_quasiconvex,
    median_map,
    path_graph,
    random_tree,
    sample_fb_ball,
)

__version__ = "0.1.0"
