"""Persistence diagrams of sampled metric spaces and their statistics."""

from .complexes import Builder, Filtration, build_alpha_2d, build_cech, build_rips
from .delaunay import delaunay_triangles
from .diagrams import (
    Matching,
    bottleneck_distance,
    bottleneck_matching,
    brute_force_bottleneck,
    diagonal_distance,
    stability_gap,
)
from .errors import DataError, FormatError, ReplicationError, ResourceCapError, TopostatError
from .meb import minimal_enclosing_ball
from .metric import (
    DistanceMatrix,
    IndexSet,
    PointCloud,
    StandardAssumptionReport,
    check_standard_assumption,
    directed_hausdorff,
    euclidean_distance_matrix,
    greedy_covering_number,
    greedy_packing_number,
    hausdorff_distance,
)
from .persistence import (
    BoundaryMatrix,
    PersistenceDiagram,
    PersistencePairing,
    betti_at,
    boundary_matrix,
    diagram_betti,
    extract_diagram,
    persistence_diagram,
    reduce,
)
from .plot import plot_svg
from .statistics import (
    BoundParams,
    ExperimentConfig,
    ExperimentResult,
    SpaceSpec,
    boundary_density_lower_bound,
    confidence_radius,
    convergence_experiment,
    dirac_pair_demo,
    exact_reference,
    hausdorff_tail_bound,
    lecam_bound,
    manifold_lower_bound,
    minimax_rate,
    minimax_rate_density,
    minimax_rate_manifold,
    psi,
    psi_inverse,
    reference_diagram,
    sample,
    sample_boundary_density,
    slope_regression,
)

__version__ = "0.1.0"
