"""Graph approximations of the Weierstrass function and their analysis.

Geometry of the IFS approximations, self-similar measure, renormalized
energies and resistance metric, Dirichlet spectra with spectral decimation,
and eigenvalue counting.
"""
from .errors import (
    BoundaryVertexError,
    ForbiddenValueError,
    LevelTooLargeError,
    ParameterError,
    StrictnessError,
)
from .geometry import (
    LevelGraph,
    Point2,
    Polygon,
    WeierstrassParams,
    apply_word,
    contraction,
    edge_heights,
    fixed_point,
    make_params,
    polygons,
    vertex_chain,
)
from .boxcount import box_count, box_dimension
from .measure import cell_measure, integrate, measure_weights, polygon_area
from .energy import (
    dirichlet_solve,
    harmonic_extend,
    laplacian_apply,
    pointwise_laplacian,
    resistance,
    resistance_dimension,
    spline_integral,
)
from .spectral import (
    Spectrum,
    counting_function,
    decimate_step,
    decimation_tree,
    direct_spectrum,
    dirichlet_matrix,
    extend_eigenfunction,
    oracle_spectrum,
    weyl_analysis,
)
from .reference import gasket_constants, interval_energy, interval_resistance

__version__ = "0.1.0"
