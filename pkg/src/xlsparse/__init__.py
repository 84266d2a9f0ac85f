"""Sparse extremely-large arrays: layouts, co-arrays, near-field CRBs and LoS MIMO rank."""
from .bounds import CrbResult, SingularFimError, crb, crb_range_sweep, fim
from .channel import ConfigurationError, LosChannel, effective_rank, los_channel, pairwise_distances, rank_vs_distance
from .coarray import Coarray, SearchTooLargeError, difference_coarray, dof_report, search_max_dof
from .geometry import (
    SPEED_OF_LIGHT,
    ArrayLayout,
    Kind,
    LayoutError,
    MultiSubarraySpec,
    aperture_units,
    fraunhofer_distance_m,
    gen_coprime,
    gen_dua,
    gen_multi_subarray,
    gen_nested,
    gen_nra,
    gen_wsms,
    wavelength_from_frequency,
)
from .nearfield import (
    SingularGeometryError,
    SourceParams,
    SteeringModel,
    SteeringVector,
    beampattern,
    element_positions_m,
    fresnel_steering,
    planar_steering,
    spherical_steering,
    steering_derivatives,
)

__version__ = "0.1.0"
