"""Signal-subspace SAR imaging toolkit.

Frequency-domain data for point-target scenes is rearranged, position by
position, into Hankel blocks whose regularized SVD inversion yields two
imaging functionals: a real one whose reciprocal peaks at target locations
with height |rho|, and a complex one whose reciprocal there recovers the
full complex reflectivity.  Classical SAR backprojection and CINT
pair-correlation images serve as baselines, with resolution, recovery and
statistical-stability experiments driven from a CLI.
"""

__version__ = "0.1.0"

from .analysis import (
    ResolutionMeasurement,
    StabilityReport,
    find_peak,
    image_snr,
    loglog_fit,
    measure_half_width,
    reflectivity_error,
)
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    NumericalError,
    SingularGeometryError,
    WindowTooSmallError,
)
from .forward import (
    BoundingBox,
    DataCube,
    PointTarget,
    RandomMediumSpec,
    TravelTimePerturbation,
    add_noise,
    dimensionless_scalings,
    medium_perturbations,
    sample_direct_perturbations,
    sample_random_medium,
    simulate_born,
    travel_time_perturbation_from_medium,
)
from .geometry import (
    AcquisitionConfig,
    AcquisitionGeometry,
    GridSpec,
    build_geometry,
    grid_points,
)
from .imaging import (
    ImageGrid,
    cint_image,
    classical_sar_image,
    evaluate_grid,
    f_epsilon,
    illumination_a,
    illumination_b,
    r_epsilon,
)
from .prony import PronyBlocks, assemble_blocks, pronyfy
from .subspace import BlockSVD, RegularizedSpectrum, block_svd, regularize_spectrum
