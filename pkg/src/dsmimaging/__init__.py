"""Direct sampling imaging of small 2D dielectric inhomogeneities."""

from .errors import (
    ConfigurationError,
    DataIntegrityError,
    DegenerateDataError,
    DomainError,
    DsmError,
    EmptySelectionError,
    NumericalError,
    ParseError,
)
from .forward import (
    MsrMatrix,
    add_awgn,
    assemble_mie_msr,
    assemble_msr,
    asymptotic_scattered_field,
    mie_cylinder_scattered_field,
)
from .imaging import (
    Algorithm,
    IndicatorMap,
    dsm_multi,
    dsm_single,
    dsma,
    kirchhoff,
    plane_wave_bessel_check,
    psi1_map,
    psi2_map,
    psi3_map,
)
from .metrics import JaccardCurve, exact_map, jaccard, jaccard_curve, threshold_map
from .scene import (
    Background,
    ImagingGrid,
    IncidentSet,
    Inhomogeneity,
    Scene,
    SensorArray,
    make_circle_array,
    make_direction_set,
    make_grid,
)
from .specfun import bessel_j0, bessel_y0, green2d

__version__ = "0.1.0"
