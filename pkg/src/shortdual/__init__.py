"""Short-support dual Gabor windows, V_{N,a} membership, and frame-set atlas."""

from ._backend import BACKEND
from .atlas import (
    GaborParams,
    ObstructionDB,
    RegionClassification,
    classify,
    region_A_infimum,
    scan_region,
)
from .duality import (
    BoundsEstimate,
    DualityReport,
    bessel_upper_bound,
    duality_residuals,
    frame_bounds_from_dual,
)
from .errors import (
    DualityNotVerified,
    IntegrityError,
    ParameterError,
    ParameterOutOfRange,
    SingularMatrix,
    WindowSpecError,
)
from .membership import (
    MembershipReport,
    check_axioms,
    check_cor19,
    check_lemma45_extension,
    check_prop41,
    delta,
    delta2,
)
from .synthesis import DualResult, GMatrix, build_G, det_G, det_scan, minors, synthesize_dual
from .windows import GridFunction, Window, WindowSpec, evaluate, make_window, parse_window_spec, sample

__version__ = "0.1.0"
