"""Numerical toolkit for flatness seminorms and the smoothness of roots.

Non-negative functions on [0,1] whose derivatives vanish where the
function is small form a cone on which positive powers f**alpha gain
smoothness; this package computes the relevant seminorms, exact root
derivatives, wavelet coefficient decay, and runs an empirical
verification suite over built-in function families.
"""

from .function_model import (
    AffinePlus,
    Constant,
    FlatFamily,
    GridFunction,
    Power,
    Product,
    ScaledSum,
    ShiftedSquare,
    TabulatedGrid,
    antiderivative,
    evaluate,
    evaluate_array,
    grid_antiderivative,
    max_exact_derivative,
    strict_floor,
    sample,
    spec_from_json,
    spec_to_json,
)
from .holder_analysis import (
    MembershipReport,
    SeminormResult,
    flat_norm,
    flatness_seminorm,
    holder_norm,
    holder_seminorm,
    membership,
)
from .root_calculus import (
    FlatnessConstant,
    PartitionTuple,
    RootPower,
    critical_level,
    derivative_bound_check,
    faa_tuples,
    flatness_constant,
    local_root_holder,
    power_derivative,
    power_derivative_array,
    stability_radius,
)
from .theorem_suite import (
    SuiteConfig,
    VerificationReport,
    default_config,
    run_suite,
    write_suite_outputs,
)
from .wavelet_engine import (
    DecaySlopeFit,
    WaveletBasis,
    WaveletDecomposition,
    besov_norm_estimate,
    build_basis,
    classical_decay_check,
    decay_fit,
    decompose,
    level_sup,
    prop_decay_check,
    reconstruct,
)

__version__ = "0.1.0"
