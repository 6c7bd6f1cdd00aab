"""Quantum bit seal attacks and the min-max average-fidelity tradeoff."""

from .attack import (
    HelstromDecomposition,
    OverlapReport,
    Povm,
    apply_channel,
    build_attack,
    classical_l1,
    guess_probability,
    helstrom_decomposition,
    outcome_distribution,
    overlap_report,
    scheme_attack,
)
from .fidelity import (
    FidelityReport,
    average_fidelity,
    fbar_at_a,
    fbar_minmax,
    verification_pass_probability,
)
from .optimizer import (
    OptimizationResult,
    PovmParameterization,
    maximize_fidelity,
    retract_to_povm,
    verify_bound,
)
from .seal import (
    SchemeAnalysis,
    SealScheme,
    analyze_scheme,
    load_scheme,
    make_product_scheme,
    make_stringent_scheme,
    save_scheme,
)

__version__ = "0.1.0"
