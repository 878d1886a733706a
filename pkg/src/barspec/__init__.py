"""Graded barcodes, interleaving distances, and spectral invariants."""

from .barcode import (
    Bar,
    Barcode,
    CauchyBarcodeSequence,
    allclose,
    cauchy_limit,
    convolve,
    dprime_distance,
    epsilon_interleaved,
    hom_dims,
    q_dims,
    shift,
    shifted_dprime,
    torsion_threshold,
)
from .errors import (
    ActionUnavailable,
    BarspecError,
    CertificateInvalid,
    CheckFailed,
    EmptySpec,
    IncompatibleMap,
    InputError,
    InvalidComplex,
    LengthMismatch,
    NotCauchy,
    NotExact,
    UnsupportedComplex,
    ZeroClass,
)
from .fcomplex import (
    ChainMap,
    FilteredComplex,
    InterleavingCertificate,
    cone,
    cone_torsion_bound_check,
    from_barcode,
    is_homotopic,
    kernel_apply,
    kernel_restriction,
    matching_certificate,
    presentation,
    reduce,
    tau,
    telescope,
    thickening_cone_checks,
    verify_certificate,
)
from .specinv import (
    ExactSequence,
    FilteredGradedModule,
    GradedModule,
    GradedRing,
    SpecSet,
    cup_length,
    gamma_duality_check,
    ls_check,
    spec,
    spectral_invariant,
    spectral_norm,
    subadditivity_check,
)
from .sublevel import (
    CellComplex,
    PairFiltration,
    SampledFunction,
    build_pair_filtration,
    cup_action,
    dual_function,
    spec_of_function,
)

__version__ = "0.1.0"
