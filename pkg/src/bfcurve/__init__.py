"""Boolean function spectra, binary curve point counts and APN analysis.

Core layout:

* :mod:`bfcurve.gf2m`   - GF(2^m) arithmetic, linearized polynomials
* :mod:`bfcurve.boolfn` - truth tables, Walsh spectra, spectral stats
* :mod:`bfcurve.curves` - quintic Artin-Schreier curve point counting
* :mod:`bfcurve.xalpha` - derivative-curve sweeps and bound checks
* :mod:`bfcurve.apn`    - differential uniformity and the CV criterion
* :mod:`bfcurve.service` / :mod:`bfcurve.cli` - HTTP front end and client
"""

from .apn import (
    ApnPredicate,
    ApnReport,
    CvReport,
    apn_report,
    cv_sum,
    differential_uniformity,
    non_apn_predicate,
)
from .boolfn import (
    DivisibilityReport,
    FamilyPolynomial,
    SparsePolynomial,
    SpectrumStats,
    TruthTable,
    WalshSpectrum,
    binary_degree,
    divisibility_check,
    from_trace_poly,
    fwht,
    random_family,
    spectrum_csv,
    spectrum_stats,
    walsh_transform,
)
from .curves import (
    ArtinSchreierQuintic,
    QuadraticFormReport,
    analyze,
    exp_sum,
    quadratic_form_eval,
    r_polynomial,
    radical,
)
from .errors import (
    CorruptedSpectrumError,
    FieldMismatchError,
    InvariantViolationError,
)
from .gf2m import (
    Field,
    FieldElement,
    LinearizedPolynomial,
    field_params,
    half_trace_solve,
    is_irreducible,
    linearized_kernel,
    linearized_solve,
    smallest_irreducible,
)
from .xalpha import (
    AlphaClass,
    AlphaRecord,
    AlphaSweep,
    LowerBoundReport,
    SurveyReport,
    classify_alpha,
    derivative_curve,
    lower_bound_check,
    survey,
    x_alpha,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
