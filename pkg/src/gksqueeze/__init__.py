"""Generalized squeezed states for solvable quantum spectra.

Four state classes are built in the number basis from a spectrum e_n and its
dual eps_n = n^2 / e_n; photon statistics and quadrature variances follow
from the Fock coefficients.
"""

from .errors import (
    AsymptoticSeriesWarning,
    ConfigError,
    DivergentSeriesError,
    InvalidSpectrumError,
    ParameterWarning,
    SeriesError,
    SingularDualError,
    SingularSpectrumError,
    TruncationError,
)
from .spectra import (
    Spectrum,
    ValidationReport,
    dual_eigenvalue,
    eigenvalue,
    harmonic,
    hydrogen,
    jackson_factorial_log,
    laguerre,
    poschl_teller,
    spectrum_from_config,
    spectrum_from_nonlinearity,
    square_well,
    table,
    trapped_ion,
    trapped_ion_nonlinearity,
    validate,
)
from .states import (
    ConvergenceReport,
    FockState,
    SqueezedParams,
    SqueezedState,
    StateClass,
    TruncationPolicy,
    build_squeezed,
    convergence_check,
    evolve,
    gk_coherent,
    gk_coherent_dual,
    nonlinearity_factorial,
)
from .stats import (
    StatisticsReport,
    a_squared_expectation,
    is_squeezed,
    mandel_q,
    number_moments,
    photon_distribution,
    quadrature_variances,
    statistics,
)

__version__ = "0.1.0"
