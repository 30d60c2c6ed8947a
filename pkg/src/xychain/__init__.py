"""Exactly solvable inhomogeneous XY spin chains from q-Racah contiguity data.

The package builds open XY chains whose free-fermion spectrum is known in
closed form, and certifies every analytic formula against independent
numerical oracles:

- :mod:`xychain.qseries` — terminating basic hypergeometric series.
- :mod:`xychain.qracah` — q-Racah polynomials, contiguity coefficients, and
  the three-term relations that encode the chain.
- :mod:`xychain.chain` — chain construction, closed-form spectra, P/Q
  eigenvector tables, and parameter scans.
- :mod:`xychain.linalg` — self-contained Jacobi eigensolver.
- :mod:`xychain.freefermion` — doubled one-particle matrix, numeric
  diagonalization, many-body spectra, and cross-checks.
- :mod:`xychain.spinoracle` — brute-force spin-chain Hamiltonian oracle.
- :mod:`xychain.cli` — the ``xychain`` command-line tool.
"""

__version__ = "0.1.0"

from .chain import (
    SCAN_LEVELS,
    ChainSpec,
    PQTable,
    analytic_spectrum,
    build_chain,
    build_pq_table,
    parameter_scan,
    pq_recurrence_residual,
    validate_draw,
)
from .errors import (
    ConfigError,
    ConvergenceFailure,
    DenominatorVanishes,
    InvalidParameterRegime,
    InvalidShiftedParams,
    NoValidParameters,
    SizeCapExceeded,
    XYChainError,
)
from .freefermion import (
    MANY_BODY_MODE_CAP,
    FreeFermionSystem,
    ManyBodySpectrum,
    SpectralData,
    analytic_vs_numeric,
    assemble,
    eigendecompose,
    eigenvector_crosscheck,
    many_body_spectrum,
    recurrence_check,
    singular_value_check,
)
from .linalg import jacobi_eigh
from .qracah import (
    FAMILIES,
    ContiguityCoefficients,
    QRacahParams,
    closed_form_lambda_squared,
    contiguity_coefficients,
    grid_variable,
    qracah_eval,
    shift_params,
    verify_contiguity,
)
from .qseries import phi43_terminating, q_pochhammer
from .report import CheckReport, CheckResult
from .spinoracle import (
    SPIN_DIMENSION_CAP,
    build_spin_hamiltonian,
    jw_certify,
    oracle_spectrum,
)

__all__ = [
    "__version__",
    "SCAN_LEVELS",
    "ChainSpec",
    "PQTable",
    "analytic_spectrum",
    "build_chain",
    "build_pq_table",
    "parameter_scan",
    "pq_recurrence_residual",
    "validate_draw",
    "ConfigError",
    "ConvergenceFailure",
    "DenominatorVanishes",
    "InvalidParameterRegime",
    "InvalidShiftedParams",
    "NoValidParameters",
    "SizeCapExceeded",
    "XYChainError",
    "MANY_BODY_MODE_CAP",
    "FreeFermionSystem",
    "ManyBodySpectrum",
    "SpectralData",
    "analytic_vs_numeric",
    "assemble",
    "eigendecompose",
    "eigenvector_crosscheck",
    "many_body_spectrum",
    "recurrence_check",
    "singular_value_check",
    "jacobi_eigh",
    "FAMILIES",
    "ContiguityCoefficients",
    "QRacahParams",
    "closed_form_lambda_squared",
    "contiguity_coefficients",
    "grid_variable",
    "qracah_eval",
    "shift_params",
    "verify_contiguity",
    "phi43_terminating",
    "q_pochhammer",
    "CheckReport",
    "CheckResult",
    "SPIN_DIMENSION_CAP",
    "build_spin_hamiltonian",
    "jw_certify",
    "oracle_spectrum",
]
