"""Constants for the fretcavity simulator.

All rates are in units of the zero-phonon radiative rate gamma (gamma = 1).
"""

# Numerical tolerances
HERMITIAN_TOL = 1e-12  # max|A - A^dagger| for a matrix flagged Hermitian
EIG_HERMITIAN_TOL = 1e-10  # accepted input asymmetry for eig_hermitian
EIG_RESIDUAL_TOL = 1e-9
SOLVE_RESIDUAL_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8  # smallest accepted density-matrix eigenvalue is -POSITIVITY_TOL
CONCURRENCE_CLAMP = 1e-10  # eigenvalues of rho*rho_tilde above -CLAMP are set to 0
ZERO_MODE_TOL = 1e-10  # relative to spectral scale, for Liouvillian kernels
SPECTRUM_FLOOR = 1e-12  # relative floor separating the stationary mode
TRAJECTORY_TRACE_TOL = 1e-6
MOMENT_CS_SLACK = 1e-9  # Cauchy-Schwarz slack for |c_DA| <= sqrt(p_D p_A)

# Liouvillians above this dimension get a sparse check of the modes nearest zero
SPECTRUM_CHECK_MAX_DIM = 1024
SPARSE_SPECTRUM_MODES = 3
SPARSE_SHIFT = 1e-6  # shift-invert target, relative to ||L||_1

# Cavity truncation; MAX_N_CAV keeps the composite dimension at 64 or below
DEFAULT_N_CAV = 5
MAX_N_CAV = 15
CONVERGENCE_RTOL = 1e-6
CONVERGENCE_ATOL = 1e-14

# Validity ratios for adiabatic elimination
ADIABATIC_RATIO = 10.0  # kappa >= ratio * max(g_D, g_A)
PUMP_ELIMINATION_RATIO = 10.0  # gamma_ie >= ratio * max(gamma_eg, gamma_ig, eta)
WEAK_PUMP_RATIO = 10.0  # gamma_tot - gamma_bar >= ratio * Gamma for the linear closure

# Geometry
DEFAULT_WAVELENGTH_NM = 500.0
UNIT_VECTOR_TOL = 1e-12

# Analytic formulas
SINGULAR_DENOMINATOR = 1e-300

# Sweeps
VERSION = "2026.10.1"
DEFAULT_PUMP_RATE = 1e-3  # weak incoherent pump used when a config sets none
CSV_FLOAT_FORMAT = "%.16e"  # 17 significant digits
STATUS_OK = "ok"
DEFAULT_THREADS = 1

# Local dimensions and ordering of the composite Hilbert space
QUBIT_DIM = 2
DONOR, ACCEPTOR, CAVITY = 0, 1, 2
