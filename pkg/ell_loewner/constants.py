"""Constants used throughout the application.

Every tolerance a run can override has its default here; `config` merges
user values over this table.
"""

# Modular parameter band: Im(tau) >= Y_MIN keeps |q| <= exp(-pi * Y_MIN)
DEFAULT_Y_MIN = 0.05

# Minimum distance from a zero lattice before an evaluation is refused
DEFAULT_POLE_GUARD = 1e-3

# q-series truncation
SERIES_RELATIVE_THRESHOLD = 1e-17
SERIES_TERM_CAP = 200

# Largest u-derivative exposed through theta_eval
MAX_PUBLIC_DU_ORDER = 4

# Laurent tail / Faber order cap
MAX_SERIES_ORDER = 16

# Purely imaginary tau: |Re tau| below this
PURELY_IMAGINARY_TOL = 1e-14

# Imaginary parts below this are discarded when a quantity must be real
REALITY_TOL = 1e-12

# Denominators below this are treated as degenerate
DEGENERATE_TOL = 1e-10

# Integrator defaults
DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12
DEFAULT_H_MIN = 1e-12
DEFAULT_H_INITIAL = 1e-2
MAX_POLE_HALVINGS = 40
STEP_SAFETY = 0.9
STEP_MIN_FACTOR = 0.2
STEP_MAX_FACTOR = 5.0

# Root finding
NEWTON_MAX_ITER = 100
NEWTON_FD_STEP = 1e-6

# Centred-difference step for F_y in the implicit-function gradient
GRADIENT_FD_STEP = 1e-5
ROOT_RESIDUAL_TOL = 1e-10
ROOT_XTOL = 1e-15
SCAN_POINTS = 100

# Chebyshev nodes used for the smooth reduction interpolant
DEFAULT_INTERPOLATION_NODES = 40

# Hodograph finite-difference defaults
DEFAULT_FD_STEP = 1e-2
DEFAULT_GRID_SIZE = 5
DEFAULT_GRID_SPACING = 1e-2
DEFAULT_HODOGRAPH_TOLERANCE = 10.0  # multiplies h**2

# Identity verification defaults
DEFAULT_SAMPLES = 1000
DEFAULT_IDENTITY_TOL = 1e-10
DEFAULT_TAU_BAND = (0.3, 3.0)
MAX_RESAMPLE_ATTEMPTS = 50
DEFAULT_ETA_WINDOW = DEFAULT_POLE_GUARD  # eta sampled in (delta, 1 - delta)
REDUCTION_ETA_WINDOW = 0.05  # keeps xi away from the zero of S' at 1/2

# Sampled points closer than this to a zero lattice are redrawn
DEFAULT_SAMPLE_GUARD = 2e-2

# Concurrency
THREADS_ENV_VAR = "ELL_LOEWNER_THREADS"
DEFAULT_MAX_WORKERS = 4

# Exit codes
EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3

# Result symbols
PASS_MARK = "✔"
FAIL_MARK = "✘"

# Output icons
FILE_ICON = "📄"
STDOUT_ICON = "＞"

# Forms of S'(u) that can be selected for the identity suites
S_PRIME_FORMS = ("log_derivative", "closed_form", "printed")

VERIFY_SUITES = ("theta", "sprime", "ss2", "ss3", "landen", "curve", "quotient", "ap")

# Per-suite default tolerances (normalized residuals)
SUITE_TOLERANCES = {
    "theta": 1e-11,
    "sprime": 1e-11,
    "ss2": 1e-10,
    "ss3": 1e-10,
    "landen": 1e-11,
    "curve": 1e-11,
    "quotient": 1e-10,
    "ap": 1e-10,
}
