# cle_integrability/config.py
"""
Central configuration for the CLE integrability engine.
Every tunable tolerance, node count, sample size and default seed lives here.
Change these values for convergence studies; logic modules import them and never hardcode their own.
"""

import os

# =============================================================================
# NUMERICS
# =============================================================================

# Adaptive quadrature (scipy.integrate.quad)
QUAD_ABS_TOL = 1e-14
QUAD_REL_TOL = 1e-12
QUAD_MAX_SUBDIVISIONS = 200
QUAD_TRUNCATION_BOUND = 60.0  # upper limit for semi-infinite integration variables

# Taylor series window for sin(pi*sqrt(s)) and cos(pi*sqrt(s)) near s = 0
SERIES_WINDOW = 1e-3
SERIES_TERMS = 12

# Width of the |kappa - 4| band where removable singularities switch to limit formulas
KAPPA4_LIMIT_BAND = 1e-6

# =============================================================================
# LAPLACE INVERSION (fixed Talbot contour)
# =============================================================================

INVERSION_NODES = 32
INVERSION_TIME_SCALE = 1.0
INVERSION_REFINE_FACTOR = 1.5     # self-check re-runs with ceil(1.5 * M) nodes
INVERSION_SELF_CHECK_TOL = 1e-6

# =============================================================================
# LEVY SIMULATION
# =============================================================================

LEVY_JUMP_CUTOFF = 1e-3
LEVY_SMALL_JUMP_MODE = "gaussian_approx"    # or "drift_only"
LEVY_ADAPTIVE_CUTOFF = True
LEVY_MAX_PATH_TIME = 1e9
LEVY_BLOCK_SIZE = 4096          # jumps drawn per vectorized block
LEVY_RESCALE_BAND = (0.5, 4.0)  # restart a block when distance leaves this band
LEVY_BETAS = [1.25, 1.5, 1.8333333333333333]
LEVY_REFINE_FACTOR = 10.0      # inverse-mean error at eps/10 must not exceed the error at eps

# Histogram bins must sit above this multiple of the cutoff
LEVY_BIN_CUTOFF_MULTIPLE = 10.0

# =============================================================================
# CASCADE
# =============================================================================

CASCADE_MIN_EFFECTIVE_SAMPLES = 50
CASCADE_BINS = 8                 # bins spanning [a/2, 2a]

# =============================================================================
# LOOPTREE
# =============================================================================

LOOPTREE_REJECTION_BUDGET = 1_000_000
LOOPTREE_BATCH = 64              # bridge attempts drawn per numpy call
LOOPTREE_MIN_STEPS = 100

# =============================================================================
# RENEWAL
# =============================================================================

CR_GRID_NODES = 2048
CR_GRID_MIN = 1e-4
CR_TAIL_TARGET = 0.999
CR_KAPPAS = [3.0, 4.0, 6.0]
RENEWAL_HORIZON = 50.0
RENEWAL_HORIZON_MULTIPLE = 10.0  # C >= 10 E[B1]

# =============================================================================
# VERIFY SUITES
# =============================================================================

DEFAULT_SEED = 7
DEFAULT_REPLICAS = 10_000
SUITES = ["identities", "levy", "cascade", "looptree", "renewal", "all"]

# Deterministic grids
MGF_KAPPAS = [2.8, 3.0, 3.5, 3.9, 4.0, 4.5, 6.0, 7.5]
MGF_LAMBDA_POINTS = 20
FZZ_ALPHA_FRACTIONS = [0.25, 0.5, 0.75]   # alpha = gamma/2 + f (Q - gamma/2)
FZZ_ELLS = [0.5, 1.0, 2.0]
FZZ_MUS = [0.1, 1.0, 5.0]
GQD_KAPPA_PRIMES = [5.0, 6.0, 7.0]
GQD_TAIL_X = 1e3
WELDING_EPS = 1e-6
WELDING_DELTA = 1e-2

JUMP_SECOND_MOMENT_BETAS = [1.2, 1.4999, 1.7, 1.9]
PSI_THETA = 1.25

# Monte-Carlo grids
LEVY_CHECK_HORIZON = 0.01        # unconditioned paths for intensity and martingale rows
CASCADE_KAPPAS = [16.0 / 3.0, 4.0, 3.0]   # beta = 1.25, 1.5, 11/6
CASCADE_SCALE_FACTOR = 2.0
CR_ROUNDTRIP_LAMBDAS = [0.5, 1.0, 2.0]

# Looptree jump-moment campaign
JUMP_MOMENT_STEPS = 10_000
JUMP_MOMENT_EXCURSIONS = 1_000
JUMP_MOMENT_ALPHAS = [3.0 ** 0.5, 2.0]    # at gamma = sqrt(3)
JUMP_MOMENT_GROWTH_ORDER = 1.0           # below nu = 4/3: infinite moment
JUMP_MOMENT_GROWTH_EXCURSIONS = 200
JUMP_MOMENT_GROWTH_FACTOR = 4            # compare n/4 steps against n
QUOTIENT_MAX_STEPS = 8

# Tolerances (relative unless noted)
N_SIGMA = 3.0
MGF_TOL = 1e-10
FZZ_TOL = 1e-8
GQD_DERIVATIVE_TOL = 1e-6
GQD_MEAN_TOL = 1e-5
GQD_TAIL_TOL = 0.03
WELDING_TOL = 0.02
IDENTITY_TOL = 1e-10
QD_RATIO_TOL = 1e-12
JUMP_SECOND_MOMENT_TOL = 1e-6
PSI_THETA_TOL = 1e-8             # absolute
KAPPA4_TOL = 1e-6                # absolute
INVERSE_MEAN_TOL = 0.05
JUMP_MOMENT_TOL = 0.10
CR_ROUNDTRIP_TOL = 1e-4          # absolute
CR_MEAN_TOL = 1e-3
DILATION_TOL = 1e-6
RENEWAL_TOL = 0.03

# =============================================================================
# OUTPUT
# =============================================================================

VERIFY_CSV_COLUMNS = ["check", "target", "estimate", "stderr", "tolerance", "pass", "anchor"]
FLOAT_FORMAT = "%.12g"

# =============================================================================
# LOGGING
# =============================================================================

LOG_LEVEL = os.environ.get("CLE_INTEGRABILITY_LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
