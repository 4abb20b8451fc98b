EPS_PSD_ENV = "PPMAP_EPS_PSD"
EPS_EIG_ENV = "PPMAP_EPS_EIG"
EPS_MATCH_ENV = "PPMAP_EPS_MATCH"

BISECTION_TOL_ENV = "PPMAP_BISECTION_TOL"
BISECTION_MAX_ITER_ENV = "PPMAP_BISECTION_MAX_ITER"

SEESAW_RESTARTS_ENV = "PPMAP_SEESAW_RESTARTS"
SEESAW_MAX_ITERS_ENV = "PPMAP_SEESAW_MAX_ITERS"
SEED_ENV = "PPMAP_SEED"

AUDIT_SAMPLES_ENV = "PPMAP_AUDIT_SAMPLES"
MAX_DIMENSION_ENV = "PPMAP_MAX_DIMENSION"

LOG_LEVEL_ENV = "LOG_LEVEL"

DEFAULT_EPS_PSD = 1e-9
DEFAULT_EPS_EIG = 1e-10
DEFAULT_EPS_MATCH = 1e-12
DEFAULT_BISECTION_TOL = 1e-9
DEFAULT_BISECTION_MAX_ITER = 200
DEFAULT_SEESAW_RESTARTS = 64
DEFAULT_SEESAW_MAX_ITERS = 500
DEFAULT_SEED = 0
DEFAULT_AUDIT_SAMPLES = 1000
# map-apply builds n^2 x n^2 operators; 64 keeps that under 17M entries
DEFAULT_MAX_DIMENSION = 64

# Grid sizes used by the reproduction audit
DEFAULT_PARAM_GRID = 21
DEFAULT_B_GRID = 101
