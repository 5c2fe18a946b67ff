"""
Wightman Probe Configuration.
"""
from navconfig import config
from navconfig.logging import logging


## Log level for every "WProbe.*" logger
WPROBE_LOG = config.get("WPROBE_LOG", fallback="INFO").upper()
logging.getLogger(name="WProbe").setLevel(
    getattr(logging, WPROBE_LOG, logging.INFO)
)

############
#
### Quadrature
#
############

# relative tolerance of the adaptive Gauss-Legendre panels.
QUAD_RTOL = float(config.get("WPROBE_QUAD_RTOL", fallback=1e-10))
# bisection levels before giving up.
QUAD_MAX_DEPTH = config.getint("WPROBE_QUAD_MAX_DEPTH", fallback=12)
# Gauss-Legendre nodes per panel.
GL_ORDER = config.getint("WPROBE_GL_ORDER", fallback=20)
# integrated mass allowed outside a tooth window.
TAIL_TOL = float(config.get("WPROBE_TAIL_TOL", fallback=1e-12))

############
#
### Correlators
#
############

DEFAULT_EPSILON = float(config.get("WPROBE_EPSILON", fallback=1e-2))
# iε ladder, in units of the characteristic time of each evaluation.
EPSILON_LADDER = (1e-2, 5e-3, 2.5e-3)
THERMAL_IMAGES = config.getint("WPROBE_THERMAL_IMAGES", fallback=64)
# width T of the Gaussian observation window used by the adiabatic rate.
ADIABATIC_WINDOW = float(config.get("WPROBE_ADIABATIC_WINDOW", fallback=200.0))

############
#
### Response and experiments
#
############

PERTURBATIVE_LIMIT = float(config.get("WPROBE_PERTURBATIVE_LIMIT", fallback=0.1))
# measured protocol route is flagged when the signal is below this many error estimates.
CANCELLATION_FACTOR = 1e3
# rms residual (log space) above which a scaling fit is inconclusive.
SCALING_RESIDUAL_LIMIT = 1e-2
DEFAULT_ETA_FRACTIONS = (0.1, 0.05, 0.025, 0.0125)

## CLI
WPROBE_THREADS = config.getint("WPROBE_THREADS", fallback=1)
WPROBE_OUTPUT_DIR = config.get("WPROBE_OUTPUT_DIR", fallback="output")
