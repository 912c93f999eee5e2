"""
ConsensusFlow configuration and constants.
"""

from enum import Enum


class ChainKind(str, Enum):
    STATIC = "static"
    PERIODIC = "periodic"
    EXPLICIT = "explicit"
    GENERATOR = "generator"


class TailPolicy(str, Enum):
    REPEAT_LAST = "repeat-last"
    CYCLE = "cycle"
    IDENTITY = "identity"


class GeneratorFamily(str, Enum):
    DOUBLY_STOCHASTIC = "doubly_stochastic"
    SELF_CONFIDENT_CUT_BALANCED = "self_confident_cut_balanced"
    TWO_LEADER = "two_leader"
    PERIODIC_SWAP = "periodic_swap"
    BALANCED_ASYMMETRIC = "balanced_asymmetric"
    GOSSIP = "gossip"


class Verdict(str, Enum):
    ERGODIC = "ergodic"
    CLASS_ERGODIC = "class-ergodic"
    INCONCLUSIVE = "inconclusive"


class CertificateMethod(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Command(str, Enum):
    SIMULATE = "simulate"
    CLASSIFY = "classify"
    ISLANDS = "islands"
    PSTAR = "pstar"
    MATCH = "match"
    NORMALIZE = "normalize"
    DSDECOMPOSE = "dsdecompose"
    SCANJETS = "scanjets"
    GEN = "gen"


# Row-sum tolerance for a single validated matrix
ROW_SUM_TOL = 1e-9

# Backward products are re-checked with PRODUCT_TOL_PER_STEP * (number of factors)
PRODUCT_TOL_PER_STEP = 1e-7

# pi_i(n) at or below this is a zero-mass row (uniform arbitrary row in P(n))
ZERO_MASS_TOL = 1e-12

# Absolute probability residual and duality pass thresholds
ABSPROB_TOL = 1e-9
DUALITY_TOL = 1e-8

# Slack on the subset inequalities (cut-balance, balanced asymmetry,
# weak aperiodicity) so that equality cases survive floating point
CERT_TOL = 1e-12

# Subset enumeration caps
EXHAUSTIVE_CUT_MAX_N = 20          # 2^N subsets
EXHAUSTIVE_BALANCED_MAX_N = 10     # sum_k C(N,k)^2 subset pairs
LEADER_PAIR_MAX_N = 16            # pairwise disjointness over leader subsets
DEFAULT_SAMPLE_COUNT = 4096
SUBSET_CHUNK = 1 << 15

# Generator rejection sampling
REJECTION_BUDGET = 1000            # tries per step
GENERATION_VERIFY_MAX_N = 6        # exhaustive verification at draw time
GENERATION_SAMPLE_COUNT = 256      # sampled verification above that size

# Analysis defaults (match the acceptance-suite settings)
DEFAULT_EPS = 1e-6
DEFAULT_THETA = 50.0
DEFAULT_HORIZON = 2000
DEFAULT_PSI = 1.0
DEFAULT_PROBES_EXTRA = 2           # seeded random probes on top of the N unit vectors

# Generator defaults
DEFAULT_DELTA = 0.2
DEFAULT_DENSITY = 0.5
DEFAULT_GOSSIP_WEIGHT = 0.5

# Report formatting
REPORT_INDENT = 2

# CLI exit codes
EXIT_OK = 0
EXIT_INVALID = 1          # validation error, failed matching, unwritable output
EXIT_INCONCLUSIVE = 2     # --strict and the verdict is inconclusive
