"""Constants shared across the toolkit."""

# Largest multiplicity a multiset may hold (unsigned 63-bit range).
MAX_COUNT = 2**63 - 1

# Display form of the empty multiset.
EMPTY_MULTISET = "eps"

# Label of the write-only sink receiving objects sent out of the skin.
ENVIRONMENT = 0

DEFAULT_STATE_BUDGET = 50_000

# Brute-force oracles refuse instances with more count vectors than this.
ORACLE_MAX_VECTORS = 250_000

# Deepest membrane nesting a model may have.
MAX_NESTING = 64

# Integer literals longer than this are rejected by the lexer.
MAX_INT_DIGITS = 19

# Names of symbols, places, transitions and rules.
NAME_PATTERN = r"[A-Za-z][A-Za-z0-9_]*"

LOG_LEVEL_ENV = "TMN_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)-5s [%(name)s] %(message)s"
