import logging
import os

from dotenv import load_dotenv

# Load overrides from a local .env file before reading any setting
load_dotenv()

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("⚠️  %s=%r is not an integer, using %d", name, raw, default)
        return default


# Exact Bell numbers - Bell triangle cost grows quadratically in the index
MAX_BELL_INDEX = _int_env("BELL_MAX_N", 20_000)

# Working precision (bits) for every log-domain quantity
DEFAULT_PRECISION = _int_env("BELL_PRECISION", 192)
# Extra bits for ln B_n and B_n/B_{n-1} taken from the exact integers
GUARD_BITS = _int_env("BELL_GUARD_BITS", 8)
# Elevated precision used to certify the Lambert W residual
W_GUARD_BITS = _int_env("BELL_W_GUARD_BITS", 32)
# Precision doublings allowed when a comparison lands inside the rounding margin
MAX_ESCALATIONS = _int_env("BELL_MAX_ESCALATIONS", 4)

# Verification harness defaults
DEFAULT_JOBS = _int_env("BELL_JOBS", 1)
DEFAULT_N_TO = _int_env("BELL_DEFAULT_N_TO", 2000)

# Logging
_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
LOG_LEVEL = os.getenv("BELL_LOG_LEVEL", "WARNING").upper()

# Validation - Check that every setting is usable


def validate_config():
    """Validate the numeric settings, logging every problem found"""
    checks = {
        "BELL_MAX_N": MAX_BELL_INDEX >= 1,
        "BELL_PRECISION": DEFAULT_PRECISION >= 32,
        "BELL_GUARD_BITS": GUARD_BITS >= 0,
        "BELL_W_GUARD_BITS": W_GUARD_BITS >= 0,
        "BELL_MAX_ESCALATIONS": MAX_ESCALATIONS >= 0,
        "BELL_JOBS": DEFAULT_JOBS >= 1,
        "BELL_DEFAULT_N_TO": DEFAULT_N_TO >= 1,
        "BELL_LOG_LEVEL": LOG_LEVEL in _LOG_LEVELS,
    }

    invalid = [name for name, ok in checks.items() if not ok]

    if invalid:
        logger.error("❌ Invalid settings: %s", ", ".join(invalid))
        return False
    logger.debug("✅ All settings are valid")
    return True
