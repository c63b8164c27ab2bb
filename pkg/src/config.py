"""
Configuration management for the kappa network engine
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Application configuration"""

    # Guards for the exponential oracles and Scomplete enumeration
    WORLD_CAP = int(os.getenv("KAPPANET_WORLD_CAP", str(2 ** 22)))
    CS_CAP = int(os.getenv("KAPPANET_CS_CAP", "4096"))

    # Numeric tolerances
    PROB_ROW_TOLERANCE = 1e-9
    EPSILON_POWER_TOLERANCE = 1e-12

    # Defaults for abstraction and inference runs
    DEFAULT_EPSILON = float(os.getenv("KAPPANET_EPSILON", "0.1"))
    DEFAULT_SEED = int(os.getenv("KAPPANET_SEED", "0"))
    MAX_WORKERS = int(os.getenv("KAPPANET_MAX_WORKERS", "4"))

    # Logging
    LOG_LEVEL = os.getenv("KAPPANET_LOG_LEVEL", "INFO").upper()
    LOG_FORMAT = os.getenv("KAPPANET_LOG_FORMAT", "json").lower()

    # Paths
    BASE_DIR = Path(__file__).parent.parent
    DOCS_DIR = BASE_DIR / "docs"
    LEDGER_PATH = BASE_DIR / os.getenv("KAPPANET_LEDGER_PATH", "data/run_ledger.db")

    # API server
    API_HOST = os.getenv("KAPPANET_API_HOST", "127.0.0.1")
    API_PORT = int(os.getenv("KAPPANET_API_PORT", "5005"))

    @classmethod
    def validate(cls):
        """Validate configuration values"""
        errors = []

        if cls.WORLD_CAP < 1:
            errors.append("KAPPANET_WORLD_CAP must be positive")

        if cls.CS_CAP < 1:
            errors.append("KAPPANET_CS_CAP must be positive")

        if not 0.0 < cls.DEFAULT_EPSILON < 1.0:
            errors.append("KAPPANET_EPSILON must lie strictly between 0 and 1")

        if cls.MAX_WORKERS < 1:
            errors.append("KAPPANET_MAX_WORKERS must be positive")

        if cls.LOG_FORMAT not in ("json", "text"):
            errors.append("KAPPANET_LOG_FORMAT must be 'json' or 'text'")

        if errors:
            raise ValueError(f"Configuration errors: {', '.join(errors)}")

        return True


# Validate configuration on import
Config.validate()
