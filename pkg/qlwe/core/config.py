from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load .env file explicitly to make variables available in os.environ
load_dotenv()


class Settings(BaseSettings):
    # Master seed, overridden by QLWE_SEED
    SEED: int = 20240521

    # Run ledger
    DATABASE_URL: str = "sqlite:///./qlwe_runs.db"

    # Logging
    LOG_LEVEL: str = "INFO"

    # Trial fan-out
    WORKERS: int = 1

    # Simulation guards
    DENSE_QUBIT_LIMIT: int = 22
    ENUMERATION_LIMIT: int = 2 ** 24
    SPARSE_SUPPORT_LIMIT: int = 2 ** 20

    # Declared depths for modeled (opaque) arithmetic layers
    LINEAR_MAP_DECLARED_DEPTH: int = 6
    LINEAR_MAP_DECLARED_ERROR: float = 0.0

    # c in "classical depth <= c * ceil(log2 r1)"
    FANOUT_CLASSICAL_FACTOR: int = 2

    # Meta info echoed in every report
    PROJECT_NAME: str = "qlwe"
    DESCRIPTION: str = """
    Simulator and verification laboratory for the LWE-based constant-depth
    test of quantumness: verifier/prover protocol, exact prover simulation,
    layered-circuit compilation and desk-scale property checks.
    """
    VERSION: str = "0.1.0"

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_prefix="QLWE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


# Values come from QLWE_* environment variables (and .env) when present
settings = Settings()
