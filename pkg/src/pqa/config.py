import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent


class Settings:
    # Gate signature
    PQA_STDLIB: str = os.getenv("PQA_STDLIB", str(PACKAGE_DIR / "encoding" / "stdlib.sig"))

    # Normalization
    PQA_FUEL: int = int(os.getenv("PQA_FUEL", "100000"))
    PQA_AUDIT: bool = os.getenv("PQA_AUDIT", "0") == "1"

    # Fuzzing
    PQA_FUZZ_COUNT: int = int(os.getenv("PQA_FUZZ_COUNT", "1000"))
    PQA_FUZZ_DEPTH: int = int(os.getenv("PQA_FUZZ_DEPTH", "8"))
    PQA_FUZZ_SEED: int = int(os.getenv("PQA_FUZZ_SEED", "0"))
    PQA_FUZZ_JOBS: int = int(os.getenv("PQA_FUZZ_JOBS", "1"))
    PQA_ORACLE_MAX_LINEAR: int = int(os.getenv("PQA_ORACLE_MAX_LINEAR", "12"))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FILE: str = os.getenv("LOG_FILE", "")


settings = Settings()
