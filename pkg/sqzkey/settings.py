"""
Process-level settings read from the environment
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    workers: int = 1
    output_dir: str = "."

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from SQZKEY_* environment variables"""
        workers = os.getenv("SQZKEY_WORKERS", "1")
        try:
            n_workers = max(1, int(workers))
        except ValueError:
            print(f"⚠️ Ignoring SQZKEY_WORKERS={workers!r}, using 1")
            n_workers = 1
        return cls(
            log_level=os.getenv("SQZKEY_LOG_LEVEL", "WARNING").upper(),
            workers=n_workers,
            output_dir=os.getenv("SQZKEY_OUTPUT_DIR", "."),
        )


settings = Settings.from_env()
