"""Configuration management for nilsoliton"""
import os
from pathlib import Path
from typing import Any, Dict, Optional

ROOT = Path(__file__).resolve().parent


class Config:
    """Central configuration for the engine and the CLI"""

    # Numeric oracle
    FD_STEP: float = 1e-4
    ORACLE_POINTS: int = 100
    ORACLE_RTOL: float = 1e-5
    ORACLE_SEED: int = 0

    # Ricci flow
    FLOW_STEP: float = 1e-3
    FLOW_T_END: float = 0.1
    DEGENERACY_TOL: float = 1e-9
    FLOW_SAMPLE_EVERY: int = 1

    # Soliton solver
    DEFAULT_DEGREE: int = 2
    MAX_DEGREE: int = 4
    ANSATZ_MAX_UNKNOWNS: int = 600

    # Runner
    JOBS: int = 1
    VALIDATE_REPORTS: bool = True
    LOG_FILE: Optional[str] = None
    LOG_LEVEL: str = "INFO"

    # Data files
    FIXTURES_PATH: str = str(ROOT / "printed_fixtures.json")
    SCHEMA_PATH: str = str(ROOT / "report_schema.json")

    @classmethod
    def from_env(cls) -> 'Config':
        """Load configuration from NILSOLITON_* environment variables"""
        config = cls()
        config.FD_STEP = float(os.getenv("NILSOLITON_FD_STEP", cls.FD_STEP))
        config.ORACLE_POINTS = int(os.getenv("NILSOLITON_ORACLE_POINTS", cls.ORACLE_POINTS))
        config.ORACLE_SEED = int(os.getenv("NILSOLITON_ORACLE_SEED", cls.ORACLE_SEED))
        config.ANSATZ_MAX_UNKNOWNS = int(os.getenv("NILSOLITON_ANSATZ_MAX_UNKNOWNS", cls.ANSATZ_MAX_UNKNOWNS))
        config.JOBS = int(os.getenv("NILSOLITON_JOBS", cls.JOBS))
        config.VALIDATE_REPORTS = os.getenv("NILSOLITON_VALIDATE_REPORTS", "true").lower() == "true"
        config.LOG_FILE = os.getenv("NILSOLITON_LOG_FILE") or None
        config.LOG_LEVEL = os.getenv("NILSOLITON_LOG_LEVEL", cls.LOG_LEVEL).upper()
        config.FIXTURES_PATH = os.getenv("NILSOLITON_FIXTURES", cls.FIXTURES_PATH)
        config.SCHEMA_PATH = os.getenv("NILSOLITON_SCHEMA", cls.SCHEMA_PATH)
        return config

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary"""
        return {
            "fd_step": self.FD_STEP,
            "oracle_points": self.ORACLE_POINTS,
            "oracle_rtol": self.ORACLE_RTOL,
            "oracle_seed": self.ORACLE_SEED,
            "flow_step": self.FLOW_STEP,
            "flow_t_end": self.FLOW_T_END,
            "degeneracy_tol": self.DEGENERACY_TOL,
            "default_degree": self.DEFAULT_DEGREE,
            "max_degree": self.MAX_DEGREE,
            "ansatz_max_unknowns": self.ANSATZ_MAX_UNKNOWNS,
            "jobs": self.JOBS,
            "validate_reports": self.VALIDATE_REPORTS,
        }
