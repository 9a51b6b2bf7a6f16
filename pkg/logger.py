"""Logging utilities for nilsoliton"""
import logging
import sys
from pathlib import Path
from typing import Optional


class EngineLogger:
    """Colored logger for the engine; writes to stderr so stdout stays machine-readable"""

    COLORS = {
        'RESET': '\033[0m',
        'RED': '\033[91m',
        'GREEN': '\033[92m',
        'YELLOW': '\033[93m',
        'BLUE': '\033[94m',
        'MAGENTA': '\033[95m',
        'CYAN': '\033[96m',
        'WHITE': '\033[97m',
        'BOLD': '\033[1m'
    }

    def __init__(self, name: str = "nilsoliton", log_file: Optional[str] = None, level: str = "INFO"):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False
        self.logger.handlers.clear()
        self.use_color = sys.stderr.isatty()

        # Console handler
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, level.upper(), logging.INFO))
        console_handler.setFormatter(logging.Formatter('%(message)s'))
        self.logger.addHandler(console_handler)
        self.console_handler = console_handler

        # File handler
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
            ))
            self.logger.addHandler(file_handler)

    def set_level(self, level: str):
        self.console_handler.setLevel(getattr(logging, level.upper(), logging.INFO))

    def _colorize(self, text: str, color: str) -> str:
        """Add color to text when stderr is a terminal"""
        if not self.use_color:
            return text
        return f"{self.COLORS.get(color, '')}{text}{self.COLORS['RESET']}"

    def info(self, message: str):
        """Log info message"""
        self.logger.info(self._colorize(f"ℹ️  {message}", 'CYAN'))

    def success(self, message: str):
        """Log success message"""
        self.logger.info(self._colorize(f"✅ {message}", 'GREEN'))

    def warning(self, message: str):
        """Log warning message"""
        self.logger.warning(self._colorize(f"⚠️  {message}", 'YELLOW'))

    def error(self, message: str):
        """Log error message"""
        self.logger.error(self._colorize(f"❌ {message}", 'RED'))

    def debug(self, message: str):
        """Log debug message"""
        self.logger.debug(message)

    def step(self, step_num: int, message: str):
        """Log a step in the process"""
        self.logger.info(self._colorize(f"\n{'='*60}\n🔹 STEP {step_num}: {message}\n{'='*60}", 'BOLD'))

    def check(self, name: str, ok: bool):
        """Log the verdict of one verification"""
        if ok:
            self.logger.info(self._colorize(f"✅ [CHECK] {name}", 'GREEN'))
        else:
            self.logger.warning(self._colorize(f"⚠️  [CHECK] {name} failed", 'YELLOW'))

    def discrepancy(self, source: str, entry: str):
        """Log a disagreement with a printed value"""
        self.logger.info(self._colorize(f"📝 [DISCREPANCY] {source} {entry}", 'MAGENTA'))

    def solver(self, family: str, details: str):
        """Log solver progress"""
        self.logger.debug(self._colorize(f"🔧 [SOLVE: {family}] {details}", 'BLUE'))


# Global logger instance
_logger_instance: Optional[EngineLogger] = None


def get_logger() -> EngineLogger:
    """Get or create global logger instance"""
    global _logger_instance
    if _logger_instance is None:
        from config import Config

        config = Config.from_env()
        _logger_instance = EngineLogger(log_file=config.LOG_FILE, level=config.LOG_LEVEL)
    return _logger_instance
