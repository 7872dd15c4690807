import os
import sys

from dotenv import load_dotenv

load_dotenv(override=True)


class Colors:
    PURPLE = '\033[95m'
    CYAN = '\033[96m'
    DARKCYAN = '\033[36m'
    BLUE = '\033[94m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    RED = '\033[91m'
    BOLD = '\033[1m'
    UNDERLINE = '\033[4m'
    END = '\033[0m'


LEVELS = {"debug": 10, "info": 20, "warning": 30, "error": 40, "silent": 100}

_threshold = LEVELS.get(os.getenv("FDNOMA_LOG_LEVEL", "info").lower(), LEVELS["info"])


def set_log_level(level: str) -> None:
    """Set the console verbosity (debug, info, warning, error or silent)."""
    global _threshold
    try:
        _threshold = LEVELS[level.lower()]
    except KeyError:
        raise ValueError(f"Unknown log level '{level}', expected one of {sorted(LEVELS)}")


def _emit(level: str, line: str) -> None:
    if LEVELS[level] >= _threshold:
        print(line, file=sys.stderr)


def log_debug(message: str, color: str = Colors.DARKCYAN):
    """Log debug message with color"""
    _emit("debug", f"{color}· {message}{Colors.END}")


def log_info(message: str, color: str = Colors.CYAN):
    """Log info message with color"""
    _emit("info", f"{color}ℹ️ {message}{Colors.END}")


def log_success(message: str, color: str = Colors.GREEN):
    """Log success message with color"""
    _emit("info", f"{color}✅ {message}{Colors.END}")


def log_warning(message: str, color: str = Colors.YELLOW):
    """Log warning message with color"""
    _emit("warning", f"{color}⚠️ {message}{Colors.END}")


def log_error(message: str, color: str = Colors.RED):
    """Log error message with color"""
    _emit("error", f"{color}❌ {message}{Colors.END}")


def log_header(message: str):
    """Log header message with emphasis"""
    _emit("info", f"\n{Colors.BOLD}{Colors.PURPLE}{'='*60}{Colors.END}")
    _emit("info", f"{Colors.BOLD}{Colors.PURPLE}📡 {message}{Colors.END}")
    _emit("info", f"{Colors.BOLD}{Colors.PURPLE}{'='*60}{Colors.END}\n")
