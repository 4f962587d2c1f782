from pathlib import Path
from typing import Optional

from config.settings import SETTINGS

VERDICTS_FILE = 'verdicts.json'
VERSION = "1.0.0"


def get_data_path() -> Path:
    """Data directory holding the verdict table; the configured one wins over ./data."""
    candidates = [SETTINGS['data_directory'], Path.cwd() / 'data']
    return next((d for d in candidates if (d / VERDICTS_FILE).exists()), candidates[0])


def verdicts_path(data_dir: Optional[Path] = None) -> Path:
    return (data_dir or get_data_path()) / VERDICTS_FILE


def validate_data_files() -> bool:
    return verdicts_path().exists()


def get_version() -> str:
    return VERSION


def version_header() -> str:
    """First line of every written file."""
    return f"# eqqcsp {VERSION}"
