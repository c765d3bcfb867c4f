"""Bundled, editable lexicon data files."""
from pathlib import Path

_ROOT = Path(__file__).parent


def data_path(*parts: str) -> Path:
    """Absolute path of a bundled data file."""
    path = _ROOT.joinpath(*parts)
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file {'/'.join(parts)!r}")
    return path
