"""
File handler for pwtest
Reads and writes sample CSVs, result tables and JSON documents atomically
"""

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from ..core.errors import ConfigError, DegenerateDataError, EmptyInputError
from ..core.samples import SampleSet

# Every float is written with enough digits to round-trip exactly
FLOAT_FORMAT = "%.17g"

_COLUMN_PATTERN = re.compile(r"^x(\d+)$")

PathLike = Union[str, Path]


def _atomic_write(path: PathLike, text: str):
    """
    Write text to path through a temporary file in the same directory

    The target either keeps its previous contents or holds the full new
    text; a failed write never leaves a truncated file behind.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def sample_columns(d: int):
    return [f"x{j}" for j in range(1, d + 1)]


def read_samples(file_path: PathLike) -> SampleSet:
    """
    Load a sample CSV with header x1,...,xd (one observation per row)

    Args:
        file_path: Path to the CSV file

    Returns:
        SampleSet

    Raises:
        FileNotFoundError: If the file doesn't exist
        ConfigError: If the file is not UTF-8 CSV, or the header is missing or not exactly x1..xd
        DegenerateDataError: If a value is missing, non-numeric or non-finite
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise FileNotFoundError(f"Sample file not found: {file_path}")

    try:
        df = pd.read_csv(file_path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise ConfigError(f"{file_path} is empty; expected a header x1,...,xd")
    except UnicodeDecodeError as e:
        raise ConfigError(f"{file_path} is not UTF-8 text ({e.reason} at byte {e.start})")
    except pd.errors.ParserError as e:
        raise ConfigError(f"{file_path} is not a well-formed CSV ({e})")

    expected = sample_columns(len(df.columns))
    if list(df.columns) != expected or not all(_COLUMN_PATTERN.match(c) for c in df.columns):
        raise ConfigError(f"{file_path}: header must be {','.join(expected) or 'x1,...,xd'}, got {list(df.columns)}")
    if df.empty:
        raise EmptyInputError(f"{file_path} has a header but no rows")

    try:
        data = df.apply(lambda col: col.str.strip()).astype(np.float64).to_numpy()
    except ValueError as e:
        raise DegenerateDataError(f"{file_path}: non-numeric value ({e})")
    if not np.all(np.isfinite(data)):
        raise DegenerateDataError(f"{file_path} contains NaN or infinite values")
    return SampleSet(data)


def samples_frame(X: SampleSet) -> pd.DataFrame:
    return pd.DataFrame(X.data, columns=sample_columns(X.d))


def write_frame(df: pd.DataFrame, file_path: PathLike) -> Path:
    """Write a DataFrame as CSV (no index, exact floats) atomically"""
    text = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    _atomic_write(file_path, text)
    return Path(file_path)


def write_samples(X: SampleSet, file_path: PathLike) -> Path:
    """Write a SampleSet in the x1..xd CSV format"""
    return write_frame(samples_frame(X), file_path)


def to_jsonable(value: Any) -> Any:
    """JSON- and YAML-ready copy of a payload built from Python builtins only"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(payload: Dict[str, Any], file_path: PathLike) -> Path:
    """Write a JSON document (indent 2, sorted keys) atomically"""
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"
    _atomic_write(file_path, text)
    return Path(file_path)


def read_json(file_path: PathLike) -> Dict[str, Any]:
    file_path = Path(file_path)
    if not file_path.exists():
        raise FileNotFoundError(f"JSON file not found: {file_path}")
    with open(file_path, "r") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{file_path} is not valid JSON: {e}")


def manifest_path(output_path: PathLike) -> Path:
    """<output>.manifest.json next to the output file"""
    output_path = Path(output_path)
    return output_path.with_name(output_path.name + ".manifest.json")
