"""
Run-directory persistence: atomic JSON documents, array encoding, CSV tables
"""
import base64
import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from config.settings import settings

PathLike = Union[str, Path]


# ============================================
# ARRAYS
# ============================================
def encode_array(array: np.ndarray) -> Dict[str, Any]:
    """Base64 of the little-endian float64 bytes, with shape"""
    data = np.ascontiguousarray(np.asarray(array, dtype="<f8"))
    return {
        "dtype": "<f8",
        "shape": list(data.shape),
        "data": base64.b64encode(data.tobytes()).decode("ascii"),
    }


def decode_array(payload: Dict[str, Any]) -> np.ndarray:
    raw = base64.b64decode(payload["data"])
    array = np.frombuffer(raw, dtype=payload.get("dtype", "<f8"))
    return array.reshape(payload["shape"]).astype(np.float64)


# ============================================
# JSON
# ============================================
@contextmanager
def atomic_writer(path: PathLike) -> Iterator[Any]:
    """
    Context manager yielding a text handle; the target only appears once the
    block exits cleanly.
    Usage:
        with atomic_writer(path) as fh:
            fh.write(text)
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except Exception as e:
        logger.error(f"Write to {path} failed: {e}")
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_json(path: PathLike, document: Dict[str, Any]) -> Path:
    with atomic_writer(path) as fh:
        json.dump(document, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    return Path(path)


def read_json(path: PathLike) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# ============================================
# CSV
# ============================================
def write_csv(path: PathLike, rows: Sequence[Dict[str, Any]], columns: List[str]) -> Path:
    """Write `rows` with a fixed column order and full float precision"""
    df = pd.DataFrame(list(rows), columns=columns)
    with atomic_writer(path) as fh:
        df.to_csv(fh, index=False, float_format=settings.CSV_FLOAT_FORMAT, lineterminator="\n")
    return Path(path)


def read_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path)
