# "src/signal/serialization.py"

## Fixture formats for grid functions:
## - Flat binary: three little-endian int32 (n, L0, L) followed by the row-major cell values
##   as little-endian float64
## - CSV: a "# n=.. L0=.. L=.." comment line, then columns `cell,value` (row-major cell index)

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from .grid_function import GridFunction

logger = logging.getLogger(__name__)

HEADER_DTYPE = np.dtype("<i4")
VALUE_DTYPE = np.dtype("<f8")
HEADER_BYTES = 3 * HEADER_DTYPE.itemsize


def to_bytes(f):
    header = np.array([f.dimension, f.half_width_level, f.level], dtype=HEADER_DTYPE)
    return header.tobytes() + np.ascontiguousarray(f.values, dtype=VALUE_DTYPE).tobytes()


def from_bytes(payload):
    if len(payload) < HEADER_BYTES:
        raise ValueError("binary grid function is missing its header")
    n, half_width_level, level = (int(v) for v in np.frombuffer(payload[:HEADER_BYTES], dtype=HEADER_DTYPE))
    values = np.frombuffer(payload[HEADER_BYTES:], dtype=VALUE_DTYPE)
    size = 2 ** (half_width_level + 1 + level)
    if values.size != size ** n:
        raise ValueError(f"binary payload holds {values.size} values, header announces {size ** n}")
    return GridFunction(values.reshape((size,) * n), n, half_width_level, level)


def save_binary(f, path):
    Path(path).write_bytes(to_bytes(f))
    logger.debug("wrote %r to %s", f, path)


def load_binary(path):
    return from_bytes(Path(path).read_bytes())


def save_csv(f, path):
    path = Path(path)
    frame = pd.DataFrame({"cell": np.arange(f.values.size), "value": f.values.ravel()})
    with path.open("w", newline="") as handle:
        handle.write(f"# n={f.dimension} L0={f.half_width_level} L={f.level}\n")
        frame.to_csv(handle, index=False, float_format="%.17g")


def _read_mesh_comment(path):
    with Path(path).open() as handle:
        first = handle.readline().strip()
    if not first.startswith("#"):
        raise ValueError(f"{path}: missing '# n= L0= L=' header line")
    fields = dict(item.split("=", 1) for item in first.lstrip("#").split())
    try:
        return int(fields["n"]), int(fields["L0"]), int(fields["L"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: malformed mesh header {first!r}") from exc


def load_csv(path):
    n, half_width_level, level = _read_mesh_comment(path)
    frame = pd.read_csv(path, comment="#")
    size = 2 ** (half_width_level + 1 + level)
    values = np.zeros(size ** n)
    values[frame["cell"].to_numpy(dtype=int)] = frame["value"].to_numpy(dtype=float)
    return GridFunction(values.reshape((size,) * n), n, half_width_level, level)


def load_any(path):
    """Dispatch on the file suffix (.csv or anything else as binary)."""
    if Path(path).suffix.lower() == ".csv":
        return load_csv(path)
    return load_binary(path)
