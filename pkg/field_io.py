"""
Field I/O Module

Flat binary snapshots of sampled fields and their CSV summaries.

Layout (little-endian): a 28-byte header

    magic    8 bytes  b"BLTFIELD"
    version  uint16
    domain   uint16   0 torus, 1 ball
    boundary uint16   0 none, 1 slip, 2 no-slip
    reserved uint16
    n        uint32   grid points per axis
    time     float64  NaN when the field carries no time stamp

followed by 3 * n^3 float64 values in C order (component, x, y, z).
"""

import math
import os

import numpy as np

from criteria import BoundaryCondition
from exceptions import InvalidConfig
from fields import (
    Domain,
    SampledField,
    beltrami_residual,
    divergence,
    gradient_lq_norm,
    helicity_density_residual,
    lamb_residual,
    lq_norm,
)
from logger import get_logger
from utility_functions import ensure_directory

logger = get_logger("field_io")

MAGIC = b"BLTFIELD"
FORMAT_VERSION = 1

HEADER_DTYPE = np.dtype([
    ("magic", "S8"),
    ("version", "<u2"),
    ("domain", "<u2"),
    ("boundary", "<u2"),
    ("reserved", "<u2"),
    ("n", "<u4"),
    ("time", "<f8"),
])
PAYLOAD_DTYPE = np.dtype("<f8")

_DOMAIN_TAGS = {Domain.TORUS: 0, Domain.BALL: 1}
_BOUNDARY_TAGS = {None: 0, BoundaryCondition.SLIP: 1, BoundaryCondition.NO_SLIP: 2}


def _lookup(table, tag, what):
    for key, value in table.items():
        if value == tag:
            return key
    raise InvalidConfig(f"unknown {what} tag {tag} in snapshot header")


def encode_snapshot(f):
    """Bytes of the snapshot of ``f``."""
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = MAGIC
    header["version"] = FORMAT_VERSION
    header["domain"] = _DOMAIN_TAGS[f.domain]
    header["boundary"] = _BOUNDARY_TAGS[f.boundary]
    header["n"] = f.N
    header["time"] = math.nan if f.time_stamp is None else f.time_stamp
    payload = np.ascontiguousarray(f.values, dtype=PAYLOAD_DTYPE)
    return header.tobytes() + payload.tobytes()


def decode_snapshot(data):
    """SampledField from snapshot bytes.

    Raises:
        InvalidConfig: on a bad magic, an unsupported version or a payload of the wrong size
    """
    if len(data) < HEADER_DTYPE.itemsize:
        raise InvalidConfig(f"snapshot of {len(data)} bytes is shorter than its header")
    header = np.frombuffer(data, dtype=HEADER_DTYPE, count=1)[0]
    if header["magic"] != MAGIC:
        raise InvalidConfig(f"bad snapshot magic {header['magic']!r}")
    if header["version"] != FORMAT_VERSION:
        raise InvalidConfig(f"unsupported snapshot version {header['version']}")
    n = int(header["n"])
    expected = 3 * n ** 3 * PAYLOAD_DTYPE.itemsize
    payload = data[HEADER_DTYPE.itemsize:]
    if len(payload) != expected:
        raise InvalidConfig(f"snapshot payload has {len(payload)} bytes, expected {expected} for N = {n}")
    values = np.frombuffer(payload, dtype=PAYLOAD_DTYPE).reshape(3, n, n, n)
    time = float(header["time"])
    return SampledField(
        _lookup(_DOMAIN_TAGS, int(header["domain"]), "domain"),
        values,
        None if math.isnan(time) else time,
        _lookup(_BOUNDARY_TAGS, int(header["boundary"]), "boundary"),
    )


def write_snapshot(f, path, logger=logger):
    """Write ``f`` to ``path``, creating the parent directory if needed."""
    if not ensure_directory(os.path.dirname(path), logger):
        raise InvalidConfig(f"cannot create the directory for {path}")
    with open(path, "wb") as handle:
        handle.write(encode_snapshot(f))
    logger.info(f"Wrote {f.domain.value} snapshot N={f.N} to {path}")
    return path


def read_snapshot(path):
    with open(path, "rb") as handle:
        return decode_snapshot(handle.read())


def field_summary_rows(f, lambda_=None):
    """(quantity, value) rows: norms, divergence and, when given, identity residuals."""
    rows = [
        ("domain", f.domain.value),
        ("N", f.N),
        ("time", "" if f.time_stamp is None else f.time_stamp),
        ("l2_norm", lq_norm(f, 2)),
        ("linf_norm", lq_norm(f, "inf")),
        ("gradient_l2_norm", gradient_lq_norm(f, 2)),
        ("divergence_max", float(np.max(np.abs(divergence(f))))),
    ]
    if lambda_ is not None and rows[3][1] > 0:
        rows.append(("beltrami_residual", beltrami_residual(f, lambda_)))
    if f.domain is Domain.TORUS:
        rows.append(("lamb_residual", lamb_residual(f)))
        rows.append(("helicity_density_residual", helicity_density_residual(f)))
    return rows
