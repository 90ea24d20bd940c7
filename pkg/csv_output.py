"""
CSV Output Module

Deterministic CSV rendering of verdicts, traces and experiment tables.
Rationals print as "a/b", "a" or "inf" and re-parse to the identical value.
"""

import csv
import io
from enum import Enum
from fractions import Fraction

import numpy as np

from config import VERDICT_COLUMNS
from criteria import Verdict, VerdictLevel
from exponents import BochnerSpec, ExtRational, format_rational


def format_cell(value):
    """Text of one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, ExtRational):
        return format_rational(value)
    if isinstance(value, Fraction):
        return format_rational(ExtRational(value))
    if isinstance(value, VerdictLevel):
        return value.label
    if isinstance(value, Verdict):
        return value.label
    if isinstance(value, BochnerSpec):
        return str(value)
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def emit_csv(header, rows):
    """Render a header and rows as CSV text with LF line endings.

    Args:
        header (sequence): Column names
        rows (iterable): Row tuples, one cell per column

    Returns:
        str: CSV text; an empty table yields the header line only
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} cells, header has {len(header)}")
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue()


def verdict_row(command, verdict):
    """Row of VERDICT_COLUMNS for a verdict."""
    witness = verdict.witness
    return (
        command,
        verdict.label,
        verdict.citation,
        witness.time_exp if witness is not None else None,
        witness.space_exp if witness is not None else None,
        verdict.note,
    )


def emit_verdict(command, verdict):
    return emit_csv(VERDICT_COLUMNS, [verdict_row(command, verdict)])


def join_tables(*tables):
    """Concatenate CSV tables separated by a blank line."""
    return "\n".join(tables)
