import math
from decimal import Decimal, ROUND_HALF_UP

import numpy as np
import pandas as pd


MISSING = float('nan')


def is_missing(value):
    return value is None or (isinstance(value, float) and math.isnan(value))


def to_optional(value):
    """NaN/None -> None, anything else -> float. Used at serialization boundaries."""
    if is_missing(value):
        return None
    return float(value)


def from_optional(value):
    if value is None:
        return MISSING
    return float(value)


def round_half_up(value, places=1):
    """
    Display rounding only: 3.95 -> 4.0, 4.05 -> 4.1.
    Rounds the shortest decimal repr of the float, so what is printed is what gets rounded.
    """
    quantum = Decimal(1).scaleb(-places)
    return Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)


def format_index(value, rank=None, places=1):
    if is_missing(value):
        return '-'
    text = str(round_half_up(value, places))
    if rank is not None:
        text = '{} ({})'.format(text, rank)
    return text


def readonly(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def render_table(header, rows):
    """Plain-text table via ``DataFrame.to_string``, columns left aligned."""
    header = [str(name) for name in header]
    frame = pd.DataFrame([[str(cell) for cell in row] for row in rows], columns=header, dtype=object)
    if frame.empty:
        return '  '.join(header).rstrip() + '\n'
    widths = [max(len(name), int(frame.iloc[:, j].str.len().max())) for j, name in enumerate(header)]
    text = frame.to_string(index=False, justify='left',
                           formatters=[lambda cell, width=width: cell.ljust(width) for width in widths])
    lines = [line.rstrip() for line in text.splitlines()]
    indent = min(len(line) - len(line.lstrip()) for line in lines)
    return '\n'.join(line[indent:] for line in lines) + '\n'
