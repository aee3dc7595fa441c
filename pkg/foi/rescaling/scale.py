"""
Min-max rescaling onto the common 1-7 scale.

The worst observed value of an indicator becomes 1, the best becomes 7 and
everything else is placed linearly in between. Min and max are taken over
the countries of the panel being rescaled, so the scale is relative to the
analysed country set of one epoch.
"""
import logging

import attr
import numpy as np

from core.exceptions import EmptyColumnError
from indicator_store.types import IndicatorPanel, LOWER_IS_BETTER

logger = logging.getLogger(__name__)

SCALE_MIN = 1.0
SCALE_MAX = 7.0
# all-equal columns carry no ranking information
DEGENERATE_VALUE = (SCALE_MIN + SCALE_MAX) / 2


@attr.s(frozen=True, auto_attribs=True, eq=False)
class RescaledPanel(IndicatorPanel):
    """Same shape as the source panel; every present cell lies in [1, 7]."""


def min_max_rescale(values, direction):
    column = np.asarray(values, dtype=float)
    present = ~np.isnan(column)
    if not present.any():
        raise EmptyColumnError()

    low = column[present].min()
    high = column[present].max()
    rescaled = np.full(column.shape, np.nan)
    if high == low:
        rescaled[present] = DEGENERATE_VALUE
        return rescaled

    span = high - low
    if direction == LOWER_IS_BETTER:
        scaled = SCALE_MIN + (SCALE_MAX - SCALE_MIN) * (high - column[present]) / span
    else:
        scaled = SCALE_MIN + (SCALE_MAX - SCALE_MIN) * (column[present] - low) / span
    # endpoints are exact; clip only rounding drift in between
    rescaled[present] = np.clip(scaled, SCALE_MIN, SCALE_MAX)
    return rescaled


def rescale_panel(panel, manifest):
    values = np.empty(panel.shape)
    for j, indicator in enumerate(panel.indicators):
        spec = manifest.spec(indicator)
        try:
            values[:, j] = min_max_rescale(panel.values[:, j], spec.direction)
        except EmptyColumnError:
            raise EmptyColumnError(indicator)
        if np.nanmin(panel.values[:, j]) == np.nanmax(panel.values[:, j]):
            logger.warning('indicator "%s" is constant across the panel; mapped to %.1f', indicator, DEGENERATE_VALUE)
    return RescaledPanel(epoch=panel.epoch, countries=panel.countries, indicators=panel.indicators, values=values)
