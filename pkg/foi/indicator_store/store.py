"""
Manifest and panel ingestion.

Panels are UTF-8 CSV files with a ``country,<indicator ids...>`` header,
``.`` as decimal separator and empty cells for missing values.
"""
import json
import logging
import math
import re
from collections import OrderedDict
from io import StringIO

import numpy as np
import pandas as pd
from django.conf import settings

from core.exceptions import DuplicateCountryError, InputError, ManifestError, ParseError, SchemaError
from .serializers import IndicatorSpecSerializer
from .types import IndicatorManifest, IndicatorPanel, IndicatorSpec, ValidationReport

logger = logging.getLogger(__name__)

COUNTRY_COLUMN = 'country'
ISO_ALPHA3 = re.compile(r'^[A-Z]{3}$')


def manifest_from_data(data):
    if not isinstance(data, list):
        raise ManifestError('manifest must be a JSON array of indicator specs')
    serializer = IndicatorSpecSerializer(data=data, many=True)
    if not serializer.is_valid():
        problems = []
        for position, errors in enumerate(serializer.errors):
            for field, messages in errors.items():
                problems.append('spec {} field "{}": {}'.format(position, field, ' '.join(map(str, messages))))
        raise ManifestError('; '.join(problems))
    return IndicatorManifest(IndicatorSpec(**item) for item in serializer.validated_data)


def load_manifest(manifest_json):
    try:
        with open(manifest_json, encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise InputError('manifest file "{}" not found'.format(manifest_json), module='indicator_store')
    except ValueError as e:
        raise ManifestError('manifest "{}" is not valid JSON: {}'.format(manifest_json, e))
    manifest = manifest_from_data(data)
    logger.debug('loaded manifest %s with %d specs', manifest_json, len(manifest.specs))
    return manifest


def default_manifest():
    return load_manifest(settings.FOI['DEFAULT_MANIFEST'])


def _parse_cell(raw, row, column):
    text = raw.strip()
    if text == '':
        return math.nan
    try:
        value = float(text)
    except ValueError:
        raise ParseError(row, column, raw)
    if not math.isfinite(value):
        raise ParseError(row, column, raw)
    return value


def _decode(panel_csv):
    try:
        with open(panel_csv, 'rb') as f:
            payload = f.read()
    except FileNotFoundError:
        raise InputError('panel file "{}" not found'.format(panel_csv), module='indicator_store')
    try:
        # utf-8-sig drops the byte-order mark spreadsheet exports put in front of the header
        return payload.decode('utf-8-sig')
    except UnicodeDecodeError as e:
        line = payload[:e.start].count(b"\n") + 1
        raw = payload[e.start:e.end]
        raise ParseError(line, None, raw,
                         'panel file "{}" is not UTF-8: byte {!r} at row {}'.format(panel_csv, raw, line))


def read_grid_csv(panel_csv):
    """
    CSV -> (countries, header columns, float grid). Rows are numbered as file lines (header = 1).
    Shared with the factor-analysis input, which uses the same schema.
    """
    text = _decode(panel_csv)
    try:
        # header=None keeps duplicate header names as written instead of mangling them
        frame = pd.read_csv(StringIO(text), header=None, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise SchemaError(COUNTRY_COLUMN, 'panel file "{}" is empty'.format(panel_csv))
    except pd.errors.ParserError as e:
        match = re.search(r'line (\d+), saw (\d+)', str(e))
        if match is None:
            raise ParseError(None, None, None, 'cannot parse panel file "{}": {}'.format(panel_csv, e))
        line = int(match.group(1))
        raise ParseError(line, None, None, 'row {} has {} cells but the header has fewer'.format(
            line, match.group(2)))

    header = [str(column).strip() for column in frame.iloc[0]]
    if header[0] != COUNTRY_COLUMN:
        raise SchemaError(header[0], 'first column must be "{}"'.format(COUNTRY_COLUMN))
    columns = header[1:]
    for column in columns:
        if columns.count(column) > 1:
            raise SchemaError(column, 'duplicate column "{}"'.format(column))
    frame = frame.iloc[1:]

    # short rows come back padded with NaN; empty cells are '' under keep_default_na=False
    absent = frame.isna().to_numpy()
    if absent.any():
        i, j = (int(index) for index in np.argwhere(absent)[0])
        raise ParseError(i + 2, header[j], None, 'row {} ends before column "{}"'.format(i + 2, header[j]))

    countries = []
    grid = np.empty((len(frame), len(columns)), dtype=float)
    for i, record in enumerate(frame.itertuples(index=False, name=None)):
        country = record[0].strip()
        if country in countries:
            raise DuplicateCountryError(country)
        countries.append(country)
        for j, column in enumerate(columns):
            grid[i, j] = _parse_cell(record[j + 1], i + 2, column)
    return countries, columns, grid


def load_panel(panel_csv, manifest, epoch=None):
    countries, columns, grid = read_grid_csv(panel_csv)
    known = set(manifest.columns)
    for column in columns:
        if column not in known:
            raise SchemaError(column)

    # column order follows the manifest; manifest columns absent from the file stay MISSING
    values = np.full((len(countries), len(manifest.columns)), np.nan)
    for j, indicator in enumerate(manifest.columns):
        if indicator in columns:
            values[:, j] = grid[:, columns.index(indicator)]
        else:
            logger.warning('indicator "%s" not present in %s; loaded as missing', indicator, panel_csv)

    panel = IndicatorPanel(epoch=epoch, countries=countries, indicators=manifest.columns, values=values)
    logger.info('loaded panel %s: %d countries x %d indicators (epoch %s)',
                panel_csv, len(countries), len(manifest.columns), epoch)
    return panel


def panel_frame(panel):
    frame = pd.DataFrame(np.array(panel.values), columns=list(panel.indicators))
    frame.insert(0, COUNTRY_COLUMN, list(panel.countries))
    return frame


def write_panel(panel, path):
    panel_frame(panel).to_csv(path, index=False, na_rep='')


def validate_panel(panel):
    missing = panel.missing
    indicator_missing = OrderedDict(
        (indicator, int(missing[:, j].sum())) for j, indicator in enumerate(panel.indicators))
    country_missing = OrderedDict(
        (country, int(missing[i, :].sum())) for i, country in enumerate(panel.countries))

    total = missing.size
    coverage = 1.0 - (float(missing.sum()) / total) if total else 1.0

    warnings = []
    if panel.countries:
        for indicator, count in indicator_missing.items():
            if count == len(panel.countries):
                warnings.append('indicator "{}" is entirely missing'.format(indicator))
    if panel.indicators:
        for country, count in country_missing.items():
            if count == len(panel.indicators):
                warnings.append('country "{}" has no values'.format(country))
    for country in panel.countries:
        if not ISO_ALPHA3.match(country):
            warnings.append('country code "{}" is not ISO 3166-1 alpha-3'.format(country))

    for warning in warnings:
        logger.warning(warning)
    return ValidationReport(
        indicator_missing=indicator_missing,
        country_missing=country_missing,
        coverage=coverage,
        warnings=warnings,
    )
