"""
Error hierarchy shared by every FOI module.

Each error knows which module raised it and which process exit code the
command line should map it to (1 = input error, 2 = numerical failure).
"""


class FoiError(Exception):
    default_detail = 'FOI pipeline error.'
    default_code = 'error'
    module = 'foi'
    exit_code = 1

    def __init__(self, detail=None, module=None):
        self.detail = detail if detail is not None else self.default_detail
        if module is not None:
            self.module = module
        super(FoiError, self).__init__(self.detail)

    def __str__(self):
        return '{}: {}'.format(self.module, self.detail)


class InputError(FoiError):
    default_detail = 'Invalid input.'
    default_code = 'input_error'
    exit_code = 1


class NumericalError(FoiError):
    default_detail = 'Numerical failure.'
    default_code = 'numerical_error'
    exit_code = 2


# indicator_store
class ManifestError(InputError):
    default_detail = 'Invalid indicator manifest.'
    default_code = 'manifest_error'
    module = 'indicator_store'


class SchemaError(InputError):
    default_detail = 'Panel column is not part of the manifest.'
    default_code = 'schema_error'
    module = 'indicator_store'

    def __init__(self, column, detail=None):
        self.column = column
        super(SchemaError, self).__init__(
            detail or 'unknown indicator column "{}"'.format(column))


class DuplicateCountryError(InputError):
    default_code = 'duplicate_country'
    module = 'indicator_store'

    def __init__(self, country, detail=None):
        self.country = country
        super(DuplicateCountryError, self).__init__(
            detail or 'duplicate country row "{}"'.format(country))


class ParseError(InputError):
    default_code = 'parse_error'
    module = 'indicator_store'

    def __init__(self, row, column, value, detail=None):
        self.row = row
        self.column = column
        self.value = value
        super(ParseError, self).__init__(
            detail or 'non-numeric cell {!r} at row {}, column "{}"'.format(value, row, column))


# rescaling
class EmptyColumnError(InputError):
    default_code = 'empty_column'
    module = 'rescaling'

    def __init__(self, indicator=None):
        self.indicator = indicator
        if indicator is None:
            detail = 'every value of the column is missing'
        else:
            detail = 'every value of indicator "{}" is missing'.format(indicator)
        super(EmptyColumnError, self).__init__(detail)


# pillar_index
class MissingPillarError(InputError):
    default_code = 'missing_pillar'
    module = 'pillar_index'

    def __init__(self, country, pillar):
        self.country = country
        self.pillar = pillar
        super(MissingPillarError, self).__init__(
            'country "{}" has no available component in pillar {}'.format(country, pillar))


# classifier
class CountryMismatchError(InputError):
    default_code = 'country_mismatch'
    module = 'classifier'

    def __init__(self, difference):
        self.difference = sorted(difference)
        super(CountryMismatchError, self).__init__(
            'epochs cover different countries: {}'.format(', '.join(self.difference)))


# report_cli
class FixtureError(InputError):
    default_detail = 'Reference fixture is corrupt.'
    default_code = 'fixture_error'
    module = 'report_cli'


class ExportError(InputError):
    default_detail = 'Cannot write the report.'
    default_code = 'export_error'
    module = 'report_cli'


# numerical
class DomainError(NumericalError):
    default_detail = 'Argument outside the valid domain.'
    default_code = 'domain_error'


class ZeroVarianceError(NumericalError):
    default_code = 'zero_variance'
    module = 'factor_analysis'

    def __init__(self, variable):
        self.variable = variable
        super(ZeroVarianceError, self).__init__('variable "{}" has zero variance'.format(variable))


class InsufficientPairsError(NumericalError):
    default_code = 'insufficient_pairs'
    module = 'factor_analysis'

    def __init__(self, first, second, count):
        self.pair = (first, second)
        self.count = count
        super(InsufficientPairsError, self).__init__(
            'only {} complete observations for pair ("{}", "{}"); at least 3 required'.format(count, first, second))


class NotPositiveDefiniteError(NumericalError):
    default_detail = 'correlation matrix is not positive definite'
    default_code = 'not_positive_definite'
    module = 'factor_analysis'


class SingularMatrixError(NumericalError):
    default_detail = 'correlation matrix is singular'
    default_code = 'singular_matrix'
    module = 'factor_analysis'


class UndefinedStatisticError(NumericalError):
    default_detail = 'statistic is undefined (0/0)'
    default_code = 'undefined_statistic'
    module = 'factor_analysis'
