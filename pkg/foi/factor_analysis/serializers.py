from rest_framework import serializers

from core.utils import to_optional


class FactorGroupsSerializer(serializers.Serializer):
    """``{"groups": {name: [variable ids]}}``; the file itself is the bare mapping."""
    groups = serializers.DictField(
        child=serializers.ListField(child=serializers.CharField(max_length=64), min_length=1),
        allow_empty=False,
    )


class BartlettResultSerializer(serializers.Serializer):
    chi_square = serializers.FloatField()
    df = serializers.IntegerField()
    p_value = serializers.FloatField()
    n = serializers.IntegerField()


class FactorModelSerializer(serializers.Serializer):
    name = serializers.CharField(allow_null=True)
    variables = serializers.ListField(child=serializers.CharField())
    factors = serializers.SerializerMethodField()
    eigenvalues = serializers.SerializerMethodField()
    kmo = serializers.FloatField()
    msa = serializers.SerializerMethodField()
    bartlett = BartlettResultSerializer()
    variance_explained = serializers.FloatField()
    factor_variance = serializers.SerializerMethodField()
    communalities = serializers.SerializerMethodField()
    unrotated = serializers.SerializerMethodField()
    rotated = serializers.SerializerMethodField()
    rotation = serializers.SerializerMethodField()
    converged = serializers.BooleanField()
    criterion_history = serializers.ListField(child=serializers.FloatField())
    eigenvalue_ties = serializers.BooleanField()
    kaiser_normalized = serializers.BooleanField()
    scores = serializers.SerializerMethodField()

    def _by_variable(self, obj, matrix):
        return {variable: [float(value) for value in matrix[i]] for i, variable in enumerate(obj.variables)}

    def get_factors(self, obj):
        return obj.factor_names()

    def get_eigenvalues(self, obj):
        return [float(value) for value in obj.eigenvalues]

    def get_msa(self, obj):
        return {variable: to_optional(value) for variable, value in zip(obj.variables, obj.msa)}

    def get_factor_variance(self, obj):
        return [float(value) for value in obj.factor_variance]

    def get_communalities(self, obj):
        return {variable: float(value) for variable, value in zip(obj.variables, obj.communalities)}

    def get_unrotated(self, obj):
        return self._by_variable(obj, obj.unrotated)

    def get_rotated(self, obj):
        return self._by_variable(obj, obj.rotated)

    def get_rotation(self, obj):
        return [[float(value) for value in row] for row in obj.rotation]

    def get_scores(self, obj):
        return {country: [to_optional(value) for value in obj.scores[i]] for i, country in enumerate(obj.countries)}
