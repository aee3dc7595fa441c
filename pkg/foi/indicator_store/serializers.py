from rest_framework import serializers

from core.utils import to_optional
from .types import DIRECTIONS, PILLARS


class IndicatorSpecSerializer(serializers.Serializer):
    id = serializers.RegexField(r'^[A-Za-z0-9_.-]+$', max_length=64)
    name = serializers.CharField(max_length=200)
    pillar = serializers.ChoiceField(choices=PILLARS)
    direction = serializers.ChoiceField(choices=DIRECTIONS)
    source = serializers.CharField(max_length=200, allow_blank=True)
    component = serializers.RegexField(r'^[A-Za-z0-9_.-]+$', max_length=64, required=False, allow_null=True)
    note = serializers.CharField(max_length=500, required=False, allow_blank=True)

    def to_representation(self, instance):
        data = super(IndicatorSpecSerializer, self).to_representation(instance)
        if not instance.component:
            data.pop('component')
        if not instance.note:
            data.pop('note')
        return data


class ValidationReportSerializer(serializers.Serializer):
    coverage = serializers.FloatField()
    missing_cells = serializers.IntegerField()
    indicator_missing = serializers.DictField(child=serializers.IntegerField())
    country_missing = serializers.DictField(child=serializers.IntegerField())
    warnings = serializers.ListField(child=serializers.CharField())


class PanelSerializer(serializers.Serializer):
    """Grid as {country: {indicator: value-or-null}}."""
    epoch = serializers.IntegerField(allow_null=True)
    countries = serializers.ListField(child=serializers.CharField())
    indicators = serializers.ListField(child=serializers.CharField())
    values = serializers.SerializerMethodField()

    def get_values(self, obj):
        return {
            country: {indicator: to_optional(obj.values[i, j]) for j, indicator in enumerate(obj.indicators)}
            for i, country in enumerate(obj.countries)
        }
