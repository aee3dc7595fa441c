from rest_framework import serializers

from core.utils import to_optional


class CountryScoreSerializer(serializers.Serializer):
    country = serializers.CharField()
    f_index = serializers.SerializerMethodField()
    f_rank = serializers.IntegerField(allow_null=True)
    o_index = serializers.SerializerMethodField()
    o_rank = serializers.IntegerField(allow_null=True)
    i_index = serializers.SerializerMethodField()
    i_rank = serializers.IntegerField(allow_null=True)

    def get_f_index(self, obj):
        return to_optional(obj.f_index)

    def get_o_index(self, obj):
        return to_optional(obj.o_index)

    def get_i_index(self, obj):
        return to_optional(obj.i_index)


class CountryScoreInputSerializer(serializers.Serializer):
    """Validates exported rows on the way back in."""
    country = serializers.CharField(max_length=8)
    f_index = serializers.FloatField(allow_null=True, min_value=1.0, max_value=7.0)
    f_rank = serializers.IntegerField(allow_null=True, required=False, min_value=1)
    o_index = serializers.FloatField(allow_null=True, min_value=1.0, max_value=7.0)
    o_rank = serializers.IntegerField(allow_null=True, required=False, min_value=1)
    i_index = serializers.FloatField(allow_null=True, min_value=1.0, max_value=7.0)
    i_rank = serializers.IntegerField(allow_null=True, required=False, min_value=1)


class FoiScoresSerializer(serializers.Serializer):
    epoch = serializers.IntegerField(allow_null=True)
    rows = CountryScoreSerializer(many=True)


class FoiScoresInputSerializer(serializers.Serializer):
    epoch = serializers.IntegerField(allow_null=True)
    rows = CountryScoreInputSerializer(many=True)
