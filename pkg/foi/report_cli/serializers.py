from rest_framework import serializers

from core.utils import to_optional


class MismatchSerializer(serializers.Serializer):
    country = serializers.CharField()
    computed = serializers.IntegerField()
    reference = serializers.IntegerField()
    borderline = serializers.BooleanField()


class VerifyReportSerializer(serializers.Serializer):
    epoch = serializers.IntegerField()
    threshold = serializers.FloatField()
    epsilon = serializers.FloatField()
    total = serializers.IntegerField()
    matches = serializers.IntegerField()
    mismatches = MismatchSerializer(many=True)
    hard = serializers.ListField(child=serializers.CharField())
    borderline = serializers.ListField(child=serializers.CharField())


class FactorProfileSerializer(serializers.Serializer):
    epoch = serializers.IntegerField()
    factors = serializers.ListField(child=serializers.CharField())
    names = serializers.DictField(child=serializers.CharField())
    clusters = serializers.SerializerMethodField()

    def get_clusters(self, obj):
        return [
            {
                'cluster_id': cluster_id,
                'label': obj.label(cluster_id),
                'size': obj.sizes[i],
                'means': {factor: to_optional(obj.means[i, j]) for j, factor in enumerate(obj.factors)},
                'counts': {factor: int(obj.counts[i, j]) for j, factor in enumerate(obj.factors)},
            }
            for i, cluster_id in enumerate(obj.clusters)
        ]
