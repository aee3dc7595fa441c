from rest_framework import serializers

from indicator_store.types import PILLARS
from .types import cluster_choices


class ClusterAssignmentSerializer(serializers.Serializer):
    country = serializers.CharField()
    cluster_id = serializers.ChoiceField(choices=cluster_choices)
    label = serializers.CharField()
    description = serializers.CharField(source='cluster.description')
    levels = serializers.SerializerMethodField()
    borderline = serializers.SerializerMethodField()
    middle_income_trap = serializers.BooleanField(source='in_middle_income_trap')

    def get_levels(self, obj):
        return obj.pattern

    def get_borderline(self, obj):
        # pillar order, not set order
        return [pillar for pillar in PILLARS if pillar in obj.borderline]


class TransitionSerializer(serializers.Serializer):
    country = serializers.CharField()
    from_cluster = serializers.IntegerField()
    to_cluster = serializers.IntegerField()
    delta_h = serializers.IntegerField()


class ShiftReportSerializer(serializers.Serializer):
    epochs = serializers.ListField(child=serializers.IntegerField(allow_null=True))
    transitions = TransitionSerializer(many=True)
    matrix = serializers.SerializerMethodField()
    upward = TransitionSerializer(many=True)
    downward = TransitionSerializer(many=True)
    lateral = TransitionSerializer(many=True)
    stayers = serializers.SerializerMethodField()
    emerged_clusters = serializers.ListField(child=serializers.IntegerField())
    vanished_clusters = serializers.ListField(child=serializers.IntegerField())
    trap_entries = serializers.ListField(child=serializers.CharField())
    trap_exits = serializers.ListField(child=serializers.CharField())

    def get_matrix(self, obj):
        return obj.matrix.tolist()

    def get_stayers(self, obj):
        return [transition.country for transition in obj.stayers]
