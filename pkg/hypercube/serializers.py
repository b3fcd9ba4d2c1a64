# hypercube/serializers.py
from rest_framework import serializers

from utils.serializers import StrictSerializer
from .models import GridSpec, PulseSequence


class GridSpecSerializer(StrictSerializer):
    delta_t = serializers.FloatField()
    n_cycles = serializers.IntegerField(min_value=1, required=False, default=1)
    n_qubits = serializers.IntegerField(min_value=1, required=False, default=1)
    comp_dim = serializers.IntegerField(min_value=1, required=False, default=1)

    def validate_delta_t(self, value):
        if value <= 0:
            raise serializers.ValidationError("Cycle time must be > 0.")
        return value

    def validate(self, attrs):
        try:
            GridSpec(**attrs)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return GridSpec(**validated_data)


class PulseSequenceSerializer(StrictSerializer):
    n = serializers.IntegerField(source='n_pulses', min_value=0, required=False, default=0)
    schedule = serializers.ListField(
        child=serializers.FloatField(), required=False, allow_null=True, default=None,
    )

    def validate(self, attrs):
        try:
            PulseSequence(**attrs)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return PulseSequence(**validated_data)
