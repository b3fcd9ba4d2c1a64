from django.conf import settings
from rest_framework import serializers

from utils.serializers import StrictSerializer
from .montecarlo import MIN_SAMPLES


class ThresholdSerializer(StrictSerializer):
    p_values = serializers.ListField(
        child=serializers.FloatField(min_value=0.0, max_value=0.75),
        required=False, default=[1e-3, 3e-3, 1e-2], min_length=1,
    )
    samples = serializers.IntegerField(min_value=MIN_SAMPLES, required=False, default=1_000_000)
    chunk_size = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    target = serializers.FloatField(required=False, default=1e-15)

    def validate_p_values(self, value):
        if any(p <= 0 or p >= 0.75 for p in value):
            raise serializers.ValidationError("Each p must lie in (0, 0.75).")
        return value

    def validate_target(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("Target logical rate must lie in (0, 1).")
        return value

    def validate(self, attrs):
        if attrs['chunk_size'] is None:
            attrs['chunk_size'] = settings.RESILIENCE['MC_CHUNK']
        return attrs
