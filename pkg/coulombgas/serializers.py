from django.conf import settings
from rest_framework import serializers

from utils.serializers import StrictSerializer
from .models import MAX_SIDE, MIN_SIDE, LatticeSpec


class CoulombGasSerializer(StrictSerializer):
    side = serializers.IntegerField(min_value=MIN_SIDE, max_value=MAX_SIDE)
    coupling = serializers.FloatField()
    fugacity = serializers.FloatField(min_value=0.0)
    chains = serializers.IntegerField(min_value=1, required=False, default=4)
    max_pairs = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    exact = serializers.BooleanField(required=False, default=False)

    def validate_coupling(self, value):
        if value <= 0:
            raise serializers.ValidationError("Coupling K must be > 0.")
        return value

    def validate(self, attrs):
        if not attrs['exact']:
            return attrs
        rs = settings.RESILIENCE
        if attrs['max_pairs'] is None:
            attrs['max_pairs'] = rs['MAX_ENUM_PAIRS']
        errors = {}
        if attrs['side'] > rs['MAX_ENUM_SIDE']:
            errors['side'] = [f"exact enumeration needs side <= {rs['MAX_ENUM_SIDE']}."]
        if attrs['max_pairs'] > rs['MAX_ENUM_PAIRS']:
            errors['max_pairs'] = [f"exact enumeration needs max_pairs <= {rs['MAX_ENUM_PAIRS']}."]
        if errors:
            raise serializers.ValidationError(errors)
        return attrs

    def create(self, validated_data):
        return LatticeSpec(
            side=validated_data['side'],
            coupling=validated_data['coupling'],
            fugacity=validated_data['fugacity'],
        )
