# bath/serializers.py
from rest_framework import serializers

from utils.serializers import ChannelMapField, StrictSerializer, check_channel_keys
from .models import BathSpec, NoiseModel


class CoefficientTableField(serializers.DictField):
    """``beta_g`` / ``beta_h``: channel -> channel -> coefficient."""

    def __init__(self, **kwargs):
        kwargs.setdefault('child', ChannelMapField())
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        # outer keys are channels too
        check_channel_keys(data)
        return super().to_internal_value(data)


class NoiseModelSerializer(StrictSerializer):
    """
    The ``noise`` config section. Bath keys (z, v, cutoff, delta) sit next to
    the couplings, the way the section is written by hand.
    """
    z = serializers.FloatField(source='bath.z', min_value=0.0)
    v = serializers.FloatField(source='bath.v', required=False, default=1.0)
    cutoff = serializers.FloatField(source='bath.cutoff', required=False, default=1.0)
    delta = ChannelMapField(source='bath.delta', allow_empty=False)
    beta_g = CoefficientTableField(required=False, default=dict)
    beta_h = CoefficientTableField(required=False, default=dict)

    def get_fields(self):
        fields = super().get_fields()
        # 'lambda' is a keyword, so the field is attached here
        fields['lambda'] = ChannelMapField(source='couplings', required=False, default=dict)
        return fields

    def validate_delta(self, value):
        negative = [channel for channel, dim in value.items() if dim < 0]
        if negative:
            raise serializers.ValidationError(f"Scaling dimensions must be >= 0 (channels: {', '.join(negative)})")
        return value

    def validate(self, attrs):
        try:
            self._build(attrs)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def _build(self, attrs):
        bath = BathSpec(**attrs['bath'])
        return NoiseModel(
            bath=bath,
            couplings=dict(attrs.get('couplings', {})),
            beta_g={row: dict(cols) for row, cols in attrs.get('beta_g', {}).items()},
            beta_h={row: dict(cols) for row, cols in attrs.get('beta_h', {}).items()},
        )

    def create(self, validated_data):
        return self._build(validated_data)


def load_noise_model(data):
    serializer = NoiseModelSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def dump_noise_model(model):
    return dict(NoiseModelSerializer(model).data)
