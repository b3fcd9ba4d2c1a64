# utils/serializers.py
"""Serializer building blocks shared by the config sections."""
from collections.abc import Mapping

from rest_framework import serializers

from bath.models import CHANNELS


class StrictSerializer(serializers.Serializer):
    """Rejects keys that are not declared fields instead of dropping them."""

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ['Unknown key.'] for key in unknown})
        return super().to_internal_value(data)


class ChannelMapField(serializers.DictField):
    """Mapping keyed by Pauli channel (x, y, z)."""

    def __init__(self, **kwargs):
        kwargs.setdefault('child', serializers.FloatField())
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        check_channel_keys(data)
        return super().to_internal_value(data)


def check_channel_keys(data):
    if isinstance(data, Mapping):
        unknown = sorted(key for key in data if key not in CHANNELS)
        if unknown:
            raise serializers.ValidationError({key: ['Unknown channel; expected one of x, y, z.'] for key in unknown})


def flatten_errors(errors, prefix=''):
    """Turn nested serializer errors into ``dotted.key: message`` lines."""
    lines = []
    if isinstance(errors, Mapping):
        for key, value in errors.items():
            path = prefix if key == 'non_field_errors' else (f"{prefix}.{key}" if prefix else str(key))
            lines.extend(flatten_errors(value, path))
    elif isinstance(errors, list):
        for value in errors:
            lines.extend(flatten_errors(value, prefix))
    else:
        lines.append(f"{prefix or 'config'}: {errors}")
    return lines


def field_paths(serializer, prefix=''):
    """Dotted config keys accepted by ``serializer`` (used in --help)."""
    paths = []
    for name, field in serializer.fields.items():
        path = f"{prefix}.{name}" if prefix else name
        if isinstance(field, serializers.Serializer):
            paths.extend(field_paths(field, path))
        elif isinstance(field, ChannelMapField):
            paths.append(f"{path}.{{x,y,z}}")
        elif isinstance(field, serializers.DictField) and isinstance(field.child, ChannelMapField):
            paths.append(f"{path}.{{x,y,z}}.{{x,y,z}}")
        else:
            paths.append(path)
    return paths
