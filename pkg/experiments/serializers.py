# experiments/serializers.py
"""
The experiment config document: one section per module, each validated by
the module's own serializer before anything runs.
"""
import json

from django.conf import settings
from rest_framework import serializers

from bath.models import CHANNELS
from bath.serializers import NoiseModelSerializer
from coulombgas.serializers import CoulombGasSerializer
from hypercube.models import PulseSequence
from hypercube.serializers import GridSpecSerializer, PulseSequenceSerializer
from stabilizer.montecarlo import MIN_SAMPLES
from stabilizer.serializers import ThresholdSerializer
from utils.seeding import MAX_SEED
from utils.serializers import StrictSerializer
from .models import ExperimentConfig


def _positive(value, name):
    if value <= 0:
        raise serializers.ValidationError(f"{name} must be > 0.")
    return value


class RgSectionSerializer(StrictSerializer):
    ell_max = serializers.FloatField(required=False, default=None, allow_null=True)
    step = serializers.FloatField(required=False, default=None, allow_null=True)

    def validate(self, attrs):
        rs = settings.RESILIENCE
        attrs['ell_max'] = _positive(rs['RG_ELL_MAX'] if attrs['ell_max'] is None else attrs['ell_max'], 'ell_max')
        attrs['step'] = _positive(rs['RG_STEP'] if attrs['step'] is None else attrs['step'], 'step')
        return attrs


class KtSectionSerializer(StrictSerializer):
    x0 = serializers.FloatField()
    y0 = serializers.FloatField(min_value=0.0)
    ell_max = serializers.FloatField(required=False, default=100.0)
    step = serializers.FloatField(required=False, default=0.01)

    def validate_ell_max(self, value):
        return _positive(value, 'ell_max')

    def validate_step(self, value):
        return _positive(value, 'step')


class ScanSectionSerializer(StrictSerializer):
    sizes = serializers.ListField(
        child=serializers.IntegerField(min_value=2), required=False,
        default=[16, 32, 64, 128, 256], min_length=4,
    )
    channel = serializers.ChoiceField(choices=CHANNELS, required=False, default='x')
    tolerance = serializers.FloatField(required=False, default=0.1)
    workers = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)

    def validate_sizes(self, value):
        odd = [L for L in value if L % 2]
        if odd:
            raise serializers.ValidationError(f"Sizes must be even (halving is part of the fit): {odd}")
        if len(set(value)) != len(value):
            raise serializers.ValidationError("Sizes must be distinct.")
        return sorted(value)

    def validate_tolerance(self, value):
        return _positive(value, 'tolerance')


class McSectionSerializer(StrictSerializer):
    samples = serializers.IntegerField(min_value=MIN_SAMPLES, required=False, default=1_000_000)
    sweeps = serializers.IntegerField(min_value=1, required=False, default=10_000)
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED, required=False, allow_null=True, default=None)


class OutputSectionSerializer(StrictSerializer):
    path = serializers.CharField(required=False, allow_null=True, default=None)
    format = serializers.ChoiceField(choices=['csv', 'json'], required=False, allow_null=True, default=None)


# section name -> (serializer class, whether an absent section still gets defaults)
SECTIONS = {
    'noise': (NoiseModelSerializer, False),
    'grid': (GridSpecSerializer, False),
    'pulses': (PulseSequenceSerializer, True),
    'rg': (RgSectionSerializer, True),
    'kt': (KtSectionSerializer, False),
    'scan': (ScanSectionSerializer, True),
    'coulomb': (CoulombGasSerializer, False),
    'threshold': (ThresholdSerializer, True),
    'mc': (McSectionSerializer, True),
    'output': (OutputSectionSerializer, True),
}


class ExperimentConfigSerializer(StrictSerializer):
    noise = NoiseModelSerializer(required=False)
    grid = GridSpecSerializer(required=False)
    pulses = PulseSequenceSerializer(required=False)
    rg = RgSectionSerializer(required=False)
    kt = KtSectionSerializer(required=False)
    scan = ScanSectionSerializer(required=False)
    coulomb = CoulombGasSerializer(required=False)
    threshold = ThresholdSerializer(required=False)
    mc = McSectionSerializer(required=False)
    output = OutputSectionSerializer(required=False)

    def validate(self, attrs):
        # sections left out still get their defaults
        for name, (section_class, defaulted) in SECTIONS.items():
            if name not in attrs and defaulted:
                section = section_class(data={})
                section.is_valid(raise_exception=True)
                attrs[name] = section.validated_data
        if 'grid' in attrs:
            try:
                PulseSequence(**attrs['pulses']).check_cycle(attrs['grid']['delta_t'])
            except ValueError as exc:
                raise serializers.ValidationError({'pulses': {'schedule': [str(exc)]}})
        return attrs

    def create(self, validated_data):
        def build(name):
            if name not in validated_data:
                return None
            return SECTIONS[name][0]().create(validated_data[name])

        return ExperimentConfig(
            noise=build('noise'),
            grid=build('grid'),
            pulses=build('pulses'),
            lattice=build('coulomb'),
            rg=dict(validated_data['rg']),
            kt=dict(validated_data['kt']) if 'kt' in validated_data else None,
            scan=dict(validated_data['scan']),
            coulomb=dict(validated_data['coulomb']) if 'coulomb' in validated_data else None,
            threshold=dict(validated_data['threshold']),
            mc=dict(validated_data['mc']),
            output=dict(validated_data['output']),
        )


def parse_override(item):
    """'a.b=value' → (['a', 'b'], value); the value is JSON when it parses, else a string."""
    key, sep, raw = item.partition('=')
    if not sep or not key.strip():
        raise ValueError(f"override '{item}' is not of the form key=value")
    path = key.strip().split('.')
    if any(not part for part in path):
        raise ValueError(f"override key '{key}' has an empty component")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path, value


def apply_overrides(data, items):
    """Set dotted keys in ``data`` in place, creating sections as needed."""
    for item in items:
        path, value = parse_override(item)
        node = data
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ValueError(f"override '{item}': '{part}' is not a section")
            node = child
        node[path[-1]] = value
    return data


def load_config(data):
    serializer = ExperimentConfigSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save()
