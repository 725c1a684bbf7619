"""Serializers for system files and derivation results."""
from collections import OrderedDict
from typing import Mapping

from rest_framework import serializers

from .exceptions import InputError
from .fields import (
    ComplexRationalField,
    QPVectorField,
    RationalField,
    WritableSerializerMethodField,
)
from .files import SystemFile, SystemMode
from .linear import LinearRGResult


class StrictFieldsMixin:
    """Rejects keys that are not declared fields."""

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: ["Unknown field."] for key in unknown}
                )
        return super().to_internal_value(data)


class OmitEmptyMixin:
    """Leaves absent optional blocks out of the representation."""

    def to_representation(self, instance):
        ret = super().to_representation(instance)
        return OrderedDict((key, value) for key, value in ret.items() if value is not None)


class DynamicFieldsSerializer(serializers.Serializer):
    """A Serializer that takes additional `fields` and `exclude` arguments naming the parts to write."""

    def __init__(self, *args, **kwargs):
        fields = kwargs.pop("fields", None)
        exclude = kwargs.pop("exclude", [])
        super().__init__(*args, **kwargs)
        unknown = sorted(set(fields or []).union(exclude) - set(self.fields))
        if unknown:
            raise InputError(f"Unknown result parts: {', '.join(unknown)}")
        allowed = set(self.fields if fields is None else fields) - set(exclude)
        for field_name in set(self.fields) - allowed:
            self.fields.pop(field_name)


# System files


class TermSerializer(StrictFieldsMixin, serializers.Serializer):
    component = serializers.IntegerField(min_value=0)
    coeff_re = RationalField(required=False)
    coeff_im = RationalField(required=False)
    alpha = serializers.ListField(child=serializers.IntegerField(min_value=0))
    k = serializers.ListField(child=serializers.IntegerField(), required=False)


class EntryTermSerializer(StrictFieldsMixin, serializers.Serializer):
    """c exp(i lambda(k) t) inside a matrix entry."""

    coeff_re = RationalField(required=False)
    coeff_im = RationalField(required=False)
    k = serializers.ListField(child=serializers.IntegerField(), required=False)


class LinearPartSerializer(StrictFieldsMixin, serializers.Serializer):
    nu = serializers.ListField(child=RationalField(), min_length=1)


class ExpressionListField(serializers.ListField):
    child = serializers.CharField(trim_whitespace=True)


class ChartSerializer(StrictFieldsMixin, serializers.Serializer):
    variables = ExpressionListField(min_length=1)
    f = ExpressionListField()
    g1 = ExpressionListField()
    g2 = ExpressionListField(required=False)
    chart_variables = ExpressionListField(min_length=1)
    U = ExpressionListField()
    parameters = serializers.DictField(child=serializers.FloatField(), required=False)
    delta = serializers.FloatField(min_value=0, required=False)
    samples = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=1),
        required=False,
    )
    seeds = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=1),
        required=False,
    )

    def validate(self, attrs):
        n = len(attrs["variables"])
        for key in ("f", "g1", "g2", "U"):
            if key in attrs and len(attrs[key]) != n:
                raise serializers.ValidationError({key: [f"Expected {n} expressions."]})
        k = len(attrs["chart_variables"])
        for key in ("samples", "seeds"):
            for point in attrs.get(key, []):
                if len(point) != k:
                    raise serializers.ValidationError({key: [f"Chart points need {k} coordinates."]})
        return attrs


class OscillatorSerializer(StrictFieldsMixin, serializers.Serializer):
    variables = ExpressionListField(min_length=1)
    f = ExpressionListField()
    g1 = ExpressionListField()
    parameters = serializers.DictField(child=serializers.FloatField(), required=False)
    seed = serializers.ListField(child=serializers.FloatField())
    period_guess = serializers.FloatField(min_value=0)

    def validate(self, attrs):
        n = len(attrs["variables"])
        for key in ("f", "g1", "seed"):
            if len(attrs[key]) != n:
                raise serializers.ValidationError({key: [f"Expected {n} entries."]})
        if attrs["period_guess"] <= 0:
            raise serializers.ValidationError({"period_guess": ["Must be positive."]})
        return attrs


def _order_key(key: str, errors, where: str):
    try:
        order = int(key)
    except (TypeError, ValueError):
        order = 0
    if order < 1 or str(order) != str(key):
        errors[key] = [f"{where} keys must be positive integers."]
    return order


class SystemFileSerializer(OmitEmptyMixin, StrictFieldsMixin, serializers.Serializer):
    """The on-disk description of a system, one block per mode.

    ``alpha`` lists the exponents of the state variables followed by the
    declared parameters; ``k`` has one entry per base frequency.
    """

    mode = serializers.ChoiceField(choices=[mode.value for mode in SystemMode])
    n = serializers.IntegerField(min_value=1)
    scalar_mode = serializers.ChoiceField(choices=["exact", "float"], required=False)
    base_frequencies = serializers.ListField(child=RationalField(), required=False)
    names = ExpressionListField(required=False)
    parameters = ExpressionListField(required=False)
    F = LinearPartSerializer(required=False)
    coordinates = serializers.ListField(
        child=serializers.ListField(child=ComplexRationalField()), required=False
    )
    orders = WritableSerializerMethodField(required=False)
    A = serializers.DictField(
        child=serializers.ListField(
            child=serializers.ListField(child=EntryTermSerializer(many=True))
        ),
        required=False,
    )
    chart = ChartSerializer(required=False)
    oscillator = OscillatorSerializer(required=False)

    def get_orders(self, instance):
        orders = instance.get("orders") if isinstance(instance, Mapping) else None
        if orders is None:
            return None
        terms = TermSerializer(many=True)
        return OrderedDict(
            (str(order), terms.to_representation(orders[order])) for order in sorted(orders)
        )

    def save_orders(self, data):
        if not isinstance(data, Mapping):
            raise serializers.ValidationError("Expected a map from order to a list of terms.")
        orders, errors = {}, {}
        for key, terms in data.items():
            order = _order_key(key, errors, "orders")
            serializer = TermSerializer(data=terms, many=True)
            if not serializer.is_valid():
                errors[key] = serializer.errors
            elif order >= 1:
                orders[order] = serializer.validated_data
        if errors:
            raise serializers.ValidationError(errors)
        return orders

    def validate_A(self, value):
        errors = {}
        for key in value:
            _order_key(key, errors, "A")
        if errors:
            raise serializers.ValidationError(errors)
        return value

    def validate(self, attrs):
        mode = SystemMode(attrs["mode"])
        required = {
            SystemMode.PERIODIC: ["orders"],
            SystemMode.AUTONOMOUS: ["orders", "F"],
            SystemMode.LINEAR: ["A"],
            SystemMode.CRITICAL_MANIFOLD: ["chart"],
            SystemMode.PHASE: ["oscillator"],
        }[mode]
        missing = {key: ["Required in this mode."] for key in required if key not in attrs}
        if missing:
            raise serializers.ValidationError(missing)
        if "coordinates" in attrs and mode is not SystemMode.AUTONOMOUS:
            raise serializers.ValidationError({"coordinates": ["Only autonomous systems take coordinates."]})
        n = attrs["n"]
        parameters = attrs.get("parameters", [])
        dim = len(attrs.get("base_frequencies", []))
        if "names" in attrs and len(attrs["names"]) != n:
            raise serializers.ValidationError({"names": [f"Expected {n} names."]})
        if "coordinates" in attrs:
            matrix = attrs["coordinates"]
            if len(matrix) != n or any(len(row) != n for row in matrix):
                raise serializers.ValidationError({"coordinates": [f"Expected a {n}x{n} matrix."]})
        if "F" in attrs and len(attrs["F"]["nu"]) != n:
            raise serializers.ValidationError({"F": {"nu": [f"Expected {n} values."]}})
        for order, terms in attrs.get("orders", {}).items():
            for index, term in enumerate(terms):
                where = f"orders.{order}[{index}]"
                if term["component"] >= n:
                    raise serializers.ValidationError({where: [f"component must be below {n}."]})
                if len(term["alpha"]) != n + len(parameters):
                    raise serializers.ValidationError(
                        {where: [f"alpha must have {n + len(parameters)} entries."]}
                    )
                if len(term.get("k", [])) != dim:
                    raise serializers.ValidationError({where: [f"k must have {dim} entries."]})
        for order, matrix in attrs.get("A", {}).items():
            if len(matrix) != n or any(len(row) != n for row in matrix):
                raise serializers.ValidationError({f"A.{order}": [f"Expected a {n}x{n} matrix."]})
            for row in matrix:
                for entry in row:
                    for term in entry:
                        if len(term.get("k", [])) != dim:
                            raise serializers.ValidationError(
                                {f"A.{order}": [f"k must have {dim} entries."]}
                            )
        if "chart" in attrs and len(attrs["chart"]["variables"]) != n:
            raise serializers.ValidationError({"chart": {"variables": [f"Expected {n} variables."]}})
        if "oscillator" in attrs and len(attrs["oscillator"]["variables"]) != n:
            raise serializers.ValidationError({"oscillator": {"variables": [f"Expected {n} variables."]}})
        return attrs

    def create(self, validated_data):
        return SystemFile.build(validated_data)


# Results


class RGResultSerializer(DynamicFieldsSerializer):
    """R_i and u^(i) of a derivation, plus the gauge when one was used."""

    m = serializers.IntegerField()
    names = serializers.ListField(child=serializers.CharField(), source="system.names")
    base_frequencies = serializers.SerializerMethodField()
    R = serializers.ListField(child=QPVectorField())
    U = serializers.ListField(child=QPVectorField())
    gauge = serializers.ListField(child=QPVectorField())
    F = serializers.SerializerMethodField()

    def get_F(self, res):
        F = self.context.get("linear_part")
        if F is None:
            return None
        field = RationalField()
        return OrderedDict(nu=[field.to_representation(v) for v in F.nu])

    def get_base_frequencies(self, res):
        field = RationalField()
        return [
            "%.17g" % v if isinstance(v, float) else field.to_representation(v)
            for v in res.system.basis.values
        ]

    def to_representation(self, instance):
        ret = super().to_representation(instance)
        if "gauge" in ret and not ret["gauge"]:
            ret.pop("gauge")
        if ret.get("F", {}) is None:
            ret.pop("F")
        return ret


class EntryListField(serializers.Field):
    """A Fourier-series matrix as nested lists of {coeff_re, coeff_im, k} terms."""

    def __init__(self, **kwargs):
        kwargs["read_only"] = True
        super().__init__(**kwargs)

    def to_representation(self, matrix):
        rows = []
        for row in matrix:
            entries = []
            for entry in row:
                terms = []
                for (k, _), coeff in entry.items():
                    real, imag = (
                        (str(coeff.real), str(coeff.imag))
                        if not isinstance(coeff, complex)
                        else ("%.17g" % coeff.real, "%.17g" % coeff.imag)
                    )
                    terms.append(OrderedDict(coeff_re=real, coeff_im=imag, k=list(k)))
                entries.append(terms)
            rows.append(entries)
        return rows


class LinearRGResultSerializer(DynamicFieldsSerializer):
    m = serializers.IntegerField()
    R = serializers.ListField(child=EntryListField())
    U = serializers.ListField(child=EntryListField())


class DerivationSerializer(OmitEmptyMixin, DynamicFieldsSerializer):
    """Everything ``derive`` writes.

    ``result`` is in the coordinates of the system file; diagonalized
    systems add the result in the diagonal coordinates. ``result_exclude``
    in the context is handed to the result serializers as ``exclude``.
    """

    mode = serializers.CharField(source="file.mode.value")
    result = serializers.SerializerMethodField()
    diagonal = serializers.SerializerMethodField()
    rendered = serializers.CharField(source="rendering")

    def _serialize(self, result):
        if result is None:
            return None
        exclude = self.context.get("result_exclude", [])
        if isinstance(result, LinearRGResult):
            return LinearRGResultSerializer(result, exclude=exclude).data
        return RGResultSerializer(
            result, exclude=exclude, context={"linear_part": self.instance.file.linear_part}
        ).data

    def get_result(self, derivation):
        return self._serialize(derivation.result)

    def get_diagonal(self, derivation):
        return self._serialize(derivation.diagonal_result)


def flatten_errors(detail, prefix: str = ""):
    """DRF error details as ``field.path: message`` lines."""
    if isinstance(detail, Mapping):
        for key, value in detail.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            if key == "non_field_errors":
                path = prefix or "file"
            yield from flatten_errors(value, path)
    elif isinstance(detail, (list, tuple)):
        if detail and all(not isinstance(item, (Mapping, list, tuple)) for item in detail):
            for item in detail:
                yield f"{prefix}: {item}"
        else:
            for index, item in enumerate(detail):
                if item:
                    yield from flatten_errors(item, f"{prefix}[{index}]")
    else:
        yield f"{prefix}: {detail}"
