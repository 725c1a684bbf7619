from collections import OrderedDict
from fractions import Fraction
from typing import cast

from rest_framework import serializers

from .qp import GaussianRational


class RationalField(serializers.Field):
    """A rational number written as "p/q", "p" or a decimal string.

    Internally a :class:`fractions.Fraction`; represented in lowest terms.
    """

    default_error_messages = {
        "invalid": 'Expected a rational string such as "3/4", got {value!r}.',
        "zero_denominator": "The denominator of {value!r} is zero.",
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (str, int)):
            self.fail("invalid", value=data)
        try:
            return Fraction(str(data).strip())
        except ZeroDivisionError:
            self.fail("zero_denominator", value=data)
        except ValueError:
            self.fail("invalid", value=data)

    def to_representation(self, value):
        return str(Fraction(value))


class ComplexRationalField(serializers.Field):
    """A Gaussian rational, either a rational string or {"re": ..., "im": ...}."""

    default_error_messages = {
        "invalid": 'Expected a rational string or an object with "re" and "im".',
    }

    def to_internal_value(self, data):
        part = RationalField()
        if isinstance(data, dict):
            unknown = set(data) - {"re", "im"}
            if unknown:
                self.fail("invalid")
            real = part.run_validation(data.get("re", "0"))
            imag = part.run_validation(data.get("im", "0"))
            return GaussianRational(real, imag)
        return GaussianRational(part.run_validation(data))

    def to_representation(self, value):
        value = cast("GaussianRational", value)
        return OrderedDict(re=str(value.real), im=str(value.imag))


class WritableSerializerMethodField(serializers.Field):
    """A SerializerMethodField that also allows deserialization.

    The containing serializer must implement two methods:

        def get_{field_name}(self, instance): # for serialization
            ...

        def save_{field_name}(self, data): # for deserialization
            # data is the raw value of the field in the file
            ...

    """

    def __init__(self, method_name=None, save_method_name=None, **kwargs):
        self.method_name = method_name
        self.save_method_name = save_method_name
        kwargs["read_only"] = False
        super().__init__(**kwargs)

    def bind(self, field_name, parent):
        if self.method_name is None:
            self.method_name = "get_{field_name}".format(field_name=field_name)
        if self.save_method_name is None:
            self.save_method_name = "save_{field_name}".format(field_name=field_name)
        super().bind(field_name, parent)

    def to_representation(self, value):
        method = getattr(self.parent, cast("str", self.method_name))
        return method(value)

    def to_internal_value(self, data):
        method = getattr(self.parent, cast("str", self.save_method_name))
        return method(data)

    def get_attribute(self, instance):
        return instance


class QPVectorField(serializers.Field):
    """A QPVector as a list of terms {component, coeff_re, coeff_im, alpha, k}.

    Read only: vectors are built from validated term lists by the system
    file serializer, which knows the dimension and the basis.
    """

    def __init__(self, **kwargs):
        kwargs["read_only"] = True
        super().__init__(**kwargs)

    def to_representation(self, value):
        terms = []
        for component, poly in enumerate(value):
            for (k, alpha), coeff in poly.items():
                if isinstance(coeff, GaussianRational):
                    real, imag = str(coeff.real), str(coeff.imag)
                else:
                    real, imag = "%.17g" % coeff.real, "%.17g" % coeff.imag
                terms.append(
                    OrderedDict(
                        component=component,
                        coeff_re=real,
                        coeff_im=imag,
                        alpha=list(alpha),
                        k=list(k),
                    )
                )
        return terms
