from __future__ import annotations

from enum import Enum
from typing import Union

from pydantic import BaseModel, ConfigDict

from ..Helper.Exceptions import DomainException


class KernelKind(str, Enum):
    POWER = "power"
    POWER_TRUNCATED = "power_truncated"
    POWER_CAPPED = "power_capped"
    GAUSSIAN = "gaussian"
    INDICATOR = "indicator"
    SAMPLES = "samples"


KIND_ALIASES = {
    "gauss": KernelKind.GAUSSIAN,
}

# required parameter names per family
PARAMETERS = {
    KernelKind.POWER: ("q",),
    KernelKind.POWER_TRUNCATED: ("q", "R"),
    KernelKind.POWER_CAPPED: ("q", "M"),
    KernelKind.GAUSSIAN: ("sigma",),
    KernelKind.INDICATOR: ("radius",),
    KernelKind.SAMPLES: ("path",),
}


class KernelSpec(BaseModel):
    """Descriptor of an analytic kernel family or a samples file.

    Written on the command line as ``name:key=value,key=value``, for
    instance ``power_truncated:q=1.5,R=1`` or ``samples:path=k.csv``.
    """

    model_config = ConfigDict(frozen=True)
    kind: KernelKind
    params: dict[str, Union[float, str]]

    @staticmethod
    def parse(text: str) -> "KernelSpec":
        """Parse the ``name:key=value,...`` notation.

        Raises:
            DomainException: On unknown families, unknown or missing keys
                and parameters that are not strictly positive numbers.
        """
        name, _, arguments = str(text).strip().partition(":")
        name = name.strip().lower()
        try:
            kind = KIND_ALIASES.get(name) or KernelKind(name)
        except ValueError:
            raise DomainException(
                "kernel family in %s" % [k.value for k in KernelKind], name
            )

        params = {}
        for item in filter(None, (a.strip() for a in arguments.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep:
                raise DomainException("key=value pair in kernel spec", item)
            if key not in PARAMETERS[kind]:
                raise DomainException(
                    "%s accepts only %s" % (kind.value, list(PARAMETERS[kind])),
                    key,
                )
            if key in params:
                raise DomainException("each kernel key given once", key)
            params[key] = value.strip()

        return KernelSpec.build(kind, params)

    @staticmethod
    def build(kind: KernelKind, params: dict) -> "KernelSpec":
        missing = [k for k in PARAMETERS[kind] if k not in params]
        if missing:
            raise DomainException("%s needs %s" % (kind.value, missing), params)

        typed = {}
        for key, value in params.items():
            if kind == KernelKind.SAMPLES:
                typed[key] = str(value)
                continue
            try:
                number = float(value)
            except (TypeError, ValueError):
                raise DomainException("numeric kernel parameter %s" % key, value)
            if not number > 0 or number == float("inf"):
                raise DomainException(
                    "kernel parameter %s strictly positive and finite" % key,
                    value,
                )
            typed[key] = number

        if kind in (
            KernelKind.POWER,
            KernelKind.POWER_TRUNCATED,
            KernelKind.POWER_CAPPED,
        ) and not typed["q"] > 1:
            raise DomainException("power kernels need q > 1", typed["q"])

        return KernelSpec(kind=kind, params=typed)

    def __str__(self) -> str:
        arguments = ",".join(
            "%s=%s" % (k, self.params[k]) for k in PARAMETERS[self.kind]
        )
        return "%s:%s" % (self.kind.value, arguments)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "params": dict(self.params)}

    @staticmethod
    def from_dict(obj) -> "KernelSpec":
        return KernelSpec.build(KernelKind(obj["kind"]), obj["params"])
