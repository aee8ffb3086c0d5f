"""Reading field specifications from YAML files.

Schema (all keys except ``polynomial`` optional)::

    name: Q(sqrt2)
    polynomial: [-2, 0, 1]          # integer coefficients, constant term first
    basis_change: [[1, 0], ["1/2", "1/2"]]   # rows: integral basis in powers of theta
    fundamental_units: [[1, 1]]     # coordinate vectors, or "auto" (real quadratic)
    torsion_generator: [-1, 0]
    torsion_order: 2
    class_number: 1
    class_representatives: [[[1, 0]], [[2, 0], [1, 1]]]   # generator lists
    regulator_reference: 0.8813735870
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import yaml

from .field import NumberField, NumberFieldSpec, load_field

REFERENCE_FIELDS = {
    "Q": "Q.yaml",
    "Q(i)": "Qi.yaml",
    "Q(sqrt2)": "Qsqrt2.yaml",
    "Q(sqrt3)": "Qsqrt3.yaml",
    "Q(sqrt5)": "Qsqrt5.yaml",
    "Q(sqrt-5)": "Qsqrtm5.yaml",
    "Q(cbrt2)": "cubic_m2.yaml",
}
_ALIASES = {"qi": "Q(i)", "q": "Q", "qsqrt2": "Q(sqrt2)", "qsqrt3": "Q(sqrt3)",
            "qsqrt5": "Q(sqrt5)", "qsqrtm5": "Q(sqrt-5)", "cubic": "Q(cbrt2)",
            "gaussian": "Q(i)"}


class ConfigError(ValueError):
    pass


def _frac(v):
    return Fraction(str(v)) if not isinstance(v, int) else Fraction(v)


def spec_from_mapping(data: dict) -> NumberFieldSpec:
    if not isinstance(data, dict) or "polynomial" not in data:
        raise ConfigError("field spec needs a 'polynomial' entry")
    try:
        poly = tuple(int(c) for c in data["polynomial"])
        bc = data.get("basis_change")
        bc = None if bc is None else tuple(tuple(_frac(v) for v in row) for row in bc)
        units = data.get("fundamental_units", ())
        if units != "auto":
            units = tuple(tuple(int(v) for v in u) for u in (units or ()))
        tg = data.get("torsion_generator")
        tg = None if tg is None else tuple(int(v) for v in tg)
        reps = data.get("class_representatives") or ()
        reps = tuple(tuple(tuple(int(v) for v in g) for g in gens) for gens in reps)
        ref = data.get("regulator_reference")
        return NumberFieldSpec(
            defining_polynomial=poly,
            basis_change=bc,
            fundamental_units=units,
            torsion_generator=tg,
            torsion_order=int(data.get("torsion_order", 2)),
            class_number=int(data.get("class_number", 1)),
            class_representatives=reps,
            name=str(data.get("name", "")),
            regulator_reference=None if ref is None else float(ref),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed field spec: {exc}") from exc


def read_field_spec(path: str) -> NumberFieldSpec:
    with open(path) as fh:
        return spec_from_mapping(yaml.safe_load(fh))


def load_field_file(path: str) -> NumberField:
    return load_field(read_field_spec(path))


@lru_cache(maxsize=None)
def reference_field(name: str) -> NumberField:
    """One of the shipped fields, by name (e.g. "Q(i)") or alias ("qi")."""
    key = _ALIASES.get(name.lower().replace(" ", ""), name)
    if key not in REFERENCE_FIELDS:
        raise ConfigError(f"unknown reference field {name!r}; known: {sorted(REFERENCE_FIELDS)}")
    text = resources.files("mitsui_lab.fields").joinpath(REFERENCE_FIELDS[key]).read_text()
    return load_field(spec_from_mapping(yaml.safe_load(text)))


def resolve_field(ref) -> NumberField:
    """A field from a reference name, a YAML path, or an inline mapping."""
    if isinstance(ref, NumberField):
        return ref
    try:
        if isinstance(ref, dict):
            return load_field(spec_from_mapping(ref))
        if isinstance(ref, str):
            if os.path.exists(ref):
                return load_field_file(ref)
            return reference_field(ref)
    except ConfigError:
        raise
    except (OSError, ValueError, yaml.YAMLError) as exc:
        raise ConfigError(f"invalid field {ref!r}: {exc}") from exc
    raise ConfigError(f"cannot resolve field reference {ref!r}")
