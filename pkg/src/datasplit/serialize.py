"""JSON readers and writers for instances, coverings and reports."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InstanceError
from .family import Covering, Instance, members, to_mask


class InputError(InstanceError):
    """Malformed input document; the message names the offending line or field."""


def _int_sets(doc, name):
    value = doc.get(name, [])
    if not isinstance(value, list):
        raise InputError(f"field '{name}': expected a list of integer lists")
    out = []
    for pos, s in enumerate(value):
        if not isinstance(s, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in s):
            raise InputError(f"field '{name}[{pos}]': expected a list of integers")
        if any(x < 0 for x in s):
            raise InputError(f"field '{name}[{pos}]': negative attribute")
        out.append(to_mask(s))
    return tuple(out)


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise InputError("top level: expected a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError("field 'n': expected a non-negative integer")
    names = doc.get("attribute_names")
    if names is not None:
        if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
            raise InputError("field 'attribute_names': expected a list of strings")
        if len(names) != n:
            raise InputError(f"field 'attribute_names': expected {n} names, got {len(names)}")
        names = tuple(names)
    return Instance(n, _int_sets(doc, "forbidden"), _int_sets(doc, "required"), names)


def instance_from_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return instance_from_dict(doc)


def load_instance(path) -> Instance:
    return instance_from_json(Path(path).read_text())


def instance_to_dict(inst: Instance) -> dict:
    doc: dict = {"n": inst.n}
    if inst.attribute_names is not None:
        doc["attribute_names"] = list(inst.attribute_names)
    doc["forbidden"] = [members(s) for s in inst.forbidden]
    doc["required"] = [members(s) for s in inst.required]
    return doc


def covering_to_dict(cov: Covering, method: str, trace=None) -> dict:
    doc = {"fragments": cov.as_lists(), "size": len(cov), "method": method}
    if trace is not None:
        doc["trace"] = [step.as_dict() for step in trace]
    return doc


def covering_from_dict(doc) -> Covering:
    frags = doc.get("fragments") if isinstance(doc, dict) else None
    if not isinstance(frags, list):
        raise InputError("field 'fragments': expected a list of integer lists")
    return Covering(_int_sets({"fragments": frags}, "fragments"))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)
