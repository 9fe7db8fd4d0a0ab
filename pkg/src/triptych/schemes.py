"""Scheme files: JSON descriptions of code spaces.

    {"kind": "shift", "d": 3, "k1": 1, "k2": 2, "tensor": {...}}
    {"kind": "permutation", "d": 3, "sigmas": [[...], [...], [...]]}
    {"kind": "vip", "d": 4}
    {"kind": "raw", "tensor": {"dims": [...], "re": [...], "im": [...]}}

For the parametric kinds, ``tensor`` is optional; when present it must match
the tensor rebuilt from the parameters.
"""

from __future__ import annotations

import json
from pathlib import Path

from .codespace import permutation_code, qutrit_code, shift_code, vip_code
from .errors import DimensionError, TriptychError, ValidationError
from .tensor_core import Tensor4

KINDS = ("shift", "permutation", "vip", "qutrit", "raw")


class SchemeFormatError(TriptychError, ValueError):
    """A scheme file cannot be parsed or is internally inconsistent."""


def build_tensor(scheme: dict) -> Tensor4:
    kind = scheme.get("kind")
    if kind == "shift":
        return shift_code(int(scheme["d"]), int(scheme["k1"]), int(scheme["k2"]))
    if kind == "permutation":
        return permutation_code(int(scheme["d"]), scheme["sigmas"])
    if kind == "vip":
        return vip_code(int(scheme["d"]))
    if kind == "qutrit":
        return qutrit_code()
    if kind == "raw":
        return Tensor4.from_json(scheme["tensor"])
    raise SchemeFormatError(f"unknown scheme kind {kind!r}; expected one of {KINDS}")


def scheme_dict(kind: str, tensor: Tensor4, **params) -> dict:
    out = {"kind": kind}
    out.update({k: v for k, v in params.items() if v is not None})
    out["tensor"] = tensor.to_json()
    return out


def load_scheme(source) -> tuple[dict, Tensor4]:
    """Parse a scheme from a path, JSON text or dict."""
    if isinstance(source, dict):
        scheme = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        try:
            scheme = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemeFormatError(f"scheme file is not valid JSON: {exc}") from None
    if not isinstance(scheme, dict) or "kind" not in scheme:
        raise SchemeFormatError("scheme must be a JSON object with a 'kind' field")
    try:
        tensor = build_tensor(scheme)
        if scheme["kind"] != "raw" and "tensor" in scheme:
            stored = Tensor4.from_json(scheme["tensor"])
            if not stored.allclose(tensor, atol=1e-12):
                raise SchemeFormatError("stored tensor does not match the scheme parameters")
    except SchemeFormatError:
        raise
    except (KeyError, TypeError) as exc:
        raise SchemeFormatError(f"scheme is missing or has a malformed field: {exc}") from None
    except (ValidationError, DimensionError) as exc:
        raise SchemeFormatError(str(exc)) from None
    return scheme, tensor


def save_scheme(scheme: dict, path) -> None:
    Path(path).write_text(json.dumps(scheme, indent=2) + "\n")
