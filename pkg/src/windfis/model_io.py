"""Canonical on-disk model format.

A model file is a single JSON document with a fixed field order and every
real number rendered with 17 significant digits, which is enough to pin a
double exactly.  Writing is done by a small emitter (the stdlib encoder
does not expose float formatting) so that save -> load -> save is
byte-identical and a loaded model evaluates bit-for-bit like the saved one.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import DataError, InvalidInputError
from .membership import BellMf, GaussianMf
from .network import AnfisModel, InputSpec, Rule
from .series import EmbeddingSpec

__all__ = ["SCHEMA_VERSION", "model_to_document", "model_from_document",
           "save_model", "load_model", "canonical_json"]

SCHEMA_VERSION = 1


def _format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise InvalidInputError("cannot serialize non-finite numbers")
    text = format(x, ".17g")
    # keep floats typed as floats on re-parse
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def canonical_json(value: Any, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{inner}"{key}": {canonical_json(val, indent + 1)}'
            for key, val in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{canonical_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    raise InvalidInputError(f"unsupported value in model document: {type(value)}")


def _mf_to_doc(mf) -> dict:
    if isinstance(mf, GaussianMf):
        return {"sigma": float(mf.sigma), "center": float(mf.center)}
    if isinstance(mf, BellMf):
        return {
            "half_width": float(mf.half_width),
            "slope": float(mf.slope),
            "center": float(mf.center),
        }
    raise InvalidInputError(f"unknown membership type {type(mf)}")


def _mf_from_doc(family: str, doc: dict):
    if family == "gaussian":
        return GaussianMf(sigma=float(doc["sigma"]), center=float(doc["center"]))
    if family == "bell":
        return BellMf(
            half_width=float(doc["half_width"]),
            slope=float(doc["slope"]),
            center=float(doc["center"]),
        )
    raise DataError(f"unknown membership family '{family}' in model file")


def model_to_document(
    model: AnfisModel,
    embedding: EmbeddingSpec | None = None,
    training_meta: dict | None = None,
) -> dict:
    """Schema-ordered plain dict describing the model."""
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "mf_family": model.family,
        "inputs": [
            {
                "name": s.name,
                "lo": float(s.lo),
                "hi": float(s.hi),
                "mf_count": s.mf_count,
            }
            for s in model.inputs
        ],
        "membership": [[_mf_to_doc(mf) for mf in row] for row in model.mf_grid],
        "rules": [
            {
                "antecedent": list(r.antecedent),
                "consequent": [float(c) for c in r.consequent],
            }
            for r in model.rules
        ],
        "embedding": None
        if embedding is None
        else {
            "lag_count": embedding.lag_count,
            "lag_spacing": embedding.lag_spacing,
            "horizon": embedding.horizon,
        },
        "training": None if training_meta is None else dict(training_meta),
    }
    return doc


def model_from_document(doc: dict):
    """Inverse of ``model_to_document``; returns (model, embedding, training)."""
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataError(f"unsupported model schema version {version!r}")
    family = doc["mf_family"]
    inputs = [
        InputSpec(
            name=d["name"], lo=float(d["lo"]), hi=float(d["hi"]),
            mf_count=int(d["mf_count"]),
        )
        for d in doc["inputs"]
    ]
    grid = [[_mf_from_doc(family, d) for d in row] for row in doc["membership"]]
    rules = [
        Rule(antecedent=tuple(d["antecedent"]), consequent=d["consequent"])
        for d in doc["rules"]
    ]
    model = AnfisModel(inputs=inputs, mf_grid=grid, rules=rules, family=family)
    embedding = None
    if doc.get("embedding") is not None:
        e = doc["embedding"]
        embedding = EmbeddingSpec(
            lag_count=int(e["lag_count"]),
            lag_spacing=int(e["lag_spacing"]),
            horizon=int(e["horizon"]),
        )
    return model, embedding, doc.get("training")


def save_model(
    path,
    model: AnfisModel,
    embedding: EmbeddingSpec | None = None,
    training_meta: dict | None = None,
) -> None:
    doc = model_to_document(model, embedding=embedding, training_meta=training_meta)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc) + "\n")


def load_model(path):
    """Returns (model, embedding_spec_or_None, training_meta_or_None)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read model file {path}: {exc}") from exc
    try:
        return model_from_document(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model file {path}: {exc}") from exc
