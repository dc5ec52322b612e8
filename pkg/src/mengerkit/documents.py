"""JSON documents for algebras, function sets, ordered algebras and representations.

Tables are flat row-major lists; ``null`` marks an undefined entry.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import AlgebraTable, SelectorSet
from .binrel import BinaryRelation
from .errors import DocumentError
from .nfun import FunctionSet, PartialFunctionTable
from .relations import OrderedAlgebra
from .represent import Representation

VERSION = 1
KINDS = ("abstract", "functions", "ordered", "representation")


def _abstract_fields(alg: AlgebraTable) -> dict:
    return {
        "n": alg.n,
        "size": alg.size,
        "super": alg.sup.ravel().tolist(),
        "binops": [b.ravel().tolist() for b in alg.binops],
    }


def to_document(obj, selectors: SelectorSet | None = None) -> dict:
    if isinstance(obj, AlgebraTable):
        doc = {"version": VERSION, "kind": "abstract", **_abstract_fields(obj)}
        if selectors is not None:
            doc["selectors"] = list(selectors)
        return doc
    if isinstance(obj, OrderedAlgebra):
        doc = {"version": VERSION, "kind": "ordered", **_abstract_fields(obj.alg)}
        doc["order"] = [list(p) for p in obj.zeta.pairs()]
        return doc
    if isinstance(obj, FunctionSet):
        return {
            "version": VERSION,
            "kind": "functions",
            "n": obj.n,
            "carrier_size": obj.m,
            "functions": [list(f.table) for f in obj],
        }
    if isinstance(obj, Representation):
        return {
            "version": VERSION,
            "kind": "representation",
            "method": obj.kind,
            "n": obj.n,
            "carrier_size": obj.m,
            "verified": obj.verified,
            "source": to_document(obj.source),
            "images": [list(f.table) for f in obj.images],
            "meta": _jsonable(obj.meta),
        }
    raise TypeError(f"no document form for {type(obj).__name__}")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, np.generic):
        return x.item()
    return x


def dumps(obj, **kw) -> str:
    doc = obj if isinstance(obj, dict) else to_document(obj, **kw)
    return json.dumps(doc, separators=(",", ":"))


def _need(doc: dict, key: str, kind=None):
    if key not in doc:
        raise DocumentError(f"missing field '{key}'")
    value = doc[key]
    if kind is not None and not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise DocumentError(f"field '{key}' has the wrong type")
    return value


def _int_list(values, length: int, bound: int, nullable: bool, what: str) -> list:
    if not isinstance(values, list) or len(values) != length:
        raise DocumentError(f"{what} must be a list of length {length}")
    for v in values:
        if v is None and nullable:
            continue
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < bound:
            raise DocumentError(f"{what} has an entry out of range: {v!r}")
    return values


def _parse_abstract(doc: dict) -> AlgebraTable:
    n = _need(doc, "n", int)
    size = _need(doc, "size", int)
    if n < 1 or size < 1:
        raise DocumentError("n and size must be positive")
    sup = _int_list(_need(doc, "super"), size ** (n + 1), size, False, "super")
    binops = _need(doc, "binops", list)
    if len(binops) != n:
        raise DocumentError(f"expected {n} binop tables")
    for k, b in enumerate(binops):
        _int_list(b, size * size, size, False, f"binops[{k}]")
    return AlgebraTable(n, size, sup, binops)


def from_document(doc: dict):
    if not isinstance(doc, dict):
        raise DocumentError("document must be an object")
    if _need(doc, "version", int) != VERSION:
        raise DocumentError(f"unsupported version {doc['version']!r}")
    kind = _need(doc, "kind", str)
    if kind == "abstract":
        return _parse_abstract(doc)
    if kind == "ordered":
        alg = _parse_abstract(doc)
        pairs = _need(doc, "order", list)
        for p in pairs:
            _int_list(p, 2, alg.size, False, "order pair")
        return OrderedAlgebra(alg, BinaryRelation.from_pairs(alg.size, [tuple(p) for p in pairs]))
    if kind == "functions":
        n = _need(doc, "n", int)
        m = _need(doc, "carrier_size", int)
        if n < 1 or m < 1:
            raise DocumentError("n and carrier_size must be positive")
        tables = _need(doc, "functions", list)
        fs = [PartialFunctionTable(n, m, tuple(_int_list(t, m**n, m, True, "function"))) for t in tables]
        try:
            return FunctionSet(tuple(fs))
        except ValueError as exc:
            raise DocumentError(str(exc)) from exc
    if kind == "representation":
        src = from_document(_need(doc, "source", dict))
        if not isinstance(src, AlgebraTable):
            raise DocumentError("representation source must be an abstract algebra")
        n = _need(doc, "n", int)
        m = _need(doc, "carrier_size", int)
        if n != src.n or m < 1:
            raise DocumentError("representation arity or carrier is invalid")
        tables = _need(doc, "images", list)
        if len(tables) != src.size:
            raise DocumentError("one image per element is required")
        images = tuple(PartialFunctionTable(n, m, tuple(_int_list(t, m**n, m, True, "image"))) for t in tables)
        return Representation(
            src,
            m,
            images,
            _need(doc, "method", str),
            verified=bool(doc.get("verified", False)),
            meta=doc.get("meta", {}),
        )
    raise DocumentError(f"unknown kind {kind!r}")


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from exc
    return from_document(doc)


def load(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return loads(text)
