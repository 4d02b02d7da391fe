"""JSON arc documents: ``{"version": 1, "vertices": [[x, y], ...], "metadata": {...}}``."""

import json

from .geometry import InvalidInput, PolygonalArc

VERSION = 1


class DocumentError(InvalidInput):
    pass


def arc_from_dict(doc):
    if not isinstance(doc, dict):
        raise DocumentError("arc document must be a JSON object")
    if doc.get("version") != VERSION:
        raise DocumentError(f"unsupported arc document version {doc.get('version')!r}")
    verts = doc.get("vertices")
    if not isinstance(verts, list) or not all(
        isinstance(v, list) and len(v) == 2 and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
        for v in verts
    ):
        raise DocumentError("vertices must be a list of [x, y] number pairs")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in meta.items()):
        raise DocumentError("metadata must map strings to strings")
    try:
        return PolygonalArc(verts)
    except InvalidInput as exc:
        raise DocumentError(str(exc)) from exc


def arc_to_dict(arc, metadata=None):
    return {"version": VERSION, "vertices": arc.vertices.tolist(), "metadata": dict(metadata or {})}


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    return arc_from_dict(doc)


def dumps(arc, metadata=None):
    return json.dumps(arc_to_dict(arc, metadata))


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dump(arc, path, metadata=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(arc, metadata))
        fh.write("\n")
