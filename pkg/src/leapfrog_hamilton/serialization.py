from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import MalformedMap
from .planar_map import PlanarMap


def convert_for_output(value: Any) -> Any:
    """Turn paths, tuples, sets and frozensets into JSON/YAML-safe values."""
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): convert_for_output(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [convert_for_output(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(convert_for_output(v) for v in value)
    return value


def maybe_relative(path_value: Any, root_path: Path | None, prefer_relative: bool) -> Any:
    if not prefer_relative or root_path is None or not isinstance(path_value, str):
        return path_value

    candidate = Path(path_value)
    if not candidate.is_absolute() or not root_path.is_absolute():
        return path_value

    try:
        return str(candidate.relative_to(root_path))
    except ValueError:
        return path_value


def dump_json(document: Any, *, indent: int | None = None) -> str:
    """Deterministic JSON: sorted keys, no trailing whitespace."""
    separators = (",", ": ") if indent else (",", ":")
    return json.dumps(
        convert_for_output(document), sort_keys=True, indent=indent, separators=separators
    )


def dump_json_lines(documents: Iterable[Any]) -> str:
    return "".join(dump_json(document) + "\n" for document in documents)


def load_json_documents(text: str) -> list[Any]:
    """Parse a single JSON value or JSON Lines into a flat list of documents."""
    stripped = text.strip()
    if not stripped:
        return []
    try:
        value = json.loads(stripped)
    except json.JSONDecodeError:
        documents: list[Any] = []
        for line_number, line in enumerate(stripped.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                documents.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise MalformedMap(f"line {line_number} is not valid JSON: {exc.msg}") from exc
        return documents
    return value if isinstance(value, list) else [value]


def write_text(path: str | Path, text: str) -> None:
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with output_path.open("w", encoding="utf-8") as handle:
        handle.write(text)


# maps


def map_to_document(planar_map: PlanarMap) -> dict[str, Any]:
    return {"n": planar_map.vertex_count, "adj": planar_map.to_rotation()}


def map_from_document(document: Any) -> PlanarMap:
    if not isinstance(document, Mapping) or "adj" not in document:
        raise MalformedMap("map JSON needs an 'adj' list of counterclockwise neighbour lists")
    adjacency = document["adj"]
    if not isinstance(adjacency, list) or not all(
        isinstance(row, list) and all(isinstance(v, int) for v in row) for row in adjacency
    ):
        raise MalformedMap("'adj' must be a list of integer lists")
    if "n" in document and document["n"] != len(adjacency):
        raise MalformedMap(f"'n' is {document['n']} but 'adj' has {len(adjacency)} rows")
    return PlanarMap.from_rotation(adjacency)


def to_json(planar_map: PlanarMap) -> str:
    return dump_json(map_to_document(planar_map))


def from_json(text: str) -> PlanarMap:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedMap(f"map JSON is not valid JSON: {exc.msg}") from exc
    return map_from_document(document)


def maps_from_json(text: str) -> list[PlanarMap]:
    return [map_from_document(document) for document in load_json_documents(text)]


def _dot_attributes(attributes: Mapping[str, Any] | None) -> str:
    if not attributes:
        return ""
    body = ", ".join(f"{key}={json.dumps(str(value))}" for key, value in attributes.items())
    return f" [{body}]"


def to_dot(
    planar_map: PlanarMap,
    *,
    name: str = "G",
    vertex_attributes: Mapping[int, Mapping[str, Any]] | None = None,
    edge_attributes: Mapping[tuple[int, int], Mapping[str, Any]] | None = None,
) -> str:
    """Undirected DOT text: vertices in index order, each edge once."""
    vertex_attributes = vertex_attributes or {}
    edge_attributes = edge_attributes or {}
    lines = [f"graph {name} {{"]
    for vertex in range(planar_map.vertex_count):
        lines.append(f"  {vertex}{_dot_attributes(vertex_attributes.get(vertex))};")
    for u, v in planar_map.edges():
        lines.append(f"  {u} -- {v}{_dot_attributes(edge_attributes.get((u, v)))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
