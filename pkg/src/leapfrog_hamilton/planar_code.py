"""Reader and writer for the single-byte planar_code format.

A file is the ASCII header ``>>planar_code<<`` followed by records. A record
is the vertex count n and, for every vertex, its 1-based neighbours in
clockwise order closed by a 0 byte. Rotations are stored counterclockwise
in memory, so lists are reversed on the way in and out.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

from .errors import (
    InconsistentAdjacency,
    MissingHeader,
    NonSimpleGraph,
    TruncatedRecord,
    VertexCountOverflow,
)
from .planar_map import PlanarMap
from .serialization import maps_from_json

logger = logging.getLogger(__name__)

HEADER = b">>planar_code<<"


def parse_planar_code(data: bytes) -> list[PlanarMap]:
    if not data.startswith(HEADER):
        raise MissingHeader(f"input does not start with {HEADER.decode('ascii')!r}")

    maps: list[PlanarMap] = []
    position = len(HEADER)
    while position < len(data):
        record_index = len(maps)
        n = data[position]
        position += 1
        if n == 0:
            raise VertexCountOverflow(
                f"record {record_index} uses the 16-bit extension (more than 255 vertices)"
            )

        clockwise: list[list[int]] = []
        for vertex in range(n):
            neighbours: list[int] = []
            while True:
                if position >= len(data):
                    raise TruncatedRecord(
                        f"record {record_index} ends inside the list of vertex {vertex + 1}"
                    )
                value = data[position]
                position += 1
                if value == 0:
                    break
                if value > n:
                    raise InconsistentAdjacency(
                        f"record {record_index}: vertex {vertex + 1} lists {value} but n = {n}"
                    )
                neighbours.append(value - 1)
            if vertex in neighbours:
                raise NonSimpleGraph(f"record {record_index}: loop at vertex {vertex + 1}")
            if len(set(neighbours)) != len(neighbours):
                raise NonSimpleGraph(
                    f"record {record_index}: vertex {vertex + 1} lists a neighbour twice"
                )
            clockwise.append(neighbours)

        for vertex, neighbours in enumerate(clockwise):
            for neighbour in neighbours:
                if vertex not in clockwise[neighbour]:
                    raise InconsistentAdjacency(
                        f"record {record_index}: {vertex + 1} lists {neighbour + 1} "
                        f"but {neighbour + 1} does not list {vertex + 1}"
                    )

        maps.append(PlanarMap.from_rotation([neighbours[::-1] for neighbours in clockwise]))
    logger.debug("parsed %d planar_code record(s)", len(maps))
    return maps


def encode_planar_code(maps: Iterable[PlanarMap]) -> bytes:
    output = bytearray(HEADER)
    for planar_map in maps:
        n = planar_map.vertex_count
        if n > 255:
            raise VertexCountOverflow(f"cannot write {n} vertices in the single-byte format")
        output.append(n)
        for vertex in range(n):
            output.extend(neighbour + 1 for neighbour in reversed(planar_map.neighbors(vertex)))
            output.append(0)
    return bytes(output)


def read_maps(path: str | Path) -> list[PlanarMap]:
    """Load maps from a planar_code file or from map JSON / JSON Lines."""
    data = Path(path).read_bytes()
    if data.startswith(b">>"):
        return parse_planar_code(data)
    return maps_from_json(data.decode("utf-8"))


def write_planar_code(maps: Iterable[PlanarMap], path: str | Path) -> None:
    output_path = Path(path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_bytes(encode_planar_code(maps))
