"""PACE 2016 track B file formats.

Instances are edge lists: one edge per line as two whitespace-separated
vertex labels, ``#`` starts a comment line. Solutions list one vertex label
per line.
"""

from __future__ import annotations

import io
import os
from typing import Iterable, TextIO

from .graph import MultiGraph
from .oracle import min_fvs_bruteforce

__all__ = [
    "ParseError",
    "min_fvs_bruteforce",
    "parse_instance",
    "parse_solution",
    "read_instance",
    "read_solution",
    "write_instance",
    "write_solution",
]


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_instance(text: str | bytes | TextIO) -> MultiGraph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    stream = io.StringIO(text) if isinstance(text, str) else text
    g = MultiGraph()
    for lineno, line in enumerate(stream, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected 2 vertex labels, got {len(tokens)}")
        a, b = tokens
        g.add_edge(g.vertex(a), g.vertex(b))
    return g


def read_instance(path: str | os.PathLike) -> MultiGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh)


def write_instance(g: MultiGraph) -> str:
    lines = []
    for a, b, mult in g.edges():
        lines.extend([f"{g.label(a)} {g.label(b)}"] * mult)
    return "".join(line + "\n" for line in lines)


def write_solution(labels: Iterable[str]) -> str:
    return "".join(f"{label}\n" for label in sorted(labels))


def parse_solution(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def read_solution(path: str | os.PathLike) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return parse_solution(fh.read())
