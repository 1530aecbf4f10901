"""Plain-text curve files: one vertex per line, commas or whitespace between
coordinates, ``#`` starts a comment line."""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Iterable, TextIO, Union

from fle.geometry import PolygonalCurve

_SPLIT = re.compile(r"[,\s]+")

PathLike = Union[str, Path]


class CurveParseError(ValueError):
    """Malformed curve file; ``line`` is 1-based, or ``None`` for file-level errors."""

    def __init__(self, message: str, line=None):
        super().__init__(message if line is None else f"{message} at line {line}")
        self.line = line


def parse_curve_text(lines: Iterable[str]) -> PolygonalCurve:
    pts = []
    dim = None
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        tokens = [t for t in _SPLIT.split(text) if t]
        try:
            coords = tuple(float(t) for t in tokens)
        except ValueError:
            bad = next(t for t in tokens if not _is_float(t))
            raise CurveParseError(f"non-numeric token {bad!r}", lineno) from None
        if not all(math.isfinite(c) for c in coords):
            raise CurveParseError("non-finite coordinate", lineno)
        if dim is None:
            dim = len(coords)
        elif len(coords) != dim:
            raise CurveParseError(f"expected {dim} coordinates, found {len(coords)}", lineno)
        if pts and coords == pts[-1]:
            raise CurveParseError("duplicate consecutive vertex", lineno)
        pts.append(coords)
    if not pts:
        raise CurveParseError("no vertices in curve file")
    return PolygonalCurve(pts)


def _is_float(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_curve(path: PathLike) -> PolygonalCurve:
    with open(path, encoding="utf-8") as fh:
        return parse_curve_text(fh)


def format_curve(P: PolygonalCurve) -> str:
    # repr gives the shortest string that parses back to the same double
    return "".join(",".join(repr(c) for c in v) + "\n" for v in P.vertices)


def write_curve(P: PolygonalCurve, dest: Union[PathLike, TextIO]) -> None:
    text = format_curve(P)
    if hasattr(dest, "write"):
        dest.write(text)
        return
    Path(dest).write_text(text, encoding="utf-8")
