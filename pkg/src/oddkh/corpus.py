"""The bundled verification corpus (diagrams, Reidemeister pairs, movies).

``ODDKH_CORPUS`` points at a replacement directory with the same layout.
"""

from __future__ import annotations

import os
from pathlib import Path

from .diagram import Diagram, parse_pd
from .movie import Movie, parse_movie

ENV_VAR = "ODDKH_CORPUS"


def corpus_root() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).with_name("corpus")


def _files(sub: str, suffix: str) -> list[Path]:
    return sorted((corpus_root() / sub).glob(f"*{suffix}"))


def diagram_paths() -> list[Path]:
    return _files("diagrams", ".pd")


def load_diagrams(max_crossings: int | None = None) -> dict[str, Diagram]:
    out = {}
    for p in diagram_paths():
        d = parse_pd(p.read_text())
        if max_crossings is None or d.n <= max_crossings:
            out[p.stem] = d
    return out


def load_pairs() -> dict[str, Movie]:
    """One-move movies; the pair is (first frame, last frame)."""
    return {p.stem: parse_movie(p.read_text(), p.stem) for p in _files("pairs", ".movie")}


def movie_path(name: str) -> Path:
    return corpus_root() / "movies" / f"{name}.movie"


def load_movie(name: str) -> Movie:
    return parse_movie(movie_path(name).read_text(), name)
