"""Shared line iterator for the instance file formats."""

from __future__ import annotations

from typing import Iterator


def data_lines(text: str, comment_prefixes: tuple[str, ...] = ("#",)) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, stripped line), skipping blanks and comments."""
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if any(line.startswith(p) for p in comment_prefixes):
            continue
        yield i, line
