"""Read and write Cayley tables in the plain ".tbl" text format.

Format: optional '#' comment lines, then a line holding n, then n lines of n
whitespace-separated integers in 0..n-1 (row x, column y holds x*y).  Import
normalizes the identity to index 0 and reports the relabeling applied; export
always writes normalized tables with a '# name:' header.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import CayleyTable, ConstructionError, classify


@dataclass
class ImportResult:
    table: CayleyTable
    relabeling: list[int] | None  # old index -> new index, None if untouched
    name: str | None
    comments: list[str] = field(default_factory=list)


def parse_tbl(text: str) -> tuple[np.ndarray, str | None, list[str]]:
    """Parse .tbl text into (raw array, declared name, comment lines)."""
    name = None
    comments = []
    rows: list[list[int]] = []
    n = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comments.append(stripped)
            body = stripped[1:].strip()
            if body.startswith("name:"):
                name = body[len("name:"):].strip()
            continue
        if n is None:
            try:
                n = int(stripped)
            except ValueError:
                raise ConstructionError(f"line {lineno}: expected element count, got {stripped!r}")
            if n < 1:
                raise ConstructionError(f"line {lineno}: element count must be >= 1")
            continue
        parts = stripped.split()
        if len(parts) != n:
            raise ConstructionError(f"line {lineno}: expected {n} entries, got {len(parts)}")
        try:
            row = [int(p) for p in parts]
        except ValueError:
            raise ConstructionError(f"line {lineno}: non-integer entry")
        for col, v in enumerate(row):
            if not 0 <= v < n:
                raise ConstructionError(f"line {lineno}: entry {v} at column {col} outside 0..{n - 1}")
        rows.append(row)
        if len(rows) == n:
            break
    if n is None:
        raise ConstructionError("no element count found")
    if len(rows) != n:
        raise ConstructionError(f"expected {n} rows, found {len(rows)}")
    return np.array(rows, dtype=np.int32), name, comments


def normalize_identity(arr: np.ndarray) -> tuple[np.ndarray, list[int] | None]:
    """Relabel so a two-sided identity, if present, sits at index 0.

    Returns (table, relabeling) where relabeling maps old index -> new index;
    relabeling is None when nothing was moved (identity already 0 or absent).
    """
    t = CayleyTable(arr)
    cls = classify(t)
    e = cls.identity_index
    if e is None or e == 0:
        return arr, None
    n = arr.shape[0]
    sigma = list(range(n))
    sigma[0], sigma[e] = e, 0  # transposition moving e to slot 0
    out = np.empty_like(arr)
    for x in range(n):
        for y in range(n):
            out[sigma[x], sigma[y]] = sigma[arr[x, y]]
    return out, sigma


def import_table(path: str | Path) -> ImportResult:
    """Load a .tbl file, normalizing its identity to index 0."""
    text = Path(path).read_text()
    arr, name, comments = parse_tbl(text)
    norm, sigma = normalize_identity(arr)
    table = CayleyTable(norm, name=name or Path(path).stem)
    return ImportResult(table=table, relabeling=sigma, name=name, comments=comments)


def format_tbl(table: CayleyTable, extra_comments: list[str] | None = None) -> str:
    """Render a table as .tbl text with the standard headers."""
    lines = []
    if table.name:
        lines.append(f"# name: {table.name}")
    for c in extra_comments or []:
        lines.append(f"# {c}")
    lines.append(str(table.n))
    for row in table.table:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def export_table(table: CayleyTable, path: str | Path,
                 extra_comments: list[str] | None = None) -> None:
    """Write a table to a .tbl file (identity-normalized form expected)."""
    arr, sigma = normalize_identity(np.asarray(table.table))
    if sigma is not None:
        table = CayleyTable(arr, name=table.name)
    Path(path).write_text(format_tbl(table, extra_comments))
