"""Quasi-cyclic base matrices: parsing, expansion, and the edge index.

A QC parity-check matrix is described by a small grid of shift values.
Entry a >= 0 stands for the z-by-z identity cyclically shifted right by
a columns; -1 stands for the z-by-z zero block. The text format is

    n_rows n_cols z
    <n_cols shift values per row, n_rows rows>

with single-space separators and LF line endings.

The decoder does not walk the expanded matrix; it walks a compact edge
index that records, for every non-negative base entry, the shift value,
the row's slot after rearrangement into scheduling layers, and the base
column. Per-column degrees ride along for variable-side bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "BaseMatrix",
    "CodeDescriptor",
    "CompactIndex",
    "EdgeRecord",
    "MatrixFormatError",
    "build_compact_index",
    "descriptor",
    "expand",
    "load_base_matrix",
    "parse_base_matrix",
    "serialize_base_matrix",
]


class MatrixFormatError(ValueError):
    """Base-matrix text that violates the file format, with a line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True, eq=False)
class BaseMatrix:
    """Grid of circulant shift values plus the expansion factor z.

    Shifts are -1 (zero block) or in [0, z-1]. Every row must have at
    least one non-negative entry, and the grid may not be taller than it
    is wide. Instances are immutable and safe to share across threads.
    """

    n_rows: int
    n_cols: int
    z: int
    shifts: np.ndarray

    def __post_init__(self):
        shifts = np.asarray(self.shifts, dtype=np.int64)
        if self.n_rows < 1:
            raise ValueError("need at least one base row")
        if self.n_cols < self.n_rows:
            raise ValueError("more base rows than columns")
        if self.z < 1:
            raise ValueError("expansion factor must be positive")
        if shifts.shape != (self.n_rows, self.n_cols):
            raise ValueError(
                f"shift grid shape {shifts.shape} does not match "
                f"{self.n_rows}x{self.n_cols}"
            )
        if ((shifts < -1) | (shifts >= self.z)).any():
            raise ValueError(f"shift out of range: values must be -1 or in [0, {self.z - 1}]")
        if (shifts == -1).all(axis=1).any():
            raise ValueError("empty check row: a base row has no non-negative entry")
        shifts.setflags(write=False)
        object.__setattr__(self, "shifts", shifts)

    def __eq__(self, other):
        if not isinstance(other, BaseMatrix):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self.z == other.z
            and np.array_equal(self.shifts, other.shifts)
        )

    def row_support(self, i):
        """Column indices of the non-negative entries of base row i."""
        return np.flatnonzero(self.shifts[i] >= 0)

    @property
    def total_edges(self):
        """Number of non-negative entries in the grid."""
        return int((self.shifts >= 0).sum())


@dataclass(frozen=True)
class EdgeRecord:
    """One non-negative base entry: shift, rearranged row slot, base column."""

    shift: int
    layer_slot: int
    base_col: int


@dataclass(frozen=True, eq=False)
class CompactIndex:
    """Edge records grouped by scheduling layer, then by row within the layer.

    `slot_rows` maps each rearranged slot back to its original base row
    (the concatenation of the schedule's layers), and `slot_offsets`
    delimits each slot's run inside `edges`. `z` is carried so messages
    can be laid out without re-consulting the base matrix.
    """

    edges: tuple
    col_degrees: np.ndarray
    total_edges: int
    z: int
    slot_rows: tuple
    slot_offsets: tuple

    def __post_init__(self):
        degrees = np.asarray(self.col_degrees, dtype=np.int64)
        degrees.setflags(write=False)
        object.__setattr__(self, "col_degrees", degrees)

    @property
    def n_cols(self):
        return len(self.col_degrees)

    @property
    def expanded_edges(self):
        return self.total_edges * self.z


@dataclass(frozen=True)
class CodeDescriptor:
    """Derived sizes of the expanded code."""

    block_length: int
    n_checks: int
    rate: float
    total_expanded_edges: int


def parse_base_matrix(text):
    """Parse base-matrix text into a validated BaseMatrix.

    Raises MatrixFormatError naming the offending line for a malformed
    header, wrong row or column counts, out-of-range shifts, or a row
    with no non-negative entry.
    """
    lines = text.split("\n")
    # tolerate a final newline; anything else trailing is an error below
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MatrixFormatError("malformed header: empty input", line=1)

    header = lines[0].split(" ")
    if len(header) != 3:
        raise MatrixFormatError(
            f"malformed header: expected 'n_rows n_cols z', got {lines[0]!r}", line=1
        )
    try:
        n_rows, n_cols, z = (int(tok) for tok in header)
    except ValueError:
        raise MatrixFormatError(
            f"malformed header: non-integer field in {lines[0]!r}", line=1
        ) from None
    if n_rows < 1 or n_cols < 1 or z < 1:
        raise MatrixFormatError("malformed header: all header fields must be positive", line=1)
    if n_cols < n_rows:
        raise MatrixFormatError(
            f"malformed header: {n_rows} rows exceed {n_cols} columns", line=1
        )

    if len(lines) - 1 != n_rows:
        raise MatrixFormatError(
            f"expected {n_rows} matrix rows, found {len(lines) - 1}", line=len(lines)
        )

    shifts = np.empty((n_rows, n_cols), dtype=np.int64)
    for i in range(n_rows):
        lineno = i + 2
        tokens = lines[i + 1].split(" ")
        if len(tokens) != n_cols:
            raise MatrixFormatError(
                f"expected {n_cols} columns, found {len(tokens)}", line=lineno
            )
        try:
            row = [int(tok) for tok in tokens]
        except ValueError:
            raise MatrixFormatError(
                f"non-integer shift value in {lines[i + 1]!r}", line=lineno
            ) from None
        for value in row:
            if value < -1 or value >= z:
                raise MatrixFormatError(
                    f"shift out of range: {value} not -1 or in [0, {z - 1}]", line=lineno
                )
        if all(value == -1 for value in row):
            raise MatrixFormatError("empty check row", line=lineno)
        shifts[i] = row

    return BaseMatrix(n_rows=n_rows, n_cols=n_cols, z=z, shifts=shifts)


def serialize_base_matrix(base):
    """Canonical text form: LF endings, single spaces, trailing newline."""
    out = [f"{base.n_rows} {base.n_cols} {base.z}"]
    for i in range(base.n_rows):
        out.append(" ".join(str(int(v)) for v in base.shifts[i]))
    return "\n".join(out) + "\n"


def load_base_matrix(path):
    """Read and parse a base-matrix file."""
    return parse_base_matrix(Path(path).read_text())


def expand(base):
    """Row adjacency of the expanded parity-check matrix.

    Returns one sorted array of variable indices per expanded check.
    Check i*z + k (base row i, offset k) is adjacent to variable
    c*z + ((k + shift(i, c)) mod z) for every non-negative column c.
    """
    z = base.z
    offsets = np.arange(z)
    rows = []
    for i in range(base.n_rows):
        cols = base.row_support(i)
        shifts = base.shifts[i, cols]
        idx = cols[None, :] * z + (offsets[:, None] + shifts[None, :]) % z
        idx = np.sort(idx, axis=1)
        rows.extend(idx)
    return rows


def build_compact_index(base, schedule):
    """Flatten the base matrix into edge records ordered by the schedule.

    The schedule must partition the base rows; its concatenated layers
    define the rearranged row order, and each row's edges (in ascending
    base-column order) occupy one contiguous slot run.
    """
    if not schedule.layers:
        raise ValueError("schedule has no layers")
    flat = [r for layer in schedule.layers for r in layer]
    if any(r < 0 or r >= base.n_rows for r in flat):
        raise ValueError("schedule row index out of range")
    if sorted(flat) != list(range(base.n_rows)):
        raise ValueError("schedule is not a partition of the base rows")

    edges = []
    slot_offsets = [0]
    for slot, row in enumerate(flat):
        for c in base.row_support(row):
            edges.append(EdgeRecord(shift=int(base.shifts[row, c]), layer_slot=slot, base_col=int(c)))
        slot_offsets.append(len(edges))

    col_degrees = (base.shifts >= 0).sum(axis=0)
    return CompactIndex(
        edges=tuple(edges),
        col_degrees=col_degrees,
        total_edges=len(edges),
        z=base.z,
        slot_rows=tuple(flat),
        slot_offsets=tuple(slot_offsets),
    )


def descriptor(base):
    """Block length, check count, rate, and expanded edge count.

    Raises ValueError when the rate is not strictly positive (square
    grids parse fine for scheduling experiments but describe no code).
    """
    if base.n_cols == base.n_rows:
        raise ValueError("code rate is zero: as many base rows as columns")
    return CodeDescriptor(
        block_length=base.n_cols * base.z,
        n_checks=base.n_rows * base.z,
        rate=(base.n_cols - base.n_rows) / base.n_cols,
        total_expanded_edges=base.total_edges * base.z,
    )
