"""Dense matrices over a semiring carrier, plus the canonical vectors.

Storage is a row-major tuple; matrices are immutable after construction and
safe to share.  Indexing in code is 0-based; the 1-based convention of the
surface language appears only in file formats and `canonical_vector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import IndexOutOfRange, ShapeMismatch
from .semiring import Semiring


@dataclass(frozen=True, eq=False)
class KMatrix:
    rows: int
    cols: int
    entries: tuple[Any, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{self.rows} x {self.cols} matrix needs "
                f"{self.rows * self.cols} entries, got {len(self.entries)}")

    @property
    def shape(self):
        return (self.rows, self.cols)

    def get(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __repr__(self):
        return f"KMatrix({self.rows}x{self.cols}, {self.tolists()!r})"


def from_rows(rows) -> KMatrix:
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != ncols:
            raise ShapeMismatch("ragged rows")
    flat = tuple(v for r in rows for v in r)
    return KMatrix(len(rows), ncols, flat)


def scalar(value) -> KMatrix:
    return KMatrix(1, 1, (value,))


def zeros(rows, cols, sr: Semiring) -> KMatrix:
    return KMatrix(rows, cols, (sr.zero,) * (rows * cols))


def identity(n, sr: Semiring) -> KMatrix:
    ent = [sr.zero] * (n * n)
    for i in range(n):
        ent[i * n + i] = sr.one
    return KMatrix(n, n, tuple(ent))


def canonical_vector(i: int, n: int, sr: Semiring) -> KMatrix:
    """The n x 1 basis column with `one` in (1-based) position i."""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"canonical vector index {i} out of 1..{n}")
    ent = [sr.zero] * n
    ent[i - 1] = sr.one
    return KMatrix(n, 1, tuple(ent))


def mat_add(a: KMatrix, b: KMatrix, sr: Semiring) -> KMatrix:
    if a.shape != b.shape:
        raise ShapeMismatch(f"cannot add {a.shape} and {b.shape}")
    plus = sr.plus
    return KMatrix(a.rows, a.cols,
                   tuple(plus(x, y) for x, y in zip(a.entries, b.entries)))


def mat_mul(a: KMatrix, b: KMatrix, sr: Semiring) -> KMatrix:
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    plus, times, zero = sr.plus, sr.times, sr.zero
    n, m, k = a.rows, b.cols, a.cols
    ae, be = a.entries, b.entries
    out = []
    for i in range(n):
        arow = ae[i * k:(i + 1) * k]
        for j in range(m):
            acc = zero
            for t in range(k):
                acc = plus(acc, times(arow[t], be[t * m + j]))
            out.append(acc)
    return KMatrix(n, m, tuple(out))


def mat_transpose(a: KMatrix) -> KMatrix:
    return KMatrix(a.cols, a.rows,
                   tuple(a.entries[i * a.cols + j]
                         for j in range(a.cols) for i in range(a.rows)))


def mat_scale(s, a: KMatrix, sr: Semiring) -> KMatrix:
    times = sr.times
    return KMatrix(a.rows, a.cols, tuple(times(s, x) for x in a.entries))


def mat_map(fn, mats: list[KMatrix]) -> KMatrix:
    """Apply an entrywise function across equally shaped matrices."""
    first = mats[0]
    for m in mats[1:]:
        if m.shape != first.shape:
            raise ShapeMismatch("pointwise application needs equal shapes")
    cols = zip(*(m.entries for m in mats))
    return KMatrix(first.rows, first.cols, tuple(fn(*vals) for vals in cols))


def mat_equal(a: KMatrix, b: KMatrix, sr: Semiring, tol: float = 0.0) -> bool:
    """Shape and entrywise equality; `tol` only matters over the reals."""
    if a.shape != b.shape:
        return False
    return all(sr.eq(x, y, tol) for x, y in zip(a.entries, b.entries))


def format_matrix(a: KMatrix, sr: Semiring) -> str:
    """Dims header then whitespace-separated rows, one per line."""
    lines = [f"{a.rows} x {a.cols}"]
    for i in range(a.rows):
        lines.append(" ".join(sr.fmt(v) for v in a.row(i)))
    return "\n".join(lines)
