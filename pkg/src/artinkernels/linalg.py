"""Small exact linear algebra toolkit over the scalar fields.

Matrices are plain lists of rows (dense) or lists of sparse columns
(dicts row index -> value).  Everything is exact; no pivoting heuristics
beyond "first nonzero" are needed at this scale.

:class:`BottomEchelon` maintains a column-space basis in bottom-echelon
form: each stored vector has a distinct bottom-most nonzero row, and
those lead rows never move once created.  Feeding columns left to right
therefore yields, for every prefix of columns and every row cut r, the
rank of the submatrix on rows >= r -- the "staircase ranks" that drive
the filtered-complex page dimension formulas.
"""

from __future__ import annotations

from .scalars import Field


def rank(field: Field, rows: list[list]) -> int:
    """Rank by Gaussian elimination; `rows` is consumed as a scratch copy."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for j in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][j]):
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][j])
        prow = m[r]
        for i in range(r + 1, len(m)):
            c = m[i][j]
            if field.is_zero(c):
                continue
            factor = field.mul(c, inv)
            row = m[i]
            for jj in range(j, ncols):
                row[jj] = field.sub(row[jj], field.mul(factor, prow[jj]))
        r += 1
        if r == len(m):
            break
    return r


def matmul(field: Field, a: list[list], b: list[list]) -> list[list]:
    if not a or not b:
        return []
    n, k, m = len(a), len(b), len(b[0])
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        for kk in range(k):
            c = a[i][kk]
            if field.is_zero(c):
                continue
            brow = b[kk]
            orow = out[i]
            for j in range(m):
                if not field.is_zero(brow[j]):
                    orow[j] = field.add(orow[j], field.mul(c, brow[j]))
    return out


class BottomEchelon:
    """Incremental column-space basis keyed by bottom-most nonzero row."""

    def __init__(self, field: Field):
        self.field = field
        self.basis: dict[int, dict[int, object]] = {}

    def insert(self, vec: dict[int, object]) -> int | None:
        """Reduce vec against the basis; returns the new lead row or None."""
        f = self.field
        vec = {r: c for r, c in vec.items() if not f.is_zero(c)}
        while vec:
            lead = max(vec)
            other = self.basis.get(lead)
            if other is None:
                self.basis[lead] = vec
                return lead
            factor = f.div(vec[lead], other[lead])
            for r, c in other.items():
                newc = f.sub(vec.get(r, f.zero), f.mul(factor, c))
                if f.is_zero(newc):
                    vec.pop(r, None)
                else:
                    vec[r] = newc
        return None

    @property
    def rank(self) -> int:
        return len(self.basis)


def staircase_leads(field: Field, columns: list[dict[int, object]],
                    snapshot_after: list[int]) -> list[list[int]]:
    """Feed columns in order; after the first `n` columns for each n in
    `snapshot_after` (nondecreasing), record the sorted list of lead rows.

    rank of (rows >= r, first n columns) = #leads in that snapshot >= r.
    """
    ech = BottomEchelon(field)
    leads: list[int] = []
    snaps: list[list[int]] = []
    want = list(snapshot_after)
    done = 0
    wi = 0
    while wi < len(want) and want[wi] == 0:
        snaps.append([])
        wi += 1
    for col in columns:
        lead = ech.insert(dict(col))
        if lead is not None:
            leads.append(lead)
        done += 1
        while wi < len(want) and want[wi] == done:
            snaps.append(sorted(leads))
            wi += 1
    while wi < len(want):
        snaps.append(sorted(leads))
        wi += 1
    return snaps
