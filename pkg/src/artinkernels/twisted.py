"""Twisted boundary matrices of the equivariant chain complex.

With respect to the basis of flag simplices, the boundary of sigma_X in
chain degree k sends it to

    sum over v in X of  <X_v|X> * (t^{m_v} - 1) * prod_{w in X_v} q_{lt(v,w)}(t^{m_v+m_w})

where X_v drops the vertex v and q_k(x) = 1 + x + ... + x^{k-1}.  The
homology of this complex of free K[t^{+-1}]-modules in degree k is the
(k+1)-st homology of the kernel subgroup, so degree 0 carries H_1.

The weight polynomials of a simplex X,

    p_X = prod over non-resonant vertices of (t^{m_v} - 1),
    q_X = prod over non-resonant edges of q_{lt(e)}(t^{m_e}),

are never zero and control both the minors (every minor of the twisted
matrix is the matching untwisted minor times p_X q_X ratios) and the
multiplicity filtration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .flag import FlagComplex
from .graphs import Character, resonance_sets
from .laurent import LaurentPoly, q_poly
from .scalars import Field, FieldSpec


@dataclass
class PolyMatrix:
    """Dense matrix of Laurent polynomials with simplex-labeled axes."""

    rows: list
    cols: list
    entries: list
    field: Field
    k: int = 0

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def compose(self, other: "PolyMatrix") -> "PolyMatrix":
        """Matrix product self @ other (boundary-of-boundary checks)."""
        assert len(self.cols) == len(other.rows)
        zero = LaurentPoly.zero(self.field)
        out = [[zero for _ in other.cols] for _ in self.rows]
        for i in range(len(self.rows)):
            for kk in range(len(self.cols)):
                e = self.entries[i][kk]
                if e.is_zero():
                    continue
                for j in range(len(other.cols)):
                    o = other.entries[kk][j]
                    if not o.is_zero():
                        out[i][j] = out[i][j] + e * o
        return PolyMatrix(self.rows, other.cols, out, self.field, self.k)

    def evaluate(self, x, field: Field | None = None) -> list[list]:
        f = field if field is not None else self.field
        return [[e.evaluate(x, f) for e in row] for row in self.entries]

    def submatrix(self, row_simplices, col_simplices) -> "PolyMatrix":
        ri = [self.rows.index(tuple(r)) for r in row_simplices]
        ci = [self.cols.index(tuple(c)) for c in col_simplices]
        ent = [[self.entries[i][j] for j in ci] for i in ri]
        return PolyMatrix([self.rows[i] for i in ri], [self.cols[j] for j in ci],
                          ent, self.field, self.k)

    def det(self) -> LaurentPoly:
        n = len(self.rows)
        assert n == len(self.cols), "determinant of a non-square matrix"
        if n == 0:
            return LaurentPoly.one(self.field)
        return _det_cofactor(self.field, self.entries, list(range(n)), list(range(n)))

    def dump(self) -> str:
        """Deterministic text dump for debugging and matrix dumps."""
        lines = [f"degree {self.k}: {len(self.rows)} x {len(self.cols)}"]
        for i, r in enumerate(self.rows):
            for j, c in enumerate(self.cols):
                e = self.entries[i][j]
                if not e.is_zero():
                    lines.append(f"  [{'.'.join(map(str, r)) or 'empty'} | "
                                 f"{'.'.join(map(str, c))}] = {e}")
        return "\n".join(lines)


def _det_cofactor(field, entries, rows, cols) -> LaurentPoly:
    if len(rows) == 1:
        return entries[rows[0]][cols[0]]
    acc = LaurentPoly.zero(field)
    top = rows[0]
    rest = rows[1:]
    for idx, j in enumerate(cols):
        e = entries[top][j]
        if e.is_zero():
            continue
        minor_det = _det_cofactor(field, entries, rest, cols[:idx] + cols[idx + 1:])
        term = e * minor_det
        acc = acc + term if idx % 2 == 0 else acc - term
    return acc


def _vertex_factor(c: Character, v, field) -> LaurentPoly:
    return LaurentPoly.t_power(field, c.m(v)) - LaurentPoly.one(field)


def _edge_factor(g, c: Character, u, v, field) -> LaurentPoly:
    return q_poly(g.ell_tilde(u, v), c.m_edge(u, v), field)


def twisted_boundary(fc: FlagComplex, c: Character, fspec: FieldSpec, k: int) -> PolyMatrix:
    """The matrix of the equivariant boundary in chain degree k.

    Columns are the k-simplices, rows the (k-1)-simplices; degree 0 is the
    augmentation column map sigma_v -> (t^{m_v} - 1) sigma_empty.
    """
    field = fspec.scalars()
    g = fc.graph
    rows = fc.simplices_of(k - 1)
    cols = fc.simplices_of(k)
    zero = LaurentPoly.zero(field)
    entries = [[zero for _ in cols] for _ in rows]
    for j, simplex in enumerate(cols):
        for i, v in enumerate(simplex):
            face = simplex[:i] + simplex[i + 1:]
            coeff = _vertex_factor(c, v, field)
            for w in face:
                coeff = coeff * _edge_factor(g, c, v, w, field)
            if i % 2 == 1:
                coeff = -coeff
            entries[fc.position(face)][j] = coeff
    return PolyMatrix(rows, cols, entries, field, k)


@dataclass(frozen=True)
class SimplexWeights:
    p: LaurentPoly
    q: LaurentPoly


def simplex_weights(fc: FlagComplex, c: Character, fspec: FieldSpec, X) -> SimplexWeights:
    """p_X and q_X; resonant vertices and edges are excluded, so p_X q_X != 0."""
    field = fspec.scalars()
    g = fc.graph
    X = g.sort_vertices(X)
    assert X in fc, f"{X} is not a simplex of the complex"
    res = resonance_sets(g, c, fspec)
    p = LaurentPoly.one(field)
    for v in X:
        if v not in res.resonant_vertices:
            p = p * _vertex_factor(c, v, field)
    q = LaurentPoly.one(field)
    for i, u in enumerate(X):
        for v in X[i + 1:]:
            if (u, v) not in res.resonant_edges:
                q = q * _edge_factor(g, c, u, v, field)
    return SimplexWeights(p, q)


def list_weights(fc: FlagComplex, c: Character, fspec: FieldSpec, simplices) -> SimplexWeights:
    """Products p_{Xbar}, q_{Xbar} over a list of simplices."""
    field = fspec.scalars()
    p = LaurentPoly.one(field)
    q = LaurentPoly.one(field)
    for X in simplices:
        w = simplex_weights(fc, c, fspec, X)
        p = p * w.p
        q = q * w.q
    return SimplexWeights(p, q)


def minor(fc: FlagComplex, c: Character, fspec: FieldSpec, k: int,
          xbar, ybar) -> LaurentPoly:
    """Determinant of the square submatrix of the degree-k twisted boundary
    on columns xbar (k-simplices) and rows ybar ((k-1)-simplices)."""
    xbar = [fc.graph.sort_vertices(x) for x in xbar]
    ybar = [fc.graph.sort_vertices(y) for y in ybar]
    if len(xbar) != len(ybar):
        raise ValueError("minor needs equally many rows and columns")
    m = twisted_boundary(fc, c, fspec, k)
    return m.submatrix(ybar, xbar).det()
