"""Multiplicity filtration, page dimensions and torsion multiplicities.

Fix a cyclotomic order d from the torsion support (characteristic zero,
non-resonant character).  The weight of a simplex X is

    w(X) = mult_d(p_X q_X),

the multiplicity of Phi_d in its weight polynomial.  Weights are monotone
along faces, so "weight <= p" filters the flag complex.  Working over the
residue field K_d = Q[z]/(Phi_d), each facet coefficient of the twisted
boundary factors as (leading unit) * Phi_d^(weight drop); the associated
graded differential keeps the unit and records the drop in the filtration.
The spectral sequence of that filtered complex has page dimensions

    h^s_(p,q) = dim Z^s_(p,q) - dim Z^(s-1)_(p-1,q+1)
              - dim Z^(s-1)_(p+s-1,q-s+2) + dim Z^s_(p+s-1,q-s+2),

with Z^s_(p,q) = F_p C_(p+q) fed through the boundary into F_(p-s); all
of these reduce to ranks of staircase submatrices of the boundary with
rows/columns sorted by weight, which one bottom-echelon sweep per chain
degree provides.

The number n_(k,j) of torsion summands K[t^{+-1}]/(Phi_d^j) in the
degree-k homology then satisfies, with r_q the reduced flag homology,

    sum over j >= s of n_(k,j) = sum over q <= k of (-1)^(k-q) (h^s_q - r_q),

and Jordan blocks are bounded by j <= k+2, so differencing consecutive
pages determines every n_(k,j).

An independent route to the degree-0 torsion enumerates rooted spanning
forests: the gcd of the forest weight polynomials with s trees is the
s-th Fitting ideal of the degree-1 boundary, and successive quotients are
its invariant factors.
"""

from __future__ import annotations

import bisect
import math
import os
from dataclasses import dataclass, field

from .flag import FlagComplex
from .graphs import Character, connected_components, resonance_sets
from .laurent import (LaurentPoly, cyclotomic_field, cyclotomic_int,
                      factor_invariant, laurent_gcd, normalize_unit, q_poly,
                      residue_eval)
from .linalg import staircase_leads
from .scalars import FieldSpec
from .twisted import twisted_boundary

QQ = FieldSpec()


class ResonantCharacterError(ValueError):
    pass


class DisconnectedGraphError(ValueError):
    pass


class NegativeMultiplicityError(ValueError):
    pass


class ForestBudgetError(RuntimeError):
    pass


FOREST_BUDGET_ENV = "ARTINKERNELS_FOREST_BUDGET"
DEFAULT_FOREST_BUDGET = 200_000


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def vertex_weight(c: Character, v, d: int) -> int:
    return 1 if c.m(v) % d == 0 else 0


def edge_weight(g, c: Character, u, v, d: int) -> int:
    """mult_d of p_e q_e beyond the endpoint weights: the q-factor is 1
    exactly when d | lt(e) m_e but d does not divide m_e."""
    me = c.m_edge(u, v)
    q_mult = 1 if (g.ell_tilde(u, v) * me) % d == 0 and me % d != 0 else 0
    return q_mult


def simplex_weight(g, c: Character, X, d: int) -> int:
    w = sum(vertex_weight(c, v, d) for v in X)
    for i, u in enumerate(X):
        for v in X[i + 1:]:
            w += edge_weight(g, c, u, v, d)
    return w


@dataclass
class WeightedComplex:
    """The flag complex with weights, facet drops and leading units for one d."""

    fc: FlagComplex
    character: Character
    d: int
    field: object                     # CyclotomicField(d)
    weights: dict                     # simplex -> weight
    bases: dict                       # chain degree -> simplices sorted by (w, order)
    columns: dict                     # chain degree n -> sparse boundary columns
    facet_units: list                 # (face, simplex, drop, unit) audit trail
    max_weight: int


def weighted_complex(fc: FlagComplex, c: Character, d: int) -> WeightedComplex:
    if d < 2:
        raise ValueError("the multiplicity filtration needs d >= 2")
    g = fc.graph
    for v in g.vertices:
        if c.m(v) == 0:
            raise ResonantCharacterError("the multiplicity filtration needs a "
                                         "non-resonant character")
    kd = cyclotomic_field(d)
    qq = QQ.scalars()
    phi = LaurentPoly.from_int_coeffs(qq, dict(enumerate(cyclotomic_int(d))))

    weights = {s: simplex_weight(g, c, s, d) for s in fc.all_simplices()}
    bases = {}
    positions = {}
    for n in range(-1, fc.dim + 1):
        base = sorted(fc.simplices_of(n),
                      key=lambda s: (weights[s], tuple(g.index(v) for v in s)))
        bases[n] = base
        positions.update({s: i for i, s in enumerate(base)})

    columns = {}
    audit = []
    for n in range(-1, fc.dim + 1):
        tb = twisted_boundary(fc, c, QQ, n) if n >= 0 else None
        cols = []
        for X in bases[n]:
            col = {}
            if tb is not None:
                j = tb.cols.index(X)
                for i, Y in enumerate(tb.rows):
                    entry = tb.entries[i][j]
                    if entry.is_zero():
                        continue
                    drop = weights[X] - weights[Y]
                    assert drop >= 0, "weights must not increase along faces"
                    reduced = entry
                    for _ in range(drop):
                        reduced = reduced.exact_div(phi)
                    unit = residue_eval(reduced, d)
                    assert not kd.is_zero(unit), "leading unit vanished"
                    col[positions[Y]] = unit
                    audit.append((Y, X, drop, unit))
            cols.append(col)
        columns[n] = cols
    return WeightedComplex(fc, c, d, kd, weights, bases, columns, audit,
                           max(weights.values()))


# ---------------------------------------------------------------------------
# page dimensions
# ---------------------------------------------------------------------------

@dataclass
class PageTable:
    d: int
    s_max: int
    dims: dict                       # (s, p, q) -> dim, nonzero entries only
    stable: dict                     # (p, q) -> dim at the limit page
    max_weight: int
    top_degree: int

    def h(self, s: int, p: int, q: int) -> int:
        if s > self.s_max:
            return self.stable.get((p, q), 0)
        return self.dims.get((s, p, q), 0)

    def h_row(self, s: int, k: int) -> int:
        return sum(self.h(s, p, k - p) for p in range(0, self.max_weight + 1))

    def stable_row(self, k: int) -> int:
        return sum(self.stable.get((p, k - p), 0) for p in range(0, self.max_weight + 1))

    def nonzero(self) -> dict:
        return dict(sorted(self.dims.items()))


def page_dims(wc: WeightedComplex, s_max: int | None = None) -> PageTable:
    """Dimensions of every page position, by staircase ranks.

    Pages are computed through max(s_max, max_weight + 2); the last two
    agree entrywise (the sequence has degenerated), and that limit page is
    recorded as the stable one.
    """
    if s_max is None:
        s_max = wc.fc.dim + 3
    kd = wc.field
    wmax = wc.max_weight
    top = wc.fc.dim
    s_hi = max(s_max, wmax + 2)

    counts = {}     # n -> cumulative column counts per weight 0..wmax
    snaps = {}      # n -> per weight prefix, sorted lead row weights
    wlists = {}
    for n in range(-1, top + 1):
        ws = [wc.weights[s] for s in wc.bases[n]]
        wlists[n] = ws
        cum = []
        for p in range(wmax + 1):
            cum.append(sum(1 for w in ws if w <= p))
        counts[n] = cum
        row_ws = wlists.get(n - 1)
        lead_snaps = staircase_leads(kd, wc.columns[n], cum)
        if row_ws is None:
            row_ws = []
        snaps[n] = [sorted(row_ws[i] for i in leads) for leads in lead_snaps]

    def sub_rank(n: int, p: int, a: int) -> int:
        # rank of the boundary of degree n restricted to columns of weight
        # <= p and rows of weight > a
        if n < -1 or n > top or p < 0:
            return 0
        leads = snaps[n][min(p, wmax)]
        if a < 0:
            return len(leads)
        return len(leads) - bisect.bisect_right(leads, a)

    def z_dim(s: int, p: int, n: int) -> int:
        if p < 0 or n < -1 or n > top:
            return 0
        total = counts[n][min(p, wmax)]
        return total - sub_rank(n, p, p - s)

    dims = {}
    for n in range(-1, top + 1):
        for p in range(0, wmax + 1):
            q = n - p
            e0 = sum(1 for w in wlists[n] if w == p)
            if e0:
                dims[(0, p, q)] = e0
            for s in range(1, s_hi + 2):
                val = (z_dim(s, p, n) - z_dim(s - 1, p - 1, n)
                       - z_dim(s - 1, p + s - 1, n + 1) + z_dim(s, p + s - 1, n + 1))
                if val:
                    dims[(s, p, q)] = val

    stable = {}
    for (s, p, q), val in dims.items():
        if s == s_hi + 1:
            stable[(p, q)] = val
    for (p, q), val in list(stable.items()):
        if dims.get((s_hi, p, q), 0) != val:
            raise NegativeMultiplicityError(
                f"pages failed to stabilize at ({p},{q}) for d={wc.d}")
    for (s, p, q), val in list(dims.items()):
        if s == s_hi and dims.get((s_hi + 1, p, q), 0) != val:
            raise NegativeMultiplicityError(
                f"pages failed to stabilize at ({p},{q}) for d={wc.d}")
    dims = {k: v for k, v in dims.items() if k[0] <= s_hi}
    return PageTable(wc.d, s_hi, dims, stable, wmax, top)


# ---------------------------------------------------------------------------
# solving for the torsion multiplicities
# ---------------------------------------------------------------------------

def chi_rel(pt: PageTable, r_list, k: int, s: int) -> int:
    """Relative Euler characteristic of page s through row k."""
    total = 0
    for q in range(0, k + 1):
        r_q = r_list[q] if 0 <= q < len(r_list) else 0
        total += (-1) ** (k - q) * (pt.h_row(s, q) - r_q)
    return total


def solve_torsion(pt: PageTable, r_list, k_max: int | None = None) -> dict:
    """n_(k,j) for j = 1..k+2 from first differences of chi_rel across pages.

    Verifies that the stable page recovers the reduced flag homology, that
    chi_rel vanishes beyond the Jordan bound, and that every multiplicity
    is nonnegative.
    """
    if k_max is None:
        k_max = pt.top_degree
    for k in range(0, k_max + 1):
        r_k = r_list[k] if 0 <= k < len(r_list) else 0
        if pt.stable_row(k) != r_k:
            raise NegativeMultiplicityError(
                f"stable page row {k} is {pt.stable_row(k)}, expected r_{k}={r_k}")
    out = {}
    for k in range(0, k_max + 1):
        vals = [chi_rel(pt, r_list, k, s) for s in range(1, k + 4)]
        if vals[k + 2] != 0:
            raise NegativeMultiplicityError(
                f"chi_rel at page {k + 3} for k={k}, d={pt.d} is {vals[k + 2]}, "
                "violating the Jordan bound")
        ns = [vals[j - 1] - vals[j] for j in range(1, k + 2)] + [vals[k + 1]]
        if any(n < 0 for n in ns):
            raise NegativeMultiplicityError(
                f"negative multiplicity for k={k}, d={pt.d}: {ns}")
        out[k] = ns
    return out


@dataclass
class TorsionTable:
    """n_(k,j)(d) for all computed degrees and orders."""

    entries: dict = field(default_factory=dict)  # (k, d) -> tuple of n_(k,j)

    def put(self, k: int, d: int, ns) -> None:
        self.entries[(k, d)] = tuple(ns)

    def n(self, k: int, d: int, j: int) -> int:
        row = self.entries.get((k, d), ())
        return row[j - 1] if 1 <= j <= len(row) else 0

    def exponent_multiset(self, k: int, d: int) -> tuple:
        out = []
        for j, n in enumerate(self.entries.get((k, d), ()), start=1):
            out.extend([j] * n)
        return tuple(out)


def jordan_bound_check(tt: TorsionTable) -> bool:
    """True iff n_(k,j)(d) = 0 whenever j > k + 2."""
    for (k, _d), row in tt.entries.items():
        for j, n in enumerate(row, start=1):
            if j > k + 2 and n != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# rooted spanning forests: the independent degree-0 route
# ---------------------------------------------------------------------------

def _forest_contribution(g, c: Character, fspec: FieldSpec, chosen) -> LaurentPoly:
    """Weight polynomial of one spanning forest, already divided by the full
    vertex product and gcd-ed over root choices tree by tree."""
    field = fspec.scalars()
    comp = {v: v for v in g.vertices}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    deg = {v: 0 for v in g.vertices}
    for (u, v) in chosen:
        deg[u] += 1
        deg[v] += 1
        ru, rv = find(u), find(v)
        if ru != rv:
            comp[ru] = rv
    trees: dict = {}
    for v in g.vertices:
        trees.setdefault(find(v), []).append(v)

    total = LaurentPoly.one(field)
    for members in trees.values():
        if len(members) == 1:
            continue
        root_gcd = 0
        for v in members:
            root_gcd = math.gcd(root_gcd, abs(c.m(v)))
        piece = LaurentPoly.t_power(field, root_gcd) - LaurentPoly.one(field)
        # a tree vertex of degree 1 contributes exponent 0 after the division
        for v in members:
            if deg[v] > 1:
                vf = LaurentPoly.t_power(field, c.m(v)) - LaurentPoly.one(field)
                piece = piece * vf ** (deg[v] - 1)
        total = total * piece
    for (u, v) in chosen:
        total = total * q_poly(g.ell_tilde(u, v), c.m_edge(u, v), field)
    return total


def forest_fitting_h1(g, c: Character, fspec: FieldSpec,
                      budget: int | None = None) -> list:
    """Invariant factors of the degree-1 twisted boundary from rooted
    spanning forests; the nontrivial ones are the torsion of H_1.

    Returns the full chain d_1 | d_2 | ... (trivial factors included) so
    callers can compare against the Smith normal form directly.  The
    q-polynomial product is accumulated along the enumeration so each
    forest costs one polynomial product, not one per edge.
    """
    res = resonance_sets(g, c, fspec)
    if not res.is_K_nonresonant:
        raise ResonantCharacterError("forest Fitting ideals need a K non-resonant "
                                     "character")
    if len(connected_components(g)) != 1:
        raise DisconnectedGraphError("spanning forests need a connected graph")
    if budget is None:
        budget = int(os.environ.get(FOREST_BUDGET_ENV, DEFAULT_FOREST_BUDGET))
    field = fspec.scalars()
    n = len(g.vertices)
    verts = list(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    edges = g.edge_list
    edge_q = [q_poly(g.ell_tilde(u, v), c.m_edge(u, v), field) for (u, v) in edges]
    tm1 = [LaurentPoly.t_power(field, c.m(v)) - LaurentPoly.one(field) for v in verts]
    one = LaurentPoly.one(field)
    f_by_s = {s: None for s in range(1, n + 1)}
    count = 0

    def leaf(acc_q, deg, parent, size, mgcd):
        nonlocal count
        count += 1
        if count > budget:
            raise ForestBudgetError(f"more than {budget} spanning forests; "
                                    f"raise {FOREST_BUDGET_ENV} to proceed")
        s = n - sum(deg) // 2
        if f_by_s[s] == one:
            return
        small = one
        for i in range(n):
            if deg[i] > 1:
                small = small * tm1[i] ** (deg[i] - 1)
            if parent[i] == i and size[i] > 1:
                root_factor = LaurentPoly.t_power(field, mgcd[i]) - one
                small = small * root_factor
        contrib = normalize_unit(acc_q * small)
        prev = f_by_s[s]
        f_by_s[s] = contrib if prev is None else laurent_gcd(prev, contrib)

    def rec(i, acc_q, deg, parent, size, mgcd):
        if i == len(edges):
            leaf(acc_q, deg, parent, size, mgcd)
            return
        rec(i + 1, acc_q, deg, parent, size, mgcd)
        u, v = edges[i]
        ru, rv = _find(parent, index[u]), _find(parent, index[v])
        if ru == rv:
            return
        parent2, size2, mgcd2, deg2 = list(parent), list(size), list(mgcd), list(deg)
        parent2[ru] = rv
        size2[rv] += size2[ru]
        mgcd2[rv] = math.gcd(mgcd2[rv], mgcd2[ru])
        deg2[index[u]] += 1
        deg2[index[v]] += 1
        rec(i + 1, acc_q * edge_q[i], deg2, parent2, size2, mgcd2)

    rec(0, one, [0] * n, list(range(n)), [1] * n,
        [abs(c.m(v)) for v in verts])

    factors = []
    for s in range(n - 1, 0, -1):
        quotient = f_by_s[s].exact_div(f_by_s[s + 1])
        factors.append(normalize_unit(quotient))
    if fspec.char == 0:
        # p_e and q_e have simple roots in characteristic zero, so removing
        # a forest edge moves any multiplicity by at most 2 and Jordan
        # blocks of the degree-0 torsion have size at most 2; mod p the
        # roots can repeat (p | m_v or p | lt(e)) and larger blocks occur
        for fac in factors:
            for term in factor_invariant(fac, fspec):
                if term.exponent > 2:
                    raise NegativeMultiplicityError(
                        f"forest invariant factor {fac} has a cube factor; "
                        "degree-0 Jordan blocks are bounded by 2")
    return factors


def _find(parent: list, x: int) -> int:
    while parent[x] != x:
        x = parent[x]
    return x


# ---------------------------------------------------------------------------
# homology over truncated coefficients: an independent page oracle
# ---------------------------------------------------------------------------

def truncated_homology_dims(fc: FlagComplex, c: Character, d: int, s: int) -> dict:
    """dim over K_d of the homology with coefficients in K_d[tau]/(tau^s),
    the twisted boundary entries expanded as truncated series at a root of
    Phi_d.  Equals the partial sums h^1 + ... + h^s of the page rows, which
    is what the tests check.
    """
    kd = cyclotomic_field(d)
    from .linalg import rank as field_rank
    from .smith import taylor_block
    dims = {}
    big_rank = {}
    for n in range(0, fc.dim + 2):
        tb = twisted_boundary(fc, c, QQ, n)
        rows = taylor_block(tb, d, s)
        big_rank[n] = field_rank(kd, rows) if rows else 0
    for k in range(0, fc.dim + 1):
        dims[k] = s * len(fc.simplices_of(k)) - big_rank[k] - big_rank[k + 1]
    return dims
