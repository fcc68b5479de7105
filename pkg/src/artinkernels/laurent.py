"""Exact arithmetic in K[t^{+-1}], cyclotomic polynomials and residue fields.

Conventions used throughout:

* A :class:`LaurentPoly` is a finite map exponent -> nonzero coefficient;
  exponents may be negative.  Equality is coefficient-map equality.
* Units of K[t^{+-1}] are the monomials c*t^a with c != 0.  Invariant
  factors and gcds are therefore only meaningful "up to unit";
  :func:`normalize_unit` picks the canonical representative: monic with
  nonzero constant term.
* Dense polynomials (plain coefficient lists over a field, ascending
  exponents, trimmed, ``[]`` meaning zero) are the workhorse format for
  division, gcd and factorization.  The ``dense_*`` helpers operate on
  those and are shared with the Smith normal form code.
* ``Phi_d`` denotes the d-th cyclotomic polynomial.  Over Q it is the
  standard irreducible one; over GF(p) it means the mod-p reduction,
  which may be reducible.
* ``mult_d(f)`` is the largest m with Phi_d^m | f (characteristic zero).
* :class:`CyclotomicField` is K_d = Q[z]/(Phi_d), used as an honest
  coefficient field for the multiplicity spectral sequence.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .scalars import Field, FieldSpec, Rationals


class ZeroPolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient lists over a scalar field)
# ---------------------------------------------------------------------------

def dense_trim(field: Field, cs: list) -> list:
    while cs and field.is_zero(cs[-1]):
        cs.pop()
    return cs


def dense_add(field: Field, a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return dense_trim(field, out)


def dense_neg(field: Field, a: list) -> list:
    return [field.neg(c) for c in a]


def dense_sub(field: Field, a: list, b: list) -> list:
    return dense_add(field, a, dense_neg(field, b))

def dense_scale(field: Field, a: list, c) -> list:
    if field.is_zero(c):
        return []
    return [field.mul(x, c) for x in a]


def dense_mul(field: Field, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            if not field.is_zero(y):
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return dense_trim(field, out)


def dense_divmod(field: Field, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = field.inv(b[-1])
    db = len(b) - 1
    while len(r) >= len(b):
        c = field.mul(r[-1], inv_lead)
        shift = len(r) - len(b)
        q[shift] = c
        for i in range(db):
            r[shift + i] = field.sub(r[shift + i], field.mul(c, b[i]))
        r.pop()
        dense_trim(field, r)
    return dense_trim(field, q), r


def dense_monic(field: Field, a: list) -> list:
    if not a:
        return []
    lead = a[-1]
    if lead == field.one:
        return list(a)
    inv = field.inv(lead)
    return [field.mul(c, inv) for c in a]


def dense_content_scale(cs: list) -> list:
    """Rescale rational coefficients to primitive integers (gcd 1).

    Keeping remainders primitive (a primitive remainder sequence) is what
    stops the coefficient explosion of the naive Euclidean algorithm.
    """
    num = 0
    den = 1
    for c in cs:
        num = math.gcd(num, c.numerator)
        den = den * c.denominator // math.gcd(den, c.denominator)
    if num == 0:
        return list(cs)
    scale = Fraction(den, num)
    return [c * scale for c in cs]


def dense_gcd(field: Field, a: list, b: list) -> list:
    """Monic gcd via the Euclidean algorithm (primitive remainders over Q)."""
    a, b = list(a), list(b)
    primitive = field.char == 0 and (not a or isinstance(a[0], Fraction))
    while b:
        r = dense_divmod(field, a, b)[1]
        if primitive and r:
            r = dense_content_scale(r)
        a, b = b, r
    return dense_monic(field, a)


def dense_pow(field: Field, a: list, n: int) -> list:
    out = [field.one]
    base = list(a)
    while n:
        if n & 1:
            out = dense_mul(field, out, base)
        n >>= 1
        if n:
            base = dense_mul(field, base, base)
    return out


def dense_powmod(field: Field, a: list, n: int, mod: list) -> list:
    out = [field.one]
    base = dense_divmod(field, a, mod)[1]
    while n:
        if n & 1:
            out = dense_divmod(field, dense_mul(field, out, base), mod)[1]
        n >>= 1
        if n:
            base = dense_divmod(field, dense_mul(field, base, base), mod)[1]
    return out


def dense_eval(field: Field, a: list, x):
    acc = field.zero
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def dense_deriv(field: Field, a: list) -> list:
    return dense_trim(field, [field.mul(c, field.from_int(i)) for i, c in enumerate(a)][1:])


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentPoly:
    """An element of K[t^{+-1}] in canonical form (no zero coefficients)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: dict | None = None):
        self.field = field
        cleaned = {}
        if coeffs:
            for e, c in coeffs.items():
                if not field.is_zero(c):
                    cleaned[e] = c
        self.coeffs = cleaned

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def one(cls, field):
        return cls(field, {0: field.one})

    @classmethod
    def const(cls, field, value):
        return cls(field, {0: value})

    @classmethod
    def from_int(cls, field, n: int):
        return cls(field, {0: field.from_int(n)})

    @classmethod
    def t_power(cls, field, e: int):
        return cls(field, {e: field.one})

    @classmethod
    def from_int_coeffs(cls, field, coeffs: dict[int, int]):
        return cls(field, {e: field.from_int(c) for e, c in coeffs.items()})

    # -- structure ----------------------------------------------------
    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no valuation")
        return min(self.coeffs)

    def degree(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return max(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.coeffs.items())))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        f = self.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = f.add(out.get(e, f.zero), c)
        return LaurentPoly(f, out)

    def __neg__(self):
        f = self.field
        return LaurentPoly(f, {e: f.neg(c) for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                prod = f.mul(c1, c2)
                if e in out:
                    out[e] = f.add(out[e], prod)
                else:
                    out[e] = prod
        return LaurentPoly(f, out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only for monomials; use shift")
        out = LaurentPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def scale(self, c):
        f = self.field
        return LaurentPoly(f, {e: f.mul(v, c) for e, v in self.coeffs.items()})

    def shift(self, e: int):
        """Multiply by the unit t^e."""
        return LaurentPoly(self.field, {k + e: v for k, v in self.coeffs.items()})

    def evaluate(self, x, field: Field | None = None):
        """Evaluate at an invertible element x (negative exponents use inv)."""
        f = field if field is not None else self.field
        acc = f.zero
        xinv = None
        for e, c in self.coeffs.items():
            if e >= 0:
                p = x
                term = c
                k = e
            else:
                if xinv is None:
                    xinv = f.inv(x)
                p = xinv
                term = c
                k = -e
            for _ in range(k):
                term = f.mul(term, p)
            acc = f.add(acc, term)
        return acc

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient self/other; raises if the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero(self.field)
        a, va = self.dense()
        b, vb = other.dense()
        q, r = dense_divmod(self.field, a, b)
        if r:
            raise ValueError("division is not exact")
        return laurent_from_dense(self.field, q, va - vb)

    def dense(self) -> tuple[list, int]:
        """Return (coefficient list, valuation); zero gives ([], 0)."""
        if not self.coeffs:
            return [], 0
        v = self.valuation()
        d = self.degree()
        out = [self.field.zero] * (d - v + 1)
        for e, c in self.coeffs.items():
            out[e - v] = c
        return out, v

    # -- display --------------------------------------------------------
    def __str__(self):
        # ascending powers, `t^k` syntax, exact coefficients
        if not self.coeffs:
            return "0"
        f = self.field
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                body = f.to_str(c)
            else:
                tpart = "t" if e == 1 else f"t^{e}"
                if c == f.one:
                    body = tpart
                elif c == f.neg(f.one):
                    body = "-" + tpart
                else:
                    body = f"{f.to_str(c)}*{tpart}"
            parts.append(body)
        text = parts[0]
        for body in parts[1:]:
            if body.startswith("-"):
                text += " - " + body[1:]
            else:
                text += " + " + body
        return text

    def __repr__(self):
        return f"LaurentPoly({self})"


def laurent_from_dense(field: Field, cs: list, val: int = 0) -> LaurentPoly:
    return LaurentPoly(field, {val + i: c for i, c in enumerate(cs)})


def q_poly(k: int, m: int, field: Field) -> LaurentPoly:
    """q_k(t^m) = 1 + t^m + ... + t^{(k-1)m}; equals k when m = 0."""
    if k < 1:
        raise ValueError("q_k requires k >= 1")
    f = field
    out = {}
    for i in range(k):
        e = i * m
        out[e] = f.add(out.get(e, f.zero), f.one)
    return LaurentPoly(f, out)


def normalize_unit(f: LaurentPoly) -> LaurentPoly:
    """Canonical associate: monic polynomial in K[t] with nonzero constant term."""
    if f.is_zero():
        raise ZeroPolynomialError("cannot unit-normalize 0")
    cs, _ = f.dense()
    return laurent_from_dense(f.field, dense_monic(f.field, cs))


def laurent_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """gcd in K[t^{+-1}], reported unit-normalized; gcd(0, b) = ~b."""
    if a.is_zero() and b.is_zero():
        return LaurentPoly.zero(a.field)
    if a.is_zero():
        return normalize_unit(b)
    if b.is_zero():
        return normalize_unit(a)
    da, _ = a.dense()
    db, _ = b.dense()
    return laurent_from_dense(a.field, dense_gcd(a.field, da, db))


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

def _int_divmod_poly(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    # exact integer division by a monic divisor
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(r) >= len(b):
        c = r[-1]
        shift = len(r) - len(b)
        q[shift] = c
        for i in range(len(b) - 1):
            r[shift + i] -= c * b[i]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return q, r


@functools.lru_cache(maxsize=None)
def cyclotomic_int(d: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_d, ascending."""
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = [0] * (d + 1)
    num[0], num[d] = -1, 1
    for dd in range(1, d):
        if d % dd == 0:
            num, rem = _int_divmod_poly(num, list(cyclotomic_int(dd)))
            assert not rem
    return tuple(num)


@functools.lru_cache(maxsize=None)
def totient(d: int) -> int:
    count = 0
    for k in range(1, d + 1):
        a, b = k, d
        while b:
            a, b = b, a % b
        if a == 1:
            count += 1
    return count


@dataclass(frozen=True)
class CyclotomicFactor:
    """Phi_d over the prime field of K (mod-p reduction when char K = p)."""

    order: int
    poly: LaurentPoly


def cyclotomic(d: int, fspec: FieldSpec) -> CyclotomicFactor:
    field = fspec.scalars()
    ints = cyclotomic_int(d)
    poly = LaurentPoly.from_int_coeffs(field, dict(enumerate(ints)))
    return CyclotomicFactor(order=d, poly=poly)


def mult_d(f: LaurentPoly, d: int) -> int:
    """Largest m with Phi_d^m | f.  Characteristic zero only."""
    if f.is_zero():
        raise ZeroPolynomialError("mult_d of the zero polynomial")
    if f.field.char != 0:
        raise ValueError("mult_d is defined for characteristic zero; "
                         "use factor_invariant over GF(p)")
    field = f.field
    phi = [field.from_int(c) for c in cyclotomic_int(d)]
    cs, _ = f.dense()
    count = 0
    while len(cs) >= len(phi):
        q, r = dense_divmod(field, cs, phi)
        if r:
            break
        cs = q
        count += 1
    return count


# ---------------------------------------------------------------------------
# factorization of invariant factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    poly: LaurentPoly
    exponent: int
    cyclotomic_order: int | None  # None when not identified (always None mod p)


def _factor_cyclotomic_q(field: Field, cs: list) -> tuple[list[Factor], list | None]:
    """Peel cyclotomic factors off a monic rational polynomial.

    Invariant factors arising here are products of cyclotomics, so this
    terminates with a constant; a non-cyclotomic leftover is returned
    un-factored so the caller can flag it.
    """
    factors = []
    rem = list(cs)
    d = 0
    guard = 2 * (len(cs) - 1) ** 2 + 4
    while len(rem) - 1 > 0 and d <= guard:
        d += 1
        if totient(d) > len(rem) - 1:
            continue
        phi = [field.from_int(c) for c in cyclotomic_int(d)]
        exp = 0
        while len(rem) >= len(phi):
            q, r = dense_divmod(field, rem, phi)
            if r:
                break
            rem = q
            exp += 1
        if exp:
            factors.append(Factor(laurent_from_dense(field, phi), exp, d))
    leftover = rem if len(rem) - 1 > 0 else None
    return factors, leftover


def _squarefree_p(field: Field, f: list) -> list[tuple[list, int]]:
    """Squarefree decomposition over GF(p) (Yun's algorithm, char p aware)."""
    p = field.char
    out = []
    df = dense_deriv(field, f)
    if not df:
        # f = g(t^p); over the prime field coefficients are Frobenius-fixed
        root = [f[i] for i in range(0, len(f), p)]
        for g, m in _squarefree_p(field, root):
            out.append((g, m * p))
        return out
    c = dense_gcd(field, f, df)
    w = dense_divmod(field, f, c)[0]
    i = 1
    while len(w) > 1:
        y = dense_gcd(field, w, c)
        z = dense_divmod(field, w, y)[0]
        if len(z) > 1:
            out.append((z, i))
        w = y
        c = dense_divmod(field, c, y)[0]
        i += 1
    if len(c) > 1:
        root = [c[i] for i in range(0, len(c), p)]
        for g, m in _squarefree_p(field, root):
            out.append((g, m * p))
    return out


def _equal_degree_split(field: Field, f: list, dd: int, rng: random.Random) -> list[list]:
    """Cantor-Zassenhaus split of a squarefree f whose factors all have degree dd."""
    n = len(f) - 1
    if n == dd:
        return [f]
    p = field.char
    t_poly = [field.zero, field.one]
    while True:
        a = [field.from_int(rng.randrange(p)) for _ in range(n)]
        a = dense_trim(field, a)
        if len(a) <= 0:
            continue
        if p == 2:
            # trace map sum a^(2^i), i < dd
            b = list(a)
            acc = list(a)
            for _ in range(dd - 1):
                b = dense_powmod(field, b, 2, f)
                acc = dense_add(field, acc, b)
            g = dense_gcd(field, acc, f)
        else:
            e = (p ** dd - 1) // 2
            b = dense_powmod(field, a, e, f)
            b = dense_add(field, b, [field.neg(field.one)])
            g = dense_gcd(field, b, f)
        if 0 < len(g) - 1 < n:
            h = dense_divmod(field, f, g)[0]
            return (_equal_degree_split(field, g, dd, rng)
                    + _equal_degree_split(field, h, dd, rng))
        _ = t_poly  # keep rng advancing until a split lands


def _factor_p(field: Field, cs: list) -> list[tuple[list, int]]:
    """Full factorization over GF(p): squarefree + distinct degree + equal degree."""
    p = field.char
    out = []
    for sqf, mult in _squarefree_p(field, dense_monic(field, cs)):
        # distinct-degree stage
        f = list(sqf)
        t_poly = [field.zero, field.one]
        h = list(t_poly)
        dd = 0
        seed = f"gf{p}:" + ",".join(str(c) for c in cs)
        rng = random.Random(seed)
        while len(f) - 1 > 0:
            dd += 1
            if 2 * dd > len(f) - 1:
                out.append((f, mult))
                break
            h = dense_powmod(field, h, p, f)
            g = dense_gcd(field, dense_sub(field, h, t_poly), f)
            if len(g) - 1 > 0:
                for irr in _equal_degree_split(field, g, dd, rng):
                    out.append((irr, mult))
                f = dense_divmod(field, f, g)[0]
                h = dense_divmod(field, h, f)[1]
    out.sort(key=lambda gm: (len(gm[0]), [str(c) for c in gm[0]]))
    return out


def factor_invariant(f: LaurentPoly, fspec: FieldSpec) -> list[Factor]:
    """Factor a unit-normalized invariant factor into irreducibles.

    Over Q the factors are matched with cyclotomic polynomials (the only
    irreducibles that can occur here); an unexpected non-cyclotomic part
    is returned with ``cyclotomic_order=None``.  Over GF(p) the complete
    irreducible factorization is returned without order labels, since
    distinct Phi_d may share factors mod p.
    """
    field = fspec.scalars()
    if f.is_zero():
        raise ZeroPolynomialError("cannot factor 0")
    cs, _ = f.dense()
    cs = dense_monic(field, cs)
    if len(cs) == 1:
        return []
    if fspec.char == 0:
        factors, leftover = _factor_cyclotomic_q(field, cs)
        if leftover is not None:
            factors.append(Factor(laurent_from_dense(field, leftover), 1, None))
        return factors
    return [Factor(laurent_from_dense(field, g), m, None) for g, m in _factor_p(field, cs)]


# ---------------------------------------------------------------------------
# the residue field K_d = Q[z]/(Phi_d)
# ---------------------------------------------------------------------------

class CyclotomicField(Field):
    """Q[z]/(Phi_d) as an exact field; elements are Fraction tuples."""

    char = 0

    def __init__(self, d: int):
        self.d = d
        ints = cyclotomic_int(d)
        self.deg = len(ints) - 1
        self.modulus = tuple(Fraction(c) for c in ints)
        self.zero = (Fraction(0),) * self.deg
        one = [Fraction(0)] * self.deg
        one[0] = Fraction(1)
        self.one = tuple(one)
        # reduction table: z^(deg + i) mod Phi_d for i < deg - 1
        self._red = []
        cur = [-c for c in self.modulus[:-1]]  # z^deg
        for _ in range(max(0, self.deg - 1)):
            self._red.append(tuple(cur))
            cur = [Fraction(0)] + cur
            top = cur.pop()
            if top:
                for i in range(self.deg):
                    cur[i] -= top * self.modulus[i]
        self._qq = Rationals()

    @property
    def gen(self):
        """The residue class of z, a primitive d-th root of unity."""
        if self.deg == 1:
            return (-self.modulus[0],)
        g = [Fraction(0)] * self.deg
        g[1] = Fraction(1)
        return tuple(g)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        n = self.deg
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for i in range(n, 2 * n - 1):
            c = prod[i]
            if c:
                red = self._red[i - n]
                for j in range(n):
                    out[j] += c * red[j]
        return tuple(out)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0 in K_d")
        qq = self._qq
        r0 = list(self.modulus)
        r1 = dense_trim(qq, list(a))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = dense_divmod(qq, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, dense_sub(qq, s0, dense_mul(qq, q, s1))
        # r0 = gcd, a constant since Phi_d is irreducible over Q
        c = r0[0]
        inv = [x / c for x in s0]
        inv += [Fraction(0)] * (self.deg - len(inv))
        return tuple(inv[: self.deg])

    def from_int(self, n):
        out = [Fraction(0)] * self.deg
        out[0] = Fraction(n)
        return tuple(out)

    def embed(self, q: Fraction):
        out = [Fraction(0)] * self.deg
        out[0] = Fraction(q)
        return tuple(out)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.d == self.d

    def __hash__(self):
        return hash(("Kd", self.d))

    def __repr__(self):
        return f"CyclotomicField({self.d})"


@functools.lru_cache(maxsize=None)
def cyclotomic_field(d: int) -> CyclotomicField:
    return CyclotomicField(d)


def trunc_mul(kd, a: list, b: list, order: int) -> list:
    """Product of K_d[tau]/(tau^order) elements as coefficient lists."""
    out = [kd.zero] * order
    for i, x in enumerate(a):
        if kd.is_zero(x):
            continue
        for j, y in enumerate(b):
            if i + j >= order:
                break
            if not kd.is_zero(y):
                out[i + j] = kd.add(out[i + j], kd.mul(x, y))
    return out


def trunc_inv(kd, a: list, order: int) -> list:
    """Inverse of a unit in K_d[tau]/(tau^order)."""
    inv0 = kd.inv(a[0])
    out = [kd.zero] * order
    out[0] = inv0
    for i in range(1, order):
        acc = kd.zero
        for j in range(1, i + 1):
            if j < len(a):
                acc = kd.add(acc, kd.mul(a[j], out[i - j]))
        out[i] = kd.neg(kd.mul(inv0, acc))
    return out


def taylor_at_root(f: LaurentPoly, d: int, order: int) -> list:
    """Coefficients of f(zeta_d + tau) mod tau^order, in K_d.

    Characteristic zero; negative t-powers expand through the inverse of
    the unit zeta_d + tau.
    """
    kd = cyclotomic_field(d)
    if f.is_zero():
        return [kd.zero] * order
    z = kd.gen
    lin = ([z, kd.one] + [kd.zero] * max(0, order - 2))[:order]
    cs, val = f.dense()
    acc = [kd.zero] * order
    for coeff in reversed(cs):
        acc = trunc_mul(kd, acc, lin, order)
        acc[0] = kd.add(acc[0], kd.embed(coeff))
    if val > 0:
        for _ in range(val):
            acc = trunc_mul(kd, acc, lin, order)
    elif val < 0:
        inv = trunc_inv(kd, lin, order)
        for _ in range(-val):
            acc = trunc_mul(kd, acc, inv, order)
    return acc


def residue_eval(f: LaurentPoly, d: int):
    """The class of f in K_d = Q[z]/(Phi_d), i.e. f(zeta_d).

    t^{-1} maps to the inverse of the root; always defined since
    Phi_d(0) != 0.  Characteristic zero only.
    """
    if f.field.char != 0:
        raise ValueError("residue fields are only used in characteristic zero")
    kd = cyclotomic_field(d)
    if f.is_zero():
        return kd.zero
    z = kd.gen
    cs, val = f.dense()
    acc = kd.zero
    for c in reversed(cs):
        acc = kd.add(kd.mul(acc, z), kd.embed(c))
    if val > 0:
        for _ in range(val):
            acc = kd.mul(acc, z)
    elif val < 0:
        zi = kd.inv(z)
        for _ in range(-val):
            acc = kd.mul(acc, zi)
    return acc
