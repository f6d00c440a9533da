"""Multivariate Laurent polynomials over F_p, matrices of them, and polynomials in t.

A ``LaurentPoly`` is a dict from exponent tuples (negatives allowed) to
nonzero residues mod ``p``.  ``TPoly`` is an ordinary polynomial in a
separate indeterminate ``t`` with ``LaurentPoly`` coefficients.

Text format (used in certificates): terms joined by ``" + "``, each term a
coefficient and/or monomial joined by ``*``, e.g. ``2*x1^2*x2^-1 + 1``;
over ``t``: ``t^2 + (x1 + 1)*t + x2^-1``.
"""

from __future__ import annotations

import re
from functools import reduce

from .errors import GcadecError


class AlgebraError(GcadecError):
    """Mismatched moduli/variable counts, or a division that is not exact."""


class LaurentPoly:
    __slots__ = ("p", "d", "terms")

    def __init__(self, p, d, terms=None):
        self.p = p
        self.d = d
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != d:
                raise AlgebraError(f"exponent {exp} does not have {d} entries")
            c %= p
            if c:
                clean[exp] = (clean.get(exp, 0) + c) % p
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    # -- constructors
    @classmethod
    def zero(cls, p, d):
        return cls(p, d)

    @classmethod
    def const(cls, p, d, c):
        return cls(p, d, {(0,) * d: c})

    @classmethod
    def monomial(cls, p, d, exp, c=1):
        return cls(p, d, {tuple(exp): c})

    @classmethod
    def var(cls, p, d, i):
        exp = [0] * d
        exp[i] = 1
        return cls(p, d, {tuple(exp): 1})

    def _like(self, terms):
        return LaurentPoly(self.p, self.d, terms)

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(self.p, self.d, int(other))
        if other.p != self.p or other.d != self.d:
            raise AlgebraError(f"ring mismatch: F_{self.p}[{self.d} vars] vs F_{other.p}[{other.d} vars]")
        return other

    # -- ring operations
    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = (terms.get(e, 0) + c1 * c2) % self.p
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self.terms) != 1:
                raise AlgebraError("only monomials are units")
            (e, c), = self.terms.items()
            return self._like({tuple(-x * -n for x in e): pow(c, n, self.p)})
        result = LaurentPoly.const(self.p, self.d, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.p, self.d, other)
        return isinstance(other, LaurentPoly) and (self.p, self.d) == (other.p, other.d) \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.d, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.d, 0)

    def map_exponents(self, fn):
        return self._like({fn(e): c for e, c in self.terms.items()})

    def extend(self, extra=1):
        """Same polynomial in a ring with ``extra`` more (unused) variables."""
        return LaurentPoly(self.p, self.d + extra, {e + (0,) * extra: c for e, c in self.terms.items()})

    def substitute_unit(self, exp):
        """Multiply by the monomial ``x^exp``."""
        return self._like({tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()})

    def min_exponent(self):
        if not self.terms:
            return (0,) * self.d
        return tuple(min(e[i] for e in self.terms) for i in range(self.d))

    def normalized(self):
        """``(poly, shift)``: the polynomial times the minimal monomial that clears negative
        exponents and monomial factors, and that monomial's exponent."""
        low = self.min_exponent()
        shift = tuple(-x for x in low)
        return self.substitute_unit(shift), shift

    def leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other):
        """``self / other`` in the Laurent ring; raises if not exact."""
        other = self._check(other)
        if other.is_zero():
            raise AlgebraError("division by zero")
        if self.is_zero():
            return self
        a, sa = self.normalized()
        b, sb = other.normalized()
        lb_e, lb_c = b.leading()
        inv = pow(lb_c, -1, self.p)
        q = {}
        r = a
        while not r.is_zero():
            e, c = r.leading()
            diff = tuple(x - y for x, y in zip(e, lb_e))
            if any(x < 0 for x in diff):
                raise AlgebraError("division is not exact")
            coef = c * inv % self.p
            q[diff] = coef
            r = r - b * LaurentPoly.monomial(self.p, self.d, diff, coef)
        back = tuple(y - x for x, y in zip(sa, sb))
        return self._like(q).substitute_unit(back)

    # -- text
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentPoly(F_{self.p}, d={self.d}: {self})"

    @classmethod
    def parse(cls, text, p, d):
        text = text.strip()
        if text in ("", "0"):
            return cls.zero(p, d)
        result = cls.zero(p, d)
        for sign, term in _split_terms(text):
            result = result + sign * _parse_term(term, p, d)
        return result


def _split_terms(text):
    out = []
    depth = 0
    start = 0
    sign = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and text[i - 1] != "^":
            chunk = text[start:i].strip()
            if chunk:
                out.append((sign, chunk))
            sign = 1 if ch == "+" else -1
            start = i + 1
        elif ch == "-" and depth == 0 and i == start:
            sign = -sign
            start = i + 1
        i += 1
    chunk = text[start:].strip()
    if chunk:
        out.append((sign, chunk))
    return out


_FACTOR = re.compile(r"^(?:(\d+)|x(\d*)(?:\^(-?\d+))?)$")


def _parse_term(term, p, d):
    coef = 1
    exp = [0] * d
    for factor in term.split("*"):
        factor = factor.strip()
        m = _FACTOR.match(factor)
        if not m:
            raise AlgebraError(f"cannot parse factor {factor!r}")
        if m.group(1) is not None:
            coef *= int(m.group(1))
        else:
            i = int(m.group(2) or 1) - 1
            if not 0 <= i < d:
                raise AlgebraError(f"variable x{i + 1} outside {d} variables")
            exp[i] += int(m.group(3) or 1)
    return LaurentPoly(p, d, {tuple(exp): coef})


# -- matrices ---------------------------------------------------------------

class PolyMatrix:
    """Square matrix of ``LaurentPoly`` sharing one ring."""

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise AlgebraError("matrix must be square")
        first = self.rows[0][0]
        self.p, self.d = first.p, first.d
        for r in self.rows:
            for e in r:
                if (e.p, e.d) != (self.p, self.d):
                    raise AlgebraError("matrix entries from different rings")

    @classmethod
    def identity(cls, n, p, d):
        return cls([[LaurentPoly.const(p, d, int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n, p, d):
        return cls([[LaurentPoly.zero(p, d) for _ in range(n)] for _ in range(n)])

    @classmethod
    def from_scalar(cls, mat, p, d, exp=None):
        """``mat`` (integer rows) times the monomial ``x^exp``."""
        exp = tuple(exp) if exp is not None else (0,) * d
        return cls([[LaurentPoly.monomial(p, d, exp, int(v)) for v in row] for row in mat])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return PolyMatrix([[a * other for a in r] for r in self.rows])
        cols = list(zip(*other.rows))
        return PolyMatrix([[reduce(lambda x, y: x + y, (a * b for a, b in zip(r, c)))
                            for c in cols] for r in self.rows])

    def __pow__(self, k):
        result = PolyMatrix.identity(self.n, self.p, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def map(self, fn):
        return PolyMatrix([[fn(e) for e in r] for r in self.rows])

    def to_text(self):
        return [[str(e) for e in r] for r in self.rows]

    def __repr__(self):
        return f"PolyMatrix({self.to_text()})"


def determinant(m):
    """Exact determinant: cofactor expansion up to 4x4, fraction-free elimination above."""
    rows = m.rows if isinstance(m, PolyMatrix) else m
    n = len(rows)
    if n <= 4:
        return _cofactor(rows)
    return _bareiss(rows)


def _cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _cofactor(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return LaurentPoly.zero(rows[0][0].p, rows[0][0].d)
    return total


def _bareiss(rows):
    a = [list(r) for r in rows]
    n = len(a)
    p, d = a[0][0].p, a[0][0].d
    sign = 1
    prev = LaurentPoly.const(p, d, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if pivot is None:
                return LaurentPoly.zero(p, d)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


# -- polynomials in t -------------------------------------------------------

class TPoly:
    """Polynomial in ``t`` with Laurent coefficients; ``coeffs[i]`` multiplies ``t^i``."""

    def __init__(self, coeffs, p=None, d=None):
        coeffs = list(coeffs)
        if coeffs:
            p, d = coeffs[0].p, coeffs[0].d
        self.p, self.d = p, d
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def from_ints(cls, ints, p, d):
        return cls([LaurentPoly.const(p, d, c) for c in ints], p, d)

    @classmethod
    def cyclic(cls, q, p, d):
        """``t^q - 1``."""
        return cls.from_ints([-1] + [0] * (q - 1) + [1], p, d)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1]

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.lc() == 1

    def _zero(self):
        return LaurentPoly.zero(self.p, self.d)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self._zero()
        return TPoly([(self.coeffs[i] if i < len(self.coeffs) else z)
                      + (other.coeffs[i] if i < len(other.coeffs) else z) for i in range(n)],
                     self.p, self.d)

    def __neg__(self):
        return TPoly([-c for c in self.coeffs], self.p, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return TPoly([c * other for c in self.coeffs], self.p, self.d)
        if self.is_zero() or other.is_zero():
            return TPoly([], self.p, self.d)
        out = [self._zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return TPoly(out, self.p, self.d)

    def shift(self, k):
        """Multiply by ``t^k``."""
        return TPoly([self._zero()] * k + self.coeffs, self.p, self.d)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def exact_div_scalar(self, c):
        return TPoly([a.exact_div(c) for a in self.coeffs], self.p, self.d)

    def prem(self, other):
        """Pseudo-remainder of ``self`` by ``other``: ``lc(other)^(delta+1) self mod other``."""
        if other.is_zero():
            raise AlgebraError("pseudo-division by zero")
        r = self
        e = self.degree - other.degree + 1
        lcb = other.lc()
        while not r.is_zero() and r.degree >= other.degree:
            s = other.shift(r.degree - other.degree) * r.lc()
            r = r * lcb - s
            e -= 1
        if e > 0:
            r = r * (lcb ** e)
        return r

    def mod_monic(self, other):
        if not other.is_monic():
            raise AlgebraError("mod_monic needs a monic divisor")
        r = self
        while not r.is_zero() and r.degree >= other.degree:
            r = r - other.shift(r.degree - other.degree) * r.lc()
        return r

    def evaluate_matrix(self, m):
        """``sum c_i M^i`` for a ``PolyMatrix`` M."""
        acc = PolyMatrix.zero(m.n, m.p, m.d)
        power = PolyMatrix.identity(m.n, m.p, m.d)
        for c in self.coeffs:
            acc = acc + power * c
            power = power * m
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            tpart = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            cs = str(c)
            if not tpart:
                parts.append(cs if len(c.terms) == 1 else f"({cs})")
            elif c == 1:
                parts.append(tpart)
            elif len(c.terms) == 1:
                parts.append(f"{cs}*{tpart}")
            else:
                parts.append(f"({cs})*{tpart}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TPoly({self})"

    @classmethod
    def parse(cls, text, p, d):
        coeffs = {}
        for sign, term in _split_terms(text.strip()):
            term = term.strip()
            m = re.fullmatch(r"(?:(.*)\*)?t(?:\^(\d+))?", term)
            if m and (m.group(1) is None or _balanced(m.group(1))):
                k = int(m.group(2) or 1)
                body = m.group(1)
            else:
                k, body = 0, term
            if body is None:
                c = LaurentPoly.const(p, d, 1)
            else:
                body = body.strip()
                if body.startswith("(") and body.endswith(")"):
                    body = body[1:-1]
                c = LaurentPoly.parse(body, p, d)
            coeffs[k] = coeffs.get(k, LaurentPoly.zero(p, d)) + c * sign
        deg = max(coeffs, default=-1)
        return cls([coeffs.get(i, LaurentPoly.zero(p, d)) for i in range(deg + 1)], p, d)


def _balanced(s):
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def char_poly(m):
    """``det(t I - M)``, computed with ``t`` as an extra polynomial variable."""
    n, p, d = m.n, m.p, m.d
    t = LaurentPoly.var(p, d + 1, d)
    rows = [[(t if i == j else LaurentPoly.zero(p, d + 1)) - m[i, j].extend()
             for j in range(n)] for i in range(n)]
    det = determinant(rows)
    by_degree = {}
    for e, c in det.terms.items():
        k = e[-1]
        if k < 0:
            raise AlgebraError("negative power of t in a characteristic polynomial")
        by_degree.setdefault(k, {})[e[:-1]] = c
    deg = max(by_degree)
    chi = TPoly([LaurentPoly(p, d, by_degree.get(i, {})) for i in range(deg + 1)], p, d)
    if chi.degree != n or not chi.is_monic():
        raise AlgebraError("characteristic polynomial is not monic of full degree")
    return chi


# -- coprimality with t^q - 1 -----------------------------------------------

def _clear_units(poly):
    """Multiply every coefficient by one monomial so all exponents are nonnegative."""
    if poly.is_zero():
        return poly
    lows = [c.min_exponent() for c in poly.coeffs if not c.is_zero()]
    shift = tuple(-min(col) for col in zip(*lows))
    return TPoly([c.substitute_unit(shift) for c in poly.coeffs], poly.p, poly.d)


def t_power_mod(q, chi):
    """``t^q mod chi`` for monic ``chi``, by repeated squaring."""
    p, d = chi.p, chi.d
    result = TPoly.from_ints([1], p, d).mod_monic(chi)
    base = TPoly.from_ints([0, 1], p, d).mod_monic(chi)
    while q:
        if q & 1:
            result = (result * base).mod_monic(chi)
        base = (base * base).mod_monic(chi)
        q >>= 1
    return result


def cyclic_remainder(chi, q):
    """``(t^q - 1) mod chi``."""
    return t_power_mod(q, chi) - TPoly.from_ints([1], chi.p, chi.d)


def subresultant_gcd(a, b):
    """Last nonzero element of the subresultant PRS of ``a`` and ``b`` over ``R[t]``.

    Its ``t``-degree is the degree of ``gcd(a, b)`` over the fraction field.
    """
    if a.degree < b.degree:
        a, b = b, a
    if b.is_zero():
        return a
    a, b = _clear_units(a), _clear_units(b)
    one = LaurentPoly.const(a.p, a.d, 1)
    g = h = one
    while True:
        delta = a.degree - b.degree
        r = a.prem(b)
        if r.is_zero():
            return b
        if r.degree == 0:
            return r
        a = b
        b = r.exact_div_scalar(g * h ** delta)
        g = a.lc()
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))


def coprime_with_cyclic(chi, q):
    """Whether ``gcd(chi, t^q - 1) = 1`` over ``F_p(x_1..x_d)``.

    Returns ``(coprime, witness)``; on failure the witness is the monic
    common factor, which always has constant coefficients.
    """
    if q < 1:
        raise AlgebraError("q must be positive")
    if not chi.is_monic():
        raise AlgebraError("chi must be monic")
    r = cyclic_remainder(chi, q)
    if r.is_zero():
        return False, chi
    last = subresultant_gcd(chi, r)
    if last.degree == 0:
        return True, None
    return False, last.exact_div_scalar(last.lc())


def sylvester_matrix(a, b):
    m, n = a.degree, b.degree
    size = m + n
    z = LaurentPoly.zero(a.p, a.d)
    rows = []
    for i in range(n):
        row = [z] * size
        for k, c in enumerate(reversed(a.coeffs)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [z] * size
        for k, c in enumerate(reversed(b.coeffs)):
            row[i + k] = c
        rows.append(row)
    return rows


def resultant(a, b):
    """``Res_t(a, b)`` as the Sylvester determinant (up to sign)."""
    if a.is_zero() or b.is_zero():
        return LaurentPoly.zero(a.p, a.d)
    if a.degree == 0 and b.degree == 0:
        return LaurentPoly.const(a.p, a.d, 1)
    if a.degree == 0:
        return a.coeffs[0] ** b.degree
    if b.degree == 0:
        return b.coeffs[0] ** a.degree
    return determinant(sylvester_matrix(a, b))


def cyclic_resultant(chi, q):
    """``Res_t(chi, t^q - 1)`` up to sign, via ``Res(chi, (t^q - 1) mod chi)`` for monic ``chi``."""
    return resultant(chi, cyclic_remainder(chi, q))
