import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gcadec.laurent import (AlgebraError, LaurentPoly, PolyMatrix, TPoly, char_poly, coprime_with_cyclic,
                            cyclic_resultant, determinant)


def P(text, p=2, d=1):
    return LaurentPoly.parse(text, p, d)


def T(text, p=2, d=1):
    return TPoly.parse(text, p, d)


def mat(rows, p=2, d=1):
    return PolyMatrix([[P(e, p, d) if isinstance(e, str) else LaurentPoly.const(p, d, e) for e in r]
                       for r in rows])


# -- arithmetic examples

def test_char2_square():
    assert P("1 + x") * P("1 + x") == P("1 + x^2")


def test_additive_inverse_and_units():
    f = P("x^2 + x^-1 + 1", 5)
    assert (f + (-f)).is_zero()
    assert P("x^-1") * P("x") == P("1")
    assert P("x^-1", 3) ** -2 == P("x^2", 3)


def test_ring_mismatch_raises():
    with pytest.raises(AlgebraError):
        P("x", 2) + P("x", 3)
    with pytest.raises(AlgebraError):
        P("x", 2, 1) * P("x1", 2, 2)


def test_coefficients_reduced_and_canonical():
    assert P("3*x + 2", 3) == P("2", 3)
    assert P("x + x", 2).is_zero()
    assert hash(P("x1*x2 + 1", 3, 2)) == hash(P("1 + x2*x1", 3, 2))


@pytest.mark.parametrize("text,p,d", [("2*x1^2*x2^-1 + 1", 3, 2), ("x^-3 + 4*x + 3", 5, 1), ("0", 2, 1)])
def test_text_round_trip(text, p, d):
    f = P(text, p, d)
    assert P(str(f), p, d) == f


def test_tpoly_text_round_trip():
    chi = TPoly([P("x2^-1", 2, 2), P("x1 + 1", 2, 2), P("1", 2, 2)])
    assert str(chi) == "t^2 + (x1 + 1)*t + x2^-1"
    assert T(str(chi), 2, 2) == chi


# -- determinant and characteristic polynomial examples

def test_determinant_examples():
    assert determinant(PolyMatrix.identity(3, 2, 1)) == P("1")
    assert determinant(mat([["1 + x"]])) == P("1 + x")
    assert determinant(mat([["x", 1], [1, "x"]])) == P("x^2 + 1")


def test_char_poly_examples():
    assert char_poly(mat([["x"]])) == T("t + x")
    assert char_poly(PolyMatrix.identity(2, 3, 1)) == TPoly.from_ints([1, -2, 1], 3, 1)
    assert char_poly(mat([[0, 1], [1, "x"]])) == T("t^2 + x*t + 1")


# -- coprimality examples

def test_coprime_examples():
    ok, witness = coprime_with_cyclic(T("t - 1", 3), 1)
    assert not ok and witness == T("t - 1", 3)
    ok, witness = coprime_with_cyclic(T("t + (1 + x)"), 1)
    assert ok and witness is None
    assert cyclic_resultant(T("t + (1 + x)"), 1) == P("x")
    assert coprime_with_cyclic(T("t + x"), 1)[0]
    assert cyclic_resultant(T("t + x"), 1) == P("1 + x")
    assert not coprime_with_cyclic(T("t + 1"), 1)[0]


def test_coprime_witness_is_common_factor():
    # chi = (t^2 + t + 1)(t + x) over F_2 shares t^2 + t + 1 with t^3 - 1
    chi = T("t^2 + t + 1") * T("t + x")
    ok, w = coprime_with_cyclic(chi, 3)
    assert not ok
    assert w == T("t^2 + t + 1")
    assert coprime_with_cyclic(chi, 1)[0]


def test_non_monic_rejected():
    with pytest.raises(AlgebraError):
        coprime_with_cyclic(T("x*t + 1"), 1)


# -- randomized properties

def laurent_polys(p, d, max_terms=4, lo=-2, hi=2):
    term = st.tuples(st.tuples(*[st.integers(lo, hi)] * d), st.integers(1, p - 1))
    return st.lists(term, max_size=max_terms).map(lambda ts: LaurentPoly(p, d, dict(ts)))


@given(st.data(), st.sampled_from([(2, 1), (3, 1), (5, 2), (2, 2)]))
def test_ring_laws(data, pd):
    p, d = pd
    a, b, c = (data.draw(laurent_polys(p, d)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) - b == a


def rand_matrix(rng, n, p, d, terms=2, lo=-1, hi=1):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            t = {tuple(int(v) for v in rng.integers(lo, hi + 1, size=d)): int(rng.integers(0, p))
                 for _ in range(terms)}
            row.append(LaurentPoly(p, d, t))
        rows.append(row)
    return PolyMatrix(rows)


@pytest.mark.parametrize("seed", range(6))
def test_determinant_multiplicative(seed):
    rng = np.random.default_rng(seed)
    n = [2, 3, 4, 5, 6, 3][seed]
    p, d = [(2, 1), (3, 1), (5, 2), (2, 1), (3, 1), (7, 2)][seed]
    a, b = rand_matrix(rng, n, p, d), rand_matrix(rng, n, p, d)
    assert determinant(a * b) == determinant(a) * determinant(b)


def test_bareiss_matches_cofactor():
    rng = np.random.default_rng(11)
    from gcadec.laurent import _bareiss, _cofactor
    for _ in range(5):
        m = rand_matrix(rng, 4, 3, 1)
        assert _bareiss(m.rows) == _cofactor(m.rows)


def random_invertible(rng, n, p):
    while True:
        m = rng.integers(0, p, size=(n, n))
        if round(sympy.Matrix(m).det()) % p:
            inv = np.array(sympy.Matrix(m).inv_mod(p)).astype(np.int64)
            return m, inv


@pytest.mark.parametrize("seed", range(5))
def test_char_poly_similarity_invariant(seed):
    rng = np.random.default_rng(100 + seed)
    n, p, d = 3, [2, 3, 5, 3, 2][seed], [1, 1, 2, 1, 2][seed]
    m = rand_matrix(rng, n, p, d)
    s, s_inv = random_invertible(rng, n, p)
    conj = PolyMatrix.from_scalar(s_inv, p, d) * m * PolyMatrix.from_scalar(s, p, d)
    assert char_poly(conj) == char_poly(m)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cayley_hamilton(n):
    rng = np.random.default_rng(n)
    for p, d in [(2, 1), (3, 2)]:
        m = rand_matrix(rng, n, p, d)
        assert char_poly(m).evaluate_matrix(m).is_zero()


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 2))
def test_gcd_and_resultant_routes_agree(seed, p, n, i):
    rng = np.random.default_rng(seed)
    m = rand_matrix(rng, n, p, 1)
    chi = char_poly(m)
    q = p ** i - 1
    ok, witness = coprime_with_cyclic(chi, q)
    assert ok == (not cyclic_resultant(chi, q).is_zero())
    if not ok:
        assert witness.degree >= 1
        assert (chi.mod_monic(witness)).is_zero()
        assert (TPoly.cyclic(q, p, 1).mod_monic(witness)).is_zero()


def to_sympy(chi, x, t):
    """Polynomial expression; nonnegative exponents are required."""
    return sum(sympy.Integer(c) * x ** e[0] * t ** k
               for k, coeff in enumerate(chi.coeffs) for e, c in coeff.terms.items())


@pytest.mark.parametrize("seed", range(12))
def test_resultant_zero_pattern_matches_sympy(seed):
    rng = np.random.default_rng(500 + seed)
    p = [2, 3, 5][seed % 3]
    n = 1 + seed % 3
    m = rand_matrix(rng, n, p, 1, lo=0, hi=2)
    chi = char_poly(m)
    x, t = sympy.symbols("x t")
    for q in (p - 1, p * p - 1):
        f = sympy.Poly(to_sympy(chi, x, t), t, x, modulus=p)
        g = sympy.Poly(t ** q - 1, t, x, modulus=p)
        ref = sympy.resultant(f.as_expr(), g.as_expr(), t)
        ref_zero = sympy.Poly(ref, x, modulus=p).is_zero
        assert cyclic_resultant(chi, q).is_zero() == ref_zero
