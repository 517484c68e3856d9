from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from semieuclid.qarith import (
    Algebra,
    DescriptorMismatch,
    Involution,
    Quat,
    ZeroDivisor,
    algebra_discriminant,
    apply_involution,
    conjugate_standard,
    hilbert_symbol,
    inverse,
    multiply,
    reduced_norm,
    reduced_trace,
    squarefree_part,
)

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)
neg = st.integers(min_value=-12, max_value=-1)
algebras = st.builds(Algebra.quaternion, neg, neg)


@st.composite
def elements(draw, alg=None):
    alg = alg or draw(algebras)
    return Quat(alg, *(draw(rationals) for _ in range(4)))


@st.composite
def pairs(draw):
    alg = draw(algebras)
    return draw(elements(alg)), draw(elements(alg))


@st.composite
def triples(draw):
    alg = draw(algebras)
    return draw(elements(alg)), draw(elements(alg)), draw(elements(alg))


def test_defining_relations(H):
    one, i, j, k = H.basis()
    assert i * j == k
    assert j * i == -k
    assert i * i == -one and j * j == -one


def test_hurwitz_unit_square(H):
    one, i, j, k = H.basis()
    h = (one + i + j + k) / 2
    assert h * h == (-one + i + j + k) / 2


def _matrix(q):
    # (a, b) -> M_2(Q(sqrt a)): i -> diag(r, -r), j -> [[0, b], [1, 0]]
    a, b = q.alg.a, q.alg.b
    r = sympy.sqrt(sympy.Rational(a.numerator, a.denominator))
    I = sympy.Matrix([[r, 0], [0, -r]])
    J = sympy.Matrix([[0, sympy.Rational(b.numerator, b.denominator)], [1, 0]])
    x, y, z, t = (sympy.Rational(c.numerator, c.denominator) for c in q.vector())
    return x * sympy.eye(2) + y * I + z * J + t * I * J


@pytest.mark.parametrize("a,b", [(-1, -1), (-2, -5), (-3, -7)])
def test_product_against_matrix_model(a, b):
    alg = Algebra.quaternion(a, b)
    u = Quat(alg, 1, Fraction(1, 2), -3, 2)
    v = Quat(alg, Fraction(-2, 3), 4, 1, -1)
    diff = sympy.simplify(_matrix(u) * _matrix(v) - _matrix(u * v))
    assert diff == sympy.zeros(2, 2)
    assert sympy.simplify(_matrix(u).det() - sympy.Rational(str(u.norm()))) == 0


def test_conjugation_examples(H):
    one, i, j, k = H.basis()
    assert conjugate_standard(one + i + j + k) == one - i - j - k
    assert conjugate_standard(5 * one) == 5 * one


def test_orthogonal_involution_examples(H):
    one, i, j, k = H.basis()
    inv = Involution.orthogonal(H)
    assert apply_involution(inv, one + 2 * i + 3 * j + 4 * k) == one + 2 * i + 3 * j - 4 * k
    assert apply_involution(inv, i) == i


def test_norm_trace_examples(H):
    one, i, j, k = H.basis()
    assert reduced_norm(one + i + j + k) == 4 and reduced_trace(one + i + j + k) == 2
    assert reduced_norm(H.zero) == 0
    assert reduced_norm((one + i + j + k) / 2) == 1


def test_inverse_examples(H):
    one, i, j, k = H.basis()
    assert inverse(i) == -i
    assert inverse(2 * one) == one / 2
    assert inverse(one + i) == (one - i) / 2
    with pytest.raises(ZeroDivisionError):
        inverse(H.zero)
    with pytest.raises(ZeroDivisor):
        H.one / 0


def test_hilbert_symbol_examples():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 5) == 1
    assert hilbert_symbol(-1, -1, "inf") == -1
    for p in (2, 3, 5, 7, "inf"):
        assert hilbert_symbol(1, -7, p) == 1


@pytest.mark.parametrize("a,b,disc", [(-1, -1, 2), (-3, -1, 3), (-2, -5, 5), (-1, -3, 3), (-7, -11, 7)])
def test_algebra_discriminant(a, b, disc):
    assert algebra_discriminant(a, b) == disc


def test_quadratic_elements_reject_j():
    K = Algebra.quadratic(3)
    with pytest.raises(DescriptorMismatch):
        Quat(K, 0, 0, 1)
    assert K.i * K.i == -3 * K.one


def test_mismatched_algebras(H):
    other = Algebra.quaternion(-1, -3)
    with pytest.raises(DescriptorMismatch):
        multiply(H.i, other.i)


def test_involution_disc():
    H = Algebra.quaternion(-1, -2)
    assert Involution.orthogonal(H).norm_xi == 2
    assert Involution.orthogonal(H).disc == -2
    assert Involution.orthogonal(Algebra.quaternion(-3, -12)).disc == -1
    assert squarefree_part(Fraction(-18, 4)) == -2


def test_definiteness():
    assert Algebra.quaternion(-1, -1).definite
    assert not Algebra.quaternion(1, -1).definite


@settings(max_examples=200)
@given(pairs())
def test_norm_multiplicative(p):
    u, v = p
    assert (u * v).norm() == u.norm() * v.norm()


@settings(max_examples=150)
@given(triples())
def test_associative(p):
    u, v, w = p
    assert (u * v) * w == u * (v * w)


@settings(max_examples=200)
@given(pairs())
def test_involutions_anti_multiplicative(p):
    u, v = p
    inv = Involution.orthogonal(u.alg)
    assert (u * v).conj() == v.conj() * u.conj()
    assert inv(u * v) == inv(v) * inv(u)
    assert inv(inv(u)) == u and u.conj().conj() == u


@given(elements())
def test_norm_definite(u):
    n = u.norm()
    assert n >= 0
    assert (n == 0) == u.is_zero()
    assert u * u.conj() == n * u.alg.one
    assert u.trace() == 2 * u.x


@given(elements())
def test_inverse_property(u):
    if u.is_zero():
        return
    assert u * u.inverse() == u.alg.one
    assert u.inverse() == u.conj() * (1 / u.norm())


@settings(max_examples=100)
@given(neg, neg, st.integers(min_value=1, max_value=5), st.integers(min_value=1, max_value=5))
def test_discriminant_invariance(a, b, s, t):
    d = algebra_discriminant(a, b)
    assert d == algebra_discriminant(b, a)
    assert d == algebra_discriminant(a * Fraction(s, t) ** 2, b)
    # definite algebras ramify at an odd number of finite primes
    assert len(sympy.factorint(d)) % 2 == 1
    assert all(e == 1 for e in sympy.factorint(d).values())


@given(neg, neg, st.sampled_from([2, 3, 5, 7, 11, 13, "inf"]))
def test_hilbert_symmetric(a, b, p):
    assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
