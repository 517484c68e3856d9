import random
from fractions import Fraction

import pytest

from semieuclid import census as C
from semieuclid.lattices import lattice_index
from semieuclid.orders import (
    OrderValidationError,
    fixed_sublattice,
    is_involution_maximal,
    is_maximal,
    isomorphism,
    maximalize,
    orders_isomorphic,
    reduced_discriminant,
    ring_closure,
    unit_group,
    validate_order,
)
from semieuclid.qarith import Algebra, Involution, Quat


def test_validate_examples(H, lipschitz, hurwitz):
    one, i, j, k = H.basis()
    assert lipschitz.rank == 4
    with pytest.raises(OrderValidationError, match="not multiplicatively closed"):
        validate_order([one, i, j, k / 2])
    with pytest.raises(OrderValidationError, match="does not contain 1"):
        validate_order([2 * one, i, j, k])
    assert hurwitz.contains((one + i + j + k) / 2)


def test_dagger_stability_error():
    H2 = Algebra.quaternion(-1, -2)
    one, i, j, k = H2.basis()
    basis = [one, 3 * i, (one + 3 * i + j) / 2, (2 * i + j + k) / 2]
    assert validate_order(basis).rank == 4
    with pytest.raises(OrderValidationError, match="O\\^dagger != O"):
        validate_order(basis, Involution.orthogonal(H2))


def test_reduced_discriminant(lipschitz, hurwitz):
    assert reduced_discriminant(hurwitz) == 2
    assert reduced_discriminant(lipschitz) == 4
    row = C.golden_orders(4)[0]
    assert reduced_discriminant(row.order) == 2 * 1


def test_nested_discriminants(lipschitz, hurwitz):
    idx = lattice_index(lipschitz.lattice, hurwitz.lattice)
    assert reduced_discriminant(lipschitz) == idx * reduced_discriminant(hurwitz)


def test_is_maximal(lipschitz, hurwitz, quadratic):
    assert is_maximal(hurwitz)
    assert not is_maximal(lipschitz)
    assert not is_maximal(quadratic["Z[sqrt-3]"])
    assert is_maximal(quadratic["Z[omega]"])


def test_fixed_sublattice(dagger_lipschitz, lipschitz):
    H2 = dagger_lipschitz.algebra
    one, i, j, k = H2.basis()
    L = fixed_sublattice(dagger_lipschitz)
    assert L.rank == 3
    assert L == validate_order([one, i, j, k]).lattice.with_basis([one.vector(), i.vector(), j.vector()])
    O = validate_order([one, i, j, (j + k) / 2], Involution.orthogonal(H2))
    assert fixed_sublattice(O).canonical == L.canonical
    assert fixed_sublattice(lipschitz) == lipschitz.lattice
    inv = dagger_lipschitz.involution
    for v in L.basis:
        q = Quat(H2, *v)
        assert inv(q) == q
    assert L.contains(one.vector())


def test_maximalize(lipschitz, hurwitz):
    M = maximalize(lipschitz)
    assert M == hurwitz
    assert maximalize(hurwitz) is hurwitz or maximalize(hurwitz) == hurwitz
    for h in C.golden_holes(5)[1:3]:
        sup = maximalize(h.order)
        assert reduced_discriminant(sup) == 2
        assert all(sup.contains(b) for b in h.order.basis)


def test_maximalize_involution(dagger_lipschitz):
    M = maximalize(dagger_lipschitz)
    assert is_involution_maximal(M)
    assert all(M.contains(b) for b in dagger_lipschitz.basis)
    inv = M.involution
    assert all(M.contains(inv(b)) for b in M.basis)
    # here the maximal dagger-order is a maximal order
    assert reduced_discriminant(M) == 2
    assert orders_isomorphic(M, C.golden_orders(4)[2].order)


def test_unit_groups(lipschitz, hurwitz, quadratic):
    assert len(unit_group(lipschitz)) == 8
    assert len(unit_group(hurwitz)) == 24
    K = quadratic["Z[sqrt-3]"].algebra
    assert unit_group(quadratic["Z[sqrt-3]"]) == sorted([K.one, -K.one], key=lambda u: u.vector())
    for O in (lipschitz, hurwitz):
        U = unit_group(O)
        alg = O.algebra
        assert alg.one in U and -alg.one in U
        assert all(u * v in U for u in U for v in U)
        assert all(u.inverse() in U for u in U)


def test_unit_group_sizes(census_records):
    for r in census_records[5]:
        assert len(unit_group(r.order)) in {2, 4, 6, 8, 12, 24}


def test_isomorphism_conjugate(H, lipschitz, hurwitz):
    one, i, j, k = H.basis()
    u = (one + i + j + k) / 2
    conj = validate_order([u * b * u.inverse() for b in lipschitz.basis])
    assert orders_isomorphic(conj, lipschitz)
    assert orders_isomorphic(lipschitz, lipschitz)
    assert not orders_isomorphic(lipschitz, hurwitz)


def test_two_maximal_dagger_orders_disc_7():
    rows = [g for g in C.golden_orders(4) if g.order is not None and g.order.algebra.discriminant == 7]
    assert len(rows) == 2
    assert not orders_isomorphic(rows[0].order, rows[1].order)
    assert all(is_involution_maximal(g.order) for g in rows)


def test_isomorphism_is_equivalence():
    rng = random.Random(4)
    H = Algebra.quaternion(-1, -1)
    one, i, j, k = H.basis()
    base = validate_order([one, 3 * i, i - j, (one + i + j + k) / 2])
    units = unit_group(maximalize(base))
    conjs = []
    for _ in range(3):
        u = rng.choice(units)
        conjs.append(validate_order([u * b * u.inverse() for b in base.basis]))
    a, b, c = conjs
    assert orders_isomorphic(a, a)
    assert orders_isomorphic(a, b) == orders_isomorphic(b, a)
    assert orders_isomorphic(a, b) and orders_isomorphic(b, c) and orders_isomorphic(a, c)
    T = isomorphism(a, b)
    assert T is not None and len(T) == 4


def test_ring_closure(H):
    one, i, j, k = H.basis()
    O = ring_closure([one, i, j])
    assert O is not None and O.contains(k)
    assert ring_closure([one, i / 2]) is None


def test_quadratic_disc(quadratic):
    assert reduced_discriminant(quadratic["Z[sqrt-3]"]) == 12
    assert reduced_discriminant(quadratic["Z[omega]"]) == 3
    assert reduced_discriminant(quadratic["Z[(1+sqrt-15)/2]"]) == 15
    assert Fraction(reduced_discriminant(quadratic["Z[i]"])) == 4
