import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semieuclid.geometry import (
    BLUE,
    GREY,
    INF,
    PSI,
    RED,
    BoundaryError,
    Dihedral,
    E,
    LatticeIntegralityError,
    RenderSpec,
    T,
    UnsupportedDimension,
    apply_gen,
    check_boundary,
    check_relations,
    dihedral_angle,
    dihedral_from_distance,
    failing_relations,
    fundamental_domain,
    k_is_lattice,
    phi,
    random_boundary_point,
    random_lattice_point,
    relation_identities,
    render_figures,
    uncovered_area,
    volume_estimate,
)
from semieuclid.lattices import closest_points
from semieuclid.orders import euclid_lattice
from semieuclid.qarith import Quat


def test_generator_examples(quadratic, hurwitz):
    K = quadratic["Z[i]"].algebra
    a = K.one + K.i
    assert apply_gen(T(a), INF) is INF
    assert apply_gen(E(K.zero), K.i) == -(K.i.inverse())
    assert apply_gen(E(a), K.zero) is INF
    assert apply_gen(E(a), INF) == -a
    assert apply_gen(phi(a), a) is INF
    assert apply_gen(phi(a), INF) == a
    assert apply_gen(PSI, INF) is INF
    H = hurwitz.algebra
    alpha = H.one + H.j
    u = (H.one + H.i + H.j + H.k) / 2
    z = alpha + u
    w = apply_gen(phi(alpha), z)
    # points of the unit sphere about alpha are fixed by the reflection in it
    assert (w - alpha).norm() == 1 and w == z


def test_word_order(quadratic):
    K = quadratic["Z[i]"].algebra
    z = Quat(K, Fraction(1, 3), 2)
    a, b = K.one, K.i
    assert apply_gen([T(a), T(b)], z) == z + a + b
    assert apply_gen([PSI, T(a)], z) == apply_gen(PSI, apply_gen(T(a), z))


def test_boundary_model(hurwitz, dagger_lipschitz, quadratic):
    check_boundary(INF, 4)
    check_boundary(quadratic["Z[i]"].algebra.i, 3)
    check_boundary(dagger_lipschitz.algebra.i, 4)
    with pytest.raises(BoundaryError):
        check_boundary(dagger_lipschitz.algebra.k, 4)
    with pytest.raises(BoundaryError):
        check_boundary(hurwitz.algebra.i, 3)


def _orders(quadratic, hurwitz, lipschitz, dagger_lipschitz):
    return [quadratic["Z[i]"], quadratic["Z[sqrt-3]"], hurwitz, lipschitz, dagger_lipschitz]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 4))
def test_generator_inverses(quadratic, hurwitz, lipschitz, dagger_lipschitz, seed, which):
    O = _orders(quadratic, hurwitz, lipschitz, dagger_lipschitz)[which]
    rng = random.Random(seed)
    a = random_lattice_point(O, rng)
    z = random_boundary_point(O, rng)
    zero = O.algebra.zero
    assert apply_gen([PSI, PSI], z) == z
    assert apply_gen([phi(a), phi(a)], z) == z
    assert apply_gen([T(-a), T(a)], z) == z
    # E_a^-1 = E_0 T_a
    assert apply_gen([E(zero), T(a), E(a)], z) == z
    ab = a.conj()
    lhs = apply_gen([PSI, E(a)], z)
    assert lhs == apply_gen([E(-ab), PSI], z) == apply_gen([phi(ab), T(ab)], z)
    assert apply_gen(E(a), z) == apply_gen([PSI, phi(ab), T(ab)], z)


def test_relations_trivial(hurwitz):
    rng = random.Random(0)
    zero = hurwitz.algebra.zero
    samples = [random_boundary_point(hurwitz, rng) for _ in range(20)]
    assert check_relations(zero, zero, samples)
    assert len(relation_identities(zero, zero)) == 6


def test_relations_hurwitz(hurwitz):
    rng = random.Random(1)
    for _ in range(50):
        a, b = random_lattice_point(hurwitz, rng), random_lattice_point(hurwitz, rng)
        samples = [random_boundary_point(hurwitz, rng) for _ in range(100)]
        assert check_relations(a, b, samples)


def test_altered_relation_detected(hurwitz):
    rng = random.Random(2)
    bad = 0
    for _ in range(10):
        a, b = random_lattice_point(hurwitz, rng), random_lattice_point(hurwitz, rng)
        if (b - b.conj()).is_zero() or a.is_zero():
            continue
        wrong = [("T_a phi_b = phi_(a-b) T_a", [T(a), phi(b)], [phi(a - b), T(a)])]
        samples = [random_boundary_point(hurwitz, rng) for _ in range(10)]
        if failing_relations(a, b, samples, wrong):
            bad += 1
    assert bad > 0


def test_dihedral_examples():
    assert dihedral_from_distance(1) == Dihedral.PI_3
    assert dihedral_from_distance(2) == Dihedral.PI_2
    assert dihedral_from_distance(3) == Dihedral.PI_3
    assert dihedral_from_distance(4) == Dihedral.ZERO
    assert dihedral_from_distance(5) == Dihedral.DISJOINT
    with pytest.raises(LatticeIntegralityError):
        dihedral_from_distance(Fraction(3, 2))
    assert Dihedral.PI_3.radians == pytest.approx(math.pi / 3)


def test_dihedral_geometry():
    # angle between the tangent planes of two unit spheres, cos = |2 - d^2| / 2
    for d_sq, ang in [(1, Dihedral.PI_3), (2, Dihedral.PI_2), (3, Dihedral.PI_3), (4, Dihedral.ZERO)]:
        cos = abs(2 - d_sq) / 2
        folded = math.acos(cos) if d_sq < 4 else 0.0
        assert folded == pytest.approx(ang.radians)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dihedral_values_on_census(census_records, seed):
    rng = random.Random(seed)
    dim = rng.choice([3, 4, 5])
    O = rng.choice(census_records[dim]).order
    c1, c2 = random_lattice_point(O, rng, 2), random_lattice_point(O, rng, 2)
    if c1 == c2:
        return
    assert dihedral_angle(c1, c2) in set(Dihedral)


def test_k_is_lattice_examples(quadratic, lipschitz):
    assert k_is_lattice(quadratic["Z[omega]"]).is_lattice
    assert k_is_lattice(lipschitz).is_lattice
    v = k_is_lattice(quadratic["Z[(1+sqrt-15)/2]"])
    flag, report = v
    assert not flag and report.mu_sq > 1
    d, _ = closest_points(euclid_lattice(quadratic["Z[(1+sqrt-15)/2]"]), v.witness.vector())
    assert d > 1


def test_fundamental_domain(quadratic, dagger_lipschitz):
    for O in (quadratic["Z[sqrt-3]"], quadratic["Z[(1+sqrt-15)/2]"], dagger_lipschitz):
        F = fundamental_domain(O)
        assert F.lattice_flag == k_is_lattice(O).is_lattice
        assert O.algebra.zero in F.spheres
        assert len(F.parallelepiped) == euclid_lattice(O).rank


def _mc_uncovered(O, n=200000, seed=0):
    # independent check: sample the basis cell, test distance to nearby points
    (w1, w2) = [(float(q.x), float(q.y) * math.sqrt(float(-q.alg.a))) for q in O.basis]
    rng = np.random.default_rng(seed)
    s, t = rng.random(n), rng.random(n)
    P = np.stack([s * w1[0] + t * w2[0], s * w1[1] + t * w2[1]], axis=1)
    best = np.full(n, np.inf)
    for m, k in itertools.product(range(-2, 4), repeat=2):
        c = np.array([m * w1[0] + k * w2[0], m * w1[1] + k * w2[1]])
        best = np.minimum(best, ((P - c) ** 2).sum(axis=1))
    area = abs(w1[0] * w2[1] - w1[1] * w2[0])
    return area * float((best > 1).mean())


def test_uncovered_area(quadratic):
    a = uncovered_area(quadratic["Z[omega]"])
    assert a.exact_zero and a.hi == 0
    b = uncovered_area(quadratic["Z[sqrt-3]"])
    assert b.exact_zero and b.hi == 0
    c = uncovered_area(quadratic["Z[(1+sqrt-15)/2]"])
    assert not c.exact_zero and c.lo > 0
    assert c.lo == pytest.approx(0.0232687, abs=1e-6)
    assert _mc_uncovered(quadratic["Z[(1+sqrt-15)/2]"]) == pytest.approx(c.lo, rel=0.05)
    d = uncovered_area(quadratic["Z[sqrt-5]"])
    assert _mc_uncovered(quadratic["Z[sqrt-5]"]) == pytest.approx(d.lo, rel=0.05)


def test_render(quadratic, hurwitz, tmp_path):
    O = quadratic["Z[(1+sqrt-15)/2]"]
    docs = render_figures(O, RenderSpec(outdir=str(tmp_path), stem="o15"))
    assert set(docs) == {"cover", "floor"}
    for name, text in docs.items():
        assert 'width="800" height="800"' in text
        assert RED in text and BLUE in text and 'fill-opacity="0.4"' in text
        assert (tmp_path / f"o15_{name}.svg").read_text() == text
    assert GREY in docs["cover"]
    # byte-identical output on a second run
    assert render_figures(O) == docs
    covered = render_figures(quadratic["Z[omega]"])
    assert GREY not in covered["cover"]
    with pytest.raises(UnsupportedDimension):
        render_figures(hurwitz)
    with pytest.raises(ValueError):
        render_figures(O, RenderSpec(which=("solid",)))


def test_volume_estimate(quadratic):
    assert math.isinf(volume_estimate(quadratic["Z[(1+sqrt-15)/2]"]).value)
    v = volume_estimate(quadratic["Z[i]"], samples=20000)
    assert v.approximate and math.isfinite(v.value)
    # Monte Carlo value, so only a loose sanity bound
    assert 0.1 < v.value < 5
