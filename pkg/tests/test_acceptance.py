"""End-to-end acceptance checks, one test per criterion.

Each test records a verdict in ``conftest.ACCEPTANCE``; the terminal
summary prints one PASS/FAIL line per criterion.
"""

import csv
import io
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from oracles import brute_closest, delaunay_covering, random_lattice, same_class
from semieuclid import census as C
from semieuclid.euclid import Classification, classify_order, decompose, prod, random_elementary_product, verify_certificate
from semieuclid.geometry import Dihedral, check_relations, dihedral_from_distance, k_is_lattice, random_boundary_point, random_lattice_point
from semieuclid.lattices import closest_points, covering_radius
from semieuclid.orders import euclid_lattice, is_involution_maximal, is_maximal, orders_isomorphic, validate_order
from semieuclid.qarith import Algebra, Involution


def _start(n):
    ACCEPTANCE[n] = ("FAIL", "did not complete")


def _done(n, detail):
    ACCEPTANCE[n] = ("PASS", detail)


def _census_cli(dim):
    t = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "semieuclid", "census", "--dim", str(dim), "--stdout"],
                       capture_output=True, text=True, check=False)
    elapsed = time.perf_counter() - t
    assert p.returncode == 0, p.stderr
    rows = list(csv.DictReader(io.StringIO(p.stdout)))
    return rows, elapsed


def test_criterion_1_quadratic_table():
    _start(1)
    rows, elapsed = _census_cli(3)
    semi = [r for r in rows if r["semi"] == "1"]
    assert len(rows) == 6 and len(semi) == 1
    K = Algebra.quadratic(3)
    assert semi[0]["a"] == "-3" and semi[0]["b2"] == "0 1"
    records = C.run_census(3)
    assert C.records_to_csv(records).splitlines()[1:] == [",".join(r.values()) for r in rows]
    semi_rec = next(r for r in records if r.semi)
    assert orders_isomorphic(semi_rec.order, validate_order([K.one, K.i]))
    assert C.verify_tables(records, C.golden_orders(3)).ok
    assert elapsed < 60
    _done(1, f"6 orders, 1 semi-only (Z[sqrt-3]), flags match, {elapsed:.1f}s")


def test_criterion_2_quaternion_table():
    _start(2)
    rows, elapsed = _census_cli(5)
    assert len(rows) == 6
    assert sorted({int(r["disc"]) for r in rows}) == [2, 3, 5]
    assert sum(r["maximal"] == "1" and r["semi"] == "0" for r in rows) == 3
    assert sum(r["semi"] == "1" for r in rows) == 3
    assert C.verify_tables(C.run_census(5), C.golden_orders(5)).ok
    assert elapsed < 15 * 60
    _done(2, f"6 orders over disc 2, 3, 5: 3 maximal euclidean, 3 semi-only, {elapsed:.1f}s")


@pytest.mark.xfail(strict=True, reason="two shipped dim-4 rows are not dagger-stable; the census finds 20 orders, 5 semi-only")
def test_criterion_3_dagger_table():
    _start(3)
    rows, elapsed = _census_cli(4)
    semi = sum(r["semi"] == "1" for r in rows)
    pairs = {(r["disc"], r["disc_inv"]) for r in rows}
    rep = C.verify_tables(C.run_census(4), C.golden_orders(4))
    ACCEPTANCE[3] = ("FAIL", f"{len(rows)} orders / {semi} semi-only over {len(pairs)} disc pairs "
                             f"(target 22 / 7 / 11); {len(rep.matched)} rows matched, "
                             f"{len(rep.invalid_golden)} shipped rows invalid, {elapsed:.1f}s")
    assert elapsed < 2 * 3600
    assert len(rows) == 22 and semi == 7 and len(pairs) == 11
    _done(3, f"22 orders, 7 semi-only, {elapsed:.1f}s")


def test_criterion_4_deep_holes(census_records):
    _start(4)
    checked = 0
    for dim in (4, 5):
        groups = {}
        for h in C.golden_holes(dim):
            groups.setdefault(h.text, []).append(h)
        valid = {t: g for t, g in groups.items() if g[0].order is not None}
        semi = [r for r in census_records[dim] if r.semi]
        assert len(semi) == len(valid)
        for r in semi:
            assert all(h.norm() == 1 for h in r.deep_holes)
            assert all(s is not None and all(s.contains(b) for b in r.order.basis) for s in r.superorders)
            assert all(s.contains(h) for h, s in zip(r.deep_holes, r.superorders))
            maximal = is_involution_maximal if dim == 4 else is_maximal
            assert all(maximal(s) for s in r.superorders)
            match = [g for g in valid.values() if orders_isomorphic(g[0].order, r.order)]
            assert len(match) == 1
            g = match[0]
            assert len(g) == len(r.deep_holes)
            ok, _ = C.hole_classes_match(g[0].order, [h.alpha for h in g])
            assert ok
            checked += 1
        if dim == 5:
            assert sorted(len(r.deep_holes) for r in semi) == [1, 2, 4]
    _done(4, f"{checked} semi-only orders: hole classes match, norm 1, superorders exhibited "
             "(dim 5 classes 1, 4, 2; the 2 misprinted dim-4 rows skipped)")


def test_criterion_5_covering_radii(quadratic, lipschitz):
    _start(5)
    mu = {name: covering_radius(euclid_lattice(O)).mu_sq
          for name, O in [("Z[i]", quadratic["Z[i]"]), ("Z[sqrt-3]", quadratic["Z[sqrt-3]"]),
                          ("Lipschitz", lipschitz), ("Z[(1+sqrt-15)/2]", quadratic["Z[(1+sqrt-15)/2]"])]}
    assert mu["Z[i]"] == Fraction(1, 2)
    assert mu["Z[sqrt-3]"] == 1
    assert mu["Lipschitz"] == 1
    assert mu["Z[(1+sqrt-15)/2]"] > 1
    _done(5, ", ".join(f"{k}: {v}" for k, v in mu.items()))


def test_criterion_6_decomposition(census_records):
    _start(6)
    t = time.perf_counter()
    orders = [r.order for dim in (3, 4, 5) for r in census_records[dim]]
    runs = 0
    for n, O in enumerate(orders):
        rng = random.Random(600 + n)
        for _ in range(1000):
            M = random_elementary_product(O, rng.randint(1, 20), rng)
            cert = decompose(M, O)
            assert prod(cert.factors, O.algebra) == M
            assert all(x > y for x, y in zip(cert.descent, cert.descent[1:]))
            assert verify_certificate(M, cert, O)
            runs += 1
    elapsed = time.perf_counter() - t
    assert elapsed < 300
    _done(6, f"{runs} decompositions over {len(orders)} orders, all exact with strict descent, {elapsed:.1f}s")


def test_criterion_7_relations(census_records):
    _start(7)
    table = {1: Dihedral.PI_3, 2: Dihedral.PI_2, 3: Dihedral.PI_3, 4: Dihedral.ZERO}
    assert all(dihedral_from_distance(d) == a for d, a in table.items())
    evaluations = 0
    for dim in (3, 4, 5):
        for n, r in enumerate(census_records[dim]):
            rng = random.Random(700 + 10 * dim + n)
            for _ in range(50):
                a, b = random_lattice_point(r.order, rng), random_lattice_point(r.order, rng)
                samples = [random_boundary_point(r.order, rng) for _ in range(100)]
                assert check_relations(a, b, samples)
                evaluations += 100
    _done(7, f"dihedral angles pi/3, pi/2, pi/3, 0; relations hold at {evaluations} sample points")


def _non_examples():
    out = []
    def quad(d, f=1, half=False):
        K = Algebra.quadratic(d)
        w = (K.one + K.i) / 2 if half else K.i
        return validate_order([K.one, f * w])
    out += [quad(d, half=True) for d in (15, 19, 23, 31, 35, 43)]
    out += [quad(d) for d in (5, 6, 7, 10, 13)]
    out += [quad(1, 2), quad(1, 3), quad(2, 2)]
    H = Algebra.quaternion(-1, -1)
    one, i, j, k = H.basis()
    out += [validate_order([one, 2 * i, j, 2 * k]), validate_order([one, i, 2 * j, 2 * k])]
    for D in (7, 11, 13):
        out += C.maximal_order_types(C.quaternion_representative(D))
    H2 = Algebra.quaternion(-1, -2)
    one, i, j, k = H2.basis()
    out.append(validate_order([one, i, 2 * j, 2 * k], Involution.orthogonal(H2)))
    H7 = Algebra.quaternion(-1, -7)
    one, i, j, k = H7.basis()
    out.append(validate_order([one, i, j, k], Involution.orthogonal(H7)))
    return out


def test_criterion_8_criterion_consistency(census_records):
    _start(8)
    census = [r.order for dim in (3, 4, 5) for r in census_records[dim]]
    non = _non_examples()
    assert len(non) >= 20
    assert all(classify_order(O) == Classification.NOT_SEMI for O in non)
    for O in census + non:
        assert k_is_lattice(O).is_lattice == (classify_order(O) != Classification.NOT_SEMI)
    _done(8, f"agreement on {len(census)} census orders and {len(non)} non-examples")


def test_criterion_9_oracles():
    _start(9)
    for seed in range(50):
        rng = random.Random(9000 + seed)
        L = random_lattice(rng)
        for _ in range(3):
            t = [Fraction(rng.randint(-12, 12), rng.randint(1, 5)) for _ in range(L.dim)]
            d, pts = closest_points(L, t)
            assert (d, sorted(pts)) == brute_closest(L, t)
        rep = covering_radius(L)
        mu, holes = delaunay_covering(L)
        assert rep.mu_sq == mu
        assert all(any(same_class(L, h, r) for r in rep.holes) for h in holes)
        assert all(any(same_class(L, h, r) for h in holes) for r in rep.holes)
    _done(9, "closest points and covering radius agree with brute force on 50 lattices")
