"""Enumeration of the orders whose Euclidean lattice has covering radius <= 1.

Three pipelines are provided.

* ``maximal``: enumerate algebras up to a discriminant bound, build their
  maximal orders (one by saturation, the rest by prime-neighbour steps),
  keep those with covering radius <= 1 and search their suborders of
  bounded index.  Used for quadratic fields and bare quaternion algebras.
* ``minima``: enumerate the Gram matrices of a reduced basis 1, w2, ...
  of norms at most 4 directly and rebuild the algebra from each Gram
  matrix.  A cross-check for the first pipeline.
* ``lattice``: the orthogonal-involution case.  The fixed lattice is
  enumerated first (a rank 3 lattice 1, u, v), and every involution-stable
  order with that fixed lattice is assembled from it.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .euclid import Classification, classify_with_report
from .lattices import GramLattice, covering_radius, det_fraction, short_vectors
from .orders import (
    OrderLattice,
    OrderValidationError,
    euclid_lattice,
    invariants,
    is_involution_maximal,
    is_maximal,
    lattice_from,
    maximalize,
    neighbors,
    orders_isomorphic,
    reduced_discriminant,
    ring_closure,
    validate_order,
)
from .qarith import (
    Algebra,
    Involution,
    Quat,
    algebra_discriminant,
    factor,
    field_discriminant,
    parse_quat,
    squarefree_part,
)

# ---------------------------------------------------------------- bounds


@dataclass(frozen=True)
class SearchBounds:
    """Search limits.

    ``max_disc`` bounds disc(H) (or |disc| of the quadratic order for
    dim 3), ``max_norm_xi`` bounds nrm(xi) for dim 4, ``index_rule``
    selects the suborder index bound, and ``max_basis_norm`` bounds the
    norms of the short basis vectors.
    """

    dim: int
    max_disc: int
    max_norm_xi: int | None = None
    index_rule: str = "covolume"
    max_basis_norm: Fraction = Fraction(4)
    method: str = "maximal"

    def max_index(self, disc: int) -> int:
        if self.dim == 3:
            # conductor f with f^2 |D_K| <= max_disc
            return math.isqrt(self.max_disc // disc)
        if self.index_rule == "covolume":
            # index <= 60 / sqrt(disc)
            return math.isqrt(3600 // disc)
        if self.index_rule == "hadamard":
            # covolume d/4 * index <= 1 * 2 * 2 * 2
            return 32 // disc
        raise ValueError(f"unknown index rule {self.index_rule!r}")


def default_bounds(dim: int) -> SearchBounds:
    if dim == 3:
        # covolume sqrt|D|/2 <= lambda_1 lambda_2 <= 2
        return SearchBounds(3, 16)
    if dim == 4:
        return SearchBounds(4, 201, 201, method="lattice")
    if dim == 5:
        return SearchBounds(5, 119)
    raise ValueError("dim must be 3, 4 or 5")


def alternative_bounds(dim: int) -> SearchBounds:
    """The tighter discriminant limit read off the covolume chain."""
    if dim == 5:
        return SearchBounds(5, 59)
    if dim == 3:
        return SearchBounds(3, 16)
    return SearchBounds(4, 201, 201, method="lattice")


def hadamard_bounds(dim: int) -> SearchBounds:
    """Rigorous bounds from covolume <= product of the witness lengths."""
    if dim == 5:
        return SearchBounds(5, 32, index_rule="hadamard")
    return default_bounds(dim)


# ---------------------------------------------------------------- algebras


@dataclass(frozen=True)
class AlgebraEntry:
    dim: int
    disc: int
    algebra: Algebra
    norm_xi: int | None = None

    @property
    def disc_inv(self) -> int | None:
        return None if self.norm_xi is None else -self.norm_xi


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factor(n).values())


def ramified_discriminants(bound: int) -> list[int]:
    """Discriminants of definite rational quaternion algebras up to bound."""
    out = []
    for D in range(2, bound + 1):
        if _is_squarefree(D) and len(factor(D)) % 2 == 1:
            out.append(D)
    return out


def quaternion_representative(D: int, m: int | None = None, limit: int = 5000) -> Algebra:
    """(-p, -q) of discriminant D with p then q minimal; nrm(ij) = pq in the
    square class of m when m is given."""
    for p in range(1, limit):
        if m is None:
            odd = [r for r in factor(D) if r != 2]
            for q in range(p, limit):
                # every odd ramified prime divides pq
                if any((p * q) % r for r in odd):
                    continue
                if algebra_discriminant(-p, -q) == D:
                    return Algebra.quaternion(-p, -q)
                if q > 4 * D * D + 8:
                    break
        else:
            mp = m * p
            s = 1
            for prime, e in factor(mp).items():
                s *= prime ** (e // 2)
            q = mp // (s * s)
            if algebra_discriminant(-p, -q) == D:
                return Algebra.quaternion(-p, -q)
    raise ValueError(f"no representative found for D={D}, m={m}")


def _embeds(D: int, m: int) -> bool:
    """Q(sqrt(-m)) embeds in the algebra of discriminant D, i.e. no prime
    dividing D splits in it."""
    dk = field_discriminant(-m)
    for p in factor(D):
        if p == 2:
            if dk % 8 == 1:
                return False
        elif dk % p and pow(dk % p, (p - 1) // 2, p) == 1:
            return False
    return True


def enumerate_algebras(bounds: SearchBounds) -> list[AlgebraEntry]:
    if bounds.dim == 3:
        out = []
        for m in range(1, bounds.max_disc + 1):
            if not _is_squarefree(m):
                continue
            dk = abs(field_discriminant(-m))
            if dk <= bounds.max_disc:
                out.append(AlgebraEntry(3, dk, Algebra.quadratic(m)))
        return sorted(out, key=lambda e: e.disc)
    if bounds.dim == 5:
        return [AlgebraEntry(5, D, quaternion_representative(D)) for D in ramified_discriminants(bounds.max_disc)]
    if bounds.dim == 4:
        out = []
        for D in ramified_discriminants(bounds.max_disc):
            for m in range(1, (bounds.max_norm_xi or 201) + 1):
                if _is_squarefree(m) and _embeds(D, m):
                    out.append(AlgebraEntry(4, D, quaternion_representative(D, m), m))
        return out
    raise ValueError("dim must be 3, 4 or 5")


def canonical_algebra(disc: int, norm_xi: int | None = None) -> Algebra:
    return quaternion_representative(disc, norm_xi)


# ---------------------------------------------------------------- records


@dataclass
class CensusRecord:
    dim: int
    order: OrderLattice
    classification: Classification
    maximal: bool
    mu_sq: Fraction
    deep_holes: tuple[Quat, ...] = ()
    superorders: tuple[OrderLattice | None, ...] = ()
    disc: int = 0
    disc_inv: int | None = None
    reduced_disc: int = 0

    @property
    def semi(self) -> bool:
        return self.classification == Classification.SEMI

    def sort_key(self):
        m = -self.disc_inv if self.disc_inv is not None else 0
        return (self.disc, m, self.reduced_disc, not self.maximal,
                [tuple(q.vector()) for q in self.order.basis])

    def to_dict(self) -> dict:
        alg = self.order.algebra
        return {
            "dim": self.dim,
            "key": self.order.key,
            "algebra": {"a": str(alg.a), "b": None if alg.b is None else str(alg.b)},
            "disc": self.disc,
            "disc_inv": self.disc_inv,
            "basis": [[str(c) for c in q.vector()] for q in self.order.basis],
            "basis_text": [str(q) for q in self.order.basis],
            "reduced_disc": self.reduced_disc,
            "maximal": self.maximal,
            "classification": self.classification.value,
            "semi": self.semi,
            "mu_sq": str(self.mu_sq),
            "deep_holes": [[str(c) for c in h.vector()] for h in self.deep_holes],
            "superorders": [None if s is None else [[str(c) for c in q.vector()] for q in s.basis]
                            for s in self.superorders],
        }


def _record(O: OrderLattice) -> CensusRecord:
    cls, rep = classify_with_report(O)
    alg = O.algebra
    if O.dim == 3:
        maximal = is_maximal(O)
        disc = alg.discriminant
    elif O.dim == 4:
        maximal = is_involution_maximal(O)
        disc = alg.discriminant
    else:
        maximal = is_maximal(O)
        disc = alg.discriminant
    holes: tuple[Quat, ...] = ()
    supers: tuple = ()
    if cls == Classification.SEMI:
        entries = deep_hole_table(O)
        holes = tuple(e.alpha for e in entries)
        supers = tuple(e.superorder for e in entries)
    return CensusRecord(
        dim=O.dim,
        order=O,
        classification=cls,
        maximal=maximal,
        mu_sq=rep.mu_sq,
        deep_holes=holes,
        superorders=supers,
        disc=disc,
        disc_inv=O.involution.disc if O.dim == 4 else None,
        reduced_disc=reduced_discriminant(O),
    )


@dataclass(frozen=True)
class HoleEntry:
    alpha: Quat
    superorder: OrderLattice | None


def deep_hole_table(O: OrderLattice) -> list[HoleEntry]:
    """One deep hole per translation class with a maximal order containing
    it and O (a maximal involution-stable order in the dim 4 case)."""
    L = euclid_lattice(O)
    rep = covering_radius(L)
    inv = O.involution if O.dim == 4 else None
    out = []
    for h in rep.holes:
        alpha = Quat(O.algebra, *h)
        R = ring_closure(list(O.basis) + [alpha], inv)
        out.append(HoleEntry(alpha, maximalize(R) if R is not None else None))
    return out


# ---------------------------------------------------------------- store


class RecordStore:
    """Directory of JSON records keyed by the canonical order hash."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)

    def _file(self, key: str) -> Path:
        return self.path / f"{key}.json"

    def get(self, key: str) -> dict | None:
        f = self._file(key)
        if f.exists():
            return json.loads(f.read_text())
        return None

    def put(self, record: CensusRecord) -> None:
        self._file(record.order.key).write_text(json.dumps(record.to_dict(), indent=1, sort_keys=True))

    def keys(self) -> list[str]:
        return sorted(p.stem for p in self.path.glob("*.json"))


# ---------------------------------------------------------------- dedupe


def dedupe(orders: Iterable[OrderLattice]) -> list[OrderLattice]:
    """One representative per isomorphism class (involutions respected)."""
    buckets: dict[tuple, list[OrderLattice]] = {}
    for O in orders:
        key = invariants(O)
        reps = buckets.setdefault(key, [])
        if not any(orders_isomorphic(O, R) for R in reps):
            reps.append(O)
    return [O for reps in buckets.values() for O in reps]


# ---------------------------------------------------------------- maximal orders


def maximal_order_types(alg: Algebra) -> list[OrderLattice]:
    """Representatives of the isomorphism classes of maximal orders, found
    by a breadth-first search over prime-neighbour steps."""
    start = maximalize(validate_order(alg.basis()))
    D = alg.discriminant
    ell = next(p for p in itertools.count(2) if D % p and all(p % r for r in range(2, p)))
    found = [start]
    keys = [invariants(start)]
    queue = [start]
    while queue:
        O = queue.pop(0)
        for N in neighbors(O, ell):
            key = invariants(N)
            if any(k == key and orders_isomorphic(N, R) for k, R in zip(keys, found)):
                continue
            found.append(N)
            keys.append(key)
            queue.append(N)
    return found


# ---------------------------------------------------------------- suborders


def _hnf3_of_index(N: int):
    """Upper-triangular HNF bases of the index-N sublattices of Z^3."""
    for d1 in range(1, N + 1):
        if N % d1:
            continue
        for d2 in range(1, N // d1 + 1):
            if (N // d1) % d2:
                continue
            d3 = N // (d1 * d2)
            for a in range(d2):
                for b in range(d3):
                    for c in range(d3):
                        yield ((d1, a, b), (0, d2, c), (0, 0, d3))


def _in_hnf3(x: Sequence[int], H) -> bool:
    (d1, a, b), (_, d2, c), (_, _, d3) = H
    x1, x2, x3 = x
    if x1 % d1:
        return False
    k = x1 // d1
    x2 -= k * a
    x3 -= k * b
    if x2 % d2:
        return False
    x3 -= (x2 // d2) * c
    return x3 % d3 == 0


def enumerate_suborders(O_max: OrderLattice, bounds: SearchBounds) -> list[OrderLattice]:
    """Suborders of O_max (containing 1) of index up to the bound whose
    Euclidean lattice has its top successive minimum at most the bound on
    basis norms; involution-stable ones only when O_max has an involution."""
    disc = O_max.algebra.discriminant
    N_max = bounds.max_index(disc)
    if O_max.rank == 2:
        out = []
        w = O_max.basis[1]
        for f in range(1, N_max + 1):
            out.append(validate_order([O_max.algebra.one, w * f]))
        return out
    R = O_max.ring
    if R.one != [1, 0, 0, 0]:
        raise ValueError("basis of the maximal order must start with 1")
    n = 4
    out = []
    units = [[int(i == j) for j in range(n)] for i in range(n)]
    prods = [[R.mul(units[i], units[j]) for j in range(1, n)] for i in range(1, n)]
    # vectors of the maximal order short enough to be in a reduced basis
    E = euclid_lattice(O_max)
    short = [E.ambient(c) for _, c in short_vectors(E, bounds.max_basis_norm)]
    short = np.array([O_max.coordinates(Quat(O_max.algebra, *c)) for c in short], dtype=np.int64)
    for N in range(1, N_max + 1):
        for H in _hnf3_of_index(N):
            gens = [[0] + list(row) for row in H]
            ok = True
            for i in range(3):
                for j in range(3):
                    # product of gens[i] and gens[j] in O-coordinates
                    z = [0] * n
                    gi, gj = gens[i], gens[j]
                    for p in range(1, n):
                        if not gi[p]:
                            continue
                        for q in range(1, n):
                            if gj[q]:
                                c = gi[p] * gj[q]
                                pr = prods[p - 1][q - 1]
                                for k in range(n):
                                    z[k] += c * pr[k]
                    if not _in_hnf3(z[1:], H):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            if O_max.involution is not None:
                if not all(_in_hnf3(R.dagger(g)[1:], H) for g in gens):
                    continue
            if not _spans_full_rank(short, H, O_max.involution is not None and O_max.dim == 4, R):
                continue
            basis = [O_max.algebra.one] + [R.element(g) for g in gens]
            out.append(OrderLattice(O_max.algebra, lattice_from(basis), O_max.involution))
    return out


def _spans_full_rank(short: np.ndarray, H, fixed_only: bool, R) -> bool:
    """Whether the short vectors lying in the sublattice Z1 + span(H) have
    full rank (the rank of the Euclidean lattice)."""
    (d1, a, b), (_, d2, c), (_, _, d3) = H
    x1, x2, x3 = short[:, 1], short[:, 2], short[:, 3]
    k = x1 // d1
    r2 = x2 - k * a
    r3 = x3 - k * b - (r2 // d2) * c
    inside = (x1 % d1 == 0) & (r2 % d2 == 0) & (r3 % d3 == 0)
    vecs = short[inside]
    # the short list only holds fixed vectors in dim 4, so rank 3 is full there
    full = 3 if fixed_only else 4
    return len(vecs) >= full and np.linalg.matrix_rank(vecs.astype(float)) == full


# ---------------------------------------------------------------- pipelines


def _maximal_pipeline(bounds: SearchBounds) -> list[OrderLattice]:
    found = []
    for entry in enumerate_algebras(bounds):
        if bounds.dim == 3:
            K = entry.algebra
            d = squarefree_part(K.a)
            w = K.i if d % 4 != 1 else (K.one + K.i) * Fraction(1, 2)
            maxima = [validate_order([K.one, w])]
        else:
            maxima = maximal_order_types(entry.algebra)
        for M in maxima:
            if covering_radius(euclid_lattice(M)).mu_sq > 1:
                continue
            for S in enumerate_suborders(M, bounds):
                if covering_radius(euclid_lattice(S)).mu_sq <= 1:
                    found.append(S)
    return dedupe(found)


def _sqrt_fraction(q: Fraction) -> Fraction | None:
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _scale_to_squarefree(x: Fraction) -> tuple[int, Fraction]:
    """x = lam^2 * s with s a squarefree integer."""
    s = squarefree_part(x)
    lam = _sqrt_fraction(x / s)
    assert lam is not None
    return s, lam


def _embed_pure(B: Sequence[Sequence[Fraction]]):
    """Pure vectors realising a positive definite Gram matrix B (2x2 or 3x3)
    in a quaternion algebra.  Returns (algebra, vectors) or None."""
    B11 = B[0][0]
    a, lam_a = _scale_to_squarefree(-B11)
    det2 = B[0][0] * B[1][1] - B[0][1] ** 2
    c = det2 / B11
    b, lam_b = _scale_to_squarefree(-c)
    H = Algebra.quaternion(a, b)
    i, j = H.i, H.j
    e1 = i * lam_a
    mu = B[0][1] / B11
    e2 = e1 * mu + j * lam_b
    vecs = [e1, e2]
    if len(B) == 3:
        det3 = det_fraction(B)
        # coefficients of the third vector against e1, e2, then the part
        # along the ij line (ij is orthogonal to span(i, j) and has norm ab)
        dM = det2
        x1 = (B[0][2] * B[1][1] - B[1][2] * B[0][1]) / dM
        x2 = (B[0][0] * B[1][2] - B[1][0] * B[0][2]) / dM
        s = _sqrt_fraction(det3 / det2 / H.k.norm())
        if s is None:
            return None
        e3 = e1 * x1 + e2 * x2 + H.k * s
        vecs.append(e3)
    return H, vecs


def _lattice_pipeline_dim4(bounds: SearchBounds) -> list[OrderLattice]:
    """Involution-stable orders from their fixed lattices 1, u, v."""
    top = int(bounds.max_basis_norm)
    found = []
    for nu in range(1, top + 1):
        for nv in range(nu, top + 1):
            for tu, tv in itertools.product((0, 1), repeat=2):
                for s in range(-nu, nu + 1):
                    G = [[Fraction(1), Fraction(tu, 2), Fraction(tv, 2)],
                         [Fraction(tu, 2), Fraction(nu), Fraction(s, 2)],
                         [Fraction(tv, 2), Fraction(s, 2), Fraction(nv)]]
                    if det_fraction(G) <= 0 or G[0][0] * G[1][1] - G[0][1] ** 2 <= 0:
                        continue
                    if _gram_mu_sq(G) > 1:
                        continue
                    B = [[G[r][c] - G[0][r] * G[0][c] for c in (1, 2)] for r in (1, 2)]
                    H, (e1, e2) = _embed_pure(B)
                    one = H.one
                    u = one * Fraction(tu, 2) + e1
                    v = one * Fraction(tv, 2) + e2
                    found.extend(_orders_over_fixed_lattice(H, [one, u, v]))
    return dedupe(found)


def _gram_mu_sq(G) -> Fraction:
    return covering_radius(_lattice_from_gram(G)).mu_sq


def _lattice_from_gram(G) -> GramLattice:
    """A lattice with Gram matrix G (rational Gram-Schmidt with diagonal form)."""
    n = len(G)
    # basis vectors in a space with diagonal form diag(bstar)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bs = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j] - sum((mu[j][l] * mu[i][l] * bs[l] for l in range(j)), Fraction(0))
            mu[i][j] = s / bs[j]
        bs[i] = G[i][i] - sum((mu[i][l] ** 2 * bs[l] for l in range(i)), Fraction(0))
    basis = [[mu[i][j] if j < i else (Fraction(1) if j == i else Fraction(0)) for j in range(n)] for i in range(n)]
    return GramLattice(basis, bs)


def _orders_over_fixed_lattice(H: Algebra, lam: list[Quat]) -> list[OrderLattice]:
    inv = Involution.orthogonal(H)
    one, u, v = lam
    comm = u * v - v * u
    N = comm.norm()
    out = []
    k = 1
    while k * k <= N * 4:
        if (N / (k * k)).denominator == 1:
            eta = comm * Fraction(1, k)
            cands = [[one, u, v, eta]]
            for eps in itertools.product((0, 1), repeat=3):
                if not any(eps):
                    continue
                lam_e = one * eps[0] + u * eps[1] + v * eps[2]
                cands.append([one, u, v, (lam_e + eta) * Fraction(1, 2)])
            for basis in cands:
                if not all(q.is_integral() for q in basis):
                    continue
                try:
                    out.append(validate_order(basis, inv))
                except OrderValidationError:
                    pass
        k += 1
    return out


def _minima_pipeline(bounds: SearchBounds) -> list[OrderLattice]:
    """Orders rebuilt from reduced Gram matrices of 1, w2, ..., w_n."""
    top = int(bounds.max_basis_norm)
    found = []
    if bounds.dim == 3:
        for n in range(1, top + 1):
            for t in (0, 1):
                D = t * t - 4 * n
                K = Algebra.quadratic(-squarefree_part(D))
                # u = (t + sqrt(D)) / 2
                lam = _sqrt_fraction(Fraction(D, squarefree_part(D)))
                u = K.one * Fraction(t, 2) + K.i * (lam / 2)
                O = validate_order([K.one, u])
                if covering_radius(O.lattice).mu_sq <= 1:
                    found.append(O)
        return dedupe(found)
    for n2, n3, n4 in itertools.combinations_with_replacement(range(1, top + 1), 3):
        for t2, t3, t4 in itertools.product((0, 1), repeat=3):
            for s23 in range(-n2, n2 + 1):
                for s24 in range(-n2, n2 + 1):
                    for s34 in range(-n3, n3 + 1):
                        G = [[Fraction(1), Fraction(t2, 2), Fraction(t3, 2), Fraction(t4, 2)],
                             [Fraction(t2, 2), Fraction(n2), Fraction(s23, 2), Fraction(s24, 2)],
                             [Fraction(t3, 2), Fraction(s23, 2), Fraction(n3), Fraction(s34, 2)],
                             [Fraction(t4, 2), Fraction(s24, 2), Fraction(s34, 2), Fraction(n4)]]
                        found.extend(_orders_from_gram(G))
    return dedupe(found)


def _orders_from_gram(G) -> list[OrderLattice]:
    B = [[G[r][c] - G[0][r] * G[0][c] for c in (1, 2, 3)] for r in (1, 2, 3)]
    if B[0][0] <= 0 or B[0][0] * B[1][1] - B[0][1] ** 2 <= 0:
        return []
    d3 = det_fraction(B)
    if d3 <= 0 or _sqrt_fraction(d3) is None:
        return []
    # d(O)^2 = 16 det G must be an integer square for the lattice or its
    # index-2 extensions
    dG = det_fraction(G)
    sq = 16 * dG
    ok_full = sq.denominator == 1 and _sqrt_fraction(sq) is not None
    ok_half = (sq / 4).denominator == 1 and _sqrt_fraction(sq / 4) is not None
    if not (ok_full or ok_half):
        return []
    emb = _embed_pure(B)
    if emb is None:
        return []
    H, vecs = emb
    one = H.one
    w = [one] + [one * G[0][k] + vecs[k - 1] for k in (1, 2, 3)]
    cands = []
    if ok_full:
        cands.append(w)
    if ok_half:
        for eps in itertools.product((0, 1), repeat=4):
            if any(eps):
                h = sum((w[k] * eps[k] for k in range(4) if eps[k]), H.zero) * Fraction(1, 2)
                if h.is_integral():
                    cands.append(w + [h])
    out = []
    for gens in cands:
        basis = lattice_from(gens)
        if not all(q.is_integral() for q in basis):
            continue
        try:
            O = validate_order(basis)
        except OrderValidationError:
            continue
        if covering_radius(O.lattice).mu_sq <= 1:
            out.append(O)
    return out


# ---------------------------------------------------------------- transport


def _conic_points(p0: int, q0: int, p2: Fraction, limit: int = 40):
    """Rational (x, y) with p0 x^2 + q0 y^2 = p2, in order of height."""
    seen = set()
    for h in range(1, limit + 1):
        for Z in range(1, h + 1):
            t = p2 * Z * Z
            for X in range(-h, h + 1):
                rem = t - p0 * X * X
                if rem < 0:
                    continue
                r = _sqrt_fraction(rem / q0)
                if r is None or r.numerator > h:
                    continue
                for y in {r, -r}:
                    pt = (Fraction(X, Z), y / Z)
                    if pt not in seen:
                        seen.add(pt)
                        yield pt


def _height(O: OrderLattice) -> tuple:
    dens = [q.den for q in O.basis]
    nums = [abs(c) for q in O.basis for c in q.num]
    return (max(dens), sum(dens), max(nums), sum(nums))


def transport(O: OrderLattice, target: Algebra, tries: int = 48) -> OrderLattice:
    """Image of O under an isomorphism onto the target algebra mapping
    span(1, i, j) to itself, so the orthogonal involution is respected.
    Among the isomorphisms found the one giving the smallest basis wins.
    Returns O unchanged when none is found."""
    H = O.algebra
    p0, q0 = -target.a, -target.b
    if p0.denominator != 1 or q0.denominator != 1:
        return O
    inv = Involution.orthogonal(target) if O.involution is not None else None
    best = O if H == target else None
    for n, (x, y) in enumerate(_conic_points(int(p0), int(q0), -H.a)):
        if n >= tries:
            break
        i2 = target.i * x + target.j * y
        # orthogonal complement in span(i, j), scaled to norm -b
        w = target.i * (q0 * y) - target.j * (p0 * x)
        s = _sqrt_fraction((-H.b) / w.norm())
        if s is None:
            continue
        for j2 in (w * s, w * -s):
            k2 = i2 * j2
            img = [target.one * q.coords[0] + i2 * q.coords[1] + j2 * q.coords[2] + k2 * q.coords[3]
                   for q in O.basis]
            cand = validate_order(img, inv)
            if best is None or best.algebra != target or _height(cand) < _height(best):
                best = cand
    return best if best is not None else O


def _present(O: OrderLattice) -> OrderLattice:
    """Move an order into the canonical representative algebra."""
    if not O.algebra.is_quaternion:
        return O
    D = O.algebra.discriminant
    if O.dim == 4:
        target = canonical_algebra(D, O.involution.disc * -1)
    else:
        target = canonical_algebra(D)
    return transport(O, target)


# ---------------------------------------------------------------- driver


def census_orders(dim: int, bounds: SearchBounds | None = None) -> list[OrderLattice]:
    """Representatives of the orders with covering radius <= 1."""
    bounds = bounds or default_bounds(dim)
    if bounds.dim != dim:
        raise ValueError("bounds are for another dimension")
    return list(_census_orders(bounds))


@lru_cache(maxsize=None)
def _census_orders(bounds: SearchBounds) -> tuple[OrderLattice, ...]:
    if bounds.method == "minima":
        orders = _minima_pipeline(bounds)
    elif bounds.dim == 4:
        orders = _lattice_pipeline_dim4(bounds)
    else:
        orders = _maximal_pipeline(bounds)
    return tuple(_present(O) for O in orders)


def run_census(dim: int, bounds: SearchBounds | None = None, store: RecordStore | None = None,
               workers: int = 1) -> list[CensusRecord]:
    """Isomorphism classes of orders with covering radius at most 1, with
    classification, maximality and deep-hole data, sorted canonically."""
    orders = census_orders(dim, bounds)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            records = list(ex.map(_record, orders))
    else:
        records = [_record(O) for O in orders]
    if store is not None:
        for r in records:
            store.put(r)
    records.sort(key=CensusRecord.sort_key)
    if dim == 4:
        for r in records:
            assert _embeds(r.disc, -r.disc_inv), "involution discriminant not realisable"
    return records


# ---------------------------------------------------------------- output


CSV_FIELDS = ["dim", "a", "b", "disc", "disc_inv", "b1", "b2", "b3", "b4", "reduced_disc",
              "maximal", "semi", "classification", "mu_sq", "holes"]


def records_to_csv(records: Sequence[CensusRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        alg = r.order.algebra
        basis = [" ".join(str(c) for c in q.vector()) for q in r.order.basis] + [""] * (4 - r.order.rank)
        w.writerow([r.dim, alg.a, "" if alg.b is None else alg.b, r.disc,
                    "" if r.disc_inv is None else r.disc_inv, *basis, r.reduced_disc,
                    int(r.maximal), int(r.semi), r.classification.value, r.mu_sq,
                    ";".join(" ".join(str(c) for c in h.vector()) for h in r.deep_holes)])
    return buf.getvalue()


def records_to_json(records: Sequence[CensusRecord]) -> str:
    return json.dumps([r.to_dict() for r in records], indent=1)


# ---------------------------------------------------------------- golden tables


@dataclass
class GoldenRow:
    dim: int
    order: OrderLattice | None
    maximal: bool
    semi: bool
    text: str
    error: str | None = None


@dataclass
class GoldenHole:
    dim: int
    order: OrderLattice | None
    alpha: Quat
    superorder: OrderLattice | None
    text: str = ""


def _data(name: str) -> str:
    return resources.files("semieuclid").joinpath("data").joinpath(name).read_text()


def _rows(name: str):
    return list(csv.DictReader(io.StringIO(_data(name))))


def _build(alg: Algebra, cells: list[str], inv: Involution | None) -> OrderLattice:
    return validate_order([parse_quat(alg, c) for c in cells], inv)


def golden_orders(dim: int) -> list[GoldenRow]:
    out = []
    if dim == 3:
        for r in _rows("orders_dim3.csv"):
            K = Algebra.quadratic(int(r["d"]))
            cells = [r["b1"], r["b2"]]
            out.append(_golden_row(3, K, cells, None, r))
        return out
    name = "orders_dim4.csv" if dim == 4 else "orders_dim5.csv"
    for r in _rows(name):
        H = Algebra.quaternion(int(r["a"]), int(r["b"]))
        inv = Involution.orthogonal(H) if dim == 4 else None
        cells = [r[k] for k in ("b1", "b2", "b3", "b4")]
        out.append(_golden_row(dim, H, cells, inv, r))
    return out


def _golden_row(dim, alg, cells, inv, r) -> GoldenRow:
    text = "; ".join(str(parse_quat(alg, c)) for c in cells)
    try:
        O = _build(alg, cells, inv)
        err = None
    except OrderValidationError as exc:
        O, err = None, str(exc)
    return GoldenRow(dim, O, r["maximal"] == "1", r["semi"] == "1", text, err)


def golden_holes(dim: int) -> list[GoldenHole]:
    """Deep-hole rows.  Cells that do not describe an order (misprints in
    the source table) are loaded as None."""
    name = "holes_dim4.csv" if dim == 4 else "holes_dim5.csv"
    out = []
    for r in _rows(name):
        H = Algebra.quaternion(int(r["a"]), int(r["b"]))
        inv = Involution.orthogonal(H) if dim == 4 else None
        cells = [r[k] for k in ("b1", "b2", "b3", "b4")]
        try:
            O = _build(H, cells, inv)
        except OrderValidationError:
            O = None
        sup = None
        if r["o1"]:
            try:
                sup = _build(H, [r[k] for k in ("o1", "o2", "o3", "o4")], inv)
            except OrderValidationError:
                pass
        out.append(GoldenHole(dim, O, parse_quat(H, r["alpha"]), sup, "; ".join(cells)))
    return out


@dataclass
class VerifyReport:
    dim: int
    matched: list[tuple[int, int]] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)
    extra: list[str] = field(default_factory=list)
    flag_mismatch: list[str] = field(default_factory=list)
    invalid_golden: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.flag_mismatch or self.invalid_golden)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "ok": self.ok, "matched": len(self.matched), "missing": self.missing,
                "extra": self.extra, "flag_mismatch": self.flag_mismatch,
                "invalid_golden": self.invalid_golden}


def verify_tables(records: Sequence[CensusRecord], golden: Sequence[GoldenRow]) -> VerifyReport:
    """Match census records with golden rows up to isomorphism."""
    dim = records[0].dim if records else golden[0].dim
    rep = VerifyReport(dim)
    used: set[int] = set()
    for gi, g in enumerate(golden):
        if g.order is None:
            rep.invalid_golden.append(f"{g.text}: {g.error}")
            continue
        hit = None
        for ri, r in enumerate(records):
            if ri in used:
                continue
            if r.dim == g.dim and orders_isomorphic(r.order, g.order):
                hit = ri
                break
        if hit is None:
            rep.missing.append(g.text)
            continue
        used.add(hit)
        rep.matched.append((gi, hit))
        r = records[hit]
        if r.maximal != g.maximal or r.semi != g.semi:
            rep.flag_mismatch.append(
                f"{g.text}: table maximal={g.maximal} semi={g.semi}, computed maximal={r.maximal} semi={r.semi}")
    for ri, r in enumerate(records):
        if ri not in used:
            rep.extra.append("; ".join(str(q) for q in r.order.basis))
    return rep


def hole_classes_match(O: OrderLattice, alphas: Sequence[Quat]) -> tuple[bool, list[Quat]]:
    """Whether the given elements are exactly one per deep hole class of O.

    Returns the verdict and the computed representatives."""
    L = euclid_lattice(O)
    computed = [Quat(O.algebra, *h) for h in covering_radius(L).holes]
    def cls(q: Quat):
        for k, c in enumerate(computed):
            if L.contains((q - c).vector()):
                return k
        return None
    ks = [cls(a) for a in alphas]
    ok = None not in ks and sorted(ks) == list(range(len(computed)))
    return ok, computed
