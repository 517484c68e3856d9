"""Orders in imaginary quadratic fields and definite quaternion algebras.

An order is stored by a canonical basis: the Hermite normal form taken with
pivots sought from the last coordinate down, listed so that 1 comes first.
For the Hurwitz order this is 1, i, j, (1+i+j+ij)/2.

``OrderRing`` is the integer view of an order (structure constants in its
own basis), used wherever many products or norms are needed.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .lattices import (
    GramLattice,
    covering_radius,
    hnf_int,
    hnf_rational,
    inverse_fraction,
    lattice_intersection,
    short_vectors,
    theta_series,
)
from .qarith import Algebra, Involution, Quat, factor


class OrderValidationError(ValueError):
    """The proposed lattice is not an order."""


def _reversed_hnf(vectors: Sequence[Sequence[Fraction]], n: int) -> list[tuple[Fraction, ...]]:
    rows = hnf_rational(vectors, columns=list(range(n - 1, -1, -1)))
    return rows[::-1]


def integer_kernel(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x in Z^m : x M = 0} for an m x k integer matrix M."""
    m = len(M)
    k = len(M[0]) if M else 0
    aug = [list(M[r]) + [int(r == c) for c in range(m)] for r in range(m)]
    H = hnf_int(aug, columns=list(range(k)) + list(range(k, k + m)))
    return [row[k:] for row in H if not any(row[:k])]


class OrderLattice:
    """An order, optionally with an involution it is stable under."""

    def __init__(self, algebra: Algebra, basis: Sequence[Quat], involution: Involution | None = None):
        self.algebra = algebra
        self.basis = tuple(basis)
        self.involution = involution

    @property
    def rank(self) -> int:
        return self.algebra.rank

    @property
    def dim(self) -> int:
        """Dimension of the hyperbolic space the order acts on."""
        if not self.algebra.is_quaternion:
            return 3
        return 4 if self.involution is not None and self.involution.kind == "orthogonal-ij" else 5

    @cached_property
    def lattice(self) -> GramLattice:
        return GramLattice([q.vector() for q in self.basis], self.algebra.norm_weights, _checked=True)

    @cached_property
    def ring(self) -> "OrderRing":
        return OrderRing(self)

    @cached_property
    def fixed_lattice(self) -> GramLattice:
        return _fixed_sublattice(self)

    @cached_property
    def fixed_coordinates(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.coordinates(Quat(self.algebra, *v))) for v in self.fixed_lattice.basis)

    def contains(self, q: Quat) -> bool:
        return q.alg == self.algebra and self.lattice.contains_int(q.num[: self.rank], q.den)

    def coordinates(self, q: Quat) -> list[int]:
        res = self.lattice.coordinates_int(q.num[: self.rank], q.den) if q.alg == self.algebra else None
        if res is None or any(x % res[1] for x in res[0]):
            raise ValueError(f"{q} is not in the order")
        return [x // res[1] for x in res[0]]

    def element(self, coords: Sequence[int]) -> Quat:
        num, den = self.lattice.ambient_int(coords)
        return Quat._make(self.algebra, list(num) + [0] * (4 - len(num)), den)

    @cached_property
    def key(self) -> str:
        """Stable hash of algebra, involution and canonical basis."""
        inv = self.involution.kind if self.involution else "none"
        b = self.algebra.b if self.algebra.b is not None else "-"
        rows = ";".join(",".join(str(c) for c in q.vector()) for q in self.basis)
        text = f"{self.algebra.a}|{b}|{inv}|{rows}"
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderLattice):
            return NotImplemented
        return (self.algebra, self.involution, self.basis) == (other.algebra, other.involution, other.basis)

    def __hash__(self) -> int:
        return hash((self.algebra, self.involution, self.basis))

    def __repr__(self) -> str:
        return f"Order({self.algebra}; {', '.join(str(q) for q in self.basis)})"


class OrderRing:
    """Structure constants and integer forms of an order in its own basis."""

    def __init__(self, O: OrderLattice):
        self.order = O
        n = O.rank
        self.n = n
        B = O.basis
        self.mult: list[list[list[tuple[int, int]]]] = []
        table = []
        for u in B:
            row = []
            for v in B:
                coords = self.solve(u * v)
                row.append([(k, c) for k, c in enumerate(coords) if c])
            table.append(row)
        self.mult = table
        self.conj = [self.solve(q.conj()) for q in B]
        if O.involution is not None:
            self.dag = [self.solve(O.involution(q)) for q in B]
        else:
            self.dag = None
        self.tr = [int(q.trace()) for q in B]
        self.T = [[int((u * v.conj()).trace()) for v in B] for u in B]
        self.one = self.solve(O.algebra.one)

    def solve(self, q: Quat) -> list[int]:
        try:
            return self.order.coordinates(q)
        except ValueError:
            raise OrderValidationError(f"{q} is not in the lattice") from None

    def mul(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        n = self.n
        z = [0] * n
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            row = self.mult[i]
            for j in range(n):
                yj = y[j]
                if not yj:
                    continue
                p = xi * yj
                for k, c in row[j]:
                    z[k] += p * c
        return z

    def norm(self, x: Sequence[int]) -> int:
        T = self.T
        n = self.n
        return sum(x[i] * sum(T[i][j] * x[j] for j in range(n)) for i in range(n)) // 2

    def trace(self, x: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(x, self.tr))

    def conjugate(self, x: Sequence[int]) -> list[int]:
        return _apply(self.conj, x)

    def dagger(self, x: Sequence[int]) -> list[int]:
        if self.dag is None:
            raise ValueError("order has no involution")
        return _apply(self.dag, x)

    def element(self, x: Sequence[int]) -> Quat:
        return self.order.element(x)


def _apply(M: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    n = len(M)
    return [sum(x[i] * M[i][j] for i in range(n)) for j in range(len(M[0]))]


# ---------------------------------------------------------------- building

def _integrality_ok(basis: Sequence[Quat]) -> bool:
    for u in basis:
        if not u.is_integral():
            return False
    for u, v in itertools.combinations(basis, 2):
        if (u * v.conj()).trace().denominator != 1:
            return False
    return True


def lattice_from(generators: Iterable[Quat]) -> list[Quat]:
    gens = list(generators)
    alg = gens[0].alg
    rows = _reversed_hnf([g.vector() for g in gens], alg.rank)
    return [Quat(alg, *r) for r in rows]


def ring_closure(generators: Iterable[Quat], involution: Involution | None = None) -> OrderLattice | None:
    """Smallest ring containing 1 and the generators (and their images under
    the involution), or None if that ring is not an order."""
    gens = list(generators)
    alg = gens[0].alg
    gens.append(alg.one)
    if involution is not None:
        gens += [involution(g) for g in gens]
    basis = lattice_from(gens)
    while True:
        if not _integrality_ok(basis):
            return None
        prods = [u * v for u in basis for v in basis]
        new = lattice_from(basis + prods)
        if new == basis:
            break
        basis = new
    if len(basis) != alg.rank:
        return None
    return OrderLattice(alg, basis, involution)


def validate_order(basis: Sequence[Quat], involution: Involution | None = None) -> OrderLattice:
    """Check that the Z-span of ``basis`` is an order and return it canonically."""
    basis = list(basis)
    if not basis:
        raise OrderValidationError("empty basis")
    alg = basis[0].alg
    if any(q.alg != alg for q in basis):
        raise OrderValidationError("basis elements from different algebras")
    if not alg.definite:
        raise OrderValidationError("algebra is not definite")
    if involution is not None and involution.algebra != alg:
        raise OrderValidationError("involution belongs to another algebra")
    canon = lattice_from(basis)
    if len(canon) != alg.rank:
        raise OrderValidationError(f"rank {len(canon)} instead of {alg.rank}")
    O = OrderLattice(alg, canon, involution)
    if not O.contains(alg.one):
        raise OrderValidationError("lattice does not contain 1")
    for r, u in enumerate(canon, 1):
        for c, v in enumerate(canon, 1):
            if not O.contains(u * v):
                raise OrderValidationError(f"not multiplicatively closed: b{r}*b{c} = {u * v} is not in L "
                                           f"(b{r} = {u}, b{c} = {v})")
    if involution is not None:
        for r, u in enumerate(canon, 1):
            if not O.contains(involution(u)):
                raise OrderValidationError(f"O^dagger != O: the image of b{r} = {u} is {involution(u)}, "
                                           "which is not in L")
    return O


# ---------------------------------------------------------------- invariants

def reduced_discriminant(O: OrderLattice) -> int:
    """Reduced discriminant for quaternion orders, |disc| for quadratic ones."""
    det = O.lattice.det
    if O.algebra.is_quaternion:
        sq = 16 * det
        r = math.isqrt(int(sq))
        if sq.denominator != 1 or r * r != sq:
            raise OrderValidationError("discriminant is not a square")
        return r
    return int(4 * det)


def is_maximal(O: OrderLattice) -> bool:
    """Maximal among all orders of the algebra (involution ignored)."""
    return reduced_discriminant(O) == O.algebra.discriminant


def fixed_sublattice(O: OrderLattice) -> GramLattice:
    """The lattice of elements fixed by the involution (all of O if none)."""
    return O.fixed_lattice


def _fixed_sublattice(O: OrderLattice) -> GramLattice:
    R = O.ring
    if O.involution is None or O.involution.kind == "standard":
        return O.lattice
    M = [[d - int(i == j) for j, d in enumerate(row)] for i, row in enumerate(R.dag)]
    K = integer_kernel(M)
    vecs = [O.lattice.ambient(k) for k in K]
    rows = _reversed_hnf(vecs, O.rank)
    return GramLattice(rows, O.algebra.norm_weights, _checked=True)


def euclid_lattice(O: OrderLattice) -> GramLattice:
    """The lattice whose covering radius governs the Euclidean property."""
    return fixed_sublattice(O)


def fixed_coordinates(O: OrderLattice) -> list[list[int]]:
    """Basis of the fixed sublattice in the order's own coordinates."""
    return [list(c) for c in O.fixed_coordinates]


def unit_group(O: OrderLattice) -> list[Quat]:
    units = [Quat(O.algebra, *O.lattice.ambient(c)) for q, c in short_vectors(O.lattice, 1) if q == 1]
    return sorted(units, key=lambda u: u.vector())


def _projective_points(p: int, n: int) -> np.ndarray:
    pts = []
    for lead in range(n):
        rest = n - lead - 1
        tail = np.array(list(itertools.product(range(p), repeat=rest)), dtype=np.int64).reshape(p ** rest, rest)
        block = np.zeros((len(tail), n), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        pts.append(block)
    return np.concatenate(pts)


def _overorder_at(O: OrderLattice, p: int) -> OrderLattice | None:
    """An order strictly containing O inside (1/p)O, stable under O's
    involution, or None."""
    R = O.ring
    n = O.rank
    pts = _projective_points(p, n)
    T = np.array(R.T, dtype=object if p > 1000 else np.int64)
    norms2 = np.einsum("ki,ij,kj->k", pts, T, pts)      # 2 * p^2 * nrm(x)
    traces = pts @ np.array(R.tr, dtype=np.int64)
    mask = (norms2 % (2 * p * p) == 0) & (traces % p == 0)
    for c in pts[mask].tolist():
        x = R.element(c) * Fraction(1, p)
        cand = ring_closure(list(O.basis) + [x], O.involution)
        if cand is not None:
            return cand
    return None


def maximalize(O: OrderLattice) -> OrderLattice:
    """A maximal order containing O; maximal among involution-stable orders
    when O carries an involution."""
    while True:
        d = reduced_discriminant(O)
        if O.involution is None and d == O.algebra.discriminant:
            return O
        bigger = None
        for p in sorted(factor(d)) if d > 1 else []:
            bigger = _overorder_at(O, p)
            if bigger is not None:
                break
        if bigger is None:
            return O
        O = bigger


def is_involution_maximal(O: OrderLattice) -> bool:
    return maximalize(O) == O


# ---------------------------------------------------------------- ideals

def right_order(ideal: Sequence[Quat], involution: Involution | None = None) -> OrderLattice:
    """{x : I x in I} for a full-rank lattice I given by a basis."""
    alg = ideal[0].alg
    form = alg.norm_weights
    pieces = []
    for e in ideal:
        einv = e.inverse()
        pieces.append(GramLattice([(einv * q).vector() for q in ideal], form, _checked=True))
    inter = lattice_intersection(pieces)
    return OrderLattice(alg, lattice_from([Quat(alg, *v) for v in inter.basis]), involution)


def left_ideals_of_norm(O: OrderLattice, ell: int) -> list[list[Quat]]:
    """Left ideals O alpha + O ell of reduced norm ell (ell prime, unramified)."""
    R = O.ring
    n = O.rank
    seen = set()
    out = []
    for c in itertools.product(range(ell), repeat=n):
        if not any(c) or R.norm(c) % ell:
            continue
        alpha = list(c)
        gens = [R.mul(list(map(int, e)), alpha) for e in np.eye(n, dtype=int)] + [
            [ell * int(i == j) for j in range(n)] for i in range(n)
        ]
        H = tuple(map(tuple, hnf_int(gens)))
        if len(H) != n or math.prod(H[i][i] for i in range(n)) != ell * ell:
            continue
        if H in seen:
            continue
        seen.add(H)
        out.append([R.element(row) for row in H])
    return out


def neighbors(O: OrderLattice, ell: int) -> list[OrderLattice]:
    """Right orders of the norm-ell left ideals of a maximal order."""
    return [right_order(I) for I in left_ideals_of_norm(O, ell)]


# ---------------------------------------------------------------- isomorphism

def invariants(O: OrderLattice, upto: int | None = None) -> tuple:
    if upto is None:
        upto = 4
    inv = O.involution.kind if O.involution else None
    parts = [O.dim, reduced_discriminant(O), inv, theta_series(O.lattice, upto)]
    if O.dim == 4:
        L = fixed_sublattice(O)
        parts.append(theta_series(L, upto))
        parts.append(covering_radius(L).mu_sq)
    return tuple(parts)


def _vectors_by_norm(O: OrderLattice, norms: set[Fraction]) -> dict[Fraction, list[tuple[int, ...]]]:
    top = max(norms)
    out: dict[Fraction, list] = {q: [] for q in norms}
    for q, c in short_vectors(O.lattice, top):
        if q in out:
            out[q].append(tuple(int(x) for x in c))
    return out


def orders_isomorphic(O1: OrderLattice, O2: OrderLattice) -> bool:
    """Ring isomorphism, commuting with the involutions when present."""
    if (O1.dim, O1.rank) != (O2.dim, O2.rank):
        return False
    if reduced_discriminant(O1) != reduced_discriminant(O2):
        return False
    return isomorphism(O1, O2) is not None


def isomorphism(O1: OrderLattice, O2: OrderLattice) -> list[list[int]] | None:
    """Matrix sending O1-coordinates to O2-coordinates of a ring isomorphism
    (compatible with the involutions), or None."""
    R1, R2 = O1.ring, O2.ring
    n = O1.rank
    geo = O1.lattice.geometry
    E = [list(row) for row in geo.U]  # reduced basis in O1 coordinates
    G1 = O1.lattice.gram
    def ip1(x, y):
        return sum(G1[i][j] * x[i] * y[j] for i in range(n) for j in range(n))
    G2 = O2.lattice.gram
    def ip2(x, y):
        return sum(G2[i][j] * x[i] * y[j] for i in range(n) for j in range(n))
    norms = [ip1(e, e) for e in E]
    cands = _vectors_by_norm(O2, set(norms))
    one1, one2 = R1.one, R2.one
    tr1 = [ip1(e, one1) for e in E]
    pools = [[v for v in cands[norms[k]] if ip2(v, one2) == tr1[k]] for k in range(n)]
    if any(not p for p in pools):
        return None
    G = [[ip1(E[a], E[b]) for b in range(n)] for a in range(n)]
    Einv = inverse_fraction(E)

    def to_E(x):
        return [sum((Fraction(x[i]) * Einv[i][j] for i in range(n)), Fraction(0)) for j in range(n)]

    one_E = [int(c) for c in to_E(one1)]
    prods_E = [[[int(c) for c in to_E(R1.mul(E[a], E[b]))] for b in range(n)] for a in range(n)]
    dag_E = None
    if O1.involution is not None:
        dag_E = [[int(c) for c in to_E(R1.dagger(E[a]))] for a in range(n)]

    def image(T, xE):
        return [sum(xE[k] * T[k][j] for k in range(n)) for j in range(n)]

    def check(T) -> bool:
        if image(T, one_E) != list(one2):
            return False
        for a in range(n):
            for b in range(n):
                if image(T, prods_E[a][b]) != R2.mul(T[a], T[b]):
                    return False
        if dag_E is not None:
            for a in range(n):
                if image(T, dag_E[a]) != R2.dagger(T[a]):
                    return False
        return True

    chosen: list[tuple[int, ...]] = []

    def search(k: int):
        if k == n:
            T = [list(v) for v in chosen]
            return T if check(T) else None
        for v in pools[k]:
            if all(ip2(v, chosen[l]) == G[k][l] for l in range(k)):
                chosen.append(v)
                r = search(k + 1)
                if r is not None:
                    return r
                chosen.pop()
        return None

    T = search(0)
    if T is None:
        return None
    # express in original O1 coordinates: x -> to_E(x) -> image
    M = [[int(c) for c in to_E([int(i == j) for j in range(n)])] for i in range(n)]
    return [image(T, row) for row in M]
