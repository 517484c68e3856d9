"""Lattices with exact rational Gram matrices.

A lattice is a Z-span of rational vectors in an ambient space whose inner
product is diagonal (for quaternion orders this is the reduced norm form).
All geometric queries are answered exactly: internally the Gram matrix is
scaled to integers, LLL-reduced, and searched with integer arithmetic.

The covering radius is computed from the Voronoi cell of the origin.  Its
vertices are the circumcentres of the Delaunay cells touching 0, so the
deep holes are the vertices of maximal norm, and translation classes are
read off modulo the lattice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Vector = tuple[Fraction, ...]


class RankError(ValueError):
    """Generators do not have the expected rank."""


class ContainmentError(ValueError):
    """A lattice is not contained in another."""


def _vec(v: Iterable) -> Vector:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in v)


# ---------------------------------------------------------------- integers

def hnf_int(rows: Sequence[Sequence[int]], columns: Sequence[int] | None = None) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix.

    ``columns`` gives the order in which pivot columns are sought; the rows
    come back in pivot order, zero rows dropped, with entries in earlier
    pivot columns reduced to [0, pivot).
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    order = list(columns) if columns is not None else list(range(ncols))
    top = 0
    pivots: list[int] = []
    for c in order:
        if top >= len(A):
            break
        while True:
            nz = [r for r in range(top, len(A)) if A[r][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(A[r][c]))
            A[top], A[best] = A[best], A[top]
            piv = A[top][c]
            done = True
            for r in range(top + 1, len(A)):
                if A[r][c]:
                    q = A[r][c] // piv
                    if q:
                        A[r] = [x - q * y for x, y in zip(A[r], A[top])]
                    if A[r][c]:
                        done = False
            if done:
                break
        if top < len(A) and A[top][c] != 0:
            if A[top][c] < 0:
                A[top] = [-x for x in A[top]]
            piv = A[top][c]
            for r in range(top):
                q = A[r][c] // piv
                if q:
                    A[r] = [x - q * y for x, y in zip(A[r], A[top])]
            pivots.append(c)
            top += 1
    return [A[r] for r in range(top)]


def _common_denominator(vectors: Iterable[Sequence[Fraction]]) -> int:
    d = 1
    for v in vectors:
        for x in v:
            d = math.lcm(d, x.denominator)
    return d


def hnf_rational(vectors: Sequence[Sequence[Fraction]], columns: Sequence[int] | None = None) -> list[Vector]:
    vectors = [_vec(v) for v in vectors]
    if not vectors:
        return []
    D = _common_denominator(vectors)
    rows = [[int(x * D) for x in v] for v in vectors]
    return [tuple(Fraction(x, D) for x in r) for r in hnf_int(rows, columns)]


def det_fraction(M: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact elimination."""
    A = [list(map(Fraction, r)) for r in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def inverse_fraction(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [r[n:] for r in A]


def rank_fraction(rows: Sequence[Sequence[Fraction]]) -> int:
    A = [list(map(Fraction, r)) for r in rows]
    if not A:
        return 0
    rank = 0
    ncols = len(A[0])
    for c in range(ncols):
        p = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        for r in range(rank + 1, len(A)):
            if A[r][c]:
                f = A[r][c] / A[rank][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def lll_gram(G: Sequence[Sequence[int]]) -> list[list[int]]:
    """LLL reduction (delta = 3/4) of a positive definite integer Gram matrix.

    Returns the unimodular transform U whose rows express the reduced basis
    in the original one.
    """
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def gram_of(U):
        GU = [[sum(G[i][l] * U[r][l] for l in range(n)) for i in range(n)] for r in range(n)]
        return [[sum(U[s][i] * GU[r][i] for i in range(n)) for r in range(n)] for s in range(n)]

    def gso(B):
        mu = [[Fraction(0)] * n for _ in range(n)]
        bs = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = Fraction(B[i][j])
                for l in range(j):
                    s -= mu[j][l] * mu[i][l] * bs[l]
                mu[i][j] = s / bs[j]
            s = Fraction(B[i][i])
            for l in range(i):
                s -= mu[i][l] ** 2 * bs[l]
            bs[i] = s
        return mu, bs

    delta = Fraction(3, 4)
    k = 1
    while k < n:
        B = gram_of(U)
        mu, bs = gso(B)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                B = gram_of(U)
                mu, bs = gso(B)
        if bs[k] >= (delta - mu[k][k - 1] ** 2) * bs[k - 1]:
            k += 1
        else:
            U[k], U[k - 1] = U[k - 1], U[k]
            k = max(k - 1, 1)
    # order by norm, which keeps the box bounds tight
    B = gram_of(U)
    order = sorted(range(n), key=lambda r: (B[r][r], r))
    return [U[r] for r in order]


def _int_matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _unimodular_inverse(U: Sequence[Sequence[int]]) -> list[list[int]]:
    inv = inverse_fraction(U)
    out = [[int(x) for x in r] for r in inv]
    assert all(Fraction(x) == y for r, s in zip(out, inv) for x, y in zip(r, s))
    return out


def box_vectors(G: Sequence[Sequence[int]], Ginv_diag: Sequence[Fraction], R: int) -> np.ndarray:
    """All integer vectors x with x^T G x <= R, as rows of an array."""
    n = len(G)
    bounds = []
    for i in range(n):
        v = R * Ginv_diag[i]
        r = math.isqrt(v.numerator // v.denominator)
        while Fraction((r + 1) ** 2) <= v:
            r += 1
        bounds.append(r)
    gmax = max(abs(x) for row in G for x in row)
    big = gmax * (max(bounds) + 1) ** 2 * n * n >= 2 ** 62
    dtype = object if big else np.int64
    first = range(-bounds[0], bounds[0] + 1)
    rest = [np.arange(-b, b + 1) for b in bounds[1:]]
    Gn = np.array(G, dtype=dtype)
    out = []
    if rest:
        mesh = np.stack(np.meshgrid(*rest, indexing="ij"), -1).reshape(-1, n - 1).astype(dtype)
    for x0 in first:
        if rest:
            X = np.concatenate([np.full((mesh.shape[0], 1), x0, dtype=dtype), mesh], axis=1)
        else:
            X = np.array([[x0]], dtype=dtype)
        q = np.einsum("ki,ij,kj->k", X, Gn, X)
        keep = X[q <= R]
        if len(keep):
            out.append(keep)
    if not out:
        return np.zeros((0, n), dtype=dtype)
    return np.concatenate(out, axis=0)


def _quad(G, x) -> int:
    n = len(G)
    return sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


# ---------------------------------------------------------------- lattices

class GramLattice:
    """Z-span of rational vectors in Q^dim with inner product diag(form)."""

    def __init__(self, basis: Sequence[Sequence], form: Sequence | None = None, _checked: bool = False):
        basis = tuple(_vec(b) for b in basis)
        if not basis:
            raise RankError("empty basis")
        dim = len(basis[0])
        if form is None:
            form = (Fraction(1),) * dim
        form = _vec(form)
        if any(len(b) != dim for b in basis) or len(form) != dim:
            raise ValueError("inconsistent dimensions")
        if any(w <= 0 for w in form):
            raise ValueError("form must be positive definite")
        if not _checked and rank_fraction(basis) != len(basis):
            raise RankError("basis vectors are linearly dependent")
        self.basis = basis
        self.form = form

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.form)

    def inner(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum((w * a * b for w, a, b in zip(self.form, u, v)), Fraction(0))

    def norm(self, v: Sequence[Fraction]) -> Fraction:
        return self.inner(v, v)

    @cached_property
    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(self.inner(u, v) for v in self.basis) for u in self.basis)

    @cached_property
    def det(self) -> Fraction:
        """Determinant of the Gram matrix (the squared covolume)."""
        return det_fraction(self.gram)

    @cached_property
    def canonical(self) -> tuple[Vector, ...]:
        return tuple(hnf_rational(self.basis))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GramLattice):
            return NotImplemented
        return self.form == other.form and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash((self.form, self.canonical))

    def __repr__(self) -> str:
        rows = ", ".join("(" + " ".join(str(x) for x in b) + ")" for b in self.basis)
        return f"GramLattice([{rows}])"

    def with_basis(self, basis: Sequence[Sequence]) -> "GramLattice":
        return GramLattice(basis, self.form)

    # coordinates -------------------------------------------------------
    @cached_property
    def _solver(self):
        pivots = []
        rows = [list(b) for b in self.basis]
        # choose rank-many columns giving an invertible square block
        for c in range(self.dim):
            trial = pivots + [c]
            if rank_fraction([[r[k] for k in trial] for r in rows]) == len(trial):
                pivots = trial
            if len(pivots) == self.rank:
                break
        block = [[r[k] for k in pivots] for r in rows]
        return pivots, inverse_fraction(block)

    @cached_property
    def _int_solver(self):
        pivots, inv = self._solver
        delta = _common_denominator(inv)
        adj = [[int(x * delta) for x in row] for row in inv]
        D = _common_denominator(self.basis)
        Bi = [[int(x * D) for x in b] for b in self.basis]
        return pivots, adj, delta, Bi, D

    def coordinates_int(self, num: Sequence[int], den: int = 1) -> tuple[list[int], int] | None:
        """Coordinates of the vector num/den as (numerators, denominator),
        or None if it lies outside the span."""
        pivots, adj, delta, Bi, D = self._int_solver
        r = self.rank
        w = [num[k] for k in pivots]
        X = [sum(w[i] * adj[i][j] for i in range(r)) for j in range(r)]
        if r != self.dim:
            for k in range(self.dim):
                if sum(X[j] * Bi[j][k] for j in range(r)) != num[k] * delta * D:
                    return None
        return X, den * delta

    def contains_int(self, num: Sequence[int], den: int = 1) -> bool:
        res = self.coordinates_int(num, den)
        if res is None:
            return False
        X, q = res
        return all(x % q == 0 for x in X)

    def coordinates(self, v: Sequence) -> Vector | None:
        """Coordinates of v in the basis, or None if v is outside the span."""
        v = _vec(v)
        den = _common_denominator([v])
        res = self.coordinates_int([int(x * den) for x in v], den)
        if res is None:
            return None
        X, q = res
        return tuple(Fraction(x, q) for x in X)

    def ambient(self, x: Sequence) -> Vector:
        return tuple(sum((Fraction(c) * b[k] for c, b in zip(x, self.basis)), Fraction(0)) for k in range(self.dim))

    def ambient_int(self, x: Sequence[int]) -> tuple[list[int], int]:
        """Integer coordinates x mapped to (numerators, denominator)."""
        _, _, _, Bi, D = self._int_solver
        r = self.rank
        return [sum(x[j] * Bi[j][k] for j in range(r)) for k in range(self.dim)], D

    def contains(self, v: Sequence) -> bool:
        x = self.coordinates(v)
        return x is not None and all(c.denominator == 1 for c in x)

    # integer geometry -------------------------------------------------
    @cached_property
    def geometry(self) -> "_Geometry":
        return _Geometry(self)


class _Geometry:
    """Integer-scaled, reduced view of a lattice used by the search routines."""

    def __init__(self, L: GramLattice):
        self.L = L
        n = L.rank
        self.n = n
        self.scale = _common_denominator(L.gram)
        self.G0 = [[int(x * self.scale) for x in row] for row in L.gram]
        self.U = lll_gram(self.G0)
        self.Uinv = _unimodular_inverse(self.U)
        UG = _int_matmul(self.U, self.G0)
        self.G = _int_matmul(UG, [list(r) for r in zip(*self.U)])
        Ginv = inverse_fraction(self.G)
        self.Ginv_diag = [Ginv[i][i] for i in range(n)]
        self.Gnp = np.array(self.G, dtype=object)

    # conversions
    def to_basis(self, xr: Sequence) -> list:
        n = self.n
        return [sum(xr[k] * self.U[k][j] for k in range(n)) for j in range(n)]

    def from_basis(self, xb: Sequence) -> list:
        n = self.n
        return [sum(xb[k] * self.Uinv[k][j] for k in range(n)) for j in range(n)]

    def ambient(self, xr: Sequence) -> Vector:
        return self.L.ambient(self.to_basis(xr))

    def vectors_upto(self, R: int) -> np.ndarray:
        """Reduced coordinates of all vectors with scaled norm <= R."""
        return box_vectors(self.G, self.Ginv_diag, R)

    @cached_property
    def relevant(self) -> list[tuple[int, ...]]:
        """Voronoi-relevant vectors: +-v unique minimal in v + 2L."""
        n = self.n
        best: dict[tuple, int] = {}
        for r in itertools.product((-1, 0, 1), repeat=n):
            if not any(r):
                continue
            c = tuple(x & 1 for x in r)
            q = _quad(self.G, r)
            if c not in best or q < best[c]:
                best[c] = q
        R = max(best.values())
        V = self.vectors_upto(R)
        rel = []
        groups: dict[tuple, list] = {}
        for row in V.tolist():
            if not any(row):
                continue
            groups.setdefault(tuple(x & 1 for x in row), []).append((_quad(self.G, row), tuple(row)))
        for c, items in groups.items():
            m = min(q for q, _ in items)
            minimal = [v for q, v in items if q == m]
            if len(minimal) == 2:
                rel.extend(minimal)
        rel.sort(key=lambda v: (_quad(self.G, v), v))
        return rel

    @cached_property
    def relevant_data(self):
        G = self.G
        out = []
        for v in self.relevant:
            Gv = [sum(G[i][j] * v[j] for j in range(self.n)) for i in range(self.n)]
            out.append((v, Gv, sum(a * b for a, b in zip(v, Gv))))
        return out

    @cached_property
    def voronoi_vertices(self) -> list[tuple[Fraction, ...]]:
        """Vertices of the Voronoi cell of 0, in reduced coordinates."""
        n = self.n
        data = self.relevant_data
        m = len(data)
        A = np.array([[2 * g for g in Gv] for _, Gv, _ in data], dtype=object)
        c = np.array([q for _, _, q in data], dtype=object)
        amax = max(abs(int(x)) for x in A.flat)
        cmax = max(abs(int(x)) for x in c)
        fact = math.factorial(n)
        det_bound = fact * amax ** n
        num_bound = fact * amax ** (n - 1) * cmax
        prod_bound = max(n * amax * num_bound, cmax * det_bound)
        dtype = np.int64 if prod_bound < 2 ** 62 else object
        A = A.astype(dtype)
        c = c.astype(dtype)
        combos = np.array(list(itertools.combinations(range(m), n)), dtype=np.int64)
        vertices: set[tuple[Fraction, ...]] = set()
        chunk = 20000
        for s in range(0, len(combos), chunk):
            cb = combos[s:s + chunk]
            M = A[cb]          # (K, n, n): rows are constraints
            rhs = c[cb]        # (K, n)
            det = _det_batch(M)
            ok = det != 0
            if not np.any(ok):
                continue
            M, rhs, det = M[ok], rhs[ok], det[ok]
            nums = []
            for i in range(n):
                Mi = M.copy()
                Mi[:, :, i] = rhs
                nums.append(_det_batch(Mi))
            num = np.stack(nums, axis=1)  # (K, n), x = num / det
            sgn = np.where(det < 0, -1, 1).astype(dtype)
            num = num * sgn[:, None]
            det = det * sgn
            # feasibility: A x <= c for all relevant vectors
            lhs = num @ A.T                  # (K, m)
            feasible = np.all(lhs <= det[:, None] * c[None, :], axis=1)
            for row, d in zip(num[feasible].tolist(), det[feasible].tolist()):
                vertices.add(tuple(Fraction(int(x), int(d)) for x in row))
        return sorted(vertices)

    @cached_property
    def hole_data(self):
        verts = self.voronoi_vertices
        G = self.G
        norms = [_quad(G, v) for v in verts]
        top = max(norms)
        deep = [v for v, q in zip(verts, norms) if q == top]
        classes: dict[tuple, list] = {}
        for v in deep:
            key = tuple(x - math.floor(x) for x in v)
            classes.setdefault(key, []).append(v)
        reps = []
        for key in sorted(classes):
            cands = sorted(self.ambient(v) for v in classes[key])
            reps.append(cands[0])
        reps.sort()
        return Fraction(top) / self.scale, reps, [self.ambient(v) for v in verts]

    @cached_property
    def tie_vectors(self) -> list[tuple[tuple[int, ...], list[int], int]]:
        """Vectors of scaled norm <= 4 mu^2, for detecting equidistant points."""
        mu_sq_scaled = max(_quad(self.G, v) for v in self.voronoi_vertices)
        R = math.floor(4 * mu_sq_scaled)
        V = self.vectors_upto(R)
        out = []
        for row in V.tolist():
            if any(row):
                Gs = [sum(self.G[i][j] * row[j] for j in range(self.n)) for i in range(self.n)]
                out.append((tuple(row), Gs, sum(a * b for a, b in zip(row, Gs))))
        out.sort(key=lambda e: e[2])
        return out

    def closest(self, y: Sequence[int], N: int) -> tuple[Fraction, list[list[int]]]:
        """Closest lattice points to the target y/N (basis coordinates).

        Returns the squared distance and every minimiser in basis coordinates.
        """
        n = self.n
        yr = self.from_basis(y)
        x = [(2 * a + N) // (2 * N) for a in yr]
        w = [a - N * b for a, b in zip(yr, x)]
        data = self.relevant_data
        while True:
            best_gain = 0
            best = None
            for v, Gv, q in data:
                gain = 2 * (w[0] * Gv[0] + sum(w[i] * Gv[i] for i in range(1, n))) - N * q
                if gain > best_gain:
                    best_gain, best = gain, v
            if best is None:
                break
            x = [a + b for a, b in zip(x, best)]
            w = [a - N * b for a, b in zip(w, best)]
        G = self.G
        dnum = sum(w[i] * sum(G[i][j] * w[j] for j in range(n)) for i in range(n))
        minimizers = [x]
        bound = 4 * dnum
        N2 = N * N
        for s, Gs, q in self.tie_vectors:
            if N2 * q > bound:
                break
            if N * q == 2 * sum(a * b for a, b in zip(w, Gs)):
                minimizers.append([a + b for a, b in zip(x, s)])
        return Fraction(dnum, N2 * self.scale), [self.to_basis(m) for m in minimizers]


def _det_batch(M: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of small integer matrices."""
    n = M.shape[1]
    if n == 1:
        return M[:, 0, 0]
    if n == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    total = None
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=1), j, axis=2)
        term = M[:, 0, j] * _det_batch(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------- operations

def hnf_basis(generators: Sequence[Sequence], form: Sequence | None = None) -> GramLattice:
    """Lattice spanned by the generators, with its canonical (HNF) basis."""
    gens = [_vec(g) for g in generators]
    if not gens:
        raise RankError("no generators")
    rows = hnf_rational(gens)
    if not rows:
        raise RankError("generators span the zero lattice")
    return GramLattice(rows, form, _checked=True)


def lattice_sum(A: GramLattice, B: GramLattice) -> GramLattice:
    if A.form != B.form:
        raise ValueError("lattices live in different quadratic spaces")
    return hnf_basis(list(A.basis) + list(B.basis), A.form)


def dual_basis(L: GramLattice) -> list[Vector]:
    """Dual with respect to the coordinate dot product (full rank only)."""
    if L.rank != L.dim:
        raise RankError("dual needs a full-rank lattice")
    inv = inverse_fraction(L.basis)
    return [tuple(inv[i][j] for i in range(L.dim)) for j in range(L.dim)]


def lattice_intersection(lattices: Sequence[GramLattice]) -> GramLattice:
    form = lattices[0].form
    duals = []
    for L in lattices:
        duals.extend(dual_basis(L))
    S = hnf_basis(duals, form)
    return hnf_basis(dual_basis(S), form)


def lattice_index(sub: GramLattice, sup: GramLattice) -> int:
    """[sup : sub] for sub contained in sup of equal rank."""
    if sub.rank != sup.rank:
        raise RankError("index needs equal ranks")
    coords = []
    for b in sub.basis:
        x = sup.coordinates(b)
        if x is None or any(c.denominator != 1 for c in x):
            raise ContainmentError("sublattice not contained in superlattice")
        coords.append(x)
    return abs(int(det_fraction(coords)))


def closest_points(L: GramLattice, target: Sequence) -> tuple[Fraction, list[Vector]]:
    """Squared distance from target to L and all lattice points attaining it."""
    x = L.coordinates(target)
    if x is None:
        raise ValueError("target lies outside the span of the lattice")
    N = _common_denominator([x])
    y = [int(c * N) for c in x]
    d, pts = L.geometry.closest(y, N)
    return d, sorted(L.ambient(p) for p in pts)


def short_vectors(L: GramLattice, bound: Fraction) -> list[tuple[Fraction, Vector]]:
    """All nonzero vectors of norm <= bound, as (norm, basis coordinates)."""
    geo = L.geometry
    R = math.floor(Fraction(bound) * geo.scale)
    out = []
    for row in geo.vectors_upto(R).tolist():
        if any(row):
            q = Fraction(_quad(geo.G, row), geo.scale)
            out.append((q, tuple(geo.to_basis(row))))
    out.sort()
    return out


def theta_series(L: GramLattice, upto: int) -> tuple[int, ...]:
    """Pairs (norm, number of lattice vectors of that norm) up to a bound."""
    geo = L.geometry
    R = upto * geo.scale
    counts: dict[int, int] = {}
    for row in geo.vectors_upto(R).tolist():
        q = _quad(geo.G, row)
        counts[q] = counts.get(q, 0) + 1
    return tuple((Fraction(q, geo.scale), c) for q, c in sorted(counts.items()))


def successive_minima(L: GramLattice) -> list[tuple[Fraction, Vector]]:
    """Squared successive minima with witnessing vectors (ambient coordinates)."""
    geo = L.geometry
    R = max(geo.G[i][i] for i in range(geo.n))
    cands = []
    for row in geo.vectors_upto(R).tolist():
        if any(row):
            cands.append((_quad(geo.G, row), L.ambient(geo.to_basis(row))))
    cands.sort()
    chosen: list[tuple[Fraction, Vector]] = []
    for q, v in cands:
        if rank_fraction([c for _, c in chosen] + [v]) == len(chosen) + 1:
            chosen.append((Fraction(q, geo.scale), v))
            if len(chosen) == L.rank:
                break
    return chosen


@dataclass(frozen=True)
class DeepHoleReport:
    """Squared covering radius, one deep hole per translation class, and the
    full vertex set of the Voronoi cell of 0 (all in ambient coordinates)."""

    mu_sq: Fraction
    holes: tuple[Vector, ...]
    vertices: tuple[Vector, ...]


def covering_radius(L: GramLattice) -> DeepHoleReport:
    mu_sq, reps, verts = L.geometry.hole_data
    return DeepHoleReport(mu_sq, tuple(reps), tuple(sorted(verts)))


def relevant_vectors(L: GramLattice) -> list[Vector]:
    geo = L.geometry
    return [geo.ambient(v) for v in geo.relevant]


# interval for pi, wide enough for exact comparisons
PI_LOW = Fraction(314159265358979, 10 ** 14)
PI_HIGH = Fraction(314159265358980, 10 ** 14)


def _ball_volume_sq(n: int, pi: Fraction) -> Fraction:
    # vol(B_n)^2 = pi^n / Gamma(n/2 + 1)^2
    if n % 2 == 0:
        g = Fraction(math.factorial(n // 2))
        return pi ** n / (g * g)
    # Gamma(n/2 + 1) = sqrt(pi) * n!! / 2^((n+1)/2)
    dfact = math.prod(range(n, 0, -2))
    g_sq = pi * Fraction(dfact, 2 ** ((n + 1) // 2)) ** 2
    return pi ** n / g_sq


def minkowski_check(L: GramLattice) -> bool:
    """Lower bound of Minkowski's second theorem, checked with interval pi."""
    n = L.rank
    prod = Fraction(1)
    for q, _ in successive_minima(L):
        prod *= q
    rhs = Fraction(2 ** n, math.factorial(n)) ** 2 * L.det
    vols = [_ball_volume_sq(n, PI_LOW), _ball_volume_sq(n, PI_HIGH)]
    lo, hi = min(vols), max(vols)
    if prod * lo >= rhs:
        return True
    if prod * hi < rhs:
        return False
    raise ArithmeticError("pi interval too wide to decide")
