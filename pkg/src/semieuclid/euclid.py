"""2x2 matrices over orders and the semi-Euclidean factorisation algorithm.

The stathm is the reduced norm.  Division of c by d takes q to be a
closest point of the relevant lattice (the order itself, or its fixed
sublattice when an orthogonal involution is present) to d^-1 c, so that
nrm(c - d q) = nrm(d) * dist(d^-1 c, lattice)^2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .lattices import covering_radius, hnf_int, inverse_fraction, rank_fraction
from .orders import (
    OrderLattice,
    euclid_lattice,
    fixed_coordinates,
    ring_closure,
)
from .qarith import Algebra, Involution, Quat


class MembershipError(ValueError):
    """Matrix is not in the required group."""


class NotSemiEuclidean(ArithmeticError):
    """A quotient lies farther than 1 from the lattice."""

    def __init__(self, rho: Quat, dist_sq: Fraction):
        super().__init__(f"d^-1 c = {rho} has squared distance {dist_sq} from the lattice")
        self.rho = rho
        self.dist_sq = dist_sq


class ClassificationContradiction(ArithmeticError):
    """A coprime pair produced a quotient at a deep hole."""


class InvolutionBranchError(ValueError):
    """Input violates the involution compatibility condition."""


class Classification(str, Enum):
    EUCLIDEAN = "euclidean"
    SEMI = "semi-euclidean"
    NOT_SEMI = "not-semi-euclidean"
    ANOMALY = "anomaly"


def stathm(x: Quat) -> Fraction:
    """The stathm used throughout: the reduced norm."""
    return x.norm()


@dataclass(frozen=True)
class Mat2:
    a: Quat
    b: Quat
    c: Quat
    d: Quat

    @classmethod
    def of(cls, alg: Algebra, rows) -> "Mat2":
        (a, b), (c, d) = rows
        def q(v):
            if isinstance(v, Quat):
                return v
            if isinstance(v, (list, tuple)):
                return Quat(alg, *v)
            return Quat(alg, v)
        return cls(q(a), q(b), q(c), q(d))

    @classmethod
    def identity(cls, alg: Algebra) -> "Mat2":
        return cls(alg.one, alg.zero, alg.zero, alg.one)

    @classmethod
    def upper(cls, x: Quat) -> "Mat2":
        alg = x.alg
        return cls(alg.one, x, alg.zero, alg.one)

    @classmethod
    def lower(cls, x: Quat) -> "Mat2":
        alg = x.alg
        return cls(alg.one, alg.zero, x, alg.one)

    @classmethod
    def diag(cls, u: Quat, v: Quat) -> "Mat2":
        return cls(u, u.alg.zero, u.alg.zero, v)

    @property
    def algebra(self) -> Algebra:
        return self.a.alg

    def entries(self) -> tuple[Quat, Quat, Quat, Quat]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    __mul__ = __matmul__

    def is_upper(self) -> bool:
        return self.c.is_zero()

    def is_lower(self) -> bool:
        return self.b.is_zero()

    def is_triangular(self) -> bool:
        return self.is_upper() or self.is_lower()

    def is_diagonal(self) -> bool:
        return self.b.is_zero() and self.c.is_zero()

    def sigma_hat(self, sigma) -> "Mat2":
        return Mat2(sigma(self.d), -sigma(self.b), -sigma(self.c), sigma(self.a))

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def to_json(self) -> list[list[list[str]]]:
        return [[[str(x) for x in e.vector()] for e in row] for row in ((self.a, self.b), (self.c, self.d))]


def prod(mats: Sequence[Mat2], alg: Algebra) -> Mat2:
    out = Mat2.identity(alg)
    for m in mats:
        out = out @ m
    return out


def study_norm(M: Mat2) -> Fraction:
    """Reduced norm of a 2x2 quaternion matrix."""
    a, b, c, d = M.entries()
    return a.norm() * d.norm() + b.norm() * c.norm() - (a * c.conj() * d * b.conj()).trace()


@dataclass(frozen=True)
class Membership:
    kind: str            # "sl", "gl" or "none"
    unit: Quat | None = None


def _sigma_for(alg: Algebra, involution: Involution | None):
    if not alg.is_quaternion:
        return lambda x: x
    if involution is not None:
        return involution
    return None


def sl_sigma_membership(M: Mat2, involution: Involution | None = None) -> Membership:
    """Classify M as in SL, in GL (with its unit), or neither.

    Quadratic fields use the determinant, quaternion algebras with an
    involution use M sigma_hat(M), and bare quaternion algebras use the
    reduced norm of the matrix."""
    alg = M.algebra
    sigma = _sigma_for(alg, involution)
    if sigma is None:
        n = study_norm(M)
        return Membership("sl" if n == 1 else "none", alg.one if n == 1 else None)
    P = M @ M.sigma_hat(sigma)
    if not (P.b.is_zero() and P.c.is_zero()):
        return Membership("none")
    u = P.a
    if alg.is_quaternion and P.d != u:
        return Membership("none")
    if not alg.is_quaternion:
        # commutative: P = det * I
        if P.d != u:
            return Membership("none")
    if u == alg.one:
        return Membership("sl", u)
    if u.norm() == 1 and u.is_integral():
        return Membership("gl", u)
    return Membership("none")


# ---------------------------------------------------------------- context

class _Context:
    """Integer arithmetic for one order, shared by all divisions."""

    def __init__(self, O: OrderLattice):
        self.O = O
        self.R = O.ring
        self.n = O.rank
        self.Lambda = euclid_lattice(O)
        self.geo = self.Lambda.geometry
        if O.dim == 4:
            self.P = fixed_coordinates(O)
            self.m = len(self.P)
            self._pinv = _left_inverse(self.P)
        else:
            self.P = None
            self.m = self.n
        self.basis_vectors = [q.vector() for q in O.basis]

    def to_lambda(self, w: Sequence[int]) -> list[int]:
        if self.P is None:
            return list(w)
        y = [sum(Fraction(w[i]) * self._pinv[i][j] for i in range(self.n)) for j in range(self.m)]
        if any(c.denominator != 1 for c in y):
            raise InvolutionBranchError("quotient is not fixed by the involution")
        yi = [int(c) for c in y]
        back = [sum(yi[r] * self.P[r][c] for r in range(self.m)) for c in range(self.n)]
        if back != list(w):
            raise InvolutionBranchError("quotient is not fixed by the involution")
        return yi

    def from_lambda(self, y: Sequence[int]) -> list[int]:
        if self.P is None:
            return list(y)
        return [sum(y[r] * self.P[r][c] for r in range(self.m)) for c in range(self.n)]

    def ambient(self, x: Sequence[int]) -> tuple[Fraction, ...]:
        bv = self.basis_vectors
        return tuple(sum((bv[k][j] * x[k] for k in range(self.n)), Fraction(0)) for j in range(len(bv[0])))

    def divide(self, c: Sequence[int], d: Sequence[int]) -> tuple[list[int], list[int], Fraction]:
        """(q, r, dist^2) with c = d q + r and q closest to d^-1 c."""
        R = self.R
        N = R.norm(d)
        if N == 0:
            raise ZeroDivisionError("division by zero")
        w = R.mul(R.conjugate(d), c)
        y = self.to_lambda(w)
        dist, mins = self.geo.closest(y, N)
        if len(mins) > 1:
            mins = sorted(mins, key=lambda m: self.ambient(self.from_lambda(m)))
        q = self.from_lambda(mins[0])
        dq = R.mul(d, q)
        r = [a - b for a, b in zip(c, dq)]
        return q, r, dist


@lru_cache(maxsize=256)
@lru_cache(maxsize=64)
def _context(O: OrderLattice) -> _Context:
    return _Context(O)


def _left_inverse(P: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """A rational matrix X (n x m) with P X = I for a full-row-rank P (m x n)."""
    m, n = len(P), len(P[0])
    cols = []
    for c in range(n):
        trial = cols + [c]
        if rank_fraction([[P[r][k] for k in trial] for r in range(m)]) == len(trial):
            cols = trial
        if len(cols) == m:
            break
    block = [[Fraction(P[r][k]) for k in cols] for r in range(m)]
    inv = inverse_fraction(block)  # block * inv = I
    X = [[Fraction(0)] * m for _ in range(n)]
    for i, k in enumerate(cols):
        X[k] = inv[i]
    return X


# ---------------------------------------------------------------- ideals

def are_coprime(a: Quat, b: Quat, O: OrderLattice) -> bool:
    """aO + bO = O (right ideals)."""
    R = O.ring
    xa, xb = O.coordinates(a), O.coordinates(b)
    gens = []
    for e in range(O.rank):
        unit = [int(i == e) for i in range(O.rank)]
        gens.append(R.mul(xa, unit))
        gens.append(R.mul(xb, unit))
    H = hnf_int(gens)
    return len(H) == O.rank and all(H[i][i] == 1 for i in range(O.rank))


def div_step(a: Quat, b: Quat, O: OrderLattice) -> tuple[Quat, Quat]:
    """Division with remainder a = b q + r, nrm(r) < nrm(b), for coprime a, b."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero")
    if not are_coprime(a, b, O):
        raise ValueError("inputs are not coprime")
    if O.dim == 4:
        inv = O.involution
        if not O.contains(a * inv(b)) or a * inv(b) != inv(a * inv(b)):
            raise InvolutionBranchError("a b^sigma is not fixed by the involution")
    ctx = _context(O)
    xa, xb = O.coordinates(a), O.coordinates(b)
    q, r, dist = ctx.divide(xa, xb)
    return _finish_division(O, ctx, xa, xb, q, r, dist)


def _finish_division(O, ctx, xa, xb, q, r, dist):
    if dist < 1:
        return O.element(q), O.element(r)
    rho = O.element(O.ring.mul(O.ring.conjugate(xb), xa)) * Fraction(1, O.ring.norm(xb))
    if dist == 1:
        raise ClassificationContradiction(
            f"coprime pair with quotient {rho} at a deep hole of the lattice"
        )
    raise NotSemiEuclidean(rho, dist)


# ---------------------------------------------------------------- algorithm

@dataclass(frozen=True)
class DecompositionCertificate:
    """Triangular factors whose left-to-right product is the input matrix.

    ``descent`` lists the stathm of each remainder, which must decrease.
    ``diagonal`` is the leading diagonal factor pulled out by
    ``to_sl_factors`` (already included in ``factors``)."""

    factors: tuple[Mat2, ...]
    sl_conjugation_applied: bool = False
    descent: tuple[int, ...] = ()
    diagonal: Mat2 | None = None
    order: OrderLattice | None = field(default=None, compare=False, repr=False)


def _ring_mat(O: OrderLattice, M: Mat2) -> list[list[int]]:
    try:
        return [O.coordinates(e) for e in M.entries()]
    except ValueError as exc:
        raise MembershipError(f"entry outside the order: {exc}") from None


def decompose(M: Mat2, O: OrderLattice) -> DecompositionCertificate:
    """Factor M into triangular matrices with the semi-Euclidean algorithm."""
    mem = sl_sigma_membership(M, O.involution if O.dim == 4 else None)
    if mem.kind == "none":
        raise MembershipError("matrix is not invertible over the order")
    ctx = _context(O)
    R = O.ring
    a, b, c, d = _ring_mat(O, M)
    blocks: list[list[Mat2]] = []
    descent: list[int] = []
    alg = O.algebra
    swap_factors = [
        Mat2.upper(alg.one),
        Mat2.lower(-alg.one),
        Mat2(-alg.one, alg.one, alg.zero, alg.one),
    ]
    steps = 0
    while any(c):
        steps += 1
        if steps > 10000:
            raise RuntimeError("no termination")
        if R.norm(c) < R.norm(d) or not any(d):
            a, b = b, a
            c, d = d, c
            blocks.append(swap_factors)
            if not any(c):
                break
        q, r, dist = ctx.divide(c, d)
        if dist >= 1:
            _finish_division(O, ctx, c, d, q, r, dist)
        # gamma <- gamma (1 0; -q 1)
        bq = R.mul(b, q)
        a = [x - y for x, y in zip(a, bq)]
        c = r
        descent.append(R.norm(r))
        blocks.append([Mat2.lower(O.element(q))])
    final = Mat2(*(O.element(x) for x in (a, b, c, d)))
    # an identity remainder is only kept when it is the whole certificate
    factors = [] if blocks and final == Mat2.identity(alg) else [final]
    for blk in reversed(blocks):
        factors.extend(blk)
    return DecompositionCertificate(tuple(factors), False, tuple(descent), None, O)


def _conjugate_by_diag(T: Mat2, u: Quat, v: Quat) -> Mat2:
    """diag(u,v)^-1 T diag(u,v) for a unipotent triangular T."""
    if T.is_upper():
        return Mat2.upper(u.inverse() * T.b * v)
    return Mat2.lower(v.inverse() * T.c * u)


def _is_unipotent(T: Mat2) -> bool:
    return T.a == T.a.alg.one and T.d == T.d.alg.one and T.is_triangular()


def to_sl_factors(cert: DecompositionCertificate) -> DecompositionCertificate:
    """Rewrite the factors as one diagonal matrix followed by unipotent
    (elementary) triangular matrices."""
    alg = cert.factors[0].algebra
    D = Mat2.identity(alg)
    out: list[Mat2] = []

    def absorb(E: Mat2) -> None:
        nonlocal D, out
        u, v = E.a, E.d
        out = [_conjugate_by_diag(T, u, v) for T in out]
        D = D @ E

    for F in cert.factors:
        if _is_unipotent(F):
            out.append(F)
            continue
        if not F.is_triangular():
            raise ValueError("factor is not triangular")
        u, v = F.a, F.d
        if F.is_upper():
            E, T = Mat2.diag(u, v), Mat2.upper(u.inverse() * F.b)
        else:
            E, T = Mat2.diag(u, v), Mat2.lower(v.inverse() * F.c)
        absorb(E)
        if not (T.b.is_zero() and T.c.is_zero()):
            out.append(T)
    factors = ([D] if D != Mat2.identity(alg) else []) + out
    return replace(cert, factors=tuple(factors), sl_conjugation_applied=True,
                   diagonal=D if D != Mat2.identity(alg) else None)


def verify_certificate(M: Mat2, cert: DecompositionCertificate, O: OrderLattice | None = None) -> bool:
    """Product of the factors equals M, every factor is triangular with
    entries in the order, and the recorded descent is strictly decreasing."""
    O = O or cert.order
    if not cert.factors:
        return False
    alg = M.algebra
    for F in cert.factors:
        if not F.is_triangular():
            return False
        if O is not None:
            for e in F.entries():
                if not O.contains(e):
                    return False
            if O.dim == 4 and not F.is_diagonal() and _is_unipotent(F):
                x = F.b if F.is_upper() else F.c
                if O.involution(x) != x:
                    return False
    if any(y >= x for x, y in zip(cert.descent, cert.descent[1:])):
        return False
    return prod(cert.factors, alg) == M


def certificate_to_json(M: Mat2, cert: DecompositionCertificate) -> dict:
    return {
        "matrix": M.to_json(),
        "factors": [F.to_json() for F in cert.factors],
        "descent": list(cert.descent),
        "sl_conjugation_applied": cert.sl_conjugation_applied,
        "diagonal": None if cert.diagonal is None else cert.diagonal.to_json(),
    }


def mat2_from_json(alg: Algebra, rows) -> Mat2:
    return Mat2.of(alg, [[[Fraction(x) for x in e] for e in row] for row in rows])


def certificate_from_json(alg: Algebra, data: dict, O: OrderLattice | None = None
                          ) -> tuple[Mat2, DecompositionCertificate]:
    M = mat2_from_json(alg, data["matrix"])
    cert = DecompositionCertificate(
        tuple(mat2_from_json(alg, F) for F in data["factors"]),
        bool(data.get("sl_conjugation_applied", False)),
        tuple(int(x) for x in data.get("descent", ())),
        None if data.get("diagonal") is None else mat2_from_json(alg, data["diagonal"]),
        O,
    )
    return M, cert


# ---------------------------------------------------------------- testing aids

def random_element(O: OrderLattice, rng: random.Random, size: int = 2, fixed: bool = False) -> Quat:
    if fixed and O.dim == 4:
        P = fixed_coordinates(O)
        y = [rng.randint(-size, size) for _ in P]
        x = [sum(y[r] * P[r][c] for r in range(len(P))) for c in range(O.rank)]
    else:
        x = [rng.randint(-size, size) for _ in range(O.rank)]
    return O.element(x)


def random_elementary_product(O: OrderLattice, length: int, rng: random.Random, size: int = 2) -> Mat2:
    """Product of ``length`` random elementary matrices over O (over the fixed
    sublattice when O carries an orthogonal involution)."""
    alg = O.algebra
    M = Mat2.identity(alg)
    for k in range(length):
        x = random_element(O, rng, size, fixed=True)
        E = Mat2.upper(x) if k % 2 == 0 else Mat2.lower(x)
        M = M @ E
    return M


def classify_order(O: OrderLattice) -> Classification:
    return classify_with_report(O)[0]


def classify_with_report(O: OrderLattice):
    """Classification together with the covering data it rests on."""
    L = euclid_lattice(O)
    rep = covering_radius(L)
    if rep.mu_sq < 1:
        return Classification.EUCLIDEAN, rep
    if rep.mu_sq > 1:
        return Classification.NOT_SEMI, rep
    alg = O.algebra
    for h in rep.holes:
        alpha = Quat(alg, *h)
        if alpha.norm() != 1:
            return Classification.ANOMALY, rep
        if ring_closure(list(O.basis) + [alpha], O.involution if O.dim == 4 else None) is None:
            return Classification.ANOMALY, rep
    return Classification.SEMI, rep
