"""Moebius generators on the boundary of hyperbolic space, the reflection
group of unit spheres centred at lattice points, and planar pictures of it.

Boundary points are exact algebra elements (or ``INF``).  For dim 3 they lie
in the quadratic field, for dim 4 in span(1, i, j), for dim 5 anywhere in
the quaternion algebra.  Only the drawing code uses floating point.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .lattices import DeepHoleReport, GramLattice, covering_radius
from .orders import OrderLattice, euclid_lattice
from .qarith import Quat


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
BoundaryPoint = Union[Quat, _Infinity]


class BoundaryError(ValueError):
    pass


class LatticeIntegralityError(ValueError):
    pass


class UnsupportedDimension(ValueError):
    pass


def check_boundary(z: BoundaryPoint, dim: int) -> None:
    """Raise BoundaryError unless z lies in the boundary model for dim."""
    if z is INF:
        return
    if dim == 3:
        ok = not z.alg.is_quaternion
    elif dim == 4:
        ok = z.alg.is_quaternion and z.t == 0
    elif dim == 5:
        ok = z.alg.is_quaternion
    else:
        raise UnsupportedDimension(dim)
    if not ok:
        raise BoundaryError(f"{z} is not a boundary point for dim {dim}")


# ---------------------------------------------------------------- generators


KINDS = ("E", "T", "phi", "psi")


@dataclass(frozen=True)
class MoebiusGen:
    """E_a: z -> -1/z - a,  T_a: z -> z + a,  phi_a: z -> 1/conj(z - a) + a,
    psi: z -> -conj(z)."""

    kind: str
    alpha: Quat | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if (self.kind == "psi") != (self.alpha is None):
            raise ValueError("psi takes no parameter, the others need one")

    def __call__(self, z: BoundaryPoint) -> BoundaryPoint:
        return apply_gen(self, z)

    def in_lattice(self, L: GramLattice) -> bool:
        return self.alpha is None or L.contains(self.alpha.vector())

    def __str__(self) -> str:
        return self.kind if self.alpha is None else f"{self.kind}[{self.alpha}]"


def E(alpha: Quat) -> MoebiusGen:
    return MoebiusGen("E", alpha)


def T(alpha: Quat) -> MoebiusGen:
    return MoebiusGen("T", alpha)


def phi(alpha: Quat) -> MoebiusGen:
    return MoebiusGen("phi", alpha)


PSI = MoebiusGen("psi")

Word = Union[MoebiusGen, Sequence[MoebiusGen]]


def apply_gen(g: Word, z: BoundaryPoint) -> BoundaryPoint:
    """Image of z.  A sequence stands for the composition g[0] o g[1] o ...,
    so its last entry acts first."""
    if not isinstance(g, MoebiusGen):
        for h in reversed(list(g)):
            z = apply_gen(h, z)
        return z
    a = g.alpha
    if g.kind == "T":
        return INF if z is INF else z + a
    if g.kind == "psi":
        return INF if z is INF else -z.conj()
    if g.kind == "E":
        if z is INF:
            return -a
        if z.is_zero():
            return INF
        return -z.inverse() - a
    # phi
    if z is INF:
        return a
    w = z - a
    if w.is_zero():
        return INF
    return w.conj().inverse() + a


def _conj(a: Quat) -> Quat:
    return a.conj()


def relation_identities(alpha: Quat, beta: Quat) -> list[tuple[str, list[MoebiusGen], list[MoebiusGen]]]:
    """The six identities between the generators, as (name, lhs, rhs)."""
    ab = _conj(alpha)
    return [
        ("T_a phi_b = phi_(a+b) T_a", [T(alpha), phi(beta)], [phi(alpha + beta), T(alpha)]),
        ("psi E_a = E_(-conj a) psi", [PSI, E(alpha)], [E(-ab), PSI]),
        ("psi E_a = phi_(conj a) T_(conj a)", [PSI, E(alpha)], [phi(ab), T(ab)]),
        ("psi phi_a = phi_(-conj a) psi", [PSI, phi(alpha)], [phi(-ab), PSI]),
        ("psi phi_a = E_(conj a) T_(-a)", [PSI, phi(alpha)], [E(ab), T(-alpha)]),
        ("psi T_a = T_(-conj a) psi", [PSI, T(alpha)], [T(-ab), PSI]),
    ]


def failing_relations(alpha: Quat, beta: Quat, samples: Iterable[BoundaryPoint],
                      identities=None) -> list[tuple[str, BoundaryPoint]]:
    """(identity name, sample) pairs at which the two sides differ."""
    ids = identities if identities is not None else relation_identities(alpha, beta)
    bad = []
    samples = list(samples)
    for name, lhs, rhs in ids:
        for z in samples:
            if apply_gen(lhs, z) != apply_gen(rhs, z):
                bad.append((name, z))
    return bad


def check_relations(alpha: Quat, beta: Quat, samples: Iterable[BoundaryPoint], identities=None) -> bool:
    """Whether every identity holds exactly at every sample point."""
    return not failing_relations(alpha, beta, samples, identities)


def random_boundary_point(O: OrderLattice, rng: random.Random, height: int = 7) -> Quat:
    """A rational point of the boundary model with small random coordinates."""
    alg = O.algebra
    def r():
        return Fraction(rng.randint(-height * 3, height * 3), rng.randint(1, height))
    if O.dim == 3:
        return Quat(alg, r(), r())
    if O.dim == 4:
        return Quat(alg, r(), r(), r(), 0)
    return Quat(alg, r(), r(), r(), r())


def random_lattice_point(O: OrderLattice, rng: random.Random, size: int = 3) -> Quat:
    L = euclid_lattice(O)
    c = [rng.randint(-size, size) for _ in range(L.rank)]
    return Quat(O.algebra, *L.ambient(c))


# ---------------------------------------------------------------- dihedral angles


class Dihedral(enum.Enum):
    PI_3 = "pi/3"
    PI_2 = "pi/2"
    ZERO = "0"
    DISJOINT = "disjoint"

    @property
    def radians(self) -> float | None:
        return {"pi/3": math.pi / 3, "pi/2": math.pi / 2, "0": 0.0}.get(self.value)


def dihedral_from_distance(d_sq: Fraction) -> Dihedral:
    """Angle between unit spheres whose centres are at squared distance d_sq.

    The normals meet at angle theta with cos theta = (2 - d^2)/2; the
    dihedral angle of the region outside both spheres is min(theta, pi - theta)
    folded as in the reflection group (d^2 = 3 gives 2pi/3, i.e. pi/3)."""
    d_sq = Fraction(d_sq)
    if d_sq.denominator != 1:
        raise LatticeIntegralityError(f"squared distance {d_sq} is not an integer")
    if d_sq <= 0:
        raise ValueError("the spheres coincide")
    return {1: Dihedral.PI_3, 2: Dihedral.PI_2, 3: Dihedral.PI_3, 4: Dihedral.ZERO}.get(int(d_sq), Dihedral.DISJOINT)


def dihedral_angle(c1: Quat, c2: Quat) -> Dihedral:
    return dihedral_from_distance((c1 - c2).norm())


# ---------------------------------------------------------------- lattice criterion


@dataclass(frozen=True)
class LatticeVerdict:
    is_lattice: bool
    report: DeepHoleReport
    witness: Quat | None = None   # boundary point outside every unit ball

    def __iter__(self):
        # unpacks as (flag, report)
        return iter((self.is_lattice, self.report))


def k_is_lattice(O: OrderLattice) -> LatticeVerdict:
    """The reflection/translation group K has finite covolume iff the
    covering radius of the Euclidean lattice is at most 1."""
    rep = covering_radius(euclid_lattice(O))
    if rep.mu_sq <= 1:
        return LatticeVerdict(True, rep)
    # a deepest Voronoi vertex is at distance mu > 1 from every lattice point
    return LatticeVerdict(False, rep, Quat(O.algebra, *rep.holes[0]))


@dataclass
class FundamentalDomainModel:
    origin: Quat
    parallelepiped: tuple[Quat, ...]
    spheres: tuple[Quat, ...]
    lattice_flag: bool
    report: DeepHoleReport = field(repr=False)


def fundamental_domain(O: OrderLattice) -> FundamentalDomainModel:
    """P is the basis parallelepiped of the Euclidean lattice; the spheres
    are the unit spheres centred at lattice points within distance 1 of P."""
    L = euclid_lattice(O)
    alg = O.algebra
    edges = tuple(Quat(alg, *b) for b in L.basis)
    n = L.rank
    G = np.array([[float(x) for x in row] for row in L.gram])
    Ginv = np.linalg.inv(G)
    # coordinate box that contains every lattice point within distance 1 of P
    reach = [int(math.ceil(math.sqrt(Ginv[k, k]))) + 1 for k in range(n)]
    spheres = []
    for cs in itertools.product(*(range(-r, r + 2) for r in reach)):
        lam = sum((e * c for e, c in zip(edges, cs)), alg.zero)
        if _float_dist_sq_to_cell(np.array(cs, float), G) < 1:
            spheres.append(lam)
    rep = covering_radius(L)
    return FundamentalDomainModel(alg.zero, edges, tuple(spheres), rep.mu_sq <= 1, rep)


def _float_dist_sq_to_cell(c: np.ndarray, G: np.ndarray) -> float:
    """Squared distance from the point with coordinates c to [0,1]^n (metric G),
    by projected gradient iterations (small n)."""
    u = np.clip(c, 0, 1)
    for _ in range(200):
        g = G @ (u - c)
        step = 1.0 / max(np.linalg.eigvalsh(G).max(), 1e-12)
        nu = np.clip(u - step * g, 0, 1)
        if np.allclose(nu, u, atol=1e-13):
            break
        u = nu
    d = u - c
    return float(d @ G @ d)


# ---------------------------------------------------------------- planar geometry


def _planar(q: Quat | Sequence[Fraction]) -> tuple[float, float]:
    """Real embedding of x + y sqrt(a) (a < 0) as a point of R^2."""
    if isinstance(q, Quat):
        a = q.alg.a
        x, y = q.x, q.y
    else:
        raise TypeError("expected an element")
    return (float(x), float(y) * math.sqrt(float(-a)))


def _require_planar(O: OrderLattice) -> None:
    if O.dim != 3:
        raise UnsupportedDimension("only dim 3 orders can be drawn")


def _voronoi_polygon(O: OrderLattice) -> list[tuple[float, float]]:
    """Vertices of the Voronoi cell of 0, counter-clockwise."""
    rep = covering_radius(O.lattice)
    pts = [_planar(Quat(O.algebra, *v)) for v in rep.vertices]
    pts = sorted(set((round(x, 15), round(y, 15)) for x, y in pts), key=lambda p: math.atan2(p[1], p[0]))
    return pts


def _cross(p, q) -> float:
    return p[0] * q[1] - p[1] * q[0]


def _circle_hits(p, q, r=1.0) -> list[float]:
    """Parameters t in (0, 1) where p + t (q - p) meets the circle |x| = r."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    A = dx * dx + dy * dy
    B = 2 * (p[0] * dx + p[1] * dy)
    C = p[0] ** 2 + p[1] ** 2 - r * r
    disc = B * B - 4 * A * C
    if A == 0 or disc <= 0:
        return []
    s = math.sqrt(disc)
    return sorted(t for t in ((-B - s) / (2 * A), (-B + s) / (2 * A)) if 1e-12 < t < 1 - 1e-12)


def _triangle_disk_area(p, q, r=1.0) -> float:
    """Signed area of the triangle (0, p, q) intersected with the disk |x| <= r."""
    ts = [0.0] + _circle_hits(p, q, r) + [1.0]
    area = 0.0
    for t0, t1 in zip(ts, ts[1:]):
        a = (p[0] + t0 * (q[0] - p[0]), p[1] + t0 * (q[1] - p[1]))
        b = (p[0] + t1 * (q[0] - p[0]), p[1] + t1 * (q[1] - p[1]))
        m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        if m[0] ** 2 + m[1] ** 2 <= r * r:
            area += _cross(a, b) / 2
        else:
            ang = math.atan2(_cross(a, b), a[0] * b[0] + a[1] * b[1])
            area += r * r * ang / 2
    return area


def _polygon_area(poly) -> float:
    return sum(_cross(p, q) for p, q in zip(poly, poly[1:] + poly[:1])) / 2


@dataclass(frozen=True)
class AreaInterval:
    lo: float
    hi: float
    exact_zero: bool
    cell_area: float

    @property
    def fraction(self) -> float:
        return (self.lo + self.hi) / 2 / self.cell_area


def uncovered_area(O: OrderLattice) -> AreaInterval:
    """Area of a fundamental cell left uncovered by the unit disks.

    Translating, this is the part of the Voronoi cell of 0 outside the unit
    disk.  When mu^2 <= 1 it is exactly zero (certified by the exact
    covering radius); otherwise it is computed from the polygon and its arcs
    with a floating point error margin."""
    _require_planar(O)
    poly = _voronoi_polygon(O)
    cell = _polygon_area(poly)
    if covering_radius(O.lattice).mu_sq <= 1:
        return AreaInterval(0.0, 0.0, True, cell)
    inside = sum(_triangle_disk_area(p, q) for p, q in zip(poly, poly[1:] + poly[:1]))
    a = cell - inside
    eps = 1e-9 * max(1.0, cell)
    return AreaInterval(max(0.0, a - eps), a + eps, False, cell)


def _uncovered_chains(poly, r=1.0):
    """Boundary of (polygon minus disk) as closed chains.

    Each chain is a list of points along the polygon boundary (outside the
    disk); it is closed by an arc of the circle from its last point back to
    its first.  Returns (chains, ring) where ring is True if the whole
    boundary lies outside the circle (polygon with a round hole)."""
    n = len(poly)
    pieces = []   # (point, kind) walking the boundary
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        pieces.append((p, "v"))
        for t in _circle_hits(p, q, r):
            pieces.append(((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])), "x"))
    outside = [math.hypot(*poly[k]) > r + 1e-12 for k in range(n)]
    if all(outside) and not any(kind == "x" for _, kind in pieces):
        return [list(poly)], True
    if not any(kind == "x" for _, kind in pieces):
        return [], False
    # rotate so that we start at a crossing where the boundary leaves the disk
    idx = [k for k, (pt, kind) in enumerate(pieces) if kind == "x"]
    chains = []
    m = len(pieces)
    for s in idx:
        # the boundary leaves the disk at s if the next piece point is outside
        nxt = pieces[(s + 1) % m][0]
        mid = ((pieces[s][0][0] + nxt[0]) / 2, (pieces[s][0][1] + nxt[1]) / 2)
        if math.hypot(*mid) <= r:
            continue
        chain = [pieces[s][0]]
        k = (s + 1) % m
        while pieces[k][1] != "x":
            chain.append(pieces[k][0])
            k = (k + 1) % m
        chain.append(pieces[k][0])
        chains.append(chain)
    return chains, False


# ---------------------------------------------------------------- SVG output


SIZE = 800
MARGIN = 40
RED = "#cc0000"
BLUE = "#3366cc"
GREY = "#888888"


@dataclass(frozen=True)
class RenderSpec:
    """What to draw: ``which`` is a subset of {"cover", "floor"}."""

    which: tuple[str, ...] = ("cover", "floor")
    outdir: str | None = None
    stem: str = "order"


class _Canvas:
    def __init__(self, box):
        (x0, y0), (x1, y1) = box
        span = max(x1 - x0, y1 - y0)
        self.scale = (SIZE - 2 * MARGIN) / span
        self.x0 = x0 - ((span - (x1 - x0)) / 2)
        self.y1 = y1 + ((span - (y1 - y0)) / 2)

    def pt(self, p) -> str:
        return f"{self._x(p[0]):.3f},{self._y(p[1]):.3f}"

    def _x(self, x):
        return MARGIN + (x - self.x0) * self.scale

    def _y(self, y):
        return MARGIN + (self.y1 - y) * self.scale

    def r(self, r):
        return f"{r * self.scale:.3f}"


def _cell(O: OrderLattice):
    w1, w2 = (_planar(q) for q in O.basis)
    return [(0.0, 0.0), w1, (w1[0] + w2[0], w1[1] + w2[1]), w2], w1, w2


def _nearby_points(O: OrderLattice, box, pad=1.0):
    (x0, y0), (x1, y1) = box
    _, w1, w2 = _cell(O)
    M = np.array([[w1[0], w2[0]], [w1[1], w2[1]]])
    Minv = np.linalg.inv(M)
    corners = [(x0 - pad, y0 - pad), (x1 + pad, y0 - pad), (x0 - pad, y1 + pad), (x1 + pad, y1 + pad)]
    cs = np.array([Minv @ np.array(c) for c in corners])
    lo = np.floor(cs.min(axis=0)).astype(int) - 1
    hi = np.ceil(cs.max(axis=0)).astype(int) + 1
    out = []
    for m in range(lo[0], hi[0] + 1):
        for n in range(lo[1], hi[1] + 1):
            p = (m * w1[0] + n * w2[0], m * w1[1] + n * w2[1])
            if x0 - pad - 1e-9 <= p[0] <= x1 + pad + 1e-9 and y0 - pad - 1e-9 <= p[1] <= y1 + pad + 1e-9:
                out.append((m, n, p))
    return out


def _bbox(points, pad):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs) - pad, min(ys) - pad), (max(xs) + pad, max(ys) + pad)


def _header(title: str) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{title}</title>",
        '<rect x="0" y="0" width="800" height="800" fill="#ffffff"/>',
    ]


def _uncovered_paths(O, cv: _Canvas, points) -> list[str]:
    poly = _voronoi_polygon(O)
    chains, ring = _uncovered_chains(poly)
    out = []
    r = cv.r(1.0)
    for _, _, c in points:
        shift = [(p[0] + c[0], p[1] + c[1]) for p in poly]
        if ring:
            d = "M " + " L ".join(cv.pt(p) for p in shift) + " Z"
            top = (c[0], c[1] + 1)
            bot = (c[0], c[1] - 1)
            d += f" M {cv.pt(top)} A {r} {r} 0 1 0 {cv.pt(bot)} A {r} {r} 0 1 0 {cv.pt(top)} Z"
            out.append(f'<path d="{d}" fill="{GREY}" fill-rule="evenodd" stroke="none"/>')
            continue
        for ch in chains:
            pts = [(p[0] + c[0], p[1] + c[1]) for p in ch]
            d = "M " + " L ".join(cv.pt(p) for p in pts)
            # close along the circle, through the disk side (short arc, clockwise on screen)
            a0 = math.atan2(ch[-1][1], ch[-1][0])
            a1 = math.atan2(ch[0][1], ch[0][0])
            # the arc runs clockwise in the plane; with y pointing up on the
            # page that is also clockwise on screen (sweep flag 1)
            large = 1 if (a0 - a1) % (2 * math.pi) > math.pi else 0
            d += f" A {r} {r} 0 {large} 1 {cv.pt(pts[0])} Z"
            out.append(f'<path d="{d}" fill="{GREY}" stroke="none"/>')
    return out


def render_cover(O: OrderLattice) -> str:
    """Fundamental cell (blue), unit circles (red), uncovered part (grey)."""
    _require_planar(O)
    cell, _, _ = _cell(O)
    box = _bbox(cell, 1.1)
    cv = _Canvas(box)
    points = _nearby_points(O, box)
    lines = _header(f"unit disks about {O}")
    cell_d = "M " + " L ".join(cv.pt(p) for p in cell) + " Z"
    lines.append(f'<defs><clipPath id="cell"><path d="{cell_d}"/></clipPath></defs>')
    lines.append(f'<path d="{cell_d}" fill="{BLUE}" fill-opacity="0.4" stroke="{BLUE}" stroke-width="1.5"/>')
    lines.append('<g clip-path="url(#cell)">')
    lines += _uncovered_paths(O, cv, points)
    lines.append("</g>")
    for _, _, c in points:
        lines.append(f'<circle cx="{cv._x(c[0]):.3f}" cy="{cv._y(c[1]):.3f}" r="{cv.r(1.0)}" '
                     f'fill="none" stroke="{RED}" stroke-width="1.5"/>')
    for _, _, c in points:
        lines.append(f'<circle cx="{cv._x(c[0]):.3f}" cy="{cv._y(c[1]):.3f}" r="2.5" fill="#000000"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_floor(O: OrderLattice) -> str:
    """Floor plan of the fundamental domain seen from above: the cell split
    into the regions lying over each sphere (Voronoi edges inside the unit
    disks) with the parts reaching the boundary in grey."""
    _require_planar(O)
    cell, _, _ = _cell(O)
    box = _bbox(cell, 0.15)
    cv = _Canvas(box)
    points = _nearby_points(O, box, pad=1.5)
    poly = _voronoi_polygon(O)
    lines = _header(f"floor plan (vertical projection) for {O}")
    cell_d = "M " + " L ".join(cv.pt(p) for p in cell) + " Z"
    lines.append(f'<defs><clipPath id="cell"><path d="{cell_d}"/></clipPath></defs>')
    lines.append(f'<path d="{cell_d}" fill="{BLUE}" fill-opacity="0.4" stroke="none"/>')
    lines.append('<g clip-path="url(#cell)">')
    lines += _uncovered_paths(O, cv, points)
    for _, _, c in points:
        for p, q in zip(poly, poly[1:] + poly[:1]):
            ts = [0.0] + _circle_hits(p, q) + [1.0]
            for t0, t1 in zip(ts, ts[1:]):
                m = (p[0] + (t0 + t1) / 2 * (q[0] - p[0]), p[1] + (t0 + t1) / 2 * (q[1] - p[1]))
                if math.hypot(*m) > 1:
                    continue
                a = (c[0] + p[0] + t0 * (q[0] - p[0]), c[1] + p[1] + t0 * (q[1] - p[1]))
                b = (c[0] + p[0] + t1 * (q[0] - p[0]), c[1] + p[1] + t1 * (q[1] - p[1]))
                lines.append(f'<path d="M {cv.pt(a)} L {cv.pt(b)}" stroke="{BLUE}" stroke-width="1.5" fill="none"/>')
        lines.append(f'<circle cx="{cv._x(c[0]):.3f}" cy="{cv._y(c[1]):.3f}" r="{cv.r(1.0)}" '
                     f'fill="none" stroke="{RED}" stroke-width="1" stroke-dasharray="4 3"/>')
    lines.append("</g>")
    lines.append(f'<path d="{cell_d}" fill="none" stroke="{BLUE}" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_figures(O: OrderLattice, out: RenderSpec | None = None) -> dict[str, str]:
    """SVG documents keyed by figure name; written to out.outdir if given."""
    _require_planar(O)
    spec = out or RenderSpec()
    makers = {"cover": render_cover, "floor": render_floor}
    docs = {}
    for name in spec.which:
        if name not in makers:
            raise ValueError(f"unknown figure {name!r}")
        docs[name] = makers[name](O)
    if spec.outdir is not None:
        d = Path(spec.outdir)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in docs.items():
            (d / f"{spec.stem}_{name}.svg").write_text(text)
    return docs


# ---------------------------------------------------------------- volume


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo estimate of the hyperbolic volume of the fundamental
    domain (approximate; inf when the covering radius exceeds 1)."""

    value: float
    stderr: float
    samples: int
    approximate: bool = True


def volume_estimate(O: OrderLattice, samples: int = 4000, seed: int = 0) -> VolumeEstimate:
    """Integrates (1/(n-1)) h(z)^(1-n) over the cell, where h(z)^2 = 1 - d(z)^2
    is the height of the highest sphere above z and n = dim."""
    L = euclid_lattice(O)
    if covering_radius(L).mu_sq > 1:
        return VolumeEstimate(math.inf, 0.0, 0)
    n_dim = O.dim
    geo = L.geometry
    G = np.array(geo.G, dtype=float) / geo.scale
    r = L.rank
    rng = np.random.default_rng(seed)
    U = rng.random((samples, r))
    offs = np.array(list(itertools.product(range(-2, 4), repeat=r)), dtype=float)
    best = np.full(samples, np.inf)
    for off in offs:
        d = U - off
        best = np.minimum(best, np.einsum("si,ij,sj->s", d, G, d))
    h2 = np.clip(1.0 - best, 1e-300, None)
    vals = h2 ** ((1 - n_dim) / 2) / (n_dim - 1)
    cov = math.sqrt(float(L.det))
    return VolumeEstimate(cov * float(vals.mean()), cov * float(vals.std(ddof=1)) / math.sqrt(samples), samples)
