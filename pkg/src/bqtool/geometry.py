"""SL(2,ℂ) matrices and upper-half-space hyperbolic geometry.

Covers the matrix layer (normalized products, classification, translation
half-lengths), oriented boundary lines with their involution matrices,
complex distances and common perpendiculars, the standard right-angled
hexagon with its amplitude, isometric action on points, broken geodesics
with quasigeodesic constants, and the nested half-space certificate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    AxesIntersect,
    NoAxis,
    NotLoxodromic,
    Reducible,
    SharedEndpoint,
)
from .markoff import MarkoffTriple, mu

_DET_TOL = 1e-9
_RENORM_EVERY = 32


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix2C:
    """2×2 complex matrix, kept within 1e-9 of determinant one."""

    a: complex
    b: complex
    c: complex
    d: complex

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def trace(self) -> complex:
        return self.a + self.d

    def normalized(self) -> "Matrix2C":
        """Divide by the principal square root of the determinant."""
        det = self.det()
        s = cmath.sqrt(det)
        if s == 0:
            raise ValueError("singular matrix cannot be normalized")
        return Matrix2C(self.a / s, self.b / s, self.c / s, self.d / s)

    def inverse(self) -> "Matrix2C":
        det = self.det()
        if det == 0:
            raise ValueError("singular matrix has no inverse")
        return Matrix2C(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __matmul__(self, other: "Matrix2C") -> "Matrix2C":
        m = Matrix2C(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
        if abs(m.det() - 1.0) > _DET_TOL:
            return m.normalized()
        return m

    def __neg__(self) -> "Matrix2C":
        return Matrix2C(-self.a, -self.b, -self.c, -self.d)


MAT_ID = Matrix2C(1, 0, 0, 1)


def _near_pm_identity(m: Matrix2C, tol: float) -> bool:
    for sign in (1, -1):
        if (
            abs(m.a - sign) <= tol
            and abs(m.d - sign) <= tol
            and abs(m.b) <= tol
            and abs(m.c) <= tol
        ):
            return True
    return False


def conjugate(g: Matrix2C, m: Matrix2C) -> Matrix2C:
    """g·m·g⁻¹."""
    return (g @ m) @ g.inverse()


def evaluate_word(w: str, A: Matrix2C, B: Matrix2C) -> Matrix2C:
    """Image of a word in letters a/A/b/B; renormalized every 32 products."""
    images = {"a": A, "b": B, "A": A.inverse(), "B": B.inverse()}
    m = MAT_ID
    for i, ch in enumerate(w):
        if ch not in images:
            raise ValueError(f"invalid letter {ch!r}")
        m = m @ images[ch]
        if (i + 1) % _RENORM_EVERY == 0:
            m = m.normalized()
    return m.normalized()


# ---------------------------------------------------------------------------
# classification and half-lengths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfLength:
    """λ = (ℓ + iθ)/2 with ℓ ≥ 0, θ ∈ (−π, π], plus the trace-sign lift:
    sign·2cosh λ = trace."""

    lam: complex
    sign: int

    @property
    def length(self) -> float:
        return 2.0 * self.lam.real

    @property
    def theta(self) -> float:
        return 2.0 * self.lam.imag


def _half_length_of_trace(tr: complex) -> HalfLength:
    lam = cmath.acosh(tr / 2.0)
    sign = 1
    if lam.imag > math.pi / 2:
        lam -= 1j * math.pi
        sign = -1
    elif lam.imag <= -math.pi / 2:
        lam += 1j * math.pi
        sign = -1
    return HalfLength(lam, sign)


def classify_and_half_length(
    m: Matrix2C, tol: float = 1e-9
) -> tuple[str, HalfLength]:
    """Conjugacy class by trace and the branch-fixed half-length.

    Classes: identity, parabolic (trace ±2), elliptic (real trace in
    (−2,2)), loxodromic (everything else).  The half-length satisfies
    sign·2cosh λ = trace with Re λ ≥ 0, Im λ ∈ (−π/2, π/2].
    """
    tr = m.trace()
    hl = _half_length_of_trace(tr)
    if abs(tr - 2.0) <= tol or abs(tr + 2.0) <= tol:
        if _near_pm_identity(m, tol):
            return "identity", hl
        return "parabolic", hl
    if abs(tr.imag) <= tol and -2.0 < tr.real < 2.0:
        return "elliptic", hl
    return "loxodromic", hl


# ---------------------------------------------------------------------------
# boundary lines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Line:
    """Oriented geodesic of H³ named by its two boundary endpoints.

    ``None`` is the point at infinity; orientation runs z1 → z2.
    """

    z1: Optional[complex]
    z2: Optional[complex]

    def __post_init__(self) -> None:
        if self.z1 is None and self.z2 is None:
            raise ValueError("line endpoints must be distinct")
        if self.z1 is not None and self.z2 is not None and self.z1 == self.z2:
            raise ValueError("line endpoints must be distinct")

    def reversed(self) -> "Line":
        return Line(self.z2, self.z1)


def _endpoints_match(
    u: Optional[complex], v: Optional[complex], tol: float = 1e-12
) -> bool:
    if u is None or v is None:
        return u is None and v is None
    return abs(u - v) <= tol * (1.0 + abs(u) + abs(v))


def _share_endpoint(l1: Line, l2: Line) -> bool:
    return (
        _endpoints_match(l1.z1, l2.z1)
        or _endpoints_match(l1.z1, l2.z2)
        or _endpoints_match(l1.z2, l2.z1)
        or _endpoints_match(l1.z2, l2.z2)
    )


def mobius_apply(m: Matrix2C, zeta: Optional[complex]) -> Optional[complex]:
    """Image of a boundary point (None = ∞) under the Möbius map of m."""
    if zeta is None:
        if m.c == 0:
            return None
        return m.a / m.c
    den = m.c * zeta + m.d
    if den == 0:
        return None
    return (m.a * zeta + m.b) / den


def mobius_line(m: Matrix2C, line: Line) -> Line:
    return Line(mobius_apply(m, line.z1), mobius_apply(m, line.z2))


def axis(m: Matrix2C, tol: float = 1e-9) -> Line:
    """Invariant geodesic, oriented repelling → attracting.

    Endpoints are the fixed points of the Möbius action (roots of
    c·w² + (d−a)·w − b); the attracting one carries the eigenvalue
    sign·e^λ of larger modulus.  Elliptic axes use the same eigenvalue
    rule for a deterministic orientation.
    """
    cls, hl = classify_and_half_length(m, tol)
    if cls in ("identity", "parabolic"):
        raise NoAxis(f"{cls} matrix has no axis")
    target = hl.sign * cmath.exp(hl.lam)
    scale = abs(m.a) + abs(m.b) + abs(m.d) + 1.0
    if abs(m.c) <= 1e-14 * scale:
        # fixed points: ∞ (multiplier a) and b/(d−a) (multiplier d)
        w_fin = m.b / (m.d - m.a)
        if abs(m.a - target) <= abs(m.d - target):
            return Line(w_fin, None)
        return Line(None, w_fin)
    tr = m.trace()
    s = cmath.sqrt(tr * tr - 4.0)
    lead = m.a - m.d
    # pick the addition that avoids cancellation for the first root
    if (lead.real * s.real + lead.imag * s.imag) >= 0.0:
        r1 = (lead + s) / (2.0 * m.c)
    else:
        r1 = (lead - s) / (2.0 * m.c)
    if r1 == 0:
        # both roots vanish only for trace ±2, which has no axis
        raise NoAxis("degenerate fixed-point equation")
    r2 = (-m.b / m.c) / r1
    k1 = m.c * r1 + m.d
    k2 = m.c * r2 + m.d
    if abs(k1 - target) <= abs(k2 - target):
        return Line(r2, r1)
    return Line(r1, r2)


def line_matrix(line: Line) -> Matrix2C:
    """Involution matrix of an oriented line: the π-rotation about it.

    Squares to −id, has determinant 1 and trace 0; reversing the line's
    orientation negates the matrix.
    """
    z1, z2 = line.z1, line.z2
    if z1 is not None and z2 is not None:
        f = 1j / (z2 - z1)
        return Matrix2C(
            f * (z1 + z2), f * (-2.0 * z1 * z2), f * 2.0, f * (-(z1 + z2))
        )
    if z2 is None:  # [ζ, ∞]
        return Matrix2C(1j, -2j * z1, 0.0, -1j)
    # [∞, ζ′]
    return Matrix2C(-1j, 2j * z2, 0.0, 1j)


@dataclass(frozen=True)
class ComplexDist:
    """Complex distance d + iθ between oriented lines, normalized to
    d ≥ 0 and θ ∈ (−π, π] (θ ≥ 0 when d = 0)."""

    d: float
    theta: float

    def as_complex(self) -> complex:
        return complex(self.d, self.theta)


def complex_distance(l1: Line, l2: Line) -> ComplexDist:
    """Complex distance via cosh δ = −Tr(R(L1)·R(L2))/2.

    d = 0 with θ ≠ 0 means the lines intersect at angle θ; θ = ±π/2 with
    d = 0 is perpendicular intersection.  Raises SharedEndpoint when the
    lines share a boundary endpoint (including equal lines).
    """
    if _share_endpoint(l1, l2):
        raise SharedEndpoint("lines share a boundary endpoint")
    r1 = line_matrix(l1)
    r2 = line_matrix(l2)
    tr = (r1 @ r2).trace()
    delta = cmath.acosh(-tr / 2.0)
    d = delta.real
    theta = delta.imag
    if d < 0.0:  # principal acosh keeps Re ≥ 0; guard rounding
        d, theta = -d, -theta
    if theta <= -math.pi:
        theta = math.pi
    if d == 0.0 and theta < 0.0:
        theta = -theta
    return ComplexDist(d, theta)


def common_perpendicular(l1: Line, l2: Line) -> Line:
    """The unique line perpendicular to both: axis of R(L1)·R(L2).

    The product of the two π-rotations is a screw motion along the common
    perpendicular (a plain rotation about it when the lines intersect).
    """
    if _share_endpoint(l1, l2):
        raise SharedEndpoint("lines share a boundary endpoint")
    return axis(line_matrix(l1) @ line_matrix(l2))


def map_line_to_standard(line: Line) -> Matrix2C:
    """Determinant-one Möbius map sending the line to [0, ∞]."""
    z1, z2 = line.z1, line.z2
    if z1 is None:
        g = Matrix2C(0.0, 1.0, 1.0, -z2)
    elif z2 is None:
        g = Matrix2C(1.0, -z1, 0.0, 1.0)
    else:
        g = Matrix2C(1.0, -z1, 1.0, -z2)
    return g.normalized()


# ---------------------------------------------------------------------------
# points of H³ and the isometric action
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointH3:
    """Upper half-space point: horizontal coordinate z, height t > 0."""

    z: complex
    t: float

    def __post_init__(self) -> None:
        if not self.t > 0:
            raise ValueError("height must be positive")


ORIGIN = PointH3(0j, 1.0)


def act(m: Matrix2C, p: PointH3) -> PointH3:
    """Isometric action on the upper half space (m normalized first)."""
    if abs(m.det() - 1.0) > _DET_TOL:
        m = m.normalized()
    cz_d = m.c * p.z + m.d
    az_b = m.a * p.z + m.b
    tt = p.t * p.t
    denom = abs(cz_d) ** 2 + abs(m.c) ** 2 * tt
    z_new = (az_b * cz_d.conjugate() + m.a * m.c.conjugate() * tt) / denom
    return PointH3(z_new, p.t / denom)


def hyperbolic_distance(p: PointH3, q: PointH3) -> float:
    """cosh d = 1 + (|z₁−z₂|² + (t₁−t₂)²) / (2 t₁ t₂)."""
    num = abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2
    ch = 1.0 + num / (2.0 * p.t * q.t)
    return math.acosh(ch if ch > 1.0 else 1.0)


def cosh_displacement_of_origin(m: Matrix2C) -> float:
    """cosh d(j, m·j) = (|a|²+|b|²+|c|²+|d|²)/2 for det-one m; fast path."""
    return (
        abs(m.a) ** 2 + abs(m.b) ** 2 + abs(m.c) ** 2 + abs(m.d) ** 2
    ) / 2.0


def foot_on(target: Line, other: Line) -> PointH3:
    """Point of ``target`` nearest to ``other``.

    Conjugates ``target`` to [0,∞]; there the nearest point to a line with
    endpoints w₁, w₂ sits at height √|w₁w₂| over 0.
    """
    if _share_endpoint(target, other):
        raise SharedEndpoint("lines share a boundary endpoint")
    g = map_line_to_standard(target)
    w1 = mobius_apply(g, other.z1)
    w2 = mobius_apply(g, other.z2)
    if w1 is None or w2 is None:
        raise SharedEndpoint("line passes through the image of infinity")
    h = math.sqrt(abs(w1 * w2))
    return act(g.inverse(), PointH3(0j, h))


# ---------------------------------------------------------------------------
# lifting trace triples to matrix pairs
# ---------------------------------------------------------------------------


def lift_triple(
    t: MarkoffTriple, tol: float = 1e-9
) -> tuple[Matrix2C, Matrix2C]:
    """Matrix pair (A, B) with Tr A = x, Tr B = y, Tr AB = z.

    A = [[x,1],[−1,0]]; B = [[0,ξ],[−1/ξ,y]] with ξ the larger-modulus
    root of ξ² + zξ + 1 = 0 (ties by larger argument).  Raises Reducible
    only when μ is within tol of 4 AND one of A, B, AB degenerates to ±id
    (the representation is then genuinely a character of an abelian
    quotient, with no usable pair of axes).
    """
    x, y, z = t.x, t.y, t.z
    A = Matrix2C(x, 1.0, -1.0, 0.0)
    s = cmath.sqrt(z * z - 4.0)
    r1 = (-z + s) / 2.0
    r2 = (-z - s) / 2.0
    if abs(r1) > abs(r2):
        xi = r1
    elif abs(r2) > abs(r1):
        xi = r2
    else:
        xi = r1 if cmath.phase(r1) >= cmath.phase(r2) else r2
    B = Matrix2C(0.0, xi, -1.0 / xi, y)
    AB = A @ B
    if abs(mu(t) - 4.0) <= tol:
        for m in (A, B, AB):
            if _near_pm_identity(m, 1e-6):
                raise Reducible("triple lies on the reducible locus")
    return A, B


# ---------------------------------------------------------------------------
# the standard hexagon and the amplitude
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HexagonData:
    """Standard right-angled hexagon of a matrix pair: the six oriented
    sides (s₂, s₄, s₆ are the axes of A, B, A⁻¹B⁻¹), the six complex side
    lengths σᵢ with cosh σᵢ = −Tr(R(sᵢ₋₁)R(sᵢ₊₁))/2, and the amplitude."""

    sides: tuple[Line, Line, Line, Line, Line, Line]
    sigmas: tuple[
        ComplexDist, ComplexDist, ComplexDist, ComplexDist, ComplexDist, ComplexDist
    ]
    amplitude: complex


def _require_loxodromic(name: str, m: Matrix2C) -> None:
    cls, _ = classify_and_half_length(m)
    if cls != "loxodromic":
        raise NotLoxodromic(f"{name} is {cls}, not loxodromic")


def standard_hexagon(A: Matrix2C, B: Matrix2C) -> HexagonData:
    """Alternate sides are the axes of A, B, A⁻¹B⁻¹ in their translation
    directions; the other three are the pairwise common perpendiculars."""
    _require_loxodromic("first generator", A)
    _require_loxodromic("second generator", B)
    W = A.inverse() @ B.inverse()
    _require_loxodromic("inverse product", W)
    s2 = axis(A)
    s4 = axis(B)
    s6 = axis(W)
    s1 = common_perpendicular(s6, s2)
    s3 = common_perpendicular(s2, s4)
    s5 = common_perpendicular(s4, s6)
    sides = (s1, s2, s3, s4, s5, s6)

    def sig(i: int) -> ComplexDist:
        prev = sides[(i - 2) % 6]
        nxt = sides[i % 6]
        return complex_distance(prev, nxt)

    sigmas = tuple(sig(i) for i in range(1, 7))
    r1 = line_matrix(s1)
    r3 = line_matrix(s3)
    r5 = line_matrix(s5)
    amp = -((r5 @ r3) @ r1).trace() / 2.0
    return HexagonData(sides, sigmas, amp)  # type: ignore[arg-type]


def amplitude(A: Matrix2C, B: Matrix2C, mode: str = "traces") -> complex:
    """Hexagon amplitude of the pair.

    mode "traces": −i·sinh δ·sinh λ_A·sinh λ_B with cosh δ from the cosine
    rule on the half-length coshs (trace/2 values, sign-agnostic).  mode
    "hexagon": −Tr(R₅R₃R₁)/2 from the standard hexagon's line matrices.
    Both square to (4−μ)/4; the two modes agree up to sign.
    """
    if mode == "hexagon":
        return standard_hexagon(A, B).amplitude
    if mode != "traces":
        raise ValueError(f"unknown mode {mode!r}")
    _require_loxodromic("first generator", A)
    _require_loxodromic("second generator", B)
    _require_loxodromic("product", A @ B)
    ch_u = A.trace() / 2.0
    ch_v = B.trace() / 2.0
    ch_w = (A @ B).trace() / 2.0
    sh_u = cmath.sqrt(ch_u * ch_u - 1.0)
    sh_v = cmath.sqrt(ch_v * ch_v - 1.0)
    cosh_delta = (ch_w - ch_u * ch_v) / (sh_u * sh_v)
    sh_delta = cmath.sqrt(cosh_delta * cosh_delta - 1.0)
    return -1j * sh_delta * sh_u * sh_v


# ---------------------------------------------------------------------------
# broken geodesics
# ---------------------------------------------------------------------------


def broken_geodesic(
    w: str, A: Matrix2C, B: Matrix2C, O: PointH3, copies: int
) -> list[PointH3]:
    """Vertex path of the broken geodesic of a cyclic word through O.

    One backward period (Eₙ⁻¹O, …, w⁻¹O) in reverse order, then O, then
    the forward vertices of ``copies`` concatenated repetitions of w.
    Vertex count: |w|·copies + |w| + 1.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    if not w:
        raise ValueError("word must be nonempty")
    images = {"a": A, "b": B, "A": A.inverse(), "B": B.inverse()}
    for ch in w:
        if ch not in images:
            raise ValueError(f"invalid letter {ch!r}")
    n = len(w)
    back: list[PointH3] = []
    g = MAT_ID
    for k in range(1, n + 1):
        g = g @ images[w[n - k].swapcase()]
        if k % _RENORM_EVERY == 0:
            g = g.normalized()
        back.append(act(g, O))
    pts = list(reversed(back))
    pts.append(O)
    g = MAT_ID
    for j in range(copies * n):
        g = g @ images[w[j % n]]
        if (j + 1) % _RENORM_EVERY == 0:
            g = g.normalized()
        pts.append(act(g, O))
    return pts


def quasigeodesic_constants(path: list[PointH3], eps: float) -> float:
    """Smallest K of the canonical form for this vertex path.

    K = max(max consecutive step, max over n<m of (m−n)/(d(Pₙ,Pₘ)+ε));
    with this K the path satisfies both quasigeodesic inequalities for the
    given ε.  Returns +∞ when some pair has d + ε = 0.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if len(path) < 2:
        raise ValueError("need at least two points")
    z = np.array([p.z for p in path], dtype=complex)
    t = np.array([p.t for p in path], dtype=float)
    dz2 = np.abs(z[:, None] - z[None, :]) ** 2
    dt2 = (t[:, None] - t[None, :]) ** 2
    ch = 1.0 + (dz2 + dt2) / (2.0 * t[:, None] * t[None, :])
    dist = np.arccosh(np.maximum(ch, 1.0))
    n = len(path)
    idx = np.arange(n - 1)
    max_step = float(dist[idx, idx + 1].max())
    iu, ju = np.triu_indices(n, k=1)
    denom = dist[iu, ju] + eps
    if np.any(denom == 0.0):
        return math.inf
    ratio = float(((ju - iu) / denom).max())
    return max(max_step, ratio)


# ---------------------------------------------------------------------------
# nested half-space certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NestingRelation:
    name: str
    holds: bool
    margin: float


@dataclass(frozen=True)
class NestingReport:
    """Result of the half-space nesting check.

    ``plane_radius`` is the Euclidean radius of the plane H (orthogonal to
    Ax(B), through the common perpendicular of the axes) after Ax(B) is
    mapped to [0,∞]; margins are Euclidean separations of boundary circles
    in that chart.  ``axis_distance`` is δ between the two axes.
    """

    relations: tuple[NestingRelation, ...]
    all_hold: bool
    plane_radius: float
    axis_distance: ComplexDist
    im_delta_abs: float


def _circumcircle(
    p1: complex, p2: complex, p3: complex
) -> Optional[tuple[complex, float]]:
    det = 2.0 * (
        p1.real * (p2.imag - p3.imag)
        + p2.real * (p3.imag - p1.imag)
        + p3.real * (p1.imag - p2.imag)
    )
    scale = (abs(p1) + abs(p2) + abs(p3)) ** 2 + 1.0
    if abs(det) <= 1e-13 * scale:
        return None
    q1 = abs(p1) ** 2
    q2 = abs(p2) ** 2
    q3 = abs(p3) ** 2
    ux = (
        q1 * (p2.imag - p3.imag) + q2 * (p3.imag - p1.imag) + q3 * (p1.imag - p2.imag)
    ) / det
    uy = (
        q1 * (p3.real - p2.real) + q2 * (p1.real - p3.real) + q3 * (p2.real - p1.real)
    ) / det
    center = complex(ux, uy)
    return center, abs(p1 - center)


def _image_region(
    m: Matrix2C, r: float
) -> Optional[tuple[complex, float, str]]:
    """Image of the half-space exterior to |w| = r under the Möbius map of
    m, as (boundary center, radius, side) with side "in" or "out"."""
    pts = (complex(r, 0.0), complex(0.0, r), complex(-r, 0.0))
    imgs = []
    for p in pts:
        w = mobius_apply(m, p)
        if w is None:
            return None
        imgs.append(w)
    circ = _circumcircle(*imgs)
    if circ is None:
        return None
    center, radius = circ
    probe = mobius_apply(m, None)  # image of ∞, a point of the region
    if probe is None:
        side = "out"
    else:
        side = "in" if abs(probe - center) < radius else "out"
    return center, radius, side


def _containment_margin(
    c1: complex, r1: float, side1: str, c2: complex, r2: float, side2: str
) -> float:
    """Euclidean margin by which region 1 contains region 2 (≤ 0: fails)."""
    sep = abs(c1 - c2)
    if side1 == "out" and side2 == "out":
        return r2 - r1 - sep
    if side1 == "out" and side2 == "in":
        return sep - r1 - r2
    if side1 == "in" and side2 == "in":
        return r1 - r2 - sep
    return -math.inf  # a bounded disk never contains an exterior


def nested_halfspace_check(
    A: Matrix2C, B: Matrix2C, tol: float = 1e-9
) -> NestingReport:
    """Check X⁻¹Ĥ ⊃ Ĥ ⊃ YĤ for X, Y ∈ {A, B}.

    H is the plane orthogonal to Ax(B) containing the common perpendicular
    of the two axes; Ĥ is its half-space on the attracting side of B.  In
    the chart with Ax(B) = [0,∞], H is the hemisphere |w| = r and every
    relation reduces to circle containment on the boundary, reported with
    its Euclidean margin.
    """
    ax_a = axis(A)
    ax_b = axis(B)
    delta = complex_distance(ax_a, ax_b)
    if delta.d <= tol:
        raise AxesIntersect("the two axes intersect")
    cls_a, _ = classify_and_half_length(A, tol)
    cls_b, _ = classify_and_half_length(B, tol)
    if cls_a != "loxodromic" or cls_b != "loxodromic":
        raise NotLoxodromic("both generators must be loxodromic")
    perp = common_perpendicular(ax_a, ax_b)
    g = map_line_to_standard(ax_b)
    w1 = mobius_apply(g, perp.z1)
    w2 = mobius_apply(g, perp.z2)
    if w1 is None or w2 is None:
        raise SharedEndpoint("degenerate configuration")
    r = math.sqrt(abs(w1 * w2))
    a_t = conjugate(g, A)
    b_t = conjugate(g, B)
    base = (0j, r, "out")
    relations = []
    for name, m, image_first in (
        ("Ainv(H) contains H", a_t.inverse(), True),
        ("Binv(H) contains H", b_t.inverse(), True),
        ("H contains A(H)", a_t, False),
        ("H contains B(H)", b_t, False),
    ):
        region = _image_region(m, r)
        if region is None:
            relations.append(NestingRelation(name, False, -math.inf))
            continue
        if image_first:
            margin = _containment_margin(*region, *base)
        else:
            margin = _containment_margin(*base, *region)
        relations.append(NestingRelation(name, margin > 0.0, margin))
    return NestingReport(
        relations=tuple(relations),
        all_hold=all(rel.holds for rel in relations),
        plane_radius=r,
        axis_distance=delta,
        im_delta_abs=abs(delta.theta),
    )
