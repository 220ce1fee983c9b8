"""Desk-scale empirical verifiers tying the combinatorics to the geometry.

Four scans: quasigeodesic constants per primitive class (ps_scan), bounded
intersections of palindromic axes with the hyperelliptic axes (bip_scan),
angle/distance decay along neighbour pairs (angle_decay_scan), and the
descending palindromic chain from a class down to the certified core
(palindromic_chain).
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .errors import (
    AxesIntersect,
    CertifiedLarge,
    ChainStuck,
    NoAxis,
    NotAdmissible,
    NotCertified,
    SharedEndpoint,
)
from .farey import (
    BasicPair,
    Fraction,
    enumerate_primitives,
    farey_sum,
    is_neighbour,
    mod2_type,
    palindromic_representative,
)
from .geometry import (
    ORIGIN,
    ComplexDist,
    Line,
    Matrix2C,
    PointH3,
    axis,
    broken_geodesic,
    classify_and_half_length,
    common_perpendicular,
    complex_distance,
    evaluate_word,
    foot_on,
    hyperbolic_distance,
    lift_triple,
    quasigeodesic_constants,
)
from .markoff import (
    BqParams,
    MarkoffTriple,
    ValueMap,
    certified_core,
    decide_bq,
)

# ---------------------------------------------------------------------------
# shared serialization helpers
# ---------------------------------------------------------------------------


def complex_to_json(z: complex) -> list[float]:
    return [z.real, z.imag]


def point_to_json(p: PointH3) -> dict:
    return {"z": complex_to_json(p.z), "t": p.t}


def line_to_json(line: Line) -> list:
    return [
        None if line.z1 is None else complex_to_json(line.z1),
        None if line.z2 is None else complex_to_json(line.z2),
    ]


def _fmt(x: float) -> str:
    return repr(x)


# ---------------------------------------------------------------------------
# basepoint
# ---------------------------------------------------------------------------


def canonical_basepoint(A: Matrix2C, B: Matrix2C) -> tuple[PointH3, str]:
    """Intersection of the common perpendicular of the two axes with the
    first axis; falls back to the standard origin j when the construction
    degenerates (missing axis or shared endpoint)."""
    try:
        ax_a = axis(A)
        ax_b = axis(B)
        perp = common_perpendicular(ax_a, ax_b)
        return foot_on(perp, ax_a), "canonical"
    except (NoAxis, SharedEndpoint, AxesIntersect):
        return ORIGIN, "origin-fallback"


# ---------------------------------------------------------------------------
# ps_scan: per-class quasigeodesic constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsRecord:
    fraction: Fraction
    word_length: int
    image_class: str
    k: float
    flagged: bool


@dataclass(frozen=True)
class PsReport:
    """Fitted quasigeodesic constants K per primitive class at fixed ε.

    k_star aggregates the per-class constants (max); flagged classes have
    a non-loxodromic image (no linear divergence) and count as K = ∞.
    """

    depth: int
    eps: float
    copies: int
    basepoint: PointH3
    basepoint_kind: str
    records: tuple[PsRecord, ...]
    k_star: float
    flagged: tuple[Fraction, ...]
    worst: Optional[Fraction]

    def to_json_dict(self) -> dict:
        return {
            "kind": "ps-report",
            "depth": self.depth,
            "eps": self.eps,
            "copies": self.copies,
            "basepoint": point_to_json(self.basepoint),
            "basepoint_kind": self.basepoint_kind,
            "k_star": None if math.isinf(self.k_star) else self.k_star,
            "flagged": [str(f) for f in self.flagged],
            "worst": None if self.worst is None else str(self.worst),
            "records": [
                {
                    "fraction": str(r.fraction),
                    "word_length": r.word_length,
                    "image_class": r.image_class,
                    "k": None if math.isinf(r.k) else r.k,
                    "flagged": r.flagged,
                }
                for r in self.records
            ],
        }

    def csv_rows(self) -> list[str]:
        rows = ["fraction,level,image_class,k,flagged"]
        for r in self.records:
            k = "inf" if math.isinf(r.k) else _fmt(r.k)
            rows.append(
                f"{r.fraction},{r.fraction.level},{r.image_class},{k},"
                f"{int(r.flagged)}"
            )
        return rows


def _ps_record(
    args: tuple[Fraction, str, Matrix2C, Matrix2C, PointH3, float, int],
) -> PsRecord:
    f, word, A, B, O, eps, copies = args
    m = evaluate_word(word, A, B)
    cls, _ = classify_and_half_length(m)
    if cls != "loxodromic":
        return PsRecord(f, len(word), cls, math.inf, True)
    path = broken_geodesic(word, A, B, O, copies)
    k = quasigeodesic_constants(path, eps)
    return PsRecord(f, len(word), cls, k, math.isinf(k))


def ps_scan(
    t: MarkoffTriple,
    depth: int,
    eps: float = 1.0,
    copies: int = 6,
    basepoint: Optional[PointH3] = None,
    workers: int = 1,
) -> PsReport:
    """Broken-geodesic quasigeodesic constants for every primitive class
    with |p| + q ≤ depth, from a common basepoint.

    A class is flagged when its image is not loxodromic: its broken
    geodesic cannot diverge linearly, so no finite K works uniformly in
    the number of copies.  Raises Reducible when the triple has no usable
    lift.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    A, B = lift_triple(t)
    if basepoint is None:
        O, kind = canonical_basepoint(A, B)
    else:
        O, kind = basepoint, "user"
    jobs = [(f, w, A, B, O, eps, copies) for f, w in enumerate_primitives(depth)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_ps_record, jobs, chunksize=8))
    else:
        records = [_ps_record(job) for job in jobs]
    flagged = tuple(r.fraction for r in records if r.flagged)
    k_star = max(r.k for r in records)
    worst: Optional[Fraction] = None
    finite = [r for r in records if not r.flagged]
    if finite and not math.isinf(k_star):
        worst = max(finite, key=lambda r: (r.k, r.fraction.key())).fraction
    return PsReport(
        depth=depth,
        eps=eps,
        copies=copies,
        basepoint=O,
        basepoint_kind=kind,
        records=tuple(records),
        k_star=k_star,
        flagged=flagged,
        worst=worst,
    )


# ---------------------------------------------------------------------------
# bip_scan: palindromic axes against the hyperelliptic axes
# ---------------------------------------------------------------------------

_PAIR_AXIS_NAME = {
    BasicPair.AB: "E(A,B)",
    BasicPair.A_AB: "E(A,AB)",
    BasicPair.B_AB: "E(B,AB)",
}


@dataclass(frozen=True)
class BipRecord:
    fraction: Fraction
    pair: BasicPair
    distance: float
    residual_d: float
    residual_theta: float
    point: Optional[PointH3]
    skipped: bool
    skip_reason: str


@dataclass(frozen=True)
class BipReport:
    """Palindromic-axis intersections with the three hyperelliptic axes.

    Every non-skipped record's axis meets its hyperelliptic axis
    perpendicularly (residuals near 0); d_max bounds the intersection
    points' distance from the basepoint, overall and per pair.
    """

    depth: int
    basepoint: PointH3
    axes: dict[BasicPair, Line]
    records: tuple[BipRecord, ...]
    d_max: float
    d_max_by_pair: dict[BasicPair, float]
    skipped_count: int

    def to_json_dict(self) -> dict:
        return {
            "kind": "bip-report",
            "depth": self.depth,
            "basepoint": point_to_json(self.basepoint),
            "axes": {
                p.cli_name: line_to_json(line) for p, line in self.axes.items()
            },
            "d_max": self.d_max,
            "d_max_by_pair": {
                p.cli_name: d for p, d in self.d_max_by_pair.items()
            },
            "skipped_count": self.skipped_count,
            "records": [
                {
                    "fraction": str(r.fraction),
                    "pair": r.pair.cli_name,
                    "distance": r.distance,
                    "residual_d": r.residual_d,
                    "residual_theta": r.residual_theta,
                    "point": None if r.point is None else point_to_json(r.point),
                    "skipped": r.skipped,
                    "skip_reason": r.skip_reason,
                }
                for r in self.records
            ],
        }

    def csv_rows(self) -> list[str]:
        rows = ["fraction,pair,distance,residual_d,residual_theta,skipped"]
        for r in self.records:
            rows.append(
                f"{r.fraction},{r.pair.cli_name},{_fmt(r.distance)},"
                f"{_fmt(r.residual_d)},{_fmt(r.residual_theta)},{int(r.skipped)}"
            )
        return rows


def bip_scan(t: MarkoffTriple, depth: int) -> BipReport:
    """Intersection pattern of palindromic primitive axes with the three
    hyperelliptic axes, for positive classes with p + q ≤ depth.

    For each admissible (class, pair) the palindromic representative is
    evaluated in the pair's matrices; its axis must meet the pair's
    hyperelliptic axis perpendicularly, and the intersection point's
    distance to the canonical basepoint is recorded.  Non-loxodromic
    palindromic images are recorded as skipped, never fatal.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    A, B = lift_triple(t)
    AB = A @ B
    pair_matrices: dict[BasicPair, tuple[Matrix2C, Matrix2C]] = {
        BasicPair.AB: (A, B),
        BasicPair.A_AB: (A, AB),
        BasicPair.B_AB: (B, AB),
    }
    axes: dict[BasicPair, Line] = {}
    for pair, (m1, m2) in pair_matrices.items():
        axes[pair] = common_perpendicular(axis(m1), axis(m2))
    O = foot_on(axes[BasicPair.AB], axis(A))
    records: list[BipRecord] = []
    for f, _word in enumerate_primitives(depth):
        if f.p < 0:
            continue
        ftype = mod2_type(f)
        for pair in BasicPair:
            if ftype not in pair.member_types:
                continue
            word = palindromic_representative(f, pair)
            m1, m2 = pair_matrices[pair]
            w_mat = evaluate_word(word, m1, m2)
            cls, _ = classify_and_half_length(w_mat)
            if cls in ("identity", "parabolic"):
                records.append(
                    BipRecord(
                        f, pair, math.nan, math.nan, math.nan, None, True,
                        f"image is {cls}",
                    )
                )
                continue
            try:
                ax_w = axis(w_mat)
                cd = complex_distance(ax_w, axes[pair])
                pt = foot_on(axes[pair], ax_w)
            except (SharedEndpoint, NoAxis) as exc:
                records.append(
                    BipRecord(
                        f, pair, math.nan, math.nan, math.nan, None, True,
                        type(exc).__name__,
                    )
                )
                continue
            res_theta = min(
                abs(cd.theta - math.pi / 2), abs(cd.theta + math.pi / 2)
            )
            dist = hyperbolic_distance(pt, O)
            records.append(
                BipRecord(f, pair, dist, cd.d, res_theta, pt, False, "")
            )
    live = [r for r in records if not r.skipped]
    d_max = max((r.distance for r in live), default=0.0)
    d_by_pair = {
        pair: max((r.distance for r in live if r.pair is pair), default=0.0)
        for pair in BasicPair
    }
    return BipReport(
        depth=depth,
        basepoint=O,
        axes=axes,
        records=tuple(records),
        d_max=d_max,
        d_max_by_pair=d_by_pair,
        skipped_count=len(records) - len(live),
    )


# ---------------------------------------------------------------------------
# angle_decay_scan: neighbour-pair axis angles and distances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AngleRecord:
    u: Fraction
    v: Fraction
    ell_u: float
    ell_v: float
    delta: ComplexDist


@dataclass(frozen=True)
class AngleReport:
    """Axis complex distances δ over positive neighbour pairs.

    fitted_k = sup |sinh δ|·e^(max ℓ) over the records; im_band_max gives
    max |Im δ| per band of increasing max ℓ (quartiles of the record list
    sorted by max ℓ) — expected non-increasing toward 0.
    """

    depth: int
    records: tuple[AngleRecord, ...]
    fitted_k: float
    im_band_max: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "kind": "angle-report",
            "depth": self.depth,
            "fitted_k": self.fitted_k,
            "im_band_max": list(self.im_band_max),
            "records": [
                {
                    "u": str(r.u),
                    "v": str(r.v),
                    "ell_u": r.ell_u,
                    "ell_v": r.ell_v,
                    "delta": [r.delta.d, r.delta.theta],
                }
                for r in self.records
            ],
        }

    def csv_rows(self) -> list[str]:
        rows = ["u,v,ell_u,ell_v,delta_d,delta_theta"]
        for r in self.records:
            rows.append(
                f"{r.u},{r.v},{_fmt(r.ell_u)},{_fmt(r.ell_v)},"
                f"{_fmt(r.delta.d)},{_fmt(r.delta.theta)}"
            )
        return rows


def angle_decay_scan(
    t: MarkoffTriple, depth: int, params: Optional[BqParams] = None
) -> AngleReport:
    """δ between axes of every positive neighbour pair to the given depth.

    Requires the triple to certify (NotCertified otherwise): decay of the
    intersection angles is the geometric content of certification, and on
    failing triples axes may degenerate.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    outcome = decide_bq(t, params)
    if not outcome.is_certified:
        raise NotCertified(f"decide_bq: {outcome.status}")
    A, B = lift_triple(t)
    f0, f1 = Fraction(0, 1), Fraction(1, 0)
    records: list[AngleRecord] = []
    stack: list[tuple[Fraction, Fraction, Matrix2C, Matrix2C]] = [
        (f0, f1, A, B)
    ]
    while stack:
        u, v, mu_mat, mv_mat = stack.pop()
        _, hu = classify_and_half_length(mu_mat)
        _, hv = classify_and_half_length(mv_mat)
        delta = complex_distance(axis(mu_mat), axis(mv_mat))
        records.append(AngleRecord(u, v, hu.length, hv.length, delta))
        med = farey_sum(u, v)
        if med.level <= depth:
            mm = mu_mat @ mv_mat
            stack.append((u, med, mu_mat, mm))
            stack.append((med, v, mm, mv_mat))
    records.sort(key=lambda r: (max(r.ell_u, r.ell_v), r.u.key(), r.v.key()))
    fitted = 0.0
    for r in records:
        val = abs(cmath.sinh(complex(r.delta.d, r.delta.theta))) * math.exp(
            max(r.ell_u, r.ell_v)
        )
        fitted = max(fitted, val)
    n = len(records)
    bands: list[float] = []
    band_count = min(4, n)
    for i in range(band_count):
        lo = i * n // band_count
        hi = (i + 1) * n // band_count
        chunk = records[lo:hi]
        bands.append(max(abs(r.delta.theta) for r in chunk) if chunk else 0.0)
    return AngleReport(
        depth=depth,
        records=tuple(records),
        fitted_k=fitted,
        im_band_max=tuple(bands),
    )


# ---------------------------------------------------------------------------
# palindromic_chain: descent to the certified core
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    fraction: Fraction
    word: str
    value_modulus: float


@dataclass(frozen=True)
class ChainReport:
    """Descending chain of same-pair palindromic neighbours.

    Consecutive fractions are Farey neighbours of complementary parity
    types within the pair, with strictly decreasing trace modulus; the
    terminal fraction is a region of — or adjacent to — the certified
    core.  step_distances[i] is δ between the axes of steps i and i+1
    (None when an axis degenerates).
    """

    pair: BasicPair
    steps: tuple[ChainStep, ...]
    step_distances: tuple[Optional[ComplexDist], ...]
    terminal: Fraction
    core_contact: Fraction

    def to_json_dict(self) -> dict:
        return {
            "kind": "chain-report",
            "pair": self.pair.cli_name,
            "terminal": str(self.terminal),
            "core_contact": str(self.core_contact),
            "steps": [
                {
                    "fraction": str(s.fraction),
                    "word": s.word,
                    "value_modulus": s.value_modulus,
                }
                for s in self.steps
            ],
            "step_distances": [
                None if d is None else [d.d, d.theta]
                for d in self.step_distances
            ],
        }


_CHAIN_BUDGET = 10_000
_FAN_WINDOW = 200


def _safe_modulus(vm: ValueMap, f: Fraction) -> float:
    try:
        return abs(vm.get(f))
    except CertifiedLarge:
        return math.inf


def _parents(f: Fraction) -> tuple[Fraction, Fraction]:
    """The two Farey parents of a positive finite fraction (mediant
    decomposition); base regions are their own degenerate case."""
    lo, hi = Fraction(0, 1), Fraction(1, 0)
    if f == Fraction(1, 1) or f == lo or f == hi:
        return lo, hi
    while True:
        med = farey_sum(lo, hi)
        if med == f:
            return lo, hi
        if (f.p * med.q) < (med.p * f.q):
            hi = med
        else:
            lo = med


def _complementary_type(pair: BasicPair, ftype) -> object:
    other = [tp for tp in pair.member_types if tp is not ftype]
    return other[0]


def palindromic_chain(
    f: Fraction, pair: BasicPair, t: MarkoffTriple,
    params: Optional[BqParams] = None,
) -> ChainReport:
    """Descend from ``f`` to the certified core through same-pair
    palindromic neighbours of strictly decreasing trace modulus.

    At each step the next element is the neighbour of the current one
    with the complementary parity type (within the pair) and the smallest
    trace modulus, provided it is strictly smaller; a step with no such
    neighbour raises ChainStuck.  Terminates at the first element that is
    a core region or a neighbour of one.
    """
    if mod2_type(f) not in pair.member_types:
        raise NotAdmissible(f"{f} is not admissible for {pair}")
    outcome = decide_bq(t, params)
    if not outcome.is_certified:
        raise NotCertified(f"decide_bq: {outcome.status}")
    assert outcome.certificate is not None
    _, core_regions = certified_core(outcome.certificate)
    vm = ValueMap(t)
    A, B = lift_triple(t)
    AB = A @ B
    pair_matrices = {
        BasicPair.AB: (A, B),
        BasicPair.A_AB: (A, AB),
        BasicPair.B_AB: (B, AB),
    }[pair]

    def contact(u: Fraction) -> Optional[Fraction]:
        if u in core_regions:
            return u
        for c in sorted(core_regions, key=Fraction.key):
            if is_neighbour(u, c):
                return c
        return None

    chain = [f]
    current = f
    for _ in range(_CHAIN_BUDGET):
        if contact(current) is not None:
            break
        cur_mod = _safe_modulus(vm, current)
        want = _complementary_type(pair, mod2_type(current))
        p1, _p2 = _parents(current)
        best: Optional[tuple[float, tuple[int, int], Fraction]] = None
        for direction in (1, -1):
            prev_mod = math.inf
            rises = 0
            for k in range(0, _FAN_WINDOW) if direction == 1 else range(
                -1, -_FAN_WINDOW, -1
            ):
                np_, nq = p1.p + k * current.p, p1.q + k * current.q
                if np_ == 0 and nq == 0:
                    continue
                n = Fraction(np_, nq)
                if n.p < 0:
                    # the construction stays among positive generators
                    continue
                nmod = _safe_modulus(vm, n)
                if mod2_type(n) is want and nmod < cur_mod:
                    cand = (nmod, n.key(), n)
                    if best is None or cand < best:
                        best = cand
                if nmod >= prev_mod and nmod >= cur_mod:
                    rises += 1
                    if rises >= 2:
                        break
                else:
                    rises = 0
                prev_mod = nmod
        if best is None:
            raise ChainStuck(
                f"no descending neighbour of complementary type at {current}"
            )
        current = best[2]
        chain.append(current)
    else:
        raise ChainStuck("descent budget exhausted")
    words = [palindromic_representative(u, pair) for u in chain]
    mats = [evaluate_word(w, *pair_matrices) for w in words]
    dists: list[Optional[ComplexDist]] = []
    for m1, m2 in zip(mats, mats[1:]):
        try:
            dists.append(complex_distance(axis(m1), axis(m2)))
        except (NoAxis, SharedEndpoint):
            dists.append(None)
    steps = tuple(
        ChainStep(u, w, _safe_modulus(vm, u)) for u, w in zip(chain, words)
    )
    terminal = chain[-1]
    cc = contact(terminal)
    assert cc is not None
    return ChainReport(
        pair=pair,
        steps=steps,
        step_distances=tuple(dists),
        terminal=terminal,
        core_contact=cc,
    )
