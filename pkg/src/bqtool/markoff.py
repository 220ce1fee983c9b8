"""Trace propagation on the Farey tree and the certified BQ semi-decision.

A trace triple (x, y, z) assigns complex values to the three base regions
0/1, 1/0, 1/1; the edge relation ẑ = û·v̂ − ŵ propagates values to every
region.  ``decide_bq`` explores the tree breadth-first, reports a witness
region whose value meets the real interval [−2, 2], prunes frontier edges
whose wakes provably stay large, and emits a machine-checkable certificate
on success.  ``validate_certificate`` re-derives everything independently.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import CertifiedLarge, NotCertified
from .farey import Fraction, farey_sum, is_neighbour

#: Values whose modulus provably exceeds this are flagged large and never
#: materialized as doubles.
LARGE_THRESHOLD = 1e300

_STATUS_NAMES = ("certified", "fails", "inconclusive", "reducible")


# ---------------------------------------------------------------------------
# triples and the two local moves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkoffTriple:
    """Traces (x, y, z) of the images of a, b, ab."""

    x: complex
    y: complex
    z: complex

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.x, self.y, self.z)


def mu(t: MarkoffTriple) -> complex:
    """The conserved quantity x² + y² + z² − xyz (commutator trace + 2)."""
    return t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z


def edge_flip(x: complex, y: complex, z: complex) -> complex:
    """Third-trace flip across an edge: (x, y, z) ↦ xy − z.  Involution."""
    return x * y - z


# ---------------------------------------------------------------------------
# memoized trace evaluation along Stern–Brocot paths
# ---------------------------------------------------------------------------


def _modulus(v: complex) -> float:
    # abs(complex) defers to the platform hypot: overflow-free for any
    # finite modulus, and bitwise identical to the compiled kernel's hypot.
    try:
        return abs(v)
    except OverflowError:
        return math.inf


class ValueMap:
    """Memoized region values for one base triple.

    Values are computed by edge flips along the Stern–Brocot descent to the
    target fraction, so every computed value satisfies the vertex and edge
    relations by construction.  Private per use; not thread-shared.
    """

    def __init__(self, base: MarkoffTriple) -> None:
        self.base = base
        self._memo: dict[Fraction, complex] = {
            Fraction(0, 1): base.x,
            Fraction(1, 0): base.y,
            Fraction(1, 1): base.z,
        }

    def get(self, f: Fraction) -> complex:
        """Value of the region ``f``.  Raises CertifiedLarge above 1e300."""
        got = self._memo.get(f)
        if got is not None:
            return got
        x, y, z = self.base.as_tuple()
        if f.p >= 0:
            lo, lo_v = (0, 1), x
            hi, hi_v = (1, 0), y
            med, med_v = (1, 1), z
        else:
            lo, lo_v = (-1, 0), y
            hi, hi_v = (0, 1), x
            if _modulus(x) * _modulus(y) + _modulus(z) > LARGE_THRESHOLD:
                raise CertifiedLarge("|value| bound exceeded at (-1, 1)")
            med, med_v = (-1, 1), x * y - z
            self._memo.setdefault(Fraction(-1, 1), med_v)
        lo_m, hi_m, med_m = _modulus(lo_v), _modulus(hi_v), _modulus(med_v)
        target = (f.p, f.q)
        while med != target:
            if f.p * med[1] < med[0] * f.q:  # target below the mediant
                new = (lo[0] + med[0], lo[1] + med[1])
                if lo_m * med_m + hi_m > LARGE_THRESHOLD:
                    raise CertifiedLarge(
                        f"|value| > {LARGE_THRESHOLD:g} at {new}"
                    )
                new_v = lo_v * med_v - hi_v
                hi, hi_v, hi_m = med, med_v, med_m
            else:
                new = (med[0] + hi[0], med[1] + hi[1])
                if med_m * hi_m + lo_m > LARGE_THRESHOLD:
                    raise CertifiedLarge(
                        f"|value| > {LARGE_THRESHOLD:g} at {new}"
                    )
                new_v = med_v * hi_v - lo_v
                lo, lo_v, lo_m = med, med_v, med_m
            new_m = _modulus(new_v)
            if new_m > LARGE_THRESHOLD:
                raise CertifiedLarge(f"|value| > {LARGE_THRESHOLD:g} at {new}")
            med, med_v, med_m = new, new_v, new_m
            self._memo.setdefault(Fraction(*new), new_v)
        return med_v


def trace_of_fraction(vm: ValueMap, f: Fraction) -> complex:
    """Value of the trace map at region ``f`` (memoized flips)."""
    return vm.get(f)


# ---------------------------------------------------------------------------
# search parameters, frames, certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BqParams:
    """Parameters of the BQ search.

    ``tau``: tolerance for the witness / reducibility / degenerate-ray tests;
    ``margin``: prune margin δ; ``floor``: wake floor M (coerced ≥ 2+δ);
    ``budget``: maximum number of valued regions before giving up.
    """

    tau: float = 1e-9
    margin: float = 1e-6
    floor: float = 0.0
    budget: int = 100_000

    def effective_floor(self) -> float:
        return max(self.floor, 2.0 + self.margin)

    def sane(self) -> bool:
        return self.tau > 0 and self.margin > 0 and self.budget >= 1


@dataclass(frozen=True)
class EdgeFrame:
    """One explored edge: flank regions u, v; third regions at its two
    vertices (near toward the base, far beyond), with their values.

    Fractions are raw integer pairs (infinity appears as (−1, 0) on the
    negative side) so that mediants are componentwise sums; ``None`` values
    mean flagged-large, with the modulus kept separately (inf when large).
    """

    u: tuple[int, int]
    v: tuple[int, int]
    near: tuple[int, int]
    far: tuple[int, int]
    u_val: Optional[complex]
    v_val: Optional[complex]
    near_val: Optional[complex]
    far_val: Optional[complex]
    u_mod: float
    v_mod: float
    near_mod: float
    far_mod: float
    pruned: bool = False

    def key(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Identity of the undirected edge: its normalized flank pair."""
        a = _norm_pair(self.u)
        b = _norm_pair(self.v)
        return (a, b) if a <= b else (b, a)

    def near_vertex(self) -> frozenset[Fraction]:
        return frozenset(
            (Fraction(*self.u), Fraction(*self.v), Fraction(*self.near))
        )

    def far_vertex(self) -> frozenset[Fraction]:
        return frozenset(
            (Fraction(*self.u), Fraction(*self.v), Fraction(*self.far))
        )


def _norm_pair(pq: tuple[int, int]) -> tuple[int, int]:
    f = Fraction(*pq)
    return (f.p, f.q)


@dataclass(frozen=True)
class FrontierRecord:
    """A pruned edge with the three moduli and the prune-rule margins."""

    edge_index: int
    flank_moduli: tuple[float, float]
    far_modulus: float
    margin_floor: float
    margin_flanks: float
    margin_dominance: float


@dataclass
class Certificate:
    """Everything needed to re-check a search independently."""

    triple: MarkoffTriple
    params: BqParams
    status: str
    edges: list[EdgeFrame]
    frontier: list[FrontierRecord]
    omega: list[tuple[Fraction, complex]]
    sinks: list[tuple[Fraction, Fraction, Fraction]]
    nodes: int

    # -- serialization ------------------------------------------------------

    SCHEMA_VERSION = 1

    def to_json_dict(self) -> dict:
        def ser_val(v: Optional[complex]) -> object:
            return "large" if v is None else [v.real, v.imag]

        return {
            "schema_version": self.SCHEMA_VERSION,
            "kind": "bq-certificate",
            "triple": [[c.real, c.imag] for c in self.triple.as_tuple()],
            "params": {
                "tau": self.params.tau,
                "margin": self.params.margin,
                "floor": self.params.effective_floor(),
                "budget": self.params.budget,
            },
            "status": self.status,
            "nodes": self.nodes,
            "edges": [
                {
                    "u": list(e.u),
                    "v": list(e.v),
                    "near": list(e.near),
                    "far": list(e.far),
                    "values": {
                        "u": ser_val(e.u_val),
                        "v": ser_val(e.v_val),
                        "near": ser_val(e.near_val),
                        "far": ser_val(e.far_val),
                    },
                    "pruned": e.pruned,
                }
                for e in self.edges
            ],
            "frontier": [
                {
                    "edge_index": r.edge_index,
                    "moduli": [r.flank_moduli[0], r.flank_moduli[1], r.far_modulus],
                    "margins": [
                        r.margin_floor,
                        r.margin_flanks,
                        r.margin_dominance,
                    ],
                }
                for r in self.frontier
            ],
            "omega": [
                [[f.p, f.q], [v.real, v.imag]] for (f, v) in self.omega
            ],
            "sinks": [[[g.p, g.q] for g in s] for s in self.sinks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Certificate":
        if doc.get("schema_version") != cls.SCHEMA_VERSION:
            raise ValueError("unsupported certificate schema version")

        def de_val(v: object) -> tuple[Optional[complex], float]:
            if v == "large":
                return None, math.inf
            re, im = v  # type: ignore[misc]
            c = complex(re, im)
            return c, _modulus(c)

        triple = MarkoffTriple(*(complex(re, im) for re, im in doc["triple"]))
        p = doc["params"]
        params = BqParams(
            tau=p["tau"], margin=p["margin"], floor=p["floor"], budget=p["budget"]
        )
        edges = []
        for e in doc["edges"]:
            vals = {k: de_val(e["values"][k]) for k in ("u", "v", "near", "far")}
            edges.append(
                EdgeFrame(
                    u=tuple(e["u"]),
                    v=tuple(e["v"]),
                    near=tuple(e["near"]),
                    far=tuple(e["far"]),
                    u_val=vals["u"][0],
                    v_val=vals["v"][0],
                    near_val=vals["near"][0],
                    far_val=vals["far"][0],
                    u_mod=vals["u"][1],
                    v_mod=vals["v"][1],
                    near_mod=vals["near"][1],
                    far_mod=vals["far"][1],
                    pruned=e["pruned"],
                )
            )
        frontier = [
            FrontierRecord(
                edge_index=r["edge_index"],
                flank_moduli=(r["moduli"][0], r["moduli"][1]),
                far_modulus=r["moduli"][2],
                margin_floor=r["margins"][0],
                margin_flanks=r["margins"][1],
                margin_dominance=r["margins"][2],
            )
            for r in doc["frontier"]
        ]
        omega = [
            (Fraction(pq[0], pq[1]), complex(v[0], v[1])) for pq, v in doc["omega"]
        ]
        sinks = [
            tuple(Fraction(pq[0], pq[1]) for pq in s) for s in doc["sinks"]
        ]
        return cls(
            triple=triple,
            params=params,
            status=doc["status"],
            edges=edges,
            frontier=frontier,
            omega=omega,
            sinks=sinks,
            nodes=doc["nodes"],
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_json_dict(json.loads(text))


@dataclass
class BqOutcome:
    """Result of ``decide_bq``.

    ``status`` is one of certified / fails / inconclusive / reducible;
    ``witness`` and ``witness_value`` are set for fails (``reason`` tells a
    plain interval witness from a degenerate ray); ``certificate`` records
    the exploration for every status, but is only validated when certified.
    """

    status: str
    witness: Optional[Fraction] = None
    witness_value: Optional[complex] = None
    reason: Optional[str] = None
    certificate: Optional[Certificate] = None
    stats: dict = field(default_factory=dict)

    @property
    def is_certified(self) -> bool:
        return self.status == "certified"


# ---------------------------------------------------------------------------
# the search
# ---------------------------------------------------------------------------


def _entry_scan(
    x: complex, y: complex, z: complex, tau: float
) -> tuple[Optional[int], bool]:
    """First base witness (index into the region order 0/1, 1/0, 1/1) and
    whether that witness sits on the ±2 boundary.

    Only the first witness counts.  A boundary first witness (trace within
    tau of ±2) defeats the reducibility verdict — a parabolic generator
    violates the conditions on its own, even on the reducible locus — while
    an interior first witness defers to it, so a triple whose earliest base
    defect is an interior trace still reports reducible when it is.
    """
    for idx, v in enumerate((x, y, z)):
        if abs(v.imag) <= tau and abs(v.real) <= 2.0 + tau:
            return idx, abs(abs(v.real) - 2.0) <= tau
    return None, False


def decide_bq(t: MarkoffTriple, params: Optional[BqParams] = None) -> BqOutcome:
    """Breadth-first certified search for the bounded-trace conditions.

    Entry order: if the first base witness (region order 0/1, 1/0, 1/1)
    touches ±2 the triple fails immediately; otherwise |μ−4| ≤ τ is
    reducible; otherwise any base witness fails; otherwise the tree is
    explored outward from the base vertex,
    checking each newly valued region, pruning provably-large wakes, until
    the queue drains (certified) or the node budget runs out (inconclusive).
    """
    params = params or BqParams()
    tau = params.tau
    floor_m = params.effective_floor()
    two_margin = 2.0 + params.margin
    budget = params.budget
    x, y, z = t.x, t.y, t.z
    mu_val = mu(t)

    base_fracs = (Fraction(0, 1), Fraction(1, 0), Fraction(1, 1))
    base_vals = (x, y, z)

    def outcome_fails(f: Fraction, v: complex, reason: str, cert: Optional[Certificate], nodes: int) -> BqOutcome:
        return BqOutcome(
            status="fails",
            witness=f,
            witness_value=v,
            reason=reason,
            certificate=cert,
            stats={"nodes": nodes},
        )

    # --- entry checks on the base vertex -----------------------------------
    w_idx, boundary = _entry_scan(x, y, z, tau)
    if w_idx is not None and boundary:
        return outcome_fails(base_fracs[w_idx], base_vals[w_idx], "witness", None, 3)
    dmu = mu_val - 4.0
    if dmu.real * dmu.real + dmu.imag * dmu.imag <= tau * tau:
        return BqOutcome(status="reducible", stats={"nodes": 3})
    if w_idx is not None:
        return outcome_fails(base_fracs[w_idx], base_vals[w_idx], "witness", None, 3)
    for idx, v in enumerate(base_vals):
        d = v * v - mu_val
        if d.real * d.real + d.imag * d.imag <= tau * tau:
            return outcome_fails(base_fracs[idx], v, "degenerate-ray", None, 3)

    # --- exploration --------------------------------------------------------
    nodes = 3
    values: dict[Fraction, Optional[complex]] = {
        base_fracs[0]: x,
        base_fracs[1]: y,
        base_fracs[2]: z,
    }
    omega: list[tuple[Fraction, complex]] = [
        (f, v) for f, v in zip(base_fracs, base_vals) if _modulus(v) <= floor_m
    ]
    edges: list[EdgeFrame] = []
    frontier: list[FrontierRecord] = []
    fail: Optional[tuple[Fraction, complex, str]] = None

    def make_child_value(
        a_val: Optional[complex],
        a_mod: float,
        g_val: Optional[complex],
        g_mod: float,
        b_val: Optional[complex],
        b_mod: float,
    ) -> tuple[Optional[complex], float]:
        """Value at the new region across (flank a, far g), old flank b."""
        if a_mod * g_mod + b_mod > LARGE_THRESHOLD:
            return None, math.inf
        v = a_val * g_val - b_val  # type: ignore[operator]
        return v, _modulus(v)

    def register(f_pair: tuple[int, int], v: Optional[complex], m: float) -> None:
        """Record a newly valued region and run the per-value checks."""
        nonlocal nodes, fail
        nodes += 1
        frac = Fraction(*f_pair)
        values.setdefault(frac, v)
        if v is None:
            return
        if fail is None:
            if abs(v.imag) <= tau and abs(v.real) <= 2.0 + tau:
                fail = (frac, v, "witness")
                return
            d = v * v - mu_val
            if d.real * d.real + d.imag * d.imag <= tau * tau:
                fail = (frac, v, "degenerate-ray")
                return
        if m <= floor_m:
            omega.append((frac, v))

    mods = tuple(_modulus(v) for v in base_vals)
    queue: deque[EdgeFrame] = deque()

    def seed(u, uv, um, v_, vv, vm, near, nearv, nearm, far):
        fv, fm = make_child_value(uv, um, vv, vm, nearv, nearm)
        register(far, fv, fm)
        queue.append(
            EdgeFrame(
                u=u, v=v_, near=near, far=far,
                u_val=uv, v_val=vv, near_val=nearv, far_val=fv,
                u_mod=um, v_mod=vm, near_mod=nearm, far_mod=fm,
            )
        )

    seed((0, 1), x, mods[0], (-1, 0), y, mods[1], (1, 1), z, mods[2], (-1, 1))
    seed((0, 1), x, mods[0], (1, 1), z, mods[2], (1, 0), y, mods[1], (1, 2))
    seed((1, 0), y, mods[1], (1, 1), z, mods[2], (0, 1), x, mods[0], (2, 1))

    status = "inconclusive"
    while queue:
        if fail is not None:
            status = "fails"
            break
        if nodes >= budget:
            status = "inconclusive"
            break
        fr = queue.popleft()
        small = min(fr.u_mod, fr.v_mod, fr.far_mod)
        flank_min = min(fr.u_mod, fr.v_mod)
        flank_max = max(fr.u_mod, fr.v_mod)
        if (
            small >= floor_m
            and flank_min >= two_margin
            and fr.far_mod >= flank_max
        ):
            pruned = EdgeFrame(
                u=fr.u, v=fr.v, near=fr.near, far=fr.far,
                u_val=fr.u_val, v_val=fr.v_val,
                near_val=fr.near_val, far_val=fr.far_val,
                u_mod=fr.u_mod, v_mod=fr.v_mod,
                near_mod=fr.near_mod, far_mod=fr.far_mod,
                pruned=True,
            )
            frontier.append(
                FrontierRecord(
                    edge_index=len(edges),
                    flank_moduli=(fr.u_mod, fr.v_mod),
                    far_modulus=fr.far_mod,
                    margin_floor=small - floor_m,
                    margin_flanks=flank_min - two_margin,
                    margin_dominance=fr.far_mod - flank_max,
                )
            )
            edges.append(pruned)
            continue
        edges.append(fr)
        # child across (u, far), displacing flank v
        c1 = (fr.u[0] + fr.far[0], fr.u[1] + fr.far[1])
        v1, m1 = make_child_value(
            fr.u_val, fr.u_mod, fr.far_val, fr.far_mod, fr.v_val, fr.v_mod
        )
        register(c1, v1, m1)
        queue.append(
            EdgeFrame(
                u=fr.u, v=fr.far, near=fr.v, far=c1,
                u_val=fr.u_val, v_val=fr.far_val, near_val=fr.v_val, far_val=v1,
                u_mod=fr.u_mod, v_mod=fr.far_mod, near_mod=fr.v_mod, far_mod=m1,
            )
        )
        # child across (v, far), displacing flank u
        c2 = (fr.v[0] + fr.far[0], fr.v[1] + fr.far[1])
        v2, m2 = make_child_value(
            fr.v_val, fr.v_mod, fr.far_val, fr.far_mod, fr.u_val, fr.u_mod
        )
        register(c2, v2, m2)
        queue.append(
            EdgeFrame(
                u=fr.v, v=fr.far, near=fr.u, far=c2,
                u_val=fr.v_val, v_val=fr.far_val,
                near_val=fr.u_val, far_val=v2,
                u_mod=fr.v_mod, v_mod=fr.far_mod, near_mod=fr.u_mod, far_mod=m2,
            )
        )
    else:
        status = "fails" if fail is not None else "certified"

    cert = Certificate(
        triple=t,
        params=params,
        status=status,
        edges=edges,
        frontier=frontier,
        omega=sorted(omega, key=lambda fv: fv[0].key()),
        sinks=_find_sinks(edges),
        nodes=nodes,
    )
    if fail is not None:
        f, v, reason = fail
        return outcome_fails(f, v, reason, cert, nodes)
    stats = {
        "nodes": nodes,
        "explored_edges": len(edges),
        "frontier_edges": len(frontier),
        "queue_left": len(queue),
    }
    return BqOutcome(status=status, certificate=cert, stats=stats)


# ---------------------------------------------------------------------------
# arrows, sinks, cores
# ---------------------------------------------------------------------------


def _arrow_inward(e: EdgeFrame) -> Optional[bool]:
    """Direction of the trace arrow on an explored edge.

    True: points toward the base (from the far end-region to the near one,
    i.e. |far| > |near|); False: outward; None: tie (moduli equal), which is
    broken lexicographically for orientation-dependent bookkeeping but kept
    as a tie for core membership.
    """
    if e.far_mod > e.near_mod:
        return True
    if e.far_mod < e.near_mod:
        return False
    return None


def _arrow_head_vertex(e: EdgeFrame) -> frozenset[Fraction]:
    """Vertex the arrow points at; lexicographic tiebreak on end fractions."""
    inward = _arrow_inward(e)
    if inward is None:
        inward = Fraction(*e.near).key() < Fraction(*e.far).key()
    return e.near_vertex() if inward else e.far_vertex()


def _find_sinks(
    edges: list[EdgeFrame],
) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Vertices whose three incident edges are all explored and all incoming."""
    incident: dict[frozenset[Fraction], list[EdgeFrame]] = {}
    for e in edges:
        incident.setdefault(e.near_vertex(), []).append(e)
        incident.setdefault(e.far_vertex(), []).append(e)
    sinks = []
    for vert, inc in incident.items():
        if len(inc) == 3 and all(_arrow_head_vertex(e) == vert for e in inc):
            sinks.append(tuple(sorted(vert, key=Fraction.key)))
    sinks.sort(key=lambda s: tuple(g.key() for g in s))
    return sinks


_BASE_EDGE_KEY = ((0, 1), (1, 0))


def certified_core(cert: Certificate) -> tuple[list[EdgeFrame], set[Fraction]]:
    """Core of a certificate: the base edge plus every explored edge that is
    not decisively oriented inward, with the regions touching those edges."""
    core_edges = []
    for e in cert.edges:
        if e.key() == _BASE_EDGE_KEY or _arrow_inward(e) is not True:
            core_edges.append(e)
    regions: set[Fraction] = set()
    for e in core_edges:
        regions.update(
            (Fraction(*e.u), Fraction(*e.v), Fraction(*e.near), Fraction(*e.far))
        )
    if not core_edges:
        regions.update(
            (Fraction(0, 1), Fraction(1, 0), Fraction(1, 1), Fraction(-1, 1))
        )
    return core_edges, regions


# ---------------------------------------------------------------------------
# certificate validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    checks: list[tuple[str, bool, str]]
    first_violation: Optional[tuple[str, str]] = None

    def __str__(self) -> str:
        lines = [
            f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
            for name, ok, detail in self.checks
        ]
        verdict = "valid" if self.ok else f"INVALID ({self.first_violation})"
        return "\n".join(lines + [f"certificate {verdict}"])


def validate_certificate(cert: Certificate, t: MarkoffTriple) -> ValidationReport:
    """Independently re-check a certified search.

    Re-derives every region value by fresh flips, re-checks the vertex and
    edge relations, the subtree structure and closure, every frontier prune
    record, the Ω(M) list, the inward orientation of non-core edges with
    connectivity of the core, and the half-plane inequality
    Re(ẑ/(û·v̂)) ≥ 1/2 − τ on decisively oriented edges.  Reports the first
    violated condition with its edge.
    """
    checks: list[tuple[str, bool, str]] = []
    first: Optional[tuple[str, str]] = None

    def record(name: str, ok: bool, detail: str) -> bool:
        nonlocal first
        checks.append((name, ok, detail))
        if not ok and first is None:
            first = (name, detail)
        return ok

    params = cert.params
    tau = params.tau
    ok_params = (
        params.sane()
        and params.effective_floor() >= 2.0 + params.margin
        and cert.status in _STATUS_NAMES
    )
    record("params", ok_params, f"tau={params.tau:g} margin={params.margin:g}")

    vm = ValueMap(t)

    def recomputed_matches(pair: tuple[int, int], stored: Optional[complex], stored_mod: float) -> bool:
        frac = Fraction(*pair)
        try:
            fresh = vm.get(frac)
        except CertifiedLarge:
            return stored is None or stored_mod > LARGE_THRESHOLD / 4
        if stored is None:
            return _modulus(fresh) > LARGE_THRESHOLD / 4
        return abs(fresh - stored) <= 1e-9 * (1.0 + abs(fresh))

    mu_val = mu(t)
    relation_ok = True
    relation_detail = "all values re-derived"
    for i, e in enumerate(cert.edges):
        for pair, val, mod_ in (
            (e.u, e.u_val, e.u_mod),
            (e.v, e.v_val, e.v_mod),
            (e.near, e.near_val, e.near_mod),
            (e.far, e.far_val, e.far_mod),
        ):
            if not recomputed_matches(pair, val, mod_):
                relation_ok = False
                relation_detail = f"edge {i}: stored value at {Fraction(*pair)} differs from recomputation"
                break
        if not relation_ok:
            break
        if None not in (e.u_val, e.v_val, e.near_val, e.far_val):
            scale = 1.0 + e.u_mod * e.v_mod + abs(mu_val)
            res_edge = abs(e.u_val * e.v_val - e.near_val - e.far_val)
            s = e.u_val * e.u_val + e.v_val * e.v_val + e.far_val * e.far_val
            res_vertex = abs(s - e.u_val * e.v_val * e.far_val - mu_val)
            vscale = 1.0 + abs(s) + abs(e.u_val * e.v_val * e.far_val) + abs(mu_val)
            if res_edge > 1e-9 * scale:
                relation_ok = False
                relation_detail = f"edge {i}: edge relation residual {res_edge:g}"
                break
            if res_vertex > 1e-9 * vscale:
                relation_ok = False
                relation_detail = f"edge {i}: vertex relation residual {res_vertex:g}"
                break
    record("relation", relation_ok, relation_detail)

    # structure: connected subtree containing the base edge
    verts: dict[frozenset[Fraction], int] = {}
    parent: list[int] = []

    def vid(vertex: frozenset[Fraction]) -> int:
        if vertex not in verts:
            verts[vertex] = len(parent)
            parent.append(len(parent))
        return verts[vertex]

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edge_keys = set()
    structure_ok = len(cert.edges) > 0
    structure_detail = f"{len(cert.edges)} edges"
    for e in cert.edges:
        k = e.key()
        if k in edge_keys:
            structure_ok = False
            structure_detail = f"duplicate edge {k}"
            break
        edge_keys.add(k)
        a, b = vid(e.near_vertex()), vid(e.far_vertex())
        ra, rb = find(a), find(b)
        if ra == rb:
            structure_ok = False
            structure_detail = f"cycle at edge {k}"
            break
        parent[ra] = rb
    if structure_ok:
        if _BASE_EDGE_KEY not in edge_keys:
            structure_ok = False
            structure_detail = "base edge missing"
        else:
            roots = {find(i) for i in range(len(parent))}
            if len(roots) != 1:
                structure_ok = False
                structure_detail = f"{len(roots)} components"
    record("structure", structure_ok, structure_detail)

    # closure: expanded (non-pruned) edges must have both children explored
    closure_ok = True
    closure_detail = "every expanded edge has both children"
    if cert.status == "certified":
        for i, e in enumerate(cert.edges):
            if e.pruned:
                continue
            child1 = tuple(sorted((_norm_pair(e.u), _norm_pair(e.far))))
            child2 = tuple(sorted((_norm_pair(e.v), _norm_pair(e.far))))
            if child1 not in edge_keys or child2 not in edge_keys:
                closure_ok = False
                closure_detail = f"edge {i} expanded but children missing"
                break
    record("closure", closure_ok, closure_detail)

    # frontier prune records
    floor_m = params.effective_floor()
    two_margin = 2.0 + params.margin
    prune_ok = True
    prune_detail = f"{len(cert.frontier)} frontier records"
    pruned_indices = {i for i, e in enumerate(cert.edges) if e.pruned}
    if {r.edge_index for r in cert.frontier} != pruned_indices:
        prune_ok = False
        prune_detail = "frontier records do not match pruned edges"
    for r in cert.frontier:
        if not prune_ok:
            break
        e = cert.edges[r.edge_index]
        a, b, g = e.u_mod, e.v_mod, e.far_mod
        stored = (r.flank_moduli[0], r.flank_moduli[1], r.far_modulus)
        if any(
            not (math.isinf(sv) and math.isinf(cv)) and abs(sv - cv) > 1e-9 * (1 + abs(cv))
            for sv, cv in zip(stored, (a, b, g))
        ):
            prune_ok = False
            prune_detail = f"edge {r.edge_index}: stored moduli differ"
            break
        if not (min(a, b, g) >= floor_m and min(a, b) >= two_margin and g >= max(a, b)):
            prune_ok = False
            prune_detail = f"edge {r.edge_index}: prune rule violated"
            break
    record("prune", prune_ok, prune_detail)

    # omega list
    omega_ok = True
    omega_detail = f"{len(cert.omega)} regions with |value| <= {floor_m:g}"
    expect: dict[Fraction, complex] = {}
    region_values: dict[Fraction, tuple[Optional[complex], float]] = {}
    for e in cert.edges:
        for pair, val, mod_ in (
            (e.u, e.u_val, e.u_mod),
            (e.v, e.v_val, e.v_mod),
            (e.near, e.near_val, e.near_mod),
            (e.far, e.far_val, e.far_mod),
        ):
            region_values.setdefault(Fraction(*pair), (val, mod_))
    for frac, (val, mod_) in region_values.items():
        if val is not None and mod_ <= floor_m:
            expect[frac] = val
    got = {f: v for f, v in cert.omega}
    if set(got) != set(expect):
        omega_ok = False
        omega_detail = "omega set differs from re-derivation"
    record("omega", omega_ok, omega_detail)

    # orientation: non-core edges inward; core connected
    core_edges, _ = certified_core(cert)
    orient_ok = True
    orient_detail = f"core has {len(core_edges)} edges"
    core_verts: list[frozenset[Fraction]] = []
    for e in core_edges:
        core_verts.append(e.near_vertex())
        core_verts.append(e.far_vertex())
    if core_edges:
        index = {v: i for i, v in enumerate(set(core_verts))}
        par2 = list(range(len(index)))

        def find2(i: int) -> int:
            while par2[i] != i:
                par2[i] = par2[par2[i]]
                i = par2[i]
            return i

        for e in core_edges:
            a, b = index[e.near_vertex()], index[e.far_vertex()]
            par2[find2(a)] = find2(b)
        if len({find2(i) for i in range(len(index))}) != 1:
            orient_ok = False
            orient_detail = "core is disconnected"
    record("orientation", orient_ok, orient_detail)

    # half-plane inequality on decisively oriented edges
    cx_ok = True
    cx_detail = "tail/product ratios in the closed half plane"
    for i, e in enumerate(cert.edges):
        inward = _arrow_inward(e)
        if inward is None or None in (e.u_val, e.v_val, e.near_val, e.far_val):
            continue
        tail = e.far_val if inward else e.near_val
        prod = e.u_val * e.v_val
        if prod == 0:
            continue
        if (tail / prod).real < 0.5 - tau - 1e-12:
            cx_ok = False
            cx_detail = f"edge {i}: Re(tail/(u*v)) = {(tail / prod).real:.6f}"
            break
    record("cx", cx_ok, cx_detail)

    ok = all(c[1] for c in checks)
    return ValidationReport(ok=ok, checks=checks, first_violation=first)


# ---------------------------------------------------------------------------
# level sets, growth, arrows
# ---------------------------------------------------------------------------


def enumerate_omega(
    t: MarkoffTriple, m: float, params: Optional[BqParams] = None
) -> list[tuple[Fraction, complex]]:
    """All regions with |value| ≤ m, from a certified search with floor ≥ m.

    Complete because pruned wakes contain only moduli above the floor.
    Raises NotCertified when the search does not certify.
    """
    if m < 2.0:
        raise ValueError("level must be >= 2")
    params = params or BqParams()
    run = BqParams(
        tau=params.tau,
        margin=params.margin,
        floor=max(m, params.effective_floor()),
        budget=params.budget,
    )
    out = decide_bq(t, run)
    if not out.is_certified or out.certificate is None:
        raise NotCertified(f"decide_bq returned {out.status}")
    hits = [(f, v) for f, v in out.certificate.omega if _modulus(v) <= m]
    hits.sort(key=lambda fv: fv[0].key())
    return hits


@dataclass
class GrowthReport:
    """Per-region growth data with fitted slopes and Fibonacci-floor fit."""

    depth: int
    records: list[tuple[Fraction, int, float]]
    c_minus: float
    c_plus: float
    excluded: list[Fraction]
    exceptions: list[Fraction]
    fibonacci_c: Optional[float]
    wakes_sampled: int
    certified: bool
    note: str = ""


def fibonacci_growth_scan(
    t: MarkoffTriple, depth: int, params: Optional[BqParams] = None
) -> GrowthReport:
    """log⁺|value| per word length for all regions to ``depth``; slopes are
    fitted outside the small-trace set and its neighbours; on certified
    triples the additive Fibonacci floor is fitted over pruned wakes."""
    vm = ValueMap(t)
    records: list[tuple[Fraction, int, float]] = []
    small: set[Fraction] = set()
    fractions: list[Fraction] = []
    for q in range(0, depth + 1):
        if q == 0:
            fractions.append(Fraction(1, 0))
            continue
        for p in range(-(depth - q), depth - q + 1):
            if (p != 0 or q == 1) and math.gcd(abs(p), q) == 1:
                fractions.append(Fraction(p, q))
    fractions.sort(key=Fraction.key)
    for f in fractions:
        try:
            v = vm.get(f)
            m = _modulus(v)
            logp = math.log(m) if m > 1.0 else 0.0
        except CertifiedLarge:
            m = math.inf
            logp = math.log(LARGE_THRESHOLD)
        records.append((f, f.level, logp))
        if m <= 2.0:
            small.add(f)

    excluded: set[Fraction] = set(small)
    for f in small:
        for g, _, _ in records:
            if is_neighbour(f, g):
                excluded.add(g)
    exceptions = [f for f, _, logp in records if logp <= 0.0 and f not in excluded]
    slopes = [
        logp / lvl
        for f, lvl, logp in records
        if f not in excluded and logp > 0.0
    ]
    c_minus = min(slopes) if slopes else math.nan
    c_plus = max(slopes) if slopes else math.nan

    out = decide_bq(t, params)
    fib_c: Optional[float] = None
    wakes = 0
    note = ""
    if out.is_certified and out.certificate is not None:
        ratios: list[float] = []
        for rec in out.certificate.frontier[:64]:
            e = out.certificate.edges[rec.edge_index]
            if None in (e.u_val, e.v_val, e.far_val):
                continue
            wakes += 1
            # Wake triangles (a, b; g) where g is the newest region.  The
            # additive floor F is 1 on the flanks of the pruned edge and
            # F(new) = F(a) + F(g) across each onward edge.
            if e.far_mod > 1.0 and math.isfinite(e.far_mod):
                ratios.append(math.log(e.far_mod) / 2)
            layer = [(e.u_val, 1, e.v_val, 1, e.far_val, 2)]
            for _ in range(6):
                nxt = []
                for a_val, fa, b_val, fb, g_val, fg in layer:
                    for p_val, fp, o_val in (
                        (a_val, fa, b_val),
                        (b_val, fb, a_val),
                    ):
                        t_val = p_val * g_val - o_val
                        t_mod = _modulus(t_val)
                        t_f = fp + fg
                        if t_mod > 1.0 and math.isfinite(t_mod):
                            ratios.append(math.log(t_mod) / t_f)
                            nxt.append((p_val, fp, g_val, fg, t_val, t_f))
                layer = nxt
        fib_c = min(ratios) if ratios else None
    else:
        note = f"not certified: decide_bq returned {out.status}"
        if out.witness is not None:
            note += f" (witness {out.witness})"

    return GrowthReport(
        depth=depth,
        records=records,
        c_minus=c_minus,
        c_plus=c_plus,
        excluded=sorted(excluded, key=Fraction.key),
        exceptions=sorted(exceptions, key=Fraction.key),
        fibonacci_c=fib_c,
        wakes_sampled=wakes,
        certified=out.is_certified,
        note=note,
    )


@dataclass
class ArrowReport:
    depth: int
    n0: int
    edges_checked: int
    disagreements: list[tuple[Fraction, Fraction, int]]


def arrow_agreement_scan(
    t: MarkoffTriple, depth: int, params: Optional[BqParams] = None
) -> ArrowReport:
    """Compare trace arrows with word-length arrows on positive-wedge edges.

    For the edge flanked by neighbours (u, v) the two end regions are the
    mediant (word length |u|+|v|) and the co-mediant; the word-length arrow
    points from the mediant to the co-mediant.  Returns the smallest bound
    N₀ such that every decisively trace-oriented edge of depth > N₀ agrees,
    plus the disagreeing edges.  Requires a certified triple.
    """
    out = decide_bq(t, params)
    if not out.is_certified:
        raise NotCertified(f"decide_bq returned {out.status}")
    vm = ValueMap(t)
    disagreements: list[tuple[Fraction, Fraction, int]] = []
    checked = 0
    stack = [(Fraction(0, 1), Fraction(1, 0))]
    while stack:
        u, v = stack.pop()
        med = farey_sum(u, v)
        if med.level > depth:
            continue
        if not (u == Fraction(0, 1) and v == Fraction(1, 0)):
            # co-mediant: difference of the flank pairs (the other end region)
            dp, dq = v.p - u.p, v.q - u.q
            co = Fraction(dp, dq)
            checked += 1
            m_med = _modulus(vm.get(med))
            m_co = _modulus(vm.get(co))
            if m_med != m_co and m_med < m_co:
                disagreements.append((u, v, med.level))
        stack.append((u, med))
        stack.append((med, v))
    n0 = max((lvl for _, _, lvl in disagreements), default=0)
    disagreements.sort(key=lambda r: (r[2], r[0].key(), r[1].key()))
    return ArrowReport(
        depth=depth, n0=n0, edges_checked=checked, disagreements=disagreements
    )
