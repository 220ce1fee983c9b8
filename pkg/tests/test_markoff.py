"""Trace maps, the certified search, certificates, growth and arrows."""

from __future__ import annotations

import dataclasses
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bqtool.errors import CertifiedLarge, NotCertified
from bqtool.farey import Fraction
from bqtool.markoff import (
    BqParams,
    Certificate,
    MarkoffTriple,
    ValueMap,
    arrow_agreement_scan,
    decide_bq,
    edge_flip,
    enumerate_omega,
    fibonacci_growth_scan,
    mu,
    trace_of_fraction,
    validate_certificate,
)

import oracles
from conftest import random_irreducible_triple

T333 = MarkoffTriple(3 + 0j, 3 + 0j, 3 + 0j)
T444 = MarkoffTriple(4 + 0j, 4 + 0j, 4 + 0j)

complex_boxes = st.complex_numbers(
    min_magnitude=0.0, max_magnitude=6.0, allow_nan=False, allow_infinity=False
)


# ---------------------------------------------------------------------------
# invariant and flips
# ---------------------------------------------------------------------------


class TestMuAndFlip:
    def test_mu_examples(self):
        assert mu(T333) == 0
        assert mu(MarkoffTriple(0j, 0j, 2 + 0j)) == 4
        assert mu(MarkoffTriple(2 + 0j, 2 + 0j, 2 + 0j)) == 4

    def test_flip_examples(self):
        assert edge_flip(3, 3, 3) == 6
        assert edge_flip(2, 3, 6) == 0  # z = xy
        # recurrence around a value-3 region starting from (3, 6)
        assert edge_flip(3, 6, 3) == 15
        assert edge_flip(3, 15, 6) == 39

    def test_flip_is_involution_exactly_on_integers(self):
        for x, y, z in [(3, 3, 3), (1, 2, 5), (-4, 7, 2), (0, 6, -3)]:
            assert edge_flip(x, y, edge_flip(x, y, z)) == z

    @given(complex_boxes, complex_boxes, complex_boxes)
    def test_flip_is_involution(self, x, y, z):
        back = edge_flip(x, y, edge_flip(x, y, z))
        scale = abs(x * y) + abs(z) + 1.0
        assert abs(back - z) <= 1e-12 * scale

    @given(complex_boxes, complex_boxes, complex_boxes)
    def test_flip_conserves_mu(self, x, y, z):
        before = mu(MarkoffTriple(x, y, z))
        after = mu(MarkoffTriple(x, y, edge_flip(x, y, z)))
        scale = 1.0 + abs(before)
        assert abs(after - before) / scale <= 1e-9


# ---------------------------------------------------------------------------
# the trace map
# ---------------------------------------------------------------------------


class TestValueMap:
    def test_frozen_values(self):
        vm = ValueMap(T333)
        assert trace_of_fraction(vm, Fraction(1, 1)) == 3
        assert trace_of_fraction(vm, Fraction(1, 2)) == 6
        assert trace_of_fraction(vm, Fraction(1, 3)) == 15
        assert trace_of_fraction(vm, Fraction(1, 4)) == 39
        assert trace_of_fraction(vm, Fraction(2, 3)) == 15
        assert trace_of_fraction(vm, Fraction(-1, 1)) == 6

    def test_agrees_with_matrix_oracle(self, rng):
        for _ in range(20):
            t = random_irreducible_triple(rng)
            vm = ValueMap(t)
            brute = oracles.brute_force_traces(t.x, t.y, t.z, 10)
            for (p, q), tr in brute.items():
                got = trace_of_fraction(vm, Fraction(p, q))
                assert abs(got - tr) <= 1e-8 * (1.0 + abs(tr)), (t, p, q)

    def test_vertex_relation_along_tree(self, rng):
        for _ in range(10):
            t = random_irreducible_triple(rng)
            vm = ValueMap(t)
            m = mu(t)
            # triangle (1/2, 1/3, 2/5): mutually adjacent regions
            a = trace_of_fraction(vm, Fraction(1, 2))
            b = trace_of_fraction(vm, Fraction(1, 3))
            c = trace_of_fraction(vm, Fraction(2, 5))
            res = a * a + b * b + c * c - a * b * c - m
            assert abs(res) <= 1e-9 * (1.0 + abs(m) + abs(a * b * c))

    def test_overflow_reports_certified_large(self):
        vm = ValueMap(MarkoffTriple(300 + 0j, 300 + 0j, 300 + 0j))
        with pytest.raises(CertifiedLarge):
            trace_of_fraction(vm, Fraction(1, 200))

    def test_memoization_is_stable(self):
        vm = ValueMap(T333)
        first = trace_of_fraction(vm, Fraction(5, 7))
        second = trace_of_fraction(vm, Fraction(5, 7))
        assert first == second


# ---------------------------------------------------------------------------
# the certified search
# ---------------------------------------------------------------------------


class TestDecideBq:
    def test_certified_cases(self):
        for t in (T333, T444):
            out = decide_bq(t)
            assert out.status == "certified"
            assert out.certificate is not None
            assert out.certificate.nodes <= 10**5

    def test_fails_at_base(self):
        out = decide_bq(MarkoffTriple(2 + 0j, 5 + 0j, 5 + 0j))
        assert out.status == "fails"
        assert out.witness == Fraction(0, 1)
        assert out.witness_value == 2

        out = decide_bq(MarkoffTriple(1 + 0j, 1 + 0j, 1 + 0j))
        assert out.status == "fails"
        assert out.witness == Fraction(0, 1)

    def test_reducible_wins_over_interior_witness(self):
        # the first base witness is interior (value 0), so reducibility is
        # reported even though a boundary trace appears later in the triple
        out = decide_bq(MarkoffTriple(0j, 0j, 2 + 0j))
        assert out.status == "reducible"

    def test_boundary_witness_beats_reducible(self):
        # also on the reducible locus, but the first witness touches 2
        out = decide_bq(MarkoffTriple(2 + 0j, 2 + 0j, 2 + 0j))
        assert out.status == "fails"
        assert out.witness == Fraction(0, 1)

    def test_so3_fails(self):
        out = decide_bq(MarkoffTriple(0j, 0j, 0j))
        assert out.status == "fails"

    def test_inconclusive_on_tiny_budget(self):
        out = decide_bq(
            MarkoffTriple(2.1 + 0j, 2.1 + 0j, 2.1 + 0j),
            BqParams(budget=4),
        )
        assert out.status == "inconclusive"

    def test_interior_witness_off_locus_fails(self):
        out = decide_bq(MarkoffTriple(0j, 5 + 0j, 5 + 0j))
        assert out.status == "fails"
        assert out.witness == Fraction(0, 1)

    def test_degenerate_ray_reported(self):
        # x^2 = mu at the base demands y^2 + z^2 = xyz; solved by z = lam*y
        # with lam^2 - x*lam + 1 = 0, keeping all three traces off the
        # real interval so no witness pre-empts the ray check
        x = 3j
        lam = 1j * (3.0 + math.sqrt(13.0)) / 2.0
        y = 1 + 1j
        t = MarkoffTriple(x, y, lam * y)
        assert abs(mu(t) - x * x) <= 1e-9
        out = decide_bq(t)
        assert out.status == "fails"
        assert out.reason == "degenerate-ray"

    @given(
        st.complex_numbers(min_magnitude=0.0, max_magnitude=4.0, allow_nan=False, allow_infinity=False),
        st.complex_numbers(min_magnitude=0.0, max_magnitude=4.0, allow_nan=False, allow_infinity=False),
        st.complex_numbers(min_magnitude=0.0, max_magnitude=4.0, allow_nan=False, allow_infinity=False),
    )
    def test_fails_witness_is_sound(self, x, y, z):
        out = decide_bq(MarkoffTriple(x, y, z), BqParams(budget=500))
        if out.status == "fails" and out.reason == "witness":
            v = out.witness_value
            assert abs(v.imag) <= 1e-9
            assert abs(v.real) <= 2.0 + 1e-9


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def _with(cert: Certificate, **kw) -> Certificate:
    fields = {
        "triple": cert.triple,
        "params": cert.params,
        "status": cert.status,
        "edges": list(cert.edges),
        "frontier": list(cert.frontier),
        "omega": list(cert.omega),
        "sinks": list(cert.sinks),
        "nodes": cert.nodes,
    }
    fields.update(kw)
    return Certificate(**fields)


class TestCertificate:
    def test_validates(self):
        for t in (T333, T444):
            cert = decide_bq(t).certificate
            report = validate_certificate(cert, t)
            assert report.ok, report.first_violation

    def test_json_round_trip_is_canonical(self):
        cert = decide_bq(T333).certificate
        text = cert.to_json()
        again = Certificate.from_json(text)
        assert again.to_json() == text
        assert validate_certificate(again, T333).ok

    def test_perturbed_frontier_detected(self):
        cert = decide_bq(T444).certificate
        rec = cert.frontier[0]
        bad = dataclasses.replace(rec, far_modulus=min(rec.flank_moduli) * 0.5)
        tampered = _with(cert, frontier=[bad] + list(cert.frontier[1:]))
        report = validate_certificate(tampered, T444)
        assert not report.ok
        assert report.first_violation[0] == "prune"

    def test_edited_value_detected(self):
        cert = decide_bq(T444).certificate
        edge = cert.edges[0]
        bad = dataclasses.replace(edge, far_val=edge.far_val + 0.5)
        tampered = _with(cert, edges=[bad] + list(cert.edges[1:]))
        report = validate_certificate(tampered, T444)
        assert not report.ok
        assert report.first_violation[0] == "relation"

    def test_dropped_edge_detected(self):
        cert = decide_bq(T444).certificate
        tampered = _with(cert, edges=list(cert.edges[1:]))
        report = validate_certificate(tampered, T444)
        assert not report.ok
        assert report.first_violation[0] == "structure"

    def test_wrong_triple_detected(self):
        cert = decide_bq(T444).certificate
        report = validate_certificate(cert, T333)
        assert not report.ok


# ---------------------------------------------------------------------------
# level sets
# ---------------------------------------------------------------------------


class TestOmega:
    def test_omega_2_empty(self):
        assert enumerate_omega(T333, 2.0) == []

    def test_omega_3_is_base_vertex(self):
        got = enumerate_omega(T333, 3.0)
        assert [(f.p, f.q) for f, _v in got] == [(0, 1), (1, 0), (1, 1)]
        assert all(v == 3 for _f, v in got)

    def test_matches_brute_force(self):
        brute2 = oracles.brute_force_small(3 + 0j, 3 + 0j, 3 + 0j, 2.0, 15)
        brute3 = oracles.brute_force_small(3 + 0j, 3 + 0j, 3 + 0j, 3.0 + 1e-12, 15)
        assert {(*pq,) for pq in brute2} == {
            (f.p, f.q) for f, _v in enumerate_omega(T333, 2.0)
        }
        assert {(*pq,) for pq in brute3} == {
            (f.p, f.q) for f, _v in enumerate_omega(T333, 3.0)
        }

    def test_not_certified_raises(self):
        with pytest.raises(NotCertified):
            enumerate_omega(MarkoffTriple(1.9j, 3 + 0j, 3 + 0j), 2.0, BqParams(budget=500))

    def test_connected_under_adjacency(self):
        from bqtool.farey import is_neighbour

        for t, levels in ((T333, (2.0, 3.0)), (T444, (2.0, 3.0, 4.0))):
            for m in levels:
                got = [f for f, _v in enumerate_omega(t, m)]
                if len(got) <= 1:
                    continue
                seen = {got[0]}
                grew = True
                while grew:
                    grew = False
                    for f in got:
                        if f in seen:
                            continue
                        if any(is_neighbour(f, g) for g in seen):
                            seen.add(f)
                            grew = True
                assert seen == set(got)


class TestPruneSelfConsistency:
    def test_expanded_wakes_keep_growing(self, rng):
        """Expanding pruned frontier edges five levels keeps all values
        growing geometrically with every arrow pointing inward."""
        checked = 0
        delta = 1e-6
        while checked < 100:
            t = random_irreducible_triple(rng, scale=4.0)
            out = decide_bq(t, BqParams(budget=4000))
            if not out.is_certified:
                continue
            cert = out.certificate
            for rec in cert.frontier:
                edge = cert.edges[rec.edge_index]
                if None in (edge.u_val, edge.v_val, edge.far_val):
                    continue
                layer = [(edge.u_val, edge.v_val, edge.far_val)]
                ok = True
                for _ in range(5):
                    nxt = []
                    for a, b, g in layer:
                        for flank, other in ((a, b), (b, a)):
                            child = flank * g - other
                            if abs(child) < (1.0 + delta) * abs(g):
                                ok = False
                            nxt.append((flank, g, child))
                    layer = nxt
                assert ok, (t, rec)
                checked += 1
                if checked >= 100:
                    break


# ---------------------------------------------------------------------------
# growth and arrows
# ---------------------------------------------------------------------------


class TestGrowth:
    def test_fuchsian_growth(self):
        rep = fibonacci_growth_scan(T333, 12)
        assert rep.certified
        assert rep.c_minus > 0
        assert rep.c_plus >= rep.c_minus
        assert rep.exceptions == []
        assert rep.fibonacci_c is not None and rep.fibonacci_c > 0
        assert rep.wakes_sampled > 0

    def test_flagged_when_not_certified(self):
        rep = fibonacci_growth_scan(MarkoffTriple(2 + 0j, 5 + 0j, 5 + 0j), 6)
        assert not rep.certified
        assert "not certified" in rep.note

    def test_records_cover_all_levels(self):
        rep = fibonacci_growth_scan(T333, 8)
        fractions = {f for f, _lvl, _lp in rep.records}
        assert Fraction(1, 0) in fractions
        assert Fraction(-1, 7) in fractions
        assert all(f.level <= 8 for f in fractions)


class TestArrows:
    def test_agreement_outside_small_ball(self):
        rep = arrow_agreement_scan(T333, 10)
        assert rep.n0 <= 10
        assert rep.edges_checked > 0
        assert all(lvl <= rep.n0 for _e, lvl in rep.disagreements) or not rep.disagreements

    def test_depth_zero_vacuous(self):
        rep = arrow_agreement_scan(T333, 0)
        assert rep.n0 == 0
        assert rep.edges_checked == 0

    def test_requires_certified(self):
        with pytest.raises(NotCertified):
            arrow_agreement_scan(MarkoffTriple(1 + 0j, 1 + 0j, 1 + 0j), 6)


class TestParams:
    def test_defaults(self):
        p = BqParams()
        assert p.tau == 1e-9
        assert p.margin == 1e-6
        assert p.budget == 100_000
        assert p.effective_floor() == 2.0 + 1e-6

    def test_floor_raises_effective(self):
        assert BqParams(floor=5.0).effective_floor() == 5.0
