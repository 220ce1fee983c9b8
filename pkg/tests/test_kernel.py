"""Status kernels: the compiled and pure backends must agree bitwise."""

from __future__ import annotations

import numpy as np
import pytest

from bqtool import kernel
from bqtool._bqpure import run_status as pure_status
from bqtool.markoff import BqParams, MarkoffTriple, decide_bq

STATUS_OF_NAME = {v: k for k, v in kernel.STATUS_NAMES.items()}


class TestStatusSemantics:
    @pytest.mark.parametrize(
        "triple,expected",
        [
            ((3, 3, 3), kernel.CERTIFIED),
            ((4, 4, 4), kernel.CERTIFIED),
            ((2, 5, 5), kernel.FAILS),
            ((1, 1, 1), kernel.FAILS),
            ((0, 0, 2), kernel.REDUCIBLE),
            ((2, 2, 2), kernel.FAILS),
            ((0, 0, 0), kernel.FAILS),
        ],
    )
    def test_stipulated_cases(self, triple, expected):
        x, y, z = (complex(v) for v in triple)
        status, nodes, omega2 = kernel.run_status(x, y, z)
        assert status == expected
        assert nodes >= 3

    def test_omega2_counts_base_values(self):
        status, _nodes, omega2 = pure_status(1.0, 0.0, 1.0, 0.0, 1.0, 0.0)
        assert status == kernel.FAILS
        assert omega2 == 3

    def test_budget_exhaustion(self):
        status, nodes, _ = pure_status(2.1, 0.0, 2.1, 0.0, 2.1, 0.0, budget=4)
        assert status == kernel.INCONCLUSIVE
        assert nodes >= 4

    def test_certified_node_count_matches_rich_engine(self):
        out = decide_bq(MarkoffTriple(3 + 0j, 3 + 0j, 3 + 0j))
        status, nodes, omega2 = kernel.run_status(3 + 0j, 3 + 0j, 3 + 0j)
        assert status == kernel.CERTIFIED
        assert nodes == out.certificate.nodes
        assert omega2 == 0


class TestBackendParity:
    def test_backend_identity(self):
        assert kernel.BACKEND in {"compiled", "pure"}
        assert set(kernel.STATUS_NAMES) == {
            kernel.CERTIFIED,
            kernel.FAILS,
            kernel.INCONCLUSIVE,
            kernel.REDUCIBLE,
        }

    @pytest.mark.skipif(
        kernel.BACKEND != "compiled", reason="compiled backend unavailable"
    )
    def test_bitwise_parity_on_diagonal_grid(self):
        rng = np.random.default_rng(7)
        res = rng.uniform(0.0, 5.0, size=300)
        ims = rng.uniform(-2.0, 2.0, size=300)
        for re, im in zip(res, ims):
            z = complex(re, im)
            got = kernel._impl.run_status(
                re, im, re, im, re, im, 1e-9, 1e-6, 0.0, 20_000
            )
            want = pure_status(re, im, re, im, re, im, 1e-9, 1e-6, 0.0, 20_000)
            assert got == want, z

    @pytest.mark.skipif(
        kernel.BACKEND != "compiled", reason="compiled backend unavailable"
    )
    def test_bitwise_parity_fix_xy(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            x = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
            y = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
            z = complex(rng.uniform(-4, 4), rng.uniform(-2, 2))
            got = kernel._impl.run_status(
                x.real, x.imag, y.real, y.imag, z.real, z.imag, 1e-9, 1e-6, 0.0, 5000
            )
            want = pure_status(
                x.real, x.imag, y.real, y.imag, z.real, z.imag, 1e-9, 1e-6, 0.0, 5000
            )
            assert got == want, (x, y, z)

    def test_status_matches_rich_engine_across_samples(self):
        rng = np.random.default_rng(13)
        samples = [
            (
                complex(rng.uniform(-3.5, 3.5), rng.uniform(-1.5, 1.5)),
                complex(rng.uniform(-3.5, 3.5), rng.uniform(-1.5, 1.5)),
                complex(rng.uniform(-3.5, 3.5), rng.uniform(-1.5, 1.5)),
            )
            for _ in range(120)
        ]
        # real triples with interior witnesses and the reducible locus too
        samples += [
            (1.5 + 0j, 2.7 + 0j, 3.1 + 0j),
            (0.5 + 0j, 4 + 0j, 4 + 0j),
            (0j, 0j, 2 + 0j),
            (3 + 0j, 3 + 0j, 3 + 0j),
        ]
        names = {"certified": 0, "fails": 0, "inconclusive": 0, "reducible": 0}
        for x, y, z in samples:
            params = BqParams(budget=3000)
            rich = decide_bq(MarkoffTriple(x, y, z), params)
            status, nodes, _ = kernel.run_status(x, y, z, budget=3000)
            assert kernel.STATUS_NAMES[status] == rich.status, (x, y, z)
            names[rich.status] += 1
        assert names["certified"] > 0
        assert names["fails"] > 0
        assert names["reducible"] > 0
