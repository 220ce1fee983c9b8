"""Pure-Python status kernel for grid scans.

Mirrors the decision dynamics of :func:`bqtool.markoff.decide_bq` — the
same floating-point operations in the same order — but carries only the
nine doubles per frame needed for a verdict, no combinatorial bookkeeping.
The compiled twin in ``_bqcore`` reproduces these operations instruction
for instruction; both backends return bitwise-identical verdicts.
"""

from __future__ import annotations

import math
from collections import deque

LARGE = 1e300

CERTIFIED = 0
FAILS = 1
INCONCLUSIVE = 2
REDUCIBLE = 3


def _mod(v: complex) -> float:
    # abs(complex) calls the platform hypot, as does the compiled kernel.
    try:
        return abs(v)
    except OverflowError:
        return math.inf


def run_status(
    x_re: float,
    x_im: float,
    y_re: float,
    y_im: float,
    z_re: float,
    z_im: float,
    tau: float = 1e-9,
    margin: float = 1e-6,
    floor: float = 0.0,
    budget: int = 100_000,
) -> tuple[int, int, int]:
    """Verdict for one triple: (status, nodes, count of |value| <= 2).

    Status codes: 0 certified, 1 fails, 2 inconclusive, 3 reducible.
    """
    x = complex(x_re, x_im)
    y = complex(y_re, y_im)
    z = complex(z_re, z_im)
    two_margin = 2.0 + margin
    floor_m = floor
    if two_margin > floor_m:
        floor_m = two_margin
    mu = x * x + y * y + z * z - x * y * z

    xm = _mod(x)
    ym = _mod(y)
    zm = _mod(z)
    omega2 = 0
    for m in (xm, ym, zm):
        if m <= 2.0:
            omega2 += 1

    # entry checks on the base vertex: only the first witness counts, and
    # only a boundary (±2) first witness may pre-empt the reducibility test
    witness = -1
    boundary = False
    for idx, v in enumerate((x, y, z)):
        if abs(v.imag) <= tau and abs(v.real) <= 2.0 + tau:
            witness = idx
            boundary = abs(abs(v.real) - 2.0) <= tau
            break
    if witness >= 0 and boundary:
        return FAILS, 3, omega2
    dre = mu.real - 4.0
    dim = mu.imag
    if dre * dre + dim * dim <= tau * tau:
        return REDUCIBLE, 3, omega2
    if witness >= 0:
        return FAILS, 3, omega2
    for v in (x, y, z):
        d = v * v - mu
        if d.real * d.real + d.imag * d.imag <= tau * tau:
            return FAILS, 3, omega2

    # breadth-first exploration
    nodes = 3
    fail = False

    def register(v: complex | None, m: float) -> None:
        nonlocal nodes, omega2, fail
        nodes += 1
        if m <= 2.0:
            omega2 += 1
        if v is None or fail:
            return
        if abs(v.imag) <= tau and abs(v.real) <= 2.0 + tau:
            fail = True
            return
        d = v * v - mu
        if d.real * d.real + d.imag * d.imag <= tau * tau:
            fail = True

    def child(
        a: complex, am: float, g: complex, gm: float, b: complex, bm: float
    ) -> tuple[complex | None, float]:
        if am * gm + bm > LARGE:
            return None, math.inf
        v = a * g - b
        return v, _mod(v)

    queue: deque[tuple[complex, complex, complex, float, float, float]] = deque()

    def seed(uv, um, vv, vm, nearv, nearm):
        fv, fm = child(uv, um, vv, vm, nearv, nearm)
        register(fv, fm)
        queue.append((uv, vv, 0j if fv is None else fv, um, vm, fm))

    seed(x, xm, y, ym, z, zm)
    seed(x, xm, z, zm, y, ym)
    seed(y, ym, z, zm, x, xm)

    while queue:
        if fail:
            return FAILS, nodes, omega2
        if nodes >= budget:
            return INCONCLUSIVE, nodes, omega2
        u, v, g, um, vm, gm = queue.popleft()
        small = um
        if vm < small:
            small = vm
        if gm < small:
            small = gm
        flank_min = vm if vm < um else um
        flank_max = vm if vm > um else um
        if small >= floor_m and flank_min >= two_margin and gm >= flank_max:
            continue
        c1, m1 = child(u, um, g, gm, v, vm)
        register(c1, m1)
        queue.append((u, g, 0j if c1 is None else c1, um, gm, m1))
        c2, m2 = child(v, vm, g, gm, u, um)
        register(c2, m2)
        queue.append((v, g, 0j if c2 is None else c2, vm, gm, m2))
    if fail:
        return FAILS, nodes, omega2
    return CERTIFIED, nodes, omega2
