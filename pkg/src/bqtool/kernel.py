"""Backend selection for the status kernel.

Imports the compiled extension when it was built, the pure-Python twin
otherwise.  Both expose ``run_status`` with identical semantics and
bitwise-identical results; ``BACKEND`` names the one in use.
"""

from __future__ import annotations

try:
    from . import _bqcore as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built — pure Python fallback
    from . import _bqpure as _impl

    BACKEND = "pure"

from . import _bqpure

CERTIFIED = 0
FAILS = 1
INCONCLUSIVE = 2
REDUCIBLE = 3

STATUS_NAMES = {
    CERTIFIED: "certified",
    FAILS: "fails",
    INCONCLUSIVE: "inconclusive",
    REDUCIBLE: "reducible",
}


def run_status(
    x: complex,
    y: complex,
    z: complex,
    tau: float = 1e-9,
    margin: float = 1e-6,
    floor: float = 0.0,
    budget: int = 100_000,
) -> tuple[int, int, int]:
    """Status verdict for one triple via the selected backend.

    Returns (status, nodes, count of created values with modulus <= 2).
    """
    return _impl.run_status(
        x.real, x.imag, y.real, y.imag, z.real, z.imag, tau, margin, floor, budget
    )


def run_status_pure(
    x: complex,
    y: complex,
    z: complex,
    tau: float = 1e-9,
    margin: float = 1e-6,
    floor: float = 0.0,
    budget: int = 100_000,
) -> tuple[int, int, int]:
    """Same verdict, forced through the pure-Python kernel (for comparison)."""
    return _bqpure.run_status(
        x.real, x.imag, y.real, y.imag, z.real, z.imag, tau, margin, floor, budget
    )
