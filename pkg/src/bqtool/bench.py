"""Kernel benchmark: compiled extension vs pure-Python twin.

Run as ``python -m bqtool.bench``.  Times both backends on the same small
diagonal grid, checks they return identical results, and prints the
speedup.
"""

from __future__ import annotations

import time

from . import _bqpure, kernel


def _grid(cols: int = 24, rows: int = 24) -> list[complex]:
    center, width, height = 2.5 + 0j, 3.0, 3.0
    cells = []
    for i in range(rows):
        for j in range(cols):
            re = center.real - width / 2 + (j + 0.5) * width / cols
            im = center.imag + height / 2 - (i + 0.5) * height / rows
            cells.append(complex(re, im))
    return cells


def _run(fn, cells: list[complex], budget: int) -> tuple[float, list]:
    t0 = time.perf_counter()
    out = []
    for s in cells:
        out.append(
            fn(s.real, s.imag, s.real, s.imag, s.real, s.imag, budget=budget)
        )
    return time.perf_counter() - t0, out


def main() -> int:
    cells = _grid()
    budget = 20_000
    print(f"grid: {len(cells)} cells, budget {budget}")
    print(f"selected backend: {kernel.BACKEND}")
    t_pure, res_pure = _run(_bqpure.run_status, cells, budget)
    print(f"pure:     {t_pure:8.3f} s")
    if kernel.BACKEND == "compiled":
        t_comp, res_comp = _run(kernel._impl.run_status, cells, budget)
        print(f"compiled: {t_comp:8.3f} s")
        mismatches = sum(1 for a, b in zip(res_pure, res_comp) if a != b)
        print(f"result mismatches: {mismatches}")
        if t_comp > 0:
            print(f"speedup: {t_pure / t_comp:.1f}x")
        return 1 if mismatches else 0
    print("compiled backend unavailable; nothing to compare")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
