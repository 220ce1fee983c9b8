"""Parameter-plane slice scanner and report emitters.

Evaluates the BQ semi-decision on a rectangular grid of complex slice
parameters (diagonal x = y = z = s, or x, y fixed with z = s), renders the
status map as a binary PPM, and serializes results as CSV/JSON.  Also
exports a certificate's explored tree as DOT.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import kernel
from .farey import Fraction
from .markoff import (
    BqParams,
    Certificate,
    MarkoffTriple,
    decide_bq,
    validate_certificate,
)

SCAN_SCHEMA_VERSION = 1

CSV_HEADER = "re,im,status,nodes,omega2_count"


@dataclass(frozen=True)
class ScanConfig:
    """Grid scan configuration.

    kind "diagonal" scans triples (s, s, s); kind "fix-xy" holds x and y
    and scans z = s.  The window is centered at ``center`` with the given
    width and height (height defaults to width); the grid is cols × rows,
    row-major from the top-left cell.
    """

    kind: str = "diagonal"
    center: complex = 2.5 + 0j
    width: float = 3.0
    height: Optional[float] = None
    cols: int = 64
    rows: int = 64
    x: complex = 0j
    y: complex = 0j
    params: BqParams = field(default_factory=BqParams)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("diagonal", "fix-xy"):
            raise ValueError(f"unknown slice kind {self.kind!r}")
        if self.cols < 1 or self.rows < 1:
            raise ValueError("resolution must be at least 1x1")
        if not self.width > 0:
            raise ValueError("width must be positive")
        if self.height is not None and not self.height > 0:
            raise ValueError("height must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def effective_height(self) -> float:
        return self.width if self.height is None else self.height

    def cell_param(self, row: int, col: int) -> complex:
        w = self.width
        h = self.effective_height
        re = self.center.real - w / 2.0 + (col + 0.5) * w / self.cols
        im = self.center.imag + h / 2.0 - (row + 0.5) * h / self.rows
        return complex(re, im)

    def cell_triple(self, s: complex) -> tuple[complex, complex, complex]:
        if self.kind == "diagonal":
            return (s, s, s)
        return (self.x, self.y, s)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "center": [self.center.real, self.center.imag],
            "width": self.width,
            "height": self.effective_height,
            "cols": self.cols,
            "rows": self.rows,
            "x": [self.x.real, self.x.imag],
            "y": [self.y.real, self.y.imag],
            "params": {
                "tau": self.params.tau,
                "margin": self.params.margin,
                "floor": self.params.floor,
                "budget": self.params.budget,
            },
        }


@dataclass(frozen=True)
class CellRecord:
    row: int
    col: int
    param: complex
    status: str
    nodes: int
    omega2_count: Optional[int]
    validated: Optional[bool] = None


@dataclass(frozen=True)
class ScanResult:
    """Complete per-cell outcome grid, row-major from the top-left."""

    config: ScanConfig
    records: tuple[CellRecord, ...]

    def to_csv_text(self) -> str:
        lines = [CSV_HEADER]
        for r in self.records:
            omega = "" if r.omega2_count is None else str(r.omega2_count)
            lines.append(
                f"{r.param.real!r},{r.param.imag!r},{r.status},{r.nodes},{omega}"
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "kind": "scan-result",
            "schema_version": SCAN_SCHEMA_VERSION,
            "config": self.config.to_json_dict(),
            "records": [
                {
                    "row": r.row,
                    "col": r.col,
                    "re": r.param.real,
                    "im": r.param.imag,
                    "status": r.status,
                    "nodes": r.nodes,
                    "omega2_count": r.omega2_count,
                    **(
                        {}
                        if r.validated is None
                        else {"validated": r.validated}
                    ),
                }
                for r in self.records
            ],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"


def _scan_row(
    args: tuple[int, ScanConfig],
) -> tuple[int, list[tuple[int, int, complex, int, int, int]]]:
    row, cfg = args
    out = []
    p = cfg.params
    for col in range(cfg.cols):
        s = cfg.cell_param(row, col)
        x, y, z = cfg.cell_triple(s)
        status, nodes, omega2 = kernel.run_status(
            x, y, z, tau=p.tau, margin=p.margin, floor=p.floor,
            budget=int(p.budget),
        )
        out.append((row, col, s, status, nodes, omega2))
    return row, out


def scan_grid(cfg: ScanConfig, validate: bool = False) -> ScanResult:
    """Run the BQ semi-decision on every grid cell.

    Cells are independent; with workers > 1 rows are dispatched to a
    process pool and merged by row index, so the result is identical for
    every worker count.  ``validate`` re-runs certified cells through the
    rich engine and the certificate validator, recording the verdict.
    """
    jobs = [(row, cfg) for row in range(cfg.rows)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            rows = list(ex.map(_scan_row, jobs))
    else:
        rows = [_scan_row(job) for job in jobs]
    rows.sort(key=lambda item: item[0])
    records: list[CellRecord] = []
    for _row, cells in rows:
        for row, col, s, status, nodes, omega2 in cells:
            name = kernel.STATUS_NAMES[status]
            records.append(
                CellRecord(
                    row=row,
                    col=col,
                    param=s,
                    status=name,
                    nodes=nodes,
                    omega2_count=omega2 if status == kernel.CERTIFIED else None,
                )
            )
    if validate:
        checked: list[CellRecord] = []
        for r in records:
            if r.status != "certified":
                checked.append(r)
                continue
            x, y, z = cfg.cell_triple(r.param)
            outcome = decide_bq(MarkoffTriple(x, y, z), cfg.params)
            ok = (
                outcome.is_certified
                and outcome.certificate is not None
                and validate_certificate(
                    outcome.certificate, MarkoffTriple(x, y, z)
                ).ok
            )
            checked.append(
                CellRecord(
                    row=r.row,
                    col=r.col,
                    param=r.param,
                    status=r.status,
                    nodes=r.nodes,
                    omega2_count=r.omega2_count,
                    validated=ok,
                )
            )
        records = checked
    return ScanResult(config=cfg, records=tuple(records))


# ---------------------------------------------------------------------------
# PPM rendering
# ---------------------------------------------------------------------------


def _pixel(status: str, nodes: int) -> bytes:
    if status == "fails":
        return bytes((0, 0, 0))
    if status == "reducible":
        return bytes((255, 0, 255))
    if status == "inconclusive":
        return bytes((128, 128, 128))
    red = int(min(255, 32 * math.log2(1 + nodes)))
    return bytes((red, 255, 0))


def render_ppm(result: ScanResult, path: str) -> None:
    """Binary PPM (P6), one pixel per cell, row-major from the top-left;
    bit-exact for identical results."""
    cfg = result.config
    header = f"P6\n{cfg.cols} {cfg.rows}\n255\n".encode("ascii")
    body = bytearray()
    for r in result.records:
        body += _pixel(r.status, r.nodes)
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(bytes(body))
    except OSError as exc:
        raise OSError(f"cannot write PPM to {path!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# DOT export of a certificate's explored tree
# ---------------------------------------------------------------------------


def _fmt_value(v: Optional[complex]) -> str:
    if v is None:
        return "large"
    if abs(v.imag) <= 1e-12 * (1.0 + abs(v.real)):
        return f"{v.real:.6g}"
    return f"{v.real:.6g}{v.imag:+.6g}i"


def _node_id(pq: tuple[int, int]) -> str:
    return f"n_{pq[0]}_{pq[1]}".replace("-", "m")


def dot_text(cert: Certificate) -> str:
    """GraphViz DOT for the certificate's explored regions.

    One node per region, labeled "p/q: value"; directed edges follow the
    descent arrows (larger far value → smaller near value), ties drawn
    undirected; regions with value modulus ≤ 2 are double-circled.
    """
    def norm(pq: tuple[int, int]) -> tuple[int, int]:
        f = Fraction(*pq)
        return (f.p, f.q)

    values: dict[tuple[int, int], Optional[complex]] = {}
    for e in cert.edges:
        for pq, val in (
            (e.u, e.u_val),
            (e.v, e.v_val),
            (e.near, e.near_val),
            (e.far, e.far_val),
        ):
            values.setdefault(norm(pq), val)
    omega_pairs = {(f.p, f.q) for f, _val in cert.omega}
    lines = ["digraph tree {", "  rankdir=LR;", "  node [shape=circle];"]

    def sort_key(pq: tuple[int, int]):
        return Fraction(pq[0], pq[1]).key()

    for pq in sorted(values, key=sort_key):
        label = f"{Fraction(pq[0], pq[1])}: {_fmt_value(values[pq])}"
        extra = ", peripheries=2" if pq in omega_pairs else ""
        lines.append(f'  {_node_id(pq)} [label="{label}"{extra}];')
    for e in cert.edges:
        tail, head = norm(e.far), norm(e.near)
        if e.far_mod > e.near_mod:
            lines.append(f"  {_node_id(tail)} -> {_node_id(head)};")
        elif e.far_mod < e.near_mod:
            lines.append(f"  {_node_id(head)} -> {_node_id(tail)};")
        else:
            lines.append(f"  {_node_id(tail)} -> {_node_id(head)} [dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
