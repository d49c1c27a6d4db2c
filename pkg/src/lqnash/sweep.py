"""Parameter sweeps over the dynamics gain: rows, CSV/JSON emission, SVG plots.

Points are processed independently (optionally across worker processes) and
the output ordering is restored before writing, so results are byte-identical
regardless of worker count.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .game import GameParams
from .solver import ConsistencyError, solve

CSV_COLUMNS = (
    "a", "r2", "delta", "delta_sign", "n_real_roots_g", "n_nash",
    "k1_1", "k2_1", "j1_1", "j2_1",
    "k1_2", "k2_2", "j1_2", "j2_2",
    "k1_3", "k2_3", "j1_3", "j2_3",
)

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class ConfigError(ValueError):
    """A sweep configuration violates its invariants."""


@dataclass(frozen=True)
class AGrid:
    min: float
    max: float
    count: int
    spacing: str = "linear"


@dataclass(frozen=True)
class SweepOutputs:
    csv: str
    svg: str | None = None
    json: str | None = None


@dataclass(frozen=True)
class SweepConfig:
    q1: float
    r1: float
    q2: float
    a_grid: AGrid
    r2_values: tuple[float, ...]
    outputs: SweepOutputs
    b1: float = 1.0
    b2: float = 1.0
    x0: float = 1.0


@dataclass(frozen=True)
class EquilibriumRow:
    k1: float
    k2: float
    a_cl: float
    j1: float
    j2: float


@dataclass(frozen=True)
class SweepRow:
    a: float
    r2: float
    delta: float
    delta_sign: int
    n_real_roots_g: int
    n_nash: int
    equilibria: tuple[EquilibriumRow, ...]


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read sweep config: {exc}") from exc
    return parse_config(doc)


def parse_config(doc: dict) -> SweepConfig:
    if not isinstance(doc, dict):
        raise ConfigError("sweep config must be a JSON object")
    try:
        grid_doc = doc["a_grid"]
        grid = AGrid(
            min=float(grid_doc["min"]),
            max=float(grid_doc["max"]),
            count=int(grid_doc["count"]),
            spacing=str(grid_doc.get("spacing", "linear")),
        )
        outputs_doc = doc["outputs"]
        outputs = SweepOutputs(
            csv=str(outputs_doc["csv"]),
            svg=str(outputs_doc["svg"]) if outputs_doc.get("svg") else None,
            json=str(outputs_doc["json"]) if outputs_doc.get("json") else None,
        )
        config = SweepConfig(
            q1=float(doc["q1"]),
            r1=float(doc["r1"]),
            q2=float(doc["q2"]),
            b1=float(doc.get("b1", 1.0)),
            b2=float(doc.get("b2", 1.0)),
            x0=float(doc.get("x0", 1.0)),
            a_grid=grid,
            r2_values=tuple(float(v) for v in doc["r2_values"]),
            outputs=outputs,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed sweep config: {exc}") from exc
    _validate(config)
    return config


def _validate(config: SweepConfig) -> None:
    grid = config.a_grid
    if not grid.min > 0:
        raise ConfigError("a_grid.min must be > 0")
    if grid.max < grid.min:
        raise ConfigError("a_grid.max must be >= a_grid.min")
    if grid.count < 1:
        raise ConfigError("a_grid.count must be >= 1")
    if grid.spacing not in ("linear", "log"):
        raise ConfigError("a_grid.spacing must be 'linear' or 'log'")
    if not config.r2_values:
        raise ConfigError("r2_values must be nonempty")
    if any(not v > 0 for v in config.r2_values):
        raise ConfigError("r2_values must all be > 0")
    for name in ("q1", "r1", "q2"):
        if not getattr(config, name) > 0:
            raise ConfigError(f"{name} must be > 0")
    for name in ("b1", "b2"):
        if getattr(config, name) == 0:
            raise ConfigError(f"{name} must be nonzero")


def a_points(grid: AGrid) -> list[float]:
    if grid.count == 1:
        return [grid.min]
    if grid.spacing == "log":
        ratio = grid.max / grid.min
        return [grid.min * ratio ** (i / (grid.count - 1)) for i in range(grid.count)]
    step = (grid.max - grid.min) / (grid.count - 1)
    return [grid.min + i * step for i in range(grid.count)]


def _safe_float(x: Fraction) -> float:
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


def _row_for_point(task: tuple) -> SweepRow:
    q1, r1, q2, b1, b2, x0, r2, a = task
    params = GameParams(
        a=Fraction(a), q1=Fraction(q1), q2=Fraction(q2),
        r1=Fraction(r1), r2=Fraction(r2),
        b1=Fraction(b1), b2=Fraction(b2), x0=Fraction(x0),
    )
    report = solve(params)
    eqs = tuple(
        EquilibriumRow(k1=e.k1, k2=e.k2, a_cl=e.a_cl, j1=e.j1, j2=e.j2)
        for e in report.equilibria
    )
    return SweepRow(
        a=a,
        r2=r2,
        delta=_safe_float(report.delta),
        delta_sign=report.delta_sign,
        n_real_roots_g=report.real_roots_total,
        n_nash=report.n_nash,
        equilibria=eqs,
    )


def run_sweep(config: SweepConfig, threads: int = 1) -> list[SweepRow]:
    """One row per (r2, a) pair, ordered by (r2, a) ascending."""
    tasks = [
        (config.q1, config.r1, config.q2, config.b1, config.b2, config.x0, r2, a)
        for r2 in sorted(config.r2_values)
        for a in a_points(config.a_grid)
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_row_for_point, tasks, chunksize=32))
    else:
        rows = [_row_for_point(t) for t in tasks]
    return rows


def _assert_row_flags(row: SweepRow) -> None:
    ok = 1 <= row.n_nash <= 3
    ok = ok and (row.delta_sign != -1 or row.n_nash == 1)
    ok = ok and (row.delta_sign != 0 or row.n_nash <= 2)
    if not ok:
        raise ConsistencyError(
            f"sweep row a={row.a} r2={row.r2} violates the discriminant law "
            f"(sign {row.delta_sign}, {row.n_nash} equilibria)"
        )


def format_float(x: float) -> str:
    """12 significant digits, the presentation precision of CSV and JSON."""
    return format(x, ".12g")


def _csv_line(row: SweepRow) -> str:
    fields = [
        format_float(row.a),
        format_float(row.r2),
        format_float(row.delta),
        str(row.delta_sign),
        str(row.n_real_roots_g),
        str(row.n_nash),
    ]
    for i in range(3):
        if i < len(row.equilibria):
            e = row.equilibria[i]
            fields += [format_float(e.k1), format_float(e.k2), format_float(e.j1), format_float(e.j2)]
        else:
            fields += ["", "", "", ""]
    return ",".join(fields)


def rows_to_csv(rows: list[SweepRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        _assert_row_flags(row)
        lines.append(_csv_line(row))
    return "\n".join(lines) + "\n"


def rows_to_json_doc(rows: list[SweepRow]) -> list[dict]:
    out = []
    for row in rows:
        _assert_row_flags(row)
        out.append(
            {
                "a": row.a,
                "r2": row.r2,
                "delta": row.delta,
                "delta_sign": row.delta_sign,
                "n_real_roots_g": row.n_real_roots_g,
                "n_nash": row.n_nash,
                "equilibria": [
                    {"k1": e.k1, "k2": e.k2, "a_cl": e.a_cl, "j1": e.j1, "j2": e.j2}
                    for e in row.equilibria
                ],
            }
        )
    return out


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file and rename, so partial output never lands."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sweep-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# SVG rendering: two stacked panels, no external references
# ---------------------------------------------------------------------------


def _symlog(delta: float) -> float:
    """sign(d) * log10(1 + |d|), the documented symmetric-log transform."""
    if delta == 0:
        return 0.0
    magnitude = math.log10(1.0 + abs(delta)) if math.isfinite(delta) else 320.0
    return math.copysign(magnitude, delta)


def _fmt(x: float) -> str:
    return format(x, ".2f")


def render_svg(rows: list[SweepRow], config: SweepConfig) -> str:
    """Self-contained two-panel figure: transformed discriminant and count vs a."""
    width, height = 760.0, 560.0
    margin_l, margin_r, margin_t, panel_gap = 70.0, 20.0, 30.0, 50.0
    panel_h = (height - 2 * margin_t - panel_gap - 30.0) / 2
    plot_w = width - margin_l - margin_r

    by_r2: dict[float, list[SweepRow]] = {}
    for row in rows:
        by_r2.setdefault(row.r2, []).append(row)
    r2s = sorted(by_r2)
    for series in by_r2.values():
        series.sort(key=lambda r: r.a)

    a_vals = [r.a for r in rows]
    a_lo, a_hi = min(a_vals), max(a_vals)
    a_span = (a_hi - a_lo) or 1.0
    y1_vals = [_symlog(r.delta) for r in rows]
    y1_lo, y1_hi = min(y1_vals + [0.0]), max(y1_vals + [0.0])
    y1_span = (y1_hi - y1_lo) or 1.0

    def x_of(a: float) -> float:
        return margin_l + (a - a_lo) / a_span * plot_w

    def y1_of(v: float) -> float:
        return margin_t + panel_h - (v - y1_lo) / y1_span * panel_h

    panel2_top = margin_t + panel_h + panel_gap

    def y2_of(n: float) -> float:
        return panel2_top + panel_h - (n - 0.0) / 4.0 * panel_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{margin_l}" y="18" font-family="sans-serif" font-size="13">'
        "discriminant vs a (symmetric log: sign * log10(1 + |delta|))</text>",
    ]
    # panel frames
    for top in (margin_t, panel2_top):
        parts.append(
            f'<rect x="{_fmt(margin_l)}" y="{_fmt(top)}" width="{_fmt(plot_w)}" '
            f'height="{_fmt(panel_h)}" fill="none" stroke="#888" stroke-width="1"/>'
        )
    # zero line in panel 1
    parts.append(
        f'<line x1="{_fmt(margin_l)}" y1="{_fmt(y1_of(0.0))}" x2="{_fmt(margin_l + plot_w)}" '
        f'y2="{_fmt(y1_of(0.0))}" stroke="#bbb" stroke-width="1" stroke-dasharray="4,3"/>'
    )
    # a-axis ticks on both panels
    for i in range(5):
        a_t = a_lo + a_span * i / 4
        x = x_of(a_t)
        for top in (margin_t, panel2_top):
            parts.append(
                f'<line x1="{_fmt(x)}" y1="{_fmt(top + panel_h)}" x2="{_fmt(x)}" '
                f'y2="{_fmt(top + panel_h + 4)}" stroke="#444" stroke-width="1"/>'
            )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(panel2_top + panel_h + 18)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{format_float(a_t)}</text>'
        )
    # count gridlines
    for n in (1, 2, 3):
        parts.append(
            f'<line x1="{_fmt(margin_l)}" y1="{_fmt(y2_of(n))}" x2="{_fmt(margin_l + plot_w)}" '
            f'y2="{_fmt(y2_of(n))}" stroke="#eee" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(margin_l - 8)}" y="{_fmt(y2_of(n) + 4)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{n}</text>'
        )
    for idx, r2 in enumerate(r2s):
        color = _PALETTE[idx % len(_PALETTE)]
        series = by_r2[r2]
        pts1 = " ".join(f"{_fmt(x_of(r.a))},{_fmt(y1_of(_symlog(r.delta)))}" for r in series)
        pts2 = " ".join(f"{_fmt(x_of(r.a))},{_fmt(y2_of(r.n_nash))}" for r in series)
        parts.append(f'<polyline points="{pts1}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<polyline points="{pts2}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{_fmt(margin_l + plot_w - 120)}" y="{_fmt(margin_t + 16 + 14 * idx)}" '
            f'font-family="sans-serif" font-size="11" fill="{color}">r2 = {format_float(r2)}</text>'
        )
    parts.append(
        f'<text x="{margin_l}" y="{_fmt(panel2_top - 10)}" font-family="sans-serif" '
        'font-size="13">number of Nash equilibria vs a</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
