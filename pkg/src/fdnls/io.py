"""Persistence: time-series CSV, sweep JSONL, plot data, simple SVG.

Floats are serialized with 17 significant digits so 64-bit values round
trip exactly, which keeps golden-file comparisons bit-stable for
deterministic runs.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .functionals import DiagnosticsRecord

CSV_HEADER = (
    "t,mass_sq,energy,h_alpha_sq,h_s_sq,h_salpha_sq,lp_theta,"
    "strichartz_acc,mass_resid,energy_resid,run_id,config_hash"
)


def format_float(x: float) -> str:
    return f"{x:.17g}"


def write_timeseries(trajectory, path: str, run_id: str, config_hash: str) -> None:
    """One CSV row per diagnostics record under the fixed, versioned header."""
    lines = [CSV_HEADER]
    for record in trajectory.records:
        values = [format_float(getattr(record, name)) for name in DiagnosticsRecord.CSV_FIELDS]
        lines.append(",".join(values + [run_id, config_hash]))
    _write_text(path, "\n".join(lines) + "\n")


def write_sweep_jsonl(results, path: str, run_id: str, config_hash: str) -> None:
    """One JSON object per parameter point, streamable and resumable."""
    lines = []
    for result in results:
        row = asdict(result)
        row["run_id"] = run_id
        row["config_hash"] = config_hash
        lines.append(json.dumps(row, sort_keys=True))
    _write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def sweep_summary_table(results) -> str:
    header = f"{'a':>10}  {'outcome':>10}  {'strichartz_acc':>16}  {'peak_h_alpha':>14}"
    rows = [header, "-" * len(header)]
    for r in results:
        rows.append(
            f"{r.a:>10.4g}  {r.outcome:>10}  {r.strichartz_acc:>16.8g}  {r.peak_h_alpha:>14.6g}"
        )
    return "\n".join(rows)


def _rows_from(source) -> list[dict]:
    if hasattr(source, "records"):
        return [asdict(r) for r in source.records]
    return [dict(r) if not hasattr(r, "__dataclass_fields__") else asdict(r) for r in source]


def emit_plotdata(source, x: str, y: str, path: str, svg_path: str | None = None) -> None:
    """Two-column plain-text series from trajectory records or row mappings;
    optionally renders a minimal SVG line chart alongside."""
    rows = _rows_from(source)
    if not rows:
        raise ValueError("empty series: nothing to plot")
    for name in (x, y):
        if name not in rows[0]:
            raise ValueError(
                f"unknown column name '{name}'; have {sorted(rows[0])}"
            )
    points = [(float(r[x]), float(r[y])) for r in rows]
    lines = [f"# {x} {y}"] + [
        f"{format_float(a)} {format_float(b)}" for a, b in points
    ]
    _write_text(path, "\n".join(lines) + "\n")
    if svg_path:
        _write_text(svg_path, render_svg(points, x, y))


def render_svg(points, x_label: str, y_label: str, width: int = 640, height: int = 420) -> str:
    """Dependency-free line chart: one polyline, axis frame, range labels."""
    margin = 54.0
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def sx(v):
        return margin + (v - x_lo) / x_span * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y_lo) / y_span * (height - 2 * margin)

    poly = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in points)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<polyline points="{poly}" fill="none" stroke="steelblue" stroke-width="1.5"/>',
        f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="13">{x_label}</text>',
        f'<text x="16" y="{height / 2:.0f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {height / 2:.0f})">{y_label}</text>',
        f'<text x="{margin}" y="{height - margin + 16:.0f}" font-size="11">{x_lo:.6g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 16:.0f}" text-anchor="end" '
        f'font-size="11">{x_hi:.6g}</text>',
        f'<text x="{margin - 4}" y="{height - margin}" text-anchor="end" '
        f'font-size="11">{y_lo:.6g}</text>',
        f'<text x="{margin - 4}" y="{margin + 4:.0f}" text-anchor="end" '
        f'font-size="11">{y_hi:.6g}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
