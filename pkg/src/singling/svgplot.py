"""Minimal deterministic SVG emission.

Hand-rolled so artifacts are byte-stable across runs: no timestamps, no
generated ids, floats formatted with repr-quality precision.  Two chart
kinds cover the pipeline's needs: line charts (connectivity curves) and
top-down trajectory plots.
"""

from __future__ import annotations

from pathlib import Path

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)

_MARGIN = 56.0
_TICKS = 5


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _nice_ticks(lo: float, hi: float, count: int) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _axes(width: float, height: float, xlo: float, xhi: float,
          ylo: float, yhi: float, x_label: str, y_label: str,
          title: str) -> tuple[list[str], object, object]:
    """Axis frame, ticks and labels; returns svg chunks plus the two
    data-to-pixel mappers."""
    x0, y0 = _MARGIN, height - _MARGIN
    x1, y1 = width - 0.5 * _MARGIN, 0.75 * _MARGIN
    if xhi <= xlo:
        xhi = xlo + 1.0
    if yhi <= ylo:
        yhi = ylo + 1.0

    def px(x: float) -> float:
        return x0 + (x - xlo) / (xhi - xlo) * (x1 - x0)

    def py(y: float) -> float:
        return y0 + (y - ylo) / (yhi - ylo) * (y1 - y0)

    out = [
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y0)}" stroke="black"/>',
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(y1)}" stroke="black"/>',
        f'<text x="{_fmt(0.5 * (x0 + x1))}" y="{_fmt(0.5 * _MARGIN)}" '
        f'text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{_fmt(0.5 * (x0 + x1))}" y="{_fmt(height - 12.0)}" '
        f'text-anchor="middle" font-size="12">{x_label}</text>',
        f'<text x="{_fmt(16.0)}" y="{_fmt(0.5 * (y0 + y1))}" text-anchor="middle" '
        f'font-size="12" transform="rotate(-90 16 {_fmt(0.5 * (y0 + y1))})">{y_label}</text>',
    ]
    for tx in _nice_ticks(xlo, xhi, _TICKS):
        out.append(
            f'<line x1="{_fmt(px(tx))}" y1="{_fmt(y0)}" x2="{_fmt(px(tx))}" '
            f'y2="{_fmt(y0 + 5)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(px(tx))}" y="{_fmt(y0 + 18)}" text-anchor="middle" '
            f'font-size="10">{tx:.4g}</text>'
        )
    for ty in _nice_ticks(ylo, yhi, _TICKS):
        out.append(
            f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(py(ty))}" x2="{_fmt(x0)}" '
            f'y2="{_fmt(py(ty))}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(py(ty) + 3)}" text-anchor="end" '
            f'font-size="10">{ty:.4g}</text>'
        )
    return out, px, py


def _polyline(xs, ys, px, py, color: str, width: float = 1.5,
              dash: str | None = None) -> str:
    pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<polyline points="{pts}" fill="none" stroke="{color}" '
        f'stroke-width="{_fmt(width)}"{dash_attr}/>'
    )


def line_chart(path, series, *, title: str = "", x_label: str = "",
               y_label: str = "", size: tuple[float, float] = (640.0, 420.0),
               y_range: tuple[float, float] | None = None) -> None:
    """Write a multi-series line chart.

    ``series`` is a list of (label, xs, ys) triples; one polyline and one
    legend row per entry.
    """
    width, height = size
    xlo = min((min(xs) for _, xs, _ in series if len(xs)), default=0.0)
    xhi = max((max(xs) for _, xs, _ in series if len(xs)), default=1.0)
    if y_range is not None:
        ylo, yhi = y_range
    else:
        ylo = min((min(ys) for _, _, ys in series if len(ys)), default=0.0)
        yhi = max((max(ys) for _, _, ys in series if len(ys)), default=1.0)
    chunks, px, py = _axes(width, height, xlo, xhi, ylo, yhi,
                           x_label, y_label, title)
    for idx, (label, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        if len(xs):
            chunks.append(_polyline(xs, ys, px, py, color))
        ly = 0.75 * _MARGIN + 16.0 * idx
        lx = width - 2.6 * _MARGIN
        chunks.append(
            f'<line x1="{_fmt(lx)}" y1="{_fmt(ly)}" x2="{_fmt(lx + 24)}" '
            f'y2="{_fmt(ly)}" stroke="{color}" stroke-width="2"/>'
        )
        chunks.append(
            f'<text x="{_fmt(lx + 30)}" y="{_fmt(ly + 4)}" '
            f'font-size="11">{label}</text>'
        )
    _write_svg(path, width, height, chunks)


def trajectory_plot(path, sheep_paths, shepherd_path, *, target: int | None = None,
                    title: str = "", size: tuple[float, float] = (560.0, 560.0)) -> None:
    """Write a top-down trajectory snapshot.

    ``sheep_paths`` is a (T, N, 2) array-like of positions over time and
    ``shepherd_path`` a (T, 2) array-like.  The target sheep (when given)
    and the shepherd are highlighted; final positions get markers.
    """
    width, height = size
    txs = [float(p[0]) for p in shepherd_path]
    tys = [float(p[1]) for p in shepherd_path]
    n = len(sheep_paths[0])
    all_x = list(txs)
    all_y = list(tys)
    for frame in sheep_paths:
        for q in frame:
            all_x.append(float(q[0]))
            all_y.append(float(q[1]))
    xlo, xhi = min(all_x), max(all_x)
    ylo, yhi = min(all_y), max(all_y)
    pad = 0.05 * max(xhi - xlo, yhi - ylo, 1.0)
    chunks, px, py = _axes(width, height, xlo - pad, xhi + pad,
                           ylo - pad, yhi + pad, "x", "y", title)
    for i in range(n):
        xs = [float(frame[i][0]) for frame in sheep_paths]
        ys = [float(frame[i][1]) for frame in sheep_paths]
        if i == target:
            continue
        chunks.append(_polyline(xs, ys, px, py, "#b0c4de", 1.0))
        chunks.append(
            f'<circle cx="{_fmt(px(xs[-1]))}" cy="{_fmt(py(ys[-1]))}" r="3" '
            f'fill="#1f77b4"/>'
        )
    if target is not None:
        xs = [float(frame[target][0]) for frame in sheep_paths]
        ys = [float(frame[target][1]) for frame in sheep_paths]
        chunks.append(_polyline(xs, ys, px, py, "#2ca02c", 2.0))
        chunks.append(
            f'<circle cx="{_fmt(px(xs[-1]))}" cy="{_fmt(py(ys[-1]))}" r="5" '
            f'fill="#2ca02c"/>'
        )
    chunks.append(_polyline(txs, tys, px, py, "#d62728", 2.0, dash="4 3"))
    chunks.append(
        f'<rect x="{_fmt(px(txs[-1]) - 4)}" y="{_fmt(py(tys[-1]) - 4)}" '
        f'width="8" height="8" fill="#d62728"/>'
    )
    _write_svg(path, width, height, chunks)


def _write_svg(path, width: float, height: float, chunks: list[str]) -> None:
    body = "\n".join(chunks)
    doc = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">\n'
        f"{body}\n</svg>\n"
    )
    Path(path).write_text(doc, encoding="utf-8")
