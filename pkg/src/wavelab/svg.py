"""Minimal standalone SVG line plots for diagnostic snapshots."""

from html import escape
import math

import numpy as np

from .errors import ParameterDomainError

WIDTH, HEIGHT = 640, 400
MARGIN = 56
COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v):
    return f"{v:.6g}"


def render_svg(series, title="", xlabel="", ylabel="", equal_aspect=False):
    """Render ``[(label, xs, ys), ...]`` as an SVG document string."""
    series = [(label, np.asarray(xs, float), np.asarray(ys, float)) for label, xs, ys in series]
    if not series or any(len(xs) == 0 or len(xs) != len(ys) for _, xs, ys in series):
        raise ParameterDomainError("every series needs matching, non-empty x and y data")

    xs_all = np.concatenate([s[1] for s in series])
    ys_all = np.concatenate([s[2] for s in series])
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN
    sx, sy = pw / (x1 - x0), ph / (y1 - y0)
    if equal_aspect:
        sx = sy = min(sx, sy)

    def px(x):
        return MARGIN + (x - x0) * sx

    def py(y):
        return HEIGHT - MARGIN - (y - y0) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="14" '
        f'font-family="sans-serif">{escape(title)}</text>',
    ]
    # axes through the origin when it is in view, else along the frame
    ax_y = py(0.0) if y0 <= 0 <= y1 else HEIGHT - MARGIN
    ax_x = px(0.0) if x0 <= 0 <= x1 else MARGIN
    out.append(
        f'<line x1="{MARGIN}" y1="{ax_y:.2f}" x2="{WIDTH - MARGIN}" y2="{ax_y:.2f}" stroke="black"/>'
    )
    out.append(
        f'<line x1="{ax_x:.2f}" y1="{MARGIN}" x2="{ax_x:.2f}" y2="{HEIGHT - MARGIN}" stroke="black"/>'
    )
    for value, anchor, x, y in (
        (x0, "start", MARGIN, HEIGHT - MARGIN + 16),
        (x1, "end", WIDTH - MARGIN, HEIGHT - MARGIN + 16),
    ):
        out.append(
            f'<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="10" '
            f'font-family="sans-serif">{_fmt(value)}</text>'
        )
    for value, y in ((y1, MARGIN + 4), (y0, HEIGHT - MARGIN)):
        out.append(
            f'<text x="{MARGIN - 4}" y="{y}" text-anchor="end" font-size="10" '
            f'font-family="sans-serif">{_fmt(value)}</text>'
        )
    out.append(
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 14 {HEIGHT / 2})">{escape(ylabel)}</text>'
    )
    for i, (label, xs, ys) in enumerate(series):
        colour = COLOURS[i % len(COLOURS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}">'
            f"<title>{escape(label)}</title></polyline>"
        )
        out.append(
            f'<text x="{WIDTH - MARGIN}" y="{MARGIN + 14 * i}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif" fill="{colour}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_snapshot_svg(series, path, title="", xlabel="", ylabel="", equal_aspect=False):
    """Write :func:`render_svg` output to ``path``; returns the path."""
    text = render_svg(series, title, xlabel, ylabel, equal_aspect)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def title_with(name, **values):
    parts = []
    for key, value in values.items():
        if isinstance(value, float):
            value = f"{value:.4g}" if math.isfinite(value) else str(value)
        parts.append(f"{key}={value}")
    return f"{name} ({', '.join(parts)})" if parts else name
