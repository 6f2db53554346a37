"""Minimal SVG rendering of profile curves."""
from __future__ import annotations

from html import escape

import numpy as np


def _f(v: float) -> str:
    return f"{v:.6g}"


def profile_svg(points: np.ndarray, marks: list[tuple[float, float, str]] = (),
                title: str | None = None, width: int = 800, height: int = 600,
                margin: int = 30) -> str:
    """Polyline of ``points`` with the x-axis (y = 0) drawn and ``marks`` circled.

    The plot keeps a 1:1 aspect ratio so cusps look like cusps.
    """
    pts = np.asarray(points, dtype=float)
    xs, ys = pts[:, 0], pts[:, 1]
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = min(0.0, float(ys.min())), float(ys.max())
    span = max(x1 - x0, y1 - y0, 1e-12)
    scale = min((width - 2 * margin) / max(x1 - x0, 1e-3 * span),
                (height - 2 * margin) / max(y1 - y0, 1e-3 * span))

    def px(x):
        return margin + (x - x0) * scale

    def py(y):
        return height - margin - (y - y0) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<rect width="100%" height="100%" fill="white"/>')
    out.append(
        f'<line class="x-axis" x1="{_f(px(x0))}" y1="{_f(py(0.0))}" '
        f'x2="{_f(px(x1))}" y2="{_f(py(0.0))}" stroke="black" stroke-width="1"/>'
    )
    coords = " ".join(f"{_f(px(x))},{_f(py(y))}" for x, y in pts)
    out.append(f'<polyline class="profile" fill="none" stroke="#1f4e9c" '
               f'stroke-width="1.5" points="{coords}"/>')
    for x, y, label in marks:
        out.append(
            f'<circle class="singular" cx="{_f(px(x))}" cy="{_f(py(y))}" r="4" '
            f'fill="none" stroke="#c0392b" stroke-width="1.5">'
            f"<title>{escape(label)}</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
