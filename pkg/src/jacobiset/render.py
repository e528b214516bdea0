"""SVG rendering of a field in the orientation/saturation style.

Triangles are filled red when the linear map preserves the winding and
blue when it mirrors it; saturation grows with the triangle's range area
relative to the median nonzero range area. Degenerate triangles take
their neighborhood-assigned sign at a faint minimum saturation, and
Jacobi edges are stroked black on top.
"""

from __future__ import annotations

import numpy as np

from .jacobi import (
    assign_degenerate,
    extract_jacobi_set,
    orientation_signs,
)
from .mesh import TriField

MIN_SATURATION = 0.08
_RED = (255, 0, 0)
_BLUE = (0, 0, 255)


def _blend(color, saturation: float) -> str:
    r, g, b = (round(255 + (c - 255) * saturation) for c in color)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(
    field: TriField,
    show_jacobi: bool = True,
    saturation_scale: float = 1.0,
    epsilon: float = 0.0,
    canvas_width: float = 800.0,
) -> str:
    """Render the field to an SVG string (no external references)."""
    if saturation_scale <= 0:
        raise ValueError("saturation scale must be > 0")
    signs = orientation_signs(field, epsilon)
    assignment = assign_degenerate(field, signs)
    js = extract_jacobi_set(field, signs, assignment)

    range_areas = np.abs(field.dets) * field.domain_areas
    nonzero = range_areas[range_areas > 0]
    median = float(np.median(nonzero)) if len(nonzero) else 1.0
    scale_ref = saturation_scale * median

    pos = field.positions
    xmin, ymin = pos.min(axis=0)
    xmax, ymax = pos.max(axis=0)
    w = max(xmax - xmin, 1e-30)
    h = max(ymax - ymin, 1e-30)
    px = canvas_width / w
    canvas_height = h * px

    def to_px(p):
        return ((p[0] - xmin) * px, (ymax - p[1]) * px)  # y grows downward in SVG

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{canvas_width:.0f}" '
        f'height="{canvas_height:.2f}" viewBox="0 0 {canvas_width:.2f} {canvas_height:.2f}">',
        '<g stroke="none">',
    ]
    eff_color = {1: _RED, -1: _BLUE}
    for t in range(field.n_triangles):
        s = int(signs[t])
        if s == 0:
            color = eff_color[assignment[t]]
            sat = MIN_SATURATION
        else:
            color = eff_color[s]
            sat = min(1.0, float(range_areas[t]) / scale_ref) if scale_ref > 0 else 1.0
        pts = " ".join(
            f"{x:.3f},{y:.3f}" for x, y in (to_px(pos[v]) for v in field.triangles[t])
        )
        lines.append(f'<polygon points="{pts}" fill="{_blend(color, sat)}"/>')
    lines.append("</g>")

    if show_jacobi and len(js.edges):
        stroke = 0.004 * max(canvas_width, canvas_height)
        lines.append(f'<g stroke="#000000" stroke-width="{stroke:.3f}" stroke-linecap="round">')
        for a, b in js.edges:
            x1, y1 = to_px(pos[a])
            x2, y2 = to_px(pos[b])
            lines.append(f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
