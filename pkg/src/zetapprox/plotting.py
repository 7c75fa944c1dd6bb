"""Deterministic SVG figures of the compact sets, zeros and fit errors."""
from __future__ import annotations

import numpy as np

from .regions import CompactSet

PX_PER_UNIT = 40.0


def _f(x: float) -> str:
    return f"{x:.6g}"


def _rect_path(r) -> str:
    # y is flipped so that the imaginary axis points up
    return (f'<path class="rect" d="M {_f(r.x0)} {_f(-r.y0)} L {_f(r.x1)} {_f(-r.y0)} '
            f'L {_f(r.x1)} {_f(-r.y1)} L {_f(r.x0)} {_f(-r.y1)} Z"/>')


def _disc_path(d, cls: str) -> str:
    cx, cy, r = d.center.real, -d.center.imag, d.radius
    return (f'<path class="{cls}" d="M {_f(cx + r)} {_f(cy)} A {_f(r)} {_f(r)} 0 1 0 {_f(cx - r)} {_f(cy)} '
            f'A {_f(r)} {_f(r)} 0 1 0 {_f(cx + r)} {_f(cy)} Z"/>')


def _color(t: float) -> str:
    """Map t in [0, 1] from blue to red."""
    t = min(1.0, max(0.0, t))
    return f"#{int(255 * t):02x}40{int(255 * (1 - t)):02x}"


def render_svg(cset: CompactSet, zeta_zeros=(), roots=(), heat=None, title: str = "") -> str:
    """SVG text: rects, excluded and added discs, zeta zeros, fitted roots.

    heat is an optional (points, errors, cell) triple drawn underneath as
    squares coloured by log10 of the error.
    """
    box = cset.bounding_box()
    for d in cset.excluded_discs:
        box = type(box)(min(box.x0, d.center.real - d.radius), max(box.x1, d.center.real + d.radius),
                        min(box.y0, d.center.imag - d.radius), max(box.y1, d.center.imag + d.radius))
    pad = 0.05 * max(box.x1 - box.x0, box.y1 - box.y0)
    x0, y0 = box.x0 - pad, -(box.y1 + pad)
    w, h = box.x1 - box.x0 + 2 * pad, box.y1 - box.y0 + 2 * pad
    marker = 0.01 * max(w, h)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(y0)} {_f(w)} {_f(h)}" '
           f'width="{_f(w * PX_PER_UNIT)}" height="{_f(h * PX_PER_UNIT)}">']
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<style>path{{stroke-width:{_f(marker / 4)};}} .rect{{fill:#dde6f0;stroke:#345;}} '
               '.excluded{fill:#fff;stroke:#a33;stroke-dasharray:0.1 0.05;} '
               '.added{fill:#f5e6b8;stroke:#a80;} .zeta-zero{fill:#000;} .root{fill:none;stroke:#c0c;}</style>')
    if heat is not None:
        pts, errs, cell = heat
        errs = np.asarray(errs, dtype=float)
        logs = np.log10(np.maximum(errs, 1e-16))
        lo, hi = float(logs.min()), float(logs.max())
        span = hi - lo if hi > lo else 1.0
        out.append('<g class="heat">')
        for z, v in zip(pts, logs):
            out.append(f'<rect x="{_f(z.real - cell / 2)}" y="{_f(-z.imag - cell / 2)}" width="{_f(cell)}" '
                       f'height="{_f(cell)}" fill="{_color((v - lo) / span)}" fill-opacity="0.6"/>')
        out.append("</g>")
    out.append('<g class="set">')
    out += [_rect_path(r) for r in cset.rects]
    out += [_disc_path(d, "excluded") for d in cset.excluded_discs]
    out += [_disc_path(d, "added") for d in cset.added_discs]
    out.append("</g>")
    out.append('<g class="markers">')
    for z in zeta_zeros:
        out.append(f'<circle class="zeta-zero" cx="{_f(z.real)}" cy="{_f(-z.imag)}" r="{_f(marker)}"/>')
    for z in roots:
        out.append(f'<circle class="root" cx="{_f(z.real)}" cy="{_f(-z.imag)}" r="{_f(1.6 * marker)}" '
                   f'stroke-width="{_f(marker / 3)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def viewbox(svg: str) -> tuple[float, float, float, float]:
    start = svg.index('viewBox="') + len('viewBox="')
    vals = svg[start:svg.index('"', start)].split()
    return tuple(float(v) for v in vals)

