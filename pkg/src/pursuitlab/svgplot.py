"""Dependency-free SVG charts: multi-series line plots and heat-map grids.

Only two chart families are needed by the experiment harness, so this stays
deliberately small: ``line_chart`` draws series of (x, y) points with
markers, axes, ticks, and a legend; ``heat_grid`` draws a matrix of heat-map
panels sharing one color scale, used for error surfaces over a two-parameter
grid.  Both return the SVG document as a string and optionally write it.

Data-point markers are ``<circle>`` elements and nothing else is, so marker
counts are testable; legend swatches are rectangles.
"""

import math
from xml.sax.saxutils import escape

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
)

_VIRIDIS = (
    (0.000, (68, 1, 84)),
    (0.125, (71, 44, 122)),
    (0.250, (59, 81, 139)),
    (0.375, (44, 113, 142)),
    (0.500, (33, 144, 141)),
    (0.625, (39, 173, 129)),
    (0.750, (92, 200, 99)),
    (0.875, (170, 220, 50)),
    (1.000, (253, 231, 37)),
)


def color_for(i):
    """Stable series color by index."""
    return PALETTE[i % len(PALETTE)]


def heat_color(t):
    """Hex color for t in [0, 1] on a dark-to-bright perceptual ramp."""
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(_VIRIDIS, _VIRIDIS[1:]):
        if t <= t1:
            w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            r, g, b = (round(a + w * (b_ - a)) for a, b_ in zip(c0, c1))
            return f"#{r:02x}{g:02x}{b:02x}"
    return "#fde725"


def _fmt(v):
    """Short human-readable tick label."""
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.0e}".replace("e-0", "e-").replace("e+0", "e")
    return f"{v:g}"


def _nice_ticks(lo, hi, target=5):
    """Round tick positions covering [lo, hi] using a 1-2-5 progression."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < step * 1e-6 else t)
        t += step
    return ticks


def _log_ticks(lo, hi):
    """Powers of ten spanning [lo, hi] (both positive)."""
    lo_exp = math.floor(math.log10(lo))
    hi_exp = math.ceil(math.log10(hi))
    return [10.0 ** e for e in range(lo_exp, hi_exp + 1)]


class _Doc:
    """Accumulates SVG elements and renders the final document."""

    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.parts = []

    def add(self, element):
        self.parts.append(element)

    def line(self, x1, y1, x2, y2, stroke="#333", width=1.0):
        self.add(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{width}"/>'
        )
    def rect(self, x, y, w, h, fill, stroke="none"):
        self.add(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def circle(self, cx, cy, r, fill):
        self.add(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r}" fill="{fill}"/>')

    def text(self, x, y, s, size=11, anchor="start", fill="#222", rotate=None):
        transform = (
            f' transform="rotate({rotate} {x:.2f} {y:.2f})"' if rotate else ""
        )
        self.add(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}" '
            f'fill="{fill}"{transform}>{escape(s)}</text>'
        )

    def polyline(self, points, stroke, width=1.5):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self.add(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"/>'
        )

    def render(self):
        body = "\n".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} '
            f'{self.height}">\n'
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" '
            f'fill="white"/>\n{body}\n</svg>\n'
        )


def _data_ranges(series, logy):
    xs = [x for _, sx, _ in series for x in sx]
    ys = [y for _, _, sy in series for y in sy]
    if logy:
        ys = [max(y, 1e-16) for y in ys]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        pad = abs(y_hi) * 0.5 or 0.5
        y_lo, y_hi = y_lo - pad, y_hi + pad
    elif not logy:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
        if y_lo < 0 and min(ys) >= 0:
            y_lo = 0.0
    return x_lo, x_hi, y_lo, y_hi


def line_chart(series, title="", xlabel="", ylabel="", logy=False,
               width=640, height=420, path=None):
    """Render line series with markers, axes, and a legend.

    Parameters
    ----------
    series : list of (label, xs, ys)
        One entry per plotted line; xs and ys are equal-length sequences.
    title, xlabel, ylabel : str
    logy : bool
        Base-10 logarithmic y axis; y values are floored at 1e-16.
    width, height : int
        Canvas size in pixels.
    path : str or Path, optional
        When given, the document is also written there.

    Returns
    -------
    str
        The SVG document.
    """
    if not series or any(len(sx) == 0 or len(sx) != len(sy)
                         for _, sx, sy in series):
        raise ValueError("each series needs equally many x and y values")
    doc = _Doc(width, height)
    left, right, top, bottom = 64, 160, 34, 48
    px_w = width - left - right
    px_h = height - top - bottom
    x_lo, x_hi, y_lo, y_hi = _data_ranges(series, logy)

    if logy:
        y_ticks = _log_ticks(y_lo, y_hi)
        y_lo, y_hi = min(y_ticks + [y_lo]), max(y_ticks + [y_hi])
        ty_lo, ty_hi = math.log10(y_lo), math.log10(y_hi)

        def y_px(v):
            t = (math.log10(max(v, 1e-16)) - ty_lo) / (ty_hi - ty_lo)
            return top + px_h * (1.0 - t)
    else:
        y_ticks = _nice_ticks(y_lo, y_hi)

        def y_px(v):
            return top + px_h * (1.0 - (v - y_lo) / (y_hi - y_lo))

    x_ticks = _nice_ticks(x_lo, x_hi)

    def x_px(v):
        return left + px_w * (v - x_lo) / (x_hi - x_lo)

    # frame and ticks
    doc.rect(left, top, px_w, px_h, fill="none", stroke="#333")
    for t in x_ticks:
        if x_lo <= t <= x_hi:
            doc.line(x_px(t), top + px_h, x_px(t), top + px_h + 4)
            doc.text(x_px(t), top + px_h + 16, _fmt(t), anchor="middle")
    for t in y_ticks:
        if y_lo <= t <= y_hi:
            doc.line(left - 4, y_px(t), left, y_px(t))
            doc.line(left, y_px(t), left + px_w, y_px(t),
                     stroke="#ddd", width=0.5)
            doc.text(left - 7, y_px(t) + 4, _fmt(t), anchor="end")

    if title:
        doc.text(width / 2, 18, title, size=13, anchor="middle")
    if xlabel:
        doc.text(left + px_w / 2, height - 10, xlabel, anchor="middle")
    if ylabel:
        doc.text(16, top + px_h / 2, ylabel, anchor="middle", rotate=-90)

    for i, (label, sx, sy) in enumerate(series):
        color = color_for(i)
        pts = [(x_px(x), y_px(y)) for x, y in zip(sx, sy)]
        if len(pts) > 1:
            doc.polyline(pts, stroke=color)
        for cx, cy in pts:
            doc.circle(cx, cy, 2.5, fill=color)

    # legend outside the plot area, one swatch per series
    lx = left + px_w + 12
    ly = top + 6
    for i, (label, _, _) in enumerate(series):
        doc.rect(lx, ly + 18 * i - 9, 12, 12, fill=color_for(i))
        doc.text(lx + 17, ly + 18 * i + 1, str(label))

    out = doc.render()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(out)
    return out


def heat_grid(row_keys, col_keys, panels, x_vals, y_vals, title="",
              xlabel="", ylabel="", row_title="", path=None):
    """Render a grid of heat-map panels with one shared color scale.

    Parameters
    ----------
    row_keys, col_keys : sequences
        Panel-grid coordinates; row labels are ``row_title=<key>`` strings
        and column labels the column keys themselves.
    panels : dict
        Maps (row_key, col_key) to a 2-d array of shape
        (len(y_vals), len(x_vals)) of values to colorize.
    x_vals, y_vals : sequences of float
        Cell-center coordinates within every panel, ascending.
    title, xlabel, ylabel, row_title : str
    path : str or Path, optional

    Returns
    -------
    str
        The SVG document.
    """
    if not row_keys or not col_keys:
        raise ValueError("need at least one row and one column of panels")
    values = [
        v
        for key in panels
        for row in panels[key]
        for v in row
    ]
    v_lo, v_hi = min(values), max(values)
    span = v_hi - v_lo or 1.0

    panel_w, panel_h = 150, 112
    gap, left, top = 18, 96, 56
    width = left + len(col_keys) * (panel_w + gap) + 84
    height = top + len(row_keys) * (panel_h + gap) + 46
    doc = _Doc(width, height)
    if title:
        doc.text(width / 2, 22, title, size=13, anchor="middle")

    cell_w = panel_w / len(x_vals)
    cell_h = panel_h / len(y_vals)
    for r, rk in enumerate(row_keys):
        py = top + r * (panel_h + gap)
        row_label = f"{row_title}={rk}" if row_title else str(rk)
        doc.text(left - 10, py + panel_h / 2 + 4, row_label, anchor="end")
        for c, ck in enumerate(col_keys):
            px = left + c * (panel_w + gap)
            if r == 0:
                doc.text(px + panel_w / 2, top - 8, str(ck),
                         size=12, anchor="middle")
            grid = panels[(rk, ck)]
            for iy in range(len(y_vals)):
                for ix in range(len(x_vals)):
                    t = (float(grid[iy][ix]) - v_lo) / span
                    doc.rect(px + ix * cell_w,
                             py + panel_h - (iy + 1) * cell_h,
                             cell_w + 0.5, cell_h + 0.5, fill=heat_color(t))
            doc.rect(px, py, panel_w, panel_h, fill="none", stroke="#333")
            if r == len(row_keys) - 1:
                doc.text(px, py + panel_h + 14, _fmt(x_vals[0]), size=9)
                doc.text(px + panel_w, py + panel_h + 14, _fmt(x_vals[-1]),
                         size=9, anchor="end")
        doc.text(left - 58, py + panel_h, _fmt(y_vals[0]), size=9)
        doc.text(left - 58, py + 8, _fmt(y_vals[-1]), size=9)

    if xlabel:
        doc.text(left + (len(col_keys) * (panel_w + gap) - gap) / 2,
                 height - 12, xlabel, anchor="middle")
    if ylabel:
        doc.text(20, top + (len(row_keys) * (panel_h + gap) - gap) / 2,
                 ylabel, anchor="middle", rotate=-90)

    # shared color bar
    bar_x = left + len(col_keys) * (panel_w + gap) + 8
    bar_h = panel_h
    for i in range(32):
        t = i / 31.0
        doc.rect(bar_x, top + bar_h * (1 - (i + 1) / 32.0), 14,
                 bar_h / 32.0 + 0.5, fill=heat_color(t))
    doc.rect(bar_x, top, 14, bar_h, fill="none", stroke="#333")
    doc.text(bar_x + 18, top + 8, _fmt(v_hi), size=9)
    doc.text(bar_x + 18, top + bar_h, _fmt(v_lo), size=9)

    out = doc.render()
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(out)
    return out
