"""Tail plots as plain SVG text.

Two panels share one layout: the lower tail ``P(R < -x)`` and the upper
tail ``P(R > x)`` against ``x >= 0`` on a log probability axis.  Each panel
shows the empirical points and one curve per fitted family.  The output
is deterministic for a given input.
"""

import math
from xml.sax.saxutils import escape

import numpy as np
from scipy import stats as st

from . import returns as rp, stable

PANEL_W, PANEL_H = 420, 320
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60, 20, 30, 45
N_CURVE = 160
COLORS = {"normal": "#1f77b4", "stable": "#2ca02c", "kappa": "#d62728"}


def empirical_tail(returns, side):
    """``(x, p)`` with ``p_i = i / n``: the fraction of returns beyond ``x_i`` (inclusive)."""
    r = np.asarray(returns, dtype=float)
    n = r.size
    mags = np.sort(-r[r < 0] if side == "neg" else r[r > 0])[::-1]
    return mags, np.arange(1, mags.size + 1) / n


def model_tails(report, x):
    """Tail probabilities of every fitted family at magnitudes ``x > 0``, per side."""
    out = {"neg": {}, "pos": {}}
    fits = report.fits
    if "normal" in fits:
        p = fits["normal"].params
        out["neg"]["normal"] = st.norm.cdf(-x, p.mu, p.sigma)
        out["pos"]["normal"] = st.norm.sf(x, p.mu, p.sigma)
    if "stable" in fits:
        p = fits["stable"].params
        out["neg"]["stable"] = stable.cdf(-x, p)
        out["pos"]["stable"] = stable.sf(x, p)
    if "kappa_neg" in fits and "kappa_pos" in fits:
        zm = report.zero_count / report.n_returns
        neg, pos = fits["kappa_neg"].params, fits["kappa_pos"].params
        out["neg"]["kappa"] = rp.composite_tail(-x, report.q, neg, pos, zm)
        out["pos"]["kappa"] = rp.composite_tail(x, report.q, neg, pos, zm)
    return out


def _fmt(v):
    return f"{v:.2f}"


def _panel(side, xs, ps, x_grid, curves, y_min, x_max, offset_x):
    w = PANEL_W - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B
    lo, hi = math.log10(y_min), 0.0

    def sx(v):
        return MARGIN_L + w * v / x_max

    def sy(p):
        return MARGIN_T + h * (hi - math.log10(p)) / (hi - lo)

    title = "P(R < -x)" if side == "neg" else "P(R > x)"
    parts = [f'<g class="panel" id="panel-{side}" transform="translate({offset_x},0)">',
             f'<rect class="frame" x="{MARGIN_L}" y="{MARGIN_T}" width="{w}" height="{h}" '
             'fill="none" stroke="#000"/>',
             f'<text x="{MARGIN_L + w / 2:.2f}" y="{MARGIN_T - 10}" text-anchor="middle">'
             f'{escape(title)}</text>',
             f'<text x="{MARGIN_L + w / 2:.2f}" y="{PANEL_H - 8}" text-anchor="middle">x</text>']
    for k in range(math.ceil(lo), 1):
        y = sy(10.0 ** k)
        parts.append(f'<line class="ytick" x1="{MARGIN_L - 4}" y1="{_fmt(y)}" x2="{MARGIN_L}" '
                     f'y2="{_fmt(y)}" stroke="#000"/>')
        parts.append(f'<text x="{MARGIN_L - 6}" y="{_fmt(y + 4)}" text-anchor="end" '
                     f'font-size="10">1e{k}</text>')
    for k in range(5):
        v = x_max * k / 4
        parts.append(f'<text x="{_fmt(sx(v))}" y="{MARGIN_T + h + 14}" text-anchor="middle" '
                     f'font-size="10">{v:.3g}</text>')

    parts.append('<g class="empirical">')
    for x, p in zip(xs, ps):
        parts.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(p))}" r="1.5" fill="#555"/>')
    parts.append("</g>")

    for i, (family, values) in enumerate(curves.items()):
        keep = np.isfinite(values) & (values >= y_min)
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(min(p, 1.0)))}"
                       for x, p in zip(x_grid[keep], values[keep]))
        parts.append(f'<polyline class="curve" data-family="{family}" fill="none" '
                     f'stroke="{COLORS[family]}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN_T + 14 + 14 * i
        parts.append(f'<text class="legend" x="{MARGIN_L + w - 6}" y="{ly}" text-anchor="end" '
                     f'font-size="11" fill="{COLORS[family]}">{family}</text>')
    parts.append("</g>")
    return "\n".join(parts)


def tail_plot_svg(returns, report):
    """SVG document with the two tail panels for ``returns`` and a fitted ``report``.

    The probability axis starts at ``1 / (2n)``; model curves are clipped there.
    """
    r = np.asarray(returns, dtype=float)
    y_min = 1.0 / (2 * r.size)
    x_max = float(np.max(np.abs(r))) * 1.05
    x_grid = np.linspace(x_max / N_CURVE, x_max, N_CURVE)
    models = model_tails(report, x_grid)
    body = []
    for i, side in enumerate(("neg", "pos")):
        xs, ps = empirical_tail(r, side)
        body.append(_panel(side, xs, ps, x_grid, models[side], y_min, x_max, i * PANEL_W))
    width, height = 2 * PANEL_W, PANEL_H
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif">')
    return "\n".join([head, f"<title>{escape(report.ticker)}</title>", *body, "</svg>"]) + "\n"
