"""Minimal SVG reliability diagram with log-log axes, no plotting dependency.

Renders the binned calibration curve (points plus 95% CI whiskers), the
diagonal, and optionally a theoretical curve, with both axes log-scaled the
way the companion figures present them.  CSV output remains the canonical
artifact; this is a visual aid only.
"""

import math

MARGIN = 56.0
PLOT = 432.0
SIZE = PLOT + 2 * MARGIN
MIN_FLOOR_DECADE = -6


def _collect_positive(values):
    return [v for v in values if v > 0.0 and math.isfinite(v)]


def _floor_decade(curve, theoretical):
    candidates = _collect_positive(curve.mean_score) + _collect_positive(curve.freq)
    candidates += _collect_positive(curve.lo)
    if theoretical is not None:
        scores, freqs = theoretical
        candidates += _collect_positive(scores) + _collect_positive(freqs)
    if not candidates:
        return -2
    return max(MIN_FLOOR_DECADE, math.floor(math.log10(min(candidates))))


def _projector(floor_decade):
    span = -float(floor_decade)

    def project(value):
        value = max(value, 10.0**floor_decade)
        frac = (math.log10(value) - floor_decade) / span
        return MARGIN + frac * PLOT

    return project


def render_reliability_svg(curve, theoretical=None, title="Reliability diagram"):
    """Return the diagram as an SVG document string."""
    floor = _floor_decade(curve, theoretical)
    px = _projector(floor)

    def xy(score, freq):
        return px(score), SIZE - px(freq)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0f}" height="{SIZE:.0f}" '
        f'viewBox="0 0 {SIZE:.0f} {SIZE:.0f}">',
        f'<rect width="{SIZE:.0f}" height="{SIZE:.0f}" fill="white"/>',
        f'<text x="{SIZE / 2:.1f}" y="24" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{title}</text>',
    ]

    # decade gridlines and labels on both axes
    for decade in range(floor, 1):
        pos = px(10.0**decade)
        label = f"1e{decade}" if decade else "1"
        parts.append(
            f'<line x1="{pos:.1f}" y1="{MARGIN:.1f}" x2="{pos:.1f}" y2="{MARGIN + PLOT:.1f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<line x1="{MARGIN:.1f}" y1="{SIZE - pos:.1f}" x2="{MARGIN + PLOT:.1f}" '
            f'y2="{SIZE - pos:.1f}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{pos:.1f}" y="{MARGIN + PLOT + 18:.1f}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{label}</text>'
        )
        parts.append(
            f'<text x="{MARGIN - 8:.1f}" y="{SIZE - pos + 4:.1f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{label}</text>'
        )
    parts.append(
        f'<rect x="{MARGIN:.1f}" y="{MARGIN:.1f}" width="{PLOT:.1f}" height="{PLOT:.1f}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{SIZE / 2:.1f}" y="{SIZE - 12:.1f}" text-anchor="middle" font-size="12" '
        'font-family="sans-serif">score</text>'
    )
    parts.append(
        f'<text x="16" y="{SIZE / 2:.1f}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 16 {SIZE / 2:.1f})">'
        "empirical frequency</text>"
    )

    # diagonal (a straight line in log-log space)
    x0, y0 = xy(10.0**floor, 10.0**floor)
    x1, y1 = xy(1.0, 1.0)
    parts.append(
        f'<line x1="{x0:.1f}" y1="{y0:.1f}" x2="{x1:.1f}" y2="{y1:.1f}" '
        'stroke="#888888" stroke-width="1" stroke-dasharray="5,4"/>'
    )

    if theoretical is not None:
        scores, freqs = theoretical
        points = " ".join(
            f"{px(s):.1f},{SIZE - px(f):.1f}" for s, f in zip(scores, freqs)
        )
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
        )

    for score, freq, lo, hi in zip(curve.mean_score, curve.freq, curve.lo, curve.hi):
        x = px(score)
        parts.append(
            f'<line x1="{x:.1f}" y1="{SIZE - px(hi):.1f}" x2="{x:.1f}" '
            f'y2="{SIZE - px(lo):.1f}" stroke="#d62728" stroke-width="1"/>'
        )
        parts.append(
            f'<circle cx="{x:.1f}" cy="{SIZE - px(freq):.1f}" r="3.5" fill="#d62728"/>'
        )

    parts.append("</svg>")
    return "\n".join(parts)


def write_reliability_svg(path, curve, theoretical=None, title="Reliability diagram"):
    with open(path, "w") as handle:
        handle.write(render_reliability_svg(curve, theoretical=theoretical, title=title))
