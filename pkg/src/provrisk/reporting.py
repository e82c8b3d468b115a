"""Report emission: breakdown tables, ranking payloads and the bar chart.

All internal arithmetic stays at full double precision; rounding to two
decimals happens only here, at the presentation edge. JSON payloads keep
full precision and deterministic key order so byte-stable output is just
``json.dumps`` away.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

from .core import RiskReport, RiskFactor

CHART_SERIES = (
    ("weight", "alpha", "#4e79a7"),
    ("relevance", "beta", "#f28e2b"),
    ("contribution", "gamma", "#59a14f"),
)


def round2(value: float) -> str:
    """Half-up two-decimal presentation, e.g. 0.015003 -> '0.02'."""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def factor_names(catalog: tuple[RiskFactor, ...]) -> dict[str, str]:
    return {factor.id: factor.name for factor in catalog}


def report_payload(report: RiskReport, names: dict[str, str]) -> dict:
    """Full-precision JSON-able report, factors in profile order."""
    return {
        "provider_id": report.provider_id,
        "r": report.risk,
        "factors": [
            {
                "id": fid,
                "name": names.get(fid, fid),
                "alpha": alpha,
                "beta": beta,
                "gamma": gamma,
            }
            for fid, alpha, beta, gamma in zip(
                report.factor_ids, report.weights, report.relevance, report.contributions
            )
        ],
    }


def ranking_payload(
    reports: list[RiskReport], names: dict[str, str], direction: str
) -> dict:
    return {
        "direction": direction,
        "ranking": [report_payload(report, names) for report in reports],
    }


def ranking_table(reports: list[RiskReport]) -> str:
    """Plain-text ranking, risk at two decimals."""
    width = max([len("provider_id")] + [len(r.provider_id) for r in reports])
    lines = [f"{'provider_id':<{width}}  r"]
    for report in reports:
        lines.append(f"{report.provider_id:<{width}}  {round2(report.risk)}")
    return "\n".join(lines) + "\n"


def ranking_csv(reports: list[RiskReport]) -> str:
    lines = ["provider_id,r"]
    for report in reports:
        lines.append(f"{report.provider_id},{round2(report.risk)}")
    return "\n".join(lines) + "\n"


def breakdown_csv(report: RiskReport, names: dict[str, str]) -> str:
    """Per-factor weight/relevance/contribution table at two decimals."""
    lines = ["factor,alpha,beta,gamma"]
    for fid, alpha, beta, gamma in zip(
        report.factor_ids, report.weights, report.relevance, report.contributions
    ):
        lines.append(
            f"{names.get(fid, fid)},{round2(alpha)},{round2(beta)},{round2(gamma)}"
        )
    return "\n".join(lines) + "\n"


def breakdown_svg(report: RiskReport, names: dict[str, str]) -> str:
    """Grouped bar chart: one weight/relevance/contribution triple per factor.

    Emitted structurally (one <g class="factor-group"> per factor, three
    <rect class="bar ..."> each) so tests can count bars instead of pixels.
    """
    m = len(report.factor_ids)
    bar_w = 18
    gap = 6
    group_w = 3 * bar_w + 2 * gap
    group_gap = 28
    margin_left = 56
    margin_top = 24
    plot_h = 260
    label_h = 110
    width = margin_left + m * (group_w + group_gap) + 20
    height = margin_top + plot_h + label_h
    triples = list(zip(report.weights, report.relevance, report.contributions))
    peak = max(value for triple in triples for value in triple)
    y_max = peak * 1.1 if peak > 0 else 1.0

    def bar_y(value: float) -> float:
        return margin_top + plot_h * (1.0 - value / y_max)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<line x1="{margin_left}" y1="{margin_top + plot_h}" x2="{width - 10}" '
        f'y2="{margin_top + plot_h}" stroke="#555"/>',
        f'<line x1="{margin_left}" y1="{margin_top}" x2="{margin_left}" '
        f'y2="{margin_top + plot_h}" stroke="#555"/>',
    ]
    for tick in (0.0, y_max / 2.0, y_max):
        y = bar_y(tick)
        parts.append(
            f'<text x="{margin_left - 6}" y="{y + 4:.1f}" text-anchor="end" '
            f'fill="#555">{round2(tick)}</text>'
        )
    for i, (fid, triple) in enumerate(zip(report.factor_ids, triples)):
        group_x = margin_left + group_gap / 2 + i * (group_w + group_gap)
        bars = []
        for j, ((series, _, color), value) in enumerate(zip(CHART_SERIES, triple)):
            x = group_x + j * (bar_w + gap)
            y = bar_y(value)
            h = margin_top + plot_h - y
            bars.append(
                f'<rect class="bar {series}" x="{x:.1f}" y="{y:.1f}" width="{bar_w}" '
                f'height="{h:.1f}" fill="{color}"><title>{round2(value)}</title></rect>'
            )
        label_x = group_x + group_w / 2
        label_y = margin_top + plot_h + 14
        bars.append(
            f'<text class="factor-label" x="{label_x:.1f}" y="{label_y}" '
            f'text-anchor="end" transform="rotate(-40 {label_x:.1f} {label_y})" '
            f'fill="#333">{names.get(fid, fid)}</text>'
        )
        parts.append(f'<g class="factor-group" data-factor="{fid}">' + "".join(bars) + "</g>")
    legend_y = height - 16
    legend_x = margin_left
    for series, symbol, color in CHART_SERIES:
        parts.append(
            f'<rect x="{legend_x}" y="{legend_y - 10}" width="12" height="12" fill="{color}"/>'
            f'<text x="{legend_x + 16}" y="{legend_y}" fill="#333">{series} ({symbol})</text>'
        )
        legend_x += 150
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
