"""Template text rendering for facts: numbers, dates, and per-type sentences."""

from __future__ import annotations

from datetime import date

from .facts import ComparisonType, Fact, InsightType


class TemplateHole(Exception):
    """Fact is missing a field its template requires."""


_MONTHS = [
    "Jan.", "Feb.", "Mar.", "Apr.", "May", "Jun.",
    "Jul.", "Aug.", "Sep.", "Oct.", "Nov.", "Dec.",
]


def ordinal(day: int) -> str:
    if 11 <= day % 100 <= 13:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(day % 10, "th")
    return f"{day}{suffix}"


def fmt_date(d: date) -> str:
    return f"{_MONTHS[d.month - 1]} {ordinal(d.day)}"


def fmt_date_range(start: date, end: date) -> str:
    """"Oct. 21st and 26th" within one month, month repeated otherwise."""
    if start.month == end.month and start.year == end.year:
        return f"{fmt_date(start)} and {ordinal(end.day)}"
    return f"{fmt_date(start)} and {fmt_date(end)}"


def fmt_number(value: float) -> str:
    """Thousands separators; integral values drop the decimal point."""
    if float(value).is_integer():
        return f"{int(value):,}"
    return f"{value:,.10f}".rstrip("0").rstrip(".")


def _need(fact: Fact, what: str, ok: bool) -> None:
    if not ok:
        raise TemplateHole(f"{fact.insight_type.code} fact missing {what}")


def _series_label(fact: Fact, which: int = 0) -> str:
    """Display label of a plotted series.

    Dimension-split series read "Sentiment [Negative]"; otherwise the metric
    name itself is the label.
    """
    if fact.dimension_values and fact.dimensions:
        return f"{fact.dimensions[0]} [{fact.dimension_values[which]}]"
    _need(fact, "metric", bool(fact.metrics))
    return fact.metrics[min(which, len(fact.metrics) - 1)]


def _metric_clause(fact: Fact) -> str:
    _need(fact, "metric", bool(fact.metrics))
    clause = f"'{fact.metrics[0]}'"
    if fact.filter_segment:
        col, val = fact.filter_segment
        clause += f" of '{col}' for '{val}'"
    return clause


def _join_quoted(values: tuple[str, ...]) -> str:
    quoted = [f"'{v}'" for v in values]
    if len(quoted) == 1:
        return quoted[0]
    return ", ".join(quoted[:-1]) + " and " + quoted[-1]


def _single_date(fact: Fact) -> date:
    points = [r for r in fact.date_refs if isinstance(r, date)]
    _need(fact, "date point", bool(points))
    return points[0]


def _date_range(fact: Fact) -> tuple[date, date]:
    ranges = [r for r in fact.date_refs if isinstance(r, tuple)]
    _need(fact, "date range", bool(ranges))
    return ranges[0]


def _render_extreme(fact: Fact) -> str:
    if fact.comparison_type is ComparisonType.Total:
        # Bar-family extreme: share of the category total.
        _need(fact, "dimension value", bool(fact.dimension_values))
        _need(fact, "value number", any(k == "value" for k, _ in fact.numbers))
        word = {
            InsightType.Maximum: "greatest",
            InsightType.HighestBar: "highest",
            InsightType.Minimum: "smallest",
        }[fact.insight_type]
        return (
            f"'{fact.dimension_values[0]}' had the {word} value, "
            f"with {fmt_number(fact.number('value'))} in {_metric_clause(fact)} "
            f"({fact.percentage}% in total)"
        )
    # Line-family extreme: dated point compared against the series average.
    _need(fact, "value/avg numbers", {"value", "avg"} <= {k for k, _ in fact.numbers})
    low = fact.insight_type is InsightType.Minimum
    return (
        f"The {'lowest' if low else 'highest'} amount of '{_series_label(fact)}' "
        f"of {fmt_number(fact.number('value'))} appeared on {fmt_date(_single_date(fact))}, "
        f"{fact.percentage}% {'less' if low else 'more'} than the average of "
        f"{fmt_number(fact.number('avg'))}"
    )


def render_text(fact: Fact) -> str:
    """Render a fact into its one-sentence natural-language insight."""
    t = fact.insight_type

    if t in (InsightType.Minimum, InsightType.Maximum, InsightType.HighestBar):
        return _render_extreme(fact)

    if t is InsightType.Skew:
        _need(fact, "two dimension values", len(fact.dimension_values) >= 2)
        return (
            f"The values of {_metric_clause(fact)} are highly skewed towards "
            f"'{fact.dimension_values[0]}' and '{fact.dimension_values[1]}' "
            f"({fact.percentage}% in total)"
        )

    if t is InsightType.LongTail:
        _need(fact, "dimension values", bool(fact.dimension_values))
        return (
            f"The distribution of {_metric_clause(fact)} shows a long tail: "
            f"{_join_quoted(fact.dimension_values)} account for only "
            f"{fact.percentage}% in total"
        )

    if t is InsightType.Spike:
        start, end = _date_range(fact)
        return (
            f"'{_series_label(fact)}' grew significantly between "
            f"{fmt_date_range(start, end)}, up by {fact.percentage}% from "
            f"{fmt_number(fact.number('from'))} to {fmt_number(fact.number('to'))}"
        )

    if t is InsightType.Decline:
        start, end = _date_range(fact)
        return (
            f"'{_series_label(fact)}' significantly decreased in the span between "
            f"{fmt_date_range(start, end)}, declining by {fact.percentage}% from "
            f"{fmt_number(fact.number('from'))} to {fmt_number(fact.number('to'))}"
        )

    if t is InsightType.Trend:
        start, end = _date_range(fact)
        rising = fact.number("to") >= fact.number("from")
        return (
            f"The values of '{_series_label(fact)}' trended "
            f"{'upward' if rising else 'downward'} between {fmt_date_range(start, end)}, "
            f"changing by {fact.percentage}% from {fmt_number(fact.number('from'))} "
            f"to {fmt_number(fact.number('to'))}"
        )

    if t is InsightType.MaxExtent:
        _need(fact, "min/max numbers", {"min", "max"} <= {k for k, _ in fact.numbers})
        return (
            f"The values of '{_series_label(fact)}' reached a max extent of "
            f"{fmt_number(fact.number('extent'))}, ranging from "
            f"{fmt_number(fact.number('min'))} to {fmt_number(fact.number('max'))} "
            f"({fact.percentage}% of the peak)"
        )

    if t is InsightType.Seasonality:
        _need(fact, "lag number", any(k == "lag" for k, _ in fact.numbers))
        return (
            f"The values of '{_series_label(fact)}' repeat in a cycle of "
            f"{fmt_number(fact.number('lag'))} periods ({fact.percentage}% match "
            f"between cycles)"
        )

    if t is InsightType.Anomaly:
        more = fact.comparison_type is ComparisonType.MoreThan
        return (
            f"An unusual value of {fmt_number(fact.number('value'))} for "
            f"'{_series_label(fact)}' appeared on {fmt_date(_single_date(fact))}, "
            f"{fact.percentage}% {'more' if more else 'less'} than the average of "
            f"{fmt_number(fact.number('avg'))}"
        )

    if t is InsightType.Correlation:
        first = _series_label(fact, 0)
        second = _series_label(fact, 1)
        _need(fact, "two series", first != second)
        positive = fact.number("direction") >= 0
        return (
            f"The values of '{first}' and '{second}' are strongly "
            f"{'positively' if positive else 'negatively'} correlated"
        )

    raise TemplateHole(f"no template for {t!r}")  # pragma: no cover
