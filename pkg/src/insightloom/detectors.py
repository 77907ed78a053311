"""Statistical fact detectors over table views.

Twelve detectors grouped by chart category: bar-family detectors look at
category shares, line-family detectors at ordered (usually dated) series,
and multi-line views additionally get cross-series correlation. Thresholds
that gate on a percentage compare the rounded integer percent, i.e. what
the rendered sentence will say.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from datetime import date

from .facts import ChartCategory, ComparisonType, Fact, InsightType
from .model import Series, TableView, Whole


class TooShort(Exception):
    """View has fewer than two rows; nothing can be detected."""


@dataclass(frozen=True)
class DetectorConfig:
    skew_min_skewness: float = 0.5
    long_tail_max_pct: int = 20
    seasonality_min_autocorr: float = 0.5
    trend_min_pct: int = 10
    swing_min_pct: int = 10
    swing_window: int = 7
    anomaly_min_zscore: float = 3.0
    correlation_min_abs_r: float = 0.7
    extent_min_pct: int = 10


def round_half_up(x: float) -> int:
    """Round to nearest integer, halves away from zero-ward .5 up."""
    return math.floor(x + 0.5)


def pct_of(part: float, whole: float) -> int:
    return round_half_up(part / whole * 100.0)


def _bounded_pct(part: float, whole: float) -> int | None:
    pct = pct_of(part, whole)
    return pct if 0 <= pct <= 100 else None


def skewness(values: list[float]) -> float:
    """Population moment skewness g1 = m3 / m2^(3/2)."""
    n = len(values)
    mu = sum(values) / n
    m2 = sum((v - mu) ** 2 for v in values) / n
    if m2 == 0:
        return 0.0
    m3 = sum((v - mu) ** 3 for v in values) / n
    return m3 / m2**1.5


def autocorrelation(values: list[float], lag: int) -> float:
    n = len(values)
    mu = sum(values) / n
    denom = sum((v - mu) ** 2 for v in values)
    if denom == 0:
        return 0.0
    num = sum((values[t] - mu) * (values[t + lag] - mu) for t in range(n - lag))
    return num / denom


def pearson(xs: list[float], ys: list[float]) -> float:
    try:
        return statistics.correlation(xs, ys)
    except statistics.StatisticsError:
        return 0.0


def _axis_date(view: TableView, ix: int) -> date:
    v = view.axis_values[ix]
    if not isinstance(v, date):
        raise TypeError(f"axis value {v!r} is not a date")
    return v


def native_round(value: float, series_values: tuple[float, ...]) -> float:
    """Round a derived statistic to the series' native display precision.

    Integer series display integral stats; otherwise three decimals. The
    rounded value is what both the rendered text and the fact carry, so
    grounding stays exact.
    """
    if all(float(v).is_integer() for v in series_values):
        return float(round_half_up(value))
    return round(value, 3)


def _base_fields(view: TableView, s: Series) -> dict:
    return {
        "panel_id": view.panel_id,
        "metrics": (s.metric,),
        "dimensions": view.dimensions,
        "filter_segment": s.segment,
        "table_column": s.table_column,
    }


def _split_values(s: Series) -> tuple[str, ...]:
    return (s.split_value,) if s.split_value is not None else ()


# --- bar-family detectors (category shares) ---------------------------------


def _bar_extreme(view: TableView, s: Series, kind: InsightType) -> Fact | None:
    total = sum(s.values)
    if total <= 0:
        return None
    pick = min if kind is InsightType.Minimum else max
    target = pick(s.values)
    ix = s.values.index(target)
    return Fact(
        insight_type=kind,
        comparison_type=ComparisonType.Total,
        dimension_values=(str(view.axis_values[ix]),),
        numbers=(("value", native_round(target, s.values)),),
        percentage=pct_of(target, total),
        **_base_fields(view, s),
    )


def _skew(view: TableView, s: Series, cfg: DetectorConfig) -> Fact | None:
    if len(s.values) < 3:
        return None
    total = sum(s.values)
    if total <= 0:
        return None
    shares = [v / total for v in s.values]
    if skewness(shares) < cfg.skew_min_skewness:
        return None
    order = sorted(range(len(s.values)), key=lambda i: (-s.values[i], i))
    top = order[:2]
    return Fact(
        insight_type=InsightType.Skew,
        comparison_type=ComparisonType.Total,
        dimension_values=tuple(str(view.axis_values[i]) for i in top),
        percentage=pct_of(sum(s.values[i] for i in top), total),
        **_base_fields(view, s),
    )


def _long_tail(view: TableView, s: Series, cfg: DetectorConfig) -> Fact | None:
    k = len(s.values)
    if k < 3:
        return None
    total = sum(s.values)
    if total <= 0:
        return None
    m = math.ceil(k / 2)
    order = sorted(range(k), key=lambda i: (s.values[i], i))
    bottom = order[:m]
    pct = pct_of(sum(s.values[i] for i in bottom), total)
    if pct > cfg.long_tail_max_pct:
        return None
    return Fact(
        insight_type=InsightType.LongTail,
        comparison_type=ComparisonType.Total,
        dimension_values=tuple(str(view.axis_values[i]) for i in bottom),
        percentage=pct,
        **_base_fields(view, s),
    )


def _detect_bar_series(view: TableView, s: Series, cfg: DetectorConfig) -> list[Fact]:
    facts = [
        _bar_extreme(view, s, InsightType.Minimum),
        _bar_extreme(view, s, InsightType.Maximum),
        _bar_extreme(view, s, InsightType.HighestBar),
        _skew(view, s, cfg),
        _long_tail(view, s, cfg),
    ]
    return [f for f in facts if f is not None]


# --- line-family detectors (ordered series) ----------------------------------


def _line_extreme(view: TableView, s: Series, kind: InsightType) -> Fact | None:
    mu = statistics.fmean(s.values)
    if mu <= 0:
        return None
    pick = min if kind is InsightType.Minimum else max
    target = pick(s.values)
    ix = s.values.index(target)
    pct = _bounded_pct(abs(target - mu), mu)
    if pct is None:
        return None
    return Fact(
        insight_type=kind,
        comparison_type=ComparisonType.VsAverage,
        dimension_values=_split_values(s),
        date_refs=(_axis_date(view, ix),),
        numbers=(("value", target), ("avg", native_round(mu, s.values))),
        percentage=pct,
        **_base_fields(view, s),
    )


def _max_extent(view: TableView, s: Series, cfg: DetectorConfig) -> Fact | None:
    lo, hi = min(s.values), max(s.values)
    if lo <= 0:
        return None
    # Extent as share of the peak keeps the percentage within [0, 100].
    pct = pct_of(hi - lo, hi)
    if pct < cfg.extent_min_pct:
        return None
    return Fact(
        insight_type=InsightType.MaxExtent,
        comparison_type=ComparisonType.MoreThan,
        dimension_values=_split_values(s),
        numbers=(("extent", native_round(hi - lo, s.values)), ("min", lo), ("max", hi)),
        percentage=pct,
        **_base_fields(view, s),
    )


def _trend(view: TableView, s: Series, cfg: DetectorConfig) -> Fact | None:
    n = len(s.values)
    if n < 3:
        return None
    first, last = s.values[0], s.values[-1]
    if first <= 0:
        return None
    slope = statistics.linear_regression(range(n), s.values).slope
    if slope == 0 or (slope > 0) != (last > first):
        return None
    pct = _bounded_pct(abs(last - first), first)
    if pct is None or pct < cfg.trend_min_pct:
        return None
    return Fact(
        insight_type=InsightType.Trend,
        comparison_type=ComparisonType.RelativeChange,
        dimension_values=_split_values(s),
        date_refs=((_axis_date(view, 0), _axis_date(view, n - 1)),),
        numbers=(("from", first), ("to", last)),
        percentage=pct,
        **_base_fields(view, s),
    )


def _best_swing(values: tuple[float, ...], window: int, rising: bool) -> tuple[int, int, float] | None:
    """Strongest monotone-envelope move within any `window` consecutive points.

    Returns (i, j, relative change) where values[i] and values[j] are the
    extremes of values[i..j]; change is relative to the starting value.
    """
    best: tuple[int, int, float] | None = None
    n = len(values)
    for i in range(n - 1):
        for j in range(i + 1, min(i + window, n)):
            span = values[i : j + 1]
            if rising:
                if values[i] != min(span) or values[j] != max(span):
                    continue
            else:
                if values[i] != max(span) or values[j] != min(span):
                    continue
            if values[i] <= 0:
                continue
            change = abs(values[j] - values[i]) / values[i]
            if best is None or change > best[2]:
                best = (i, j, change)
    return best


def _swing(view: TableView, s: Series, cfg: DetectorConfig, rising: bool) -> Fact | None:
    if len(s.values) < 3:
        return None
    found = _best_swing(s.values, cfg.swing_window, rising)
    if found is None:
        return None
    i, j, change = found
    pct = round_half_up(change * 100.0)
    if pct < cfg.swing_min_pct or pct > 100:
        return None
    return Fact(
        insight_type=InsightType.Spike if rising else InsightType.Decline,
        comparison_type=ComparisonType.RelativeChange,
        dimension_values=_split_values(s),
        date_refs=((_axis_date(view, i), _axis_date(view, j)),),
        numbers=(("from", s.values[i]), ("to", s.values[j])),
        percentage=pct,
        **_base_fields(view, s),
    )


def _seasonality(view: TableView, s: Series, cfg: DetectorConfig) -> Fact | None:
    n = len(s.values)
    if n < 4:
        return None
    values = list(s.values)
    acfs = {lag: autocorrelation(values, lag) for lag in range(1, n // 2 + 2)}
    best_lag, best_acf = 0, 0.0
    for lag in range(2, n // 2 + 1):
        # A genuine cycle shows as a local acf peak; smooth trends only decay.
        if acfs[lag] <= acfs[lag - 1] or acfs[lag] < acfs.get(lag + 1, -2.0):
            continue
        if acfs[lag] > best_acf:
            best_lag, best_acf = lag, acfs[lag]
    if best_acf < cfg.seasonality_min_autocorr:
        return None
    return Fact(
        insight_type=InsightType.Seasonality,
        comparison_type=ComparisonType.MoreThan,
        dimension_values=_split_values(s),
        numbers=(("lag", float(best_lag)),),
        percentage=round_half_up(best_acf * 100.0),
        **_base_fields(view, s),
    )


def _anomaly(view: TableView, s: Series, cfg: DetectorConfig) -> Fact | None:
    if len(s.values) < 4:
        return None
    mu = statistics.fmean(s.values)
    sigma = statistics.pstdev(s.values)
    if sigma == 0 or mu <= 0:
        return None
    zs = [(v - mu) / sigma for v in s.values]
    ix = max(range(len(zs)), key=lambda i: (abs(zs[i]), -i))
    if abs(zs[ix]) < cfg.anomaly_min_zscore:
        return None
    value = s.values[ix]
    pct = _bounded_pct(abs(value - mu), mu)
    if pct is None:
        return None
    return Fact(
        insight_type=InsightType.Anomaly,
        comparison_type=ComparisonType.MoreThan if value >= mu else ComparisonType.LessThan,
        dimension_values=_split_values(s),
        date_refs=(_axis_date(view, ix),),
        numbers=(("value", value), ("avg", native_round(mu, s.values))),
        percentage=pct,
        **_base_fields(view, s),
    )


def _detect_line_series(view: TableView, s: Series, cfg: DetectorConfig) -> list[Fact]:
    facts = [
        _line_extreme(view, s, InsightType.Minimum),
        _line_extreme(view, s, InsightType.Maximum),
        _max_extent(view, s, cfg),
        _trend(view, s, cfg),
        _swing(view, s, cfg, rising=True),
        _swing(view, s, cfg, rising=False),
        _seasonality(view, s, cfg),
        _anomaly(view, s, cfg),
    ]
    return [f for f in facts if f is not None]


def _correlations(view: TableView, cfg: DetectorConfig) -> list[Fact]:
    facts = []
    series = view.series
    for a_ix in range(len(series)):
        for b_ix in range(a_ix + 1, len(series)):
            a, b = series[a_ix], series[b_ix]
            if len(a.values) < 3:
                continue
            r = pearson(list(a.values), list(b.values))
            if abs(r) < cfg.correlation_min_abs_r:
                continue
            if a.split_value is not None and b.split_value is not None:
                dim_values: tuple[str, ...] = (a.split_value, b.split_value)
                metrics = (a.metric,)
            else:
                dim_values = ()
                metrics = (a.metric, b.metric)
            facts.append(
                Fact(
                    panel_id=view.panel_id,
                    insight_type=InsightType.Correlation,
                    comparison_type=ComparisonType.NoComparison,
                    metrics=metrics,
                    dimensions=view.dimensions,
                    dimension_values=dim_values,
                    numbers=(("direction", 1.0 if r >= 0 else -1.0),),
                    table_column=Whole,
                )
            )
    return facts


def detect_facts(
    view: TableView, category: ChartCategory, config: DetectorConfig | None = None
) -> list[Fact]:
    """Run every applicable detector over the view's series.

    Detectors below their per-detector minimum length are skipped quietly;
    a view with fewer than two rows raises TooShort.
    """
    cfg = config or DetectorConfig()
    if len(view.axis_values) < 2:
        raise TooShort(f"panel {view.panel_id!r} has {len(view.axis_values)} rows")

    facts: list[Fact] = []
    if category is ChartCategory.BarLike:
        for s in view.series:
            facts.extend(_detect_bar_series(view, s, cfg))
    else:
        for s in view.series:
            facts.extend(_detect_line_series(view, s, cfg))
        if category is ChartCategory.MultiLineLike:
            facts.extend(_correlations(view, cfg))
    return facts
