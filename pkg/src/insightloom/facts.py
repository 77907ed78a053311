"""Typed data facts, insight records, and the short-ID scheme."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Union

from .model import ChartType, PanelSpec, TableColumn, TableView, Whole, _Whole


class InsightType(Enum):
    Minimum = "MI"
    Maximum = "MX"
    MaxExtent = "ME"
    HighestBar = "HB"
    Skew = "SK"
    LongTail = "LT"
    Seasonality = "SE"
    Trend = "TR"
    Spike = "SP"
    Decline = "DE"
    Anomaly = "AN"
    Correlation = "CO"

    @property
    def code(self) -> str:
        return self.value


class ChartCategory(str, Enum):
    BarLike = "BarLike"
    LineLike = "LineLike"
    MultiLineLike = "MultiLineLike"


class ComparisonType(str, Enum):
    Total = "Total"
    VsAverage = "VsAverage"
    RelativeChange = "RelativeChange"
    MoreThan = "MoreThan"
    LessThan = "LessThan"
    NoComparison = "None"


DateRef = Union[date, tuple[date, date]]


@dataclass(frozen=True)
class Fact:
    """One detected data fact, fully structured.

    Every number, date, and entity that the rendered text will mention must
    be recoverable from these fields; the grounding checker depends on it.
    """

    panel_id: str
    insight_type: InsightType
    comparison_type: ComparisonType
    metrics: tuple[str, ...]
    dimensions: tuple[str, ...] = ()
    dimension_values: tuple[str, ...] = ()
    filter_segment: tuple[str, str] | None = None
    date_refs: tuple[DateRef, ...] = ()
    numbers: tuple[tuple[str, float], ...] = ()
    percentage: int | None = None
    table_column: TableColumn = Whole

    def __post_init__(self) -> None:
        if self.comparison_type is ComparisonType.NoComparison:
            if self.percentage is not None:
                raise ValueError("percentage must be absent when comparison is None")
            if self.insight_type is not InsightType.Correlation:
                raise ValueError("comparison None is only permitted for Correlation")
        else:
            if self.percentage is None:
                raise ValueError("percentage required unless comparison is None")
            if not 0 <= self.percentage <= 100:
                raise ValueError(f"percentage {self.percentage} out of [0, 100]")
        if self.comparison_type is ComparisonType.RelativeChange:
            ranges = [r for r in self.date_refs if isinstance(r, tuple)]
            labels = {label for label, _ in self.numbers}
            if len(ranges) != 1 or not {"from", "to"} <= labels:
                raise ValueError("RelativeChange facts need one date range and from/to numbers")

    def number(self, label: str) -> float:
        for key, value in self.numbers:
            if key == label:
                return value
        raise KeyError(label)

    def all_dates(self) -> set[date]:
        """Every date point plus the endpoints of every range."""
        out: set[date] = set()
        for ref in self.date_refs:
            if isinstance(ref, tuple):
                out.update(ref)
            else:
                out.add(ref)
        return out


@dataclass(frozen=True)
class Insight:
    id: str
    fact: Fact
    text: str
    chart_category: ChartCategory

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("insight text must be non-empty")

    @property
    def panel_id(self) -> str:
        return self.fact.panel_id


_CHART_CHAR = {
    ChartType.Bar: "B",
    ChartType.Donut: "D",
    ChartType.Line: "L",
    ChartType.MultiLine: "M",
    ChartType.Table: "T",
}

_CATEGORY_FOR_CHART = {
    ChartType.Bar: ChartCategory.BarLike,
    ChartType.Donut: ChartCategory.BarLike,
    ChartType.Line: ChartCategory.LineLike,
    ChartType.MultiLine: ChartCategory.MultiLineLike,
}


def categorize_chart(panel: PanelSpec, view: TableView) -> ChartCategory:
    """Map a panel onto one of the three detector categories.

    Tables behave like line charts when their view is time-indexed and like
    bar charts otherwise.
    """
    if panel.chart_type is ChartType.Table:
        return ChartCategory.LineLike if view.time_axis else ChartCategory.BarLike
    return _CATEGORY_FOR_CHART[panel.chart_type]


def _topic_char(names: tuple[str, ...]) -> str:
    if not names:
        return "-"
    if len(names) >= 2:
        return "X"
    return names[0][:1].upper() or "-"


def id_core(fact: Fact, panel: PanelSpec) -> str:
    """The 6-char ID core: chart char, metric/dimension topic chars, column, type code."""
    c1 = _CHART_CHAR[panel.chart_type]
    c2 = fact.metrics[0][:1].upper() if fact.metrics else "-"
    c3 = _topic_char(fact.dimensions)
    col = fact.table_column
    c4 = "-" if isinstance(col, _Whole) else str(col)
    return f"{c1}{c2}{c3}{c4}{fact.insight_type.code}"


def assign_id(fact: Fact, panel: PanelSpec, existing: set[str]) -> str:
    """Assign the short insight ID, disambiguating collisions with ~2, ~3, ..."""
    core = id_core(fact, panel)
    if core not in existing:
        return core
    n = 2
    while f"{core}~{n}" in existing:
        n += 1
    return f"{core}~{n}"
