"""Compound insight scores: layoutScore, valueScore, priority, custom specs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .facts import Insight
from .model import DashboardSpec, _Whole

LAYOUT_WEIGHT = 0.3
VALUE_WEIGHT = 0.7


class UnknownComponent(Exception):
    pass


@dataclass(frozen=True)
class ScoringContext:
    value_counts: dict[str, int]
    v_scores: dict[str, float]
    v_min: float
    v_max: float


@dataclass
class ScoreCard:
    insight_id: str
    layout_score: float
    value_score: float
    priority: float
    custom: dict[str, float] = field(default_factory=dict)


def reverse_index(i: int, n: int) -> float:
    """Normalized reverse index: the first of n scores 1, the last scores 0."""
    if n <= 1:
        return 1.0
    return (n - 1 - i) / (n - 1)


def layout_score(insight: Insight, spec: DashboardSpec) -> float:
    """0.25·panelRow + 0.25·panelCol + 0.5·tableCol, each reverse-normalized.

    Whole-table insights take a tableCol component of 1.0. The tableCol
    normalization uses the panel's own column count.
    """
    panel = spec.panel(insight.fact.panel_id)
    row = reverse_index(panel.panel_row, spec.row_count())
    col = reverse_index(panel.panel_col, spec.col_count())
    table_column = insight.fact.table_column
    if isinstance(table_column, _Whole):
        tcol = 1.0
    else:
        n_cols = _panel_column_count(insight, spec)
        tcol = reverse_index(int(table_column), n_cols)
    return 0.25 * row + 0.25 * col + 0.5 * tcol


def _panel_column_count(insight: Insight, spec: DashboardSpec) -> int:
    from .model import derive_table_view

    view = derive_table_view(spec, insight.fact.panel_id)
    indexed = [s for s in view.series if not isinstance(s.table_column, _Whole)]
    return max(len(indexed), 1)


def value_scores(
    insights: list[Insight], count_repeats: bool = False
) -> tuple[ScoringContext, dict[str, float]]:
    """Min-max normalized average occurrence of each insight's dimension values.

    Each insight contributes one count per distinct value it mentions unless
    `count_repeats` is set. Insights with no values take vScore 0; when all
    vScores coincide every valueScore is 0.5.
    """
    if not insights:
        raise ValueError("value_scores needs at least one insight")
    counts: dict[str, int] = {}
    for insight in insights:
        values = insight.fact.dimension_values
        if not count_repeats:
            values = tuple(dict.fromkeys(values))
        for v in values:
            counts[v] = counts.get(v, 0) + 1

    v_scores: dict[str, float] = {}
    for insight in insights:
        unique = list(dict.fromkeys(insight.fact.dimension_values))
        if not unique:
            v_scores[insight.id] = 0.0
        else:
            v_scores[insight.id] = sum(counts[v] for v in unique) / len(unique)

    v_min, v_max = min(v_scores.values()), max(v_scores.values())
    if v_max == v_min:
        normalized = {iid: 0.5 for iid in v_scores}
    else:
        normalized = {iid: (v - v_min) / (v_max - v_min) for iid, v in v_scores.items()}
    ctx = ScoringContext(value_counts=counts, v_scores=v_scores, v_min=v_min, v_max=v_max)
    return ctx, normalized


def priority(layout: float, value: float) -> float:
    return LAYOUT_WEIGHT * layout + VALUE_WEIGHT * value


def score_insights(
    insights: list[Insight], spec: DashboardSpec, count_repeats: bool = False
) -> dict[str, ScoreCard]:
    """Full score cards for an insight set."""
    _, value_by_id = value_scores(insights, count_repeats=count_repeats)
    cards: dict[str, ScoreCard] = {}
    for insight in insights:
        layout = layout_score(insight, spec)
        value = value_by_id[insight.id]
        cards[insight.id] = ScoreCard(
            insight_id=insight.id,
            layout_score=layout,
            value_score=value,
            priority=priority(layout, value),
        )
    return cards


@dataclass(frozen=True)
class ScoreSpec:
    """A named weighted combination of score components.

    Components: layoutScore, valueScore, panelRow, panelCol, tableCol,
    constant. Reported values are clamped to [0, 1]; ranking uses the raw
    weighted sum.
    """

    name: str
    terms: tuple[tuple[str, float], ...]

    COMPONENTS = ("layoutScore", "valueScore", "panelRow", "panelCol", "tableCol", "constant")

    def __post_init__(self) -> None:
        for component, weight in self.terms:
            if component not in self.COMPONENTS:
                raise UnknownComponent(f"unknown score component {component!r}")
            if not isinstance(weight, (int, float)) or weight != weight or abs(weight) == float("inf"):
                raise ValueError(f"weight for {component!r} must be finite")

    @classmethod
    def from_json(cls, doc: dict) -> "ScoreSpec":
        return cls(
            name=doc["name"],
            terms=tuple((t["component"], float(t["weight"])) for t in doc["terms"]),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "terms": [{"component": c, "weight": w} for c, w in self.terms],
        }


def _components_for(insight: Insight, spec: DashboardSpec, card: ScoreCard) -> dict[str, float]:
    panel = spec.panel(insight.fact.panel_id)
    table_column = insight.fact.table_column
    if isinstance(table_column, _Whole):
        tcol = 1.0
    else:
        tcol = reverse_index(int(table_column), _panel_column_count(insight, spec))
    return {
        "layoutScore": card.layout_score,
        "valueScore": card.value_score,
        "panelRow": reverse_index(panel.panel_row, spec.row_count()),
        "panelCol": reverse_index(panel.panel_col, spec.col_count()),
        "tableCol": tcol,
        "constant": 1.0,
    }


def evaluate_score_spec(
    score_spec: ScoreSpec,
    insights: list[Insight],
    spec: DashboardSpec,
    cards: dict[str, ScoreCard],
    clamp: bool = True,
) -> dict[str, float]:
    """Weighted sum of components per insight; clamped to [0, 1] for reporting."""
    out: dict[str, float] = {}
    for insight in insights:
        comps = _components_for(insight, spec, cards[insight.id])
        raw = sum(weight * comps[component] for component, weight in score_spec.terms)
        out[insight.id] = min(1.0, max(0.0, raw)) if clamp else raw
    return out


def cards_to_json(cards: dict[str, ScoreCard]) -> dict:
    return {
        iid: {
            "layoutScore": card.layout_score,
            "valueScore": card.value_score,
            "priority": card.priority,
            **({"custom": card.custom} if card.custom else {}),
        }
        for iid, card in sorted(cards.items())
    }
