from __future__ import annotations

import random
from collections import Counter

import pytest

import insightloom as il
from insightloom.facts import ChartCategory, ComparisonType, Fact, Insight, InsightType
from insightloom.model import ChartType, Column, ColumnRole, DashboardSpec, DataTable, PanelSpec, Whole
from insightloom.scoring import (
    ScoreSpec,
    UnknownComponent,
    evaluate_score_spec,
    layout_score,
    priority,
    reverse_index,
    score_insights,
    value_scores,
)


def _spec_2x2() -> DashboardSpec:
    table = DataTable(
        table_id="t",
        columns=(Column("D", ColumnRole.Dimension, 0), Column("M", ColumnRole.Metric, 1)),
        rows=(("a", 1.0), ("b", 2.0)),
    )
    panels = tuple(
        PanelSpec(
            panel_id=f"P{r}{c}", chart_type=ChartType.Bar, panel_row=r, panel_col=c,
            table_id="t", title=f"P{r}{c}",
        )
        for r in (0, 1)
        for c in (0, 1)
    )
    return DashboardSpec(dashboard_id="s", title="s", panels=panels, tables={"t": table})


def _insight(iid: str, panel: str, values=(), col=Whole) -> Insight:
    fact = Fact(
        panel_id=panel, insight_type=InsightType.Maximum, comparison_type=ComparisonType.Total,
        metrics=("M",), dimensions=("D",), dimension_values=tuple(values),
        percentage=10, table_column=col,
    )
    return Insight(id=iid, fact=fact, text="t", chart_category=ChartCategory.BarLike)


def test_reverse_index():
    assert reverse_index(0, 2) == 1.0
    assert reverse_index(1, 2) == 0.0
    assert reverse_index(0, 1) == 1.0
    assert reverse_index(1, 3) == 0.5


def test_layout_score_extremes():
    spec = _spec_2x2()
    assert layout_score(_insight("a", "P00"), spec) == pytest.approx(1.0, abs=1e-9)
    assert layout_score(_insight("b", "P11"), spec) == pytest.approx(0.25 * 0 + 0.25 * 0 + 0.5, abs=1e-9)


def test_layout_score_mixed():
    spec = _spec_2x2()
    # row 0 of 2, col 1 of 2, whole table -> 0.25 + 0 + 0.5
    assert layout_score(_insight("c", "P01"), spec) == pytest.approx(0.75, abs=1e-9)


def test_value_scores_worked_example():
    a = _insight("A", "P00", ("Tue", "Wed"))
    b = _insight("B", "P00", ("Tue",))
    c = _insight("C", "P01", ("Wed", "Mon"))
    ctx, scores = value_scores([a, b, c])
    assert ctx.value_counts == {"Tue": 2, "Wed": 2, "Mon": 1}
    assert ctx.v_scores == {"A": 2.0, "B": 2.0, "C": 1.5}
    assert scores == {"A": 1.0, "B": 1.0, "C": 0.0}


def test_value_scores_degenerate_all_equal():
    insights = [_insight(f"I{i}", "P00", ("Tue",)) for i in range(3)]
    _, scores = value_scores(insights)
    assert set(scores.values()) == {0.5}


def test_value_scores_empty_mentions_is_min():
    a = _insight("A", "P00", ("Tue",))
    b = _insight("B", "P00", ())
    ctx, scores = value_scores([a, b])
    assert ctx.v_scores["B"] == 0.0
    assert scores["B"] == 0.0 and scores["A"] == 1.0


def test_value_scores_repeat_flag():
    a = _insight("A", "P00", ("Tue", "Tue"))
    b = _insight("B", "P00", ("Tue",))
    ctx_set, _ = value_scores([a, b])
    assert ctx_set.value_counts["Tue"] == 2
    ctx_rep, _ = value_scores([a, b], count_repeats=True)
    assert ctx_rep.value_counts["Tue"] == 3


def test_priority_formula():
    assert priority(1.0, 1.0) == pytest.approx(1.0, abs=1e-9)
    assert priority(0.75, 0.0) == pytest.approx(0.225, abs=1e-9)
    assert priority(0.0, 0.5) == pytest.approx(0.35, abs=1e-9)


def test_priority_invariant_on_cards(callcenter_spec, callcenter_insights):
    cards = score_insights(callcenter_insights, callcenter_spec)
    for card in cards.values():
        assert 0.0 <= card.layout_score <= 1.0
        assert 0.0 <= card.value_score <= 1.0
        assert card.priority == pytest.approx(
            0.3 * card.layout_score + 0.7 * card.value_score, abs=1e-9
        )


def test_value_scores_against_bruteforce():
    rng = random.Random(13)
    pool = ["Mon", "Tue", "Wed", "Neg", "Pos", "North", "South", "X", "Y", "Z"]
    for _ in range(50):
        insights = []
        for ix in range(rng.randint(1, 25)):
            values = tuple(rng.sample(pool, rng.randint(0, 4)))
            insights.append(_insight(f"I{ix:02d}", "P00", values))
        _, scores = value_scores(insights)
        counts = Counter()
        for i in insights:
            for v in set(i.fact.dimension_values):
                counts[v] += 1
        raw = {}
        for i in insights:
            unique = set(i.fact.dimension_values)
            raw[i.id] = sum(counts[v] for v in unique) / len(unique) if unique else 0.0
        lo, hi = min(raw.values()), max(raw.values())
        for iid, v in raw.items():
            expected = 0.5 if hi == lo else (v - lo) / (hi - lo)
            assert scores[iid] == pytest.approx(expected, abs=1e-12)


def test_value_score_bounds(callcenter_insights):
    _, scores = value_scores(callcenter_insights)
    values = list(scores.values())
    assert all(0.0 <= v <= 1.0 for v in values)
    if len(set(values)) > 1:
        assert values.count(1.0) >= 1 and values.count(0.0) >= 1


def test_monotonicity_value_score_vs_priority():
    for layout in (0.0, 0.3, 0.9):
        prev = None
        for value in (0.0, 0.25, 0.5, 0.75, 1.0):
            p = priority(layout, value)
            if prev is not None:
                assert p > prev
            prev = p


def test_score_spec_identity_and_priority(callcenter_spec, callcenter_insights):
    cards = score_insights(callcenter_insights, callcenter_spec)
    layout_spec = ScoreSpec(name="layout", terms=(("layoutScore", 1.0),))
    got = evaluate_score_spec(layout_spec, callcenter_insights, callcenter_spec, cards)
    for insight in callcenter_insights:
        assert got[insight.id] == pytest.approx(cards[insight.id].layout_score, abs=1e-12)
    prio_spec = ScoreSpec(name="prio", terms=(("layoutScore", 0.3), ("valueScore", 0.7)))
    got = evaluate_score_spec(prio_spec, callcenter_insights, callcenter_spec, cards)
    for insight in callcenter_insights:
        assert got[insight.id] == pytest.approx(cards[insight.id].priority, abs=1e-12)


def test_score_spec_clamps():
    spec = _spec_2x2()
    insights = [_insight("A", "P00", ("Tue",)), _insight("B", "P01", ())]
    cards = score_insights(insights, spec)
    heavy = ScoreSpec(name="heavy", terms=(("valueScore", 2.0),))
    clamped = evaluate_score_spec(heavy, insights, spec, cards)
    assert clamped["A"] == 1.0
    raw = evaluate_score_spec(heavy, insights, spec, cards, clamp=False)
    assert raw["A"] == pytest.approx(2.0, abs=1e-9)


def test_score_spec_scale_free_ranking(callcenter_spec, callcenter_insights):
    cards = score_insights(callcenter_insights, callcenter_spec)
    base = ScoreSpec(name="b", terms=(("layoutScore", 0.4), ("valueScore", 0.6), ("tableCol", 0.2)))
    scaled = ScoreSpec(name="s", terms=tuple((c, w * 7.5) for c, w in base.terms))
    raw_a = evaluate_score_spec(base, callcenter_insights, callcenter_spec, cards, clamp=False)
    raw_b = evaluate_score_spec(scaled, callcenter_insights, callcenter_spec, cards, clamp=False)
    rank = lambda scores: sorted(scores, key=lambda i: (-scores[i], i))
    assert rank(raw_a) == rank(raw_b)


def test_unknown_component_rejected():
    with pytest.raises(UnknownComponent):
        ScoreSpec(name="bad", terms=(("magic", 1.0),))


def test_score_spec_json_round_trip():
    spec = ScoreSpec(name="x", terms=(("layoutScore", 0.3), ("constant", 0.1)))
    assert ScoreSpec.from_json(spec.to_json()) == spec
