"""Tie-aware top-k selection, metadata reading order, and prompt assembly."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from .facts import Insight
from .model import DashboardSpec, _Whole

MIN_TARGET = 4
MAX_TARGET = 15

DEFAULT_INSTRUCTION = (
    "Summarize the following dashboard insights into a single concise paragraph, "
    "using as few sentences as possible while keeping all values accurate."
)


@dataclass
class Selection:
    score_order: list[str]
    reading_order: list[str]
    min_target: int = MIN_TARGET
    max_target: int = MAX_TARGET


@dataclass
class PromptDoc:
    instruction: str
    paragraphs: list[str]
    token_budget: int

    @property
    def body(self) -> str:
        return "\n\n".join(self.paragraphs)

    @property
    def text(self) -> str:
        return f"{self.instruction}\n\n{self.body}"


def select_top(
    scores: dict[str, float], min_target: int = MIN_TARGET, max_target: int = MAX_TARGET
) -> list[str]:
    """Pick whole tie groups from the top until the minimum target is met.

    Selection stops at the earliest admissible point; a tie group that would
    push past the maximum is truncated to fit, by ascending insight ID.
    """
    if not scores:
        raise ValueError("selection pool is empty")
    groups: dict[float, list[str]] = {}
    for iid, score in scores.items():
        groups.setdefault(score, []).append(iid)
    selected: list[str] = []
    for score in sorted(groups, reverse=True):
        if len(selected) >= min_target:
            break
        group = sorted(groups[score])
        if len(selected) + len(group) > max_target:
            selected.extend(group[: max_target - len(selected)])
            break
        selected.extend(group)
    return selected


def _earliest_date(insight: Insight) -> date:
    dates = insight.fact.all_dates()
    return min(dates) if dates else date.min


def order_for_reading(
    selected: list[str], spec: DashboardSpec, insights: dict[str, Insight]
) -> list[str]:
    """Stable layout-and-topic order: panel cell, table column (whole first),
    metric, earliest date, then ID."""

    def key(iid: str):
        insight = insights[iid]
        fact = insight.fact
        panel = spec.panel(fact.panel_id)
        col = -1 if isinstance(fact.table_column, _Whole) else int(fact.table_column)
        metric = fact.metrics[0] if fact.metrics else ""
        return (panel.panel_row, panel.panel_col, col, metric, _earliest_date(insight), iid)

    return sorted(selected, key=key)


def build_prompt(
    reading_order: list[str],
    insights: dict[str, Insight],
    spec: DashboardSpec,
    instruction: str = DEFAULT_INSTRUCTION,
    include_titles: bool = False,
    estimator=None,
) -> PromptDoc:
    """One paragraph per source panel, insight sentences verbatim.

    Panel titles are left out by default; they are the documented source of
    title-driven hallucinations and are only re-enabled for experiments.
    `estimator` swaps in a different token counter (default: chars/4).
    """
    if not reading_order:
        raise ValueError("reading order is empty")
    from .llm import estimate_tokens

    paragraphs: list[str] = []
    current_panel: str | None = None
    current: list[str] = []
    for iid in reading_order:
        insight = insights[iid]
        if insight.panel_id != current_panel:
            if current:
                paragraphs.append(" ".join(current))
            current_panel = insight.panel_id
            current = []
            if include_titles:
                current.append(f"[{spec.panel(current_panel).title}]")
        current.append(insight.text)
    if current:
        paragraphs.append(" ".join(current))

    count = estimator or estimate_tokens
    budget = count([insights[iid].text for iid in reading_order])
    return PromptDoc(instruction=instruction, paragraphs=paragraphs, token_budget=budget)


def concat_baseline(reading_order: list[str], insights: dict[str, Insight]) -> str:
    """Plain concatenation of the selected insight texts; the non-LLM baseline."""
    if not reading_order:
        return ""
    return ". ".join(insights[iid].text for iid in reading_order) + "."


def selection_to_json(selection: Selection) -> dict:
    return {
        "scoreOrder": selection.score_order,
        "readingOrder": selection.reading_order,
        "minTarget": selection.min_target,
        "maxTarget": selection.max_target,
    }
