"""Insight network: linking, matrix, clique clusters, gatekeeper aggregation.

Links fall into five categories (type-, topic-, value-, metadata-, and
score-based). All kinds except the priority chain are undirected and keyed
by the shared value, one link per shared key instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from itertools import combinations

from .facts import Insight
from .model import DashboardSpec, _Whole


class UnknownKind(Exception):
    pass


class TooManyKeys(Exception):
    pass


class LinkCategory(str, Enum):
    TypeBased = "TypeBased"
    TopicBased = "TopicBased"
    ValueBased = "ValueBased"
    MetadataBased = "MetadataBased"
    ScoreBased = "ScoreBased"


class LinkKind(str, Enum):
    SameInsightType = "SameInsightType"
    SameComparisonType = "SameComparisonType"
    SameChartCategory = "SameChartCategory"
    SharedMetric = "SharedMetric"
    SharedDimension = "SharedDimension"
    SharedFilterSegment = "SharedFilterSegment"
    SharedDate = "SharedDate"
    SharedPercentage = "SharedPercentage"
    SharedDimensionValue = "SharedDimensionValue"
    SamePanelRow = "SamePanelRow"
    SamePanelCol = "SamePanelCol"
    SameTableColumn = "SameTableColumn"
    SameSortAttribute = "SameSortAttribute"
    PriorityChainSuccessor = "PriorityChainSuccessor"

    @property
    def category(self) -> LinkCategory:
        return _KIND_CATEGORY[self]

    @property
    def short(self) -> str:
        return _KIND_SHORT[self]


_KIND_CATEGORY = {
    LinkKind.SameInsightType: LinkCategory.TypeBased,
    LinkKind.SameComparisonType: LinkCategory.TypeBased,
    LinkKind.SameChartCategory: LinkCategory.TypeBased,
    LinkKind.SharedMetric: LinkCategory.TopicBased,
    LinkKind.SharedDimension: LinkCategory.TopicBased,
    LinkKind.SharedFilterSegment: LinkCategory.TopicBased,
    LinkKind.SharedDate: LinkCategory.ValueBased,
    LinkKind.SharedPercentage: LinkCategory.ValueBased,
    LinkKind.SharedDimensionValue: LinkCategory.ValueBased,
    LinkKind.SamePanelRow: LinkCategory.MetadataBased,
    LinkKind.SamePanelCol: LinkCategory.MetadataBased,
    LinkKind.SameTableColumn: LinkCategory.MetadataBased,
    LinkKind.SameSortAttribute: LinkCategory.MetadataBased,
    LinkKind.PriorityChainSuccessor: LinkCategory.ScoreBased,
}

_KIND_SHORT = {
    LinkKind.SameInsightType: "type",
    LinkKind.SameComparisonType: "comparison",
    LinkKind.SameChartCategory: "chart",
    LinkKind.SharedMetric: "metric",
    LinkKind.SharedDimension: "dimension",
    LinkKind.SharedFilterSegment: "segment",
    LinkKind.SharedDate: "date",
    LinkKind.SharedPercentage: "percentage",
    LinkKind.SharedDimensionValue: "value",
    LinkKind.SamePanelRow: "row",
    LinkKind.SamePanelCol: "col",
    LinkKind.SameTableColumn: "tablecol",
    LinkKind.SameSortAttribute: "sort",
    LinkKind.PriorityChainSuccessor: "chain",
}

UNDIRECTED_KINDS = frozenset(k for k in LinkKind if k is not LinkKind.PriorityChainSuccessor)


@dataclass(frozen=True)
class Link:
    a: str
    b: str
    kind: LinkKind
    key: str

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("self-links are not allowed")


@dataclass(frozen=True)
class NetworkConfig:
    enabled_kinds: frozenset[LinkKind] = frozenset(LinkKind)
    date_overlap: bool = True  # ranges/points link on any calendar overlap


@dataclass
class InsightNetwork:
    nodes: list[Insight]
    links: list[Link]
    enabled_kinds: frozenset[LinkKind]

    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]


DateInterval = tuple[date, date]


def _intervals(insight: Insight) -> list[DateInterval]:
    out = []
    for ref in insight.fact.date_refs:
        if isinstance(ref, tuple):
            out.append((ref[0], ref[1]))
        else:
            out.append((ref, ref))
    return out


def _interval_key(iv: DateInterval) -> str:
    if iv[0] == iv[1]:
        return iv[0].isoformat()
    return f"{iv[0].isoformat()}..{iv[1].isoformat()}"


def key_values(insight: Insight, kind: LinkKind, spec: DashboardSpec) -> list[str]:
    """The insight's key values for one link kind (may be several or none)."""
    fact = insight.fact
    panel = spec.panel(fact.panel_id)
    if kind is LinkKind.SameInsightType:
        return [fact.insight_type.code]
    if kind is LinkKind.SameComparisonType:
        return [fact.comparison_type.value]
    if kind is LinkKind.SameChartCategory:
        return [insight.chart_category.value]
    if kind is LinkKind.SharedMetric:
        return sorted(set(fact.metrics))
    if kind is LinkKind.SharedDimension:
        return sorted(set(fact.dimensions))
    if kind is LinkKind.SharedFilterSegment:
        if fact.filter_segment is None:
            return []
        return [f"{fact.filter_segment[0]}={fact.filter_segment[1]}"]
    if kind is LinkKind.SharedDate:
        return [_interval_key(iv) for iv in _intervals(insight)]
    if kind is LinkKind.SharedPercentage:
        return [] if fact.percentage is None else [str(fact.percentage)]
    if kind is LinkKind.SharedDimensionValue:
        return sorted(set(fact.dimension_values))
    if kind is LinkKind.SamePanelRow:
        return [str(panel.panel_row)]
    if kind is LinkKind.SamePanelCol:
        return [str(panel.panel_col)]
    if kind is LinkKind.SameTableColumn:
        return ["-" if isinstance(fact.table_column, _Whole) else str(fact.table_column)]
    if kind is LinkKind.SameSortAttribute:
        return [] if panel.sort_attribute is None else [panel.sort_attribute]
    raise UnknownKind(f"{kind!r} has no key values")


def _date_links(insights: list[Insight], overlap: bool) -> list[Link]:
    # Overlap is not transitive, so date links are found pairwise.
    links = []
    for x, y in combinations(insights, 2):
        seen: set[str] = set()
        for iv_a in _intervals(x):
            for iv_b in _intervals(y):
                if overlap:
                    lo = max(iv_a[0], iv_b[0])
                    hi = min(iv_a[1], iv_b[1])
                    if lo > hi:
                        continue
                    key = _interval_key((lo, hi))
                else:
                    if iv_a != iv_b:
                        continue
                    key = _interval_key(iv_a)
                if key in seen:
                    continue
                seen.add(key)
                a, b = sorted((x.id, y.id))
                links.append(Link(a=a, b=b, kind=LinkKind.SharedDate, key=key))
    return links


def build_network(
    insights: list[Insight],
    spec: DashboardSpec,
    config: NetworkConfig | None = None,
    priorities: dict[str, float] | None = None,
) -> InsightNetwork:
    """Link every pair of insights that shares a key, for each enabled kind.

    The directed priority chain is added only when `priorities` are supplied
    and the kind is enabled.
    """
    cfg = config or NetworkConfig()
    for kind in cfg.enabled_kinds:
        if not isinstance(kind, LinkKind):
            raise UnknownKind(f"unknown link kind {kind!r}")
    ids = [i.id for i in insights]
    if len(set(ids)) != len(ids):
        raise ValueError("insight IDs must be unique")

    links: list[Link] = []
    for kind in sorted(cfg.enabled_kinds, key=lambda k: k.value):
        if kind is LinkKind.PriorityChainSuccessor:
            continue
        if kind is LinkKind.SharedDate:
            links.extend(_date_links(insights, cfg.date_overlap))
            continue
        groups: dict[str, list[str]] = {}
        for insight in insights:
            for key in key_values(insight, kind, spec):
                groups.setdefault(key, []).append(insight.id)
        for key, members in sorted(groups.items()):
            for x, y in combinations(members, 2):
                a, b = sorted((x, y))
                links.append(Link(a=a, b=b, kind=kind, key=key))

    if priorities is not None and LinkKind.PriorityChainSuccessor in cfg.enabled_kinds:
        chain = sorted(ids, key=lambda i: (-priorities[i], i))
        for rank in range(len(chain) - 1):
            links.append(
                Link(
                    a=chain[rank],
                    b=chain[rank + 1],
                    kind=LinkKind.PriorityChainSuccessor,
                    key=str(rank + 1),
                )
            )

    unique = sorted(set(links), key=lambda l: (l.kind.value, l.key, l.a, l.b))
    return InsightNetwork(nodes=list(insights), links=unique, enabled_kinds=cfg.enabled_kinds)


@dataclass
class LinkMatrix:
    order: list[str]
    counts: list[list[int]]


def link_matrix(
    network: InsightNetwork,
    kind_filter: set[LinkKind] | None = None,
    order: list[str] | None = None,
) -> LinkMatrix:
    """Symmetric link-count matrix over the chosen kinds (chain links excluded)."""
    kinds = UNDIRECTED_KINDS if kind_filter is None else set(kind_filter)
    for kind in kinds:
        if not isinstance(kind, LinkKind):
            raise UnknownKind(f"unknown link kind {kind!r}")
    ids = order if order is not None else network.node_ids()
    index = {iid: ix for ix, iid in enumerate(ids)}
    counts = [[0] * len(ids) for _ in ids]
    for link in network.links:
        if link.kind not in kinds or link.kind is LinkKind.PriorityChainSuccessor:
            continue
        ia, ib = index.get(link.a), index.get(link.b)
        if ia is None or ib is None:
            continue
        counts[ia][ib] += 1
        counts[ib][ia] += 1
    return LinkMatrix(order=list(ids), counts=counts)


def anchor_order(
    network: InsightNetwork, ids: list[str], priorities: dict[str, float]
) -> list[str]:
    """Matrix display order: highest-priority insight first, the rest by the
    number of links they share with it, then by priority."""
    if not ids:
        return []
    anchor = max(ids, key=lambda i: (priorities[i], i))
    matrix = link_matrix(network, order=[anchor] + [i for i in ids if i != anchor])
    links_to_anchor = {iid: matrix.counts[0][ix] for ix, iid in enumerate(matrix.order)}
    rest = sorted(
        (i for i in ids if i != anchor),
        key=lambda i: (-links_to_anchor[i], -priorities[i], i),
    )
    return [anchor] + rest


@dataclass
class ClusterGrid:
    row_kinds: list[LinkKind]
    col_kinds: list[LinkKind]
    cells: dict[tuple[str, str], list[str]]


def _axis_values(insight: Insight, kinds: list[LinkKind], spec: DashboardSpec) -> list[str]:
    """All composite key values along one grid axis (cartesian over kinds)."""
    if not kinds:
        return [""]
    values = [key_values(insight, k, spec) for k in kinds]
    out: list[str] = []

    def rec(ix: int, parts: list[str]) -> None:
        if ix == len(values):
            out.append(" & ".join(parts))
            return
        for v in values[ix]:
            rec(ix + 1, parts + [v])

    rec(0, [])
    return out


def cluster_grid(
    insights: list[Insight],
    spec: DashboardSpec,
    row_kinds: list[LinkKind],
    col_kinds: list[LinkKind],
) -> ClusterGrid:
    """Clique clusters: each cell holds the insights sharing the cell's keys.

    Insights with several key values appear in several cells (duplicates).
    """
    if len(row_kinds) > 2 or len(col_kinds) > 2:
        raise TooManyKeys("at most two link kinds per axis")
    for kind in [*row_kinds, *col_kinds]:
        if not isinstance(kind, LinkKind) or kind is LinkKind.PriorityChainSuccessor:
            raise UnknownKind(f"grid keys must be undirected link kinds, got {kind!r}")
    cells: dict[tuple[str, str], list[str]] = {}
    for insight in insights:
        for rv in _axis_values(insight, row_kinds, spec):
            for cv in _axis_values(insight, col_kinds, spec):
                cells.setdefault((rv, cv), []).append(insight.id)
    return ClusterGrid(row_kinds=list(row_kinds), col_kinds=list(col_kinds), cells=cells)


@dataclass
class GatekeeperGraph:
    insight_ids: list[str]
    gatekeepers: dict[str, list[str]]  # gatekeeper node id -> member insight ids
    edges: list[tuple[str, str]]  # (insight id, gatekeeper id)
    remaining_links: list[Link]  # pairwise links of non-aggregated kinds


def gatekeeper_graph(
    network: InsightNetwork, categories: set[LinkCategory]
) -> GatekeeperGraph:
    """Replace pairwise links of the chosen categories with hub nodes.

    One gatekeeper stands in for each (kind, key) group of two or more
    insights; its degree equals the group size.
    """
    if not categories:
        raise ValueError("categories must be non-empty")
    aggregated: dict[str, set[str]] = {}
    remaining: list[Link] = []
    for link in network.links:
        if link.kind.category in categories and link.kind in UNDIRECTED_KINDS:
            node = f"{link.kind.short}:{link.key}"
            aggregated.setdefault(node, set()).update((link.a, link.b))
        else:
            remaining.append(link)
    gatekeepers = {node: sorted(members) for node, members in sorted(aggregated.items())}
    edges = [(iid, node) for node, members in gatekeepers.items() for iid in members]
    return GatekeeperGraph(
        insight_ids=network.node_ids(),
        gatekeepers=gatekeepers,
        edges=edges,
        remaining_links=remaining,
    )


def network_to_json(network: InsightNetwork, scores: dict[str, dict] | None = None) -> dict:
    from .engine import insights_to_json

    return {
        "nodes": insights_to_json(network.nodes),
        "links": [
            {
                "a": l.a,
                "b": l.b,
                "kind": l.kind.value,
                "category": l.kind.category.value,
                "key": l.key,
            }
            for l in network.links
        ],
        "scores": scores or {},
    }


def matrix_to_json(matrix: LinkMatrix) -> dict:
    return {"order": matrix.order, "counts": matrix.counts}


def cluster_to_json(grid: ClusterGrid) -> dict:
    return {
        "rowKeys": [k.value for k in grid.row_kinds],
        "colKeys": [k.value for k in grid.col_kinds],
        "cells": [
            {"row": row, "col": col, "ids": ids}
            for (row, col), ids in sorted(grid.cells.items())
        ],
    }


def gatekeeper_to_json(graph: GatekeeperGraph) -> dict:
    return {
        "insightNodes": graph.insight_ids,
        "gatekeeperNodes": [
            {"id": node, "members": members, "degree": len(members)}
            for node, members in graph.gatekeepers.items()
        ],
        "edges": [{"insight": a, "gatekeeper": b} for a, b in graph.edges],
        "remainingLinks": [
            {
                "a": l.a,
                "b": l.b,
                "kind": l.kind.value,
                "category": l.kind.category.value,
                "key": l.key,
            }
            for l in graph.remaining_links
        ],
    }
