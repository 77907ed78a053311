"""Dashboard specification model: panels, data tables, and derived table views.

A dashboard is described by a single self-contained JSON document bundling
the panel layout and the backing data tables. Loading validates the whole
document up front so every later stage can assume a consistent spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Union


class DashboardError(Exception):
    """Base class for dashboard specification errors."""


class ParseError(DashboardError):
    """Malformed spec document."""


class MissingTable(DashboardError):
    """Panel references a table id that is not defined."""


class LayoutCollision(DashboardError):
    """Two panels share the same (row, col) grid cell."""


class BadColumn(DashboardError):
    """Sort attribute or filter references an unknown column."""


class NoAxis(DashboardError):
    """No dimension or time column usable as the panel axis."""


class EmptyAfterFilter(DashboardError):
    """Every row was removed by the panel filters."""


class ChartType(str, Enum):
    Bar = "Bar"
    Donut = "Donut"
    Line = "Line"
    MultiLine = "MultiLine"
    Table = "Table"


class ColumnRole(str, Enum):
    Dimension = "Dimension"
    Metric = "Metric"
    Time = "Time"


# Sentinel for facts/series that describe the entire table rather than one column.
class _Whole:
    def __repr__(self) -> str:  # pragma: no cover
        return "Whole"


Whole = _Whole()
TableColumn = Union[int, _Whole]

CellValue = Union[str, float, date]


@dataclass(frozen=True)
class Column:
    name: str
    role: ColumnRole
    index: int


@dataclass(frozen=True)
class DataTable:
    table_id: str
    columns: tuple[Column, ...]
    rows: tuple[tuple[CellValue, ...], ...]

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise BadColumn(f"table {self.table_id!r} has no column {name!r}")

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def columns_with_role(self, role: ColumnRole) -> list[Column]:
        return [c for c in self.columns if c.role is role]


@dataclass(frozen=True)
class PanelSpec:
    panel_id: str
    chart_type: ChartType
    panel_row: int
    panel_col: int
    table_id: str
    title: str
    sort_attribute: str | None = None
    filters: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class DashboardSpec:
    dashboard_id: str
    title: str
    panels: tuple[PanelSpec, ...]
    tables: dict[str, DataTable]

    def panel(self, panel_id: str) -> PanelSpec:
        for p in self.panels:
            if p.panel_id == panel_id:
                return p
        raise KeyError(panel_id)

    def table_for(self, panel: PanelSpec) -> DataTable:
        return self.tables[panel.table_id]

    def row_count(self) -> int:
        return 1 + max(p.panel_row for p in self.panels)

    def col_count(self) -> int:
        return 1 + max(p.panel_col for p in self.panels)


@dataclass(frozen=True)
class Series:
    """One plotted series of a table view.

    `name` is the display label ("Calls", "Sentiment [Negative]"), `metric`
    the underlying metric column. Segment series (one per value of a leading
    dimension in crossed tables) carry the segment filter; dimension-split
    series in multi-line views carry `split_value`. `table_column` is the
    series' position, or Whole for single-series views and cross-segment
    aggregates.
    """

    name: str
    metric: str
    values: tuple[float, ...]
    table_column: TableColumn = Whole
    segment: tuple[str, str] | None = None
    split_value: str | None = None


@dataclass(frozen=True)
class TableView:
    panel_id: str
    dimension_axis: str | None
    time_axis: str | None
    axis_values: tuple[CellValue, ...]
    series: tuple[Series, ...]
    applied_filters: tuple[tuple[str, str], ...] = ()
    dimensions: tuple[str, ...] = ()

    @property
    def axis_dates(self) -> tuple[date, ...]:
        return tuple(v for v in self.axis_values if isinstance(v, date))


def _parse_cell(raw: Any, col: Column, table_id: str, row_ix: int) -> CellValue:
    where = f"table {table_id!r} row {row_ix} column {col.name!r}"
    if raw is None:
        raise ParseError(f"missing value in {where}")
    if col.role is ColumnRole.Dimension:
        if not isinstance(raw, str):
            raise ParseError(f"expected string in {where}, got {raw!r}")
        return raw
    if col.role is ColumnRole.Metric:
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ParseError(f"expected number in {where}, got {raw!r}")
        return float(raw)
    try:
        return date.fromisoformat(str(raw))
    except ValueError as exc:
        raise ParseError(f"expected ISO date in {where}, got {raw!r}") from exc


def _parse_table(table_id: str, doc: Any) -> DataTable:
    if not isinstance(doc, dict) or "columns" not in doc or "rows" not in doc:
        raise ParseError(f"table {table_id!r} must have 'columns' and 'rows'")
    columns: list[Column] = []
    seen: set[str] = set()
    for ix, cdoc in enumerate(doc["columns"]):
        try:
            name, role = cdoc["name"], ColumnRole(cdoc["role"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad column {ix} in table {table_id!r}: {exc}") from exc
        if name in seen:
            raise ParseError(f"duplicate column {name!r} in table {table_id!r}")
        seen.add(name)
        columns.append(Column(name=name, role=role, index=ix))
    rows: list[tuple[CellValue, ...]] = []
    for rix, rdoc in enumerate(doc["rows"]):
        if len(rdoc) != len(columns):
            raise ParseError(
                f"table {table_id!r} row {rix} has {len(rdoc)} cells, expected {len(columns)}"
            )
        rows.append(tuple(_parse_cell(v, c, table_id, rix) for v, c in zip(rdoc, columns)))
    return DataTable(table_id=table_id, columns=tuple(columns), rows=tuple(rows))


def _parse_panel(doc: Any) -> PanelSpec:
    try:
        return PanelSpec(
            panel_id=doc["panelId"],
            chart_type=ChartType(doc["chartType"]),
            panel_row=int(doc["row"]),
            panel_col=int(doc["col"]),
            table_id=doc["tableId"],
            title=doc["title"],
            sort_attribute=doc.get("sort"),
            filters=tuple((f["column"], f["value"]) for f in doc.get("filters", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad panel spec: {exc}") from exc


def _check_dense(indices: Iterable[int], axis: str) -> None:
    present = sorted(set(indices))
    if present != list(range(len(present))):
        raise LayoutCollision(f"panel {axis} indices {present} are not dense from 0")


def load_dashboard(source: str | Path | dict) -> DashboardSpec:
    """Load and validate a dashboard spec from a path, JSON string, or dict."""
    if isinstance(source, dict):
        doc = source
    else:
        if isinstance(source, Path):
            text = source.read_text()
        else:
            try:
                is_file = Path(source).exists()
            except (OSError, ValueError):
                is_file = False
            text = Path(source).read_text() if is_file else source
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("spec document must be a JSON object")
    for key in ("id", "title", "panels", "tables"):
        if key not in doc:
            raise ParseError(f"spec document missing {key!r}")

    tables = {tid: _parse_table(tid, tdoc) for tid, tdoc in doc["tables"].items()}
    panels = tuple(_parse_panel(p) for p in doc["panels"])
    if not panels:
        raise ParseError("spec document has no panels")

    cells: set[tuple[int, int]] = set()
    for panel in panels:
        if panel.table_id not in tables:
            raise MissingTable(f"panel {panel.panel_id!r} references unknown table {panel.table_id!r}")
        cell = (panel.panel_row, panel.panel_col)
        if cell in cells:
            raise LayoutCollision(f"two panels share grid cell {cell}")
        cells.add(cell)
        table = tables[panel.table_id]
        known = set(table.column_names())
        if panel.sort_attribute is not None and panel.sort_attribute not in known:
            raise BadColumn(
                f"panel {panel.panel_id!r} sorts by unknown column {panel.sort_attribute!r}"
            )
        for col, _ in panel.filters:
            if col not in known:
                raise BadColumn(f"panel {panel.panel_id!r} filters on unknown column {col!r}")
    _check_dense((p.panel_row for p in panels), "row")
    _check_dense((p.panel_col for p in panels), "col")

    return DashboardSpec(
        dashboard_id=doc["id"], title=doc["title"], panels=panels, tables=tables
    )


def spec_to_doc(spec: DashboardSpec) -> dict:
    """Serialize a DashboardSpec back to the JSON document shape."""
    def cell(v: CellValue) -> Any:
        if isinstance(v, date):
            return v.isoformat()
        if isinstance(v, float) and v.is_integer():
            return int(v)
        return v

    return {
        "id": spec.dashboard_id,
        "title": spec.title,
        "panels": [
            {
                "panelId": p.panel_id,
                "chartType": p.chart_type.value,
                "row": p.panel_row,
                "col": p.panel_col,
                "tableId": p.table_id,
                "title": p.title,
                **({"sort": p.sort_attribute} if p.sort_attribute else {}),
                **(
                    {"filters": [{"column": c, "value": v} for c, v in p.filters]}
                    if p.filters
                    else {}
                ),
            }
            for p in spec.panels
        ],
        "tables": {
            t.table_id: {
                "columns": [{"name": c.name, "role": c.role.value} for c in t.columns],
                "rows": [[cell(v) for v in row] for row in t.rows],
            }
            for t in spec.tables.values()
        },
    }


def _apply_filters(table: DataTable, filters: tuple[tuple[str, str], ...]) -> list[tuple[CellValue, ...]]:
    # Same-column filters are alternatives (IN semantics); distinct columns conjoin.
    by_col: dict[str, set[str]] = {}
    for col, val in filters:
        by_col.setdefault(col, set()).add(val)
    rows = list(table.rows)
    for col, allowed in by_col.items():
        ix = table.column(col).index
        rows = [r for r in rows if r[ix] in allowed]
    return rows


def _ordered_unique(values: Iterable[CellValue]) -> list[CellValue]:
    seen: set[CellValue] = set()
    out: list[CellValue] = []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def derive_table_view(spec: DashboardSpec, panel_id: str) -> TableView:
    """Project a panel's table into axis-aligned metric series.

    Axis selection: Line/MultiLine panels (and Table panels, when present)
    use the Time column; Bar/Donut use the first Dimension column. In crossed
    tables (two dimensions, no time) the last dimension is the axis and the
    leading dimension splits each metric into per-segment series followed by
    a whole-table mean aggregate.
    """
    panel = spec.panel(panel_id)
    table = spec.table_for(panel)
    rows = _apply_filters(table, panel.filters)
    if not rows:
        raise EmptyAfterFilter(f"panel {panel_id!r}: no rows left after filters")

    time_cols = table.columns_with_role(ColumnRole.Time)
    dim_cols = table.columns_with_role(ColumnRole.Dimension)
    metric_cols = table.columns_with_role(ColumnRole.Metric)
    if not metric_cols:
        raise NoAxis(f"panel {panel_id!r}: table has no metric column")

    use_time = bool(time_cols) and panel.chart_type in (
        ChartType.Line,
        ChartType.MultiLine,
        ChartType.Table,
    )

    if use_time:
        axis_col = time_cols[0]
        split_col = dim_cols[0] if dim_cols else None
        axis_vals = _ordered_unique(r[axis_col.index] for r in rows)
        axis_vals.sort()  # dates in calendar order
        series: list[Series] = []
        if split_col is not None:
            split_vals = _ordered_unique(r[split_col.index] for r in rows)
            lookup = {
                (r[axis_col.index], r[split_col.index]): r for r in rows
            }
            for six, sval in enumerate(split_vals):
                vals = []
                for a in axis_vals:
                    row = lookup.get((a, sval))
                    if row is None:
                        raise NoAxis(
                            f"panel {panel_id!r}: series {sval!r} missing value at {a}"
                        )
                    vals.append(float(row[metric_cols[0].index]))
                series.append(
                    Series(
                        name=f"{split_col.name} [{sval}]",
                        metric=metric_cols[0].name,
                        values=tuple(vals),
                        table_column=six,
                        split_value=str(sval),
                    )
                )
        else:
            lookup = {r[axis_col.index]: r for r in rows}
            for m in metric_cols:
                vals = tuple(float(lookup[a][m.index]) for a in axis_vals)
                series.append(Series(name=m.name, metric=m.name, values=vals))
            if len(series) > 1:
                series = [
                    Series(
                        name=s.name,
                        metric=s.metric,
                        values=s.values,
                        table_column=ix,
                    )
                    for ix, s in enumerate(series)
                ]
        return TableView(
            panel_id=panel_id,
            dimension_axis=split_col.name if split_col else None,
            time_axis=axis_col.name,
            axis_values=tuple(axis_vals),
            series=tuple(series),
            applied_filters=panel.filters,
            dimensions=tuple(c.name for c in dim_cols),
        )

    if not dim_cols:
        raise NoAxis(f"panel {panel_id!r}: no dimension or time column usable as axis")
    if len(dim_cols) > 2:
        raise NoAxis(f"panel {panel_id!r}: more than two dimension columns unsupported")

    axis_col = dim_cols[-1]
    axis_vals = _ordered_unique(r[axis_col.index] for r in rows)

    if len(dim_cols) == 1:
        lookup = {r[axis_col.index]: r for r in rows}
        series = [
            Series(
                name=m.name,
                metric=m.name,
                values=tuple(float(lookup[a][m.index]) for a in axis_vals),
            )
            for m in metric_cols
        ]
        if len(series) > 1:
            series = [
                Series(name=s.name, metric=s.metric, values=s.values, table_column=ix)
                for ix, s in enumerate(series)
            ]
        return TableView(
            panel_id=panel_id,
            dimension_axis=axis_col.name,
            time_axis=None,
            axis_values=tuple(axis_vals),
            series=tuple(series),
            applied_filters=panel.filters,
            dimensions=(axis_col.name,),
        )

    # Crossed table: leading dimension segments the metrics.
    seg_col = dim_cols[0]
    seg_vals = _ordered_unique(r[seg_col.index] for r in rows)
    series = []
    col_ix = 0
    cells: dict[tuple[CellValue, CellValue], tuple[CellValue, ...]] = {
        (r[seg_col.index], r[axis_col.index]): r for r in rows
    }
    for m in metric_cols:
        for sval in seg_vals:
            vals = []
            for a in axis_vals:
                row = cells.get((sval, a))
                if row is None:
                    raise NoAxis(
                        f"panel {panel_id!r}: missing cell ({sval!r}, {a!r})"
                    )
                vals.append(float(row[m.index]))
            series.append(
                Series(
                    name=m.name,
                    metric=m.name,
                    values=tuple(vals),
                    table_column=col_ix,
                    segment=(seg_col.name, str(sval)),
                )
            )
            col_ix += 1
    for m in metric_cols:
        # Whole-table aggregate: unweighted mean across segments per axis value.
        per_axis = []
        for aix, _ in enumerate(axis_vals):
            seg_series = [s for s in series if s.metric == m.name and s.segment]
            per_axis.append(sum(s.values[aix] for s in seg_series) / len(seg_series))
        series.append(
            Series(name=m.name, metric=m.name, values=tuple(per_axis), table_column=Whole)
        )
    return TableView(
        panel_id=panel_id,
        dimension_axis=axis_col.name,
        time_axis=None,
        axis_values=tuple(axis_vals),
        series=tuple(series),
        applied_filters=panel.filters,
        dimensions=tuple(c.name for c in dim_cols),
    )
