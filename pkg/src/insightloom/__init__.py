"""insightloom: dashboard insight mining, insight networks, grounded summaries."""

from importlib.resources import files as _files

from .detectors import DetectorConfig, TooShort, detect_facts
from .engine import generate_insights, insight_from_json, insight_to_json, insights_to_json
from .facts import (
    ChartCategory,
    ComparisonType,
    Fact,
    Insight,
    InsightType,
    assign_id,
    categorize_chart,
)
from .model import (
    BadColumn,
    ChartType,
    ColumnRole,
    DashboardError,
    DashboardSpec,
    DataTable,
    EmptyAfterFilter,
    LayoutCollision,
    MissingTable,
    NoAxis,
    PanelSpec,
    ParseError,
    TableView,
    Whole,
    derive_table_view,
    load_dashboard,
    spec_to_doc,
)
from .network import (
    ClusterGrid,
    GatekeeperGraph,
    InsightNetwork,
    Link,
    LinkCategory,
    LinkKind,
    LinkMatrix,
    NetworkConfig,
    TooManyKeys,
    UnknownKind,
    anchor_order,
    build_network,
    cluster_grid,
    gatekeeper_graph,
    link_matrix,
)
from .scoring import (
    ScoreCard,
    ScoreSpec,
    ScoringContext,
    UnknownComponent,
    evaluate_score_spec,
    layout_score,
    priority,
    score_insights,
    value_scores,
)
from .narrative import (
    PromptDoc,
    Selection,
    build_prompt,
    concat_baseline,
    order_for_reading,
    select_top,
)
from .llm import (
    GroundingReport,
    LlmParams,
    RemoteBackend,
    StubBackend,
    SummaryResult,
    Verdict,
    estimate_tokens,
    generate_summary,
    verify_grounding,
)
from .textgen import TemplateHole, render_text

__version__ = "0.1.0"

FIXTURE_PATH = _files("insightloom") / "fixtures" / "callcenter.json"
