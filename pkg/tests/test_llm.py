from __future__ import annotations

import socket
from datetime import date

import httpx
import pytest

import insightloom as il
from insightloom.facts import ChartCategory, ComparisonType, Fact, Insight, InsightType
from insightloom.llm import (
    AuthFailure,
    BackendKind,
    EmptyCompletion,
    LlmParams,
    RateLimited,
    RemoteBackend,
    StubBackend,
    Timeout,
    Verdict,
    estimate_tokens,
    generate_summary,
    prompt_fingerprint,
    verify_grounding,
)
from insightloom.narrative import PromptDoc


def _prompt(paragraphs=None) -> PromptDoc:
    paragraphs = paragraphs or ["First panel sentences.", "Second panel sentences."]
    return PromptDoc(instruction="Summarize.", paragraphs=paragraphs, token_budget=42)


def test_estimate_tokens():
    assert estimate_tokens(["x" * 40]) == 10
    assert estimate_tokens([]) == 0
    assert estimate_tokens(["a" * 10, "b" * 11]) == 6


def test_params_validation():
    with pytest.raises(ValueError):
        LlmParams(temperature=2.5)
    with pytest.raises(ValueError):
        LlmParams(max_tokens=0)


def test_params_from_env():
    from insightloom.llm import params_from_env

    env = {
        "LLM_BASE_URL": "http://local.llm/v1",
        "LLM_API_KEY": "k",
        "LLM_MODEL": "my-model",
        "LLM_TEMPERATURE": "0.2",
    }
    params = params_from_env(max_tokens=17, env=env)
    assert params.base_url == "http://local.llm/v1"
    assert params.model == "my-model"
    assert params.temperature == 0.2
    assert params.max_tokens == 17
    assert params_from_env(max_tokens=1, env={}).temperature == 0.5


def test_custom_token_estimator(callcenter_spec, callcenter_insights):
    from insightloom.narrative import build_prompt

    by_id = {i.id: i for i in callcenter_insights}
    ids = [i.id for i in callcenter_insights[:3]]
    prompt = build_prompt(ids, by_id, callcenter_spec, estimator=lambda texts: len(texts) * 100)
    assert prompt.token_budget == 300


def test_stub_scripted_and_default():
    prompt = _prompt()
    stub = StubBackend({prompt_fingerprint(prompt.text): "Scripted paragraph."})
    params = LlmParams(max_tokens=42)
    result = generate_summary(prompt, params, stub)
    assert result.summary_text == "Scripted paragraph."
    assert result.backend is BackendKind.Stub
    other = generate_summary(_prompt(["Only one."]), params, StubBackend())
    assert other.summary_text == "Only one.."[:-1]  # paragraphs joined with a final period


def test_dry_run_returns_prompt_only():
    prompt = _prompt()
    result = generate_summary(prompt, LlmParams(max_tokens=9), StubBackend(), dry_run=True)
    assert result.summary_text == ""
    assert result.prompt_used == prompt.text


def test_recorded_payload_carries_decoding_params():
    prompt = _prompt()
    stub = StubBackend()
    params = LlmParams(max_tokens=prompt.token_budget)
    generate_summary(prompt, params, stub)
    (request,) = stub.requests
    assert request["temperature"] == 0.5
    assert request["max_tokens"] == 42
    assert request["messages"][0] == {"role": "system", "content": "Summarize."}
    assert request["messages"][1]["content"] == prompt.body


def _remote(handler) -> RemoteBackend:
    return RemoteBackend(client=httpx.Client(transport=httpx.MockTransport(handler)))


def test_remote_success_payload():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["url"] = str(request.url)
        seen["auth"] = request.headers.get("authorization")
        seen["json"] = request.read()
        return httpx.Response(200, json={"choices": [{"message": {"content": "Hi."}}]})

    params = LlmParams(max_tokens=5, base_url="http://llm.test/v1", api_key="k123")
    text = _remote(handler).complete(_prompt(), params)
    assert text == "Hi."
    assert seen["url"] == "http://llm.test/v1/chat/completions"
    assert seen["auth"] == "Bearer k123"


def test_remote_auth_failure():
    backend = _remote(lambda r: httpx.Response(401, json={}))
    with pytest.raises(AuthFailure):
        backend.complete(_prompt(), LlmParams(max_tokens=5, retry_backoff=0.0))


def test_remote_rate_limit_bounded_retries():
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        return httpx.Response(429, json={})

    backend = _remote(handler)
    with pytest.raises(RateLimited):
        backend.complete(_prompt(), LlmParams(max_tokens=5, retry_backoff=0.0))
    assert calls["n"] == 3


def test_remote_retry_then_success():
    calls = {"n": 0}

    def handler(request: httpx.Request) -> httpx.Response:
        calls["n"] += 1
        if calls["n"] < 3:
            return httpx.Response(429, json={})
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    backend = _remote(handler)
    assert backend.complete(_prompt(), LlmParams(max_tokens=5, retry_backoff=0.0)) == "ok"


def test_remote_timeout():
    def handler(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectTimeout("slow")

    backend = _remote(handler)
    with pytest.raises(Timeout):
        backend.complete(_prompt(), LlmParams(max_tokens=5))


def test_remote_empty_completion():
    backend = _remote(lambda r: httpx.Response(200, json={"choices": [{"message": {"content": ""}}]}))
    with pytest.raises(EmptyCompletion):
        backend.complete(_prompt(), LlmParams(max_tokens=5))


def test_stub_pipeline_uses_no_sockets(monkeypatch, callcenter_spec):
    """The whole stub pipeline must run with zero socket use."""

    def boom(*args, **kwargs):
        raise AssertionError("socket use attempted in stub mode")

    monkeypatch.setattr(socket.socket, "connect", boom)
    from insightloom.pipeline import PipelineOptions, run_pipeline

    bundle = run_pipeline(str(il.FIXTURE_PATH), PipelineOptions(stub=True))
    assert bundle.summary is not None
    assert bundle.summary.backend is BackendKind.Stub


# --- grounding -----------------------------------------------------------------


def _selected() -> list[Insight]:
    donut_max = Fact(
        panel_id="C", insight_type=InsightType.Maximum, comparison_type=ComparisonType.Total,
        metrics=("Calls",), dimensions=("Sentiment",), dimension_values=("Negative",),
        numbers=(("value", 11063.0),), percentage=34,
    )
    decline = Fact(
        panel_id="A", insight_type=InsightType.Decline, comparison_type=ComparisonType.RelativeChange,
        metrics=("Calls",),
        date_refs=((date(2024, 10, 21), date(2024, 10, 26)),),
        numbers=(("from", 1170.0), ("to", 1054.0)), percentage=10,
    )
    return [
        Insight(id="DCS-MX", fact=donut_max, text=il.render_text(donut_max), chart_category=ChartCategory.BarLike),
        Insight(id="LC--DE", fact=decline, text=il.render_text(decline), chart_category=ChartCategory.LineLike),
    ]


def test_supported_number_with_separator():
    report = verify_grounding("Negative leads with 11,063 calls.", _selected())
    number_claims = [c for c in report.claims if c.claim_type == "number"]
    assert len(number_claims) == 1
    assert number_claims[0].verdict is Verdict.Supported
    assert number_claims[0].supporting_ids == ("DCS-MX",)


def test_unsupported_number():
    report = verify_grounding("Calls reached 12,000 this month.", _selected())
    (claim,) = [c for c in report.claims if c.claim_type == "number"]
    assert claim.verdict is Verdict.Unsupported


def test_date_membership_in_range():
    report = verify_grounding("Volume sagged around Oct. 23rd.", _selected())
    (claim,) = [c for c in report.claims if c.claim_type == "date"]
    assert claim.verdict is Verdict.Supported
    assert claim.supporting_ids == ("LC--DE",)


def test_shared_month_range_extraction():
    report = verify_grounding(
        "'Calls' fell by 10% between Oct. 21st and 26th, from 1,170 to 1,054.", _selected()
    )
    dates = [c for c in report.claims if c.claim_type == "date"]
    assert len(dates) == 2
    assert all(c.verdict is Verdict.Supported for c in dates)
    numbers = [c for c in report.claims if c.claim_type == "number"]
    assert {c.token for c in numbers} == {"10%", "1,170", "1,054"}
    assert all(c.verdict is Verdict.Supported for c in numbers)


def test_entity_case_insensitive():
    report = verify_grounding("The metric 'calls' dominated.", _selected())
    (claim,) = [c for c in report.claims if c.claim_type == "entity"]
    assert claim.verdict is Verdict.Supported


def test_title_hallucination_reenactment():
    """A stubbed summary that lifts the chart title instead of the real fact."""
    summary = (
        "'Negative' had the greatest value, with 11,063 in 'Calls' (34% in total). "
        "'Negative' had the highest 'Avg. Duration' for call reasons and sentiments."
    )
    report = verify_grounding(summary, _selected())
    unsupported = report.unsupported
    assert len(unsupported) == 1
    assert unsupported[0].claim_type == "entity"
    assert unsupported[0].token == "Avg. Duration"


def test_baseline_concat_grounds_clean(callcenter_spec, callcenter_insights):
    from insightloom.narrative import concat_baseline

    by_id = {i.id: i for i in callcenter_insights}
    ids = [i.id for i in callcenter_insights]
    summary = concat_baseline(ids, by_id)
    report = verify_grounding(summary, callcenter_insights)
    assert report.claims, "expected extractable claims"
    assert report.unsupported == []


def test_every_claim_single_verdict():
    report = verify_grounding("On Oct. 21st, 'Calls' hit 1,170 (up 99%).", _selected())
    spans = [c.span for c in report.claims]
    assert len(spans) == len(set(spans))
    for claim in report.claims:
        assert claim.verdict in (Verdict.Supported, Verdict.Unsupported)
