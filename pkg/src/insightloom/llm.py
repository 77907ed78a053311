"""LLM summarization gateway and grounding verification.

The remote backend speaks the OpenAI-compatible chat-completions wire
format. The stub backend is a deterministic offline stand-in so the whole
pipeline runs hermetically. Grounding checks every number, date, and quoted
entity in a summary against the structured fields of the selected facts.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
import time
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Callable, Iterable, Protocol

import httpx

from .facts import Fact, Insight
from .narrative import PromptDoc


class LlmError(Exception):
    pass


class Timeout(LlmError):
    pass


class AuthFailure(LlmError):
    pass


class RateLimited(LlmError):
    pass


class EmptyCompletion(LlmError):
    pass


DEFAULT_TEMPERATURE = 0.5


@dataclass
class LlmParams:
    model: str = "gpt-3.5-turbo"
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = 256
    timeout: float = 30.0
    base_url: str = "https://api.openai.com/v1"
    api_key: str = ""
    retry_backoff: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be within [0, 2]")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be at least 1")


def params_from_env(max_tokens: int, env: dict | None = None) -> LlmParams:
    e = os.environ if env is None else env
    return LlmParams(
        model=e.get("LLM_MODEL", "gpt-3.5-turbo"),
        temperature=float(e.get("LLM_TEMPERATURE", DEFAULT_TEMPERATURE)),
        max_tokens=max_tokens,
        base_url=e.get("LLM_BASE_URL", "https://api.openai.com/v1"),
        api_key=e.get("LLM_API_KEY", ""),
    )


def estimate_tokens(texts: Iterable[str], chars_per_token: int = 4) -> int:
    """Cheap token estimate: one token per four characters, rounded up."""
    total = sum(len(t) for t in texts)
    return math.ceil(total / chars_per_token)


class BackendKind(str, Enum):
    Remote = "Remote"
    Stub = "Stub"


@dataclass
class SummaryResult:
    summary_text: str
    prompt_used: str
    params: LlmParams
    backend: BackendKind
    latency_ms: float


class Backend(Protocol):
    kind: BackendKind

    def complete(self, prompt: PromptDoc, params: LlmParams) -> str: ...


def prompt_fingerprint(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class StubBackend:
    """Deterministic offline backend.

    Responses are looked up by a hash of the full prompt text; unscripted
    prompts fall back to concatenating the prompt's own paragraphs.
    """

    kind = BackendKind.Stub

    def __init__(self, script: dict[str, str] | None = None):
        self.script = dict(script or {})
        self.requests: list[dict] = []  # recorded payloads, for assertions

    def script_response(self, prompt_text: str, response: str) -> None:
        self.script[prompt_fingerprint(prompt_text)] = response

    def complete(self, prompt: PromptDoc, params: LlmParams) -> str:
        self.requests.append(
            {
                "model": params.model,
                "messages": [
                    {"role": "system", "content": prompt.instruction},
                    {"role": "user", "content": prompt.body},
                ],
                "temperature": params.temperature,
                "max_tokens": params.max_tokens,
            }
        )
        key = prompt_fingerprint(prompt.text)
        if key in self.script:
            return self.script[key]
        return ". ".join(p.rstrip(".") for p in prompt.paragraphs) + "."


class RemoteBackend:
    """OpenAI-compatible chat-completions client with bounded retry."""

    kind = BackendKind.Remote
    MAX_ATTEMPTS = 3

    def __init__(self, client: httpx.Client | None = None):
        self._client = client

    def complete(self, prompt: PromptDoc, params: LlmParams) -> str:
        payload = {
            "model": params.model,
            "messages": [
                {"role": "system", "content": prompt.instruction},
                {"role": "user", "content": prompt.body},
            ],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        headers = {"Authorization": f"Bearer {params.api_key}"}
        url = params.base_url.rstrip("/") + "/chat/completions"
        client = self._client or httpx.Client(timeout=params.timeout)
        try:
            for attempt in range(self.MAX_ATTEMPTS):
                try:
                    response = client.post(url, json=payload, headers=headers)
                except httpx.TimeoutException as exc:
                    raise Timeout(str(exc)) from exc
                if response.status_code in (401, 403):
                    raise AuthFailure(f"HTTP {response.status_code}")
                if response.status_code == 429:
                    if attempt == self.MAX_ATTEMPTS - 1:
                        raise RateLimited("rate limited after retries")
                    time.sleep(params.retry_backoff * 2**attempt)
                    continue
                if response.status_code >= 400:
                    raise LlmError(f"HTTP {response.status_code}: {response.text[:200]}")
                choices = response.json().get("choices", [])
                content = choices[0]["message"]["content"] if choices else ""
                if not content:
                    raise EmptyCompletion("backend returned no content")
                return content
            raise RateLimited("rate limited after retries")  # pragma: no cover
        finally:
            if self._client is None:
                client.close()


def generate_summary(
    prompt: PromptDoc,
    params: LlmParams,
    backend: Backend,
    dry_run: bool = False,
) -> SummaryResult:
    """Run one summarization request (or none, in dry-run mode)."""
    if dry_run:
        return SummaryResult(
            summary_text="",
            prompt_used=prompt.text,
            params=params,
            backend=backend.kind,
            latency_ms=0.0,
        )
    started = time.perf_counter()
    text = backend.complete(prompt, params)
    if not text.strip():
        raise EmptyCompletion("backend returned an empty summary")
    return SummaryResult(
        summary_text=text,
        prompt_used=prompt.text,
        params=params,
        backend=backend.kind,
        latency_ms=(time.perf_counter() - started) * 1000.0,
    )


# --- grounding ----------------------------------------------------------------


class Verdict(str, Enum):
    Supported = "Supported"
    Unsupported = "Unsupported"


@dataclass(frozen=True)
class Claim:
    token: str
    span: tuple[int, int]
    claim_type: str  # "number" | "date" | "entity"
    verdict: Verdict
    supporting_ids: tuple[str, ...] = ()


@dataclass
class GroundingReport:
    claims: list[Claim]

    @property
    def unsupported(self) -> list[Claim]:
        return [c for c in self.claims if c.verdict is Verdict.Unsupported]

    def to_json(self) -> dict:
        return {
            "claims": [
                {
                    "token": c.token,
                    "span": list(c.span),
                    "type": c.claim_type,
                    "verdict": c.verdict.value,
                    "supportingInsightIds": list(c.supporting_ids),
                }
                for c in self.claims
            ],
            "unsupportedCount": len(self.unsupported),
        }


_MONTH_NUM = {
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "may": 5, "jun": 6,
    "jul": 7, "aug": 8, "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
    "january": 1, "february": 2, "march": 3, "april": 4, "june": 6, "july": 7,
    "august": 8, "september": 9, "october": 10, "november": 11, "december": 12,
}

_MONTH_RE = (
    r"(?:Jan(?:uary)?|Feb(?:ruary)?|Mar(?:ch)?|Apr(?:il)?|May|Jun(?:e)?|Jul(?:y)?|"
    r"Aug(?:ust)?|Sep(?:t(?:ember)?)?|Oct(?:ober)?|Nov(?:ember)?|Dec(?:ember)?)"
)
_DAY_RE = r"\d{1,2}(?:st|nd|rd|th)?"
_DATE_RE = re.compile(
    rf"(?P<month>{_MONTH_RE})\.?\s+(?P<day>{_DAY_RE})"
    rf"(?:\s+(?:and|to|through)\s+(?P<day2>{_DAY_RE})(?!\s*{_MONTH_RE}))?"
)
_NUMBER_RE = re.compile(r"\d{1,3}(?:,\d{3})+(?:\.\d+)?%?|\d+(?:\.\d+)?%?")
_ORDINAL_RE = re.compile(r"^\d{1,2}(st|nd|rd|th)$")
_ENTITY_RE = re.compile(r"[\'‘](?P<name>[^\'‘’]{1,80})[\'’]")


def _day_number(token: str) -> int:
    return int(re.sub(r"(st|nd|rd|th)$", "", token))


def _fact_numbers(fact: Fact) -> list[float]:
    numbers = [value for _, value in fact.numbers]
    if fact.percentage is not None:
        numbers.append(float(fact.percentage))
    return numbers


def _fact_entities(fact: Fact) -> set[str]:
    entities = {*fact.metrics, *fact.dimensions, *fact.dimension_values}
    if fact.filter_segment:
        entities.update(fact.filter_segment)
    if fact.dimensions:
        for v in fact.dimension_values:
            entities.add(f"{fact.dimensions[0]} [{v}]")
    return {e.lower() for e in entities}


def _fact_has_date(fact: Fact, month: int, day: int) -> bool:
    for ref in fact.date_refs:
        lo, hi = (ref if isinstance(ref, tuple) else (ref, ref))
        d = lo
        while d <= hi:
            if d.month == month and d.day == day:
                return True
            d = date.fromordinal(d.toordinal() + 1)
    return False


def verify_grounding(summary: str, insights: list[Insight]) -> GroundingReport:
    """Check every number, date, and quoted entity against the selected facts.

    Dates match on calendar equality or membership in a fact's range;
    numbers after separator/percent normalization; entities case-insensitively.
    """
    if not summary:
        raise ValueError("summary is empty")
    claims: list[Claim] = []
    masked = list(summary)

    def mask(start: int, end: int) -> None:
        for i in range(start, end):
            masked[i] = "\x00"

    for m in _DATE_RE.finditer(summary):
        month = _MONTH_NUM[m.group("month").lower().rstrip(".")]
        day_tokens = [("day", m.group("day"))]
        if m.group("day2"):
            day_tokens.append(("day2", m.group("day2")))
        for group_name, token in day_tokens:
            day = _day_number(token)
            supporting = tuple(
                i.id for i in insights if _fact_has_date(i.fact, month, day)
            )
            shown = token if group_name == "day2" else summary[m.start() : m.span("day")[1]]
            claims.append(
                Claim(
                    token=shown,
                    span=m.span(group_name),
                    claim_type="date",
                    verdict=Verdict.Supported if supporting else Verdict.Unsupported,
                    supporting_ids=supporting,
                )
            )
        mask(m.start(), m.end())

    masked_text = "".join(masked)
    for m in _NUMBER_RE.finditer(masked_text):
        token = m.group()
        if _ORDINAL_RE.match(masked_text[m.start() : m.end() + 2].strip()):
            continue
        value = float(token.replace(",", "").rstrip("%"))
        supporting = tuple(
            i.id
            for i in insights
            if any(math.isclose(value, n, rel_tol=0, abs_tol=1e-9) for n in _fact_numbers(i.fact))
        )
        claims.append(
            Claim(
                token=token,
                span=m.span(),
                claim_type="number",
                verdict=Verdict.Supported if supporting else Verdict.Unsupported,
                supporting_ids=supporting,
            )
        )

    for m in _ENTITY_RE.finditer(summary):
        name = m.group("name").strip()
        if not name:
            continue
        supporting = tuple(
            i.id for i in insights if name.lower() in _fact_entities(i.fact)
        )
        claims.append(
            Claim(
                token=name,
                span=m.span("name"),
                claim_type="entity",
                verdict=Verdict.Supported if supporting else Verdict.Unsupported,
                supporting_ids=supporting,
            )
        )

    claims.sort(key=lambda c: c.span)
    return GroundingReport(claims=claims)
