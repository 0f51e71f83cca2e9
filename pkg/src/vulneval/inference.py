"""Budgeted generation against a completion backend, with length-based
batching, the Vector-skip serving rule and rule-based output correction.

The backend is a wire-level interface (HTTP JSON) so any serving stack
can sit behind it; a deterministic lookup-table stub ships for tests and
hermetic runs.
"""

from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .corpus import EvaluationContext, VexCategory, VexJustification
from .cvss import (
    CvssError,
    CvssVector,
    CvssVersion,
    MetricGroup,
    metric_def,
    parse_expanded_text,
    score,
)
from .instructions import STOP_DELIMITER, TaskType, render_prompt
from .tokenizers import Tokenizer

logger = logging.getLogger(__name__)

BATCH_TOKEN_THRESHOLD = 920
CONTEXT_EXTENSION = 150
MAX_BEAM_SIZE_BEFORE_DECLINE = 7

_CATEGORY_ANCHOR = "Category:"


class BackendError(Exception):
    """Backend call failed; carries the attempt count for retry metadata."""

    def __init__(self, message: str, attempts: int = 1):
        super().__init__(message)
        self.attempts = attempts


@dataclass(frozen=True)
class GenerationBudget:
    """Maximum new tokens per task type."""

    category: int = 25
    internal_comment: int = 125
    customer_comment: int = 100
    vector: int = 100

    def __post_init__(self):
        for name in ("category", "internal_comment", "customer_comment", "vector"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    def for_task(self, task: TaskType) -> int:
        return {
            TaskType.CATEGORY: self.category,
            TaskType.INTERNAL_COMMENT: self.internal_comment,
            TaskType.CUSTOMER_COMMENT: self.customer_comment,
            TaskType.VECTOR: self.vector,
        }[task]

    def log_overrides(self) -> None:
        defaults = GenerationBudget()
        for task in TaskType:
            if self.for_task(task) != defaults.for_task(task):
                logger.info(
                    "generation budget override: %s=%d (default %d)",
                    task.value, self.for_task(task), defaults.for_task(task),
                )


@dataclass(frozen=True)
class DecodeParams:
    """Decode knobs passed through to the backend.

    Temperature and top-p are exposed but are effectively no-ops for this
    workload; beam sizes beyond 7 degrade output quality, hence the
    warning.
    """

    beam_size: int = 3
    temperature: float = 0.0
    top_p: float = 1.0

    def __post_init__(self):
        if not 1 <= self.beam_size:
            raise ValueError("beam_size must be >= 1")
        if self.beam_size > MAX_BEAM_SIZE_BEFORE_DECLINE:
            logger.warning(
                "beam_size %d exceeds %d; output quality declines steadily there",
                self.beam_size, MAX_BEAM_SIZE_BEFORE_DECLINE,
            )


class CompletionBackend(Protocol):
    def complete(
        self, prompt: str, max_new_tokens: int, stop: str, params: DecodeParams
    ) -> str:
        ...

    def max_context(self) -> int | None:
        """Largest context the backend accepts, if it knows."""
        ...


class HttpCompletionBackend:
    """POSTs {prompt, max_new_tokens, stop, beam_size, temperature, top_p}
    and expects {"text": ...} back."""

    def __init__(
        self,
        url: str,
        timeout: float = 120.0,
        max_retries: int = 2,
        retry_delay: float = 0.5,
        context_window: int | None = None,
        session: requests.Session | None = None,
    ):
        self.url = url
        self.timeout = timeout
        self.max_retries = max_retries
        self.retry_delay = retry_delay
        self._context_window = context_window
        self.session = session or requests.Session()

    def max_context(self) -> int | None:
        return self._context_window

    def complete(
        self, prompt: str, max_new_tokens: int, stop: str, params: DecodeParams
    ) -> str:
        body = {
            "prompt": prompt,
            "max_new_tokens": max_new_tokens,
            "stop": stop,
            "beam_size": params.beam_size,
            "temperature": params.temperature,
            "top_p": params.top_p,
        }
        last_error = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.retry_delay * attempt)
            try:
                response = self.session.post(self.url, json=body, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = str(exc)
                continue
            if response.status_code != 200:
                last_error = f"HTTP {response.status_code}"
                continue
            try:
                return response.json()["text"]
            except (ValueError, KeyError) as exc:
                raise BackendError(
                    f"malformed backend response: {exc}", attempts=attempt + 1
                ) from exc
        raise BackendError(
            f"backend unreachable after {self.max_retries + 1} attempts: {last_error}",
            attempts=self.max_retries + 1,
        )


class LookupTableBackend:
    """Deterministic stub: maps prompts to canned responses and records
    every call, so tests can assert on what was (not) generated."""

    def __init__(self, responses: dict[str, str], default: str | None = None):
        self.responses = dict(responses)
        self.default = default
        self.calls: list[dict] = []

    def max_context(self) -> int | None:
        return None

    def complete(
        self, prompt: str, max_new_tokens: int, stop: str, params: DecodeParams
    ) -> str:
        self.calls.append({"prompt": prompt, "max_new_tokens": max_new_tokens, "stop": stop})
        if prompt in self.responses:
            return self.responses[prompt] + stop
        if self.default is not None:
            return self.default + stop
        raise BackendError(f"no canned response for prompt of {len(prompt)} chars")

    def calls_for_instruction(self, instruction: str) -> list[dict]:
        needle = f"### Instruction: {instruction}"
        return [c for c in self.calls if needle in c["prompt"]]


# --- batching ---------------------------------------------------------------

@dataclass(frozen=True)
class BatchPlan:
    """Index partition at the token threshold, plus the context budget the
    large batch needs (extension + its longest request)."""

    small: tuple[int, ...]
    large: tuple[int, ...]
    context_budget: int | None
    threshold: int = BATCH_TOKEN_THRESHOLD


def plan_batches(
    token_counts: Sequence[int],
    threshold: int = BATCH_TOKEN_THRESHOLD,
    extension: int = CONTEXT_EXTENSION,
) -> BatchPlan:
    small = tuple(i for i, n in enumerate(token_counts) if n <= threshold)
    large = tuple(i for i, n in enumerate(token_counts) if n > threshold)
    budget = extension + max(token_counts[i] for i in large) if large else None
    return BatchPlan(small=small, large=large, context_budget=budget, threshold=threshold)


# --- drafts -----------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationDraft:
    """Model outputs for one (asset, notification) pair, before and after
    rule-based correction."""

    evaluation_key: tuple[str, str]
    cvss_version: CvssVersion
    raw: dict[str, str] = field(default_factory=dict)
    vex_category: VexCategory | None = None
    vex_justification: VexJustification | None = None
    raw_justification_text: str = ""
    internal_comment: str = ""
    customer_comment: str = ""
    vector_text: str | None = None
    vector: CvssVector | None = None
    correction_log: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    truncated_tasks: tuple[str, ...] = ()
    cvss_score: float | None = None
    timing_s: float | None = None


def parse_category_output(text: str) -> tuple[VexCategory | None, VexJustification | None, str]:
    """Split ``<justification words> Category: <category>`` model output.

    Returns (category, justification, raw justification words); category
    is None when nothing after the anchor matches either category token,
    justification is None when its words map to no known member.
    """
    anchor = text.find(_CATEGORY_ANCHOR)
    if anchor < 0:
        return None, None, text.strip()
    words = text[:anchor].strip()
    tail = text[anchor + len(_CATEGORY_ANCHOR):].strip()
    token = re.split(r"[\n.;,]", tail, maxsplit=1)[0].strip()
    squeezed = re.sub(r"[\s_-]", "", token).casefold()
    category = None
    if squeezed == "affected":
        category = VexCategory.AFFECTED
    elif squeezed == "notaffected":
        category = VexCategory.NOT_AFFECTED
    justification = None
    if words:
        try:
            justification, _ = VexJustification.parse(words)
        except ValueError:
            justification = None
    else:
        justification = VexJustification.NA
    return category, justification, words


def trim_at_stop(text: str, stop: str = STOP_DELIMITER) -> str:
    cut = text.find(stop)
    if cut >= 0:
        text = text[:cut]
    return text.strip()


def generate_task(
    prompt: str,
    task: TaskType,
    backend: CompletionBackend,
    budgets: GenerationBudget,
    params: DecodeParams,
    tokenizer: Tokenizer,
) -> tuple[str, bool]:
    """One backend call; returns (trimmed text, hit-the-budget flag)."""
    budget = budgets.for_task(task)
    raw = backend.complete(prompt, max_new_tokens=budget, stop=STOP_DELIMITER, params=params)
    text = trim_at_stop(raw)
    truncated = tokenizer.count(text) >= budget
    if truncated:
        logger.info("%s output hit the %d-token budget", task.value, budget)
    return text, truncated


def _validate_vector_text(
    vector_text: str, version: CvssVersion
) -> tuple[CvssVector | None, str | None]:
    """Rule 4's format check: parseable expanded text whose metrics are all
    environmental for the governing version."""
    try:
        vector = parse_expanded_text(vector_text, version)
    except CvssError as exc:
        return None, f"unparseable vector text: {exc}"
    for key, _ in vector.entries:
        if metric_def(version, key).group is not MetricGroup.ENVIRONMENTAL:
            return None, f"non-environmental metric in vector output: {key}"
    return vector, None


def apply_correction_rules(draft: EvaluationDraft) -> EvaluationDraft:
    """The four post-generation rules, applied in order; idempotent.

    Rules only log when they change something, so re-application is a
    no-op.  Unfixable states are flagged, never dropped.
    """
    log = list(draft.correction_log)
    flags = list(draft.flags)
    justification = draft.vex_justification
    customer = draft.customer_comment
    vector = draft.vector
    vector_text = draft.vector_text

    # Rule 1: a NotAffected evaluation carries no vector.
    if draft.vex_category is VexCategory.NOT_AFFECTED and (vector or vector_text):
        vector, vector_text = None, None
        log.append("R1")

    # Rule 2: justification text outside the enum becomes Other.
    if justification is None:
        justification = VexJustification.OTHER
        log.append("R2")

    # Rule 3: Other with an empty customer comment is a generation error;
    # reuse the internal comment when it is non-empty.
    if justification is VexJustification.OTHER and not customer.strip():
        if draft.internal_comment.strip():
            customer = draft.internal_comment
            log.append("R3")
        elif "NeedsHumanReview" not in flags:
            flags.append("NeedsHumanReview")
            log.append("R3")

    # Rule 4: Affected forces justification to NA and checks the vector
    # has the proper format.
    if draft.vex_category is VexCategory.AFFECTED:
        if justification is not VexJustification.NA:
            justification = VexJustification.NA
            log.append("R4")
        if vector is None and vector_text:
            parsed, problem = _validate_vector_text(vector_text, draft.cvss_version)
            if parsed is not None:
                vector = parsed
                log.append("R4")
            elif "InvalidVector" not in flags:
                flags.append("InvalidVector")
                logger.warning("draft %s: %s", draft.evaluation_key, problem)
                log.append("R4")

    return replace(
        draft,
        vex_justification=justification,
        customer_comment=customer,
        vector=vector,
        vector_text=vector_text,
        correction_log=tuple(log),
        flags=tuple(flags),
    )


def orchestrate_evaluation(
    context: EvaluationContext,
    backend: CompletionBackend,
    budgets: GenerationBudget,
    params: DecodeParams,
    tokenizer: Tokenizer,
    skip_vector_rule: bool = True,
) -> EvaluationDraft:
    """Generate the four outputs for one context; Vector only when the
    generated category is Affected (the serving rule)."""
    raw: dict[str, str] = {}
    truncated: list[str] = []
    flags: list[str] = []

    def run(task: TaskType) -> str:
        text, hit = generate_task(
            render_prompt(context, task), task, backend, budgets, params, tokenizer
        )
        raw[task.value] = text
        if hit:
            truncated.append(task.value)
        return text

    category_text = run(TaskType.CATEGORY)
    category, justification, justification_words = parse_category_output(category_text)
    if category is None:
        flags.append("ParseError")
        logger.warning(
            "draft %s: category output matches no category token: %r",
            context.evaluation.key, category_text,
        )

    internal = run(TaskType.INTERNAL_COMMENT)
    customer = run(TaskType.CUSTOMER_COMMENT)

    vector_text = None
    if category is VexCategory.AFFECTED or (category is not None and not skip_vector_rule):
        vector_text = run(TaskType.VECTOR)

    return EvaluationDraft(
        evaluation_key=context.evaluation.key,
        cvss_version=context.cvss_version,
        raw=raw,
        vex_category=category,
        vex_justification=justification,
        raw_justification_text=justification_words,
        internal_comment=internal,
        customer_comment=customer,
        vector_text=vector_text,
        truncated_tasks=tuple(truncated),
        flags=tuple(flags),
    )


def compute_draft_score(
    draft: EvaluationDraft, notification_vector: CvssVector | None
) -> float | None:
    """Environmental-or-base score used for queue priority."""
    if notification_vector is None:
        return None
    entries = dict(notification_vector.entries)
    if draft.vector is not None and draft.vector.version is notification_vector.version:
        entries.update(dict(draft.vector.entries))
    try:
        bundle = score(CvssVector.build(notification_vector.version, entries))
    except CvssError:
        return None
    return bundle.environmental if bundle.environmental is not None else bundle.base


# --- pipeline ---------------------------------------------------------------

@dataclass
class PipelineResult:
    drafts: list[EvaluationDraft]
    errors: list[dict]
    plan: BatchPlan


def draft_to_json(draft: EvaluationDraft) -> dict:
    return {
        "asset_id": draft.evaluation_key[0],
        "notification_id": draft.evaluation_key[1],
        "cvss_version": draft.cvss_version.value,
        "raw": draft.raw,
        "vex_category": draft.vex_category.value if draft.vex_category else None,
        "vex_justification": (
            draft.vex_justification.value if draft.vex_justification else None
        ),
        "raw_justification_text": draft.raw_justification_text,
        "internal_comment": draft.internal_comment,
        "customer_comment": draft.customer_comment,
        "vector_text": draft.vector_text,
        "vector": draft.vector.to_string() if draft.vector else None,
        "correction_log": list(draft.correction_log),
        "flags": list(draft.flags),
        "truncated_tasks": list(draft.truncated_tasks),
        "cvss_score": draft.cvss_score,
        "timing_s": draft.timing_s,
    }


def draft_from_json(obj: dict) -> EvaluationDraft:
    from .cvss import parse_vector  # local import to keep module load light

    category = VexCategory.parse(obj["vex_category"]) if obj.get("vex_category") else None
    justification = None
    if obj.get("vex_justification"):
        justification, _ = VexJustification.parse(obj["vex_justification"])
    return EvaluationDraft(
        evaluation_key=(obj["asset_id"], obj["notification_id"]),
        cvss_version=CvssVersion.from_tag(obj.get("cvss_version", "3.1")),
        raw=obj.get("raw", {}),
        vex_category=category,
        vex_justification=justification,
        raw_justification_text=obj.get("raw_justification_text", ""),
        internal_comment=obj.get("internal_comment", ""),
        customer_comment=obj.get("customer_comment", ""),
        vector_text=obj.get("vector_text"),
        vector=parse_vector(obj["vector"]) if obj.get("vector") else None,
        correction_log=tuple(obj.get("correction_log", ())),
        flags=tuple(obj.get("flags", ())),
        truncated_tasks=tuple(obj.get("truncated_tasks", ())),
        cvss_score=obj.get("cvss_score"),
        timing_s=obj.get("timing_s"),
    )


def run_pipeline(
    contexts: Sequence[EvaluationContext],
    backend: CompletionBackend,
    output_path: str | Path | None = None,
    budgets: GenerationBudget | None = None,
    params: DecodeParams | None = None,
    tokenizer: Tokenizer | None = None,
    max_workers: int = 4,
    skip_vector_rule: bool = True,
) -> PipelineResult:
    """Plan batches, orchestrate every context, correct, score, persist.

    Per-item failures become error records; the pipeline continues.
    """
    from .tokenizers import get_tokenizer

    budgets = budgets or GenerationBudget()
    budgets.log_overrides()
    params = params or DecodeParams()
    tokenizer = tokenizer or get_tokenizer()

    prompt_tokens = [
        max(tokenizer.count(render_prompt(c, task)) for task in TaskType)
        for c in contexts
    ]
    plan = plan_batches(prompt_tokens)
    limit = backend.max_context()
    if plan.context_budget and limit and plan.context_budget > limit:
        logger.warning(
            "large batch needs %d tokens of context but the backend caps at %d",
            plan.context_budget, limit,
        )

    def process(index: int):
        context = contexts[index]
        started = time.perf_counter()
        draft = orchestrate_evaluation(
            context, backend, budgets, params, tokenizer, skip_vector_rule
        )
        draft = apply_correction_rules(draft)
        draft = replace(
            draft,
            cvss_score=compute_draft_score(draft, context.notification.base_temporal_vector),
            timing_s=round(time.perf_counter() - started, 6),
        )
        return index, draft

    drafts_by_index: dict[int, EvaluationDraft] = {}
    errors: list[dict] = []
    for batch in (plan.small, plan.large):
        if not batch:
            continue
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for index, outcome in zip(batch, pool.map(
                lambda i: _safe(process, i, contexts), batch
            )):
                if isinstance(outcome, dict):
                    errors.append(outcome)
                else:
                    drafts_by_index[index] = outcome[1]

    drafts = [drafts_by_index[i] for i in sorted(drafts_by_index)]
    if output_path is not None:
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            for draft in drafts:
                handle.write(json.dumps(draft_to_json(draft), sort_keys=True) + "\n")
            for error in errors:
                handle.write(json.dumps({"error": error}, sort_keys=True) + "\n")
    return PipelineResult(drafts=drafts, errors=errors, plan=plan)


def _safe(fn, index, contexts):
    try:
        return fn(index)
    except BackendError as exc:
        key = contexts[index].evaluation.key
        logger.error("draft %s failed: %s", key, exc)
        return {
            "asset_id": key[0],
            "notification_id": key[1],
            "message": str(exc),
            "attempts": exc.attempts,
        }


def load_drafts(path: str | Path) -> tuple[list[EvaluationDraft], list[dict]]:
    drafts, errors = [], []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            if "error" in obj:
                errors.append(obj["error"])
            else:
                drafts.append(draft_from_json(obj))
    return drafts, errors
