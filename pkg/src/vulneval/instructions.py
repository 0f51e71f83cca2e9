"""Instruction-record rendering, filtering, dedup, splits and vocabulary.

Prompts follow the Alpaca layout with the evaluation context flattened
into a fixed field block; the rendering is frozen byte-for-byte by golden
fixtures under tests/data/golden/.
"""

from __future__ import annotations

import enum
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Asset, EvaluationContext, Notification
from .cvss import (
    CvssVector,
    MetricGroup,
    diff_environmental,
    expand_to_text,
)
from .tokenizers import Tokenizer, is_single_token

logger = logging.getLogger(__name__)

STOP_DELIMITER = "<STOP>"
MAX_RECORD_TOKENS = 1048

PROMPT_HEADER = (
    "Below is an instruction that describes a task, paired with an input "
    "that provides further context. Write a response that appropriately "
    "completes the request."
)

BASE_TEMPORAL = frozenset({MetricGroup.BASE, MetricGroup.TEMPORAL})
ENVIRONMENTAL = frozenset({MetricGroup.ENVIRONMENTAL})


class RenderError(Exception):
    """A mandatory prompt field is missing or empty."""


class TaskType(enum.Enum):
    CATEGORY = "Category"
    INTERNAL_COMMENT = "InternalComment"
    CUSTOMER_COMMENT = "CustomerComment"
    VECTOR = "Vector"

    @property
    def instruction(self) -> str:
        return _INSTRUCTIONS[self]


_INSTRUCTIONS = {
    TaskType.CATEGORY: "What is the category?",
    TaskType.INTERNAL_COMMENT: "Generate internal comment.",
    TaskType.CUSTOMER_COMMENT: "Generate customer comment.",
    TaskType.VECTOR: "Generate environmental vectors.",
}

# "Generate internal comments." appears in the wild; the instruction table
# form above is canonical.
_INSTRUCTION_ALIASES = {
    "Generate internal comments.": TaskType.INTERNAL_COMMENT,
    "Generate customer comments.": TaskType.CUSTOMER_COMMENT,
}


def task_for_instruction(text: str) -> TaskType:
    for task, instruction in _INSTRUCTIONS.items():
        if instruction == text:
            return task
    if text in _INSTRUCTION_ALIASES:
        return _INSTRUCTION_ALIASES[text]
    raise ValueError(f"unknown instruction text: {text!r}")


@dataclass(frozen=True)
class InstructionRecord:
    task: TaskType
    prompt: str
    response: str
    token_count: int
    evaluation_key: tuple[str, str]
    dedup_key: tuple

    @property
    def instruction(self) -> str:
        return self.task.instruction

    @property
    def training_text(self) -> str:
        return f"{self.prompt} {self.response}\n\n{STOP_DELIMITER}"


def _notification_vector(context: EvaluationContext) -> CvssVector:
    vector = context.notification.base_temporal_vector
    if vector is None:
        return CvssVector.empty(context.cvss_version)
    if vector.version is not context.cvss_version:
        vector = CvssVector.build(context.cvss_version, vector.entries)
    return vector


def _evaluation_vector(context: EvaluationContext) -> CvssVector:
    vector = context.evaluation.vector
    if vector is None:
        return CvssVector.empty(context.cvss_version)
    if vector.version is not context.cvss_version:
        vector = CvssVector.build(context.cvss_version, vector.entries)
    return vector


def render_input_block(context: EvaluationContext) -> str:
    """The field block between "### Input:" and "### Response:"."""
    asset = context.asset
    required = {
        "Organization": asset.sub_organization,
        "Software": asset.software_name_version,
        "Product": asset.product_name_version,
        "Notification": context.cleaned_description,
    }
    for label, value in required.items():
        if not (value or "").strip():
            raise RenderError(f"mandatory field {label!r} is empty")
    components = "; ".join(c.description for c in context.common_components)
    vector_text = expand_to_text(
        _notification_vector(context), BASE_TEMPORAL, fill_missing=True
    )
    lines = [
        f"Organization: {asset.sub_organization}",
        f"Software: {asset.software_name_version}",
        f"Product: {asset.product_name_version}",
        f"Notification: {context.cleaned_description}",
        f"Components present in software: {components}",
        f"Base and Temporal Vectors: {vector_text}",
        f"CVSS Version: {context.cvss_version.value}",
    ]
    return "\n".join(lines)


def render_prompt(context: EvaluationContext, task: TaskType) -> str:
    """Full prompt up to and including "### Response:"."""
    return (
        f"{PROMPT_HEADER}\n\n"
        f"### Instruction: {task.instruction}\n\n"
        f"### Input:\n\n"
        f"{render_input_block(context)}\n\n"
        f"### Response:"
    )


def render_response(context: EvaluationContext, task: TaskType) -> str:
    evaluation = context.evaluation
    if task is TaskType.CATEGORY:
        words = evaluation.vex_justification.words
        category = evaluation.vex_category.value if evaluation.vex_category else ""
        return f"{words} Category: {category}".strip()
    if task is TaskType.INTERNAL_COMMENT:
        return evaluation.internal_comment
    if task is TaskType.CUSTOMER_COMMENT:
        return evaluation.customer_comment
    new_components = diff_environmental(
        _evaluation_vector(context), _notification_vector(context)
    )
    return expand_to_text(new_components, ENVIRONMENTAL, fill_missing=True)


def _dedup_key(context: EvaluationContext, task: TaskType) -> tuple:
    evaluation = context.evaluation
    return (
        task.value,
        context.asset.software_name_version,
        context.cleaned_description,
        evaluation.vex_category.value if evaluation.vex_category else None,
        evaluation.vex_justification.value,
        evaluation.internal_comment,
        evaluation.customer_comment,
        evaluation.vector.to_string() if evaluation.vector else None,
    )


def render_instruction(
    context: EvaluationContext, task: TaskType, tokenizer: Tokenizer
) -> InstructionRecord:
    prompt = render_prompt(context, task)
    response = render_response(context, task)
    training_text = f"{prompt} {response}\n\n{STOP_DELIMITER}"
    return InstructionRecord(
        task=task,
        prompt=prompt,
        response=response,
        token_count=tokenizer.count(training_text),
        evaluation_key=context.evaluation.key,
        dedup_key=_dedup_key(context, task),
    )


def render_all_tasks(
    context: EvaluationContext, tokenizer: Tokenizer
) -> list[InstructionRecord]:
    return [render_instruction(context, task, tokenizer) for task in TaskType]


def filter_records(
    records: Sequence[InstructionRecord], max_tokens: int = MAX_RECORD_TOKENS
) -> tuple[list[InstructionRecord], dict[str, int]]:
    """Drop records whose token count exceeds the limit (strictly)."""
    kept = []
    report = {"TokenLimit": 0}
    for record in records:
        if record.token_count > max_tokens:
            report["TokenLimit"] += 1
            logger.info(
                "dropping %s record for %s: %d tokens",
                record.task.value, record.evaluation_key, record.token_count,
            )
        else:
            kept.append(record)
    return kept, report


def deduplicate(records: Sequence[InstructionRecord]) -> list[InstructionRecord]:
    """Keep the first record per (task, software, description, evaluation)."""
    seen = set()
    kept = []
    for record in records:
        if record.dedup_key in seen:
            continue
        seen.add(record.dedup_key)
        kept.append(record)
    return kept


def to_alpaca_json(record: InstructionRecord) -> dict:
    return {
        "instruction": record.instruction,
        "input": render_input_of(record),
        "output": f"{record.response}\n\n{STOP_DELIMITER}",
    }


def render_input_of(record: InstructionRecord) -> str:
    """Extract the input block back out of a rendered prompt."""
    _, _, rest = record.prompt.partition("### Input:\n\n")
    block, _, _ = rest.partition("\n\n### Response:")
    return block


def split_dataset(
    records: Sequence[InstructionRecord],
    seed: int,
    out_dir: str | Path,
    group_by_key: bool = True,
) -> dict:
    """Deterministic 80:10:10 split written as Alpaca JSONL files.

    With ``group_by_key`` every record of one evaluation lands in the same
    split (no leakage across its task records); disable it to mirror a
    pure record-level random split.
    """
    if not records:
        raise ValueError("cannot split an empty record list")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    if group_by_key:
        keys = list(dict.fromkeys(r.evaluation_key for r in records))
        rng.shuffle(keys)
        units: list[list[InstructionRecord]] = [
            [r for r in records if r.evaluation_key == key] for key in keys
        ]
    else:
        units = [[r] for r in records]
        rng.shuffle(units)

    n = len(units)
    train_n = int(n * 0.8)
    valid_n = int(n * 0.1)
    splits = {
        "train": units[:train_n],
        "valid": units[train_n:train_n + valid_n],
        "test": units[train_n + valid_n:],
    }

    manifest: dict = {"seed": seed, "group_by_key": group_by_key, "splits": {}}
    for name, split_units in splits.items():
        flat = [record for unit in split_units for record in unit]
        path = out / f"{name}.jsonl"
        with open(path, "w", encoding="utf-8") as handle:
            for record in flat:
                handle.write(json.dumps(to_alpaca_json(record), sort_keys=True) + "\n")
        manifest["splits"][name] = {
            "records": len(flat),
            "evaluation_keys": sorted({"|".join(r.evaluation_key) for r in flat}),
        }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def extract_vocab_tokens(
    assets: Iterable[Asset],
    notifications: Iterable[Notification],
    tokenizer: Tokenizer,
) -> list[str]:
    """New-vocabulary candidates: first words of component/software names
    that the tokenizer cannot already express as one token."""
    candidates = set()
    for asset in assets:
        for source in [asset.software_name_version, *(c.name for c in asset.components)]:
            words = source.split()
            if words:
                candidates.add(words[0])
    for notification in notifications:
        for component in notification.affected_components:
            words = component.name.split()
            if words:
                candidates.add(words[0])
    return sorted(
        word for word in candidates if not is_single_token(tokenizer, word)
    )
