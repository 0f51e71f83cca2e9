"""Shared fixtures: sample stores, contexts, and the acceptance summary."""

from __future__ import annotations

from pathlib import Path

import pytest

from vulneval import corpus
from vulneval.tokenizers import get_tokenizer

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = Path(__file__).resolve().parent / "data"
GOLDEN_DIR = DATA_DIR / "golden"
SAMPLEDATA = REPO_ROOT / "sampledata"


@pytest.fixture(scope="session")
def sample_assets():
    return corpus.index_by_id(
        corpus.load_store(SAMPLEDATA / "assets.jsonl", corpus.StoreKind.ASSETS),
        corpus.StoreKind.ASSETS,
    )


@pytest.fixture(scope="session")
def sample_notifications():
    return corpus.index_by_id(
        corpus.load_store(
            SAMPLEDATA / "notifications.jsonl", corpus.StoreKind.NOTIFICATIONS
        ),
        corpus.StoreKind.NOTIFICATIONS,
    )


@pytest.fixture(scope="session")
def sample_evaluations():
    return corpus.load_store(
        SAMPLEDATA / "evaluations.jsonl", corpus.StoreKind.EVALUATIONS
    )


@pytest.fixture(scope="session")
def usable_contexts(sample_assets, sample_notifications, sample_evaluations):
    contexts = []
    for evaluation in sample_evaluations:
        if corpus.validate_evaluation(evaluation) is corpus.Verdict.USABLE:
            contexts.append(
                corpus.join_evaluation(evaluation, sample_assets, sample_notifications)
            )
    return contexts


@pytest.fixture(scope="session")
def paper_context(usable_contexts):
    """The worked-example context: (A-0001, N-0001)."""
    for context in usable_contexts:
        if context.evaluation.key == ("A-0001", "N-0001"):
            return context
    raise AssertionError("paper example context missing from sampledata")


@pytest.fixture(scope="session")
def word_tokenizer():
    return get_tokenizer("word")


# --- acceptance criterion bookkeeping ---------------------------------------

ACCEPTANCE_RESULTS: list[tuple[str, bool]] = []


def record_criterion(name: str):
    """Context manager marking one acceptance criterion pass/fail."""

    class _Recorder:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            ACCEPTANCE_RESULTS.append((name, exc_type is None))
            return False

    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}")
