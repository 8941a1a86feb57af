import numpy as np
import pytest

from softskill.embed import EmbeddingTable
from softskill.lexicon import load_lexicon
from softskill.matcher import Snippet


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "lexicon.tsv"
    path.write_text("1\tpolite\n1\tpolite manners\n2\tteam player\n", encoding="utf-8")
    return path


@pytest.fixture
def lexicon(lexicon_file):
    return load_lexicon(lexicon_file)


@pytest.fixture
def tiny_table():
    words = ["a", "b", "dedicated", "person", "seek"]
    rng = np.random.default_rng(3)
    return EmbeddingTable(words, rng.normal(size=(len(words), 4)), seed=0)


@pytest.fixture
def dedicated_snippet():
    # "bar and kitchen business seek a dedicated person who want to be"
    return Snippet(
        left=("bar", "and", "kitchen", "business", "seek", "a"),
        skill=("dedicated", "person"),
        right=("who", "want", "to", "be"),
        skill_id=0,
        source_id="ex:0",
    )


ACCEPTANCE_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(criterion): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    ACCEPTANCE_RESULTS.append((props["criterion"], report.outcome, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, outcome, detail in sorted(ACCEPTANCE_RESULTS):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
        terminalreporter.write_line(f"[{status}] {criterion}  {detail}")
