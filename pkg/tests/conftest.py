"""Shared fixtures: sample wedge-issue tweets, a miniature curated lexicon,
and the acceptance-criteria reporting hook."""

import pytest

from wedgepipe.lexicon import IssueLexicon

_criterion_results: dict[int, tuple[str, bool]] = {}


def record_criterion(number: int, description: str, passed: bool) -> None:
    _criterion_results[number] = (description, passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_results):
        description, passed = _criterion_results[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number:>2}: {description}")

# Sample tweets exercising one wedge issue each, with the phrase the curated
# lexicon is expected to catch.
SAMPLE_TWEETS = {
    "origins": (
        "No matter what the Chinese Communist Party says, given the mounting "
        "evidence, the most likely origins for the China virus are the Wuhan "
        "labs studying bats and coronavirus."
    ),
    "lockdowns": (
        "This is a GREAT idea. We're all in this together. Take care of each "
        "other. #StayHome #TakeItSeriously #FlattenTheCurve #COVID19"
    ),
    "masking": (
        "We’re in the middle of a pandemic and y’all are still "
        "coughing and sneezing without covering your mouths? Come on now."
    ),
    "education": (
        "More glimmers of hope as we “safely” move forward and open "
        "up Texas A&M University while containing #COVID19."
    ),
    "vaccines": (
        "You are joking right? Zero sympathy for anti-vaxxers who quit their "
        "jobs rather than get vaccinated. They put us all at risk and make "
        "the pandemic prolonged for the world."
    ),
}

SAMPLE_LEXICON_ENTRIES = {
    "origins": ["wuhan labs"],
    "lockdowns": ["#StayHome"],
    "masking": ["covering your mouths"],
    "education": ["University"],
    "vaccines": ["anti-vaxxers", "vaccinated"],
}


@pytest.fixture
def sample_lexicons():
    from wedgepipe.corpus import normalize

    lexicons = []
    for issue, phrases in SAMPLE_LEXICON_ENTRIES.items():
        keys = frozenset("_".join(normalize(p)) for p in phrases)
        lexicons.append(IssueLexicon(issue=issue, phrases=keys))
    return lexicons


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """One synthetic input corpus shared by the CLI tests."""
    from wedgepipe.synthetic import generate_fixture

    root = tmp_path_factory.mktemp("fixture")
    generate_fixture(root, seed=7)
    return root
