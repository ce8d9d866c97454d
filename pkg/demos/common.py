"""Shared helper for the demo scripts: a cached synthetic workspace."""

from pathlib import Path

from wedgepipe.synthetic import generate_fixture

WORKSPACE = Path(__file__).parent / "_workspace"


def ensure_fixture(seed: int = 7) -> Path:
    """Generate the demo input corpus once and reuse it across scripts."""
    marker = WORKSPACE / "tweets.jsonl"
    if not marker.exists():
        print(f"generating synthetic corpus under {WORKSPACE} ...")
        generate_fixture(WORKSPACE, seed=seed)
    return WORKSPACE
