"""Moral-foundation scoring of token sequences.

Two interchangeable backends emit the same 10-category schema: embedding
similarity against concept vectors built from seed words, and plain seed-word
matching with per-token rates. Five foundations, each with a virtue and a
vice pole.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .ideology import EmbeddingTable

MORAL_CATEGORIES = (
    "care",
    "harm",
    "fairness",
    "cheating",
    "loyalty",
    "betrayal",
    "authority",
    "subversion",
    "purity",
    "degradation",
)

# (virtue, vice) per foundation
FOUNDATIONS = (
    ("care", "harm"),
    ("fairness", "cheating"),
    ("loyalty", "betrayal"),
    ("authority", "subversion"),
    ("purity", "degradation"),
)

DDR_DEFAULT_THRESHOLD = 0.55
LEXICON_DEFAULT_THRESHOLD = 1e-9  # any match labels the category


@dataclass
class MoralLexicon:
    """Seed words and prefix stems per moral category."""

    words: dict[str, frozenset[str]]
    stems: dict[str, tuple[str, ...]]

    def __post_init__(self):
        for cat in MORAL_CATEGORIES:
            if not self.words.get(cat) and not self.stems.get(cat):
                raise ValueError(f"moral category {cat!r} has no seed entries")

    def seeds(self, category: str) -> set[str]:
        """All seed surface forms (stems without the marker)."""
        return set(self.words.get(category, ())) | set(self.stems.get(category, ()))


@dataclass
class MoralVector:
    """Per-category scores and labels for one document."""

    scores: dict[str, float]
    labels: dict[str, bool]
    method: str


def load_moral_lexicon(path) -> MoralLexicon:
    """Read a `category<TAB>word[*]` TSV; '*' marks a prefix stem."""
    words: dict[str, set[str]] = {c: set() for c in MORAL_CATEGORIES}
    stems: dict[str, set[str]] = {c: set() for c in MORAL_CATEGORIES}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected category<TAB>word")
            cat, word = line.split("\t", 1)
            cat = cat.strip().lower()
            word = word.strip().lower()
            if cat not in MORAL_CATEGORIES:
                raise ValueError(f"{path}:{lineno}: unknown category {cat!r}")
            if not word:
                raise ValueError(f"{path}:{lineno}: empty word")
            if word.endswith("*"):
                stems[cat].add(word[:-1])
            else:
                words[cat].add(word)
    return MoralLexicon(
        words={c: frozenset(v) for c, v in words.items()},
        stems={c: tuple(sorted(v)) for c, v in stems.items()},
    )


def default_moral_lexicon() -> MoralLexicon:
    """The editable seed lexicon bundled with the package."""
    with resources.as_file(
        resources.files("wedgepipe.data").joinpath("moral_seed_lexicon.tsv")
    ) as path:
        return load_moral_lexicon(path)


def concept_vector(seeds, table: EmbeddingTable, name: str = "concept") -> np.ndarray:
    """L2-normalized mean embedding of the in-vocabulary seed words."""
    in_vocab = [table.vectors[s] for s in seeds if s in table.vectors]
    if not in_vocab:
        raise ValueError(f"no seed word of {name!r} is in the embedding vocabulary")
    mean = np.mean(in_vocab, axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        raise ValueError(f"seed words of {name!r} produce a degenerate zero vector")
    return mean / norm


def build_concepts(lexicon: MoralLexicon, table: EmbeddingTable) -> dict[str, np.ndarray]:
    """One concept vector per moral category from its seed words."""
    return {
        cat: concept_vector(lexicon.seeds(cat), table, name=cat)
        for cat in MORAL_CATEGORIES
    }


def _doc_vector(tokens, table: EmbeddingTable):
    vecs = [table.vectors[t] for t in tokens if t in table.vectors]
    if not vecs:
        return None
    mean = np.mean(vecs, axis=0)
    norm = np.linalg.norm(mean)
    if norm == 0:
        return None
    return mean / norm


def score_moral_ddr(
    tokens, concepts: dict[str, np.ndarray], table: EmbeddingTable, thresholds=None
) -> MoralVector:
    """Cosine similarity of the document embedding against each concept.

    The document is the L2-normalized mean of its in-vocabulary token
    vectors; a fully out-of-vocabulary document scores 0 everywhere (no
    labels).
    """
    if thresholds is None:
        thresholds = {c: DDR_DEFAULT_THRESHOLD for c in MORAL_CATEGORIES}
    doc = _doc_vector(tokens, table)
    scores = {}
    for cat in MORAL_CATEGORIES:
        scores[cat] = float(doc @ concepts[cat]) if doc is not None else 0.0
    labels = {c: scores[c] >= thresholds[c] for c in MORAL_CATEGORIES}
    return MoralVector(scores=scores, labels=labels, method="ddr")


def score_moral_lexicon(tokens, lexicon: MoralLexicon, thresholds=None) -> MoralVector:
    """Fraction of document tokens matching each category's seed set.

    Plain entries match whole tokens; stem entries match by prefix. Empty
    documents score 0 everywhere.
    """
    if thresholds is None:
        thresholds = {c: LEXICON_DEFAULT_THRESHOLD for c in MORAL_CATEGORIES}
    length = len(tokens)
    scores = {c: 0.0 for c in MORAL_CATEGORIES}
    if length:
        for cat in MORAL_CATEGORIES:
            words = lexicon.words.get(cat, frozenset())
            stems = lexicon.stems.get(cat, ())
            hits = 0
            for token in tokens:
                if token in words or any(token.startswith(s) for s in stems):
                    hits += 1
            scores[cat] = hits / length
    labels = {c: scores[c] >= thresholds[c] for c in MORAL_CATEGORIES}
    return MoralVector(scores=scores, labels=labels, method="lexicon")


def collapse_foundations(vector: MoralVector) -> dict[str, bool]:
    """Foundation presence: virtue OR vice, keyed 'virtue/vice'."""
    return {
        f"{virtue}/{vice}": vector.labels[virtue] or vector.labels[vice]
        for virtue, vice in FOUNDATIONS
    }


def collapse_label_map(labels: dict[str, bool]) -> dict[str, bool]:
    """Same collapse for a bare category->bool map (e.g. parsed from JSONL)."""
    return {
        f"{virtue}/{vice}": bool(labels.get(virtue)) or bool(labels.get(vice))
        for virtue, vice in FOUNDATIONS
    }
