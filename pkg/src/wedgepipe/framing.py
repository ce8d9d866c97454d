"""Adjective-anchor framing phrases from dependency parses, ranked by
smoothed log-odds between two groups of documents.

Parses arrive as CoNLL-U (produced by an external parser). An adjective
frames an issue anchor either by modifying a token inside the anchor span
directly, or by modifying the same head as an anchor token does (sibling
modifiers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .tagger import IssueMatcher

AMOD = "amod"

_CONLLU_COLUMNS = 10


class ConlluError(ValueError):
    """CoNLL-U input violates the format."""


@dataclass
class ParsedToken:
    form: str
    lemma: str
    upos: str
    head: int  # 1-based; 0 = root
    deprel: str


@dataclass
class ParsedSentence:
    tokens: list[ParsedToken]
    metadata: dict[str, str] = field(default_factory=dict)

    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens]


@dataclass(frozen=True)
class FramePhrase:
    """adjective_anchor pair tied to the anchor's issue."""

    adjective: str
    anchor: str
    key: str
    issue: str


def parse_conllu(path):
    """Yield ParsedSentence per sentence of a CoNLL-U file.

    Comment lines populate sentence metadata (`# key = value`); multiword-token
    and empty-node lines are skipped. Head indices out of range, or a root
    count other than one, are fatal with the offending line number.
    """
    with open(path, "r", encoding="utf-8") as handle:
        tokens: list[ParsedToken] = []
        meta: dict[str, str] = {}
        token_lines: list[int] = []

        def flush(last_line):
            if not tokens:
                meta.clear()
                return None
            for lineno, tok in zip(token_lines, tokens):
                if not 0 <= tok.head <= len(tokens):
                    raise ConlluError(
                        f"{path}:{lineno}: head index {tok.head} out of range "
                        f"for a {len(tokens)}-token sentence"
                    )
            roots = sum(1 for t in tokens if t.head == 0)
            if roots != 1:
                raise ConlluError(
                    f"{path}:{last_line}: sentence has {roots} roots, expected 1"
                )
            sentence = ParsedSentence(tokens=list(tokens), metadata=dict(meta))
            tokens.clear()
            token_lines.clear()
            meta.clear()
            return sentence

        lineno = 0
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                sentence = flush(lineno)
                if sentence:
                    yield sentence
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            cols = line.split("\t")
            if len(cols) != _CONLLU_COLUMNS:
                raise ConlluError(
                    f"{path}:{lineno}: expected {_CONLLU_COLUMNS} tab-separated "
                    f"columns, got {len(cols)}"
                )
            token_id = cols[0]
            if "-" in token_id or "." in token_id:
                continue  # multiword-token ranges and empty nodes
            try:
                head = int(cols[6])
            except ValueError as exc:
                raise ConlluError(f"{path}:{lineno}: non-integer head {cols[6]!r}") from exc
            tokens.append(
                ParsedToken(
                    form=cols[1],
                    lemma=cols[2].lower(),
                    upos=cols[3],
                    head=head,
                    deprel=cols[7],
                )
            )
            token_lines.append(lineno)
        sentence = flush(lineno)
        if sentence:
            yield sentence


def extract_frames(sentence: ParsedSentence, matcher: IssueMatcher) -> list[FramePhrase]:
    """Framing phrases of a sentence against the anchor lexicon.

    Anchor spans are found by running the token matcher over the sentence's
    lowercased lemmas. A modifier token XX (deprel 'amod', any POS) pairs with
    an anchor when (1) its head lies inside the anchor span, or (2) XX and an
    anchor token modify the same head. Modifiers inside the span itself are
    not frames of that anchor. Output is deduplicated and sorted.
    """
    lemmas = sentence.lemmas()
    spans = matcher.find_spans(lemmas)
    if not spans:
        return []
    tokens = sentence.tokens
    modifiers = [i for i, t in enumerate(tokens) if t.deprel == AMOD]
    found: set[FramePhrase] = set()
    for span in spans:
        span_range = range(span.start, span.end)
        # heads that an anchor token modifies (pattern 2 shared heads)
        anchor_mod_heads = {
            tokens[j].head - 1
            for j in span_range
            if tokens[j].deprel == AMOD and tokens[j].head > 0
        }
        for i in modifiers:
            if i in span_range:
                continue
            head = tokens[i].head - 1
            direct = head in span_range
            sibling = head in anchor_mod_heads
            if not (direct or sibling):
                continue
            adjective = lemmas[i]
            for issue in sorted(span.issues):
                found.add(
                    FramePhrase(
                        adjective=adjective,
                        anchor=span.phrase,
                        key=f"{adjective}_{span.phrase}",
                        issue=issue,
                    )
                )
    return sorted(found, key=lambda f: (f.issue, f.key))


def log_odds(counts_a: dict, counts_b: dict, alpha: float) -> dict:
    """Smoothed log-odds ratio per phrase; positive favors group a.

    score(p) = log((a_p+alpha)/(A-a_p+alpha)) - log((b_p+alpha)/(B-b_p+alpha))
    with A, B the group totals.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    total_a = sum(counts_a.values())
    total_b = sum(counts_b.values())
    if total_a == 0 and total_b == 0:
        raise ValueError("both groups have zero counts")
    scores = {}
    for phrase in set(counts_a) | set(counts_b):
        a = counts_a.get(phrase, 0)
        b = counts_b.get(phrase, 0)
        scores[phrase] = math.log((a + alpha) / (total_a - a + alpha)) - math.log(
            (b + alpha) / (total_b - b + alpha)
        )
    return scores


def apply_frequency_floor(counts_a: dict, counts_b: dict, floor: int):
    """Drop phrases whose combined count is under the floor."""
    keep = {
        p
        for p in set(counts_a) | set(counts_b)
        if counts_a.get(p, 0) + counts_b.get(p, 0) >= floor
    }
    return (
        {p: n for p, n in counts_a.items() if p in keep},
        {p: n for p, n in counts_b.items() if p in keep},
    )


def top_phrases(scores: dict, k: int, direction: str = "a"):
    """Top-k (phrase, score) pairs for one side of the comparison.

    direction 'a' ranks by descending score, 'b' by ascending; ties break
    lexicographically.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if direction not in ("a", "b"):
        raise ValueError(f"direction must be 'a' or 'b', got {direction!r}")
    if direction == "a":
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    else:
        ranked = sorted(scores.items(), key=lambda kv: (kv[1], kv[0]))
    return ranked[:k]
