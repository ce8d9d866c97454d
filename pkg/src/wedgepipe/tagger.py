"""Multi-pattern issue tagging over normalized token sequences.

The matcher is an Aho-Corasick automaton whose alphabet is whole tokens, so
phrase hits are exact at token boundaries ("mask" never fires inside
"maskne") and the per-token matching cost does not grow with the number of
phrases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import TweetRecord, normalize
from .lexicon import IssueLexicon


@dataclass
class IssueLabelSet:
    """Issues detected in one document plus the phrases that fired."""

    labels: frozenset[str] = frozenset()
    matched_phrases: tuple[str, ...] = ()


@dataclass(frozen=True)
class MatchSpan:
    """One phrase occurrence: token span [start, end), phrase key and issues."""

    start: int
    end: int
    phrase: str
    issues: frozenset[str]


class IssueMatcher:
    """Immutable token-sequence automaton over all lexicon phrases."""

    def __init__(self, lexicons):
        lexicons = list(lexicons)
        if not lexicons or not any(lex.phrases for lex in lexicons):
            raise ValueError("cannot build a matcher from an empty phrase set")

        # phrase key -> issues (a phrase shared across issues labels all of them)
        self.phrase_issues: dict[str, frozenset[str]] = {}
        grouped: dict[str, set[str]] = {}
        for lex in lexicons:
            for key in lex.phrases:
                grouped.setdefault(key, set()).add(lex.issue)
        for key, issues in grouped.items():
            self.phrase_issues[key] = frozenset(issues)

        self._symbols: dict[str, int] = {}
        self._phrases: list[str] = sorted(self.phrase_issues)
        self._goto: list[dict[int, int]] = [{}]
        terminal: dict[int, int] = {}  # state -> phrase index ending there

        for pid, key in enumerate(self._phrases):
            state = 0
            for token in key.split("_"):
                sym = self._symbols.setdefault(token, len(self._symbols))
                nxt = self._goto[state].get(sym)
                if nxt is None:
                    nxt = len(self._goto)
                    self._goto[state][sym] = nxt
                    self._goto.append({})
                state = nxt
            terminal[state] = pid

        # Failure links by BFS; each state's output list is its own terminal
        # phrase plus everything reachable through failures, precomputed so
        # matching never walks the failure chain for outputs.
        n_states = len(self._goto)
        self._fail = [0] * n_states
        self._outputs: list[tuple[int, ...]] = [()] * n_states
        queue = []
        for sym, s in self._goto[0].items():
            self._fail[s] = 0
            queue.append(s)
        head = 0
        while head < len(queue):
            state = queue[head]
            head += 1
            own = (terminal[state],) if state in terminal else ()
            self._outputs[state] = own + self._outputs[self._fail[state]]
            for sym, child in self._goto[state].items():
                queue.append(child)
                f = self._fail[state]
                while f and sym not in self._goto[f]:
                    f = self._fail[f]
                self._fail[child] = self._goto[f].get(sym, 0)

    @property
    def n_phrases(self) -> int:
        return len(self._phrases)

    def find_spans(self, tokens) -> list[MatchSpan]:
        """All phrase occurrences in a token sequence, in end-position order."""
        spans = []
        symbols = self._symbols
        goto = self._goto
        fail = self._fail
        outputs = self._outputs
        state = 0
        for pos, token in enumerate(tokens):
            sym = symbols.get(token)
            if sym is None:
                state = 0
                continue
            while True:
                nxt = goto[state].get(sym)
                if nxt is not None:
                    state = nxt
                    break
                if state == 0:
                    break
                state = fail[state]
            if outputs[state]:
                for pid in outputs[state]:
                    key = self._phrases[pid]
                    length = key.count("_") + 1
                    spans.append(
                        MatchSpan(
                            start=pos - length + 1,
                            end=pos + 1,
                            phrase=key,
                            issues=self.phrase_issues[key],
                        )
                    )
        return spans

    def match(self, tokens) -> IssueLabelSet:
        """Issue labels for a token sequence (multi-label; empty when nothing fires)."""
        matched: set[str] = set()
        labels: set[str] = set()
        symbols = self._symbols
        goto = self._goto
        fail = self._fail
        outputs = self._outputs
        phrases = self._phrases
        phrase_issues = self.phrase_issues
        state = 0
        for token in tokens:
            sym = symbols.get(token)
            if sym is None:
                state = 0
                continue
            while True:
                nxt = goto[state].get(sym)
                if nxt is not None:
                    state = nxt
                    break
                if state == 0:
                    break
                state = fail[state]
            if outputs[state]:
                for pid in outputs[state]:
                    key = phrases[pid]
                    matched.add(key)
                    labels |= phrase_issues[key]
        return IssueLabelSet(
            labels=frozenset(labels), matched_phrases=tuple(sorted(matched))
        )


def build_matcher(lexicons) -> IssueMatcher:
    """Compile issue lexicons into a shareable matcher."""
    return IssueMatcher(lexicons)


def tag(record: TweetRecord, matcher: IssueMatcher) -> IssueLabelSet:
    """Label one tweet by lexicon-phrase presence in its normalized text."""
    return matcher.match(normalize(record.text))
