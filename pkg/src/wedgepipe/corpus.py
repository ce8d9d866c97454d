"""Document ingestion, normalization and n-gram counting.

Everything downstream (lexicon induction, tagging, framing) runs on the
token sequences produced here, so there is exactly one normalization path.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone

TWEET_KINDS = ("original", "retweet", "reply")

_REQUIRED_KEYS = ("id", "created_at", "user_id", "kind", "text")

# URLs and mentions are dropped before punctuation handling; "#" is deleted so
# hashtags survive as plain tokens ("#StayHome" -> "stayhome").
_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
# A hyphen survives only between letters/digits ("anti-vaxxers", "n-95").
_STRAY_HYPHEN_RE = re.compile(r"(?<![^\W_])-|-(?![^\W_])")
# Underscores are punctuation here: n-gram keys join tokens with "_".
_PUNCT_RE = re.compile(r"[^\w\s-]|_")


class SchemaError(ValueError):
    """Input file violates the tweet JSONL schema beyond the skip budget."""


@dataclass(frozen=True)
class TweetRecord:
    """One document: a tweet, retweet or reply."""

    id: str
    created_at: datetime
    user_id: str
    kind: str
    text: str
    urls: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("tweet id must be non-empty")
        if self.kind not in TWEET_KINDS:
            raise ValueError(f"kind must be one of {TWEET_KINDS}, got {self.kind!r}")

    @property
    def day(self):
        """Calendar day (UTC) the record belongs to."""
        return self.created_at.astimezone(timezone.utc).date()


@dataclass
class NgramCounts:
    """Counts of 1..3-gram keys (tokens joined by '_')."""

    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0


@dataclass
class LoadStats:
    """Bookkeeping for one load_tweets() pass."""

    lines: int = 0
    yielded: int = 0
    filtered: int = 0
    malformed_lines: list[int] = field(default_factory=list)

    @property
    def malformed(self) -> int:
        return len(self.malformed_lines)


def _parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def parse_tweet(obj: dict) -> TweetRecord:
    """Build a TweetRecord from one decoded JSONL object. Raises on schema violations."""
    for key in _REQUIRED_KEYS:
        if key not in obj:
            raise ValueError(f"missing key {key!r}")
    urls = obj.get("urls", [])
    if not isinstance(urls, list) or not all(isinstance(u, str) for u in urls):
        raise ValueError("urls must be an array of strings")
    return TweetRecord(
        id=str(obj["id"]),
        created_at=_parse_timestamp(str(obj["created_at"])),
        user_id=str(obj["user_id"]),
        kind=str(obj["kind"]),
        text=str(obj["text"]),
        urls=tuple(urls),
    )


def load_tweets(path, window=None, max_malformed_frac=0.10, stats=None):
    """Yield TweetRecord per well-formed line of a newline-delimited JSON file.

    Malformed lines are counted and skipped; if more than `max_malformed_frac`
    of the non-empty lines are malformed once the file is exhausted, a
    SchemaError listing the offending line numbers is raised. `window` is an
    optional (start, end) pair of aware datetimes; records outside it are
    dropped silently (counted in stats.filtered). Pass a LoadStats as `stats`
    to observe the counters.
    """
    if stats is None:
        stats = LoadStats()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.strip()
            if not line:
                continue
            stats.lines += 1
            try:
                record = parse_tweet(json.loads(line))
            except (ValueError, TypeError):
                stats.malformed_lines.append(lineno)
                continue
            if window is not None:
                start, end = window
                if not (start <= record.created_at <= end):
                    stats.filtered += 1
                    continue
            stats.yielded += 1
            yield record
    if stats.lines and stats.malformed / stats.lines > max_malformed_frac:
        shown = stats.malformed_lines[:20]
        raise SchemaError(
            f"{stats.malformed} of {stats.lines} lines malformed in {path} "
            f"(lines {shown}{'...' if stats.malformed > 20 else ''})"
        )


def normalize(text: str) -> list[str]:
    """Normalize raw text into matching-ready tokens.

    NFKC + lowercase; URLs and @-mentions removed; "#" deleted; punctuation
    deleted in place except hyphens between letters/digits; split on
    whitespace. Idempotent at the token level.
    """
    t = unicodedata.normalize("NFKC", text).lower()
    t = _URL_RE.sub(" ", t)
    t = _MENTION_RE.sub(" ", t)
    t = t.replace("#", "")
    t = _STRAY_HYPHEN_RE.sub(" ", t)
    t = _PUNCT_RE.sub("", t)
    return t.split()


def ngrams(tokens, n_max: int) -> NgramCounts:
    """Count contiguous n-grams for n = 1..n_max, keys joined with '_'."""
    if not 1 <= n_max <= 3:
        raise ValueError(f"n_max must be in 1..3, got {n_max}")
    counts: dict[str, int] = {}
    length = len(tokens)
    for n in range(1, n_max + 1):
        for i in range(length - n + 1):
            key = "_".join(tokens[i : i + n])
            counts[key] = counts.get(key, 0) + 1
    return NgramCounts(counts=counts, total=sum(counts.values()))
