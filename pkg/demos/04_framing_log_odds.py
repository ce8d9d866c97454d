"""Framing: who calls the vaccines "dangerous" and who calls them "safe"?
=========================================================================

Dependency parses yield adjective-anchor pairs (an adjective modifying an
issue phrase, directly or as a sibling modifier of the same head). Counting
those pairs per ideological group and ranking by smoothed log-odds exposes
each side's characteristic framing.
"""

from collections import Counter

from common import ensure_fixture

from wedgepipe.framing import apply_frequency_floor, extract_frames, log_odds, parse_conllu, top_phrases
from wedgepipe.lexicon import load_curated_lexicon
from wedgepipe.tagger import build_matcher

workspace = ensure_fixture()
matcher = build_matcher(load_curated_lexicon(workspace / "lexicon.tsv"))

# the fixture's parses carry the author in sentence metadata; every third
# synthetic user is conservative
counts = {"liberal": Counter(), "conservative": Counter()}
sentences = 0
for sentence in parse_conllu(workspace / "parses.conllu"):
    sentences += 1
    user = sentence.metadata.get("user_id", "")
    group = "conservative" if int(user[1:]) % 3 == 2 else "liberal"
    for frame in extract_frames(sentence, matcher):
        counts[group][frame.key] += 1
print(f"parsed {sentences} sentences")
print(f"frames: {sum(counts['liberal'].values())} liberal, "
      f"{sum(counts['conservative'].values())} conservative\n")

lib, con = apply_frequency_floor(dict(counts["liberal"]), dict(counts["conservative"]), 5)
scores = log_odds(lib, con, alpha=0.5)

print("most liberal-leaning frames (positive log-odds):")
for phrase, score in top_phrases(scores, 5, "a"):
    print(f"  {phrase:<28} {score:+.2f}")

print("\nmost conservative-leaning frames (negative log-odds):")
for phrase, score in top_phrases(scores, 5, "b"):
    print(f"  {phrase:<28} {score:+.2f}")

print("\nThe planted fixture pairs (safe/premature vs dangerous/unconstitutional)")
print("surface on their respective sides.")
