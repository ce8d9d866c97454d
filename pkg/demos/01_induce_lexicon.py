"""Issue-lexicon induction
=========================

Reference documents about each issue are compared against a baseline corpus:
each n-gram's log-frequency deviation from the baseline distribution is fit
with an L1 penalty, and the largest positive deviations are the candidate
phrases a human then curates into the lexicon TSV.
"""

from common import ensure_fixture

from wedgepipe.corpus import normalize
from wedgepipe.lexicon import (
    ISSUES,
    build_counts,
    fit_background,
    sage_fit,
    select_candidates,
)

workspace = ensure_fixture()

print("Reading reference documents ...")
issue_docs = {
    issue: [normalize((workspace / "issue_docs" / f"{issue}.txt").read_text())]
    for issue in ISSUES
}
baseline_docs = [
    normalize(path.read_text())
    for path in sorted((workspace / "baseline_docs").glob("*.txt"))
]

baseline_counts = build_counts(baseline_docs, n_max=3, min_count=3)
issue_counts = {
    issue: build_counts(docs, n_max=3, min_count=2) for issue, docs in issue_docs.items()
}
union_vocab = set()
for counts in issue_counts.values():
    union_vocab |= set(counts.counts)
background = fit_background(baseline_counts, smoothing=0.1, extra_vocab=union_vocab)
print(f"baseline vocabulary: {len(background.vocab)} n-grams\n")

for issue in ISSUES:
    result = sage_fit(issue_counts[issue], background, l1_penalty=1.0)
    top = select_candidates(result, 8)
    print(f"{issue:>10}: converged in {result.iterations} iterations")
    for ngram, deviation in top:
        count = issue_counts[issue].counts.get(ngram, 0)
        print(f"            {ngram:<24} deviation={deviation:6.2f}  count={count}")
    print()

print("The top candidates recover the planted issue vocabulary; in a real")
print("run these rows land in candidates.csv for manual curation.")
