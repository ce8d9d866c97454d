"""Issue-lexicon induction against a baseline corpus, plus curated-lexicon I/O.

The induction models each n-gram's log-probability as a baseline value plus a
sparse additive deviation (SAGE); n-grams with large positive deviations are
the issue-distinctive candidates a human then curates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .corpus import NgramCounts, ngrams, normalize

ISSUES = ("origins", "lockdowns", "masking", "education", "vaccines")


class LexiconFormatError(ValueError):
    """Curated lexicon file violates the TSV format."""


@dataclass
class BackgroundModel:
    """Smoothed baseline log-probabilities over an ordered n-gram vocabulary."""

    log_probs: dict[str, float]
    vocab: list[str]

    def as_array(self) -> np.ndarray:
        return np.array([self.log_probs[w] for w in self.vocab])


@dataclass
class DeviationResult:
    """Fitted log-frequency deviations from the background model.

    `final_gap` is the max-norm of the last accepted update; the fit is
    converged when final_gap <= tol. `objective_path` holds the penalized
    objective after each iteration (non-decreasing by construction).
    """

    values: dict[str, float]
    l1_penalty: float
    iterations: int
    final_gap: float
    converged: bool
    objective_path: list[float] = field(default_factory=list)


@dataclass
class IssueLexicon:
    """Curated or induced set of 1-3-gram phrases for one issue."""

    issue: str
    phrases: frozenset[str]
    provenance: str = "curated"

    def __post_init__(self):
        if self.issue not in ISSUES:
            raise ValueError(f"unknown issue {self.issue!r}")
        if self.provenance == "curated" and not self.phrases:
            raise ValueError(f"curated lexicon for {self.issue!r} is empty")
        for key in self.phrases:
            if not 1 <= len(key.split("_")) <= 3:
                raise ValueError(f"phrase {key!r} is not a 1-3-gram key")


def build_counts(documents, n_max: int, min_count: int) -> NgramCounts:
    """Pool n-gram counts over token-sequence documents, dropping rare grams.

    Grams with corpus count < min_count are removed and the total recomputed,
    so the result is a consistent NgramCounts over the kept vocabulary.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    pooled: dict[str, int] = {}
    for doc in documents:
        for key, n in ngrams(doc, n_max).counts.items():
            pooled[key] = pooled.get(key, 0) + n
    kept = {k: n for k, n in pooled.items() if n >= min_count}
    return NgramCounts(counts=kept, total=sum(kept.values()))


def fit_background(
    baseline_counts: NgramCounts, smoothing: float, extra_vocab=()
) -> BackgroundModel:
    """Fit smoothed baseline log-probabilities.

    The vocabulary is the union of the baseline vocabulary and `extra_vocab`
    (pass the issue-corpus vocabulary so every issue gram has a baseline
    value). log p_w = log((c_w + smoothing) / (total + smoothing * |V|)).
    """
    if not baseline_counts.counts:
        raise ValueError("baseline counts are empty")
    if smoothing <= 0:
        raise ValueError(f"smoothing must be > 0, got {smoothing}")
    vocab = sorted(set(baseline_counts.counts) | set(extra_vocab))
    size = len(vocab)
    total = baseline_counts.total
    denom = np.log(total + smoothing * size)
    log_probs = {
        w: float(np.log(baseline_counts.counts.get(w, 0) + smoothing) - denom)
        for w in vocab
    }
    return BackgroundModel(log_probs=log_probs, vocab=vocab)


def smooth_objective(eta: np.ndarray, counts: np.ndarray, log_probs: np.ndarray):
    """Value and gradient of the smooth (unpenalized) fit objective.

    value = c . (m + eta) - C * log sum_w exp(m_w + eta_w), C = sum(c);
    gradient = c - C * softmax(m + eta).
    """
    total = counts.sum()
    z = log_probs + eta
    zmax = z.max()
    expz = np.exp(z - zmax)
    sumexp = expz.sum()
    lse = zmax + np.log(sumexp)
    value = float(counts @ z - total * lse)
    grad = counts - total * (expz / sumexp)
    return value, grad


def _soft_threshold(x: np.ndarray, t: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def sage_fit(
    issue_counts: NgramCounts,
    background: BackgroundModel,
    l1_penalty: float,
    tol: float = 1e-7,
    max_iter: int = 5000,
) -> DeviationResult:
    """Fit sparse log-frequency deviations of an issue corpus from the background.

    Maximizes c.(m+eta) - C*logsumexp(m+eta) - l1_penalty*||eta||_1 by proximal
    gradient ascent (soft-thresholding) from eta = 0, with a halving line
    search started at step 1.0 and warm-started between iterations; a step is
    accepted only if the penalized objective does not decrease. Stops when the
    max-norm of the accepted update falls below tol or after max_iter
    iterations (then the result carries converged=False and a warning).

    When l1_penalty == 0 the solution is only defined up to an additive
    constant; the gauge is fixed by shifting eta to zero count-weighted mean
    over the issue counts. With a positive penalty the L1 term pins the gauge
    itself, so no shift is applied (it would destroy sparsity).
    """
    if l1_penalty < 0:
        raise ValueError(f"l1_penalty must be >= 0, got {l1_penalty}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    missing = [w for w in issue_counts.counts if w not in background.log_probs]
    if missing:
        raise ValueError(
            f"{len(missing)} issue n-grams missing from background vocabulary "
            f"(e.g. {missing[:5]}); fit the background with extra_vocab"
        )

    vocab = background.vocab
    counts = np.array([issue_counts.counts.get(w, 0) for w in vocab], dtype=float)
    log_probs = background.as_array()
    if counts.sum() == 0:
        raise ValueError("issue counts are empty")

    eta = np.zeros(len(vocab))
    value, grad = smooth_objective(eta, counts, log_probs)
    objective = value - l1_penalty * np.abs(eta).sum()
    path = [objective]
    step = 1.0
    gap = np.inf
    iterations = 0

    for iterations in range(1, max_iter + 1):
        step = min(step * 2.0, 1.0)
        accepted = False
        while step > 1e-18:
            candidate = _soft_threshold(eta + step * grad, step * l1_penalty)
            cand_value, cand_grad = smooth_objective(candidate, counts, log_probs)
            cand_objective = cand_value - l1_penalty * np.abs(candidate).sum()
            if cand_objective >= objective:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            gap = 0.0
            path.append(objective)
            break
        gap = float(np.max(np.abs(candidate - eta)))
        eta, grad, objective = candidate, cand_grad, cand_objective
        path.append(objective)
        if gap < tol:
            break

    converged = gap < tol
    if not converged:
        warnings.warn(
            f"deviation fit stopped at max_iter={max_iter} with step gap "
            f"{gap:.3e} > tol={tol:.3e}",
            RuntimeWarning,
        )
    if l1_penalty == 0:
        eta = eta - (counts @ eta) / counts.sum()

    return DeviationResult(
        values={w: float(v) for w, v in zip(vocab, eta)},
        l1_penalty=l1_penalty,
        iterations=iterations,
        final_gap=float(gap),
        converged=converged,
        objective_path=path,
    )


def select_candidates(result: DeviationResult, k: int):
    """Top-k n-grams by descending deviation; only positive deviations qualify.

    Ties break lexicographically. Fewer than k positive entries yields a
    shorter list.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    positive = [(w, v) for w, v in result.values.items() if v > 0]
    positive.sort(key=lambda item: (-item[1], item[0]))
    return positive[:k]


def load_curated_lexicon(path) -> list[IssueLexicon]:
    """Read a curated lexicon TSV (`issue<TAB>phrase`, '#' comments).

    Phrases run through the shared normalizer, so file entries like
    "#StayHome" or "Wuhan labs" land on the same keys the tagger sees.
    Unknown issue names are fatal with their line number; duplicate phrases
    within an issue are dropped with a warning.
    """
    phrases: dict[str, list[str]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise LexiconFormatError(f"{path}:{lineno}: expected issue<TAB>phrase")
            issue, phrase = line.split("\t", 1)
            issue = issue.strip().lower()
            if issue not in ISSUES:
                raise LexiconFormatError(f"{path}:{lineno}: unknown issue {issue!r}")
            tokens = normalize(phrase)
            if not 1 <= len(tokens) <= 3:
                raise LexiconFormatError(
                    f"{path}:{lineno}: phrase {phrase!r} normalizes to "
                    f"{len(tokens)} tokens (need 1-3)"
                )
            key = "_".join(tokens)
            bucket = phrases.setdefault(issue, [])
            if key in bucket:
                warnings.warn(f"{path}:{lineno}: duplicate phrase {key!r} for {issue}")
            else:
                bucket.append(key)
    if not phrases:
        warnings.warn(f"{path}: no lexicon entries found")
        return []
    return [
        IssueLexicon(issue=issue, phrases=frozenset(phrases[issue]))
        for issue in ISSUES
        if issue in phrases
    ]
