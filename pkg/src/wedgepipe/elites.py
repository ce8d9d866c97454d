"""Elite vs non-elite moral-language comparison.

Non-elite tweets are matched to the daily elite volume by seeded uniform
sampling, bootstrapped B times; daily moral shares of the two groups are then
compared with a Mann-Whitney U test (exact enumeration for small samples,
tie- and continuity-corrected normal approximation otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from itertools import combinations

import numpy as np

from .moral import MORAL_CATEGORIES
from .series import ORIGINAL, moral_share

# loyalty/betrayal and purity/degradation are off by default in elite reports
DEFAULT_ELITE_CATEGORIES = (
    "care",
    "harm",
    "fairness",
    "cheating",
    "authority",
    "subversion",
)

EXACT_LIMIT = 12
SIGNIFICANCE_LEVEL = 0.001


def load_roster(path) -> set[str]:
    """Read elite user ids, one per line; '#' starts a comment."""
    roster: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if line:
                roster.add(line)
    if not roster:
        raise ValueError(f"{path}: elite roster is empty")
    return roster


@dataclass
class MatchedSample:
    """Per-day samples matched to elite daily volume."""

    samples: dict[date, list]
    shortfall_days: dict[date, tuple[int, int]]  # day -> (wanted, available)


def matched_sample(nonelite_by_day: dict, elite_counts: dict, seed: int) -> MatchedSample:
    """Sample non-elite records per day to match the elite count that day.

    Uniform without replacement, reproducible: each day draws from its own
    generator keyed by (seed, day), so adding or removing days never changes
    the draw on other days. Days with fewer non-elite records than wanted
    keep everything and are flagged.
    """
    samples: dict[date, list] = {}
    shortfalls: dict[date, tuple[int, int]] = {}
    for day in sorted(elite_counts):
        wanted = elite_counts[day]
        if wanted <= 0:
            continue
        pool = nonelite_by_day.get(day, [])
        if len(pool) <= wanted:
            samples[day] = list(pool)
            if len(pool) < wanted:
                shortfalls[day] = (wanted, len(pool))
            continue
        rng = np.random.default_rng((seed, day.toordinal()))
        idx = np.sort(rng.choice(len(pool), size=wanted, replace=False))
        samples[day] = [pool[i] for i in idx]
    return MatchedSample(samples=samples, shortfall_days=shortfalls)


def _daily_moral_shares(records_by_day: dict, issue: str, category: str,
                        collapsed: bool) -> dict[date, float]:
    """Day -> share of issue records expressing the category; gap days omitted."""
    out: dict[date, float] = {}
    for day, records in records_by_day.items():
        issue_recs = [r for r in records if issue in r["issues"]]
        if not issue_recs:
            continue
        hits = 0
        for rec in issue_recs:
            labels = rec.get("moral") or {}
            if collapsed:
                virtue, vice = category.split("/")
                expressed = bool(labels.get(virtue)) or bool(labels.get(vice))
            else:
                expressed = bool(labels.get(category))
            hits += expressed
        out[day] = moral_share(hits, len(issue_recs))
    return out


def bootstrap_shares(
    nonelite_by_day: dict,
    elite_counts: dict,
    issue: str,
    category: str,
    B: int = 100,
    seed: int = 0,
    collapsed: bool = False,
):
    """B replicate day->share maps from independent matched samples.

    Replicate b draws with seed + b, so replicates are independent yet the
    whole collection is reproducible.
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    replicates = []
    for b in range(B):
        sample = matched_sample(nonelite_by_day, elite_counts, seed=seed + b)
        replicates.append(
            _daily_moral_shares(sample.samples, issue, category, collapsed)
        )
    return replicates


def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(len(pooled))
    i = 0
    while i < len(pooled):
        j = i
        while j + 1 < len(pooled) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass
class MannWhitneyResult:
    u: float
    p_value: float
    method: str  # "exact" or "normal"


def mann_whitney_u(x, y, exact_limit: int = EXACT_LIMIT) -> MannWhitneyResult:
    """Mann-Whitney U for x (midranks for ties) with a two-sided p-value.

    When n1 + n2 <= exact_limit the p-value is computed by enumerating every
    assignment of the pooled values to the first sample and counting
    assignments at least as extreme (|U' - n1*n2/2| >= |U - n1*n2/2|).
    Otherwise a normal approximation with tie correction and continuity
    correction is used. Two constant, identical samples give p = 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n1, n2 = len(x), len(y)
    if n1 < 1 or n2 < 1:
        raise ValueError("both samples must be non-empty")
    pooled = np.concatenate([x, y])
    ranks = _midranks(pooled)
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    mu = n1 * n2 / 2.0

    if n1 + n2 <= exact_limit:
        deviation = abs(u - mu)
        hits = 0
        total = 0
        for subset in combinations(range(n1 + n2), n1):
            u_perm = ranks[list(subset)].sum() - n1 * (n1 + 1) / 2.0
            total += 1
            if abs(u_perm - mu) >= deviation - 1e-12:
                hits += 1
        return MannWhitneyResult(u=u, p_value=hits / total, method="exact")

    n = n1 + n2
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts**3 - tie_counts)) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return MannWhitneyResult(u=u, p_value=1.0, method="normal")
    if u == mu:
        z = 0.0
    else:
        z = (u - mu - 0.5 * math.copysign(1.0, u - mu)) / math.sqrt(var)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return MannWhitneyResult(u=u, p_value=min(1.0, p), method="normal")


@dataclass
class ComparisonResult:
    """Elite vs matched-non-elite moral share comparison for one cell."""

    issue: str
    category: str
    ideology: str
    elite_shares: np.ndarray
    nonelite_shares: np.ndarray  # pooled over bootstrap replicates
    elite_mean: float
    nonelite_mean: float
    u: float
    p_value: float
    significant: bool
    replicates: int
    shortfall_days: int


def _split_by_roster(records, roster: set[str], ideology: str):
    """Partition one ideology's originals into elite/non-elite day buckets."""
    elite_by_day: dict[date, list] = {}
    nonelite_by_day: dict[date, list] = {}
    elite_counts: dict[date, int] = {}
    for rec in records:
        if rec["kind"] != ORIGINAL or rec.get("group") != ideology:
            continue
        day = rec["day"]
        if rec["user_id"] in roster:
            elite_by_day.setdefault(day, []).append(rec)
            elite_counts[day] = elite_counts.get(day, 0) + 1
        else:
            nonelite_by_day.setdefault(day, []).append(rec)
    return elite_by_day, nonelite_by_day, elite_counts


def elite_comparison_table(
    records,
    roster: set[str],
    issues,
    categories,
    ideologies=("liberal", "conservative"),
    B: int = 100,
    seed: int = 0,
    collapsed: bool = False,
) -> list[ComparisonResult]:
    """All issue x category x ideology comparisons, sampling once per
    (ideology, replicate).

    The matched samples depend only on ideology and seed, so drawing them
    once and reusing them across cells produces exactly the same numbers as
    cell-by-cell compare_elite_moral_use calls. Cells with no data on either
    side are skipped.
    """
    records = list(records)
    results: list[ComparisonResult] = []
    for ideology in ideologies:
        elite_by_day, nonelite_by_day, elite_counts = _split_by_roster(
            records, roster, ideology
        )
        samples = [
            matched_sample(nonelite_by_day, elite_counts, seed=seed + b)
            for b in range(B)
        ]
        shortfall = len(samples[0].shortfall_days) if samples else 0
        for issue in issues:
            for category in categories:
                elite_shares = _daily_moral_shares(
                    elite_by_day, issue, category, collapsed
                )
                pooled = [
                    share
                    for sample in samples
                    for share in _daily_moral_shares(
                        sample.samples, issue, category, collapsed
                    ).values()
                ]
                x = np.array(sorted(elite_shares.values()), dtype=float)
                y = np.array(sorted(pooled), dtype=float)
                if len(x) == 0 or len(y) == 0:
                    continue
                test = mann_whitney_u(x, y)
                results.append(
                    ComparisonResult(
                        issue=issue,
                        category=category,
                        ideology=ideology,
                        elite_shares=x,
                        nonelite_shares=y,
                        elite_mean=float(x.mean()),
                        nonelite_mean=float(y.mean()),
                        u=test.u,
                        p_value=test.p_value,
                        significant=test.p_value < SIGNIFICANCE_LEVEL,
                        replicates=B,
                        shortfall_days=shortfall,
                    )
                )
    return results


def compare_elite_moral_use(
    records,
    roster: set[str],
    issue: str,
    category: str,
    ideology: str,
    B: int = 100,
    seed: int = 0,
    collapsed: bool = False,
) -> ComparisonResult:
    """Compare daily moral shares of elites against bootstrapped non-elites.

    `records` are analysis records (day, kind, issues, moral, group, user_id)
    of any composition; only originals of the requested ideology participate.
    The elite side contributes one share per day with issue tweets; the
    non-elite side pools the per-day shares of all B matched replicates.
    """
    elite_by_day, nonelite_by_day, elite_counts = _split_by_roster(
        list(records), roster, ideology
    )
    elite_shares = _daily_moral_shares(elite_by_day, issue, category, collapsed)
    replicates = bootstrap_shares(
        nonelite_by_day, elite_counts, issue, category, B=B, seed=seed,
        collapsed=collapsed,
    )
    pooled = [share for rep in replicates for share in rep.values()]

    shortfall = matched_sample(nonelite_by_day, elite_counts, seed=seed).shortfall_days
    x = np.array(sorted(elite_shares.values()), dtype=float)
    y = np.array(sorted(pooled), dtype=float)
    if len(x) == 0 or len(y) == 0:
        raise ValueError(
            f"no daily shares to compare for issue={issue} category={category} "
            f"ideology={ideology}"
        )
    test = mann_whitney_u(x, y)
    return ComparisonResult(
        issue=issue,
        category=category,
        ideology=ideology,
        elite_shares=x,
        nonelite_shares=y,
        elite_mean=float(x.mean()),
        nonelite_mean=float(y.mean()),
        u=test.u,
        p_value=test.p_value,
        significant=test.p_value < SIGNIFICANCE_LEVEL,
        replicates=B,
        shortfall_days=len(shortfall),
    )
