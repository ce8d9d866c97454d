"""Corpus analytics for polarized-issue discourse.

Pipeline stages: issue-lexicon induction from reference documents, keyword
tagging, user ideology scoring, moral-foundation scoring, daily time-series
statistics (shares, deltas, autocorrelation persistence), framing log-odds,
and elite/non-elite bootstrap comparisons.
"""

__version__ = "0.1.0"

from .corpus import TweetRecord, NgramCounts, load_tweets, normalize, ngrams
from .lexicon import (
    ISSUES,
    BackgroundModel,
    DeviationResult,
    IssueLexicon,
    build_counts,
    fit_background,
    sage_fit,
    select_candidates,
    load_curated_lexicon,
)
from .tagger import IssueMatcher, IssueLabelSet, build_matcher, tag
from .moral import MoralVector, MORAL_CATEGORIES, FOUNDATIONS
from .series import DailySeries, AcfResult, acf, persistence

__all__ = [
    "ISSUES",
    "TweetRecord",
    "NgramCounts",
    "load_tweets",
    "normalize",
    "ngrams",
    "BackgroundModel",
    "DeviationResult",
    "IssueLexicon",
    "build_counts",
    "fit_background",
    "sage_fit",
    "select_candidates",
    "load_curated_lexicon",
    "IssueMatcher",
    "IssueLabelSet",
    "build_matcher",
    "tag",
    "MoralVector",
    "MORAL_CATEGORIES",
    "FOUNDATIONS",
    "DailySeries",
    "AcfResult",
    "acf",
    "persistence",
]
