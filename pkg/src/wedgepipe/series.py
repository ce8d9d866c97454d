"""Daily time series over labeled documents: shares, deltas, rolling means,
autocorrelation and persistence lags.

Series are dense calendar-day arrays (UTC) with NaN marking days that have no
defined value (zero denominator). The autocorrelation estimator is the biased
fixed-denominator one: r[k] = sum_t (x_t - mean)(x_{t+k} - mean) / sum_t
(x_t - mean)^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

ORIGINAL = "original"


@dataclass
class DailySeries:
    """Date-indexed values, one slot per calendar day; NaN slots are gaps."""

    start: date | None
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> date | None:
        if self.start is None or len(self.values) == 0:
            return None
        return self.start + timedelta(days=len(self.values) - 1)

    def days(self):
        for i in range(len(self.values)):
            yield self.start + timedelta(days=i)

    def items(self):
        for i, v in enumerate(self.values):
            yield self.start + timedelta(days=i), float(v)


def from_day_map(day_values: dict, meta=None) -> DailySeries:
    """Dense series spanning min..max day of the mapping; missing days are gaps."""
    meta = dict(meta or {})
    if not day_values:
        return DailySeries(start=None, values=np.array([]), meta=meta)
    first = min(day_values)
    last = max(day_values)
    span = (last - first).days + 1
    values = np.full(span, np.nan)
    for day, value in day_values.items():
        values[(day - first).days] = value
    return DailySeries(start=first, values=values, meta=meta)


def _record_matches(rec, kind, group):
    if kind is not None and rec["kind"] != kind:
        return False
    if group is not None and rec.get("group") != group:
        return False
    return True


def daily_share(records, issue: str, kind: str, group=None) -> DailySeries:
    """Daily fraction of kind-`kind` documents (optionally group-filtered)
    that carry `issue`.

    A multi-label document counts once in each of its issues' series. Days
    with no matching documents at all are gaps.
    """
    totals: dict[date, int] = {}
    hits: dict[date, int] = {}
    for rec in records:
        if not _record_matches(rec, kind, group):
            continue
        day = rec["day"]
        totals[day] = totals.get(day, 0) + 1
        if issue in rec["issues"]:
            hits[day] = hits.get(day, 0) + 1
    shares = {d: hits.get(d, 0) / n for d, n in totals.items() if n > 0}
    return from_day_map(
        shares, meta={"issue": issue, "kind": kind, "group": group or "all"}
    )


def delta_share(lib_issue: float, lib_total: float, con_issue: float, con_total: float) -> float:
    """Liberal share minus conservative share of one issue on one day.

    (lib_issue/lib_total) - (con_issue/con_total); NaN when either group
    posted nothing that day.
    """
    if lib_total <= 0 or con_total <= 0:
        return float("nan")
    return lib_issue / lib_total - con_issue / con_total


def delta_series(records, issue: str) -> DailySeries:
    """Daily liberal-minus-conservative share difference, originals only."""
    lib_tot: dict[date, int] = {}
    con_tot: dict[date, int] = {}
    lib_hit: dict[date, int] = {}
    con_hit: dict[date, int] = {}
    for rec in records:
        if rec["kind"] != ORIGINAL:
            continue
        group = rec.get("group")
        if group == "liberal":
            tot, hit = lib_tot, lib_hit
        elif group == "conservative":
            tot, hit = con_tot, con_hit
        else:
            continue
        day = rec["day"]
        tot[day] = tot.get(day, 0) + 1
        if issue in rec["issues"]:
            hit[day] = hit.get(day, 0) + 1
    days = set(lib_tot) | set(con_tot)
    deltas = {
        d: delta_share(
            lib_hit.get(d, 0), lib_tot.get(d, 0), con_hit.get(d, 0), con_tot.get(d, 0)
        )
        for d in days
    }
    deltas = {d: v for d, v in deltas.items() if not np.isnan(v)}
    return from_day_map(deltas, meta={"issue": issue, "kind": ORIGINAL})


def moral_share(expressing: float, total: float) -> float:
    """Proportion of issue documents expressing a moral category; NaN when
    there are no issue documents."""
    if total <= 0:
        return float("nan")
    return expressing / total


def _expresses(rec, category: str, collapsed: bool) -> bool:
    labels = rec.get("moral") or {}
    if collapsed:
        virtue, vice = category.split("/")
        return bool(labels.get(virtue)) or bool(labels.get(vice))
    return bool(labels.get(category))


def moral_share_series(
    records, issue: str, category: str, group=None, kind: str = ORIGINAL,
    collapsed: bool = False,
) -> DailySeries:
    """Daily proportion of issue documents expressing a moral category.

    `category` is one of the ten categories, or a 'virtue/vice' foundation
    key with collapsed=True (either pole counts).
    """
    totals: dict[date, int] = {}
    hits: dict[date, int] = {}
    for rec in records:
        if not _record_matches(rec, kind, group) or issue not in rec["issues"]:
            continue
        day = rec["day"]
        totals[day] = totals.get(day, 0) + 1
        if _expresses(rec, category, collapsed):
            hits[day] = hits.get(day, 0) + 1
    shares = {d: hits.get(d, 0) / n for d, n in totals.items()}
    return from_day_map(
        shares,
        meta={"issue": issue, "kind": kind, "group": group or "all", "moral": category},
    )


def overall_moral_share(records, issue, category, group=None, kind=ORIGINAL,
                        collapsed=False) -> float:
    """Whole-period proportion of issue documents expressing a category."""
    total = 0
    hits = 0
    for rec in records:
        if not _record_matches(rec, kind, group) or issue not in rec["issues"]:
            continue
        total += 1
        if _expresses(rec, category, collapsed):
            hits += 1
    return moral_share(hits, total)


def rolling_mean(series: DailySeries, window: int) -> DailySeries:
    """Trailing mean over the present values of the last `window` days.

    Windows truncated at the series start average what exists; windows that
    are entirely gaps stay gaps.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    values = series.values
    out = np.full(len(values), np.nan)
    for t in range(len(values)):
        chunk = values[max(0, t - window + 1) : t + 1]
        present = chunk[~np.isnan(chunk)]
        if len(present):
            out[t] = present.mean()
    return DailySeries(start=series.start, values=out, meta=dict(series.meta))


def fill_gaps(series: DailySeries) -> DailySeries:
    """Linear interpolation across interior gaps; leading/trailing gaps dropped."""
    values = series.values
    present = np.flatnonzero(~np.isnan(values))
    if len(present) == 0:
        return DailySeries(start=None, values=np.array([]), meta=dict(series.meta))
    first, last = present[0], present[-1]
    trimmed = values[first : last + 1]
    idx = np.arange(len(trimmed))
    mask = ~np.isnan(trimmed)
    filled = np.interp(idx, idx[mask], trimmed[mask])
    return DailySeries(
        start=series.start + timedelta(days=int(first)),
        values=filled,
        meta=dict(series.meta),
    )


@dataclass
class AcfResult:
    """Autocorrelations r[0..max_lag], series length and white-noise bound."""

    r: np.ndarray
    n: int
    conf: float


def acf(series, max_lag: int) -> AcfResult:
    """Autocorrelation function for lags 0..max_lag with conf = 1.96/sqrt(n).

    Expects a gapless series (fill_gaps first); needs at least max_lag + 2
    values and nonzero variance.
    """
    values = series.values if isinstance(series, DailySeries) else np.asarray(series, dtype=float)
    if np.isnan(values).any():
        raise ValueError("series has gaps; fill_gaps before acf")
    n = len(values)
    if n < max_lag + 2:
        raise ValueError(f"need at least max_lag + 2 = {max_lag + 2} values, have {n}")
    centered = values - values.mean()
    denom = float(centered @ centered)
    if denom == 0:
        raise ValueError("series has zero variance")
    r = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        r[k] = float(centered[: n - k] @ centered[k:]) / denom
    return AcfResult(r=r, n=n, conf=1.96 / np.sqrt(n))


@dataclass
class PersistenceResult:
    """First lag where the ACF drops under the confidence bound."""

    lag: int
    censored: bool


def persistence(result: AcfResult) -> PersistenceResult:
    """Smallest lag k >= 1 with r[k] < conf (strict); censored at max_lag + 1."""
    for k in range(1, len(result.r)):
        if result.r[k] < result.conf:
            return PersistenceResult(lag=k, censored=False)
    return PersistenceResult(lag=len(result.r), censored=True)


def split_period(series: DailySeries, split_date: date):
    """(days < split_date, days >= split_date); split_date must lie in the span."""
    if series.start is None:
        raise ValueError("cannot split an empty series")
    if not (series.start <= split_date <= series.end):
        raise ValueError(
            f"split date {split_date} outside series span "
            f"{series.start}..{series.end}"
        )
    cut = (split_date - series.start).days
    before = DailySeries(
        start=series.start if cut > 0 else None,
        values=series.values[:cut].copy(),
        meta=dict(series.meta),
    )
    after = DailySeries(
        start=split_date, values=series.values[cut:].copy(), meta=dict(series.meta)
    )
    return before, after
