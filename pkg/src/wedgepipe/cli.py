"""Pipeline orchestration and the `wedgepipe` command line.

Subcommands: induce, tag, ideology, moral, series, acf, framing, elites,
run, validate. Intermediate artifacts are newline-delimited JSON so every
stage can be re-run and inspected on its own; report tables are CSV with a
leading comment carrying the tool version and config hash. Given the same
config, inputs and seeds, every byte of output is identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .corpus import LoadStats, load_tweets, normalize
from .elites import (
    DEFAULT_ELITE_CATEGORIES,
    elite_comparison_table,
    load_roster,
)
from .framing import (
    apply_frequency_floor,
    extract_frames,
    log_odds,
    parse_conllu,
    top_phrases,
)
from .ideology import (
    CONSERVATIVE,
    LIBERAL,
    UNLABELED,
    UserIdeology,
    binarize,
    embed_user,
    extract_pld,
    load_bias_table,
    load_embeddings,
    predict,
    train_lr,
)
from .lexicon import (
    ISSUES,
    build_counts,
    fit_background,
    load_curated_lexicon,
    sage_fit,
    select_candidates,
)
from .moral import (
    FOUNDATIONS,
    MORAL_CATEGORIES,
    build_concepts,
    load_moral_lexicon,
    score_moral_ddr,
    score_moral_lexicon,
)
from .series import (
    DailySeries,
    acf,
    daily_share,
    delta_series,
    fill_gaps,
    from_day_map,
    moral_share_series,
    persistence,
    rolling_mean,
    split_period,
)
from .tagger import build_matcher

STAGES = ("induce", "tag", "ideology", "moral", "series", "acf", "framing", "elites")

KINDS = ("original", "retweet", "reply")

DEFAULT_PARAMS = {
    "n_max": 3,
    "l1_penalty": 1.0,
    "top_k": 50,
    "min_count_issue": 2,
    "min_count_baseline": 3,
    "smoothing": 0.1,
    "sage_tol": 1e-7,
    "sage_max_iter": 5000,
    "l2": 0.01,
    "learning_rate": 1.0,
    "lr_tol": 1e-6,
    "lr_max_iter": 2000,
    "min_urls": 1,
    "class_weight": "none",
    "moral_method": "lexicon",
    "ddr_threshold": 0.55,
    "ddr_thresholds": {},  # per-category overrides of ddr_threshold
    "window": 7,
    "max_lag": 60,
    "split_date": date(2020, 12, 11),
    "alpha": 0.5,
    "framing_top_k": 10,
    "framing_min_count": 5,
    "bootstrap": 100,
    "seed": 7,
    "elite_all_categories": False,
    "workers": 1,
}

_PATH_KEYS = (
    "tweets",
    "lexicon",
    "moral_lexicon",
    "bias_table",
    "embeddings",
    "roster",
    "conllu",
    "issue_docs",
    "baseline_docs",
)


@dataclass
class PipelineConfig:
    """Resolved paths, hyperparameters and stage toggles for one run."""

    paths: dict = field(default_factory=dict)
    params: dict = field(default_factory=lambda: dict(DEFAULT_PARAMS))
    stages: dict = field(default_factory=lambda: {s: False for s in STAGES})

    @property
    def out_dir(self) -> Path:
        return Path(self.paths.get("out_dir", "out"))

    def tweets_paths(self) -> list[Path]:
        value = self.paths.get("tweets")
        if value is None:
            return []
        if isinstance(value, (list, tuple)):
            return [Path(v) for v in value]
        return [Path(value)]

    def jsonable(self) -> dict:
        paths = {}
        for key, value in sorted(self.paths.items()):
            if isinstance(value, (list, tuple)):
                paths[key] = [str(v) for v in value]
            else:
                paths[key] = str(value)
        params = {
            k: (v.isoformat() if isinstance(v, date) else v)
            for k, v in sorted(self.params.items())
        }
        return {"paths": paths, "params": params, "stages": dict(sorted(self.stages.items()))}

    def config_hash(self) -> str:
        """Hash of the analysis-relevant configuration.

        The output directory is excluded: where results are written must not
        change what is written (report files embed this hash).
        """
        snapshot = self.jsonable()
        snapshot["paths"].pop("out_dir", None)
        blob = json.dumps(snapshot, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:12]


def load_config(path) -> PipelineConfig:
    """Parse a TOML config; relative paths resolve against the file's directory."""
    path = Path(path)
    with open(path, "rb") as handle:
        raw = tomllib.load(handle)
    base = path.parent
    cfg = PipelineConfig()
    for key, value in raw.get("paths", {}).items():
        if key == "out_dir" or key in _PATH_KEYS:
            if isinstance(value, list):
                cfg.paths[key] = [str((base / v)) for v in value]
            else:
                cfg.paths[key] = str(base / value)
        else:
            raise ValueError(f"unknown path key {key!r} in {path}")
    for key, value in raw.get("params", {}).items():
        if key not in DEFAULT_PARAMS:
            raise ValueError(f"unknown param {key!r} in {path}")
        cfg.params[key] = value
    for key, value in raw.get("stages", {}).items():
        if key not in STAGES:
            raise ValueError(f"unknown stage {key!r} in {path}")
        cfg.stages[key] = bool(value)
    if "WEDGEPIPE_THREADS" in os.environ:
        cfg.params["workers"] = int(os.environ["WEDGEPIPE_THREADS"])
    return cfg


def _parse_split_date(value) -> date:
    if isinstance(value, date):
        return value
    return date.fromisoformat(str(value))


def validate_config(cfg: PipelineConfig) -> list[str]:
    """All path, range and enum problems at once (empty list = valid)."""
    errors: list[str] = []
    p = cfg.params

    # every configured input path must exist, whether or not a stage uses it
    for key, value in cfg.paths.items():
        if key in ("out_dir", "tag_out"):
            continue
        values = value if isinstance(value, (list, tuple)) else [value]
        for v in values:
            if not Path(v).exists():
                errors.append(f"paths.{key}: {v} does not exist")

    def need_path(key, stage):
        if cfg.paths.get(key) is None:
            errors.append(f"paths.{key}: required by stage '{stage}' but not set")

    stage_inputs = {
        "induce": ("issue_docs", "baseline_docs"),
        "tag": ("tweets", "lexicon"),
        "ideology": ("tweets", "bias_table", "embeddings"),
        "moral": ("moral_lexicon",),
        "framing": ("conllu", "lexicon"),
        "elites": ("roster",),
    }
    for stage, keys in stage_inputs.items():
        if cfg.stages.get(stage):
            for key in keys:
                need_path(key, stage)
    if cfg.stages.get("moral") and p.get("moral_method") == "ddr":
        need_path("embeddings", "moral")

    checks = [
        ("l1_penalty", lambda v: v >= 0, ">= 0"),
        ("top_k", lambda v: v >= 1, ">= 1"),
        ("min_count_issue", lambda v: v >= 1, ">= 1"),
        ("min_count_baseline", lambda v: v >= 1, ">= 1"),
        ("smoothing", lambda v: v > 0, "> 0"),
        ("l2", lambda v: v >= 0, ">= 0"),
        ("min_urls", lambda v: v >= 1, ">= 1"),
        ("window", lambda v: v >= 1, ">= 1"),
        ("max_lag", lambda v: v >= 1, ">= 1"),
        ("alpha", lambda v: v > 0, "> 0"),
        ("framing_top_k", lambda v: v >= 0, ">= 0"),
        ("framing_min_count", lambda v: v >= 0, ">= 0"),
        ("bootstrap", lambda v: v >= 1, ">= 1"),
        ("workers", lambda v: v >= 1, ">= 1"),
        ("n_max", lambda v: 1 <= v <= 3, "in 1..3"),
    ]
    for key, ok, description in checks:
        try:
            if not ok(p[key]):
                errors.append(f"params.{key}: must be {description}, got {p[key]}")
        except TypeError:
            errors.append(f"params.{key}: must be {description}, got {p[key]!r}")
    if p.get("moral_method") not in ("ddr", "lexicon"):
        errors.append(
            f"params.moral_method: must be 'ddr' or 'lexicon', got {p.get('moral_method')!r}"
        )
    overrides = p.get("ddr_thresholds") or {}
    if not isinstance(overrides, dict):
        errors.append(f"params.ddr_thresholds: must be a table, got {overrides!r}")
    else:
        for cat in overrides:
            if cat not in MORAL_CATEGORIES:
                errors.append(f"params.ddr_thresholds: unknown category {cat!r}")
    if p.get("class_weight") not in ("none", "balanced"):
        errors.append(
            f"params.class_weight: must be 'none' or 'balanced', got {p.get('class_weight')!r}"
        )
    try:
        _parse_split_date(p["split_date"])
    except (ValueError, TypeError):
        errors.append(f"params.split_date: unparseable date {p['split_date']!r}")

    # stages that consume other stages' artifacts: when the upstream stage is
    # off, the artifact must already exist in the output directory
    artifact_deps = {
        "series": (("ideology", "ideology.csv"), ("moral", "moral.jsonl")),
        "acf": (("series", "series.csv"),),
        "elites": (("ideology", "ideology.csv"), ("moral", "moral.jsonl")),
    }
    for stage, deps in artifact_deps.items():
        if not cfg.stages.get(stage):
            continue
        for upstream, artifact in deps:
            if not cfg.stages.get(upstream) and not (cfg.out_dir / artifact).exists():
                errors.append(
                    f"stage '{stage}' needs {artifact} (enable stage '{upstream}' "
                    f"or provide {cfg.out_dir / artifact})"
                )
    if cfg.stages.get("moral") and not cfg.stages.get("tag"):
        if not cfg.tweets_paths() and not (cfg.out_dir / "tagged.jsonl").exists():
            errors.append(
                "stage 'moral' needs paths.tweets or a tagged.jsonl artifact"
            )
    return errors


# ---------------------------------------------------------------------------
# deterministic output helpers

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.10g}"
    return str(value)


def _comment(cfg: PipelineConfig) -> str:
    return f"# wedgepipe {__version__} config={cfg.config_hash()}"


def write_csv(path: Path, header, rows, cfg: PipelineConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(_comment(cfg) + "\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _tweet_json(record, extra=None) -> str:
    obj = {
        "id": record.id,
        "created_at": record.created_at.astimezone(timezone.utc)
        .isoformat()
        .replace("+00:00", "Z"),
        "user_id": record.user_id,
        "kind": record.kind,
        "text": record.text,
        "urls": list(record.urls),
    }
    if extra:
        obj.update(extra)
    return _dump_json(obj)


# ---------------------------------------------------------------------------
# stages

def _read_docs(root: Path) -> list[list[str]]:
    """Normalize every *.txt under a directory (or the file itself) into token docs."""
    root = Path(root)
    files = [root] if root.is_file() else sorted(root.rglob("*.txt"))
    return [normalize(f.read_text(encoding="utf-8")) for f in files]


def stage_induce(cfg: PipelineConfig) -> list[Path]:
    """Induce candidate phrases per issue and write candidates.csv."""
    p = cfg.params
    issue_root = Path(cfg.paths["issue_docs"])
    issue_docs = {}
    for issue in ISSUES:
        candidates = [issue_root / f"{issue}.txt", issue_root / issue]
        source = next((c for c in candidates if c.exists()), None)
        if source is not None:
            issue_docs[issue] = _read_docs(source)
    if not issue_docs:
        raise FileNotFoundError(
            f"no <issue>.txt files or <issue>/ directories under {issue_root}"
        )
    baseline_docs = _read_docs(Path(cfg.paths["baseline_docs"]))
    baseline_counts = build_counts(
        baseline_docs, n_max=p["n_max"], min_count=p["min_count_baseline"]
    )
    issue_counts = {
        issue: build_counts(docs, n_max=p["n_max"], min_count=p["min_count_issue"])
        for issue, docs in issue_docs.items()
    }
    union_vocab = set()
    for counts in issue_counts.values():
        union_vocab |= set(counts.counts)
    background = fit_background(baseline_counts, p["smoothing"], extra_vocab=union_vocab)

    rows = []
    for issue in ISSUES:
        if issue not in issue_counts:
            continue
        result = sage_fit(
            issue_counts[issue],
            background,
            l1_penalty=p["l1_penalty"],
            tol=p["sage_tol"],
            max_iter=p["sage_max_iter"],
        )
        for ngram, value in select_candidates(result, p["top_k"]):
            rows.append(
                (
                    issue,
                    ngram,
                    value,
                    issue_counts[issue].counts.get(ngram, 0),
                    background.log_probs[ngram],
                )
            )
    out = write_csv(
        cfg.out_dir / "candidates.csv",
        ("issue", "ngram", "eta", "issue_count", "background_logprob"),
        rows,
        cfg,
    )
    return [out]


def _iter_tweets(cfg: PipelineConfig):
    for path in cfg.tweets_paths():
        stats = LoadStats()
        yield from load_tweets(path, stats=stats)
        if stats.malformed:
            print(
                f"[tag] {path}: skipped {stats.malformed} malformed line(s)",
                file=sys.stderr,
            )


def stage_tag(cfg: PipelineConfig) -> list[Path]:
    """Tag tweets with issue labels; writes tagged.jsonl (or paths.tag_out)."""
    lexicons = load_curated_lexicon(cfg.paths["lexicon"])
    matcher = build_matcher(lexicons)
    out_path = Path(cfg.paths.get("tag_out") or cfg.out_dir / "tagged.jsonl")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    workers = int(cfg.params["workers"])

    def label(record):
        labels = matcher.match(normalize(record.text))
        return _tweet_json(
            record,
            {
                "issues": sorted(labels.labels),
                "matched": list(labels.matched_phrases),
            },
        )

    with open(out_path, "w", encoding="utf-8") as handle:
        if workers <= 1:
            for record in _iter_tweets(cfg):
                handle.write(label(record) + "\n")
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for line in pool.map(label, _iter_tweets(cfg), chunksize=256):
                    handle.write(line + "\n")
    return [out_path]


def stage_ideology(cfg: PipelineConfig) -> list[Path]:
    """Score users from shared domains, propagate labels by LR; writes ideology.csv."""
    p = cfg.params
    table = load_bias_table(cfg.paths["bias_table"])
    embeddings = load_embeddings(cfg.paths["embeddings"])

    url_hits: dict[str, list[float]] = {}
    token_seqs: dict[str, list[list[str]]] = {}
    for record in _iter_tweets(cfg):
        seqs = token_seqs.setdefault(record.user_id, [])
        tokens = normalize(record.text)
        if tokens:
            seqs.append(tokens)
        for url in record.urls:
            pld = extract_pld(url)
            if pld is not None and pld in table:
                url_hits.setdefault(record.user_id, []).append(table[pld])

    users = sorted(token_seqs)
    url_scores: dict[str, float] = {}
    url_labels: dict[str, str] = {}
    for user in users:
        hits = url_hits.get(user, [])
        if len(hits) >= p["min_urls"]:
            score = float(np.mean(hits))
            url_scores[user] = score
            url_labels[user] = binarize(score)

    features: dict[str, np.ndarray] = {}
    for user in users:
        if token_seqs[user]:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                features[user] = embed_user(token_seqs[user], embeddings)

    train_users = [
        u for u in users if url_labels.get(u) in (LIBERAL, CONSERVATIVE) and u in features
    ]
    if not train_users:
        raise ValueError("no URL-labeled users to train on")
    X = np.vstack([features[u] for u in train_users])
    y = np.array([1.0 if url_labels[u] == CONSERVATIVE else 0.0 for u in train_users])
    model = train_lr(
        X,
        y,
        l2=p["l2"],
        lr=p["learning_rate"],
        tol=p["lr_tol"],
        max_iter=p["lr_max_iter"],
        seed=p["seed"],
        class_weight=None if p["class_weight"] == "none" else p["class_weight"],
    )

    profiles = []
    for user in users:
        if user in features:
            label, prob = predict(model, features[user])
        else:
            label, prob = UNLABELED, None
        profiles.append(
            UserIdeology(
                user_id=user,
                url_score=url_scores.get(user),
                url_label=url_labels.get(user),
                predicted_label=label,
                probability=prob,
            )
        )
    out = write_csv(
        cfg.out_dir / "ideology.csv",
        ("user_id", "url_score", "url_label", "predicted_label", "probability"),
        (
            (u.user_id, u.url_score, u.url_label or "", u.predicted_label, u.probability)
            for u in profiles
        ),
        cfg,
    )
    return [out]


def _iter_jsonl(path: Path):
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def _moral_sources(cfg: PipelineConfig) -> list[Path]:
    tagged = cfg.out_dir / "tagged.jsonl"
    if cfg.stages.get("tag") and tagged.exists():
        return [tagged]
    paths = cfg.tweets_paths()
    if paths:
        return paths
    if tagged.exists():
        return [tagged]
    raise FileNotFoundError(
        "moral stage needs --tweets or a tagged.jsonl artifact in the output directory"
    )


def stage_moral(cfg: PipelineConfig) -> list[Path]:
    """Score documents on the ten moral categories; writes moral.jsonl.

    Consumes the tag stage's output when it ran, otherwise the given tweet
    files directly (records then carry no issue labels).
    """
    p = cfg.params
    sources = _moral_sources(cfg)
    lexicon = load_moral_lexicon(cfg.paths["moral_lexicon"])
    method = p["moral_method"]
    if method == "ddr":
        embeddings = load_embeddings(cfg.paths["embeddings"])
        concepts = build_concepts(lexicon, embeddings)
        thresholds = {c: p["ddr_threshold"] for c in MORAL_CATEGORIES}
        thresholds.update(p.get("ddr_thresholds") or {})

        def score(tokens):
            return score_moral_ddr(tokens, concepts, embeddings, thresholds)

    else:

        def score(tokens):
            return score_moral_lexicon(tokens, lexicon)

    out_path = cfg.out_dir / "moral.jsonl"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as handle:
        for source in sources:
            for obj in _iter_jsonl(Path(source)):
                vector = score(normalize(obj.get("text", "")))
                obj["moral_scores"] = {
                    c: round(vector.scores[c], 9) for c in MORAL_CATEGORIES
                }
                obj["moral_labels"] = {c: vector.labels[c] for c in MORAL_CATEGORIES}
                handle.write(_dump_json(obj) + "\n")
    return [out_path]


def _load_ideology_groups(path: Path) -> dict[str, str]:
    groups: dict[str, str] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(line for line in handle if not line.startswith("#"))
        for row in reader:
            groups[row["user_id"]] = row["predicted_label"]
    return groups


def _analysis_records(moral_path: Path, groups: dict[str, str]) -> list[dict]:
    """Join enriched tweets with user groups into flat analysis records."""
    records = []
    for obj in _iter_jsonl(moral_path):
        day = (
            datetime.fromisoformat(obj["created_at"].replace("Z", "+00:00"))
            .astimezone(timezone.utc)
            .date()
        )
        records.append(
            {
                "day": day,
                "kind": obj["kind"],
                "issues": set(obj.get("issues", ())),
                "moral": obj.get("moral_labels", {}),
                "group": groups.get(obj["user_id"]),
                "user_id": obj["user_id"],
            }
        )
    return records


def _series_rows(series_list):
    rows = []
    for series in series_list:
        meta = series.meta
        for day, value in series.items():
            rows.append(
                (
                    day.isoformat(),
                    value if not math.isnan(value) else None,
                    meta.get("issue", ""),
                    meta.get("group", ""),
                    meta.get("kind", ""),
                    meta.get("moral", ""),
                )
            )
    return rows


def _build_all_series(records, window: int):
    """The full set of report series: issue shares per kind, group shares,
    deltas, and per-foundation moral shares per group."""
    raw: list[DailySeries] = []
    for issue in ISSUES:
        for kind in KINDS:
            raw.append(daily_share(records, issue, kind))
        for group in (LIBERAL, CONSERVATIVE):
            raw.append(daily_share(records, issue, "original", group=group))
        delta = delta_series(records, issue)
        delta.meta["group"] = "delta"
        raw.append(delta)
        for virtue, vice in FOUNDATIONS:
            for group in (LIBERAL, CONSERVATIVE):
                raw.append(
                    moral_share_series(
                        records,
                        issue,
                        f"{virtue}/{vice}",
                        group=group,
                        collapsed=True,
                    )
                )
    smoothed = [rolling_mean(s, window) for s in raw]
    return raw, smoothed


def stage_series(cfg: PipelineConfig) -> list[Path]:
    """Aggregate daily series; writes series.csv and series_smoothed.csv."""
    groups = _load_ideology_groups(cfg.out_dir / "ideology.csv")
    records = _analysis_records(cfg.out_dir / "moral.jsonl", groups)
    raw, smoothed = _build_all_series(records, int(cfg.params["window"]))
    header = ("date", "value", "issue", "group", "kind", "moral")
    out1 = write_csv(cfg.out_dir / "series.csv", header, _series_rows(raw), cfg)
    out2 = write_csv(
        cfg.out_dir / "series_smoothed.csv", header, _series_rows(smoothed), cfg
    )
    return [out1, out2]


def _read_series_csv(path: Path):
    """Rebuild DailySeries objects from a series.csv artifact."""
    buckets: dict[tuple, dict] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(line for line in handle if not line.startswith("#"))
        for row in reader:
            key = (row["issue"], row["group"], row["kind"], row["moral"])
            value = float(row["value"]) if row["value"] != "" else float("nan")
            buckets.setdefault(key, {})[date.fromisoformat(row["date"])] = value
    series_list = []
    for (issue, group, kind, moral), day_map in buckets.items():
        day_map = {d: v for d, v in day_map.items() if not math.isnan(v)}
        series = from_day_map(
            day_map, meta={"issue": issue, "group": group, "kind": kind, "moral": moral}
        )
        series_list.append(series)
    return series_list


def stage_acf(cfg: PipelineConfig) -> list[Path]:
    """Autocorrelation and persistence of the moral share series, split at the
    configured date; writes acf.csv and persistence.csv."""
    p = cfg.params
    split_at = _parse_split_date(p["split_date"])
    max_lag = int(p["max_lag"])
    series_list = [
        s
        for s in _read_series_csv(cfg.out_dir / "series.csv")
        if s.meta["moral"] and s.meta["kind"] == "original"
    ]
    acf_rows = []
    persistence_rows = []
    for series in series_list:
        if series.start is None:
            continue
        if series.start <= split_at <= series.end:
            pre, post = split_period(series, split_at)
            periods = (("pre", pre), ("post", post))
        else:
            periods = (("full", series),)
        for period_name, segment in periods:
            filled = fill_gaps(segment)
            n = len(filled)
            lag = min(max_lag, n - 2)
            if lag < 1:
                continue
            try:
                result = acf(filled, lag)
            except ValueError:
                continue  # constant segment: autocorrelation undefined
            meta = series.meta
            for k in range(len(result.r)):
                acf_rows.append(
                    (
                        meta["issue"],
                        meta["group"],
                        meta["moral"],
                        period_name,
                        k,
                        result.r[k],
                        result.conf,
                    )
                )
            lag_result = persistence(result)
            persistence_rows.append(
                (
                    meta["issue"],
                    meta["group"],
                    meta["moral"],
                    period_name,
                    lag_result.lag,
                    lag_result.censored,
                )
            )
    out1 = write_csv(
        cfg.out_dir / "acf.csv",
        ("issue", "group", "moral", "period", "lag", "r", "conf"),
        acf_rows,
        cfg,
    )
    out2 = write_csv(
        cfg.out_dir / "persistence.csv",
        ("issue", "group", "moral", "period", "persistence", "censored"),
        persistence_rows,
        cfg,
    )
    return [out1, out2]


def stage_framing(cfg: PipelineConfig) -> list[Path]:
    """Extract adjective-anchor frames from parses and rank by log-odds;
    writes framing.csv."""
    p = cfg.params
    lexicons = load_curated_lexicon(cfg.paths["lexicon"])
    matcher = build_matcher(lexicons)
    ideology_csv = cfg.out_dir / "ideology.csv"
    groups = _load_ideology_groups(ideology_csv) if ideology_csv.exists() else {}

    counts: dict[str, dict[str, dict[str, int]]] = {
        issue: {LIBERAL: {}, CONSERVATIVE: {}} for issue in ISSUES
    }
    for sentence in parse_conllu(cfg.paths["conllu"]):
        group = sentence.metadata.get("ideology")
        if group is None:
            user = sentence.metadata.get("user_id")
            group = groups.get(user) if user else None
        if group not in (LIBERAL, CONSERVATIVE):
            continue
        for frame in extract_frames(sentence, matcher):
            bucket = counts[frame.issue][group]
            bucket[frame.key] = bucket.get(frame.key, 0) + 1

    rows = []
    top_k = int(p["framing_top_k"])
    for issue in ISSUES:
        lib_counts, con_counts = apply_frequency_floor(
            counts[issue][LIBERAL], counts[issue][CONSERVATIVE], int(p["framing_min_count"])
        )
        if not lib_counts and not con_counts:
            continue
        scores = log_odds(lib_counts, con_counts, p["alpha"])
        if top_k > 0:
            keep = {ph for ph, _ in top_phrases(scores, top_k, "a")}
            keep |= {ph for ph, _ in top_phrases(scores, top_k, "b")}
        else:
            keep = set(scores)
        for phrase in sorted(keep, key=lambda ph: (-scores[ph], ph)):
            rows.append(
                (
                    issue,
                    phrase,
                    lib_counts.get(phrase, 0),
                    con_counts.get(phrase, 0),
                    scores[phrase],
                )
            )
    out = write_csv(
        cfg.out_dir / "framing.csv",
        ("issue", "phrase", "count_liberal", "count_conservative", "log_odds"),
        rows,
        cfg,
    )
    return [out]


def stage_elites(cfg: PipelineConfig) -> list[Path]:
    """Elite vs non-elite moral share comparisons; writes elites.csv."""
    p = cfg.params
    roster = load_roster(cfg.paths["roster"])
    groups = _load_ideology_groups(cfg.out_dir / "ideology.csv")
    records = _analysis_records(cfg.out_dir / "moral.jsonl", groups)
    categories = (
        MORAL_CATEGORIES if p["elite_all_categories"] else DEFAULT_ELITE_CATEGORIES
    )
    results = elite_comparison_table(
        records,
        roster,
        issues=ISSUES,
        categories=categories,
        B=int(p["bootstrap"]),
        seed=int(p["seed"]),
    )
    rows = [
        (
            r.issue,
            r.category,
            r.ideology,
            r.elite_mean,
            r.nonelite_mean,
            r.u,
            r.p_value,
            r.significant,
        )
        for r in results
    ]
    out = write_csv(
        cfg.out_dir / "elites.csv",
        ("issue", "moral", "ideology", "elite_mean", "nonelite_mean", "U", "p", "significant"),
        rows,
        cfg,
    )
    return [out]


_STAGE_FUNCS = {
    "induce": stage_induce,
    "tag": stage_tag,
    "ideology": stage_ideology,
    "moral": stage_moral,
    "series": stage_series,
    "acf": stage_acf,
    "framing": stage_framing,
    "elites": stage_elites,
}


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run the enabled stages in dependency order and write a manifest.

    The manifest lists every output file with its content hash plus the full
    config snapshot; it is written even when a stage fails (with the failure
    recorded), and identical runs produce identical manifests.
    """
    errors = validate_config(cfg)
    if errors:
        raise ValueError("invalid config:\n  " + "\n  ".join(errors))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    stages_run: list[str] = []
    status = "ok"
    stage = None
    try:
        for stage in STAGES:
            if not cfg.stages.get(stage):
                continue
            outputs.extend(_STAGE_FUNCS[stage](cfg))
            stages_run.append(stage)
    except Exception as exc:
        status = f"failed:{stage}: {exc}"
        raise
    finally:
        manifest = {
            "tool": "wedgepipe",
            "version": __version__,
            "config_hash": cfg.config_hash(),
            "config": cfg.jsonable(),
            "stages_run": stages_run,
            "status": status,
            "outputs": sorted(
                (
                    {
                        "path": str(path.relative_to(cfg.out_dir)),
                        "sha256": _sha256(path),
                        "bytes": path.stat().st_size,
                    }
                    for path in outputs
                ),
                key=lambda entry: entry["path"],
            ),
        }
        manifest_path = cfg.out_dir / "manifest.json"
        manifest_path.write_text(
            json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return manifest


# ---------------------------------------------------------------------------
# argparse wiring

def _config_from_args(args, enabled_stage: str | None = None) -> PipelineConfig:
    cfg = PipelineConfig()
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    for key in _PATH_KEYS + ("out_dir",):
        value = getattr(args, key, None)
        if value:
            cfg.paths[key] = value
    for key in DEFAULT_PARAMS:
        value = getattr(args, key, None)
        if value is not None:
            cfg.params[key] = value
    destination = getattr(args, "tag_destination", None)
    if destination:
        if destination.endswith(".jsonl"):
            cfg.paths["tag_out"] = destination
            cfg.paths.setdefault("out_dir", str(Path(destination).parent))
        else:
            cfg.paths["out_dir"] = destination
    if "WEDGEPIPE_THREADS" in os.environ:
        cfg.params["workers"] = int(os.environ["WEDGEPIPE_THREADS"])
    if enabled_stage:
        cfg.stages = {s: s == enabled_stage for s in STAGES}
    return cfg


def _add_common(parser):
    parser.add_argument("--out-dir", dest="out_dir", default=None, help="output directory")
    parser.add_argument("--seed", dest="seed", type=int, default=None)
    parser.add_argument("--workers", dest="workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wedgepipe",
        description="Issue, ideology and moral-language analytics over tweet corpora",
    )
    parser.add_argument("--version", action="version", version=f"wedgepipe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="induce candidate issue phrases")
    p.add_argument("--issue-docs", dest="issue_docs", required=True)
    p.add_argument("--baseline-docs", dest="baseline_docs", required=True)
    p.add_argument("--lambda", dest="l1_penalty", type=float, default=None)
    p.add_argument("--top-k", dest="top_k", type=int, default=None)
    p.add_argument("--smoothing", dest="smoothing", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("tag", help="tag tweets with issue labels")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--tweets", action="append", required=True)
    p.add_argument("--out", dest="tag_destination", default=None,
                   help="output JSONL path, or a directory for tagged.jsonl")
    _add_common(p)

    p = sub.add_parser("ideology", help="score and propagate user ideology")
    p.add_argument("--bias-table", dest="bias_table", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--tweets", action="append", required=True)
    p.add_argument("--l2", dest="l2", type=float, default=None)
    p.add_argument("--min-urls", dest="min_urls", type=int, default=None)
    p.add_argument("--class-weight", dest="class_weight", default=None,
                   choices=("none", "balanced"))
    _add_common(p)

    p = sub.add_parser("moral", help="score documents on moral categories")
    p.add_argument("--method", dest="moral_method", choices=("ddr", "lexicon"), default=None)
    p.add_argument("--moral-lexicon", dest="moral_lexicon", required=True)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--tweets", action="append", default=None,
                   help="input JSONL (defaults to tagged.jsonl in the output dir)")
    _add_common(p)

    p = sub.add_parser("series", help="build daily share/delta/moral series")
    p.add_argument("--window", dest="window", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("acf", help="autocorrelation and persistence of moral series")
    p.add_argument("--max-lag", dest="max_lag", type=int, default=None)
    p.add_argument("--split", dest="split_date", default=None)
    _add_common(p)

    p = sub.add_parser("framing", help="adjective-anchor framing log-odds")
    p.add_argument("--conllu", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--alpha", dest="alpha", type=float, default=None)
    p.add_argument("--top-k", dest="framing_top_k", type=int, default=None)
    p.add_argument("--min-count", dest="framing_min_count", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("elites", help="elite vs non-elite moral comparisons")
    p.add_argument("--roster", required=True)
    p.add_argument("--bootstrap", dest="bootstrap", type=int, default=None)
    p.add_argument("--all-categories", dest="elite_all_categories",
                   action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("run", help="run configured stages and write a manifest")
    p.add_argument("--config", required=True)
    _add_common(p)

    p = sub.add_parser("validate", help="check a config file, reporting all problems")
    p.add_argument("--config", required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command

    if command == "validate":
        try:
            cfg = load_config(args.config)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        errors = validate_config(cfg)
        if errors:
            for err in errors:
                print(f"error: {err}", file=sys.stderr)
            return 1
        print("ok")
        return 0

    if command == "run":
        cfg = _config_from_args(args)
        try:
            manifest = run_pipeline(cfg)
        except Exception as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {len(manifest['outputs'])} artifact(s) to {cfg.out_dir}")
        return 0

    cfg = _config_from_args(args, enabled_stage=command)
    errors = validate_config(cfg)
    if errors:
        for err in errors:
            print(f"error: {err}", file=sys.stderr)
        return 1
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    try:
        written = _STAGE_FUNCS[command](cfg)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
