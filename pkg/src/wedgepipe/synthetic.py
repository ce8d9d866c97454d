"""Seeded synthetic fixture generator.

Builds a complete miniature input set for the pipeline: reference documents
for lexicon induction, a curated lexicon, tweets with group-dependent issue
attention, moral language and URL-sharing habits, a domain bias table, word
vectors, an elite roster, dependency parses with framing patterns, and a
ready-to-run config. Everything derives from one seed, so reruns are
byte-identical.
"""

from __future__ import annotations

import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .lexicon import ISSUES
from .moral import MORAL_CATEGORIES

# Phrases the curated lexicon carries per issue; also the anchor inventory
# for framing sentences.
LEXICON_PHRASES = {
    "origins": ["wuhan labs", "lab leak", "wet market", "plandemic", "gain of function"],
    "lockdowns": ["stayhome", "lockdown", "lockdowns", "stay at home", "reopening", "quarantine"],
    "masking": ["mask", "masks", "mask mandate", "face coverings", "covering your mouths", "n95"],
    "education": ["university", "school closures", "online learning", "homeschooling", "reopen schools"],
    "vaccines": ["vaccine", "vaccines", "anti-vaxxers", "vaccinated", "vaccine mandate", "booster"],
}

# Small per-category moral seed sets; every word also enters the embedding
# vocabulary so both scoring backends work on the fixture.
MORAL_SEEDS = {
    "care": ["care", "protect", "safety", "compassion"],
    "harm": ["harm", "hurt", "suffer", "dangerous"],
    "fairness": ["fair", "justice", "equal", "rights"],
    "cheating": ["cheat", "unfair", "fraud", "corrupt"],
    "loyalty": ["loyal", "patriot", "united", "solidarity"],
    "betrayal": ["betray", "traitor", "treason", "disloyal"],
    "authority": ["authority", "law", "order", "duty"],
    "subversion": ["defy", "rebel", "chaos", "riot"],
    "purity": ["pure", "sacred", "clean", "holy"],
    "degradation": ["dirty", "filth", "toxic", "rotten"],
}

FILLER = (
    "today people think about the news and talk with friends while reading "
    "reports from the city state response plan during this long year with "
    "numbers rising again and everyone waiting for better days ahead soon"
).split()

LIBERAL_WORDS = ["community", "healthcare", "science", "equity", "workers", "public"]
CONSERVATIVE_WORDS = ["freedom", "liberty", "business", "government", "taxes", "constitution"]

BIAS_DOMAINS = [
    ("leftwire.example", 0.0),
    ("bluebeat.example", 0.0),
    ("centerleft.example", 0.25),
    ("plainfacts.example", 0.5),
    ("heartland.example", 0.75),
    ("redledger.example", 1.0),
    ("rightwire.example", 1.0),
]

FRAMING_PAIRS = {
    "liberal": [
        ("safe", "vaccines"), ("free", "vaccines"), ("effective", "vaccines"),
        ("premature", "reopening"), ("careful", "reopening"),
        ("reusable", "masks"), ("mandatory", "masks"),
        ("hybrid", "university"), ("vulnerable", "university"),
        ("likely", "wet market"),
    ],
    "conservative": [
        ("dangerous", "vaccines"), ("experimental", "vaccines"),
        ("unconstitutional", "lockdowns"), ("deadly", "lockdowns"),
        ("useless", "masks"), ("tyrannical", "mask mandate"),
        ("fascist", "university"), ("unmasked", "university"),
        ("fake", "plandemic"), ("secret", "wuhan labs"),
    ],
}

# Per-group, per-issue attention weights (last slot = off-topic filler tweet).
ISSUE_WEIGHTS = {
    "liberal": {"origins": 0.06, "lockdowns": 0.10, "masking": 0.14,
                "education": 0.18, "vaccines": 0.16},
    "conservative": {"origins": 0.16, "lockdowns": 0.18, "masking": 0.12,
                     "education": 0.08, "vaccines": 0.14},
}

# Daily modulation of moral-expression rates: liberal discourse drifts on a
# slow monthly wave (slow ACF decay), conservative discourse follows a rapid
# news-cycle oscillation (fast decay).
MORAL_WAVE_PERIOD = {"liberal": 28.0, "conservative": 7.0}
MORAL_WAVE_AMPLITUDE = 0.6

# Probability a tweet expresses a moral category (group- and role-dependent).
MORAL_RATES = {
    ("liberal", False): {"care": 0.30, "harm": 0.12, "fairness": 0.10, "cheating": 0.05,
                         "authority": 0.08, "subversion": 0.05, "loyalty": 0.04,
                         "betrayal": 0.02, "purity": 0.02, "degradation": 0.02},
    ("conservative", False): {"care": 0.14, "harm": 0.26, "fairness": 0.06, "cheating": 0.10,
                              "authority": 0.10, "subversion": 0.14, "loyalty": 0.05,
                              "betrayal": 0.04, "purity": 0.03, "degradation": 0.03},
    ("liberal", True): {"care": 0.45, "harm": 0.18, "fairness": 0.16, "cheating": 0.08,
                        "authority": 0.14, "subversion": 0.08, "loyalty": 0.05,
                        "betrayal": 0.02, "purity": 0.02, "degradation": 0.02},
    ("conservative", True): {"care": 0.22, "harm": 0.38, "fairness": 0.10, "cheating": 0.15,
                             "authority": 0.16, "subversion": 0.22, "loyalty": 0.06,
                             "betrayal": 0.05, "purity": 0.03, "degradation": 0.03},
}

KIND_WEIGHTS = (("original", 0.55), ("retweet", 0.27), ("reply", 0.18))


def _phrase_tokens(phrase: str) -> list[str]:
    return phrase.replace("-", " ").split()


def _vocabulary() -> list[str]:
    vocab: list[str] = []
    seen = set()

    def add(words):
        for w in words:
            w = w.lower().replace("-", "")
            if w not in seen:
                seen.add(w)
                vocab.append(w)

    add(FILLER)
    add(LIBERAL_WORDS)
    add(CONSERVATIVE_WORDS)
    for phrases in LEXICON_PHRASES.values():
        for p in phrases:
            add(p.split())
    for seeds in MORAL_SEEDS.values():
        add(seeds)
    for pairs in FRAMING_PAIRS.values():
        for adj, anchor in pairs:
            add([adj])
            add(anchor.split())
    add(["the", "and", "mandate", "policy", "debate"])
    return vocab


def write_embeddings(path: Path, rng: np.random.Generator, dim: int = 12) -> list[str]:
    """Word-vector file over the fixture vocabulary.

    Axis 0 separates the ideology word pools (so label propagation has
    signal); each moral category gets its own noisy direction so embedding
    similarity scoring is meaningful too.
    """
    vocab = _vocabulary()
    vectors = {w: rng.normal(0.0, 0.3, size=dim) for w in vocab}
    for w in LIBERAL_WORDS:
        vectors[w.lower()][0] += 1.0
    for w in CONSERVATIVE_WORDS:
        vectors[w.lower()][0] -= 1.0
    for k, cat in enumerate(MORAL_CATEGORIES):
        direction = np.zeros(dim)
        direction[1 + k % (dim - 1)] = 1.0
        sign = 1.0 if k % 2 == 0 else -1.0
        for w in MORAL_SEEDS[cat]:
            vectors[w.lower()] += 0.9 * sign * direction
    lines = [f"{len(vocab)} {dim}"]
    for w in vocab:
        coords = " ".join(f"{v:.6f}" for v in vectors[w])
        lines.append(f"{w} {coords}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return vocab

def write_lexicon(path: Path) -> None:
    lines = ["# curated issue lexicon (fixture)"]
    for issue in ISSUES:
        for phrase in LEXICON_PHRASES[issue]:
            lines.append(f"{issue}\t{phrase}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_moral_lexicon(path: Path) -> None:
    lines = ["# moral seed lexicon (fixture)"]
    for cat in MORAL_CATEGORIES:
        for word in MORAL_SEEDS[cat]:
            lines.append(f"{cat}\t{word}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_bias_table(path: Path) -> None:
    lines = ["domain,score"] + [f"{d},{s}" for d, s in BIAS_DOMAINS]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_reference_docs(issue_dir: Path, baseline_dir: Path, rng: np.random.Generator) -> None:
    """Reference documents for induction: issue files oversample their own
    phrases against a shared filler background."""
    issue_dir.mkdir(parents=True, exist_ok=True)
    baseline_dir.mkdir(parents=True, exist_ok=True)
    base_pool = FILLER + ["pandemic", "virus", "health", "response", "policy", "debate"]
    for issue in ISSUES:
        words: list[str] = []
        for _ in range(400):
            words.extend(rng.choice(base_pool, size=6))
            phrase = LEXICON_PHRASES[issue][int(rng.integers(len(LEXICON_PHRASES[issue])))]
            words.extend(_phrase_tokens(phrase))
        (issue_dir / f"{issue}.txt").write_text(" ".join(words) + "\n", encoding="utf-8")
    for i in range(2):
        words = [str(w) for w in rng.choice(base_pool, size=3000)]
        (baseline_dir / f"baseline_{i}.txt").write_text(" ".join(words) + "\n", encoding="utf-8")


def _tweet_text(rng, group: str, issue, moral_cats) -> str:
    words = list(rng.choice(FILLER, size=int(rng.integers(5, 10))))
    flavored = LIBERAL_WORDS if group == "liberal" else CONSERVATIVE_WORDS
    words.extend(rng.choice(flavored, size=int(rng.integers(1, 4))))
    if issue is not None:
        phrase = LEXICON_PHRASES[issue][int(rng.integers(len(LEXICON_PHRASES[issue])))]
        insert_at = int(rng.integers(len(words) + 1))
        words[insert_at:insert_at] = _phrase_tokens(phrase)
    for cat in moral_cats:
        words.append(MORAL_SEEDS[cat][int(rng.integers(len(MORAL_SEEDS[cat])))])
    order = rng.permutation(len(words))
    # keep multiword phrases contiguous: only shuffle when no issue phrase
    if issue is None:
        words = [words[i] for i in order]
    return " ".join(words)


def generate_fixture(
    out_dir,
    seed: int = 7,
    n_users: int = 90,
    n_elites: int = 10,
    start_day: date = date(2020, 11, 1),
    n_days: int = 75,
    tweets_per_day: int = 150,
) -> dict:
    """Write the full fixture into out_dir and return its file map."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    write_lexicon(out / "lexicon.tsv")
    write_moral_lexicon(out / "moral_lexicon.tsv")
    write_bias_table(out / "bias.csv")
    write_embeddings(out / "embeddings.vec", rng)
    write_reference_docs(out / "issue_docs", out / "baseline_docs", rng)

    users = [f"u{i:04d}" for i in range(n_users)]
    groups = {u: ("liberal" if i % 3 != 2 else "conservative") for i, u in enumerate(users)}
    elites = users[:n_elites]
    shares_urls = {u: rng.random() < 0.7 for u in users}
    (out / "roster.txt").write_text(
        "# elite accounts (fixture)\n" + "\n".join(elites) + "\n", encoding="utf-8"
    )

    lib_domains = [d for d, s in BIAS_DOMAINS if s <= 0.25]
    con_domains = [d for d, s in BIAS_DOMAINS if s >= 0.75]
    center = [d for d, s in BIAS_DOMAINS if s == 0.5]

    issue_names = list(ISSUES)
    kinds, kind_probs = zip(*KIND_WEIGHTS)
    records = []
    tweet_id = 0
    for d in range(n_days):
        day = start_day + timedelta(days=d)
        # elites post a steady original volume so daily matching has targets
        posters = list(rng.choice(users, size=tweets_per_day)) + list(
            rng.choice(elites, size=max(2, n_elites // 2))
        )
        for user in posters:
            user = str(user)
            group = groups[user]
            is_elite = user in elites
            kind = "original" if is_elite else str(
                rng.choice(kinds, p=np.array(kind_probs) / sum(kind_probs))
            )
            weights = ISSUE_WEIGHTS[group]
            roll = rng.random()
            issue = None
            acc = 0.0
            for name in issue_names:
                acc += weights[name]
                if roll < acc:
                    issue = name
                    break
            rates = MORAL_RATES[(group, is_elite)]
            wave = 1.0 + MORAL_WAVE_AMPLITUDE * np.sin(
                2.0 * np.pi * d / MORAL_WAVE_PERIOD[group]
            )
            moral_cats = [
                c for c in MORAL_CATEGORIES if rng.random() < min(0.95, rates[c] * wave)
            ]
            text = _tweet_text(rng, group, issue, moral_cats)
            urls = []
            if kind == "original" and shares_urls[user] and rng.random() < 0.5:
                pool = lib_domains if group == "liberal" else con_domains
                domain = pool[int(rng.integers(len(pool)))]
                if rng.random() < 0.15:
                    domain = center[0]
                urls.append(f"https://{domain}/p/{tweet_id}")
            hour = int(rng.integers(0, 24))
            minute = int(rng.integers(0, 60))
            records.append(
                {
                    "id": f"t{tweet_id:07d}",
                    "created_at": f"{day.isoformat()}T{hour:02d}:{minute:02d}:00Z",
                    "user_id": user,
                    "kind": kind,
                    "text": text,
                    "urls": urls,
                }
            )
            tweet_id += 1
    with open(out / "tweets.jsonl", "w", encoding="utf-8") as handle:
        for rec in records:
            handle.write(json.dumps(rec, sort_keys=True) + "\n")

    _write_conllu(out / "parses.conllu", rng, users, groups)
    _write_config(out / "config.toml")

    return {
        "tweets": out / "tweets.jsonl",
        "lexicon": out / "lexicon.tsv",
        "moral_lexicon": out / "moral_lexicon.tsv",
        "bias_table": out / "bias.csv",
        "embeddings": out / "embeddings.vec",
        "roster": out / "roster.txt",
        "conllu": out / "parses.conllu",
        "issue_docs": out / "issue_docs",
        "baseline_docs": out / "baseline_docs",
        "config": out / "config.toml",
    }


def _write_conllu(path: Path, rng: np.random.Generator, users, groups) -> None:
    """Dependency parses carrying both framing patterns, tied to users."""
    lib_users = [u for u in users if groups[u] == "liberal"]
    con_users = [u for u in users if groups[u] == "conservative"]
    lines = []
    sent_id = 0
    for side, side_users in (("liberal", lib_users), ("conservative", con_users)):
        pairs = FRAMING_PAIRS[side]
        for _ in range(240):
            adj, anchor = pairs[int(rng.integers(len(pairs)))]
            user = side_users[int(rng.integers(len(side_users)))]
            sent_id += 1
            lines.append(f"# sent_id = s{sent_id:04d}")
            lines.append(f"# user_id = {user}")
            anchor_tokens = anchor.split()
            if rng.random() < 0.25 and len(anchor_tokens) == 1:
                # sibling pattern: ADJ and the anchor both modify a head noun
                rows = [
                    (1, adj, "ADJ", 3, "amod"),
                    (2, anchor_tokens[0], "NOUN", 3, "amod"),
                    (3, "mandate", "NOUN", 0, "root"),
                ]
            else:
                # direct pattern: ADJ modifies the anchor head (last token)
                head = 2 + len(anchor_tokens)
                rows = [(1, "the", "DET", head, "det"), (2, adj, "ADJ", head, "amod")]
                for j, tok in enumerate(anchor_tokens):
                    idx = 3 + j
                    if idx == head:
                        rows.append((idx, tok, "NOUN", 0, "root"))
                    else:
                        rows.append((idx, tok, "NOUN", head, "compound"))
            for idx, form, upos, head, rel in rows:
                lines.append(f"{idx}\t{form}\t{form.lower()}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_")
            lines.append("")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_config(path: Path) -> None:
    path.write_text(
        """# pipeline configuration (synthetic fixture)
[paths]
tweets = "tweets.jsonl"
lexicon = "lexicon.tsv"
moral_lexicon = "moral_lexicon.tsv"
bias_table = "bias.csv"
embeddings = "embeddings.vec"
roster = "roster.txt"
conllu = "parses.conllu"
issue_docs = "issue_docs"
baseline_docs = "baseline_docs"
out_dir = "out"

[params]
l1_penalty = 1.0
top_k = 40
min_count_issue = 2
min_count_baseline = 3
smoothing = 0.1
l2 = 0.01
min_urls = 1
moral_method = "lexicon"
ddr_threshold = 0.55
window = 7
max_lag = 30
split_date = 2020-12-11
alpha = 0.5
framing_top_k = 10
framing_min_count = 5
bootstrap = 50
seed = 7
workers = 1

[stages]
induce = true
tag = true
ideology = true
moral = true
series = true
acf = true
framing = true
elites = true
""",
        encoding="utf-8",
    )
