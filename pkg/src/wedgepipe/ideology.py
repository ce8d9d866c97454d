"""User ideology scoring from shared-domain bias tables, with logistic-regression
propagation to users who shared no scorable URLs.

Scores live on a 0-1 left-right scale; <= 0.4 binarizes to liberal and
>= 0.6 to conservative. URL-less users receive a label predicted from the
mean embedding of their tweets.
"""

from __future__ import annotations

import csv
import re
import warnings
from dataclasses import dataclass
from importlib import resources
from urllib.parse import urlsplit

import numpy as np

LIBERAL = "liberal"
CONSERVATIVE = "conservative"
UNLABELED = "unlabeled"

BIAS_SCORES = (0.0, 0.25, 0.5, 0.75, 1.0)

_IPV4_RE = re.compile(r"^\d{1,3}(?:\.\d{1,3}){3}$")


class PublicSuffixRules:
    """Registrable-domain extraction rules (public-suffix list semantics)."""

    def __init__(self, lines):
        self.rules: dict[tuple[str, ...], bool] = {}  # labels -> is_exception
        for raw in lines:
            line = raw.strip().lower()
            if not line or line.startswith("//"):
                continue
            exception = line.startswith("!")
            if exception:
                line = line[1:]
            self.rules[tuple(line.split("."))] = exception

    def _matches(self, rule: tuple[str, ...], labels: tuple[str, ...]) -> bool:
        if len(rule) > len(labels):
            return False
        return all(
            r == "*" or r == lab for r, lab in zip(reversed(rule), reversed(labels))
        )

    def registrable_domain(self, host: str):
        """PLD of a hostname, or None when the host is itself a public suffix."""
        labels = tuple(host.lower().rstrip(".").split("."))
        if any(not lab for lab in labels):
            return None
        suffix_len = 1  # implicit "*" rule
        for rule, exception in self.rules.items():
            if not self._matches(rule, labels):
                continue
            if exception:
                suffix_len = len(rule) - 1
                break
            suffix_len = max(suffix_len, len(rule))
        if len(labels) <= suffix_len:
            return None
        return ".".join(labels[-(suffix_len + 1) :])


_default_rules = None


def default_suffix_rules() -> PublicSuffixRules:
    global _default_rules
    if _default_rules is None:
        text = (
            resources.files("wedgepipe.data")
            .joinpath("public_suffixes.dat")
            .read_text(encoding="utf-8")
        )
        _default_rules = PublicSuffixRules(text.splitlines())
    return _default_rules


def extract_pld(url: str, rules: PublicSuffixRules | None = None):
    """Lowercased registrable domain of an absolute URL, or None when unusable."""
    if rules is None:
        rules = default_suffix_rules()
    try:
        host = urlsplit(url.strip()).hostname
    except ValueError:
        return None
    if not host or "." not in host or _IPV4_RE.match(host) or host.startswith("["):
        return None
    return rules.registrable_domain(host)


def load_bias_table(path) -> dict[str, float]:
    """Read a `domain,score` CSV into a PLD -> bias-score map."""
    table: dict[str, float] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for lineno, row in enumerate(csv.reader(handle), 1):
            if not row or row[0].startswith("#"):
                continue
            if lineno == 1 and row[0].strip().lower() == "domain":
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{lineno}: expected domain,score")
            domain = row[0].strip().lower()
            score = float(row[1])
            if score not in BIAS_SCORES:
                raise ValueError(
                    f"{path}:{lineno}: score {score} not in {BIAS_SCORES}"
                )
            table[domain] = score
    return table


def score_user(urls, table: dict[str, float], rules=None):
    """Occurrence-weighted mean bias score of a user's shared URLs.

    Every share counts once (a domain shared three times weighs three times).
    Returns None when no shared URL resolves to a domain in the table.
    """
    hits = []
    for url in urls:
        pld = extract_pld(url, rules)
        if pld is not None and pld in table:
            hits.append(table[pld])
    if not hits:
        return None
    return float(np.mean(hits))


def binarize(score: float) -> str:
    """<= 0.4 -> liberal, >= 0.6 -> conservative, in between -> unlabeled."""
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"score must be in [0, 1], got {score}")
    if score <= 0.4:
        return LIBERAL
    if score >= 0.6:
        return CONSERVATIVE
    return UNLABELED


@dataclass
class UserIdeology:
    user_id: str
    url_score: float | None = None
    url_label: str | None = None
    predicted_label: str | None = None
    probability: float | None = None


@dataclass
class EmbeddingTable:
    """Token -> dense vector map with a fixed dimension."""

    vectors: dict[str, np.ndarray]
    dim: int

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __getitem__(self, token: str) -> np.ndarray:
        return self.vectors[token]


def load_embeddings(path) -> EmbeddingTable:
    """Read a word-vector text file: header `<vocab> <dim>`, then `token v1 .. vd`."""
    vectors: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: header must be '<vocab_size> <dim>'")
        declared, dim = int(header[0]), int(header[1])
        for lineno, line in enumerate(handle, 2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < dim + 1:
                raise ValueError(f"{path}:{lineno}: expected {dim} vector values")
            vec = np.asarray(parts[1 : dim + 1], dtype=float)
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"{path}:{lineno}: non-finite vector entry")
            vectors[parts[0]] = vec
    if declared != len(vectors):
        warnings.warn(
            f"{path}: header declares {declared} vectors, file has {len(vectors)}"
        )
    return EmbeddingTable(vectors=vectors, dim=dim)


def embed_user(token_seqs, table: EmbeddingTable) -> np.ndarray:
    """Mean embedding over all tokens of all of a user's tweets.

    Out-of-vocabulary tokens are skipped; a user whose every token is OOV
    gets the zero vector (with a warning).
    """
    total = np.zeros(table.dim)
    n_tokens = 0
    n_hits = 0
    for seq in token_seqs:
        for token in seq:
            n_tokens += 1
            vec = table.vectors.get(token)
            if vec is not None:
                total += vec
                n_hits += 1
    if n_tokens == 0:
        raise ValueError("embed_user needs at least one token")
    if n_hits == 0:
        warnings.warn("all tokens out of vocabulary; using zero vector")
        return total
    return total / n_hits


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class LRModel:
    """Logistic-regression parameters plus training metadata."""

    weights: np.ndarray
    bias: float
    l2: float
    iterations: int
    final_loss: float
    loss_path: list[float]


def _lr_loss_grad(X, y, sample_w, w, b, l2):
    z = X @ w + b
    p = _sigmoid(z)
    # mean of softplus(z) - y*z is the standard cross-entropy, written stably
    loss = float(np.sum(sample_w * (np.logaddexp(0.0, z) - y * z)) + 0.5 * l2 * w @ w)
    resid = sample_w * (p - y)
    grad_w = X.T @ resid + l2 * w
    grad_b = float(np.sum(resid))
    return loss, grad_w, grad_b


def train_lr(
    features,
    labels,
    l2: float = 0.01,
    lr: float = 1.0,
    tol: float = 1e-6,
    max_iter: int = 5000,
    seed: int = 0,
    class_weight=None,
) -> LRModel:
    """Fit logistic regression by deterministic full-batch gradient descent.

    Minimizes mean logistic loss + (l2/2)*||w||^2 from zero initialization;
    stops when the gradient max-norm drops below tol or at max_iter. Steps
    that would increase the loss are halved until they do not, so the
    recorded loss path is non-increasing. `class_weight="balanced"` reweights
    examples inversely to class frequency; `seed` is recorded for future
    subsampling options and does not affect the deterministic fit.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("features must be (n, d) with one label per row")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite values")
    n_pos = int(np.sum(y == 1))
    n_neg = int(np.sum(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("training needs at least one example of each class")

    n = X.shape[0]
    if class_weight == "balanced":
        wts = np.where(y == 1, n / (2.0 * n_pos), n / (2.0 * n_neg)) / n
    else:
        wts = np.full(n, 1.0 / n)

    w = np.zeros(X.shape[1])
    b = 0.0
    loss, grad_w, grad_b = _lr_loss_grad(X, y, wts, w, b, l2)
    path = [loss]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        if max(np.max(np.abs(grad_w)), abs(grad_b)) < tol:
            iterations -= 1
            break
        step = lr
        while True:
            w_new = w - step * grad_w
            b_new = b - step * grad_b
            new_loss, new_gw, new_gb = _lr_loss_grad(X, y, wts, w_new, b_new, l2)
            if new_loss <= loss or step < 1e-18:
                break
            step *= 0.5
        if new_loss > loss:
            break
        w, b, loss, grad_w, grad_b = w_new, b_new, new_loss, new_gw, new_gb
        path.append(loss)

    return LRModel(
        weights=w, bias=b, l2=l2, iterations=iterations, final_loss=loss, loss_path=path
    )


def predict(model: LRModel, features):
    """(label, probability) for one feature vector; 0.5 ties go conservative."""
    x = np.asarray(features, dtype=float)
    if x.shape != model.weights.shape:
        raise ValueError(
            f"feature dimension {x.shape} does not match model {model.weights.shape}"
        )
    prob = float(_sigmoid(np.atleast_1d(x @ model.weights + model.bias))[0])
    label = CONSERVATIVE if prob >= 0.5 else LIBERAL
    return label, prob


def agreement(labels_a: dict, labels_b: dict):
    """(F1, Jaccard) between two binary label maps over their shared users.

    F1 takes conservative as the positive class with `labels_a` as the
    reference; Jaccard is the fraction of shared users with equal labels.
    """
    shared = [
        u
        for u in labels_a.keys() & labels_b.keys()
        if labels_a[u] in (LIBERAL, CONSERVATIVE)
        and labels_b[u] in (LIBERAL, CONSERVATIVE)
    ]
    if not shared:
        raise ValueError("no shared binary-labeled users")
    tp = sum(1 for u in shared if labels_a[u] == CONSERVATIVE and labels_b[u] == CONSERVATIVE)
    fp = sum(1 for u in shared if labels_a[u] == LIBERAL and labels_b[u] == CONSERVATIVE)
    fn = sum(1 for u in shared if labels_a[u] == CONSERVATIVE and labels_b[u] == LIBERAL)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    jaccard = sum(1 for u in shared if labels_a[u] == labels_b[u]) / len(shared)
    return f1, jaccard
