import math

import numpy as np
import pytest

from wedgepipe.ideology import (
    CONSERVATIVE,
    LIBERAL,
    UNLABELED,
    EmbeddingTable,
    agreement,
    binarize,
    embed_user,
    extract_pld,
    load_bias_table,
    load_embeddings,
    predict,
    score_user,
    train_lr,
    _lr_loss_grad,
)


class TestExtractPld:
    def test_plain_com(self):
        assert extract_pld("https://www.nytimes.com/2020/a") == "nytimes.com"

    def test_second_level_suffix(self):
        assert extract_pld("http://news.bbc.co.uk/x") == "bbc.co.uk"

    def test_not_a_url(self):
        assert extract_pld("not a url") is None

    def test_bare_suffix_has_no_registrable_domain(self):
        assert extract_pld("https://co.uk/path") is None

    def test_ip_addresses_skipped(self):
        assert extract_pld("http://192.168.0.1/x") is None

    def test_wildcard_rule(self):
        assert extract_pld("http://foo.bar.ck/") == "foo.bar.ck"

    def test_exception_rule(self):
        assert extract_pld("http://www.ck/") == "www.ck"

    def test_unknown_tld_falls_back_to_single_label(self):
        assert extract_pld("https://sub.example.zz/") == "example.zz"

    def test_case_and_port_handling(self):
        assert extract_pld("HTTPS://WWW.NYTIMES.COM:443/a") == "nytimes.com"


class TestScoreUser:
    def test_occurrence_weighted_mean(self):
        table = {"red.example": 1.0, "blue.example": 0.0}
        urls = ["https://red.example/a"] * 3 + ["https://blue.example/b"]
        assert score_user(urls, table) == pytest.approx(0.75)

    def test_single_share(self):
        table = {"x.example": 0.25}
        assert score_user(["https://x.example/p"], table) == pytest.approx(0.25)

    def test_no_hits_absent(self):
        assert score_user(["https://other.example/"], {"x.example": 1.0}) is None

    def test_order_invariance(self):
        table = {"a.example": 0.0, "b.example": 0.75, "c.example": 1.0}
        urls = [f"https://{d}/x" for d in ("a.example", "b.example", "c.example", "b.example")]
        forward = score_user(urls, table)
        backward = score_user(list(reversed(urls)), table)
        assert forward == backward


class TestBinarize:
    @pytest.mark.parametrize(
        "score,expected",
        [(0.4, LIBERAL), (0.5, UNLABELED), (0.6, CONSERVATIVE), (0.0, LIBERAL), (1.0, CONSERVATIVE)],
    )
    def test_thresholds(self, score, expected):
        assert binarize(score) == expected

    @pytest.mark.parametrize("score", [-0.1, 1.1])
    def test_out_of_range(self, score):
        with pytest.raises(ValueError):
            binarize(score)

    def test_composition_with_score_user(self):
        lib_table = {"left.example": 0.0}
        con_table = {"right.example": 1.0}
        lib = score_user(["https://left.example/1", "https://left.example/2"], lib_table)
        con = score_user(["https://right.example/1"], con_table)
        assert binarize(lib) == LIBERAL
        assert binarize(con) == CONSERVATIVE


def table_of(vectors):
    dim = len(next(iter(vectors.values())))
    return EmbeddingTable(
        vectors={k: np.asarray(v, dtype=float) for k, v in vectors.items()}, dim=dim
    )


class TestEmbedUser:
    def test_single_token_identity(self):
        table = table_of({"a": [1.0, 2.0]})
        np.testing.assert_allclose(embed_user([["a"]], table), [1.0, 2.0])

    def test_mean_of_tokens(self):
        table = table_of({"a": [1.0, 0.0], "b": [0.0, 1.0]})
        np.testing.assert_allclose(embed_user([["a", "b"]], table), [0.5, 0.5])

    def test_mean_spans_tweets(self):
        table = table_of({"a": [2.0], "b": [4.0]})
        np.testing.assert_allclose(embed_user([["a"], ["b"]], table), [3.0])

    def test_all_oov_zero_vector_with_warning(self):
        table = table_of({"a": [1.0, 1.0]})
        with pytest.warns(UserWarning, match="out of vocabulary"):
            got = embed_user([["zzz"]], table)
        np.testing.assert_allclose(got, [0.0, 0.0])

    def test_no_tokens_rejected(self):
        table = table_of({"a": [1.0]})
        with pytest.raises(ValueError):
            embed_user([[]], table)


class TestLoadEmbeddings:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("2 3\nfoo 1 2 3\nbar 0.5 0 -1\n", encoding="utf-8")
        table = load_embeddings(path)
        assert table.dim == 3
        np.testing.assert_allclose(table.vectors["bar"], [0.5, 0.0, -1.0])

    def test_header_mismatch_warns(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("5 2\nfoo 1 2\n", encoding="utf-8")
        with pytest.warns(UserWarning, match="declares 5"):
            load_embeddings(path)

    def test_short_row_fatal(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("1 3\nfoo 1 2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_embeddings(path)


class TestBiasTable:
    def test_load(self, tmp_path):
        path = tmp_path / "bias.csv"
        path.write_text("domain,score\nFoo.example,0.25\nbar.example,1\n", encoding="utf-8")
        table = load_bias_table(path)
        assert table == {"foo.example": 0.25, "bar.example": 1.0}

    def test_off_scale_score_rejected(self, tmp_path):
        path = tmp_path / "bias.csv"
        path.write_text("foo.example,0.3\n", encoding="utf-8")
        with pytest.raises(ValueError, match="0.3"):
            load_bias_table(path)


def separable_data(n=200, seed=0, dim=4, margin=1.0):
    rng = np.random.default_rng(seed)
    half = n // 2
    X = rng.normal(size=(n, dim))
    X[:half, 0] = -margin - np.abs(X[:half, 0])
    X[half:, 0] = margin + np.abs(X[half:, 0])
    y = np.array([0.0] * half + [1.0] * half)
    return X, y


class TestTrainLr:
    def test_zero_model_predicts_half(self):
        X, y = separable_data(20)
        model = train_lr(X, y, max_iter=0)
        label, prob = predict(model, np.zeros(X.shape[1]))
        assert prob == pytest.approx(0.5)
        assert label == CONSERVATIVE  # 0.5 ties go conservative

    def test_separable_1d_reaches_full_accuracy(self):
        X = np.array([[-1.0]] * 30 + [[1.0]] * 30)
        y = np.array([0.0] * 30 + [1.0] * 30)
        model = train_lr(X, y, l2=0.01, lr=1.0, tol=1e-8, max_iter=2000)
        correct = sum(
            (predict(model, x)[0] == CONSERVATIVE) == bool(t) for x, t in zip(X, y)
        )
        assert correct == len(y)

    def test_loss_monotone_nonincreasing(self):
        X, y = separable_data(120, seed=5)
        model = train_lr(X, y, l2=0.1, lr=2.0, tol=0.0, max_iter=300)
        path = np.array(model.loss_path)
        assert np.all(np.diff(path) <= 1e-12)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(40, 3))
        y = (rng.random(40) < 0.5).astype(float)
        wts = np.full(40, 1.0 / 40)
        for _ in range(10):
            w = rng.normal(size=3)
            b = float(rng.normal())
            _, grad_w, grad_b = _lr_loss_grad(X, y, wts, w, b, l2=0.05)
            h = 1e-6
            for j in range(3):
                bump = np.zeros(3)
                bump[j] = h
                up, _, _ = _lr_loss_grad(X, y, wts, w + bump, b, 0.05)
                down, _, _ = _lr_loss_grad(X, y, wts, w - bump, b, 0.05)
                numeric = (up - down) / (2 * h)
                assert abs(numeric - grad_w[j]) / max(1e-8, abs(grad_w[j])) < 1e-5
            up, _, _ = _lr_loss_grad(X, y, wts, w, b + h, 0.05)
            down, _, _ = _lr_loss_grad(X, y, wts, w, b - h, 0.05)
            numeric = (up - down) / (2 * h)
            assert abs(numeric - grad_b) / max(1e-8, abs(grad_b)) < 1e-5

    def test_weight_norm_shrinks_with_l2(self):
        X, y = separable_data(150, seed=2)
        norms = []
        for l2 in (0.01, 1.0, 100.0):
            model = train_lr(X, y, l2=l2, lr=1.0, tol=1e-9, max_iter=3000)
            norms.append(float(np.linalg.norm(model.weights)))
        assert norms[0] > norms[1] > norms[2]

    def test_single_class_rejected(self):
        X = np.ones((5, 2))
        with pytest.raises(ValueError):
            train_lr(X, np.ones(5))


class TestPredict:
    def test_bias_log3_gives_three_quarters(self):
        from wedgepipe.ideology import LRModel

        model = LRModel(
            weights=np.zeros(2), bias=math.log(3), l2=0.0, iterations=0,
            final_loss=0.0, loss_path=[],
        )
        label, prob = predict(model, np.array([5.0, -7.0]))
        assert prob == pytest.approx(0.75)
        assert label == CONSERVATIVE

    def test_large_margin_saturates(self):
        from wedgepipe.ideology import LRModel

        model = LRModel(
            weights=np.array([100.0]), bias=0.0, l2=0.0, iterations=0,
            final_loss=0.0, loss_path=[],
        )
        _, prob = predict(model, np.array([50.0]))
        assert prob == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        from wedgepipe.ideology import LRModel

        model = LRModel(
            weights=np.zeros(3), bias=0.0, l2=0.0, iterations=0,
            final_loss=0.0, loss_path=[],
        )
        with pytest.raises(ValueError):
            predict(model, np.zeros(2))


class TestAgreement:
    def test_identical_maps(self):
        labels = {"u1": CONSERVATIVE, "u2": LIBERAL}
        assert agreement(labels, dict(labels)) == (1.0, 1.0)

    def test_full_disagreement(self):
        a = {"u1": CONSERVATIVE, "u2": LIBERAL}
        b = {"u1": LIBERAL, "u2": CONSERVATIVE}
        assert agreement(a, b) == (0.0, 0.0)

    def test_hand_computed_confusion(self):
        a = {"u1": CONSERVATIVE, "u2": LIBERAL, "u3": CONSERVATIVE}
        b = {"u1": CONSERVATIVE, "u2": CONSERVATIVE, "u3": CONSERVATIVE}
        f1, jaccard = agreement(a, b)
        assert f1 == pytest.approx(0.8)
        assert jaccard == pytest.approx(2 / 3)

    def test_empty_intersection_rejected(self):
        with pytest.raises(ValueError):
            agreement({"u1": LIBERAL}, {"u2": LIBERAL})
