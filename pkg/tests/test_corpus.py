import json
import random

import pytest

from wedgepipe.corpus import (
    LoadStats,
    SchemaError,
    load_tweets,
    ngrams,
    normalize,
    parse_tweet,
)


def _write_jsonl(path, objs):
    with open(path, "w", encoding="utf-8") as handle:
        for obj in objs:
            handle.write(json.dumps(obj) + "\n")


def _tweet(i, **over):
    obj = {
        "id": f"t{i}",
        "created_at": "2020-06-01T12:00:00Z",
        "user_id": f"u{i}",
        "kind": "original",
        "text": "hello world",
        "urls": [],
    }
    obj.update(over)
    return obj


class TestLoadTweets:
    def test_well_formed_file_passes_through_in_order(self, tmp_path):
        path = tmp_path / "t.jsonl"
        _write_jsonl(path, [_tweet(i) for i in range(3)])
        records = list(load_tweets(path))
        assert [r.id for r in records] == ["t0", "t1", "t2"]

    def test_malformed_line_skipped_and_counted(self, tmp_path):
        path = tmp_path / "t.jsonl"
        lines = [json.dumps(_tweet(i)) for i in range(9)] + ["{not json"]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        stats = LoadStats()
        records = list(load_tweets(path, stats=stats))
        assert len(records) == 9
        assert stats.malformed == 1
        assert stats.malformed_lines == [10]

    def test_empty_file_yields_nothing(self, tmp_path):
        path = tmp_path / "t.jsonl"
        path.write_text("", encoding="utf-8")
        assert list(load_tweets(path)) == []

    def test_too_many_malformed_lines_fatal_with_line_numbers(self, tmp_path):
        path = tmp_path / "t.jsonl"
        lines = [json.dumps(_tweet(0)), "junk1", "junk2"]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        with pytest.raises(SchemaError, match=r"\[2, 3\]"):
            list(load_tweets(path))

    def test_unreadable_file_is_fatal(self, tmp_path):
        with pytest.raises(OSError):
            list(load_tweets(tmp_path / "missing.jsonl"))

    def test_bad_kind_and_missing_keys_count_as_malformed(self, tmp_path):
        path = tmp_path / "t.jsonl"
        bad = [
            _tweet(100, kind="quote"),
            {"id": "x", "created_at": "2020-06-01T00:00:00Z"},
            _tweet(101, created_at="yesterday"),
        ]
        _write_jsonl(path, [_tweet(i) for i in range(27)] + bad)  # 3/30 = 10%, allowed
        stats = LoadStats()
        records = list(load_tweets(path, stats=stats))
        assert len(records) == 27
        assert stats.malformed == 3

    def test_record_count_matches_well_formed_lines(self, tmp_path):
        rng = random.Random(9)
        path = tmp_path / "t.jsonl"
        lines = []
        good = 0
        for i in range(40):
            if rng.random() < 0.92:
                lines.append(json.dumps(_tweet(i)))
                good += 1
            else:
                lines.append("oops")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert len(list(load_tweets(path))) == good

    def test_window_filters_silently(self, tmp_path):
        from datetime import datetime, timezone

        path = tmp_path / "t.jsonl"
        _write_jsonl(
            path,
            [
                _tweet(0, created_at="2020-06-01T12:00:00Z"),
                _tweet(1, created_at="2021-06-01T12:00:00Z"),
            ],
        )
        window = (
            datetime(2020, 1, 1, tzinfo=timezone.utc),
            datetime(2020, 12, 31, tzinfo=timezone.utc),
        )
        stats = LoadStats()
        records = list(load_tweets(path, window=window, stats=stats))
        assert [r.id for r in records] == ["t0"]
        assert stats.filtered == 1

    def test_empty_id_rejected(self):
        with pytest.raises(ValueError):
            parse_tweet(_tweet(0, id=""))


class TestNormalize:
    def test_punctuation_and_case(self):
        assert normalize("Wuhan LABS!") == ["wuhan", "labs"]

    def test_hashtags_urls_mentions(self):
        assert normalize("#StayHome https://t.co/x @user") == ["stayhome"]

    def test_empty(self):
        assert normalize("") == []

    def test_intra_word_hyphen_kept(self):
        assert normalize("anti-vaxxers use N-95 masks - sometimes") == [
            "anti-vaxxers",
            "use",
            "n-95",
            "masks",
            "sometimes",
        ]

    def test_curly_punctuation_removed(self):
        assert normalize("We’re “safely” done") == ["were", "safely", "done"]

    def test_underscores_are_punctuation(self):
        assert normalize("a_b c") == ["ab", "c"]

    def test_idempotent_on_random_soup(self):
        rng = random.Random(3)
        alphabet = "abcXYZ0189 #@-_.!?:/’é中"
        for _ in range(200):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 60)))
            once = normalize(text)
            again = normalize(" ".join(once))
            assert once == again


class TestNgrams:
    def test_bigram_enumeration(self):
        got = ngrams(["a", "b", "c"], 2)
        assert got.counts == {"a": 1, "b": 1, "c": 1, "a_b": 1, "b_c": 1}
        assert got.total == 5

    def test_short_sequence(self):
        got = ngrams(["a"], 3)
        assert got.counts == {"a": 1}
        assert got.total == 1

    def test_multiplicity(self):
        got = ngrams(["a", "a"], 1)
        assert got.counts == {"a": 2}
        assert got.total == 2

    @pytest.mark.parametrize("n_max", [0, 4, -1])
    def test_n_max_out_of_range(self, n_max):
        with pytest.raises(ValueError):
            ngrams(["a"], n_max)

    def test_total_formula(self):
        rng = random.Random(11)
        for _ in range(50):
            length = rng.randrange(0, 15)
            tokens = [rng.choice("abcd") for _ in range(length)]
            got = ngrams(tokens, 3)
            expected = max(length, 0) + max(length - 1, 0) + max(length - 2, 0)
            assert got.total == expected
