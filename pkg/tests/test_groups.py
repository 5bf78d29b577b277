import time

import pytest

from qonsager.groups import (
    FreeProductWord,
    GroupError,
    SemidirectWord,
    check_translations,
    reduced_words,
    translate_fp_to_sd,
    translate_sd_to_fp,
)

fp = FreeProductWord.parse
sd = SemidirectWord.parse


def test_fp_cancellation():
    assert fp("ab") * fp("ba") == fp("")
    assert fp("a") * fp("a") == fp("1")
    assert fp("abc") * fp("cb") == fp("a")


def test_fp_parse_and_render():
    assert fp("a b * c").letters == "abc"
    assert fp("aab").render() == "b"
    assert fp("e").render() == "1"
    with pytest.raises(GroupError):
        fp("abd")
    with pytest.raises(GroupError):
        FreeProductWord("aa")


def test_fp_inverse():
    x = fp("abcab")
    assert x * x.inverse() == fp("1")


def test_sd_products():
    t0, t1, s = sd("t0"), sd("t1"), sd("s")
    assert s * t0 == SemidirectWord(((0, -1),), 1)
    # (t0, 1)(t0, 0) = (t0 t0^-1, 1) = s
    assert SemidirectWord(((0, 1),), 1) * t0 == s
    assert s * s == sd("1")
    assert t1 * t1 == SemidirectWord(((1, 1), (1, 1)), 0)


def test_sd_parse():
    assert sd("t0^-1") == sd("T0")
    assert sd("t0 T0") == sd("1")
    assert sd("s t0 s") == sd("T0")
    with pytest.raises(GroupError):
        sd("t2")


def test_sd_inverse():
    x = sd("t0 t1 s T0")
    assert x * x.inverse() == sd("1")
    assert x.inverse() * x == sd("1")


def test_translation_generators():
    assert translate_fp_to_sd(fp("a")) == SemidirectWord(((1, -1),), 1)
    assert translate_fp_to_sd(fp("a")) == sd("s t1")
    assert translate_fp_to_sd(fp("b")) == sd("t0 s")
    assert translate_fp_to_sd(fp("c")) == sd("s")
    assert translate_sd_to_fp(sd("t0")) == fp("bc")
    assert translate_sd_to_fp(sd("T0")) == fp("cb")
    assert translate_sd_to_fp(sd("t1")) == fp("ca")
    assert translate_sd_to_fp(sd("T1")) == fp("ac")


def test_word_counts():
    counts = [0] * 7
    for w in reduced_words(6):
        counts[len(w)] += 1
    assert counts == [1, 3, 6, 12, 24, 48, 96]
    assert sum(counts) == 190


def test_exhaustive_translations():
    start = time.perf_counter()
    ok, stats = check_translations(6)
    elapsed = time.perf_counter() - start
    assert ok
    assert stats["words"] == 190 and stats["pairs"] == 190 ** 2
    assert elapsed < 1.0


def test_realize_rightmost_first(oq):
    A = oq.A
    for word in ("ab", "cab", "bca"):
        m = oq.realize(word)
        step = A
        for ch in reversed(word):
            step = oq.realize(ch).apply(step)
        assert m.apply(A) == step


def test_realize_letters(oq):
    from qonsager.freealg import compose

    m = oq.morphisms
    assert oq.realize("a").same_images(compose(m["S"], m["T1"]))
    assert oq.realize("b").same_images(compose(m["T0"], m["S"]))
    assert oq.realize("c").same_images(m["S"])
    assert oq.realize("a").apply(oq.B) == oq.B
