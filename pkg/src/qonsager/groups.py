"""Words in Z2*Z2*Z2 and in its semidirect presentation, and their action as morphisms.

Two presentations of the same group:

* free product words over ``a, b, c`` with ``a^2 = b^2 = c^2 = 1``;
* pairs ``(u, e)`` meaning ``u * s^e`` with ``u`` a reduced word in the free
  group on ``t0, t1`` and ``s t s = t^-1``.

Group words act on an algebra through :func:`realize`, which reads the word
as a composite of maps, rightmost letter applied first.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Tuple

from .freealg import HOM, Morphism, compose

__all__ = [
    "FP_LETTERS",
    "FreeProductWord",
    "SemidirectWord",
    "GroupError",
    "fp_multiply",
    "fp_inverse",
    "sd_multiply",
    "sd_inverse",
    "translate_fp_to_sd",
    "translate_sd_to_fp",
    "reduced_words",
    "GroupActionBinding",
    "BASE_NAMES",
    "realize",
    "check_translations",
]

FP_LETTERS = "abc"
BASE_NAMES = ("S", "T0", "T0inv", "T1", "T1inv")

# free group letters: (generator index, exponent)
Letter = Tuple[int, int]


class GroupError(ValueError):
    pass


def _fp_reduce(letters: str) -> str:
    out: List[str] = []
    for ch in letters:
        if out and out[-1] == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class FreeProductWord:
    letters: str = ""

    def __post_init__(self):
        bad = set(self.letters) - set(FP_LETTERS)
        if bad:
            raise GroupError(f"letters outside {{a,b,c}}: {''.join(sorted(bad))}")
        if _fp_reduce(self.letters) != self.letters:
            raise GroupError(f"{self.letters!r} is not reduced")

    @classmethod
    def _trusted(cls, letters: str) -> "FreeProductWord":
        # skips validation; callers guarantee a reduced word
        self = object.__new__(cls)
        object.__setattr__(self, "letters", letters)
        return self

    @classmethod
    def parse(cls, text: str) -> "FreeProductWord":
        """Parse ``"abca"``; spaces, ``*`` and ``.`` are ignored, ``1``/``e`` is the identity."""
        body = re.sub(r"[\s*.]", "", text)
        if body in ("1", "e"):
            body = ""
        bad = set(body) - set(FP_LETTERS)
        if bad:
            raise GroupError(f"cannot parse group word {text!r}: unexpected {''.join(sorted(bad))!r}")
        return cls(_fp_reduce(body))

    def render(self) -> str:
        return self.letters or "1"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeProductWord") -> "FreeProductWord":
        return fp_multiply(self, other)

    def inverse(self) -> "FreeProductWord":
        return fp_inverse(self)

    def __str__(self) -> str:
        return self.render()


def fp_multiply(x: FreeProductWord, y: FreeProductWord) -> FreeProductWord:
    a, b = x.letters, y.letters
    i = 0
    # cancellation can only happen at the seam
    for left, right in zip(reversed(a), b):
        if left != right:
            break
        i += 1
    return FreeProductWord._trusted(a[: len(a) - i] + b[i:])


def fp_inverse(x: FreeProductWord) -> FreeProductWord:
    return FreeProductWord._trusted(x.letters[::-1])


def reduced_words(max_length: int) -> Iterator[FreeProductWord]:
    """All reduced words of length at most ``max_length``, by length then lexicographically."""
    layer = [""]
    for n in range(max_length + 1):
        for w in layer:
            yield FreeProductWord._trusted(w)
        layer = [w + ch for w in layer for ch in FP_LETTERS if not w or w[-1] != ch]


def _free_reduce(letters) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for g, e in letters:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


_SD_TOKEN = re.compile(r"\s*(t0\^-1|t1\^-1|t0|t1|T0|T1|s)\s*\*?")


@dataclass(frozen=True)
class SemidirectWord:
    """``free_part * s^flip`` with ``free_part`` a reduced word in ``t0^{+-1}, t1^{+-1}``."""

    free_part: Tuple[Letter, ...] = ()
    flip: int = 0

    def __post_init__(self):
        if self.flip not in (0, 1):
            raise GroupError("flip must be 0 or 1")
        for g, e in self.free_part:
            if g not in (0, 1) or e not in (1, -1):
                raise GroupError(f"bad free letter {(g, e)!r}")
        if _free_reduce(self.free_part) != tuple(self.free_part):
            raise GroupError("free part is not reduced")

    @classmethod
    def _trusted(cls, free_part: Tuple[Letter, ...], flip: int) -> "SemidirectWord":
        self = object.__new__(cls)
        object.__setattr__(self, "free_part", free_part)
        object.__setattr__(self, "flip", flip)
        return self

    @classmethod
    def parse(cls, text: str) -> "SemidirectWord":
        """Parse a product of ``s, t0, t1`` and inverses ``T0 = t0^-1``, ``T1 = t1^-1``."""
        body = text.strip()
        if body in ("", "1", "e"):
            return cls()
        pos = 0
        result = cls()
        while pos < len(body):
            m = _SD_TOKEN.match(body, pos)
            if not m or m.end() == pos:
                raise GroupError(f"cannot parse group word {text!r} at column {pos + 1}")
            tok = m.group(1)
            pos = m.end()
            result = sd_multiply(result, _SD_GENERATORS[tok.replace("^-1", "inv")])
        return result

    def render(self) -> str:
        parts = [("t" if e == 1 else "T") + str(g) for g, e in self.free_part]
        if self.flip:
            parts.append("s")
        return " ".join(parts) or "1"

    def __mul__(self, other: "SemidirectWord") -> "SemidirectWord":
        return sd_multiply(self, other)

    def inverse(self) -> "SemidirectWord":
        return sd_inverse(self)

    def __str__(self) -> str:
        return self.render()


_SD_GENERATORS: Dict[str, SemidirectWord] = {
    "s": SemidirectWord((), 1),
    "t0": SemidirectWord(((0, 1),), 0),
    "T0": SemidirectWord(((0, -1),), 0),
    "t0inv": SemidirectWord(((0, -1),), 0),
    "t1": SemidirectWord(((1, 1),), 0),
    "T1": SemidirectWord(((1, -1),), 0),
    "t1inv": SemidirectWord(((1, -1),), 0),
}


def _invert_letters(u: Tuple[Letter, ...]) -> Tuple[Letter, ...]:
    return tuple((g, -e) for g, e in u)


def sd_multiply(x: SemidirectWord, y: SemidirectWord) -> SemidirectWord:
    """``(u, e)(v, d) = (u * inv^e(v), e xor d)``."""
    u = x.free_part
    v = _invert_letters(y.free_part) if x.flip else y.free_part
    i = 0
    # both parts are reduced, so cancellation only happens at the seam
    for (g, e), (h, d) in zip(reversed(u), v):
        if g != h or e != -d:
            break
        i += 1
    return SemidirectWord._trusted(u[: len(u) - i] + v[i:], x.flip ^ y.flip)


def sd_inverse(x: SemidirectWord) -> SemidirectWord:
    # (u s^e)^-1 = s^e u^-1 = inv^e(u^-1) s^e
    u_inv = tuple((g, -e) for g, e in reversed(x.free_part))
    return SemidirectWord._trusted(_invert_letters(u_inv) if x.flip else u_inv, x.flip)


_FP_TO_SD = {
    "a": sd_multiply(_SD_GENERATORS["s"], _SD_GENERATORS["t1"]),
    "b": sd_multiply(_SD_GENERATORS["t0"], _SD_GENERATORS["s"]),
    "c": _SD_GENERATORS["s"],
}

_SD_TO_FP = {
    (0, 1): "bc",
    (0, -1): "cb",
    (1, 1): "ca",
    (1, -1): "ac",
}


@lru_cache(maxsize=1 << 16)
def _fp_to_sd(letters: str) -> SemidirectWord:
    if not letters:
        return SemidirectWord._trusted((), 0)
    return sd_multiply(_fp_to_sd(letters[:-1]), _FP_TO_SD[letters[-1]])


@lru_cache(maxsize=1 << 16)
def _sd_to_fp(free_part: Tuple[Letter, ...], flip: int) -> FreeProductWord:
    if flip:
        return fp_multiply(_sd_to_fp(free_part, 0), FreeProductWord._trusted("c"))
    if not free_part:
        return FreeProductWord._trusted("")
    return fp_multiply(_sd_to_fp(free_part[:-1], 0), FreeProductWord._trusted(_SD_TO_FP[free_part[-1]]))


def translate_fp_to_sd(x: FreeProductWord) -> SemidirectWord:
    """``a -> s t1``, ``b -> t0 s``, ``c -> s``."""
    return _fp_to_sd(x.letters)


def translate_sd_to_fp(y: SemidirectWord) -> FreeProductWord:
    """``t0 -> bc``, ``t0^-1 -> cb``, ``t1 -> ca``, ``t1^-1 -> ac``, ``s -> c``."""
    return _sd_to_fp(tuple(y.free_part), y.flip)


@dataclass
class GroupActionBinding:
    """The base maps through which group words act on one algebra."""

    target: str
    base_morphisms: Mapping[str, Morphism]
    _cache: Dict[str, Morphism] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        missing = [n for n in BASE_NAMES if n not in self.base_morphisms]
        if missing:
            raise GroupError(f"binding for {self.target} lacks {', '.join(missing)}")
        if self.base_morphisms["S"].variance == HOM:
            raise GroupError("S must be an antihomomorphism")
        for n in BASE_NAMES[1:]:
            if self.base_morphisms[n].variance != HOM:
                raise GroupError(f"{n} must be a homomorphism")
        m = self.base_morphisms
        self._cache.update({
            "a": compose(m["S"], m["T1"], "a"),
            "b": compose(m["T0"], m["S"], "b"),
            "c": m["S"],
        })

    @property
    def alphabet(self):
        return self.base_morphisms["S"].alphabet

    def letter(self, ch: str) -> Morphism:
        return self._cache[ch]


def realize(binding: GroupActionBinding, x: FreeProductWord) -> Morphism:
    """The morphism by which ``x`` acts; the last letter of the word acts first."""
    cache = binding._cache
    key = x.letters
    if key in cache:
        return cache[key]
    if not key:
        result = Morphism.identity(binding.alphabet)
    else:
        # build right to left so suffixes are shared between words
        result = compose(binding.letter(key[0]), realize(binding, FreeProductWord(key[1:])), key)
    cache[key] = result
    return result


def check_translations(max_length: int = 6) -> Tuple[bool, Dict[str, int]]:
    """Exhaustive check that the translations are mutually inverse homomorphisms.

    Runs over every reduced word of length <= ``max_length`` (and every pair
    of them for the homomorphism property), starting from cold caches.
    """
    _fp_to_sd.cache_clear()
    _sd_to_fp.cache_clear()
    words = list(reduced_words(max_length))
    images = [translate_fp_to_sd(w) for w in words]
    failures = {"inverse": 0, "fp_hom": 0, "sd_hom": 0}
    for w, y in zip(words, images):
        if translate_sd_to_fp(y) != w:
            failures["inverse"] += 1
    for x, tx in zip(words, images):
        for y, ty in zip(words, images):
            xy, txy = fp_multiply(x, y), sd_multiply(tx, ty)
            if translate_fp_to_sd(xy) != txy:
                failures["fp_hom"] += 1
            if translate_sd_to_fp(txy) != xy:
                failures["sd_hom"] += 1
    stats = dict(failures, words=len(words), pairs=len(words) ** 2)
    return not any(failures.values()), stats
