"""Noncommutative polynomials over Q(q) and their (anti)homomorphisms.

Words are plain tuples of letter codes.  Letter codes are assigned so that
integer order equals symbol precedence (code 0 is the lowest symbol); with
that convention the degree-lexicographic key of a word is simply
``(len(word), word)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .scalar import ONE, Q, ZERO, Scalar

Word = Tuple[int, ...]

HOM = "hom"
ANTIHOM = "antihom"

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "NcPoly",
    "Morphism",
    "Word",
    "HOM",
    "ANTIHOM",
    "word_key",
    "bracket",
    "q_bracket_op",
    "compose",
]


class AlphabetMismatch(ValueError):
    """Operands live over different generator alphabets."""


def word_key(w: Word) -> Tuple[int, Word]:
    """Sort key for the degree-lexicographic monomial order."""
    return (len(w), w)


class Alphabet:
    """Generator symbols listed from highest to lowest precedence.

    ``display`` optionally maps a symbol name to a typeset form used in
    report headers; text I/O always uses the plain names.
    """

    __slots__ = ("names", "display", "_code", "_name", "_hash")

    def __init__(self, names: Iterable[str], display: Optional[Mapping[str, str]] = None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for n in names:
            if not n or not (n[0].isalpha() or n[0] == "_") or not all(ch.isalnum() or ch == "_" for ch in n):
                raise ValueError(f"invalid generator name {n!r}")
            if n == "q":
                raise ValueError("'q' is reserved for the field parameter")
        self.names = names
        self.display = dict(display or {})
        size = len(names)
        self._code = {name: size - 1 - i for i, name in enumerate(names)}
        self._name = tuple(reversed(names))
        self._hash = hash(names)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __contains__(self, name):
        return name in self._code

    def __repr__(self):
        return f"Alphabet({list(self.names)!r})"

    def code(self, name: str) -> int:
        try:
            return self._code[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def name(self, code: int) -> str:
        return self._name[code]

    def codes(self) -> range:
        return range(len(self.names))

    def word(self, *names: str) -> Word:
        return tuple(self._code[n] for n in names)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if text in ("", "1"):
            return ()
        return tuple(self.code(part.strip()) for part in text.split("*"))

    def render_word(self, w: Word) -> str:
        if not w:
            return "1"
        return "*".join(self._name[c] for c in w)

    def gen(self, name: str) -> "NcPoly":
        return NcPoly._raw(self, {(self.code(name),): ONE})

    def gens(self) -> List["NcPoly"]:
        return [self.gen(n) for n in self.names]

    def order_description(self) -> str:
        return "deglex: " + " > ".join(self.names)


def _as_scalar(c) -> Scalar:
    if isinstance(c, Scalar):
        return c
    if isinstance(c, (int, Fraction)):
        return Scalar(c)
    raise TypeError(f"not a scalar: {c!r}")


class NcPoly:
    """A finite Q(q)-linear combination of words over an :class:`Alphabet`."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: Optional[Mapping[Word, object]] = None):
        self.alphabet = alphabet
        clean: Dict[Word, Scalar] = {}
        n = len(alphabet)
        for w, c in (terms or {}).items():
            w = tuple(w)
            if any(not 0 <= x < n for x in w):
                raise ValueError(f"word {w} has letters outside the alphabet")
            c = _as_scalar(c)
            if c:
                clean[w] = clean.get(w, ZERO) + c
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def _raw(cls, alphabet: Alphabet, terms: Dict[Word, Scalar]) -> "NcPoly":
        self = object.__new__(cls)
        self.alphabet = alphabet
        self.terms = terms
        return self

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "NcPoly":
        return cls._raw(alphabet, {})

    @classmethod
    def constant(cls, alphabet: Alphabet, c) -> "NcPoly":
        c = _as_scalar(c)
        return cls._raw(alphabet, {(): c} if c else {})

    @classmethod
    def monomial(cls, alphabet: Alphabet, w: Word, c=ONE) -> "NcPoly":
        c = _as_scalar(c)
        return cls._raw(alphabet, {tuple(w): c} if c else {})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Largest word length; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def words(self) -> List[Word]:
        """Words in decreasing monomial order."""
        return sorted(self.terms, key=word_key, reverse=True)

    def items(self) -> Iterator[Tuple[Word, Scalar]]:
        for w in self.words():
            yield w, self.terms[w]

    def coeff(self, w: Word) -> Scalar:
        return self.terms.get(tuple(w), ZERO)

    def leading_word(self) -> Word:
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        return max(self.terms, key=word_key)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_word()]

    def symbols(self) -> frozenset:
        return frozenset(x for w in self.terms for x in w)

    def _check(self, other: "NcPoly"):
        if self.alphabet is not other.alphabet and self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet!r} vs {other.alphabet!r}")

    # -- arithmetic ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self.terms == NcPoly.constant(self.alphabet, other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return NcPoly._raw(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            try:
                other = NcPoly.constant(self.alphabet, other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            old = out.get(w)
            if old is None:
                out[w] = c
            else:
                s = old + c
                if s:
                    out[w] = s
                else:
                    del out[w]
        return NcPoly._raw(self.alphabet, out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            try:
                other = NcPoly.constant(self.alphabet, other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NcPoly":
        c = _as_scalar(c)
        if not c:
            return NcPoly.zero(self.alphabet)
        if c == ONE:
            return self
        return NcPoly._raw(self.alphabet, {w: x * c for w, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            self._check(other)
            out: Dict[Word, Scalar] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    old = out.get(w)
                    out[w] = c1 * c2 if old is None else old + c1 * c2
            return NcPoly._raw(self.alphabet, {w: c for w, c in out.items() if c})
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        return self.scale(_as_scalar(other).inverse())

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = NcPoly.constant(self.alphabet, ONE)
        for _ in range(n):
            out = out * self
        return out

    def sandwich(self, left: Word, right: Word, c=ONE) -> Dict[Word, Scalar]:
        """Term map of ``c * left * self * right``."""
        if c == ONE:
            return {left + w + right: x for w, x in self.terms.items()}
        return {left + w + right: x * c for w, x in self.terms.items()}

    # -- output ----------------------------------------------------------

    def render(self) -> str:
        """Canonical text: scalar coefficients times '*'-joined symbol names."""
        if not self.terms:
            return "0"
        out = []
        for w, c in self.items():
            term = _render_term(self.alphabet, w, c)
            if not out:
                out.append(term)
            elif term.startswith("-"):
                out.append(" - " + term[1:])
            else:
                out.append(" + " + term)
        return "".join(out)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"NcPoly('{self.render()}')"


def _simple_scalar_text(s: str) -> bool:
    return all(ch not in s for ch in " /(")


def _render_term(alphabet: Alphabet, w: Word, c: Scalar) -> str:
    cs = c.render()
    if cs.startswith("-") and cs != "-1":
        inner = _render_term(alphabet, w, -c)
        return "-" + inner
    if not w:
        return cs if _simple_scalar_text(cs) else f"({cs})"
    ws = alphabet.render_word(w)
    if cs == "1":
        return ws
    if cs == "-1":
        return "-" + ws
    if _simple_scalar_text(cs):
        return f"{cs}*{ws}"
    return f"({cs})*{ws}"


def bracket(x: NcPoly, y: NcPoly) -> NcPoly:
    """Commutator xy - yx."""
    return x * y - y * x


def q_bracket_op(x: NcPoly, y: NcPoly, s: Scalar = Q) -> NcPoly:
    """q-commutator s*xy - s^-1*yx (s defaults to q)."""
    return (x * y).scale(s) - (y * x).scale(s.inverse())


class Morphism:
    """Generator images plus a variance (``"hom"`` or ``"antihom"``)."""

    __slots__ = ("alphabet", "images", "variance", "name")

    def __init__(
        self,
        alphabet: Alphabet,
        images: Mapping[str, NcPoly],
        variance: str = HOM,
        name: Optional[str] = None,
    ):
        if variance not in (HOM, ANTIHOM):
            raise ValueError(f"bad variance {variance!r}")
        missing = [n for n in alphabet.names if n not in images]
        if missing:
            raise ValueError(f"no image for generators {missing}")
        imgs = []
        for code in alphabet.codes():
            img = images[alphabet.name(code)]
            if img.alphabet != alphabet:
                raise AlphabetMismatch("image over a different alphabet")
            imgs.append(img)
        self.alphabet = alphabet
        self.images: Tuple[NcPoly, ...] = tuple(imgs)
        self.variance = variance
        self.name = name

    @classmethod
    def identity(cls, alphabet: Alphabet, variance: str = HOM, name: Optional[str] = None) -> "Morphism":
        return cls(alphabet, {n: alphabet.gen(n) for n in alphabet.names}, variance, name)

    @classmethod
    def from_images(cls, alphabet: Alphabet, images: Sequence[NcPoly], variance: str, name=None) -> "Morphism":
        self = object.__new__(cls)
        self.alphabet = alphabet
        self.images = tuple(images)
        self.variance = variance
        self.name = name
        return self

    def image(self, name: str) -> NcPoly:
        return self.images[self.alphabet.code(name)]

    def image_map(self) -> Dict[str, NcPoly]:
        return {n: self.image(n) for n in self.alphabet.names}

    def max_image_degree(self) -> int:
        return max((img.degree() for img in self.images), default=0)

    def apply(self, x: NcPoly, reduce: Optional[Callable[[NcPoly], NcPoly]] = None) -> NcPoly:
        """Linear extension of the generator images, reversing words for antihom.

        ``reduce``, if given, is applied after every multiplication; use it to
        work modulo a rewrite system when the morphism is known to descend to
        the quotient.
        """
        if x.alphabet != self.alphabet:
            raise AlphabetMismatch("morphism and polynomial alphabets differ")
        cache: Dict[Word, NcPoly] = {(): NcPoly.constant(self.alphabet, ONE)}
        images = self.images
        anti = self.variance == ANTIHOM

        def word_image(w: Word) -> NcPoly:
            got = cache.get(w)
            if got is not None:
                return got
            head = word_image(w[:-1])
            img = images[w[-1]] * head if anti else head * images[w[-1]]
            if reduce is not None:
                img = reduce(img)
            cache[w] = img
            return img

        out: Dict[Word, Scalar] = {}
        for w in sorted(x.terms, key=len):
            c = x.terms[w]
            for v, d in word_image(w).terms.items():
                old = out.get(v)
                out[v] = c * d if old is None else old + c * d
        result = NcPoly._raw(self.alphabet, {w: c for w, c in out.items() if c})
        return reduce(result) if reduce is not None else result

    __call__ = apply

    def same_images(self, other: "Morphism") -> bool:
        return self.images == other.images

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.variance == other.variance
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.alphabet, self.variance))

    def __repr__(self):
        label = self.name or "Morphism"
        return f"<{label} {self.variance} on {list(self.alphabet.names)}>"


def compose(outer: Morphism, inner: Morphism, name: Optional[str] = None) -> Morphism:
    """outer after inner: apply ``inner`` first, then ``outer``."""
    if outer.alphabet != inner.alphabet:
        raise AlphabetMismatch("cannot compose morphisms on different alphabets")
    variance = HOM if outer.variance == inner.variance else ANTIHOM
    images = [outer.apply(img) for img in inner.images]
    if name is None and outer.name and inner.name:
        name = f"{outer.name}∘{inner.name}"
    return Morphism.from_images(outer.alphabet, images, variance, name)
