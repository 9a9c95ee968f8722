"""Alphabets, the bar involution, and infinite symbol streams.

Letters are plain integers.  An alphabet is a contiguous integer range
[lo, hi]; its bar operation x -> lo + hi - x is the unique order-reversing
involution of that range.  Streams over an alphabet come in three kinds:

* periodic: a cyclic word with a declared (and verified) smallest period;
  all decisions about periodic streams are exact,
* closed form: the two-parameter family m(n, b, t) built from the
  Thue-Morse bit sequence, indexable in O(log n) bit operations,
* morphic: the fixed point of a prolongable morphism, optionally composed
  with a pointwise letter map, expanded lazily block by block.

All values are immutable after construction.  Morphic streams memoize their
expanded prefix; the memo is append-only, so sharing streams between
concurrent readers is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import lcm
from types import MappingProxyType

#: Default number of symbols examined before a stream comparison gives up.
DEFAULT_COMPARE_HORIZON = 10_000


def tm_eps(n: int) -> int:
    """Thue-Morse bit of n: the parity of the binary digit sum of n."""
    if n < 0:
        raise ValueError("tm_eps: index must be >= 0")
    return n.bit_count() & 1


def _check_bt(b: int, t: int) -> None:
    if b < 1:
        raise ValueError(f"b must be a positive integer, got {b}")
    if 2 * t < b + 1:
        raise ValueError(f"need 2t >= b + 1, got b={b}, t={t}")
    if t > b:
        raise ValueError(f"need t <= b, got b={b}, t={t}")


def m_closed(n: int, b: int, t: int) -> int:
    """Letter n of the extremal stream: eps(n+1) - (2t-b-1)*eps(n) + t - 1.

    Requires b >= 1 and b + 1 <= 2t <= 2b.  The result always lies in
    {b-t, b-t+1, t-1, t}.
    """
    _check_bt(b, t)
    if n < 0:
        raise ValueError("m_closed: index must be >= 0")
    return tm_eps(n + 1) - (2 * t - b - 1) * tm_eps(n) + t - 1


@dataclass(frozen=True)
class Alphabet:
    """Contiguous integer alphabet [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty alphabet: lo={self.lo} > hi={self.hi}")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def letters(self) -> range:
        return range(self.lo, self.hi + 1)

    def bar(self, x: int) -> int:
        """Order-reversing involution lo + hi - x.  Rejects foreign letters."""
        if x not in self:
            raise ValueError(f"letter {x} outside alphabet [{self.lo}, {self.hi}]")
        return self.lo + self.hi - x

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}

    @classmethod
    def from_json(cls, d: dict) -> "Alphabet":
        return cls(int(d["lo"]), int(d["hi"]))


class PeriodMinimalityError(ValueError):
    """A declared period is a repetition of a strictly shorter word."""


def minimal_period(letters) -> int:
    """Length of the smallest period of the cyclic word `letters`."""
    seq = tuple(letters)
    n = len(seq)
    for d in range(1, n):
        if n % d == 0 and seq == seq[:d] * (n // d):
            return d
    return n


@dataclass(frozen=True)
class PeriodicWord:
    """Purely periodic word, stored as its smallest period.

    The constructor rejects a period list that is itself periodic; callers
    declaring a period must declare the minimal one.
    """

    alphabet: Alphabet
    period: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "period", tuple(int(x) for x in self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        for x in self.period:
            if x not in self.alphabet:
                raise ValueError(
                    f"letter {x} outside alphabet [{self.alphabet.lo}, {self.alphabet.hi}]"
                )
        d = minimal_period(self.period)
        if d != len(self.period):
            raise PeriodMinimalityError(
                f"declared period {self.period} has smaller period {self.period[:d]}"
            )

    @property
    def T(self) -> int:
        return len(self.period)

    def letter(self, n: int) -> int:
        return self.period[n % len(self.period)]

    def rotated(self, k: int) -> "PeriodicWord":
        """The shift by k as a periodic word (same smallest period length)."""
        k %= len(self.period)
        return PeriodicWord(self.alphabet, self.period[k:] + self.period[:k])

    def barred(self) -> "PeriodicWord":
        bs = self.alphabet.lo + self.alphabet.hi
        return PeriodicWord(self.alphabet, tuple(bs - x for x in self.period))


class SymbolStream:
    """Lazily indexable infinite sequence over a finite integer alphabet."""

    alphabet: Alphabet

    def letter(self, n: int) -> int:
        raise NotImplementedError

    def __getitem__(self, n: int) -> int:
        return self.letter(n)

    def prefix(self, n: int) -> list:
        return [self.letter(i) for i in range(n)]

    def descriptor(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no JSON descriptor")


class PeriodicStream(SymbolStream):
    """Stream view of a PeriodicWord: letter(n) = period[n mod T]."""

    def __init__(self, word: PeriodicWord):
        self.word = word
        self.alphabet = word.alphabet

    def letter(self, n: int) -> int:
        return self.word.letter(n)

    def prefix(self, n: int) -> list:
        p = self.word.period
        reps = -(-n // len(p))
        return list(p * reps)[:n]

    def descriptor(self) -> dict:
        return {
            "kind": "periodic",
            "alphabet": self.alphabet.to_json(),
            "parameters": {"period": list(self.word.period)},
        }


class ClosedFormStream(SymbolStream):
    """The extremal stream m(., b, t) in closed form over {b-t .. t}."""

    def __init__(self, b: int, t: int):
        _check_bt(b, t)
        self.b = b
        self.t = t
        self.alphabet = Alphabet(b - t, t)

    def letter(self, n: int) -> int:
        if n < 0:
            raise ValueError("stream index must be >= 0")
        return tm_eps(n + 1) - (2 * self.t - self.b - 1) * tm_eps(n) + self.t - 1

    def prefix(self, n: int) -> list:
        eps = [tm_eps(i) for i in range(n + 1)]
        c, base = 2 * self.t - self.b - 1, self.t - 1
        return [eps[i + 1] - c * eps[i] + base for i in range(n)]

    def descriptor(self) -> dict:
        return {
            "kind": "thue-morse-closed-form",
            "alphabet": self.alphabet.to_json(),
            "parameters": {"b": self.b, "t": self.t},
        }


class Morphism:
    """Finite map letter -> nonempty word over the same letter set."""

    def __init__(self, images: dict):
        imgs = {int(k): tuple(int(x) for x in v) for k, v in images.items()}
        if not imgs:
            raise ValueError("morphism needs at least one letter")
        domain = set(imgs)
        for k, img in imgs.items():
            if not img:
                raise ValueError(f"image of {k} is empty")
            for x in img:
                if x not in domain:
                    raise ValueError(f"image letter {x} of {k} not in domain {sorted(domain)}")
        self._images = MappingProxyType(imgs)

    @property
    def images(self):
        return self._images

    def letters(self) -> set:
        return set(self._images)

    def image(self, letter: int) -> tuple:
        try:
            return self._images[letter]
        except KeyError:
            raise ValueError(f"letter {letter} not in morphism domain") from None

    def apply(self, word) -> tuple:
        return tuple(x for c in word for x in self._images[c])

    def is_prolongable_on(self, seed: int) -> bool:
        img = self.image(seed)
        return len(img) >= 2 and img[0] == seed

    def __eq__(self, other) -> bool:
        return isinstance(other, Morphism) and dict(self._images) == dict(other._images)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}->{''.join(map(str, v))}" for k, v in sorted(self._images.items()))
        return f"Morphism({body})"


class MorphicStream(SymbolStream):
    """Fixed point of a morphism prolongable on `seed`, then a letter map.

    Expansion is incremental: the produced prefix is always the image of an
    earlier prefix of itself, so each requested block costs amortized O(1)
    per symbol.
    """

    def __init__(self, morphism: Morphism, seed: int, letter_map: dict | None = None,
                 alphabet: Alphabet | None = None):
        if not morphism.is_prolongable_on(seed):
            raise ValueError(f"morphism not prolongable on seed {seed}")
        self.morphism = morphism
        self.seed = seed
        self.letter_map = None if letter_map is None else dict(letter_map)
        if self.letter_map is not None:
            missing = morphism.letters() - set(self.letter_map)
            if missing:
                raise ValueError(f"letter map misses letters {sorted(missing)}")
        visible = (set(self.letter_map.values()) if self.letter_map is not None
                   else morphism.letters())
        self.alphabet = alphabet if alphabet is not None else Alphabet(min(visible), max(visible))
        self._buf = list(morphism.image(seed))
        self._next = 1  # next position of the buffer to expand

    def _ensure(self, n: int) -> None:
        buf, images = self._buf, self.morphism.images
        while len(buf) <= n:
            buf.extend(images[buf[self._next]])
            self._next += 1

    def letter(self, n: int) -> int:
        if n < 0:
            raise ValueError("stream index must be >= 0")
        self._ensure(n)
        x = self._buf[n]
        return x if self.letter_map is None else self.letter_map[x]

    def prefix(self, n: int) -> list:
        if n <= 0:
            return []
        self._ensure(n - 1)
        chunk = self._buf[:n]
        if self.letter_map is None:
            return chunk
        lm = self.letter_map
        return [lm[x] for x in chunk]

    def descriptor(self) -> dict:
        params = {
            "images": {str(k): list(v) for k, v in sorted(self.morphism.images.items())},
            "seed": self.seed,
            "letter_map": (None if self.letter_map is None
                           else {str(k): v for k, v in sorted(self.letter_map.items())}),
        }
        return {
            "kind": "morphic-fixed-point",
            "alphabet": self.alphabet.to_json(),
            "parameters": params,
        }


class ShiftedStream(SymbolStream):
    """View of another stream with indices offset by a fixed k >= 1."""

    def __init__(self, base: SymbolStream, k: int):
        self.base = base
        self.k = k
        self.alphabet = base.alphabet

    def letter(self, n: int) -> int:
        return self.base.letter(n + self.k)

    def prefix(self, n: int) -> list:
        return self.base.prefix(n + self.k)[self.k:]

    def descriptor(self) -> dict:
        d = dict(self.base.descriptor())
        d["shift"] = d.get("shift", 0) + self.k
        return d


class BarStream(SymbolStream):
    """Pointwise bar image of another stream (letters validated on access)."""

    def __init__(self, base: SymbolStream):
        self.base = base
        self.alphabet = base.alphabet

    def letter(self, n: int) -> int:
        return self.alphabet.bar(self.base.letter(n))

    def prefix(self, n: int) -> list:
        bar = self.alphabet.bar
        return [bar(x) for x in self.base.prefix(n)]

    def descriptor(self) -> dict:
        d = dict(self.base.descriptor())
        d["barred"] = not d.get("barred", False)
        return d


def bar(x, alphabet: Alphabet | None = None):
    """Bar of a letter or of a whole stream (pointwise, same shape).

    For a letter the alphabet is mandatory.  For a stream the stream's own
    alphabet is used; periodic streams stay periodic, other kinds come back
    as lazy views.  bar(bar(s)) collapses to s.
    """
    if isinstance(x, int):
        if alphabet is None:
            raise ValueError("bar of a letter needs an alphabet")
        return alphabet.bar(x)
    if isinstance(x, PeriodicWord):
        return x.barred()
    if isinstance(x, PeriodicStream):
        return PeriodicStream(x.word.barred())
    if isinstance(x, BarStream):
        return x.base
    if isinstance(x, SymbolStream):
        return BarStream(x)
    raise TypeError(f"cannot bar a {type(x).__name__}")


def shift(s: SymbolStream, k: int) -> SymbolStream:
    """The k-fold shift: letter(n) of the result is letter(n+k) of s."""
    if k < 0:
        raise ValueError("shift must be >= 0")
    if k == 0:
        return s
    if isinstance(s, PeriodicStream):
        return PeriodicStream(s.word.rotated(k))
    if isinstance(s, ShiftedStream):
        return ShiftedStream(s.base, s.k + k)
    return ShiftedStream(s, k)


class LexOrder(Enum):
    LT = "lt"
    GT = "gt"
    EQ_EXACT = "eq_exact"
    EQ_TO_HORIZON = "eq_to_horizon"


def lex_cmp_index(a: SymbolStream, b: SymbolStream,
                  horizon: int = DEFAULT_COMPARE_HORIZON):
    """Lexicographic comparison, also reporting the first differing index.

    Returns (order, index); index is None for either equality verdict.
    A periodic pair is decided exactly over the lcm of the periods, whatever
    the horizon; any other pair that agrees on `horizon` symbols comes back
    as EQ_TO_HORIZON, which callers must treat as unknown.
    """
    if a.alphabet != b.alphabet:
        raise ValueError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if a is b:
        return LexOrder.EQ_EXACT, None
    exact = isinstance(a, PeriodicStream) and isinstance(b, PeriodicStream)
    bound = lcm(a.word.T, b.word.T) if exact else horizon
    pa, pb = a.prefix(bound), b.prefix(bound)
    for i in range(bound):
        xa, xb = pa[i], pb[i]
        if xa != xb:
            return (LexOrder.LT if xa < xb else LexOrder.GT), i
    return (LexOrder.EQ_EXACT if exact else LexOrder.EQ_TO_HORIZON), None


def lex_cmp(a: SymbolStream, b: SymbolStream,
            horizon: int = DEFAULT_COMPARE_HORIZON) -> LexOrder:
    """Lexicographic comparison of two streams over the same alphabet."""
    return lex_cmp_index(a, b, horizon)[0]


def theta_universal() -> Morphism:
    """The 4-letter uniform 2-morphism 3->31, 2->30, 1->03, 0->02.

    Letters 0..3 stand for the four abstract symbols e0..e3; the index order
    matches the natural order of the concrete letters they rename to.
    """
    return Morphism({3: (3, 1), 2: (3, 0), 1: (0, 3), 0: (0, 2)})


def fixed_point(m: Morphism, seed: int, letter_map: dict | None = None,
                alphabet: Alphabet | None = None) -> MorphicStream:
    """Fixed point of `m` starting at `seed`, optionally letter-mapped."""
    return MorphicStream(m, seed, letter_map, alphabet)


def m_stream(b: int, t: int) -> ClosedFormStream:
    """The extremal stream for (b, t) in closed form."""
    return ClosedFormStream(b, t)


def m_morphic(b: int, t: int) -> MorphicStream:
    """The extremal stream for (b, t) generated as a morphic fixed point.

    Depending on how many of b-t, b-t+1, t-1, t are distinct this is either
    a renaming of the universal morphism (four distinct letters) or its
    fixed point composed with the 3- or 2-letter collapsing map.
    """
    _check_bt(b, t)
    theta = theta_universal()
    if 2 * t >= b + 3:
        renamed = Morphism({
            t: (t, b - t + 1),
            t - 1: (t, b - t),
            b - t + 1: (b - t, t),
            b - t: (b - t, t - 1),
        })
        return fixed_point(renamed, t)
    if 2 * t == b + 2:
        collapse = {3: t, 2: t - 1, 1: t - 1, 0: b - t}
    else:  # 2t == b + 1
        collapse = {3: t, 2: t - 1, 1: t, 0: t - 1}
    return fixed_point(theta, 3, collapse, alphabet=Alphabet(b - t, t))


def istrail_morphism(b: int, t: int) -> Morphism:
    """Non-uniform 3-letter morphism t -> t (t-1) (b-t), (t-1) -> t (b-t),
    (b-t) -> (t-1); requires 2t = b + 2 so the three letters are distinct.

    Its fixed point starting at t equals m_stream(b, t); for b = t = 2 this
    is the Istrail / Braunholtz square-free word on {0, 1, 2}.
    """
    if 2 * t != b + 2:
        raise ValueError(f"need 2t = b + 2, got b={b}, t={t}")
    return Morphism({t: (t, t - 1, b - t), t - 1: (t, b - t), b - t: (t - 1,)})


def stream_from_descriptor(d: dict) -> SymbolStream:
    """Rebuild a stream from its JSON descriptor (inverse of .descriptor())."""
    kind = d.get("kind")
    alphabet = Alphabet.from_json(d["alphabet"])
    params = d.get("parameters", {})
    if kind == "periodic":
        s: SymbolStream = PeriodicStream(PeriodicWord(alphabet, tuple(params["period"])))
    elif kind == "thue-morse-closed-form":
        s = ClosedFormStream(int(params["b"]), int(params["t"]))
    elif kind == "morphic-fixed-point":
        images = {int(k): tuple(v) for k, v in params["images"].items()}
        lm = params.get("letter_map")
        lm = None if lm is None else {int(k): int(v) for k, v in lm.items()}
        s = MorphicStream(Morphism(images), int(params["seed"]), lm, alphabet)
    else:
        raise ValueError(f"unknown stream kind {kind!r}")
    if d.get("barred"):
        s = bar(s)
    k = int(d.get("shift", 0))
    return shift(s, k) if k else s
