"""Membership checks for shift-bounded sequence sets and their extremes.

A stream A over an alphabet with top letter `hi` is *weakly trapped* if
a_0 = hi and bar A <= sigma^k A <= A for every shift k >= 0, and *strictly
trapped* if a_0 = hi and bar A < sigma^k A < A for every k >= 1.  A stream
over {0..b} is *admissible* when sigma^(k+1) A < A whenever a_k < b and
sigma^(k+1) A > bar A whenever a_k > 0.

Periodic inputs are decided exactly (all comparisons close up within one
period).  Nonperiodic streams are semi-decided: a refutation carries a
concrete witness, a positive answer is only ever "verified up to a stated
horizon" and is reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .words import (
    Alphabet,
    ClosedFormStream,
    PeriodicStream,
    PeriodicWord,
    SymbolStream,
    _check_bt,
    m_stream,
)

DEFAULT_SHIFT_HORIZON = 10_000
DEFAULT_COMPARE_HORIZON = 10_000


class HorizonError(RuntimeError):
    """A comparison between streams stayed undecided for the whole horizon."""


class Status(Enum):
    MEMBER_EXACT = "member_exact"
    REFUTED = "refuted"
    VERIFIED_TO_HORIZON = "verified_to_horizon"


@dataclass(frozen=True)
class CheckVerdict:
    """Outcome of a membership check.

    For refutations, `witness_shift` is the shift actually applied in the
    violated comparison (0 for the first-letter condition) and
    `witness_index` the first differing position, or None when the
    violation is an equality between shifted copies.
    """

    status: Status
    witness_shift: int | None = None
    witness_index: int | None = None
    horizon: int | None = None
    note: str = ""

    @property
    def is_refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def is_positive(self) -> bool:
        return self.status in (Status.MEMBER_EXACT, Status.VERIFIED_TO_HORIZON)

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "witness_shift": self.witness_shift,
            "witness_index": self.witness_index,
            "horizon": self.horizon,
        }

    @classmethod
    def member_exact(cls) -> "CheckVerdict":
        return cls(Status.MEMBER_EXACT)

    @classmethod
    def refuted(cls, shift: int, index: int | None, note: str = "") -> "CheckVerdict":
        return cls(Status.REFUTED, shift, index, None, note)

    @classmethod
    def verified(cls, horizon: int) -> "CheckVerdict":
        return cls(Status.VERIFIED_TO_HORIZON, None, None, horizon)


@dataclass(frozen=True)
class GammaParams:
    """Parameter pair (b, t) with the derived alphabet {b-t .. t}."""

    b: int
    t: int

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError(f"b must be a positive integer, got {self.b}")
        if self.t > self.b or 2 * self.t < self.b:
            raise ValueError(f"need b/2 <= t <= b, got b={self.b}, t={self.t}")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.b - self.t, self.t)

    @property
    def is_strict(self) -> bool:
        return 2 * self.t > self.b

    def require_strict(self) -> "GammaParams":
        if not self.is_strict:
            raise ValueError(f"need 2t > b, got b={self.b}, t={self.t}")
        return self


def _as_stream(x) -> SymbolStream:
    if isinstance(x, PeriodicWord):
        return PeriodicStream(x)
    if isinstance(x, SymbolStream):
        return x
    raise TypeError(f"expected a stream or periodic word, got {type(x).__name__}")


def _first_diff(p: list, k: int, bound: int) -> int | None:
    """First i < bound with p[k+i] != p[i], else None."""
    for i in range(bound):
        if p[k + i] != p[i]:
            return i
    return None


def _first_diff_bar(p: list, k: int, bound: int, bar_sum: int) -> int | None:
    """First i < bound with bar(p[i]) != p[k+i], else None."""
    for i in range(bound):
        if bar_sum - p[i] != p[k + i]:
            return i
    return None


def gamma_member(w: PeriodicWord, alphabet: Alphabet | None = None) -> CheckVerdict:
    """Exact decision whether the periodic word is weakly trapped.

    Checks a_0 = max and bar A <= sigma^k A <= A for k = 0..T-1; larger
    shifts repeat these by periodicity.
    """
    if alphabet is not None and alphabet != w.alphabet:
        w = PeriodicWord(alphabet, w.period)  # revalidates letters
    alpha = w.alphabet
    T = w.T
    p = PeriodicStream(w).prefix(2 * T)
    bs = alpha.lo + alpha.hi
    if p[0] != alpha.hi:
        return CheckVerdict.refuted(0, 0, note="first letter is not the alphabet maximum")
    for k in range(T):
        i = _first_diff(p, k, T)
        if i is not None and p[k + i] > p[i]:
            return CheckVerdict.refuted(k, i, note="sigma^k A > A")
        j = _first_diff_bar(p, k, T, bs)
        if j is not None and bs - p[j] > p[k + j]:
            return CheckVerdict.refuted(k, j, note="bar A > sigma^k A")
    return CheckVerdict.member_exact()


def gamma_strict_check(s, alphabet: Alphabet | None = None,
                       horizon: int = DEFAULT_SHIFT_HORIZON,
                       compare_horizon: int = DEFAULT_COMPARE_HORIZON) -> CheckVerdict:
    """Check strict trapping: a_0 = max and bar A < sigma^k A < A for k >= 1.

    Periodic inputs are always refuted exactly (shifting by the period gives
    equality).  Other streams are checked for shifts k <= horizon; each
    comparison must resolve within `compare_horizon` symbols or a
    HorizonError is raised rather than guessing.

    Letters are not required to lie inside `alphabet`: an out-of-range
    letter always violates one of the inequalities, which is what the
    admissibility crosscheck relies on.
    """
    s = _as_stream(s)
    alpha = alphabet if alphabet is not None else s.alphabet
    bs = alpha.lo + alpha.hi
    if s.letter(0) != alpha.hi:
        return CheckVerdict.refuted(0, 0, note="first letter is not the alphabet maximum")

    if isinstance(s, PeriodicStream):
        T = s.word.T
        p = s.prefix(2 * T)
        for k in range(1, T + 1):
            i = _first_diff(p, k, T)
            if i is None:
                return CheckVerdict.refuted(k, None, note="sigma^k A = A (periodic)")
            if p[k + i] > p[i]:
                return CheckVerdict.refuted(k, i, note="sigma^k A > A")
            j = _first_diff_bar(p, k, T, bs)
            if j is None:
                return CheckVerdict.refuted(k, None, note="sigma^k A = bar A")
            if bs - p[j] > p[k + j]:
                return CheckVerdict.refuted(k, j, note="bar A > sigma^k A")
        raise AssertionError("unreachable: shift by the period always ties")

    p = s.prefix(horizon + compare_horizon)
    for k in range(1, horizon + 1):
        i = _first_diff(p, k, compare_horizon)
        if i is None:
            raise HorizonError(
                f"sigma^{k} A vs A undecided after {compare_horizon} symbols")
        if p[k + i] > p[i]:
            return CheckVerdict.refuted(k, i, note="sigma^k A > A")
        j = _first_diff_bar(p, k, compare_horizon, bs)
        if j is None:
            raise HorizonError(
                f"bar A vs sigma^{k} A undecided after {compare_horizon} symbols")
        if bs - p[j] > p[k + j]:
            return CheckVerdict.refuted(k, j, note="bar A > sigma^k A")
    return CheckVerdict.verified(horizon)


def admissible_check(s, b: int, horizon: int = DEFAULT_SHIFT_HORIZON,
                     compare_horizon: int = DEFAULT_COMPARE_HORIZON) -> CheckVerdict:
    """Check the conditional shift inequalities for digits over {0..b}.

    For every k with a_k < b the shifted stream sigma^(k+1) A must be
    strictly below A; for every k with a_k > 0 it must be strictly above
    bar A.  Periodic input is decided exactly; otherwise conditions are
    checked for k <= horizon.
    """
    s = _as_stream(s)
    if b < 1:
        raise ValueError(f"b must be a positive integer, got {b}")

    if isinstance(s, PeriodicStream):
        T = s.word.T
        p = s.prefix(2 * T + 1)
        _validate_digits(p[:T], b)
        for k in range(T):
            if p[k] < b:
                i = _first_diff(p, k + 1, T)
                if i is None:
                    return CheckVerdict.refuted(k + 1, None, note="sigma^(k+1) A = A")
                if p[k + 1 + i] > p[i]:
                    return CheckVerdict.refuted(k + 1, i, note="sigma^(k+1) A > A")
            if p[k] > 0:
                j = _first_diff_bar(p, k + 1, T, b)
                if j is None:
                    return CheckVerdict.refuted(k + 1, None, note="sigma^(k+1) A = bar A")
                if b - p[j] > p[k + 1 + j]:
                    return CheckVerdict.refuted(k + 1, j, note="sigma^(k+1) A < bar A")
        return CheckVerdict.member_exact()

    p = s.prefix(horizon + 1 + compare_horizon)
    _validate_digits(p, b)
    for k in range(horizon + 1):
        if p[k] < b:
            i = _first_diff(p, k + 1, compare_horizon)
            if i is None:
                raise HorizonError(
                    f"sigma^{k + 1} A vs A undecided after {compare_horizon} symbols")
            if p[k + 1 + i] > p[i]:
                return CheckVerdict.refuted(k + 1, i, note="sigma^(k+1) A > A")
        if p[k] > 0:
            j = _first_diff_bar(p, k + 1, compare_horizon, b)
            if j is None:
                raise HorizonError(
                    f"bar A vs sigma^{k + 1} A undecided after {compare_horizon} symbols")
            if b - p[j] > p[k + 1 + j]:
                return CheckVerdict.refuted(k + 1, j, note="sigma^(k+1) A < bar A")
    return CheckVerdict.verified(horizon)


def _validate_digits(letters, b: int) -> None:
    for x in letters:
        if not 0 <= x <= b:
            raise ValueError(f"letter {x} outside digit range 0..{b}")


@dataclass(frozen=True)
class EquivalenceReport:
    """Joint verdicts of the admissibility and strict-trapping checkers."""

    b: int
    t: int
    admissible: CheckVerdict
    gamma_strict: CheckVerdict | None
    strict_gate: bool  # 2t > b
    consistent: bool

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "t": self.t,
            "admissible": self.admissible.to_json(),
            "gamma_strict": None if self.gamma_strict is None else self.gamma_strict.to_json(),
            "strict_gate": self.strict_gate,
            "consistent": self.consistent,
        }


def equivalence_crosscheck(s, b: int, t: int, horizon: int = 1000,
                           compare_horizon: int = DEFAULT_COMPARE_HORIZON) -> EquivalenceReport:
    """Run both checkers on a stream starting with t and compare verdicts.

    Admissibility over {0..b} must agree with strict trapping over
    {b-t .. t} whenever 2t > b; when 2t <= b the stream must simply fail
    admissibility.  Any divergence is reported as inconsistent.
    """
    s = _as_stream(s)
    if s.letter(0) != t:
        raise ValueError(f"stream must start with t={t}, starts with {s.letter(0)}")
    if isinstance(s, PeriodicStream) and all(x == b for x in s.word.period):
        raise ValueError("the constant maximal stream is excluded from the crosscheck")

    adm = admissible_check(s, b, horizon, compare_horizon)
    gate = 2 * t > b
    gam = None
    if 2 * t >= b:
        gam = gamma_strict_check(s, Alphabet(b - t, t), horizon, compare_horizon)
    if gate:
        consistent = adm.is_refuted == gam.is_refuted
    else:
        consistent = adm.is_refuted
    return EquivalenceReport(b, t, adm, gam, gate, consistent)


def admissible_prefix_refutation(word, b: int):
    """Witness (shift, index) that no extension of `word` is admissible.

    Only violations fully visible inside the prefix count; comparisons that
    stay tied through the available overlap are left undecided.  Returns
    None when the prefix does not refute.
    """
    w = list(word)
    _validate_digits(w, b)
    n = len(w)
    for k in range(n):
        if w[k] < b:
            d = _prefix_diff(w, k + 1)
            if d is not None and w[k + 1 + d] > w[d]:
                return (k + 1, d)
        if w[k] > 0:
            d = _prefix_diff_bar(w, k + 1, b)
            if d is not None and b - w[d] > w[k + 1 + d]:
                return (k + 1, d)
    return None


def gamma_strict_prefix_refutation(word, b: int, t: int):
    """Witness (shift, index) that no extension of `word` is strictly trapped
    over the alphabet {b-t .. t}, or None when the prefix does not refute."""
    w = list(word)
    n = len(w)
    if n and w[0] != t:
        return (0, 0)
    for k in range(1, n):
        d = _prefix_diff(w, k)
        if d is not None and w[k + d] > w[d]:
            return (k, d)
        d = _prefix_diff_bar(w, k, b)
        if d is not None and b - w[d] > w[k + d]:
            return (k, d)
    return None


def _prefix_diff(w: list, k: int) -> int | None:
    for i in range(len(w) - k):
        if w[k + i] != w[i]:
            return i
    return None


def _prefix_diff_bar(w: list, k: int, bar_sum: int) -> int | None:
    for i in range(len(w) - k):
        if bar_sum - w[i] != w[k + i]:
            return i
    return None


def phi(w: PeriodicWord, alphabet: Alphabet | None = None) -> PeriodicWord:
    """Period-doubling step: bump the last letter, append the bar image.

    For w = (a_0 .. a_{T-2} c)^inf with c < max, returns
    (a_0 .. a_{T-2} (c+1)  bar(a_0) .. bar(a_{T-2}) bar(c+1))^inf.
    The construction re-verifies that the doubled period is minimal and
    raises PeriodMinimalityError otherwise instead of accepting it.
    """
    if alphabet is not None and alphabet != w.alphabet:
        w = PeriodicWord(alphabet, w.period)
    alpha = w.alphabet
    last = w.period[-1]
    if last >= alpha.hi:
        raise ValueError(f"last letter {last} must be below the alphabet maximum {alpha.hi}")
    bs = alpha.lo + alpha.hi
    head = w.period[:-1] + (last + 1,)
    return PeriodicWord(alpha, head + tuple(bs - x for x in head))


def phi_iterate(b: int, t: int, s: int) -> PeriodicWord:
    """s-fold period doubling of the two-letter seed (t (b-t))^inf."""
    if s < 0:
        raise ValueError("iteration count must be >= 0")
    w = smallest_gamma(b, t)
    for _ in range(s):
        w = phi(w)
    return w


def smallest_gamma(b: int, t: int) -> PeriodicWord:
    """Lexicographically least weakly trapped word: (t (b-t))^inf."""
    _check_bt(b, t)
    return PeriodicWord(Alphabet(b - t, t), (t, b - t))


def smallest_admissible(b: int) -> ClosedFormStream:
    """Lexicographically least admissible stream over {0..b} in closed form."""
    if b < 1:
        raise ValueError(f"b must be a positive integer, got {b}")
    return m_stream(b, b // 2 + 1)


@dataclass(frozen=True)
class SquareScan:
    """Result of scanning a prefix for a factor of the form XX."""

    square_free: bool
    horizon: int
    position: int | None = None
    length: int | None = None  # |X|, so the square occupies 2*length symbols

    def to_json(self) -> dict:
        return {
            "square_free": self.square_free,
            "horizon": self.horizon,
            "position": self.position,
            "length": self.length,
        }


def square_free_check(s, n: int) -> SquareScan:
    """Scan the length-n prefix for any square factor XX with |X| >= 1.

    Reports the square with the smallest starting position (shortest first
    on ties) or certifies the prefix square-free.  The scan packs the prefix
    into bytes and, for each candidate half-length L, xors the prefix
    against its own shift by L; a square is a run of L zero bytes, located
    with bytes.find.  Cost is O(n^2 / wordsize) in C-speed operations.
    """
    s = _as_stream(s)
    if n < 0:
        raise ValueError("horizon must be >= 0")
    p = s.prefix(n)
    ids: dict = {}
    for x in p:
        if x not in ids:
            ids[x] = len(ids)
    if len(ids) > 256:
        raise ValueError("square scan supports at most 256 distinct letters")
    sb = bytes(ids[x] for x in p)
    whole = int.from_bytes(sb, "big") if sb else 0
    best: tuple | None = None
    for half in range(1, n // 2 + 1):
        m = n - half
        x = (whole >> (8 * half)) ^ (whole & ((1 << (8 * m)) - 1))
        pos = x.to_bytes(m, "big").find(b"\x00" * half)
        if pos >= 0 and (best is None or (pos, half) < best):
            best = (pos, half)
    if best is None:
        return SquareScan(True, n)
    return SquareScan(False, n, best[0], best[1])
