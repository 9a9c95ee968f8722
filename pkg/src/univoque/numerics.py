"""Exact rational arithmetic, certified enclosures, and the digit solver.

Every decision in this module is made with exact rational arithmetic
(`fractions.Fraction`); floating point never enters a comparison.  Real
values are certified by enclosures: intervals with exact rational endpoints
guaranteed to contain the exact value.  Since endpoint arithmetic is exact,
interval operations are conservative without any rounding bookkeeping.

The central solver finds the base lambda in (1, b+1] whose digit expansion
of 1 is a prescribed stream, by bisection on rational midpoints with the
partial sums bracketed by an explicit geometric tail bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt

from .words import SymbolStream, m_stream, stream_from_descriptor

#: Exact rational number type used throughout.
Rational = Fraction

DEFAULT_TOLERANCE = Fraction(1, 10**40)
RESIDUAL_TOLERANCE = Fraction(1, 10**28)
_MAX_TERMS = 1 << 20


class BracketingError(RuntimeError):
    """The digit stream does not bracket a root in (1, b+1]."""


class CertificationError(RuntimeError):
    """A certified bound could not be achieved within resource limits."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Enclosure:
    """Interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure: {self.lo} > {self.hi}")

    @classmethod
    def point(cls, x) -> "Enclosure":
        x = _frac(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= _frac(x) <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        o = _frac(other)
        return Enclosure(self.lo + o, self.hi + o)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo - other.hi, self.hi - other.lo)
        o = _frac(other)
        return Enclosure(self.lo - o, self.hi - o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Enclosure):
            cands = (self.lo * other.lo, self.lo * other.hi,
                     self.hi * other.lo, self.hi * other.hi)
            return Enclosure(min(cands), max(cands))
        o = _frac(other)
        if o >= 0:
            return Enclosure(self.lo * o, self.hi * o)
        return Enclosure(self.hi * o, self.lo * o)

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("enclosure contains 0")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, Enclosure):
            return self * other.reciprocal()
        return self * (1 / _frac(other))

    def decimal_bounds(self, places: int = 50) -> tuple:
        """Outward-rounded decimal strings (lo down, hi up)."""
        return (_dec_str(self.lo, places, round_up=False),
                _dec_str(self.hi, places, round_up=True))

    def to_json(self, places: int = 50) -> dict:
        lo, hi = self.decimal_bounds(places)
        return {"lo": lo, "hi": hi, "certified": True}


def _dec_str(x: Fraction, places: int, round_up: bool) -> str:
    scale = 10 ** places
    n = x.numerator * scale
    d = x.denominator
    q = -((-n) // d) if round_up else n // d
    sign = "-" if q < 0 else ""
    ip, fp = divmod(abs(q), scale)
    if places == 0:
        return f"{sign}{ip}"
    return f"{sign}{ip}.{str(fp).zfill(places)}"


def sqrt_enclosure(x, tolerance=DEFAULT_TOLERANCE) -> Enclosure:
    """Enclosure of sqrt(x) of width <= tolerance, via scaled integer isqrt."""
    x = _frac(x)
    tol = _frac(tolerance)
    if x < 0:
        raise ValueError("square root of a negative rational")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    scale = 1
    while Fraction(2, scale) > tol:
        scale <<= 1
    y = (x.numerator * scale * scale) // x.denominator
    lo = Fraction(isqrt(y), scale)
    hi = Fraction(isqrt(y + 1) + 1, scale)
    return Enclosure(lo, hi)


def eval_expansion(digits: SymbolStream, lam, n_terms: int) -> Enclosure:
    """Enclosure of sum(d_n * lam^-(n+1)) over all n >= 0.

    The lower endpoint is the exact partial sum of the first `n_terms`
    digits; the upper endpoint adds the worst-case geometric tail
    hi_digit * lam^-n_terms / (lam - 1).
    """
    lam = _frac(lam)
    if lam <= 1:
        raise ValueError(f"base must exceed 1, got {lam}")
    if n_terms < 0:
        raise ValueError("term count must be >= 0")
    if digits.alphabet.lo < 0:
        raise ValueError("digit streams must be over nonnegative letters")
    cap = digits.alphabet.hi
    prefix = digits.prefix(n_terms)
    p, q = lam.numerator, lam.denominator
    u, pk = 0, 1
    for d in reversed(prefix):
        u = (d * pk + u) * q
        pk *= p
    lo = Fraction(u, pk)
    tail = Fraction(cap * q ** (n_terms + 1), pk * (p - q))
    return Enclosure(lo, lo + tail)


def _solve_lambda(digits: SymbolStream, b: int | None, tolerance) -> tuple:
    """Bisection core; returns (enclosure, terms_used)."""
    if b is None:
        b = digits.alphabet.hi
    if digits.alphabet.lo < 0 or digits.alphabet.hi > b:
        raise ValueError(f"digit alphabet {digits.alphabet} not inside 0..{b}")
    if digits.letter(0) < 1:
        raise ValueError("leading digit must be >= 1")
    tol = _frac(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    cap = digits.alphabet.hi

    state = {"n": 32, "prefix": digits.prefix(32)}

    def sign_at(lam: Fraction) -> int:
        """+1 when the full sum is certainly >= 1 at lam, -1 when <= 1."""
        p, q = lam.numerator, lam.denominator
        while True:
            n = state["n"]
            u, pk = 0, 1
            for d in reversed(state["prefix"]):
                u = (d * pk + u) * q
                pk *= p
            if u >= pk:  # partial sum alone reaches 1
                return 1
            if u * (p - q) + cap * q ** (n + 1) <= pk * (p - q):  # sum + tail <= 1
                return -1
            if n >= _MAX_TERMS:
                raise CertificationError(
                    f"sign of the expansion at {lam} undecided after {n} terms")
            state["n"] = 2 * n
            state["prefix"] = digits.prefix(2 * n)

    hi = Fraction(b + 1)
    if sign_at(hi) > 0:
        raise BracketingError(f"expansion still exceeds 1 at lambda = {hi}")
    lo = None
    for j in range(1, 61):
        cand = 1 + Fraction(1, 2 ** j)
        if cand >= hi:
            continue
        if sign_at(cand) > 0:
            lo = cand
            break
        hi = cand
    if lo is None:
        raise BracketingError("no root of the expansion above 1 + 2^-60")

    while hi - lo > tol:
        width = hi - lo
        mid = (lo + hi) / 2
        # prefer a short-denominator midpoint to keep later powers small
        short = mid.limit_denominator(max(64, ceil(8 / width)))
        if lo < short < hi:
            mid = short
        if sign_at(mid) > 0:
            lo = mid
        else:
            hi = mid
    return Enclosure(lo, hi), state["n"]


def solve_lambda(digits: SymbolStream, b: int | None = None,
                 tolerance=DEFAULT_TOLERANCE) -> Enclosure:
    """Certified enclosure of the unique lambda in (1, b+1] with
    sum(d_n * lambda^-(n+1)) = 1, of width <= tolerance.

    The expansion is strictly decreasing in lambda, so each bisection step
    is decided by raising the term count until the partial-sum bracket
    excludes 1.
    """
    return _solve_lambda(digits, b, tolerance)[0]


def greedy_expansion(lam, b: int, n_digits: int) -> list:
    """First digits of the greedy expansion of 1 in base lam with digits 0..b.

    Recursion: r_0 = 1, a_j = min(b, floor(lam * r_j)), r_{j+1} = lam*r_j - a_j.
    At an exact integer boundary the larger digit is taken, which yields the
    terminating expansion continued by zeros.
    """
    lam = _frac(lam)
    if b < 1:
        raise ValueError(f"b must be a positive integer, got {b}")
    if not 1 < lam <= b + 1:
        raise ValueError(f"base must lie in (1, {b + 1}], got {lam}")
    if n_digits < 0:
        raise ValueError("digit count must be >= 0")
    out = []
    r = Fraction(1)
    for _ in range(n_digits):
        x = lam * r
        a = x.numerator // x.denominator
        if a > b:
            a = b
        out.append(a)
        r = x - a
        if not 0 <= r < 1:
            raise AssertionError(f"greedy remainder {r} left [0, 1)")
    return out


def mahler_F(x, tolerance=Fraction(1, 10**30)) -> Enclosure:
    """Enclosure of the infinite product prod(1 - x^(2^k), k >= 0) on [0, 1).

    After the factors up to 2^K the remaining product lies in
    [1 - x^(2^(K+1))/(1-x), 1]; K grows until the width meets the tolerance.
    """
    x = _frac(x)
    tol = _frac(tolerance)
    if not 0 <= x < 1:
        raise ValueError(f"argument must lie in [0, 1), got {x}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if x == 0:
        return Enclosure.point(1)
    partial = Fraction(1)
    xk = x
    for _ in range(64):
        partial *= 1 - xk
        xk *= xk  # now x^(2^(K+1))
        tail_lo = 1 - xk / (1 - x)
        if tail_lo < 0:
            tail_lo = Fraction(0)
        lo, hi = partial * tail_lo, partial
        if hi - lo <= tol:
            return Enclosure(lo, hi)
    raise CertificationError("infinite product did not converge in 64 factors")


def functional_identity_residual(b: int, t: int, lam: Enclosure,
                                 tolerance=RESIDUAL_TOLERANCE) -> Enclosure:
    """Enclosure of ((2t-b-1)/lambda - 1) * F(1/lambda) + 1 + b/(lambda-1) - 2.

    When lambda is the base whose expansion of 1 has the extremal digit
    stream for (b, t), the exact residual is 0, so the enclosure must
    contain 0; a wrong lambda yields an enclosure excluding 0.
    """
    from .words import _check_bt

    _check_bt(b, t)
    if lam.lo <= 1:
        raise ValueError("lambda enclosure must lie strictly above 1")
    c = 2 * t - b - 1
    inv = lam.reciprocal()
    tol_f = _frac(tolerance) / 4
    # the product is positive and decreasing on [0,1), so its range over the
    # inverted enclosure is bracketed by the endpoint evaluations
    f_at_lo = mahler_F(inv.lo, tol_f)
    f_at_hi = mahler_F(inv.hi, tol_f)
    f_enc = Enclosure(f_at_hi.lo, f_at_lo.hi)
    term1 = (inv * c - 1) * f_enc
    term2 = (lam - 1).reciprocal() * b
    return term1 + term2 - 1


def quadratic_pisot(b: int, t: int, tolerance=DEFAULT_TOLERANCE) -> Enclosure:
    """Enclosure of the larger root of X^2 - t X - (b - t + 1).

    This is the base whose expansion of 1 has digits (t (b-t))^inf; it is a
    Pisot number, with monic constant term -1 exactly when t = b.
    """
    from .words import _check_bt

    _check_bt(b, t)
    disc = t * t + 4 * (b - t + 1)
    root = sqrt_enclosure(Fraction(disc), _frac(tolerance))
    return Enclosure(Fraction(t + root.lo, 2), Fraction(t + root.hi, 2))


@dataclass(frozen=True)
class UnivoqueResult:
    """Certified description of the smallest univoque number in (b, b+1)."""

    b: int
    t: int
    digits_descriptor: dict
    lam: Enclosure
    identity_residual: Enclosure
    terms_used: int

    def digits_prefix(self, n: int = 32) -> list:
        return stream_from_descriptor(self.digits_descriptor).prefix(n)

    def to_json(self, places: int = 50, prefix_len: int = 32) -> dict:
        lam_lo, lam_hi = self.lam.decimal_bounds(places)
        res_lo, res_hi = self.identity_residual.decimal_bounds(places)
        return {
            "b": self.b,
            "t": self.t,
            "digits_prefix": self.digits_prefix(prefix_len),
            "lambda_lo": lam_lo,
            "lambda_hi": lam_hi,
            "residual_lo": res_lo,
            "residual_hi": res_hi,
            "terms_used": self.terms_used,
        }


def smallest_univoque(b: int, tolerance=DEFAULT_TOLERANCE,
                      residual_tolerance=RESIDUAL_TOLERANCE) -> UnivoqueResult:
    """Solve for the smallest univoque number in (b, b+1).

    Builds the extremal digit stream with t = b, encloses its base to the
    requested width, and evaluates the functional-identity residual as an
    independent consistency certificate.
    """
    digits = m_stream(b, b)
    enc, terms = _solve_lambda(digits, b, tolerance)
    if not (enc.lo > b and enc.hi < b + 1):
        raise CertificationError(f"enclosure {enc} not inside ({b}, {b + 1})")
    residual = functional_identity_residual(b, b, enc, residual_tolerance)
    if not residual.contains(0):
        raise CertificationError(
            f"identity residual {residual.decimal_bounds(30)} excludes 0 for b={b}")
    return UnivoqueResult(b, b, digits.descriptor(), enc, residual, terms)


@dataclass(frozen=True)
class RoundtripReport:
    """Greedy re-expansion of a certified base against its source digits."""

    b: int
    lam: Enclosure
    digits: tuple
    matches_closed_form: bool
    refinements: int
    terms_used: int

    def to_json(self, places: int = 50) -> dict:
        lam_lo, lam_hi = self.lam.decimal_bounds(places)
        return {
            "b": self.b,
            "lambda_lo": lam_lo,
            "lambda_hi": lam_hi,
            "digits": list(self.digits),
            "matches_closed_form": self.matches_closed_form,
            "refinements": self.refinements,
            "terms_used": self.terms_used,
        }


def univoque_roundtrip(b: int, tolerance=DEFAULT_TOLERANCE,
                       n_digits: int = 60) -> RoundtripReport:
    """Certify the first greedy digits of the smallest univoque number.

    Greedy digit sequences are lexicographically monotone in the base, so if
    the expansions at both enclosure endpoints agree on a prefix, every base
    inside the enclosure shares that prefix.  If the endpoints disagree the
    enclosure is refined and the roundtrip retried.
    """
    if n_digits < 1:
        raise ValueError("digit count must be >= 1")
    tol = _frac(tolerance)
    digits_stream = m_stream(b, b)
    for attempt in range(4):
        enc, terms = _solve_lambda(digits_stream, b, tol)
        at_lo = greedy_expansion(enc.lo, b, n_digits)
        at_hi = greedy_expansion(enc.hi, b, n_digits)
        if at_lo == at_hi:
            expected = digits_stream.prefix(n_digits)
            return RoundtripReport(b, enc, tuple(at_lo), at_lo == expected,
                                   attempt, terms)
        tol /= 10 ** 10
    raise CertificationError(
        f"could not certify {n_digits} digits for b={b}; tolerance {tol * 10**10} "
        f"still leaves the endpoints apart")
