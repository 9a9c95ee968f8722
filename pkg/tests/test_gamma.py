from itertools import product

import pytest

from univoque.gamma import (
    CheckVerdict,
    GammaParams,
    Status,
    admissible_check,
    admissible_prefix_refutation,
    equivalence_crosscheck,
    gamma_member,
    gamma_strict_check,
    gamma_strict_prefix_refutation,
    phi,
    phi_iterate,
    smallest_admissible,
    smallest_gamma,
    square_free_check,
)
from univoque.words import (
    Alphabet,
    PeriodicStream,
    PeriodicWord,
    PeriodMinimalityError,
    LexOrder,
    bar,
    lex_cmp,
    m_stream,
    minimal_period,
    tm_eps,
)

BT_GRID = [(1, 1), (2, 2), (3, 2), (3, 3), (4, 3), (4, 4)]


def word(letters, lo, hi):
    return PeriodicWord(Alphabet(lo, hi), tuple(letters))


def naive_first_square(prefix):
    """Independent oracle: earliest square by slice comparison."""
    p = list(prefix)
    n = len(p)
    for i in range(n):
        for half in range(1, (n - i) // 2 + 1):
            if p[i:i + half] == p[i + half:i + 2 * half]:
                return (i, half)
    return None


class TestGammaMember:
    @pytest.mark.parametrize("b,t", BT_GRID)
    def test_seed_word_is_member(self, b, t):
        assert gamma_member(smallest_gamma(b, t)).status is Status.MEMBER_EXACT

    @pytest.mark.parametrize("b", [1, 2, 3])
    def test_constant_max_is_member(self, b):
        assert gamma_member(word([b], 0, b)).status is Status.MEMBER_EXACT

    def test_100_word_refuted_at_shift_one(self):
        v = gamma_member(word([1, 0, 0], 0, 1))
        assert v.status is Status.REFUTED
        assert v.witness_shift == 1

    def test_wrong_first_letter_refuted(self):
        v = gamma_member(word([1, 2], 0, 2))
        assert v.is_refuted and v.witness_shift == 0

    def test_json_schema(self):
        v = gamma_member(word([1, 0, 0], 0, 1))
        assert set(v.to_json()) == {"status", "witness_shift", "witness_index", "horizon"}


class TestGammaStrict:
    @pytest.mark.parametrize("b,t", [(1, 1), (2, 2), (3, 2), (3, 3)])
    def test_closed_form_verified(self, b, t):
        v = gamma_strict_check(m_stream(b, t), horizon=2000)
        assert v.status is Status.VERIFIED_TO_HORIZON
        assert v.horizon == 2000

    @pytest.mark.parametrize("b,t", BT_GRID)
    def test_seed_word_refuted(self, b, t):
        assert gamma_strict_check(PeriodicStream(smallest_gamma(b, t))).is_refuted

    def test_every_small_periodic_word_refuted(self):
        alpha = Alphabet(0, 2)
        for n in range(1, 5):
            for letters in product(alpha.letters(), repeat=n):
                if minimal_period(letters) != len(letters):
                    continue
                v = gamma_strict_check(PeriodicStream(PeriodicWord(alpha, letters)))
                assert v.is_refuted

    def test_bar_of_extremal_refuted_on_first_letter(self):
        v = gamma_strict_check(bar(m_stream(1, 1)), horizon=100)
        assert v.is_refuted
        assert (v.witness_shift, v.witness_index) == (0, 0)


class TestAdmissible:
    @pytest.mark.parametrize("b", [1, 2, 3, 4])
    def test_constant_max_is_member(self, b):
        assert admissible_check(word([b], 0, b), b).status is Status.MEMBER_EXACT

    @pytest.mark.parametrize("z", [1, 2, 3])
    def test_constant_midpoint_refuted(self, z):
        assert admissible_check(word([z], 0, 2 * z), 2 * z).is_refuted

    @pytest.mark.parametrize("b", [1, 2, 3, 4, 5])
    def test_smallest_admissible_verified(self, b):
        v = admissible_check(smallest_admissible(b), b, horizon=2000)
        assert v.status is Status.VERIFIED_TO_HORIZON

    def test_letters_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            admissible_check(word([5], 0, 5), 3)


class TestSmallestAdmissible:
    def test_odd_base_prefixes(self):
        assert smallest_admissible(1).prefix(6) == [1, 1, 0, 1, 0, 0]
        assert smallest_admissible(3).prefix(6) == [2, 2, 1, 2, 1, 1]

    def test_even_base_prefix(self):
        assert smallest_admissible(2).prefix(12) == [2, 1, 0, 2, 0, 1, 2, 1, 0, 1, 2, 0]

    @pytest.mark.parametrize("b", [1, 2, 3, 4, 5])
    def test_closed_forms_agree(self, b):
        z = b // 2
        s = smallest_admissible(b).prefix(512)
        if b % 2:
            assert s == [z + tm_eps(n + 1) for n in range(512)]
        else:
            assert s == [z + tm_eps(n + 1) - tm_eps(n) for n in range(512)]

    def test_no_smaller_periodic_admissible_stream(self):
        # brute force: every exactly-admissible word of period <= 4 stays >= the minimum
        for b in (1, 2, 3):
            least = smallest_admissible(b)
            alpha = Alphabet(0, b)
            for n in range(1, 5):
                for letters in product(alpha.letters(), repeat=n):
                    if minimal_period(letters) != len(letters):
                        continue
                    w = PeriodicWord(alpha, letters)
                    if admissible_check(w, b).status is Status.MEMBER_EXACT:
                        s = PeriodicStream(w)
                        assert lex_cmp(s, least, 64) is not LexOrder.LT


class TestEquivalence:
    def test_extremal_consistent_verified(self):
        rep = equivalence_crosscheck(m_stream(3, 2), 3, 2, horizon=1000)
        assert rep.consistent and rep.strict_gate
        assert rep.admissible.is_positive and rep.gamma_strict.is_positive

    def test_midpoint_constant_consistent_refuted(self):
        rep = equivalence_crosscheck(PeriodicStream(word([1], 0, 2)), 2, 1)
        assert rep.consistent and not rep.strict_gate
        assert rep.admissible.is_refuted and rep.gamma_strict.is_refuted

    def test_low_letter_refutes_both_prefix_checks(self):
        # every word of length 6 with a letter below b-t refutes on both sides
        for b in (2, 3, 4):
            for t in range(1, b + 1):
                if 2 * t <= b:
                    continue
                for rest in product(range(b + 1), repeat=5):
                    w = (t,) + rest
                    if min(w) >= b - t:
                        continue
                    assert admissible_prefix_refutation(w, b) is not None
                    assert gamma_strict_prefix_refutation(w, b, t) is not None

    def test_precondition_checks(self):
        with pytest.raises(ValueError):
            equivalence_crosscheck(m_stream(3, 2), 3, 3)  # starts with 2, not 3
        with pytest.raises(ValueError):
            equivalence_crosscheck(PeriodicStream(word([2], 0, 2)), 2, 2)  # b^inf

    def test_prefix_agreement_small_exhaustive(self):
        b = 2
        for t in (2,):
            for rest in product(range(b + 1), repeat=5):
                w = (t,) + rest
                adm = admissible_prefix_refutation(w, b) is not None
                gam = gamma_strict_prefix_refutation(w, b, t) is not None
                assert adm == gam, f"prefix verdicts diverge on {w}"


class TestPhi:
    def test_binary_step(self):
        assert phi(word([1, 0], 0, 1)).period == (1, 1, 0, 0)

    def test_four_letter_step(self):
        assert phi(word([3, 0], 0, 3)).period == (3, 1, 0, 2)

    def test_second_application(self):
        w = phi(phi(word([1, 0], 0, 1)))
        assert w.period == (1, 1, 0, 1, 0, 0, 1, 0)

    def test_requires_bumpable_last_letter(self):
        with pytest.raises(ValueError):
            phi(word([1], 0, 1))

    @pytest.mark.parametrize("b,t", BT_GRID)
    def test_iterates_stay_minimal(self, b, t):
        # doubling must never silently produce a non-minimal period
        w = phi_iterate(b, t, 12)
        assert w.T == 2 ** 13

    @pytest.mark.parametrize("b,t,s,expect", [
        (1, 1, 2, (1, 1, 0, 1, 0, 0, 1, 0)),
        (3, 3, 1, (3, 1, 0, 2)),
        (1, 1, 0, (1, 0)),
    ])
    def test_iterate_examples(self, b, t, s, expect):
        assert phi_iterate(b, t, s).period == expect

    @pytest.mark.parametrize("b,t", BT_GRID)
    def test_prefix_agreement_with_closed_form(self, b, t):
        stream = m_stream(b, t)
        prev = -1
        for s in range(13):
            w = phi_iterate(b, t, s)
            bound = 2 * w.T
            ref = stream.prefix(bound)
            agree = bound
            for i in range(bound):
                if w.letter(i) != ref[i]:
                    agree = i
                    break
            assert agree >= 2 ** (s + 1) - 1
            assert agree > prev
            prev = agree


class TestSmallestGamma:
    @pytest.mark.parametrize("b,t,expect", [(1, 1, (1, 0)), (3, 2, (2, 1)), (2, 2, (2, 0))])
    def test_examples(self, b, t, expect):
        assert smallest_gamma(b, t).period == expect

    def test_parameter_violation(self):
        with pytest.raises(ValueError):
            smallest_gamma(2, 1)

    def test_minimality_small_periods(self):
        # exhaustive oracle over small periods: nothing below the seed word
        for b, t in [(1, 1), (2, 2), (3, 2), (3, 3)]:
            alpha = Alphabet(b - t, t)
            seed = PeriodicStream(smallest_gamma(b, t))
            for n in range(1, 5):
                for letters in product(alpha.letters(), repeat=n):
                    if minimal_period(letters) != len(letters):
                        continue
                    w = PeriodicWord(alpha, letters)
                    if gamma_member(w).status is Status.MEMBER_EXACT:
                        assert lex_cmp(PeriodicStream(w), seed) is not LexOrder.LT


class TestGammaParams:
    def test_alphabet(self):
        assert GammaParams(3, 2).alphabet == Alphabet(1, 2)

    def test_strict_gate(self):
        assert GammaParams(3, 2).is_strict
        assert not GammaParams(2, 1).is_strict
        with pytest.raises(ValueError):
            GammaParams(2, 1).require_strict()

    def test_domain(self):
        with pytest.raises(ValueError):
            GammaParams(2, 0)
        with pytest.raises(ValueError):
            GammaParams(2, 3)


class TestSquareFree:
    def test_three_letter_extremal_is_square_free(self):
        scan = square_free_check(m_stream(2, 2), 10_000)
        assert scan.square_free and scan.horizon == 10_000

    def test_alternating_word_has_square(self):
        scan = square_free_check(periodic_stream([1, 0]), 4)
        assert not scan.square_free
        assert (scan.position, scan.length) == (0, 2)

    def test_binary_extremal_fails_quickly(self):
        scan = square_free_check(m_stream(1, 1), 100)
        assert not scan.square_free

    @pytest.mark.parametrize("stream,n", [
        (m_stream(2, 2), 300),
        (m_stream(4, 3), 300),
        (m_stream(1, 1), 120),
        (m_stream(3, 2), 150),
    ])
    def test_matches_naive_oracle(self, stream, n):
        scan = square_free_check(stream, n)
        oracle = naive_first_square(stream.prefix(n))
        if oracle is None:
            assert scan.square_free
        else:
            assert (scan.position, scan.length) == oracle

    def test_json_schema(self):
        scan = square_free_check(m_stream(1, 1), 16)
        assert set(scan.to_json()) == {"square_free", "horizon", "position", "length"}


def periodic_stream(letters):
    return PeriodicStream(PeriodicWord(Alphabet(min(letters), max(letters)), tuple(letters)))
