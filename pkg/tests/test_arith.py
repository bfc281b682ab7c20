"""Arithmetic on temporal codes: concat add, dilation mul, races,
multiplexing, and the multi-valent dot-product sweep."""

import random

import pytest
from hypothesis import given, strategies as st

from temporalsim import (
    ClockRef,
    IntervalValue,
    MultiValentTrain,
    PulseTrain,
    TuplePair,
    add_concat,
    decode_unary,
    demux,
    demux_pulse_train,
    encode_unary,
    madd,
    max_race,
    min_race,
    mul_dilate,
    mux,
    mux_or,
    mv_merge,
    mv_place,
)
from temporalsim.errors import (
    ClockMismatch,
    DuplicateValue,
    EmptyInput,
    MalformedChannel,
    ModeMismatch,
    ZeroValue,
)


class TestAddConcat:
    def test_three_plus_four(self):
        assert add_concat(encode_unary(3), encode_unary(4)).length == 7

    def test_zero_identity(self):
        assert add_concat(encode_unary(0), encode_unary(9)).length == 9

    def test_clock_mismatch(self):
        with pytest.raises(ClockMismatch):
            add_concat(encode_unary(1, ClockRef("a")),
                       encode_unary(1, ClockRef("b")))

    def test_against_integer_addition(self):
        rng = random.Random(101)
        for _ in range(10 ** 3):
            a, b = rng.randint(0, 1000), rng.randint(0, 1000)
            assert add_concat(encode_unary(a), encode_unary(b)).length == a + b

    @given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
    def test_commutative(self, a, b):
        x, y = encode_unary(a), encode_unary(b)
        assert add_concat(x, y) == add_concat(y, x)


class TestMulDilate:
    def test_five_times_three(self):
        assert mul_dilate(encode_unary(5), 3).length == 15

    def test_identity_dilation(self):
        t = encode_unary(42)
        assert mul_dilate(t, 1).length == 42

    def test_against_integer_multiplication(self):
        rng = random.Random(102)
        for _ in range(10 ** 3):
            a, k = rng.randint(0, 500), rng.randint(1, 20)
            assert mul_dilate(encode_unary(a), k).length == a * k

    def test_rejects_zero_factor(self):
        with pytest.raises(ValueError):
            mul_dilate(encode_unary(3), 0)

    @given(st.integers(0, 10 ** 3), st.integers(0, 10 ** 3),
           st.integers(1, 50))
    def test_distributes_over_add(self, a, b, k):
        lhs = mul_dilate(add_concat(encode_unary(a), encode_unary(b)), k)
        rhs = (mul_dilate(encode_unary(a), k).length
               + mul_dilate(encode_unary(b), k).length)
        assert decode_unary(lhs) == rhs


def _lanes(values, start=0):
    return [IntervalValue(start, start + v) for v in values]


class TestRaces:
    def test_first_arrival(self):
        assert min_race(_lanes([5, 7])) == 5

    def test_last_arrival(self):
        assert max_race(_lanes([5, 7])) == 7

    def test_singleton(self):
        assert min_race(_lanes([9])) == 9
        assert max_race(_lanes([9])) == 9

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            min_race([])

    def test_unshared_start_rejected(self):
        with pytest.raises(ModeMismatch):
            min_race([IntervalValue(0, 5), IntervalValue(2, 7)])

    def test_against_integer_min_max(self):
        rng = random.Random(103)
        for _ in range(10 ** 3):
            vals = [rng.randint(0, 10 ** 4)
                    for _ in range(rng.randint(1, 8))]
            assert min_race(_lanes(vals)) == min(vals)
            assert max_race(_lanes(vals)) == max(vals)


class TestMux:
    def test_figure_values(self):
        ch = mux({5, 7})
        assert ch.as_pulse_train().pulses == (0, 5, 7)

    def test_singleton_degenerates_to_interval_code(self):
        assert mux({9}).as_pulse_train().pulses == (0, 9)

    def test_matches_pulsewise_or(self):
        # independent construction: OR the individual interval codes
        assert mux({3, 5, 7, 11}).as_pulse_train() == mux_or({3, 5, 7, 11})

    def test_zero_rejected(self):
        with pytest.raises(ZeroValue):
            mux({0, 3})

    def test_duplicates_rejected(self):
        with pytest.raises(DuplicateValue):
            mux([4, 4])

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            mux([])

    def test_demux_inverts(self):
        assert demux(mux({5, 7})) == {5, 7}
        assert demux(mux({4})) == {4}

    def test_demux_pulse_train(self):
        assert demux_pulse_train(PulseTrain((0, 5, 7))) == {5, 7}
        with pytest.raises(MalformedChannel):
            demux_pulse_train(PulseTrain((1, 5)))

    def test_round_trip_random_sets(self):
        rng = random.Random(104)
        for _ in range(10 ** 3):
            size = rng.randint(1, 64)
            values = set(rng.sample(range(1, 10 ** 4 + 1), size))
            assert demux(mux(values)) == values

    @given(st.sets(st.integers(1, 10 ** 4), min_size=1, max_size=64))
    def test_order_independent(self, values):
        shuffled = sorted(values, reverse=True)
        assert mux(values) == mux(shuffled)
        assert mux(values).as_pulse_train() == mux_or(values)


class TestMultiValent:
    def test_place_figure_tuples(self):
        assert mv_place(TuplePair(3, 5)).buckets == {5: 3}
        assert mv_place(TuplePair(4, 3)).buckets == {3: 4}

    def test_place_unit_at_origin(self):
        assert mv_place(TuplePair(1, 0)).buckets == {0: 1}

    def test_merge_disjoint(self):
        merged = mv_merge([mv_place(TuplePair(3, 2)),
                           mv_place(TuplePair(4, 3))])
        assert merged.buckets == {2: 3, 3: 4}

    def test_merge_empty_identity(self):
        t = mv_place(TuplePair(3, 5))
        assert mv_merge([t, MultiValentTrain()]).buckets == {5: 3}

    def test_merge_sums_duplicate_positions(self):
        merged = mv_merge([mv_place(TuplePair(2, 4)),
                           mv_place(TuplePair(5, 4))])
        assert merged.buckets == {4: 7}
        assert madd(merged) == 4 * 2 + 4 * 5  # distributivity

    def test_merge_clock_mismatch(self):
        with pytest.raises(ClockMismatch):
            mv_merge([mv_place(TuplePair(1, 1), ClockRef("a")),
                      mv_place(TuplePair(1, 1), ClockRef("b"))])

    def test_amplitude_invariants(self):
        with pytest.raises(ValueError):
            MultiValentTrain(((2, 0),))
        with pytest.raises(ValueError):
            MultiValentTrain(((-1, 2),))


def _random_train(rng):
    positions = rng.sample(range(0, 10 ** 3 + 1), rng.randint(1, 32))
    return MultiValentTrain(
        tuple((p, rng.randint(1, 255)) for p in positions))


class TestMadd:
    def test_dot_product_figure(self):
        assert madd(MultiValentTrain(((2, 3), (3, 4)))) == 18

    def test_single_tuple(self):
        assert madd(mv_place(TuplePair(3, 5))) == 15

    def test_empty_train(self):
        assert madd(MultiValentTrain()) == 0

    def test_against_dot_product_oracle(self):
        rng = random.Random(105)
        for _ in range(10 ** 3):
            train = _random_train(rng)
            assert madd(train) == sum(p * a for p, a in train.items)

    def test_merge_preserves_dot_product(self):
        rng = random.Random(106)
        for _ in range(10 ** 3):
            a, b = _random_train(rng), _random_train(rng)
            assert madd(mv_merge([a, b])) == madd(a) + madd(b)
