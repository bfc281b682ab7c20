"""Arithmetic on temporal codes.

Addition is concatenation of mark runs, multiplication is dilation under
a faster reference, min/max fall out of racing parallel lanes, and the
multi-valent train turns a dot product into a single counting sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Sequence, Set

from .core import (
    DEFAULT_CLOCK,
    ClockRef,
    IntervalValue,
    MultiValentTrain,
    PulseTrain,
    UnaryTrain,
    encode_pim,
    measure_interval,
)
from .errors import (
    ClockMismatch,
    DuplicateValue,
    EmptyInput,
    MalformedChannel,
    ModeMismatch,
    ZeroValue,
)


@dataclass(frozen=True)
class MuxChannel:
    """Several duplicate-free values sharing one channel.

    The channel is the pulse-wise OR of the members' interval codes from
    a common start marker at tick 0; a shorter value literally reuses the
    leading span of a longer one.
    """

    value_pulses: FrozenSet[int]
    clock: ClockRef = DEFAULT_CLOCK

    def __post_init__(self):
        pulses = frozenset(int(p) for p in self.value_pulses)
        if any(p <= 0 for p in pulses):
            raise ValueError("value pulses must be positive ticks")
        object.__setattr__(self, "value_pulses", pulses)

    @property
    def start_pulse(self) -> int:
        return 0

    def as_pulse_train(self) -> PulseTrain:
        return PulseTrain((0,) + tuple(sorted(self.value_pulses)), self.clock)


@dataclass(frozen=True)
class TuplePair:
    """An (amplitude, position) pair standing for the product a * b."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("amplitude must be >= 1")
        if self.b < 0:
            raise ValueError("position must be non-negative")


def add_concat(x: UnaryTrain, y: UnaryTrain) -> UnaryTrain:
    """Add by concatenating mark runs; cost is linear in the operands."""
    if x.clock != y.clock:
        raise ClockMismatch(
            "cannot concatenate %s with %s" % (x.clock.id, y.clock.id))
    return UnaryTrain(x.length + y.length, x.clock)


def mul_dilate(x: UnaryTrain, k: int) -> UnaryTrain:
    """Multiply by dilating the run: re-measure x under a k-times-faster
    reference, so every mark stretches into k."""
    if k < 1:
        raise ValueError("dilation factor must be >= 1")
    if k == 1:
        return x
    fast = x.clock.scaled(k)
    span = IntervalValue(0, x.length, x.clock)
    return UnaryTrain(measure_interval(span, fast), x.clock)


def _check_race_lanes(lanes: Sequence[IntervalValue]) -> None:
    if not lanes:
        raise EmptyInput("race needs at least one lane")
    first = lanes[0]
    for lane in lanes[1:]:
        if lane.start != first.start:
            raise ModeMismatch(
                "synchronous race requires a shared start tick")
        if lane.clock != first.clock:
            raise ModeMismatch("race lanes must share one clock")


def min_race(lanes: Sequence[IntervalValue]) -> int:
    """First arrival among synchronous lanes (OR-gate semantics)."""
    lanes = list(lanes)
    _check_race_lanes(lanes)
    return min(lane.length for lane in lanes)


def max_race(lanes: Sequence[IntervalValue]) -> int:
    """Last arrival among synchronous lanes (AND-gate semantics)."""
    lanes = list(lanes)
    _check_race_lanes(lanes)
    return max(lane.length for lane in lanes)


def mux(values: Iterable[int], clock: ClockRef = DEFAULT_CLOCK) -> MuxChannel:
    """Overlay a duplicate-free set of positive values on one channel.

    Equivalent to OR-ing the individual interval codes: shared leading
    spans are reused, which is what makes the packing efficient.
    """
    values = list(values)
    if not values:
        raise EmptyInput("mux needs at least one value")
    if len(set(values)) != len(values):
        raise DuplicateValue("mux requires duplicate-free values")
    if any(v == 0 for v in values):
        raise ZeroValue("0 collides with the start marker")
    if any(v < 0 for v in values):
        raise ValueError("mux values must be positive")
    return MuxChannel(frozenset(values), clock)


def demux(ch: MuxChannel) -> Set[int]:
    """Recover the value set: every value pulse position is one member."""
    return set(ch.value_pulses)


def demux_pulse_train(t: PulseTrain) -> Set[int]:
    """Demux straight from a raw pulse train (start marker at tick 0)."""
    if not t.pulses or t.pulses[0] != 0:
        raise MalformedChannel("multiplexed channel needs a pulse at tick 0")
    return set(t.pulses[1:])


def mux_or(values: Iterable[int], clock: ClockRef = DEFAULT_CLOCK) -> PulseTrain:
    """Reference construction of mux: literal pulse-wise OR of PIM codes."""
    pulses: Set[int] = set()
    for v in values:
        pulses.update(encode_pim(v, clock).pulses)
    return PulseTrain(tuple(sorted(pulses)), clock)


def mv_place(pair: TuplePair, clock: ClockRef = DEFAULT_CLOCK) -> MultiValentTrain:
    """Place amplitude a at temporal position b, encoding the tuple a*b."""
    return MultiValentTrain(((pair.b, pair.a),), clock)


def mv_merge(trains: Sequence[MultiValentTrain]) -> MultiValentTrain:
    """Overlay multi-valent trains; equal positions sum their amplitudes.

    Multiplexing extended to duplicates: p*v1 + p*v2 = p*(v1+v2), so the
    merge preserves the dot product.
    """
    if not trains:
        return MultiValentTrain()
    clock = trains[0].clock
    merged: Dict[int, int] = {}
    for train in trains:
        if train.clock != clock:
            raise ClockMismatch("merge requires one shared clock")
        for pos, amp in train.items:
            merged[pos] = merged.get(pos, 0) + amp
    return MultiValentTrain.from_buckets(merged, clock)


def madd(train: MultiValentTrain) -> int:
    """Dot product of a multi-valent train: sum of position * amplitude.

    Single systolic sweep from the highest occupied position down to 0:
    the running amplitude sum S picks up each bucket as the sweep enters
    its tick and is added to the accumulator once per tick, so each
    amplitude a at position b is counted exactly b times.
    """
    if not train.items:
        return 0
    buckets = train.buckets
    top = max(buckets)
    total = 0
    running = 0
    for tick in range(top, 0, -1):
        running += buckets.get(tick, 0)
        total += running
    return total
