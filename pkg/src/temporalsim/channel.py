"""Asynchronous inter-block transport.

Data rides as the spacing between events, so a link may delay a message
arbitrarily as long as the delay holds still between the message's first
and last event. The module also covers reference negotiation and the
four delivery-mode (de)serializers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .core import (
    DEFAULT_CLOCK,
    ClockRef,
    DeliveryMode,
    IntervalValue,
    PulseTrain,
)
from .errors import (
    GapCountMismatch,
    MalformedStream,
    OffsetCountMismatch,
    StabilityError,
)

EVENT_START = "start"
EVENT_END = "end"
EVENT_VALUE = "value-pulse"


@dataclass(frozen=True)
class TimedMessage:
    """A sequence of (role, emission tick) events; one start event first.

    The payload is implicit in the spacing: the decoded value is the gap
    between the start and the final event, and any value pulses decode
    by their offset from the start.
    """

    events: Tuple[Tuple[str, int], ...]
    clock: ClockRef = DEFAULT_CLOCK

    def __post_init__(self):
        events = tuple((str(r), int(t)) for r, t in self.events)
        if not events or events[0][0] != EVENT_START:
            raise ValueError("message must open with a start event")
        ticks = [t for _, t in events]
        if any(b < a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("events must be in non-decreasing order")
        object.__setattr__(self, "events", events)

    @classmethod
    def interval(cls, value: int, start: int = 0,
                 clock: ClockRef = DEFAULT_CLOCK) -> "TimedMessage":
        if value == 0:
            return cls(((EVENT_START, start), (EVENT_END, start)), clock)
        return cls(((EVENT_START, start), (EVENT_END, start + value)), clock)

    @property
    def start_tick(self) -> int:
        return self.events[0][1]

    @property
    def last_tick(self) -> int:
        return self.events[-1][1]

    def decode(self) -> int:
        """Interval length from start to the final event."""
        return self.last_tick - self.start_tick

    def value_offsets(self) -> Tuple[int, ...]:
        """Value-pulse positions relative to the start marker."""
        start = self.start_tick
        return tuple(t - start for r, t in self.events if r == EVENT_VALUE)


@dataclass(frozen=True)
class Link:
    """A one-way path whose delay may depend on the emission tick.

    The delay function must be deterministic; randomness comes only from
    an explicit seed baked into the function at construction time.
    """

    delay: Callable[[int], int]
    src_clock: ClockRef = DEFAULT_CLOCK
    dst_clock: ClockRef = DEFAULT_CLOCK

    @classmethod
    def constant(cls, delay: int, src_clock: ClockRef = DEFAULT_CLOCK,
                 dst_clock: Optional[ClockRef] = None) -> "Link":
        if delay < 0:
            raise ValueError("link delay must be non-negative")
        return cls(lambda _t, _d=delay: _d, src_clock,
                   dst_clock or src_clock)

    @classmethod
    def from_table(cls, table: Dict[int, int], default: int = 0,
                   src_clock: ClockRef = DEFAULT_CLOCK,
                   dst_clock: Optional[ClockRef] = None) -> "Link":
        if default < 0 or any(d < 0 for d in table.values()):
            raise ValueError("link delays must be non-negative")
        frozen = dict(table)
        return cls(lambda t: frozen.get(t, default), src_clock,
                   dst_clock or src_clock)

    @classmethod
    def jittered(cls, seed: int, low: int, high: int,
                 src_clock: ClockRef = DEFAULT_CLOCK,
                 dst_clock: Optional[ClockRef] = None) -> "Link":
        """Per-tick pseudo-random delay, reproducible from the seed."""
        if low < 0 or high < low:
            raise ValueError("need 0 <= low <= high")

        def delay(tick: int) -> int:
            return random.Random(seed * 0x9E3779B1 + tick).randint(low, high)

        return cls(delay, src_clock, dst_clock or src_clock)


@dataclass(frozen=True)
class StabilityViolation:
    """Diagnosis of a link whose delay changed inside the data interval.

    Not an exception: the distorted events and the induced value error
    are reported so callers can decide what to do with the corruption.
    The distorted events keep their emission (role) order, which may no
    longer match arrival order; the distorted value may even be negative
    when the final event overtakes the start marker.
    """

    original: TimedMessage
    distorted_events: Tuple[Tuple[str, int], ...]
    value_error: int

    @property
    def distorted_value(self) -> int:
        return self.distorted_events[-1][1] - self.distorted_events[0][1]


def transmit_checked(msg: TimedMessage,
                     link: Link) -> Union[TimedMessage, StabilityViolation]:
    """Send a message, diagnosing in-span delay instability.

    The delay only has to hold still between this message's first and
    last event; drift outside that span (or between messages) is legal.
    """
    delays = {link.delay(t) for _, t in msg.events}
    shifted = tuple((r, t + link.delay(t)) for r, t in msg.events)
    if len(delays) > 1:
        distorted_value = shifted[-1][1] - shifted[0][1]
        return StabilityViolation(msg, shifted,
                                  distorted_value - msg.decode())
    return TimedMessage(shifted, msg.clock)


def transmit(msg: TimedMessage, link: Link) -> TimedMessage:
    """Send a message over a link that is stable across the message span.

    The decoded value is latency-invariant: every event shifts by the
    same delay, so the spacing (and hence the data) survives any route.
    """
    out = transmit_checked(msg, link)
    if isinstance(out, StabilityViolation):
        raise StabilityError(
            "link delay varies inside the message span "
            "(value error %+d)" % out.value_error)
    return out


def negotiate_reference(src: ClockRef, dst: ClockRef) -> Fraction:
    """Agree the exchange rate between two time references.

    Ratio 1 means a genuinely shared reference; otherwise the receiver
    re-denominates counts via convert_reference.
    """
    return dst.ratio_to(src)


# ---------------------------------------------------------------------------
# Delivery-mode serialization


def serialize_stream(values: Sequence[int], mode: DeliveryMode,
                     gaps: Optional[Sequence[int]] = None,
                     clock: ClockRef = DEFAULT_CLOCK) -> PulseTrain:
    """Lay out values on one channel in a serial delivery mode.

    Serial: zero idle time, interior pulses double as end-of-one and
    start-of-next delimiters (which is why concatenation adds). Serial
    discontinuous: each value keeps its own delimiters, separated by
    caller-specified idle gaps. Values must be >= 1 in both modes; a
    zero-length code collapses to a single pulse and cannot be parsed
    back unambiguously.
    """
    if any(v < 1 for v in values):
        raise MalformedStream("stream values must be >= 1")
    if mode is DeliveryMode.SERIAL:
        if gaps:
            raise GapCountMismatch("serial mode takes no gaps")
        pulses = [0]
        for v in values:
            pulses.append(pulses[-1] + v)
        return PulseTrain(tuple(pulses), clock)
    if mode is DeliveryMode.SERIAL_DISCONTINUOUS:
        gaps = list(gaps or [])
        boundaries = max(len(values) - 1, 0)
        if len(gaps) != boundaries:
            raise GapCountMismatch(
                "need %d gaps for %d values, got %d"
                % (boundaries, len(values), len(gaps)))
        if any(g < 1 for g in gaps):
            raise MalformedStream("idle gaps must be >= 1")
        pulses = []
        cursor = 0
        for i, v in enumerate(values):
            pulses.extend((cursor, cursor + v))
            cursor += v
            if i < boundaries:
                cursor += gaps[i]
        return PulseTrain(tuple(pulses) if pulses else (0,), clock)
    raise ValueError("not a serial delivery mode: %r" % (mode,))


def parse_stream(t: PulseTrain, mode: DeliveryMode) -> List[int]:
    """Read a serial channel back into its value sequence (right inverse
    of serialize_stream for the same mode)."""
    pulses = t.pulses
    if mode is DeliveryMode.SERIAL:
        if not pulses or pulses[0] != 0:
            raise MalformedStream("serial stream must start at tick 0")
        return [b - a for a, b in zip(pulses, pulses[1:])]
    if mode is DeliveryMode.SERIAL_DISCONTINUOUS:
        if pulses == (0,):
            return []
        if len(pulses) % 2 != 0:
            raise MalformedStream(
                "discontinuous stream needs paired delimiters")
        return [pulses[i + 1] - pulses[i] for i in range(0, len(pulses), 2)]
    raise ValueError("not a serial delivery mode: %r" % (mode,))


def deliver_parallel(values: Sequence[int], mode: DeliveryMode,
                     offsets: Optional[Sequence[int]] = None,
                     clock: ClockRef = DEFAULT_CLOCK) -> List[IntervalValue]:
    """Spread values across parallel lanes.

    Synchronous lanes all start at tick 0; asynchronous lanes start at
    caller-given offsets.
    """
    if mode is DeliveryMode.PARALLEL_SYNCHRONOUS:
        if offsets:
            raise OffsetCountMismatch("synchronous mode takes no offsets")
        return [IntervalValue(0, v, clock) for v in values]
    if mode is DeliveryMode.PARALLEL_ASYNCHRONOUS:
        offsets = list(offsets or [])
        if len(offsets) != len(values):
            raise OffsetCountMismatch(
                "need %d offsets, got %d" % (len(values), len(offsets)))
        return [IntervalValue(o, o + v, clock)
                for v, o in zip(values, offsets)]
    raise ValueError("not a parallel delivery mode: %r" % (mode,))


def measure_parallel(lanes: Sequence[IntervalValue]) -> List[int]:
    """Recover lane values regardless of start offsets."""
    return [lane.length for lane in lanes]
