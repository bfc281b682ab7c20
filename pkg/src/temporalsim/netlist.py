"""Netlist text format: blocks wired through latency links, plus probes.

Line-oriented, whitespace-separated, `#` comments:

    clock <id> <freq-numerator>[/<denominator>]
    block <id> <kind> [key=value ...]
    wire <src-id>.<port> <dst-id>.<port> [latency=<int>|table=<file>]
    probe <block-id>.<port>

Parsing reports the first tokenization failure with its position;
validation reports every structural violation at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .core import ClockRef
from .errors import NetlistParseError, NetlistValidationError

BLOCK_KINDS = ("source", "add", "mul", "min", "max", "mux", "demux",
               "madd", "accumulator", "convert", "probe")

# Fixed input ports per kind; None marks variadic kinds (in0, in1, ...).
_FIXED_INPUTS = {
    "source": (),
    "add": ("a", "b"),
    "mul": ("in",),
    "demux": ("in",),
    "accumulator": ("in",),
    "convert": ("in",),
    "probe": ("in",),
}
_VARIADIC = ("min", "max", "mux", "madd")


@dataclass(frozen=True)
class BlockSpec:
    id: str
    kind: str
    params: Dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Wire:
    src_block: str
    src_port: str
    dst_block: str
    dst_port: str
    latency: int = 0
    table: Optional[Dict[int, int]] = None
    table_default: int = 0


@dataclass
class Netlist:
    clocks: Dict[str, ClockRef] = field(default_factory=dict)
    blocks: Dict[str, BlockSpec] = field(default_factory=dict)
    wires: List[Wire] = field(default_factory=list)
    probes: List[Tuple[str, str]] = field(default_factory=list)

    def inputs_of(self, block_id: str) -> List[Wire]:
        return [w for w in self.wires if w.dst_block == block_id]

    def outputs_of(self, block_id: str) -> List[Wire]:
        return [w for w in self.wires if w.src_block == block_id]


def _column(line: str, token: str) -> int:
    pos = line.find(token)
    return pos + 1 if pos >= 0 else 1


def _parse_port_ref(token: str, line: str, lineno: int) -> Tuple[str, str]:
    if token.count(".") != 1:
        raise NetlistParseError(
            "expected <block>.<port>, got %r" % token,
            lineno, _column(line, token))
    block, port = token.split(".")
    if not block or not port:
        raise NetlistParseError(
            "expected <block>.<port>, got %r" % token,
            lineno, _column(line, token))
    return block, port


def _parse_int(token: str, line: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise NetlistParseError("expected integer, got %r" % token,
                                lineno, _column(line, token)) from None


def load_latency_table(path: str) -> Tuple[Dict[int, int], int]:
    """Latency table file: lines `default <d>` or `<tick> <d>`."""
    table: Dict[int, int] = {}
    default = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise NetlistParseError(
                    "latency table line needs two fields", lineno)
            if parts[0] == "default":
                default = _parse_int(parts[1], line, lineno)
            else:
                table[_parse_int(parts[0], line, lineno)] = \
                    _parse_int(parts[1], line, lineno)
    return table, default


def parse_netlist(text: str) -> Netlist:
    """Parse and validate netlist text.

    Raises NetlistParseError on the first malformed line and
    NetlistValidationError carrying every structural violation.
    """
    net = Netlist()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split()
        keyword = parts[0]
        if keyword == "clock":
            if len(parts) != 3:
                raise NetlistParseError(
                    "clock needs: clock <id> <freq>", lineno)
            cid, freq_tok = parts[1], parts[2]
            try:
                freq = Fraction(freq_tok)
            except (ValueError, ZeroDivisionError):
                raise NetlistParseError(
                    "bad frequency %r" % freq_tok, lineno,
                    _column(line, freq_tok)) from None
            if freq <= 0:
                raise NetlistParseError(
                    "frequency must be > 0", lineno, _column(line, freq_tok))
            if cid in net.clocks:
                raise NetlistParseError(
                    "duplicate clock id %r" % cid, lineno, _column(line, cid))
            net.clocks[cid] = ClockRef(cid, freq)
        elif keyword == "block":
            if len(parts) < 3:
                raise NetlistParseError(
                    "block needs: block <id> <kind> [key=value ...]", lineno)
            bid, kind = parts[1], parts[2]
            params: Dict[str, str] = {}
            for tok in parts[3:]:
                if "=" not in tok:
                    raise NetlistParseError(
                        "expected key=value, got %r" % tok, lineno,
                        _column(line, tok))
                key, val = tok.split("=", 1)
                if key in params:
                    raise NetlistParseError(
                        "duplicate param %r" % key, lineno, _column(line, tok))
                params[key] = val
            if bid in net.blocks:
                raise NetlistParseError(
                    "duplicate block id %r" % bid, lineno, _column(line, bid))
            net.blocks[bid] = BlockSpec(bid, kind, params)
        elif keyword == "wire":
            if len(parts) not in (3, 4):
                raise NetlistParseError(
                    "wire needs: wire <src>.<port> <dst>.<port> "
                    "[latency=<int>|table=<file>]", lineno)
            src_b, src_p = _parse_port_ref(parts[1], line, lineno)
            dst_b, dst_p = _parse_port_ref(parts[2], line, lineno)
            latency = 0
            table = None
            table_default = 0
            if len(parts) == 4:
                opt = parts[3]
                if opt.startswith("latency="):
                    latency = _parse_int(opt[len("latency="):], line, lineno)
                    if latency < 0:
                        raise NetlistParseError(
                            "latency must be non-negative", lineno,
                            _column(line, opt))
                elif opt.startswith("table="):
                    table, table_default = load_latency_table(
                        opt[len("table="):])
                else:
                    raise NetlistParseError(
                        "unknown wire option %r" % opt, lineno,
                        _column(line, opt))
            net.wires.append(Wire(src_b, src_p, dst_b, dst_p,
                                  latency, table, table_default))
        elif keyword == "probe":
            if len(parts) != 2:
                raise NetlistParseError(
                    "probe needs: probe <block>.<port>", lineno)
            net.probes.append(_parse_port_ref(parts[1], line, lineno))
        else:
            raise NetlistParseError(
                "unknown directive %r" % keyword, lineno)
    _validate(net)
    return net


def _required_int(block: BlockSpec, key: str, errors: List[str],
                  minimum: Optional[int] = None) -> Optional[int]:
    if key not in block.params:
        errors.append("block %r (%s) missing param %r"
                      % (block.id, block.kind, key))
        return None
    try:
        val = int(block.params[key])
    except ValueError:
        errors.append("block %r param %s=%r is not an integer"
                      % (block.id, key, block.params[key]))
        return None
    if minimum is not None and val < minimum:
        errors.append("block %r param %s=%d must be >= %d"
                      % (block.id, key, val, minimum))
        return None
    return val


def _validate(net: Netlist) -> None:
    errors: List[str] = []
    if not net.blocks:
        errors.append("no blocks")

    default_clock = "main" if "main" in net.clocks else (
        next(iter(net.clocks)) if len(net.clocks) == 1 else None)

    for block in net.blocks.values():
        if block.kind not in BLOCK_KINDS:
            errors.append("block %r has unknown kind %r"
                          % (block.id, block.kind))
            continue
        if block.kind == "source":
            _required_int(block, "value", errors, minimum=0)
            if "position" in block.params:
                _required_int(block, "position", errors, minimum=0)
        elif block.kind == "mul":
            _required_int(block, "k", errors, minimum=1)
        elif block.kind == "accumulator":
            model = block.params.get("model", "digital")
            if model not in ("digital", "toggle", "analog", "photon"):
                errors.append("block %r has unknown accumulator model %r"
                              % (block.id, model))
            if model == "toggle":
                _required_int(block, "depth", errors, minimum=1)
            for key in ("rate", "flux"):
                if key in block.params:
                    try:
                        if Fraction(block.params[key]) <= 0:
                            errors.append("block %r param %s must be > 0"
                                          % (block.id, key))
                    except (ValueError, ZeroDivisionError):
                        errors.append("block %r param %s=%r is not rational"
                                      % (block.id, key, block.params[key]))
        elif block.kind == "convert":
            if "clock" not in block.params:
                errors.append("block %r (convert) missing param 'clock'"
                              % block.id)
        clock_id = block.params.get("clock", default_clock)
        if block.kind in ("source", "accumulator", "convert"):
            if clock_id is None:
                errors.append("block %r needs an explicit clock" % block.id)
            elif clock_id not in net.clocks:
                errors.append("block %r references unknown clock %r"
                              % (block.id, clock_id))

    seen_inputs = set()
    for wire in net.wires:
        for bid in (wire.src_block, wire.dst_block):
            if bid not in net.blocks:
                errors.append("wire endpoint references unknown block %r"
                              % bid)
        if wire.src_block in net.blocks:
            if net.blocks[wire.src_block].kind == "probe":
                errors.append("probe block %r has no outputs"
                              % wire.src_block)
            elif wire.src_port != "out":
                errors.append("wire source %s.%s: only port 'out' exists"
                              % (wire.src_block, wire.src_port))
        if wire.dst_block in net.blocks:
            dst = net.blocks[wire.dst_block]
            fixed = _FIXED_INPUTS.get(dst.kind)
            if fixed is not None and wire.dst_port not in fixed:
                errors.append(
                    "block %r (%s) has no input port %r"
                    % (dst.id, dst.kind, wire.dst_port))
            elif dst.kind in _VARIADIC and not (
                    wire.dst_port.startswith("in")
                    and wire.dst_port[2:].isdigit()):
                errors.append(
                    "block %r (%s) input ports are in0, in1, ... (got %r)"
                    % (dst.id, dst.kind, wire.dst_port))
        key = (wire.dst_block, wire.dst_port)
        if key in seen_inputs:
            errors.append("input port %s.%s driven by two wires" % key)
        seen_inputs.add(key)

    for block in net.blocks.values():
        if block.kind not in BLOCK_KINDS:
            continue
        fixed = _FIXED_INPUTS.get(block.kind, ())
        wired = {w.dst_port for w in net.inputs_of(block.id)}
        for port in fixed:
            if port not in wired:
                errors.append("block %r (%s) input %r is not wired"
                              % (block.id, block.kind, port))
        if block.kind in _VARIADIC and not wired:
            errors.append("block %r (%s) has no wired inputs"
                          % (block.id, block.kind))

    for bid, port in net.probes:
        if bid not in net.blocks:
            errors.append("probe references unknown block %r" % bid)
        elif port != "out" and (bid, port) not in {
                (w.dst_block, w.dst_port) for w in net.wires}:
            errors.append("probe references unknown port %s.%s" % (bid, port))

    if not errors and _has_cycle(net):
        errors.append("netlist contains a cycle (feed-forward only)")

    if errors:
        raise NetlistValidationError(errors)


def _has_cycle(net: Netlist) -> bool:
    succ: Dict[str, List[str]] = {bid: [] for bid in net.blocks}
    indeg = {bid: 0 for bid in net.blocks}
    for wire in net.wires:
        succ[wire.src_block].append(wire.dst_block)
        indeg[wire.dst_block] += 1
    frontier = [bid for bid, d in indeg.items() if d == 0]
    visited = 0
    while frontier:
        bid = frontier.pop()
        visited += 1
        for nxt in succ[bid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                frontier.append(nxt)
    return visited != len(net.blocks)
