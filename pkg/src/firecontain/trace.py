"""Line-delimited game traces: canonical serialization and replay validation.

A trace is one JSON record per line: a header (graph, initial fire,
schedule, horizon), one record per turn {n, protected, fire_size,
budget}, and a result record.  Serialization is canonical (sorted keys,
fixed separators, ASCII), so identical games produce byte-identical
trace files.

The validator replays the whole game from the header using nothing but
the graph provider's neighbor oracle: it recomputes budgets, re-spreads
the fire, and checks every recorded count, so it accepts a trace only
if the recorded play was legal and the recorded sizes are exactly
reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import GraphProvider
from .engine import ContainmentReport

TRACE_FORMAT = 1

_OUTCOMES = ("contained", "escaped-horizon", "undetermined")


def trace_header(
    version: str,
    config_hash: str,
    graph: dict,
    fire: list[str],
    schedule_record: dict,
    horizon: int,
    strategy: dict,
    escape_radius: Optional[int] = None,
) -> dict:
    rec = {
        "type": "header",
        "format": TRACE_FORMAT,
        "version": version,
        "config_hash": config_hash,
        "graph": graph,
        "fire": sorted(fire),
        "schedule": schedule_record,
        "horizon": horizon,
        "strategy": strategy,
    }
    if escape_radius is not None:
        rec["escape_radius"] = escape_radius
    return rec


def game_records(header: dict, report: ContainmentReport) -> list[dict]:
    """Full trace for a finished game: header, one turn each, result."""
    records = [header]
    records.extend(t.to_record() for t in report.per_turn)
    records.append(report.to_record())
    return records


def dump_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def render_trace(records: list[dict]) -> str:
    return "".join(dump_line(r) + "\n" for r in records)


def write_trace(path, records: list[dict]) -> None:
    with open(path, "w", encoding="ascii") as fp:
        fp.write(render_trace(records))


def parse_trace(text: str) -> list[dict]:
    """Parse trace text into records; raises ValueError naming the line."""
    records = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {i}: not valid JSON ({exc.msg})") from exc
        if not isinstance(rec, dict):
            raise ValueError(f"line {i}: record is not an object")
        records.append(rec)
    return records


@dataclass(frozen=True)
class TraceReport:
    valid: bool
    reason: Optional[str]
    record: Optional[int]  # 1-based index of the offending record
    turns: int

    def to_record(self) -> dict:
        return {
            "type": "validation",
            "valid": self.valid,
            "reason": self.reason,
            "record": self.record,
            "turns": self.turns,
        }


def _fail(reason: str, record: Optional[int], turns: int) -> TraceReport:
    return TraceReport(valid=False, reason=reason, record=record, turns=turns)


def _check_header(header: dict) -> Optional[str]:
    if header.get("type") != "header":
        return "first record is not a header"
    if header.get("format") != TRACE_FORMAT:
        return f"unsupported trace format {header.get('format')!r}"
    fire = header.get("fire")
    if not isinstance(fire, list) or not fire or not all(isinstance(v, str) for v in fire):
        return "header fire must be a non-empty list of vertex ids"
    sched = header.get("schedule")
    if not isinstance(sched, dict) or "C" not in sched or "d" not in sched:
        return "header schedule must carry C and d"
    try:
        c = Fraction(str(sched["C"]))
    except (ValueError, ZeroDivisionError):
        return f"schedule C is not a rational: {sched['C']!r}"
    if c < 0:
        return f"schedule C must be >= 0, got {c}"
    d = sched["d"]
    if not isinstance(d, int) or d < 0:
        return f"schedule d must be a non-negative integer, got {d!r}"
    horizon = header.get("horizon")
    if not isinstance(horizon, int) or horizon < 0:
        return f"header horizon must be a non-negative integer, got {horizon!r}"
    escape = header.get("escape_radius")
    if escape is not None and (not isinstance(escape, int) or escape < 1):
        return f"header escape_radius must be a positive integer, got {escape!r}"
    return None


def validate_trace(
    trace: Union[str, list[dict]],
    provider: Optional[GraphProvider] = None,
) -> TraceReport:
    """Replay a trace from scratch and check every recorded fact.

    The replay is independent of the game engine: it walks the
    provider's neighbor oracle directly.  `provider` overrides the
    graph named in the header (needed when the header's graph spec is
    absent or not buildable here).
    """
    if isinstance(trace, str):
        try:
            records = parse_trace(trace)
        except ValueError as exc:
            return _fail(str(exc), None, 0)
    else:
        records = trace
    if not records:
        return _fail("empty trace", None, 0)

    header = records[0]
    reason = _check_header(header)
    if reason:
        return _fail(reason, 1, 0)
    if provider is None:
        graph_spec = header.get("graph")
        if not isinstance(graph_spec, dict):
            return _fail("header has no graph spec and no provider was given", 1, 0)
        from .config import build_provider  # local import; config depends on trace

        try:
            provider = build_provider(graph_spec)
        except Exception as exc:
            return _fail(f"cannot build graph from header: {exc}", 1, 0)

    c = Fraction(str(header["schedule"]["C"]))
    d = header["schedule"]["d"]
    horizon = header["horizon"]
    escape_radius = header.get("escape_radius")

    try:
        for v in header["fire"]:
            provider.validate(v)
    except Exception as exc:
        return _fail(f"initial fire invalid: {exc}", 1, 0)
    burning = set(header["fire"])
    protected: set[str] = set()

    def spread_targets() -> set[str]:
        out = set()
        for v in burning:
            for w in provider.neighbors(v):
                if w not in burning and w not in protected:
                    out.add(w)
        return out

    contained_at = None
    if not spread_targets():
        contained_at = 0

    turns = 0
    idx = 1
    body = records[1:]
    result = None
    for rec in body:
        idx += 1
        kind = rec.get("type")
        if kind == "result":
            result = rec
            if idx != len(records):
                return _fail("records after the result record", idx, turns)
            break
        if kind != "turn":
            return _fail(f"unexpected record type {kind!r}", idx, turns)
        n = rec.get("n")
        if n != turns + 1:
            return _fail(f"turn records out of order: expected n={turns + 1}, got {n!r}", idx, turns)
        if n > horizon:
            return _fail(f"turn {n} exceeds horizon {horizon}", idx, turns)
        budget = math.floor(c * n**d)
        if rec.get("budget") != budget:
            return _fail(
                f"turn {n}: recorded budget {rec.get('budget')!r} != floor(C*n^d) = {budget}",
                idx,
                turns,
            )
        w = rec.get("protected")
        if not isinstance(w, list) or not all(isinstance(v, str) for v in w):
            return _fail(f"turn {n}: protected must be a list of vertex ids", idx, turns)
        if w != sorted(w):
            return _fail(f"turn {n}: protected list is not sorted", idx, turns)
        if len(set(w)) != len(w):
            return _fail(f"turn {n}: duplicate protected vertices", idx, turns)
        if len(w) > budget:
            return _fail(f"turn {n}: protected {len(w)} vertices with budget {budget}", idx, turns)
        for v in w:
            try:
                provider.validate(v)
            except Exception as exc:
                return _fail(f"turn {n}: invalid vertex {v!r} ({exc})", idx, turns)
            if v in burning:
                return _fail(f"turn {n}: protected a burning vertex {v!r}", idx, turns)
            if v in protected:
                return _fail(f"turn {n}: re-protected {v!r}", idx, turns)
        protected.update(w)
        burning |= spread_targets()
        if rec.get("fire_size") != len(burning):
            return _fail(
                f"turn {n}: recorded fire_size {rec.get('fire_size')!r} != replayed {len(burning)}",
                idx,
                turns,
            )
        turns = n
        if contained_at is None and not spread_targets():
            contained_at = n

    if result is None:
        return _fail("missing result record", None, turns)
    outcome = result.get("outcome")
    if outcome not in _OUTCOMES:
        return _fail(f"unknown outcome {outcome!r}", idx, turns)
    if result.get("contained_at") != contained_at:
        return _fail(
            f"result contained_at {result.get('contained_at')!r} != replayed {contained_at}",
            idx,
            turns,
        )
    if (outcome == "contained") != (contained_at is not None):
        return _fail(
            f"outcome {outcome!r} inconsistent with contained_at {contained_at!r}",
            idx,
            turns,
        )
    if result.get("final_fire_size") != len(burning):
        return _fail(
            f"result final_fire_size {result.get('final_fire_size')!r} != replayed {len(burning)}",
            idx,
            turns,
        )
    if result.get("total_protected") != len(protected):
        return _fail(
            f"result total_protected {result.get('total_protected')!r} != replayed {len(protected)}",
            idx,
            turns,
        )
    if result.get("horizon") != horizon:
        return _fail(
            f"result horizon {result.get('horizon')!r} != header horizon {horizon}",
            idx,
            turns,
        )
    if outcome == "escaped-horizon":
        if escape_radius is None:
            return _fail("outcome escaped-horizon but header has no escape_radius", idx, turns)
        from .core import ball

        b = ball(provider, header["fire"], escape_radius)
        if not burning.intersection(b.sphere(escape_radius)):
            return _fail(
                f"outcome escaped-horizon but the fire never reached distance {escape_radius}",
                idx,
                turns,
            )
    return TraceReport(valid=True, reason=None, record=None, turns=turns)
