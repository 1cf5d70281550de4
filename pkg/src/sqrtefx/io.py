"""JSON instance and allocation files, JSONL traces.

Every document carries a ``version`` tag. Traces are one JSON object per
line (a header line, then one line per event, then a closing verdict) so a
trace cut off mid-run still parses up to the last complete line.
"""

from __future__ import annotations

import json
from pathlib import Path

from .engine import RuleEvent
from .errors import InvalidInstanceError, MalformedInputError
from .model import Instance, Verdict

INSTANCE_VERSION = "sqrtefx-instance/1"
ALLOCATION_VERSION = "sqrtefx-allocation/1"
TRACE_VERSION = "sqrtefx-trace/1"


def instance_to_dict(inst: Instance) -> dict:
    return {
        "version": INSTANCE_VERSION,
        "n": inst.n,
        "goods": [{"id": g, "values": [{"agent": a, "value": v} for a, v in entries]}
                  for g, entries in enumerate(inst.valuation)],
    }


def instance_from_dict(d: dict) -> Instance:
    if not isinstance(d, dict):
        raise MalformedInputError("instance document must be a JSON object")
    try:
        if d.get("version") != INSTANCE_VERSION:
            raise MalformedInputError(f"unknown instance version {d.get('version')!r}")
        goods = d["goods"]
        ids = [g["id"] for g in goods]
        if ids != list(range(len(goods))):
            raise MalformedInputError("good ids must be 0..m-1 in order")
        valuation = []
        for g in goods:
            entries = [(e["agent"], e["value"]) for e in g["values"]]
            if any(not isinstance(v, int) or v < 0 for _, v in entries):
                raise MalformedInputError(f"good {g['id']}: values must be nonnegative ints")
            if sum(1 for _, v in entries if v > 0) > 2:
                raise MalformedInputError(f"good {g['id']} is relevant to more than 2 agents")
            valuation.append(tuple(entries))
        return Instance(d["n"], len(goods), tuple(valuation))
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"bad instance document: {exc!r}") from exc
    except InvalidInstanceError as exc:
        raise MalformedInputError(str(exc)) from exc


def allocation_to_dict(alloc: dict, alpha_squared=None) -> dict:
    d = {"version": ALLOCATION_VERSION,
         "allocation": {str(i): sorted(alloc[i]) for i in sorted(alloc)}}
    if alpha_squared is not None:
        d["alpha_squared"] = list(alpha_squared)
    return d


def allocation_from_dict(d: dict) -> dict:
    if not isinstance(d, dict):
        raise MalformedInputError("allocation document must be a JSON object")
    try:
        if d.get("version") != ALLOCATION_VERSION:
            raise MalformedInputError(f"unknown allocation version {d.get('version')!r}")
        return {int(k): frozenset(int(g) for g in v) for k, v in d["allocation"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, MalformedInputError):
            raise
        raise MalformedInputError(f"bad allocation document: {exc!r}") from exc


def _render(value, depth: int) -> str:
    pad = " " * (depth + 1)
    if isinstance(value, dict) and value:
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_render(v, depth + 1)}"
                          for k, v in value.items())
        return "{\n" + body + "\n" + " " * depth + "}"
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        body = ",\n".join(pad + json.dumps(v, separators=(", ", ": ")) for v in value)
        return "[\n" + body + "\n" + " " * depth + "]"
    return json.dumps(value, separators=(", ", ": "))


def dumps(doc: dict) -> str:
    """One entry per line: one line per good, one line per agent's bundle."""
    return _render(doc, 0) + "\n"


def _load(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc


def load_instance(path) -> Instance:
    return instance_from_dict(_load(path))


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(instance_to_dict(inst)), encoding="utf-8")


def load_allocation(path) -> dict:
    return allocation_from_dict(_load(path))


def save_allocation(alloc: dict, path, alpha_squared=None) -> None:
    Path(path).write_text(dumps(allocation_to_dict(alloc, alpha_squared)), encoding="utf-8")


def event_from_dict(d: dict) -> RuleEvent:
    try:
        return RuleEvent(
            d["rule"], tuple(d["actors"]), tuple(tuple(m) for m in d["moved"]),
            tuple(d["finalized"]), d["welfare_before"], d["welfare_after"],
            d["pre_digest"], d["state_digest"], d.get("note", ""),
            tuple(Verdict.from_dict(v) for v in d.get("properties", ())))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad trace event: {exc!r}") from exc


def trace_lines(events, verdict: Verdict | None = None) -> list:
    lines = [json.dumps({"type": "header", "version": TRACE_VERSION}, sort_keys=True)]
    lines += [json.dumps(e.to_dict(), sort_keys=True) for e in events]
    if verdict is not None:
        lines.append(json.dumps({"type": "verdict", **verdict.to_dict()}, sort_keys=True))
    return lines


def write_trace(path, events, verdict: Verdict | None = None) -> None:
    Path(path).write_text("\n".join(trace_lines(events, verdict)) + "\n", encoding="utf-8")


def read_trace(path) -> tuple:
    """Return ``(events, verdicts)``; a truncated final line is ignored."""
    events, verdicts = [], []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for k, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            if k == len(lines) - 1:
                break
            raise MalformedInputError(f"trace line {k + 1}: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedInputError(f"trace line {k + 1}: not a JSON object")
        kind = obj.get("type")
        if kind == "header":
            if obj.get("version") != TRACE_VERSION:
                raise MalformedInputError(f"unknown trace version {obj.get('version')!r}")
        elif kind == "event":
            events.append(event_from_dict(obj))
        elif kind == "verdict":
            verdicts.append(Verdict.from_dict(obj))
        else:
            raise MalformedInputError(f"trace line {k + 1}: unknown type {kind!r}")
    return events, verdicts
