# harness/report.py
"""
Report rendering. Output depends only on the report contents: no
timestamps, sorted keys, fixed float formatting.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from harness.schemas import CSV_COLUMNS, OutputFormat, Report
from harness.verify import VerifySummary
from search.bounded import BoundedResult, Leaf, ProtocolTree
from search.zero_comm import ZeroCommResult

FLOAT_FORMAT = ".12g"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def _row_values(report: Report) -> list[dict[str, Any]]:
    return [row.model_dump(by_alias=True) for row in report.rows]


def to_csv(report: Report) -> str:
    buffer = io.StringIO()
    for key, value in sorted(report.header.model_dump().items()):
        if isinstance(value, dict):
            value = ",".join(f"{k}={v}" for k, v in sorted(value.items()))
        buffer.write(f"# {key}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in _row_values(report):
        writer.writerow([_cell(row[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def to_json(report: Report) -> str:
    payload = {
        "header": report.header.model_dump(),
        "rows": [{column: row[column] for column in CSV_COLUMNS} for row in _row_values(report)],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render(report: Report, fmt: OutputFormat) -> str:
    return to_json(report) if fmt is OutputFormat.JSON else to_csv(report)


def jsonable(value: Any) -> Any:
    """Fractions as "p/q" strings, tuples as lists, recursively."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = [jsonable(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    return value


# ─────────────────────────────────────────────
# Search results
# ─────────────────────────────────────────────
def tree_to_dict(tree: ProtocolTree) -> dict[str, Any]:
    if isinstance(tree, Leaf):
        return {"alice": jsonable(tree.alice_map), "bob": jsonable(tree.bob_map)}
    return {
        "speaker": tree.speaker.value,
        "sends_0": jsonable(tree.zero_set),
        "on_0": tree_to_dict(tree.child0),
        "on_1": tree_to_dict(tree.child1),
    }


def search_report(zero: ZeroCommResult, bounded: BoundedResult | None) -> str:
    payload: dict[str, Any] = {
        "task": zero.task,
        "note": "deterministic optimum; equals the shared-randomness optimum for this input distribution",
        "zero_communication": {
            "status": zero.status,
            "success": jsonable(zero.success),
            "worst_case": jsonable(zero.worst_case),
            "perfect": zero.perfect,
            "explored": zero.explored,
            "strategy": None
            if zero.strategy is None
            else {"alice": jsonable(zero.strategy.alice_map), "bob": jsonable(zero.strategy.bob_map)},
        },
    }
    if bounded is not None:
        payload["bounded"] = {
            "budget": bounded.budget,
            "success": jsonable(bounded.success),
            "worst_case": jsonable(bounded.worst_case),
            "states": bounded.states,
            "tree": tree_to_dict(bounded.tree),
        }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ─────────────────────────────────────────────
# Verification summaries
# ─────────────────────────────────────────────
def verify_report(summary: VerifySummary) -> str:
    lines = [f"# suite: {summary.suite}"]
    if summary.seed is not None:
        lines.append(f"# seed: {summary.seed}")
        lines.append(f"# seed_source: {summary.seed_source}")
    for check in summary.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"{status}  [{check.tag}] {check.name}: measured {check.measured}, bound {check.bound}")
    failed = sum(1 for c in summary.checks if not c.passed)
    lines.append(f"# {len(summary.checks) - failed} passed, {failed} failed")
    return "\n".join(lines) + "\n"
