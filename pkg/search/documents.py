# search/documents.py
"""
JSON task documents for the search command.

A document names a built-in task:

    {"relation": "dj", "params": {"n": 4}}

or spells a task out with explicit element lists and a table of allowed
(x, y, a, b) quadruples:

    {"name": "and", "X": [0, 1], "Y": [0, 1], "A": [0, 1], "B": [0, 1],
     "relation": [[0, 0, 0, 0], [1, 1, 1, 1], ...],
     "promise": [[0, 0], [1, 1]],
     "distribution": [[0, 0, "1/2"], [1, 1, "1/2"]]}
"""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError, model_validator

from core.errors import ArgumentError, ConfigError
from search.tasks import BUILTIN_TASKS, TaskSpec, builtin_task

logger = logging.getLogger(__name__)


def _freeze(value: Any) -> Any:
    """JSON lists become tuples so elements can be dictionary keys."""
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


class TaskDocument(BaseModel):
    name: str = "custom"
    relation: str | list[list[Any]]
    params: dict[str, Any] = Field(default_factory=dict)
    X: list[Any] | None = None
    Y: list[Any] | None = None
    A: list[Any] | None = None
    B: list[Any] | None = None
    promise: list[list[Any]] | None = None
    distribution: list[list[Any]] | None = None

    @model_validator(mode="after")
    def _explicit_sets(self) -> TaskDocument:
        if isinstance(self.relation, str):
            return self
        missing = [k for k in ("X", "Y", "A", "B") if getattr(self, k) is None]
        if missing:
            raise ValueError(f"explicit relations need {', '.join(missing)}")
        for row in self.relation:
            if len(row) != 4:
                raise ValueError(f"relation rows are (x, y, a, b), got {row}")
        return self

    def to_task(self) -> TaskSpec:
        weights = self._weights()
        if isinstance(self.relation, str):
            try:
                task = builtin_task(self.relation, **self.params)
                return task.with_weights(weights) if weights is not None else task
            except ArgumentError as exc:
                raise ConfigError(str(exc), location="params") from exc

        allowed = {tuple(_freeze(v) for v in row) for row in self.relation}
        promised = (
            {(_freeze(x), _freeze(y)) for x, y in self.promise} if self.promise is not None else None
        )
        try:
            return TaskSpec(
                name=self.name,
                xs=tuple(_freeze(v) for v in self.X),
                ys=tuple(_freeze(v) for v in self.Y),
                alice_outputs=tuple(_freeze(v) for v in self.A),
                bob_outputs=tuple(_freeze(v) for v in self.B),
                relation=lambda x, y, a, b: (x, y, a, b) in allowed,
                promise=(lambda x, y: (x, y) in promised) if promised is not None else None,
                weights=weights,
            )
        except ArgumentError as exc:
            raise ConfigError(str(exc), location=self.name) from exc

    def _weights(self) -> dict[tuple[Any, Any], Fraction] | None:
        if self.distribution is None:
            return None
        weights: dict[tuple[Any, Any], Fraction] = {}
        for i, row in enumerate(self.distribution):
            if len(row) != 3:
                raise ConfigError("distribution rows are (x, y, weight)", location=f"distribution[{i}]")
            try:
                weights[(_freeze(row[0]), _freeze(row[1]))] = Fraction(str(row[2]))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(str(exc), location=f"distribution[{i}]") from exc
        return weights


def load_task_document(source: str, params: dict[str, Any] | None = None) -> TaskSpec:
    """A built-in task name, a path to a JSON document, or the JSON text itself."""
    if source in BUILTIN_TASKS:
        return TaskDocument(name=source, relation=source, params=params or {}).to_task()
    try:
        is_file = Path(source).is_file()
    except OSError:  # JSON text longer than a file name
        is_file = False
    text = Path(source).read_text(encoding="utf-8") if is_file else source
    try:
        document = TaskDocument.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not a task name, file or JSON document: {exc}", location=source) from exc
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "document"
        raise ConfigError(first["msg"], location=location) from exc
    logger.info("loaded task document %s", document.name)
    return document.to_task()
