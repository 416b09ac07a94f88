"""Report models, JSON and text rendering, and verdict exit codes."""

import json
from importlib import resources
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1

SCHEMA_RESOURCE = 'schema/report.schema.json'


class Result(BaseModel):
    """One computed result for one named object.

    Command-specific fields are kept as extra attributes so they appear at
    the top level of the JSON record next to ``name``, ``kind`` and ``verdict``.
    """

    model_config = ConfigDict(extra='allow')

    name: str
    kind: str
    verdict: Optional[bool] = None

    @property
    def fields(self) -> Dict[str, Any]:
        return dict(self.model_extra or {})


class Report(BaseModel):
    """Envelope written for every command."""

    command: str
    source: str
    results: List[Result] = Field(default_factory=list)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def verdicts(self) -> List[Optional[bool]]:
        return [r.verdict for r in self.results]


def exit_code(report: Report, assert_mode: bool) -> int:
    """0 unless ``assert_mode`` is set and some verdict is false."""
    if assert_mode and any(v is False for v in report.verdicts()):
        return EXIT_ASSERTION_FAILED
    return EXIT_OK


def load_schema() -> Dict[str, Any]:
    text = resources.files('rht').joinpath(SCHEMA_RESOURCE).read_text(encoding='utf-8')
    return json.loads(text)


# -- value helpers ------------------------------------------------------------


def bidegree_key(bidegree: Tuple[int, int]) -> str:
    return f"{bidegree[0]},{bidegree[1]}"


def bidegree_dims(dims: Mapping[Tuple[int, int], int], skip_zero: bool = True) -> Dict[str, int]:
    """``{(p, q): d}`` as ``{"p,q": d}`` in sorted order."""
    return {bidegree_key(k): v for k, v in sorted(dims.items()) if v or not skip_zero}


def degree_dims(dims: Mapping[int, int]) -> Dict[str, int]:
    return {str(k): v for k, v in sorted(dims.items())}


def bidegree_list(bidegrees: Sequence[Tuple[int, int]]) -> List[List[int]]:
    return [[p, q] for p, q in bidegrees]


# -- text ---------------------------------------------------------------------


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return '-'
    if isinstance(value, (list, tuple)):
        return '(' + ', '.join(_format_value(v) for v in value) + ')'
    if isinstance(value, dict):
        return ', '.join(f"{k}: {_format_value(v)}" for k, v in value.items())
    return str(value)


def render_text(report: Report) -> str:
    """Human-readable report: one header per result, then ``key: value`` lines."""
    lines = [f"{report.command} {report.source}"]
    for result in report.results:
        header = f"{result.name} ({result.kind})"
        if result.verdict is not None:
            header += f": {_format_value(result.verdict)}"
        lines.append(header)
        for key, value in result.fields.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"  {key.replace('_', '-')}:")
                lines.extend(f"    {_format_value(item)}" for item in value)
            else:
                lines.append(f"  {key.replace('_', '-')}: {_format_value(value)}")
    return '\n'.join(lines)
