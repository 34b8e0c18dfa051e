"""
Report serialization.

JSON reports carry a schema version and sorted keys; CSV reports go through
pandas with a fixed column order. Both are written atomically (temp file in the
target directory, then os.replace) with UTF-8 and LF line endings, so a rerun
of the same command produces byte-identical files.
"""

import json
import os
import tempfile
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional

import pandas as pd

SCHEMA_VERSION = 1


def to_jsonable(value: Any) -> Any:
    """Convert report values (dataclasses, Fractions, tuples) into JSON types."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def build_report(command: str, params: Dict, results: Any, checks: Optional[List] = None) -> Dict:
    """Assemble the versioned top-level report object."""
    return {
        'schema': SCHEMA_VERSION,
        'command': command,
        'params': to_jsonable(params),
        'results': to_jsonable(results),
        'checks': to_jsonable(checks or []),
    }


def render_json(report: Dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + '\n'


def render_csv(rows: List[Dict], columns: List[str]) -> str:
    """Render rows with a fixed column order."""
    frame = pd.DataFrame([to_jsonable(row) for row in rows], columns=columns)
    return frame.to_csv(index=False, lineterminator='\n')


def write_atomic(path: str, text: str) -> None:
    """Write text to path via a temp file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-', suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
