# utils/output.py
"""
CSV/JSON writers used by the CLI.

CSV: ``,`` delimiter, ``.`` decimal point, header row, LF line endings.
"""
import csv
import io
import json
import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def _format_cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def rows_to_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=',', lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(value) for value in row])
    return buffer.getvalue()


def to_json(payload):
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + '\n'


def _json_default(value):
    # numpy scalars and arrays
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_text(path, text):
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as handle:
        handle.write(text)
    logger.info(f"✓ Wrote {path}")
    return path
