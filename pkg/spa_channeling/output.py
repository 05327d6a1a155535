"""CSV (and optional JSON mirror) writers for figure data."""

import csv
import json
import logging
import math
from pathlib import Path

logger = logging.getLogger(__name__)


def config_header(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True, default=_jsonable)


def _jsonable(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


def _cell(value):
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return value


def write_table(path: Path, columns: list[str], rows: list, config: dict, json_mirror: bool = False) -> list[Path]:
    """Write rows under a `#` config line and a header; returns every file written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(config_header(config) + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    written = [path]
    logger.info("wrote %d rows to %s", len(rows), path)

    if json_mirror:
        json_path = path.with_suffix(".json")
        payload = {
            "config": config,
            "columns": columns,
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        json_path.write_text(json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n")
        written.append(json_path)
        logger.info("wrote %s", json_path)
    return written


def _json_cell(value):
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value
