"""
Report writing: JSON envelope, schema validation and CSV sidecars
"""

import logging
import math
from decimal import Decimal
from enum import Enum
from functools import lru_cache
from pathlib import Path

import jsonschema
import numpy as np
import pandas as pd
import simplejson
import yaml
from django.conf import settings

from ..exceptions import EXIT_FAILS, EXIT_INDETERMINATE, EXIT_OK, InvalidArgumentError
from ..kernel_analysis import Verdict

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def overall_verdict(verdicts) -> tuple[Verdict, int]:
    """
    Any Fails/TrendFails -> exit 1; otherwise any Indeterminate -> exit 2; otherwise exit 0
    """
    verdicts = [Verdict(v) for v in verdicts]
    if any(v.is_negative for v in verdicts):
        worst = Verdict.FAILS if Verdict.FAILS in verdicts else Verdict.TREND_FAILS
        return worst, EXIT_FAILS
    if any(v is Verdict.INDETERMINATE for v in verdicts):
        return Verdict.INDETERMINATE, EXIT_INDETERMINATE
    best = Verdict.HOLDS if verdicts and all(v is Verdict.HOLDS for v in verdicts) else Verdict.TREND_HOLDS
    return best, EXIT_OK


def plain(value):
    """
    Convert report payloads to plain JSON values: numpy scalars and arrays,
    enums, tuples and paths. Non-finite floats become None.
    """
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [plain(item) for item in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": plain(value.real), "im": plain(value.imag)}
    if isinstance(value, Path):
        return str(value)
    return value


def _decimals(value):
    """Floats at 17 significant digits, as decimals, so output bytes are fixed."""
    if isinstance(value, dict):
        return {key: _decimals(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_decimals(item) for item in value]
    if isinstance(value, float):
        return Decimal(format(value, ".17g"))
    return value


@lru_cache(maxsize=4)
def load_schema(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return yaml.safe_load(fh)


def render_report(command: str, payload: dict, config: dict, verdicts) -> tuple[str, int]:
    """
    Build the report envelope, validate it against the report schema and return
    (json text, exit code).
    """
    verdict, exit_code = overall_verdict(verdicts)
    envelope = plain(
        {
            **payload,
            "schema": SCHEMA_VERSION,
            "command": command,
            "seed": config["seed"],
            "config": {key: value for key, value in config.items() if key not in ("out", "csv_dir")},
            "verdict": verdict,
            "exit_code": exit_code,
        }
    )
    schema = load_schema(str(settings.HEREDITARY["report_schema"]))
    try:
        jsonschema.validate(envelope, schema)
    except jsonschema.ValidationError as exc:
        raise InvalidArgumentError(f"report does not match the report schema: {exc.message}") from exc
    text = simplejson.dumps(_decimals(envelope), use_decimal=True, sort_keys=True, ignore_nan=True, indent=2)
    return text + "\n", exit_code


def write_text(text: str, out: str | Path) -> Path:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def write_tables(tables: dict[str, pd.DataFrame], csv_dir: str | Path, prefix: str) -> list[str]:
    """
    One CSV per trend table, named <prefix>_<table>.csv; returns the written paths
    """
    directory = Path(csv_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, table in sorted(tables.items()):
        path = directory / f"{prefix}_{name}.csv"
        table.to_csv(path, index=False, float_format="%.17g")
        written.append(str(path))
        logger.debug("wrote %s (%d rows)", path, len(table))
    return written


def probe_tables(samples: pd.DataFrame) -> dict[str, pd.DataFrame]:
    """Probe samples split per vector, columns (n, value)."""
    return {
        f"v{int(index)}": group[["n", "value"]].reset_index(drop=True)
        for index, group in samples.groupby("vector", sort=True)
    }
