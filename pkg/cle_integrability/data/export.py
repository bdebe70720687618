# cle_integrability/data/export.py
"""
Output layer: run manifests and the CSV / JSON / DOT writers behind the CLI.

Files written with --out get their manifest in a sibling <out>.manifest.json so
the data file itself is byte-identical across reruns; output on stdout carries
the manifest inline (JSON) or on stderr (CSV, DOT).
"""

import json
import math
import sys
from typing import Any, Dict

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from cle_integrability.config import FLOAT_FORMAT, VERIFY_CSV_COLUMNS
from cle_integrability.core.errors import UsageError


class RunManifest(BaseModel):
    """Everything needed to rerun a command; wall_time is the only non-reproducible field."""
    model_config = ConfigDict(frozen=True)

    command_line: str
    seed: int
    replicas: int
    params: Dict[str, Any]
    code_version: str
    wall_time: float


class EvalRecord(BaseModel):
    """One evaluated law; +inf (a divergent moment) is written as the string "Infinity", never null."""
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="strings")

    formula: str
    params: Dict[str, Any]
    value: float
    anchor: str = Field(serialization_alias="paper_anchor")
    manifest: RunManifest


def manifest_path(out):
    return f"{out}.manifest.json"


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_manifest(manifest, out, inline):
    body = manifest.model_dump_json(indent=2) + "\n"
    if out:
        _emit(body, manifest_path(out))
    elif not inline:
        sys.stderr.write(body)


def rows_frame(rows):
    """CheckResult rows as a DataFrame in the documented column order."""
    return pd.DataFrame([r.as_row() for r in rows], columns=VERIFY_CSV_COLUMNS)


_NON_FINITE = {math.inf: "Infinity", -math.inf: "-Infinity"}


def _json_number(value):
    # same spelling pydantic uses for EvalRecord
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "NaN"
        return _NON_FINITE.get(value, value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _frame_text(frame, fmt, manifest, inline_manifest):
    if fmt == "csv":
        return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if fmt == "json":
        records = [{k: _json_number(v) for k, v in r.items()} for r in frame.to_dict(orient="records")]
        doc = {"rows": records}
        if inline_manifest:
            doc["manifest"] = manifest.model_dump()
        return json.dumps(doc, indent=2) + "\n"
    raise UsageError(f"unknown table format '{fmt}' (csv or json)")


def write_table(frame, manifest, out=None, fmt="csv"):
    """Write a DataFrame as CSV or as a JSON document {"rows": [...]}; returns the target."""
    inline = out is None and fmt == "json"
    _emit(_frame_text(frame, fmt, manifest, inline), out)
    _emit_manifest(manifest, out, inline)
    return out or "<stdout>"


def write_rows(rows, manifest, out=None, fmt="csv"):
    """Verify report: every row is written, including failures."""
    return write_table(rows_frame(rows), manifest, out, fmt)


def write_looptree(tree, manifest, out=None, fmt="json"):
    if fmt == "json":
        doc = tree.to_json_dict()
        inline = out is None
        if inline:
            doc["manifest"] = manifest.model_dump()
        text = json.dumps(doc, indent=2) + "\n"
    elif fmt == "dot":
        inline = False
        text = tree.to_dot()
    else:
        raise UsageError(f"unknown looptree format '{fmt}' (json or dot)")
    _emit(text, out)
    _emit_manifest(manifest, out, inline)
    return out or "<stdout>"


def write_eval(record, out=None):
    _emit(record.model_dump_json(by_alias=True) + "\n", out)
    return out or "<stdout>"
