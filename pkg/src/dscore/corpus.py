"""Corpus ingestion, dataset filtering, and prompt emission.

Corpora are JSONL: one function record per line with id, project,
original_decompiled, optional candidates (tag -> source) and provenance.
"""

import json
import os
from dataclasses import dataclass, field

from .errors import ParseError, SchemaError
from .frontend.metrics import SourceMetrics, compute_metrics
from .frontend.parser import parse_function

PROMPT_SYSTEM = (
    "You are a helpful assistant for improving the decompiled result from the "
    "user. The user will input the decompiled result from Ghidra. Please "
    "improve its readability while preserving its semantics. Please do not "
    "add comments. Please just output the improved code."
)


@dataclass
class FunctionRecord:
    id: str
    original_decompiled: str
    project: str = ""
    candidates: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    metrics: SourceMetrics = None
    parse_ok: bool = True
    parse_error: str = ""

    def to_json(self):
        out = {
            "id": self.id,
            "project": self.project,
            "original_decompiled": self.original_decompiled,
        }
        if self.candidates:
            out["candidates"] = dict(self.candidates)
        if self.provenance:
            out["provenance"] = dict(self.provenance)
        return out


@dataclass
class Corpus:
    records: list
    errors: list = field(default_factory=list)   # (line_no, message)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def record_from_dict(data, line_no=0) -> FunctionRecord:
    if not isinstance(data, dict):
        raise SchemaError(f"line {line_no}: record must be an object")
    for key in ("id", "original_decompiled"):
        if key not in data:
            raise SchemaError(f"line {line_no}: missing required field {key!r}")
        if not isinstance(data[key], str) or not data[key].strip():
            raise SchemaError(f"line {line_no}: field {key!r} must be a non-empty string")
    candidates = data.get("candidates") or {}
    if not isinstance(candidates, dict) or \
            not all(isinstance(v, str) for v in candidates.values()):
        raise SchemaError(f"line {line_no}: candidates must map tag -> source text")
    record = FunctionRecord(
        id=data["id"],
        original_decompiled=data["original_decompiled"],
        project=str(data.get("project", "")),
        candidates=dict(candidates),
        provenance=dict(data.get("provenance") or {}),
    )
    try:
        fn = parse_function(record.original_decompiled)
        record.metrics = compute_metrics(fn, record.original_decompiled)
    except ParseError as ex:
        record.parse_ok = False
        record.parse_error = str(ex)
    return record


def ingest(path) -> Corpus:
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    records = []
    errors = []
    seen_ids = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as ex:
                errors.append((line_no, f"invalid JSON: {ex}"))
                continue
            try:
                record = record_from_dict(data, line_no)
            except SchemaError as ex:
                errors.append((line_no, str(ex)))
                continue
            if record.id in seen_ids:
                errors.append((line_no, f"duplicate id {record.id!r}"))
                continue
            seen_ids.add(record.id)
            records.append(record)
    return Corpus(records, errors)


def filter_dataset(corpus: Corpus, min_lines: int = 20, min_cc: int = 4):
    """Keep records with >= min_lines effective lines and CC >= min_cc."""
    kept = []
    dropped = []
    for record in corpus.records:
        m = record.metrics
        if record.parse_ok and m is not None and \
                m.effective_lines >= min_lines and m.cyclomatic_complexity >= min_cc:
            kept.append(record)
        else:
            dropped.append(record)
    return Corpus(kept, corpus.errors), dropped


def emit_prompt(record: FunctionRecord):
    """The exact two-message refinement prompt."""
    if not record.original_decompiled.strip():
        raise SchemaError("record has no decompiled source to prompt with")
    return [
        {"role": "system", "content": PROMPT_SYSTEM},
        {"role": "user", "content": record.original_decompiled},
    ]
