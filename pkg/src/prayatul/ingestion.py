"""Reading and aligning label files and fold manifests.

Two label formats are understood:

``csv``
    UTF-8, header exactly ``id,label``, one ``id,label`` pair per row.  No
    quoting; tokens may not contain commas.
``plain``
    One label per line; ids ``"0", "1", ...`` are assigned by line order.

Labels (and ids) are whitespace-trimmed and otherwise left as opaque strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .core import LabelSequence
from .errors import (
    BadHeader,
    DuplicateId,
    EmptyInput,
    ExtraInstance,
    MalformedRow,
    MissingFile,
    MissingFold,
    MissingInstance,
    SchemaError,
    UnknownPrimary,
)

CSV = "csv"
PLAIN = "plain"
FORMATS = (CSV, PLAIN)


def _read_lines(path: Path) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8-sig")
    except FileNotFoundError:
        raise MissingFile(path) from None
    except IsADirectoryError:
        raise MissingFile(path, "expected a file, got a directory") from None
    except UnicodeDecodeError as exc:
        raise MalformedRow(path, 0, f"not valid UTF-8 ({exc.reason})") from None
    # splitlines() would also split on form feeds and other separators
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def load_labels(path, format: str = CSV) -> LabelSequence:
    """Load one label file.

    Raises MissingFile, BadHeader, DuplicateId, EmptyInput or MalformedRow
    (with the 1-based line number).
    """
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown label format {format!r}")
    lines = _read_lines(path)
    source = str(path)

    if format == PLAIN:
        labels = []
        for lineno, line in enumerate(lines, start=1):
            token = line.strip()
            if not token:
                raise MalformedRow(path, lineno, "blank line")
            labels.append(token)
        if not labels:
            raise EmptyInput(f"{source}: no labels")
        return LabelSequence.from_labels(labels, source)

    if not lines:
        raise BadHeader(f"{source}: empty file, expected header 'id,label'")
    if lines[0].strip() != "id,label":
        raise BadHeader(f"{source}: header must be 'id,label', got {lines[0]!r}")
    ids, labels = [], []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise MalformedRow(path, lineno, f"expected 2 fields, got {len(parts)}")
        iid, label = parts[0].strip(), parts[1].strip()
        if not iid:
            raise MalformedRow(path, lineno, "empty id")
        if not label:
            raise MalformedRow(path, lineno, "empty label")
        if iid in seen:
            raise DuplicateId(iid, source)
        seen.add(iid)
        ids.append(iid)
        labels.append(label)
    if not ids:
        raise EmptyInput(f"{source}: header but no rows")
    return LabelSequence(tuple(ids), tuple(labels), source)


def write_labels(seq: LabelSequence, path, format: str = CSV) -> None:
    path = Path(path)
    if format == CSV:
        body = "id,label\n" + "".join(f"{i},{lab}\n" for i, lab in zip(seq.ids, seq.labels))
    elif format == PLAIN:
        body = "".join(f"{lab}\n" for lab in seq.labels)
    else:
        raise ValueError(f"unknown label format {format!r}")
    path.write_text(body, encoding="utf-8")


def align(truth: LabelSequence, others: Sequence[LabelSequence]) -> list[LabelSequence]:
    """Reorder every sequence in ``others`` to the ground truth's id order.

    Raises MissingInstance / ExtraInstance when the id sets differ.
    """
    truth_ids = set(truth.ids)
    out = []
    for seq in others:
        if seq.ids == truth.ids:
            out.append(seq)
            continue
        ids = set(seq.ids)
        where = seq.source
        missing = [i for i in truth.ids if i not in ids]
        if missing:
            raise MissingInstance(missing, where)
        extra = [i for i in seq.ids if i not in truth_ids]
        if extra:
            raise ExtraInstance(extra, where)
        out.append(seq.reorder(truth.ids))
    return out


@dataclass(frozen=True)
class Manifest:
    """Fold layout of an experiment.

    ``truth[k]`` and ``models[name][k]`` are the files for fold ``k + 1``;
    paths are already resolved against the manifest's directory.
    """

    folds: int
    truth: tuple[Path, ...]
    models: dict[str, tuple[Path, ...]]
    primary: str
    path: Path | None = None

    @property
    def alternatives(self) -> list[str]:
        return [m for m in self.models if m != self.primary]


def _paths(value, field: str, folds: int, owner: str, base: Path) -> tuple[Path, ...]:
    if not isinstance(value, list):
        raise SchemaError(field, "must be a list of paths, one per fold")
    if len(value) > folds:
        raise SchemaError(field, f"has {len(value)} entries but folds is {folds}")
    paths = []
    for k in range(folds):
        entry = value[k] if k < len(value) else None
        if entry is None or entry == "":
            raise MissingFold(owner, k + 1)
        if not isinstance(entry, str):
            raise SchemaError(f"{field}[{k}]", "must be a string path")
        p = Path(entry)
        paths.append(p if p.is_absolute() else base / p)
    return tuple(paths)


def parse_manifest(data, base: Path | str = ".") -> Manifest:
    base = Path(base)
    if not isinstance(data, dict):
        raise SchemaError("<root>", "must be a JSON object")
    unknown = set(data) - {"folds", "truth", "models", "primary"}
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown field")
    for key in ("folds", "truth", "models", "primary"):
        if key not in data:
            raise SchemaError(key, "required field missing")
    folds = data["folds"]
    if isinstance(folds, bool) or not isinstance(folds, int) or folds < 1:
        raise SchemaError("folds", "must be an integer >= 1")
    models = data["models"]
    if not isinstance(models, dict) or len(models) < 2:
        raise SchemaError("models", "must map at least two model names to path lists")
    primary = data["primary"]
    if not isinstance(primary, str):
        raise SchemaError("primary", "must be a model name")
    if primary not in models:
        raise UnknownPrimary(primary, list(models))
    truth = _paths(data["truth"], "truth", folds, "truth", base)
    resolved = {
        name: _paths(files, f"models.{name}", folds, name, base)
        for name, files in models.items()
    }
    return Manifest(folds, truth, resolved, primary)


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise MissingFile(path) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("<root>", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    m = parse_manifest(data, base=path.parent)
    return Manifest(m.folds, m.truth, m.models, m.primary, path)
