"""Text, Markdown, CSV and JSON renderings of comparison reports.

JSON carries every number at full double precision; the other formats round
for display only.  Rounding is half-up on the shortest decimal repr of the
double, so any displayed value can be re-derived from the JSON output.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .baseline import Averaging, ConfusionSummary
from .core import CELL_NAMES, MEASURE_KEYS, MEASURE_NAMES, MeasureSet, PrayatulMatrix
from .engine import Aggregate, ComparisonReport, PairResult

UNDEFINED_TEXT = "\N{EM DASH}"
FORMATS = ("text", "markdown", "csv", "json")
CSV_COLUMNS = (
    "primary", "alternative", "fold", "br", "rw", "wr", "bw",
    "sigma_c", "alpha", "xi_c", "xi_e", "phi_e",
    "acc_p", "acc_q", "pre_p", "pre_q", "rec_p", "rec_q",
)


@dataclass(frozen=True)
class RenderOptions:
    format: str = "text"
    digits: int = 4
    show_cells: bool = False
    # None: show the aggregate only when there is more than one fold
    show_aggregate: bool | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if not 1 <= self.digits <= 10:
            raise ValueError("digits must be between 1 and 10")


def format_number(value: float | None, digits: int = 4, undefined: str = UNDEFINED_TEXT) -> str:
    if value is None:
        return undefined
    q = Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP)
    if q == 0:
        q = abs(q)
    return f"{q:f}"


def _table(rows: Sequence[Sequence[str]], header_rows: int = 1, indent: str = "", left: int = 1) -> list[str]:
    """Plain-text table: the first ``left`` columns left-aligned, the rest right-aligned."""
    width = max(len(r) for r in rows)
    rows = [list(r) + [""] * (width - len(r)) for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(width)]
    out = []
    for n, r in enumerate(rows):
        cells = [c.ljust(w) for c, w in zip(r[:left], widths[:left])]
        cells += [c.rjust(w) for c, w in zip(r[left:], widths[left:])]
        out.append((indent + "  ".join(cells)).rstrip())
        if n == header_rows - 1:
            out.append(indent + "  ".join("-" * w for w in widths))
    return out


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]], left: int = 1) -> list[str]:
    align = ["---"] * left + ["---:"] * (len(header) - left)
    out = ["| " + " | ".join(header) + " |", "|" + "|".join(align) + "|"]
    out += ["| " + " | ".join(r) + " |" for r in rows]
    return out


def _matrix_grid(m: PrayatulMatrix, primary: str, alternative: str) -> list[list[str]]:
    return [
        ["", "", alternative, "", ""],
        ["", "", "Right", "Wrong", "Total"],
        [primary, "Right", str(m.br), str(m.rw), str(m.primary_right)],
        ["", "Wrong", str(m.wr), str(m.bw), str(m.primary_wrong)],
        ["", "Total", str(m.alternative_right), str(m.alternative_wrong), str(m.n)],
    ]


def _fold_label(fold) -> str:
    return f"fold {fold}"


# ---------------------------------------------------------------------------
# text


def _text_matrix(m: PrayatulMatrix, primary: str, alternative: str) -> list[str]:
    grid = _matrix_grid(m, primary, alternative)
    widths = [max(len(r[i]) for r in grid) for i in range(5)]
    widths[2:] = [max(widths[2:])] * 3
    lines = []
    for n, r in enumerate(grid):
        if n == 0:
            # alternative name spans the Right/Wrong columns
            left = " " * (widths[0] + 2 + widths[1] + 2)
            lines.append(("  " + left + r[2]).rstrip())
            continue
        cells = [r[0].ljust(widths[0]), r[1].ljust(widths[1])] + [c.rjust(w) for c, w in zip(r[2:], widths[2:])]
        lines.append(("  " + "  ".join(cells)).rstrip())
    return lines


def _text_measures(measures: MeasureSet, digits: int, with_excluded: bool = False) -> list[str]:
    header = ["measure", "", "value"] + (["undefined folds"] if with_excluded else [])
    rows = [header]
    for key, v in measures.items():
        row = [key, MEASURE_NAMES[key], format_number(v.value, digits)]
        if with_excluded:
            row.append(str(v.excluded))
        rows.append(row)
    return _table(rows, indent="  ", left=2)


def _text_baselines(
    pairs: Sequence[tuple[str, ConfusionSummary | None]], averaging: Averaging, digits: int
) -> list[str]:
    rows = [[f"baseline ({averaging})", "accuracy", "precision", "recall"]]
    for name, s in pairs:
        if s is None:
            rows.append([name, UNDEFINED_TEXT, UNDEFINED_TEXT, UNDEFINED_TEXT])
        else:
            rows.append([name] + [format_number(x, digits) for x in (s.accuracy, s.precision, s.recall)])
    return _table(rows, indent="  ")


def _text_cells(m: PrayatulMatrix) -> list[str]:
    if m.cells is None:
        return []
    lines = ["  cells"]
    for name in CELL_NAMES:
        ids = getattr(m.cells, name)
        lines.append(f"    {name.upper()} ({len(ids)}): {', '.join(ids)}".rstrip())
    return lines


def _text_pair_block(r: PairResult, report: ComparisonReport, opts: RenderOptions) -> list[str]:
    lines = [f"{r.primary_name} vs {r.alternative_name} ({_fold_label(r.fold)})", ""]
    lines += _text_matrix(r.matrix, r.primary_name, r.alternative_name)
    lines.append("")
    lines += _text_measures(r.measures, opts.digits)
    lines.append("")
    lines += _text_baselines(
        [(r.primary_name, r.primary_baseline), (r.alternative_name, r.alternative_baseline)],
        report.averaging,
        opts.digits,
    )
    if opts.show_cells and r.matrix.cells is not None:
        lines.append("")
        lines += _text_cells(r.matrix)
    return lines


def _agg_title(report: ComparisonReport, alt: str, agg: Aggregate) -> str:
    how = "mean of fold measures" if agg.mode == "mean" else "pooled fold counts"
    return f"{report.primary} vs {alt} (aggregate over {agg.folds} folds, {how})"


def _text_aggregate_block(report: ComparisonReport, alt: str, agg: Aggregate, opts: RenderOptions) -> list[str]:
    lines = [_agg_title(report, alt, agg), ""]
    lines += _text_matrix(agg.matrix, report.primary, alt)
    lines.append("")
    lines += _text_measures(agg.measures, opts.digits, with_excluded=agg.mode == "mean")
    lines.append("")
    lines += _text_baselines(
        [(report.primary, agg.primary_baseline), (alt, agg.alternative_baseline)],
        report.averaging,
        opts.digits,
    )
    return lines


def _show_aggregate(report: ComparisonReport, opts: RenderOptions) -> bool:
    if opts.show_aggregate is None:
        return report.n_folds > 1
    return opts.show_aggregate


def _text_header(report: ComparisonReport) -> list[str]:
    lines = [f"primary: {report.primary}"]
    if report.truth:
        lines.append(f"truth: {report.truth}")
    lines.append(f"averaging: {report.averaging}")
    return lines


def render_text_blocks(report: ComparisonReport, opts: RenderOptions) -> str:
    lines = _text_header(report)
    for pair in report.pairs:
        for r in pair.folds:
            lines += ["", ""] + _text_pair_block(r, report, opts)
        if _show_aggregate(report, opts):
            lines += ["", ""] + _text_aggregate_block(report, pair.alternative, pair.aggregate, opts)
    return "\n".join(lines) + "\n"


def _grouped_rows(report: ComparisonReport, opts: RenderOptions):
    """Rows of the measure table: one per fold, plus the aggregate when shown."""
    rows = []
    for k in range(report.n_folds):
        rows.append((_fold_label(k + 1), [p.folds[k].measures for p in report.pairs]))
    if _show_aggregate(report, opts):
        rows.append((report.aggregation_mode, [p.aggregate.measures for p in report.pairs]))
    return rows


def _grouped_baseline_rows(report: ComparisonReport, opts: RenderOptions):
    models = [report.primary] + [p.alternative for p in report.pairs]
    rows = []
    for k in range(report.n_folds):
        first = report.pairs[0].folds[k]
        summaries = [first.primary_baseline] + [p.folds[k].alternative_baseline for p in report.pairs]
        rows.append((_fold_label(k + 1), summaries))
    if _show_aggregate(report, opts):
        agg0 = report.pairs[0].aggregate
        summaries = [agg0.primary_baseline] + [p.aggregate.alternative_baseline for p in report.pairs]
        rows.append((report.aggregation_mode, summaries))
    return models, rows


def _summary_cells(s: ConfusionSummary | None, digits: int, undefined: str) -> list[str]:
    if s is None:
        return [undefined] * 3
    return [format_number(x, digits) for x in (s.accuracy, s.precision, s.recall)]


def render_text_table(report: ComparisonReport, opts: RenderOptions) -> str:
    d = opts.digits
    lines = _text_header(report) + ["", "comparative measures"]
    group = [""]
    header = ["fold"]
    for p in report.pairs:
        group += [p.alternative] + [""] * (len(MEASURE_KEYS) - 1)
        header += list(MEASURE_KEYS)
    rows = [group, header]
    for label, sets in _grouped_rows(report, opts):
        rows.append([label] + [format_number(ms[k].value, d) for ms in sets for k in MEASURE_KEYS])
    lines += _table(rows, header_rows=2)

    models, brows = _grouped_baseline_rows(report, opts)
    lines += ["", f"baselines ({report.averaging})"]
    group = [""]
    header = ["fold"]
    for name in models:
        group += [name, "", ""]
        header += ["acc", "pre", "rec"]
    rows = [group, header]
    for label, summaries in brows:
        rows.append([label] + [c for s in summaries for c in _summary_cells(s, d, UNDEFINED_TEXT)])
    lines += _table(rows, header_rows=2)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# markdown


def _md_matrix(m: PrayatulMatrix, primary: str, alternative: str) -> list[str]:
    header = [f"{primary} \\ {alternative}", "Right", "Wrong", "Total"]
    rows = [
        ["Right", str(m.br), str(m.rw), str(m.primary_right)],
        ["Wrong", str(m.wr), str(m.bw), str(m.primary_wrong)],
        ["Total", str(m.alternative_right), str(m.alternative_wrong), str(m.n)],
    ]
    return _md_table(header, rows)


def _md_measures(measures: MeasureSet, digits: int, with_excluded: bool = False) -> list[str]:
    header = ["measure", "name", "value"] + (["undefined folds"] if with_excluded else [])
    rows = []
    for key, v in measures.items():
        row = [key, MEASURE_NAMES[key], format_number(v.value, digits)]
        if with_excluded:
            row.append(str(v.excluded))
        rows.append(row)
    return _md_table(header, rows, left=2)


def _md_baselines(pairs, averaging: Averaging, digits: int) -> list[str]:
    rows = [[name] + _summary_cells(s, digits, UNDEFINED_TEXT) for name, s in pairs]
    return _md_table([f"model ({averaging})", "accuracy", "precision", "recall"], rows)


def render_markdown_blocks(report: ComparisonReport, opts: RenderOptions) -> str:
    d = opts.digits
    lines = [f"# {report.primary}: pairwise comparison", ""]
    if report.truth:
        lines.append(f"- truth: `{report.truth}`")
    lines.append(f"- averaging: `{report.averaging}`")
    for pair in report.pairs:
        for r in pair.folds:
            lines += ["", f"## {r.primary_name} vs {r.alternative_name} ({_fold_label(r.fold)})", ""]
            lines += _md_matrix(r.matrix, r.primary_name, r.alternative_name) + [""]
            lines += _md_measures(r.measures, d) + [""]
            lines += _md_baselines(
                [(r.primary_name, r.primary_baseline), (r.alternative_name, r.alternative_baseline)],
                report.averaging,
                d,
            )
            if opts.show_cells and r.matrix.cells is not None:
                lines.append("")
                for name in CELL_NAMES:
                    ids = getattr(r.matrix.cells, name)
                    lines.append(f"- {name.upper()} ({len(ids)}): {', '.join(ids)}".rstrip())
        if _show_aggregate(report, opts):
            agg = pair.aggregate
            lines += ["", f"## {_agg_title(report, pair.alternative, agg)}", ""]
            lines += _md_matrix(agg.matrix, report.primary, pair.alternative) + [""]
            lines += _md_measures(agg.measures, d, with_excluded=agg.mode == "mean") + [""]
            lines += _md_baselines(
                [(report.primary, agg.primary_baseline), (pair.alternative, agg.alternative_baseline)],
                report.averaging,
                d,
            )
    return "\n".join(lines) + "\n"


def render_markdown_table(report: ComparisonReport, opts: RenderOptions) -> str:
    d = opts.digits
    lines = [f"# {report.primary} vs {', '.join(p.alternative for p in report.pairs)}", ""]
    if report.truth:
        lines.append(f"- truth: `{report.truth}`")
    lines += [f"- averaging: `{report.averaging}`", "", "## Comparative measures", ""]
    header = ["fold"] + [f"{p.alternative} {k}" for p in report.pairs for k in MEASURE_KEYS]
    rows = [
        [label] + [format_number(ms[k].value, d) for ms in sets for k in MEASURE_KEYS]
        for label, sets in _grouped_rows(report, opts)
    ]
    lines += _md_table(header, rows)
    models, brows = _grouped_baseline_rows(report, opts)
    lines += ["", "## Baselines", ""]
    header = ["fold"] + [f"{m} {s}" for m in models for s in ("acc", "pre", "rec")]
    rows = [
        [label] + [c for s in summaries for c in _summary_cells(s, d, UNDEFINED_TEXT)]
        for label, summaries in brows
    ]
    lines += _md_table(header, rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# csv


def _csv_row(primary, alternative, fold, m, measures, bp, bq, digits) -> list[str]:
    row = [primary, alternative, str(fold), str(m.br), str(m.rw), str(m.wr), str(m.bw)]
    row += [format_number(measures[k].value, digits, undefined="") for k in MEASURE_KEYS]
    p = _summary_cells(bp, digits, "")
    q = _summary_cells(bq, digits, "")
    row += [p[0], q[0], p[1], q[1], p[2], q[2]]
    return row


def render_csv(report: ComparisonReport, opts: RenderOptions) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for pair in report.pairs:
        for r in pair.folds:
            w.writerow(_csv_row(report.primary, pair.alternative, r.fold, r.matrix, r.measures,
                                r.primary_baseline, r.alternative_baseline, opts.digits))
        if _show_aggregate(report, opts):
            agg = pair.aggregate
            w.writerow(_csv_row(report.primary, pair.alternative, agg.mode, agg.matrix, agg.measures,
                                agg.primary_baseline, agg.alternative_baseline, opts.digits))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# json


def _matrix_dict(m: PrayatulMatrix) -> dict:
    return {"br": m.br, "rw": m.rw, "wr": m.wr, "bw": m.bw}


def _measures_dict(measures: MeasureSet, with_excluded: bool = False) -> dict:
    out = {}
    for k, v in measures.items():
        entry = {"value": v.value, "defined": v.defined}
        if with_excluded:
            entry["excluded"] = v.excluded
        out[k] = entry
    return out


def summary_dict(name: str, s: ConfusionSummary | None) -> dict | None:
    if s is None:
        return None
    return {
        "model": name,
        "accuracy": s.accuracy,
        "precision": s.precision,
        "recall": s.recall,
        "averaging": str(s.averaging),
    }


def report_dict(report: ComparisonReport) -> dict:
    pairs = []
    for pair in report.pairs:
        folds = []
        for r in pair.folds:
            entry = {"fold": r.fold, "matrix": _matrix_dict(r.matrix)}
            if r.matrix.cells is not None:
                entry["cells"] = r.matrix.cells.as_dict()
            entry["measures"] = _measures_dict(r.measures)
            entry["baselines"] = {
                "primary": summary_dict(r.primary_name, r.primary_baseline),
                "alternative": summary_dict(r.alternative_name, r.alternative_baseline),
            }
            folds.append(entry)
        agg = pair.aggregate
        pairs.append({
            "alternative": pair.alternative,
            "folds": folds,
            "aggregate": {
                "mode": agg.mode,
                "folds": agg.folds,
                "matrix": _matrix_dict(agg.matrix),
                "measures": _measures_dict(agg.measures, with_excluded=True),
                "baselines": {
                    "primary": summary_dict(report.primary, agg.primary_baseline),
                    "alternative": summary_dict(pair.alternative, agg.alternative_baseline),
                },
            },
        })
    return {
        "truth": report.truth,
        "primary": report.primary,
        "pairs": pairs,
        "aggregation_mode": report.aggregation_mode,
        "options": {"averaging": str(report.averaging), "keep_cells": report.keep_cells},
    }


def dumps(data) -> str:
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def render_report(report: ComparisonReport, opts: RenderOptions, layout: str = "blocks") -> str:
    """Render a report; ``layout`` is ``"blocks"`` (one matrix block per pair
    and fold) or ``"table"`` (one row per fold, measure columns grouped by
    alternative).  Layout only affects text and markdown."""
    if opts.format == "json":
        return dumps(report_dict(report))
    if opts.format == "csv":
        return render_csv(report, opts)
    if opts.format == "markdown":
        return (render_markdown_table if layout == "table" else render_markdown_blocks)(report, opts)
    return (render_text_table if layout == "table" else render_text_blocks)(report, opts)


def render_baselines(
    truth: str,
    models: Sequence[tuple[str, ConfusionSummary]],
    averaging: Averaging,
    opts: RenderOptions,
) -> str:
    d = opts.digits
    if opts.format == "json":
        return dumps({
            "truth": truth,
            "averaging": str(averaging),
            "models": [summary_dict(name, s) for name, s in models],
        })
    if opts.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "accuracy", "precision", "recall"])
        for name, s in models:
            w.writerow([name] + _summary_cells(s, d, ""))
        return buf.getvalue()
    if opts.format == "markdown":
        lines = ["# Baselines", ""]
        if truth:
            lines.append(f"- truth: `{truth}`")
        lines += [f"- averaging: `{averaging}`", ""]
        lines += _md_table(["model", "accuracy", "precision", "recall"],
                           [[name] + _summary_cells(s, d, UNDEFINED_TEXT) for name, s in models])
        return "\n".join(lines) + "\n"
    lines = []
    if truth:
        lines.append(f"truth: {truth}")
    lines += [f"averaging: {averaging}", ""]
    lines += _table([["model", "accuracy", "precision", "recall"]]
                    + [[name] + _summary_cells(s, d, UNDEFINED_TEXT) for name, s in models])
    return "\n".join(lines) + "\n"
