"""Command-line interface.

Exit status: 0 on success, 1 on usage errors, 2 on data/validation errors.
"""

from __future__ import annotations

import sys

import click

from . import render
from .baseline import Averaging, baseline
from .engine import AGGREGATION_MODES, CompareOptions, run_manifest, tournament
from .errors import PrayatulError
from .ingestion import CSV, PLAIN, align, load_labels, load_manifest
from .render import RenderOptions


class _Cli(click.Group):
    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as exc:
            exc.show()
            sys.exit(1)
        except click.ClickException as exc:
            exc.show()
            sys.exit(1)
        except click.Abort:
            click.echo("aborted", err=True)
            sys.exit(1)
        except PrayatulError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)


class NamedPath(click.ParamType):
    name = "NAME=PATH"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        name, sep, path = value.partition("=")
        if not sep or not name.strip() or not path.strip():
            self.fail(f"expected NAME=PATH, got {value!r}", param, ctx)
        return name.strip(), path.strip()


class AveragingType(click.ParamType):
    name = "binary:<class>|macro|micro"

    def convert(self, value, param, ctx):
        if isinstance(value, Averaging):
            return value
        try:
            return Averaging.parse(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


def _render_options(f):
    f = click.option("--digits", type=click.IntRange(1, 10), default=4, show_default=True,
                     help="Display precision; never affects computation.")(f)
    f = click.option("--format", "fmt", type=click.Choice(render.FORMATS), default="text",
                     show_default=True)(f)
    f = click.option("--no-ids", is_flag=True,
                     help="Label files hold one label per line instead of id,label CSV.")(f)
    f = click.option("--average", "averaging", type=AveragingType(), default="auto",
                     help="Precision/recall averaging. Default: binary on the greater class "
                          "for two-class truth, macro otherwise.")(f)
    return f


def _unique_names(names, what="model"):
    seen = set()
    for n in names:
        if n in seen:
            raise click.UsageError(f"{what} name {n!r} given more than once")
        seen.add(n)


@click.group(cls=_Cli)
def cli():
    """Direct instance-level comparison of classifiers."""


def _pairwise(truth, primary, alternatives, fmt, digits, cells, no_ids, averaging, layout):
    if not alternatives:
        raise click.UsageError("at least one --alternative NAME=PATH is required")
    _unique_names([primary[0]] + [a[0] for a in alternatives])
    label_format = PLAIN if no_ids else CSV
    g = load_labels(truth, label_format)
    p = load_labels(primary[1], label_format)
    alts = [(name, load_labels(path, label_format)) for name, path in alternatives]
    report = tournament(
        g, (primary[0], p), alts,
        CompareOptions(keep_cells=cells, averaging=averaging), truth_name=truth,
    )
    opts = RenderOptions(fmt, digits, show_cells=cells)
    click.echo(render.render_report(report, opts, layout), nl=False)


def _pair_command(name, layout, doc):
    @cli.command(name, help=doc)
    @click.option("--truth", required=True, metavar="PATH", help="Ground-truth label file.")
    @click.option("--primary", required=True, type=NamedPath(), help="Primary model as NAME=PATH.")
    @click.option("--alternative", "alternatives", multiple=True, type=NamedPath(),
                  help="Alternative model as NAME=PATH (repeatable).")
    @click.option("--cells", is_flag=True, help="Record and print the instance ids in each cell.")
    @_render_options
    def command(truth, primary, alternatives, cells, fmt, digits, no_ids, averaging):
        _pairwise(truth, primary, alternatives, fmt, digits, cells, no_ids, averaging, layout)

    return command


cmd_compare = _pair_command(
    "compare", "blocks",
    "Prayatul matrix, measures and baselines for the primary against each alternative.",
)
cmd_tournament = _pair_command(
    "tournament", "table",
    "One row of measures per fold, grouped by alternative.",
)


@cli.command("folds")
@click.option("--manifest", required=True, metavar="PATH", help="JSON fold manifest.")
@click.option("--aggregate", "aggregation", type=click.Choice(AGGREGATION_MODES), default="mean",
              show_default=True, help="Average fold measures, or pool fold counts and score once.")
@click.option("--cells", is_flag=True, help="Record and print the instance ids in each cell.")
@_render_options
def cmd_folds(manifest, aggregation, cells, fmt, digits, no_ids, averaging):
    """Per-fold comparisons from a manifest, plus their aggregate."""
    m = load_manifest(manifest)
    report = run_manifest(
        m, CompareOptions(keep_cells=cells, averaging=averaging, aggregation=aggregation),
        PLAIN if no_ids else CSV, truth_name=manifest,
    )
    opts = RenderOptions(fmt, digits, show_cells=cells, show_aggregate=True)
    click.echo(render.render_report(report, opts, "blocks"), nl=False)


@cli.command("baseline")
@click.option("--truth", required=True, metavar="PATH", help="Ground-truth label file.")
@click.option("--model", "models", multiple=True, required=True, type=NamedPath(),
              help="Model as NAME=PATH (repeatable).")
@_render_options
def cmd_baseline(truth, models, fmt, digits, no_ids, averaging):
    """Accuracy, precision and recall for each model."""
    _unique_names([m[0] for m in models])
    label_format = PLAIN if no_ids else CSV
    g = load_labels(truth, label_format)
    seqs = [load_labels(path, label_format) for _, path in models]
    seqs = align(g, seqs)
    resolved = averaging.resolve(g.labels)
    summaries = [(name, baseline(g, s, resolved)) for (name, _), s in zip(models, seqs)]
    click.echo(render.render_baselines(truth, summaries, resolved, RenderOptions(fmt, digits)), nl=False)


def main(argv=None):
    cli.main(args=argv, prog_name="prayatul")


if __name__ == "__main__":
    main()
