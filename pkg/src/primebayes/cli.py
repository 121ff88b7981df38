"""Command-line front end.

Exit codes: 0 success, 2 usage errors (argparse), 3 unreadable or
malformed corpus data, 4 numerical failure.
"""

import argparse
import math
import sys
from pathlib import Path

from ._version import __version__
from .experiments import (
    ExperimentConfig,
    build_materials,
    builtin_prior_table,
    run_sim1,
    run_sim2,
)
from .model import HierarchicalBetaBinomial
from .reports import (
    CorpusError,
    RunReport,
    decay_chart_svg,
    parse_corpus,
    sim1_csv,
    sim2_csv,
    verb_report_block,
)

__all__ = ["build_parser", "main"]


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not math.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text!r}")
    return value


def _int_at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be an integer >= {minimum}, got {text!r}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_positive_float, default=5.0, help="pooling concentration (default 5.0)")
    common.add_argument("--grid", type=_int_at_least(3), default=401, help="posterior grid size (default 401)")
    common.add_argument("--seed", type=_int_at_least(0), default=42, help="random seed (default 42)")
    common.add_argument("--reps", type=_int_at_least(1), default=200, help="decay replications (default 200)")
    common.add_argument("--items", type=_int_at_least(1), default=32, help="experiment items (default 32)")
    common.add_argument("--batches", type=_int_at_least(0), default=2, help="post-prime batches (default 2)")
    common.add_argument("--batch-size", type=_int_at_least(0), default=100, help="observations per batch (default 100)")
    common.add_argument("--corpus", type=Path, default=None, metavar="FILE", help="corpus CSV (default: built-in)")

    parser = argparse.ArgumentParser(
        prog="primebayes",
        description="Hierarchical DO/PO bias model with a syntactic-priming simulation harness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("prior", parents=[common], help="fit the corpus and report the global bias and per-verb P(DO)")

    sim1 = sub.add_parser("sim1", parents=[common], help="single-prime experiment over the four design cells")
    sim1.add_argument("--out", type=Path, default=None, metavar="FILE", help="write the results CSV here")

    sim2 = sub.add_parser("sim2", parents=[common], help="decay experiment over post-prime exposure batches")
    sim2.add_argument("--out", type=Path, default=None, metavar="FILE", help="write the results CSV here")
    sim2.add_argument("--svg", type=Path, default=None, metavar="FILE", help="write a decay chart here")

    return parser


def _load_prior(args):
    if args.corpus is None:
        prior = builtin_prior_table()
        do, total = prior.grand_totals()
        return prior, f"builtin ({len(prior)} verbs, {total} observations)"
    text = Path(args.corpus).read_text(encoding="utf-8")
    return parse_corpus(text), str(args.corpus)


def _dispatch(args) -> int:
    config = ExperimentConfig(
        alpha=args.alpha,
        grid_size=args.grid,
        seed=args.seed,
        replications=args.reps,
        n_items=args.items,
        max_batches=args.batches,
        batch_size=args.batch_size,
    )
    prior, corpus_label = _load_prior(args)
    model = HierarchicalBetaBinomial(alpha=config.alpha, grid_size=config.grid_size).fit(prior)

    if args.command == "prior":
        body = verb_report_block(model)
    else:
        if len(prior) < 2:
            raise CorpusError("corpus needs at least two verbs to build prime/target materials")
        items = build_materials(prior.verbs, config.n_items)
        if args.command == "sim1":
            body = sim1_csv(run_sim1(prior, items, config))
        else:
            records = run_sim2(prior, items, config)
            body = sim2_csv(records)
            if args.svg is not None:
                Path(args.svg).write_text(decay_chart_svg(records), encoding="utf-8")
        if args.out is not None:
            Path(args.out).write_text(body, encoding="utf-8")

    report = RunReport(args.command, config, corpus_label, model.bias_mean(), body)
    sys.stdout.write(report.render())
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except CorpusError as exc:
        print(f"primebayes: corpus error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"primebayes: i/o error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError) as exc:
        print(f"primebayes: numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
