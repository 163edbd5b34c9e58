"""``bxsna`` command line: one sub-command per pipeline stage."""

from __future__ import annotations

import argparse
import logging
import sys

from .pipeline import STAGES, LockedError, PipelineConfig, StageError, load_config, run_pipeline
from .projection import RULES


def _band(text):
    from .ingest import RatingBand

    try:
        return RatingBand.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file; flags override it")
    common.add_argument("--ratings", help="BX-Book-Ratings.csv")
    common.add_argument("--users", help="BX-Users.csv")
    common.add_argument("--books", help="BX-Books.csv")
    common.add_argument("--band", type=_band, metavar="LO:HI",
                        help="mother-network rating band (default 1:10)")
    common.add_argument("--preference-band", type=_band, metavar="LO:HI")
    common.add_argument("--nonpreference-band", type=_band, metavar="LO:HI")
    common.add_argument("--rule", choices=sorted(RULES), help="projection weight rule")
    common.add_argument("--top-k", type=int)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--format", dest="formats", metavar="csv,json,md")
    common.add_argument("--threads", type=int)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None)
    mode.add_argument("--sampled", dest="exact", action="store_false")
    common.add_argument("--sample", type=int, help="source count for --sampled")
    common.add_argument("--seed", type=int)
    common.add_argument("--ego", help="ego user ID (default: highest-degree user)")
    common.add_argument("--resume", action="store_true", default=None,
                        help="reuse cached networks, metrics and checkpoints")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="bxsna", description=__doc__)
    sub = parser.add_subparsers(dest="stage", required=True)
    for stage in STAGES + ("all",):
        sub.add_parser(stage, parents=[common])
    return parser


def config_from_args(args) -> PipelineConfig:
    overrides = {
        "ratings": args.ratings,
        "users": args.users,
        "books": args.books,
        "mother_band": args.band,
        "preference_band": args.preference_band,
        "nonpreference_band": args.nonpreference_band,
        "rule": args.rule,
        "top_k": args.top_k,
        "out": args.out,
        "formats": args.formats,
        "threads": args.threads,
        "exact": args.exact,
        "sample": args.sample,
        "seed": args.seed,
        "ego": args.ego,
        "resume": args.resume,
    }
    if args.config:
        return load_config(args.config, **overrides)
    return PipelineConfig(**{k: v for k, v in overrides.items() if v is not None})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        config = config_from_args(args)
        bundle = run_pipeline(config, args.stage)
    except StageError as exc:
        print(f"bxsna: {exc}", file=sys.stderr)
        return 1
    except (LockedError, ValueError, OSError) as exc:
        print(f"bxsna: stage {args.stage!r}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(bundle.tables)} tables to {config.out}/tables")
    return 0


if __name__ == "__main__":
    sys.exit(main())
