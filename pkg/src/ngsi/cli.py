"""Command-line entry point: `ngsi <subcommand> ...`.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

from .enums import InferMode
from .exceptions import ConfigError, NgsiError
from ._internal.data import (
    SampleBucket,
    curriculum_schedule,
    extract_training_pairs,
    format_corpus_line,
    sample_program,
    split_corpus_lines,
)
from ._internal.data.files import format_pair_line
from ._internal.evaluation import DEFAULT_PER_CELL, evaluate_grid, write_csv
from ._internal.grammar import WHILE_GRAMMAR, analyze, validate_grammar
from ._internal.guider import (
    DEFAULT_D_EMB,
    DEFAULT_D_H,
    TrainConfig,
    build_model_summary,
    load_model,
    save_model,
    train,
    write_training_log,
)
from ._internal.inference import InferConfig, OracleSelector, infer_lines
from ._internal.search import SearchConfig, iddfs_parse
from ._internal.seeds import derive_seed
from ._internal.syntax import reference_parse, serialize, tokenize
from ._internal.syntax.tree import Ast, TokenSeq

logger = logging.getLogger("ngsi")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

_SEED_MAX = (1 << 64) - 1
_TRAIN = TrainConfig()
_INFER = InferConfig()
_SEARCH = SearchConfig()


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- Argument types ---


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= _SEED_MAX:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _int_range(text: str) -> list[int]:
    """`6..11` (inclusive) or a comma list such as `6,8,10`."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N..M or a comma list, got {text!r}") from None


def _bucket(text: str) -> SampleBucket:
    try:
        return SampleBucket.parse(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# --- Subcommands ---


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _read_inputs(path: str | None) -> Iterable[str]:
    if path is None or path == "-":
        return sys.stdin
    return Path(path).read_text(encoding="utf-8").splitlines()


def _gen_one(job: tuple[SampleBucket, int, int]) -> tuple[TokenSeq, Ast]:
    bucket, seed, index = job
    return sample_program(bucket, random.Random(derive_seed(seed, "gen", index)))


def cmd_gen(args: argparse.Namespace) -> int:
    bucket: SampleBucket = args.bucket
    jobs = [(bucket, args.seed, i) for i in range(args.n)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            programs = list(pool.map(_gen_one, jobs, chunksize=64))
    else:
        programs = [_gen_one(j) for j in jobs]

    out = _open_out(args.out)
    try:
        for tokens, tree in programs:
            out.write(format_corpus_line(tokens, tree))
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()

    if args.dataset:
        with open(args.dataset, "w", encoding="utf-8", newline="\n") as f:
            for _, tree in programs:
                for pair in extract_training_pairs(tree):
                    f.write(format_pair_line(pair))
                    f.write("\n")
    logger.info("generated %d programs in %s", len(programs), bucket)
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = TrainConfig(
        seed=args.seed,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        beta2=args.beta2,
        conventional_beta2=args.conventional_beta2,
        iterations_per_stage=args.iterations,
        programs_per_stage=args.programs_per_stage,
        heldout_programs=args.heldout_programs,
        eval_every=args.eval_every,
        early_stop_accuracy=args.early_stop if args.early_stop > 0 else None,
        d_emb=args.d_emb,
        d_h=args.d_h,
    )
    schedule = curriculum_schedule(args.stages, seed=args.seed, repeats=args.repeats)
    t0 = time.perf_counter()
    result = train(schedule, config)
    save_model(result.model, args.out)
    if args.log:
        write_training_log(result.log, args.log)
    final = result.log[-1].heldout_step_acc if result.log else float("nan")
    logger.info("training done in %.1fs, final held-out step accuracy %.4f", time.perf_counter() - t0, final)
    return EXIT_OK


def _infer_config(args: argparse.Namespace) -> InferConfig:
    return InferConfig(
        mode=InferMode(args.mode),
        beam_width=args.beam_width,
        max_recursion_depth=args.max_recursion_depth,
        verify_reconstruction=not args.no_verify,
    )


def _write_infer_rows(rows: Iterable, stats: bool) -> None:
    for row in rows:
        text = serialize(row.tree) if row.ok else f"ERROR {row.error.value}"
        if stats:
            text += f"\t{row.expansions}\t{row.seconds:.6f}"
        sys.stdout.write(text + "\n")


def cmd_infer(args: argparse.Namespace) -> int:
    guide = load_model(args.model)
    rows = infer_lines(split_corpus_lines(_read_inputs(args.input), keep_blank=True), guide, _infer_config(args))
    _write_infer_rows(rows, args.stats)
    return EXIT_OK


def cmd_parse(args: argparse.Namespace) -> int:
    lines = split_corpus_lines(_read_inputs(args.input), keep_blank=True)
    if args.oracle:
        _write_infer_rows(infer_lines(lines, OracleSelector(), _infer_config(args)), args.stats)
        return EXIT_OK
    for line in lines:
        try:
            sys.stdout.write(serialize(reference_parse(tokenize(line.tokens_text))) + "\n")
        except NgsiError as e:
            logger.warning("line %d: %s", line.line_no, e)
            sys.stdout.write("ERROR unparseable\n")
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    cfg = SearchConfig(max_depth=args.max_depth, time_limit_seconds=args.time_limit)
    for line in split_corpus_lines(_read_inputs(args.input), keep_blank=True):
        try:
            tokens = tokenize(line.tokens_text)
        except NgsiError as e:
            logger.warning("line %d: %s", line.line_no, e)
            sys.stdout.write("ERROR unparseable\n")
            continue
        outcome = iddfs_parse(tokens, cfg)
        text = serialize(outcome.tree) if outcome.tree is not None else f"ERROR {outcome.error_kind.value}"
        if args.stats:
            text += f"\t{outcome.steps}\t{outcome.seconds:.6f}"
        sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model) if args.model else None
    records = evaluate_grid(
        model,
        args.methods,
        args.depths,
        args.lengths,
        per_cell=args.per_cell,
        seed=args.seed,
        infer_cfg=_infer_config(args),
        search_cfg=SearchConfig(max_depth=args.search_max_depth, time_limit_seconds=args.time_limit),
        jobs=args.jobs,
    )
    write_csv(records, args.out, timing=not args.no_timing)
    logger.info("wrote %d records to %s", len(records), args.out)
    return EXIT_OK


def cmd_inspect_grammar(args: argparse.Namespace) -> int:
    g = WHILE_GRAMMAR
    for rule in g.rules:
        sys.stdout.write(f"{rule.label}\t{rule.describe()}\n")
    for defect in validate_grammar(g):
        logger.warning("%s", defect)
    if args.analysis:
        a = analyze(g)
        for nt in g.nonterminals:
            sys.stderr.write(f"{nt.name}\tmin_length={a.min_length[nt.id]}\tmin_depth={a.min_depth[nt.id]}\n")
    return EXIT_OK


def cmd_inspect_model(args: argparse.Namespace) -> int:
    sys.stdout.write(build_model_summary(load_model(args.model)).to_json())
    return EXIT_OK


# --- Parser ---


def _add_infer_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=[m.value for m in InferMode], default=InferMode.Fallback.value)
    p.add_argument("--beam-width", type=_positive, default=_INFER.beam_width)
    p.add_argument("--max-recursion-depth", type=_positive, default=_INFER.max_recursion_depth)
    p.add_argument("--no-verify", action="store_true", help="Skip the final reconstruction check")


def build_parser() -> _ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="File of key=value lines; command-line flags win")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Shorthand for --log-level INFO")

    parser = _ArgumentParser(prog="ngsi", description="Neurally-guided structure inference for WHILE programs")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("gen", parents=[common], help="Sample programs into a corpus file")
    p.add_argument("--bucket", type=_bucket, default=SampleBucket(5, 15, 1, 9), help="minlen:maxlen:mindepth:maxdepth")
    p.add_argument("--n", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", help="Corpus path (default: stdout)")
    p.add_argument("--dataset", help="Also write the training pairs of every program here")
    p.add_argument("--jobs", type=_positive, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", parents=[common], help="Train the guider over the curriculum")
    p.add_argument("--out", required=True, help="Model file to write")
    p.add_argument("--log", help="Training log CSV to write")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--stages", type=_positive, default=4)
    p.add_argument("--repeats", type=_positive, default=3)
    p.add_argument("--batch-size", type=_positive, default=_TRAIN.batch_size)
    p.add_argument("--lr", type=float, default=_TRAIN.learning_rate)
    p.add_argument("--beta2", type=float, default=_TRAIN.beta2)
    p.add_argument("--conventional-beta2", action="store_true", help="Use beta2 = 0.999")
    p.add_argument("--iterations", type=int, default=_TRAIN.iterations_per_stage, help="Minibatches per stage")
    p.add_argument("--programs-per-stage", type=_positive, default=_TRAIN.programs_per_stage)
    p.add_argument("--heldout-programs", type=_positive, default=_TRAIN.heldout_programs)
    p.add_argument("--eval-every", type=_positive, default=_TRAIN.eval_every)
    p.add_argument("--early-stop", type=float, default=_TRAIN.early_stop_accuracy, help="Stage early-stop accuracy; 0 disables")
    p.add_argument("--d-emb", type=_positive, default=DEFAULT_D_EMB)
    p.add_argument("--d-h", type=_positive, default=DEFAULT_D_H)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("infer", parents=[common], help="Guided inference of token lines")
    p.add_argument("--model", required=True)
    p.add_argument("--input", help="Token lines (default: stdin)")
    p.add_argument("--stats", action="store_true", help="Append selector calls and seconds per line")
    _add_infer_options(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("parse", parents=[common], help="Reference parse of token lines")
    p.add_argument("--oracle", action="store_true", help="Run the engine with the parser-backed oracle selector")
    p.add_argument("--input", help="Token lines (default: stdin)")
    p.add_argument("--stats", action="store_true")
    _add_infer_options(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("search", parents=[common], help="Iterative deepening baseline on token lines")
    p.add_argument("--max-depth", type=_positive, default=_SEARCH.max_depth)
    p.add_argument("--time-limit", type=float, default=_SEARCH.time_limit_seconds, help="Seconds per line")
    p.add_argument("--input", help="Token lines (default: stdin)")
    p.add_argument("--stats", action="store_true", help="Append derivation steps and seconds per line")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("eval", parents=[common], help="Exact-match and latency grid to CSV")
    p.add_argument("--model")
    p.add_argument("--methods", default="ngsi,search")
    p.add_argument("--depths", type=_int_range, default=list(range(6, 12)))
    p.add_argument("--lengths", type=_int_range, default=list(range(15, 31)))
    p.add_argument("--per-cell", type=_positive, default=DEFAULT_PER_CELL)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--time-limit", type=float, default=60.0, help="Search seconds per program")
    p.add_argument("--search-max-depth", type=_positive, default=_SEARCH.max_depth)
    p.add_argument("--no-timing", action="store_true", help="Leave the wall-time columns blank")
    _add_infer_options(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("inspect-grammar", parents=[common], help="Print the rule table")
    p.add_argument("--analysis", action="store_true", help="Also print per-nonterminal minimum length and depth")
    p.set_defaults(func=cmd_inspect_grammar)

    p = sub.add_parser("inspect-model", parents=[common], help="Print a JSON summary of a model file")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_inspect_model)

    return parser


def _config_defaults(sub: argparse.ArgumentParser, path: str) -> dict[str, object]:
    """Defaults from a key=value file, converted with the matching flag's type."""
    actions = {a.dest: a for a in sub._actions if a.dest not in {"help", "config"}}
    out: dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                sub.error(f"{path}:{line_no}: expected key=value")
            dest = key.strip().replace("-", "_")
            action = actions.get(dest)
            if action is None:
                sub.error(f"{path}:{line_no}: unknown key {key.strip()!r}")
            value = value.strip()
            try:
                if isinstance(action, argparse._StoreTrueAction):
                    out[dest] = _bool(value)
                elif action.type is not None:
                    out[dest] = action.type(value)
                else:
                    out[dest] = value
            except (ValueError, argparse.ArgumentTypeError) as e:
                sub.error(f"{path}:{line_no}: {key.strip()}: {e}")
            if action.choices is not None and out[dest] not in action.choices:
                sub.error(f"{path}:{line_no}: {key.strip()} must be one of {', '.join(map(str, action.choices))}")
    return out


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = _subparser(parser, args.command)
        try:
            defaults = _config_defaults(sub, args.config)
        except OSError as e:
            sub.error(f"cannot read config: {e}")
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _configure_logging(args: argparse.Namespace) -> None:
    level = "INFO" if args.verbose and args.log_level == "WARNING" else args.log_level
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _resolved(args: argparse.Namespace) -> str:
    data = {k: v for k, v in vars(args).items() if k != "func"}
    return json.dumps(data, default=str, sort_keys=True)


def _first_line(e: BaseException) -> str:
    return str(e).splitlines()[0] if str(e) else type(e).__name__


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args)
    logger.info("%s config: %s", args.command, _resolved(args))

    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except ConfigError as e:
        sys.stderr.write(f"ngsi: error: {_first_line(e)}\n")
        return EXIT_USAGE
    except (NgsiError, OSError) as e:
        sys.stderr.write(f"ngsi: error: {_first_line(e)}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
