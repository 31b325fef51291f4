from __future__ import annotations

import argparse
import csv
import logging
import random
import statistics
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from ngsi import (  # noqa: E402
    BucketUnsatisfiableError,
    InferConfig,
    NgsiError,
    OracleSelector,
    SampleBucket,
    SearchConfig,
    SearchStatus,
    ast_equal,
    iddfs_parse,
    infer,
    load_model,
    sample_program,
)
from ngsi._internal.seeds import SeedDomain, derive_seed  # noqa: E402

logger = logging.getLogger("search_scaling")


def _lengths(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p.strip()]


def main() -> int:
    p = argparse.ArgumentParser(description="Time the search baseline against guided inference by program length")
    p.add_argument("--model", help="Guider model file (default: parser-backed oracle)")
    p.add_argument("--lengths", type=_lengths, default=[8, 12, 16], help="N..M or a comma list")
    p.add_argument("--min-depth", type=int, default=1)
    p.add_argument("--max-depth", type=int, default=40)
    p.add_argument("--per-length", type=int, default=40)
    p.add_argument("--time-limit", type=float, default=30.0, help="Search seconds per program")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    guide = load_model(args.model) if args.model else OracleSelector()
    search_cfg = SearchConfig(time_limit_seconds=args.time_limit)
    infer_cfg = InferConfig()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(
        ("length", "count", "search_found", "search_median_s", "search_median_steps", "guided_exact", "guided_median_s")
    )
    medians: dict[int, tuple[float, float]] = {}
    for length in args.lengths:
        bucket = SampleBucket(length, length, args.min_depth, args.max_depth)
        search_times: list[float] = []
        search_steps: list[int] = []
        guided_times: list[float] = []
        found = exact = 0
        for i in range(args.per_length):
            rng = random.Random(derive_seed(args.seed, "scaling", length, i, domain=SeedDomain.Eval))
            try:
                tokens, expected = sample_program(bucket, rng)
            except BucketUnsatisfiableError:
                break

            outcome = iddfs_parse(tokens, search_cfg)
            search_times.append(outcome.seconds)
            search_steps.append(outcome.steps)
            found += outcome.status is SearchStatus.Found

            t0 = time.perf_counter()
            try:
                exact += ast_equal(infer(tokens, "Stmt", guide, infer_cfg), expected)
            except NgsiError as e:
                logger.info("length %d program %d: %s", length, i, e)
            guided_times.append(time.perf_counter() - t0)

        count = len(search_times)
        if count == 0:
            w.writerow((length, 0, 0, "", "", 0, ""))
            continue
        medians[length] = (statistics.median(search_times), statistics.median(search_steps))
        w.writerow(
            (
                length,
                count,
                found,
                f"{medians[length][0]:.6f}",
                f"{medians[length][1]:g}",
                exact,
                f"{statistics.median(guided_times):.6f}",
            )
        )
        sys.stdout.flush()

    for k in sorted(medians):
        if 2 * k in medians and medians[k][0] > 0 and medians[k][1] > 0:
            logger.info(
                "length %d vs %d: median time ratio %.2f, median steps ratio %.2f",
                2 * k,
                k,
                medians[2 * k][0] / medians[k][0],
                medians[2 * k][1] / medians[k][1],
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
