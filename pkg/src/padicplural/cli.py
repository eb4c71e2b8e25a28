"""Command-line entry point: ``padicplural {encode,decode,fit,evaluate,compare}``.

Exit codes: 0 success, 1 input or I/O error, 2 domain error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .corpus import CorpusError, build_catalog, load_corpus_file, validate_corpus
from .harness import EvaluationRecord, accuracy_distributions, family_summary, sweep
from .padic import NotPrime
from .regress import (
    K_MAX,
    K_MIN,
    AlgorithmSpec,
    DataPoint,
    FitFailed,
    Variant,
    fit_padic,
    fit_siegel,
    residual_sum_padic,
)
from .stats import (
    DomainError,
    NoOverlappingLanguages,
    PlanRow,
    TestResult,
    compare_families,
    default_plan,
    global_vs_local_plan,
)
from .wordcode import InvalidCodePoint, NulCharacter, decode, encode

log = logging.getLogger("padicplural")

RECORD_COLUMNS = ("language_code", "variant", "p", "k", "n", "correct", "accuracy", "accuracy_decimal")
TEST_COLUMNS = ("family", "comparison", "n_languages", "w_plus", "p_raw", "p_corrected")
PLAN_COLUMNS = ("family", "variant_a", "variant_b", "correction", "m")

DOMAIN_ERRORS = (NulCharacter, InvalidCodePoint, FitFailed, NoOverlappingLanguages, DomainError, NotPrime)


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    input: Path
    output: Path
    p: int = 2
    variants: tuple[Variant, ...] = tuple(Variant)
    k_min: int = K_MIN
    k_max: int = K_MAX
    parallelism: int = 1
    seed: Optional[int] = None  # reserved; every algorithm is deterministic
    allow_any_k: bool = False
    specs: list[AlgorithmSpec] = field(init=False)

    def __post_init__(self):
        if self.k_min > self.k_max or self.k_min < 1:
            raise InputError(f"bad k range {self.k_min}..{self.k_max}")
        if not self.allow_any_k and (self.k_min < K_MIN or self.k_max > K_MAX):
            raise InputError(f"k range must lie within {K_MIN}..{K_MAX} (use --allow-any-k to override)")
        specs = []
        for v in self.variants:
            if v.is_local:
                specs.extend(AlgorithmSpec(v, self.p, k) for k in range(self.k_min, self.k_max + 1))
            else:
                specs.append(AlgorithmSpec(v, self.p))
        self.specs = specs


def format_records(records: Sequence[EvaluationRecord]) -> str:
    lines = ["\t".join(RECORD_COLUMNS)]
    for r in records:
        k = "" if r.spec.k is None else str(r.spec.k)
        lines.append(
            "\t".join(
                [r.language_code, r.label, str(r.spec.p), k, str(r.n), str(r.correct),
                 str(r.accuracy), f"{float(r.accuracy):.6f}"]
            )
        )
    return "\n".join(lines) + "\n"


def _tsv_rows(path: Path, columns: Sequence[str]) -> list[list[str]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].split("\t") != list(columns):
        raise InputError(f"{path}: line 1: expected header {chr(9).join(columns)!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cols = line.split("\t")
        if len(cols) != len(columns):
            raise InputError(f"{path}: line {lineno}: expected {len(columns)} columns, got {len(cols)}")
        rows.append(cols)
    return rows


def read_records(path: Path) -> list[EvaluationRecord]:
    out = []
    for lang, variant, p, k, n, correct, *_ in _tsv_rows(path, RECORD_COLUMNS):
        try:
            spec = AlgorithmSpec(Variant(variant), int(p), int(k) if k else None)
            out.append(EvaluationRecord(lang, spec, int(n), int(correct)))
        except ValueError as exc:
            raise InputError(f"{path}: bad record for {lang}: {exc}") from None
    return out


def read_plan(path: Path) -> list[PlanRow]:
    try:
        return [PlanRow(f, a, b, c, int(m)) for f, a, b, c, m in _tsv_rows(path, PLAN_COLUMNS)]
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{path}: {exc}") from None


def format_tests(results: Sequence[TestResult]) -> str:
    lines = ["\t".join(TEST_COLUMNS)]
    for t in results:
        lines.append(
            "\t".join([t.family, t.comparison, str(t.n_languages), str(t.w_plus), repr(t.p_raw), repr(t.p_corrected)])
        )
    return "\n".join(lines) + "\n"


def summary_document(records, catalog, config: Optional[RunConfig] = None) -> dict:
    doc = {
        "catalog": catalog,
        "family_summary": [
            {
                "family": s.family,
                "variant": s.variant,
                "mean_accuracy": str(s.mean_accuracy),
                "mean_accuracy_decimal": round(float(s.mean_accuracy), 6),
                "language_count": s.language_count,
            }
            for s in family_summary(records, catalog)
        ],
        "accuracy_distributions": accuracy_distributions(records),
    }
    if config is not None:
        doc["config"] = {
            "p": config.p,
            "variants": [v.value for v in config.variants],
            "k_min": config.k_min,
            "k_max": config.k_max,
        }
    return doc


def read_points(path: Path) -> list[DataPoint]:
    points = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise InputError(f"{path}: line {lineno}: expected 2 columns, got {len(cols)}")
        try:
            x, y = (Fraction(c.strip()) for c in cols)
        except ValueError:
            raise InputError(f"{path}: line {lineno}: not a number") from None
        points.append(DataPoint(_simplify(x), _simplify(y)))
    return points


def _simplify(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def cmd_encode(args) -> int:
    print(encode(args.word))
    return 0


def cmd_decode(args) -> int:
    try:
        n = int(args.number)
    except ValueError:
        raise InputError(f"not an integer: {args.number!r}") from None
    print(decode(n))
    return 0


def cmd_fit(args) -> int:
    points = read_points(Path(args.points))
    if args.metric == "padic":
        fit = fit_padic(points, args.p)
        print(f"m {fit.line.m}")
        print(f"b {fit.line.b}")
        print(f"residual {fit.residual_sum}")
        print(f"support {fit.support[0]} {fit.support[1]}")
        print(f"ties {fit.tie_count}")
    else:
        line = fit_siegel(points)
        print(f"m {line.m}")
        print(f"b {line.b}")
        print(f"residual {residual_sum_padic(points, line, args.p)}")
    return 0


def cmd_evaluate(args) -> int:
    variants = tuple(Variant(v) for v in args.variants.split(",")) if args.variants else tuple(Variant)
    config = RunConfig(
        Path(args.corpus), Path(args.out), args.p, variants, args.k_min, args.k_max,
        args.parallelism, args.seed, args.allow_any_k,
    )
    corpora = load_corpus_file(config.input)
    for c in corpora:
        for w in validate_corpus(c):
            log.warning("%s: %s", w.code, w.message)
    records = sweep(corpora, config.specs, workers=config.parallelism)
    catalog = build_catalog(corpora)
    config.output.mkdir(parents=True, exist_ok=True)
    (config.output / "records.tsv").write_text(format_records(records), encoding="utf-8")
    doc = summary_document(records, catalog, config)
    (config.output / "summary.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    log.info("wrote %d records to %s", len(records), config.output)
    return 0


def cmd_compare(args) -> int:
    records_path = Path(args.records)
    records = read_records(records_path)
    if args.corpus:
        catalog = build_catalog(load_corpus_file(args.corpus))
    else:
        summary = Path(args.summary) if args.summary else records_path.with_name("summary.json")
        try:
            catalog = json.loads(summary.read_text(encoding="utf-8"))["catalog"]
        except (KeyError, json.JSONDecodeError) as exc:
            raise InputError(f"{summary}: no catalog ({exc})") from None
    if args.plan:
        plan = read_plan(Path(args.plan))
    else:
        labels = {r.label for r in records}
        plan = [
            row for row in default_plan(catalog) + global_vs_local_plan(records, catalog)
            if row.variant_a in labels and row.variant_b in labels
        ]
    text = format_tests(compare_families(records, catalog, plan))
    out = Path(args.out) if args.out else records_path.with_name("tests.tsv")
    out.write_text(text, encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padicplural", description="Predict plurals by exact p-adic line fitting over encoded words.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="print the integer encoding of a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="print the word encoded by an integer")
    p.add_argument("number")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("fit", help="fit a line to a two-column TSV of points")
    p.add_argument("points")
    p.add_argument("--metric", choices=("padic", "siegel"), default="padic")
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("evaluate", help="leave-one-out evaluation of a corpus")
    p.add_argument("corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--variants", help="comma-separated subset of " + ",".join(v.value for v in Variant))
    p.add_argument("--k-min", type=int, default=K_MIN)
    p.add_argument("--k-max", type=int, default=K_MAX)
    p.add_argument("--allow-any-k", action="store_true", help=f"permit k outside {K_MIN}..{K_MAX}")
    p.add_argument("-j", "--parallelism", type=int, default=1)
    p.add_argument("--seed", type=int, help="reserved; all algorithms are deterministic")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="Wilcoxon comparisons between algorithms")
    p.add_argument("records")
    p.add_argument("--plan", help="TSV: " + "\\t".join(PLAN_COLUMNS))
    p.add_argument("--corpus", help="corpus TSV to read families from")
    p.add_argument("--summary", help="summary.json to read families from (default: next to records)")
    p.add_argument("--out", help="output path (default: tests.tsv next to records)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CorpusError, InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
