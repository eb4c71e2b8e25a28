"""Leave-one-out evaluation of algorithm configurations and family summaries."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import LanguageCorpus
from .regress import (
    AlgorithmSpec,
    DataPoint,
    FitFailed,
    PredictionNotAWord,
    Variant,
    line_to_word,
    padic_leave_one_out,
    predict_word,
    siegel_leave_one_out,
)
from .wordcode import encode

log = logging.getLogger(__name__)

ALL_FAMILY = "All"


class CorpusTooSmall(ValueError):
    pass


class NoRecords(LookupError):
    pass


@dataclass(frozen=True)
class EvaluationRecord:
    language_code: str
    spec: AlgorithmSpec
    n: int
    correct: int

    @property
    def accuracy(self) -> Fraction:
        return Fraction(self.correct, self.n)

    @property
    def label(self) -> str:
        return self.spec.label

    def sort_key(self):
        return (self.language_code, self.spec.sort_key())


@dataclass(frozen=True)
class FamilySummary:
    family: str
    variant: str
    mean_accuracy: Fraction
    language_count: int


def corpus_points(corpus: LanguageCorpus) -> list[DataPoint]:
    return [
        DataPoint(encode(pair.singular), encode(pair.plural), (pair.singular, pair.plural))
        for pair in corpus.pairs
    ]


def fold_predictions(corpus: LanguageCorpus, spec: AlgorithmSpec, shared: bool = True) -> list[Optional[str]]:
    """Held-out prediction for every pair (``None`` where prediction failed).

    With ``shared`` the global variants build their pair or slope table once
    for the whole corpus instead of refitting every fold; the result is the
    same.
    """
    points = corpus_points(corpus)
    if shared and not spec.variant.is_local:
        if spec.variant is Variant.GLOBAL_PADIC:
            lines = [f if isinstance(f, Exception) else f.line for f in padic_leave_one_out(points, spec.p)]
        else:
            lines = siegel_leave_one_out(points)
        out = []
        for line, pt in zip(lines, points):
            if isinstance(line, Exception):
                out.append(None)
                continue
            try:
                out.append(line_to_word(line, pt.x))
            except PredictionNotAWord:
                out.append(None)
        return out

    out = []
    for i, pair in enumerate(corpus.pairs):
        training = points[:i] + points[i + 1:]
        try:
            out.append(predict_word(spec, training, pair.singular))
        except (FitFailed, PredictionNotAWord):
            out.append(None)
    return out


def loocv(corpus: LanguageCorpus, spec: AlgorithmSpec, shared: bool = True) -> EvaluationRecord:
    """Leave-one-out exact-match accuracy of ``spec`` on one language.

    A failed prediction scores 0 for its fold; it never aborts the run.
    """
    n = len(corpus.pairs)
    if n < 2:
        raise CorpusTooSmall(f"{corpus.language_code}: {n} pair(s), need at least 2")
    predictions = fold_predictions(corpus, spec, shared)
    correct = sum(pred == pair.plural for pred, pair in zip(predictions, corpus.pairs))
    return EvaluationRecord(corpus.language_code, spec, n, correct)


def _run_cell(cell):
    corpus, spec = cell
    try:
        return loocv(corpus, spec)
    except CorpusTooSmall:
        return None


def sweep(
    corpora: Sequence[LanguageCorpus],
    variants: Sequence[AlgorithmSpec],
    workers: int = 1,
) -> list[EvaluationRecord]:
    """Run ``loocv`` on every (corpus, variant) cell.

    Corpora with fewer than two pairs are skipped with a warning.  Output is
    sorted by (language, variant, p, k) whatever ``workers`` is.
    """
    usable = []
    for c in corpora:
        if len(c.pairs) < 2:
            log.warning("skipping %s: %d pair(s), need at least 2", c.language_code, len(c.pairs))
        else:
            usable.append(c)
    cells = [(c, spec) for c in usable for spec in variants]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        results = [_run_cell(cell) for cell in cells]
    return sorted((r for r in results if r is not None), key=EvaluationRecord.sort_key)


def best_k(records: Iterable[EvaluationRecord], language: str, variant: str) -> EvaluationRecord:
    """Most accurate record for ``language``/``variant``; ties go to the smallest k."""
    matching = [r for r in records if r.language_code == language and r.label == variant]
    if not matching:
        raise NoRecords(f"no {variant} records for {language}")
    return min(matching, key=lambda r: (-r.accuracy, r.spec.k or 0, r.spec.p))


def language_scores(records: Iterable[EvaluationRecord]) -> dict[tuple[str, str], EvaluationRecord]:
    """One record per (language, variant label), local variants collapsed by best k."""
    records = list(records)
    keys = sorted({(r.language_code, r.label) for r in records})
    return {key: best_k(records, *key) for key in keys}


def _variant_order(label: str):
    try:
        return (Variant(label).order, label)
    except ValueError:
        return (len(Variant), label)


def family_summary(
    records: Iterable[EvaluationRecord], catalog: Mapping[str, Sequence[str]]
) -> list[FamilySummary]:
    """Unweighted mean accuracy per (family, variant), plus an ``All`` family.

    Families are reported in catalog order (sorted), then ``All``.
    """
    scores = language_scores(records)
    languages = sorted({lang for lang, _ in scores})
    labels = sorted({label for _, label in scores}, key=_variant_order)
    families = [(f, catalog[f]) for f in sorted(catalog) if f != ALL_FAMILY]
    families.append((ALL_FAMILY, languages))

    out = []
    for family, members in families:
        for label in labels:
            accs = [scores[(lang, label)].accuracy for lang in members if (lang, label) in scores]
            if accs:
                out.append(FamilySummary(family, label, sum(accs, Fraction(0)) / len(accs), len(accs)))
    return out


def accuracy_distributions(records: Iterable[EvaluationRecord]) -> dict[str, list[dict]]:
    """Per-variant list of per-language scores (best k for local variants)."""
    out: dict[str, list[dict]] = {}
    for (lang, label), rec in language_scores(records).items():
        out.setdefault(label, []).append(
            {"language_code": lang, "k": rec.spec.k, "accuracy": str(rec.accuracy)}
        )
    return {label: out[label] for label in sorted(out, key=_variant_order)}
