"""One-sided Wilcoxon signed-rank test with Pratt zero handling, and corrections.

p-values are the only floating-point quantities in the package; ranks and
the test statistic stay exact.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .harness import ALL_FAMILY, language_scores

log = logging.getLogger(__name__)

#: Largest number of nonzero differences tested by exact enumeration.
EXACT_MAX_N = 20

SIDAK = "sidak"
BONFERRONI = "bonferroni"


class EmptyInput(ValueError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class WilcoxonResult:
    w_plus: Fraction
    n_nonzero: int
    p_value: float
    method: str


def pratt_ranks(differences: Sequence) -> list[Fraction]:
    """Midranks of ``|d|`` with the zeros included in the ranking."""
    absd = [abs(Fraction(d)) for d in differences]
    order = sorted(range(len(absd)), key=absd.__getitem__)
    ranks = [Fraction(0)] * len(absd)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and absd[order[j + 1]] == absd[order[i]]:
            j += 1
        mid = Fraction(i + j + 2, 2)
        for t in range(i, j + 1):
            ranks[order[t]] = mid
        i = j + 1
    return ranks


def _exact_upper_tail(ranks: Sequence[Fraction], w_plus: Fraction) -> Fraction:
    # Distribution of W+ over all 2**n sign patterns; midranks are multiples of 1/2.
    doubled = [int(2 * r) for r in ranks]
    counts = [1] + [0] * sum(doubled)
    top = 0
    for r in doubled:
        for s in range(top, -1, -1):
            if counts[s]:
                counts[s + r] += counts[s]
        top += r
    threshold = int(2 * w_plus)
    return Fraction(sum(counts[threshold:]), 2 ** len(doubled))


def _normal_upper_tail(ranks: Sequence[Fraction], w_plus: Fraction) -> float:
    mean = sum(ranks) / 2
    var = sum(r * r for r in ranks) / 4
    z = (float(w_plus - mean) - 0.5) / math.sqrt(var)
    return 0.5 * math.erfc(z / math.sqrt(2))


def wilcoxon_pratt(differences: Sequence, method: str = "auto") -> WilcoxonResult:
    """Signed-rank test of the alternative "differences tend to be positive".

    Zeros take part in the ranking (Pratt) and are then dropped.  The
    p-value is ``P(W+ >= observed)`` under random signs on the nonzero
    entries: exact for at most ``EXACT_MAX_N`` of them (``method="auto"``),
    otherwise a normal approximation with a 0.5 continuity correction whose
    variance uses the actual midranks.
    """
    if len(differences) == 0:
        raise EmptyInput("no differences to test")
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    diffs = [Fraction(d) for d in differences]
    ranks = pratt_ranks(diffs)
    nonzero = [(r, d) for r, d in zip(ranks, diffs) if d != 0]
    w_plus = sum((r for r, d in nonzero if d > 0), Fraction(0))
    if not nonzero:
        return WilcoxonResult(w_plus, 0, 1.0, "exact")
    kept = [r for r, _ in nonzero]
    if method == "exact" or (method == "auto" and len(kept) <= EXACT_MAX_N):
        p = float(_exact_upper_tail(kept, w_plus))
        method = "exact"
    else:
        p = _normal_upper_tail(kept, w_plus)
        method = "normal"
    return WilcoxonResult(w_plus, len(kept), min(1.0, max(0.0, p)), method)


def wilcoxon_pratt_one_sided(differences: Sequence, method: str = "auto") -> float:
    return wilcoxon_pratt(differences, method).p_value


def _check(p: float, m: int):
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"p-value {p} outside [0, 1]")
    if m < 1:
        raise DomainError(f"number of tests must be >= 1, got {m}")


def sidak_style_correct(p: float, m: int = 80) -> float:
    """Family-wise probability ``1 - (1 - p)**m``."""
    _check(p, m)
    corrected = -math.expm1(m * math.log1p(-p)) if p < 1 else 1.0
    return min(1.0, max(p, corrected))


def bonferroni_correct(p: float, m: int) -> float:
    _check(p, m)
    return min(1.0, m * p)


CORRECTIONS = {SIDAK: sidak_style_correct, BONFERRONI: bonferroni_correct}


def correct(p: float, correction: str, m: int) -> float:
    try:
        fn = CORRECTIONS[correction]
    except KeyError:
        raise ValueError(f"unknown correction {correction!r}") from None
    return fn(p, m)


class NoOverlappingLanguages(ValueError):
    pass


@dataclass(frozen=True)
class PlanRow:
    family: str
    variant_a: str
    variant_b: str
    correction: str = SIDAK
    m: int = 80

    def __post_init__(self):
        if self.correction not in CORRECTIONS:
            raise ValueError(f"unknown correction {self.correction!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")


@dataclass(frozen=True)
class TestResult:
    family: str
    variant_a: str
    variant_b: str
    n_languages: int
    w_plus: Fraction
    n_nonzero: int
    p_raw: float
    p_corrected: float
    correction: str
    m: int

    __test__ = False  # not a pytest class

    @property
    def comparison(self) -> str:
        return f"{self.variant_a}>{self.variant_b}"


#: The four per-family comparisons: (variant hypothesised better, baseline).
FAMILY_TESTS = (
    ("global_padic", "global_siegel"),
    ("local_padic", "local_siegel"),
    ("local_padic", "hybrid_siegel"),
    ("hybrid_siegel", "local_siegel"),
)


def _families(catalog) -> list[str]:
    return [f for f in sorted(catalog) if f != ALL_FAMILY] + [ALL_FAMILY]


def default_plan(catalog) -> list[PlanRow]:
    """Four tests per family (``All`` included), Sidak-style over all of them."""
    families = _families(catalog)
    m = len(families) * len(FAMILY_TESTS)
    return [PlanRow(f, a, b, SIDAK, m) for f in families for a, b in FAMILY_TESTS]


def _members(family, catalog, scores) -> list[str]:
    if family == ALL_FAMILY:
        return sorted({lang for lang, _ in scores})
    return sorted(catalog.get(family, ()))


def global_vs_local_plan(records, catalog) -> list[PlanRow]:
    """Local vs global p-adic in each family, Bonferroni within each direction.

    Families where local p-adic has the higher mean accuracy test
    ``local_padic > global_padic``; the rest test the reverse.  Each group is
    corrected for its own size.
    """
    scores = language_scores(records)
    local_better, global_better = [], []
    for family in _families(catalog):
        langs = [
            lang for lang in _members(family, catalog, scores)
            if (lang, "local_padic") in scores and (lang, "global_padic") in scores
        ]
        if not langs:
            continue
        diff = sum(scores[(l, "local_padic")].accuracy - scores[(l, "global_padic")].accuracy for l in langs)
        (local_better if diff > 0 else global_better).append(family)
    return [PlanRow(f, "local_padic", "global_padic", BONFERRONI, len(local_better)) for f in local_better] + [
        PlanRow(f, "global_padic", "local_padic", BONFERRONI, len(global_better)) for f in global_better
    ]


def compare_families(records, catalog, plan) -> list[TestResult]:
    """Run each plan row as a one-sided Pratt-Wilcoxon test across languages.

    Differences are ``accuracy(A) - accuracy(B)`` per language, with local
    variants collapsed by best k.  Languages lacking either side are dropped
    with a warning.

    Raises:
        NoOverlappingLanguages: a plan row has no language scored on both sides.
    """
    scores = language_scores(records)
    results = []
    for row in plan:
        members = _members(row.family, catalog, scores)
        diffs = []
        dropped = []
        for lang in members:
            a, b = scores.get((lang, row.variant_a)), scores.get((lang, row.variant_b))
            if a is None or b is None:
                dropped.append(lang)
            else:
                diffs.append(a.accuracy - b.accuracy)
        if dropped:
            log.warning("%s %s>%s: dropped %s", row.family, row.variant_a, row.variant_b, ", ".join(dropped))
        if not diffs:
            raise NoOverlappingLanguages(
                f"{row.family}: no language has both {row.variant_a} and {row.variant_b}"
            )
        w = wilcoxon_pratt(diffs)
        results.append(
            TestResult(
                row.family, row.variant_a, row.variant_b, len(diffs), w.w_plus, w.n_nonzero,
                w.p_value, correct(w.p_value, row.correction, row.m), row.correction, row.m,
            )
        )
    return results
