"""Line fitting under the p-adic metric, the Siegel baseline, and neighbourhoods.

A p-adic line of best fit always passes through two data points, so the
exact optimum is found by trying the line through every pair of points with
distinct ``x``.  Everything here is exact rational arithmetic.
"""
from __future__ import annotations

import enum
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .padic import INFINITY, check_prime, int_valuation, sum_of_inverse_powers, valuation
from .wordcode import InvalidCodePoint, decode, encode

Number = Union[int, Fraction]

#: Neighbourhood sizes explored for local and hybrid variants.
K_MIN, K_MAX = 3, 20


class FitFailed(ValueError):
    pass


class TooFewPoints(FitFailed):
    pass


class DegenerateX(FitFailed):
    pass


class PredictionNotAWord(ValueError):
    pass


class DataPoint(NamedTuple):
    x: Number
    y: Number
    provenance: Optional[tuple] = None


@dataclass(frozen=True, order=True)
class Line:
    m: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "b", Fraction(self.b))

    def __str__(self):
        return f"y = {self.m}*x + {self.b}"


@dataclass(frozen=True)
class FitResult:
    line: Line
    residual_sum: Fraction
    support: tuple[int, int]
    tie_count: int


class Variant(enum.Enum):
    GLOBAL_PADIC = "global_padic"
    GLOBAL_SIEGEL = "global_siegel"
    LOCAL_PADIC = "local_padic"
    LOCAL_SIEGEL = "local_siegel"
    HYBRID_SIEGEL = "hybrid_siegel"

    @property
    def is_local(self) -> bool:
        return self not in (Variant.GLOBAL_PADIC, Variant.GLOBAL_SIEGEL)

    @property
    def regressor(self) -> str:
        return "padic" if self in (Variant.GLOBAL_PADIC, Variant.LOCAL_PADIC) else "siegel"

    @property
    def order(self) -> int:
        return list(Variant).index(self)


@dataclass(frozen=True)
class AlgorithmSpec:
    """One algorithm configuration: variant, prime, and neighbourhood size."""

    variant: Variant
    p: int = 2
    k: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.variant, str):
            object.__setattr__(self, "variant", Variant(self.variant))
        check_prime(self.p)
        if self.variant.is_local:
            if self.k is None or self.k < 1:
                raise ValueError(f"{self.variant.value} needs a neighbourhood size k >= 1")
        elif self.k is not None:
            raise ValueError(f"{self.variant.value} takes no neighbourhood size")

    @property
    def label(self) -> str:
        return self.variant.value

    def sort_key(self):
        return (self.variant.order, self.p, self.k or 0)

    def metric(self) -> Optional["Metric"]:
        if self.variant is Variant.LOCAL_SIEGEL:
            return EUCLIDEAN
        if self.variant.is_local:
            return padic_metric(self.p)
        return None

    def __str__(self):
        return self.label if self.k is None else f"{self.label}(k={self.k})"


def standard_variants(p: int = 2, ks: Sequence[int] = range(K_MIN, K_MAX + 1)) -> list[AlgorithmSpec]:
    """The five algorithms: two global, and each local one at every ``k``."""
    specs = [AlgorithmSpec(Variant.GLOBAL_PADIC, p), AlgorithmSpec(Variant.GLOBAL_SIEGEL, p)]
    for v in (Variant.LOCAL_PADIC, Variant.LOCAL_SIEGEL, Variant.HYBRID_SIEGEL):
        specs.extend(AlgorithmSpec(v, p, k) for k in ks)
    return specs


def _xy(points) -> tuple[list, list]:
    return [pt[0] for pt in points], [pt[1] for pt in points]


def _all_int(values) -> bool:
    return all(type(v) is int for v in values)


def residual_sum_padic(points: Sequence, line: Line, p: int) -> Fraction:
    """Exact ``sum(|y - (m*x + b)|_p)`` over ``points``."""
    check_prime(p)
    xs, ys = _xy(points)
    if _all_int(xs) and _all_int(ys):
        # y - m*x - b == (y*md*bd - mn*bd*x - bn*md) / (md*bd)
        mn, md = line.m.numerator, line.m.denominator
        bn, bd = line.b.numerator, line.b.denominator
        den = md * bd
        slope, const = mn * bd, bn * md
        vden = int_valuation(den, p)
        vals = [int_valuation(y * den - slope * x - const, p) - vden for x, y in zip(xs, ys)]
    else:
        vals = [valuation(Fraction(y) - line.m * x - line.b, p) for x, y in zip(xs, ys)]
    return sum_of_inverse_powers(vals, p)


def predict(line: Line, x: Number) -> Fraction:
    return line.m * x + line.b


class _PairTable:
    """Residual valuations of every distinct line through two data points.

    ``rows[L][j]`` is the valuation of point ``j``'s residual against line
    ``L`` (``None`` when the point lies on it).  Residual sums are held as
    integers on a shared ``p**-scale`` grid so that dropping one point from
    the training set is a single integer subtraction.
    """

    def __init__(self, points: Sequence, p: int):
        check_prime(p)
        self.p = p
        xs, ys = _xy(points)
        self.xs, self.n = xs, len(xs)
        integral = _all_int(xs) and _all_int(ys)
        if not integral:
            xs = [Fraction(x) for x in xs]
            ys = [Fraction(y) for y in ys]

        self.lines: list[Line] = []
        self.rows: list[list] = []
        self.on_line: list[list[int]] = []
        covered = [set() for _ in range(self.n)]
        for a in range(self.n):
            xa, ya = xs[a], ys[a]
            dxs = [x - xa for x in xs]
            dys = [y - ya for y in ys]
            for c in range(a + 1, self.n):
                dx = dxs[c]
                if dx == 0 or c in covered[a]:
                    continue
                dy = dys[c]
                if integral:
                    vdx = int_valuation(dx, p)
                    row = [_row_val(u * dx - dy * w, p, vdx) for u, w in zip(dys, dxs)]
                else:
                    vdx = valuation(dx, p)
                    row = [_frac_row_val(u * dx - dy * w, p, vdx) for u, w in zip(dys, dxs)]
                on = [j for j, r in enumerate(row) if r is None]
                for i in on:
                    covered[i].update(on)
                m = Fraction(dy) / dx
                self.lines.append(Line(m, ya - m * xa))
                self.rows.append(row)
                self.on_line.append(on)

        finite = [r for row in self.rows for r in row if r is not None]
        self.scale = max(finite) if finite else 0
        self.costs = [sum(self._term(r) for r in row if r is not None) for row in self.rows]
        self.order = sorted(range(len(self.lines)), key=lambda i: (self.lines[i].m, self.lines[i].b))
        self.fragile = [self._fragile_points(on) for on in self.on_line]

    def _term(self, r: int) -> int:
        if self.p == 2:
            return 1 << (self.scale - r)
        return self.p ** (self.scale - r)

    def _fragile_points(self, on: list[int]) -> frozenset:
        # Points whose removal leaves fewer than two distinct x on the line.
        counts: dict = {}
        for j in on:
            counts[self.xs[j]] = counts.get(self.xs[j], 0) + 1
        if len(counts) > 2:
            return frozenset()
        return frozenset(j for j in on if counts[self.xs[j]] == 1)

    def _exact(self, cost: int) -> Fraction:
        if self.scale >= 0:
            return Fraction(cost, self.p**self.scale)
        return Fraction(cost * self.p ** (-self.scale))

    def best(self, exclude: Optional[int] = None) -> FitResult:
        """Optimal line on all points, or on all but point ``exclude``.

        Ties go to the lexicographically smallest ``(m, b)``.
        """
        size = self.n - (exclude is not None)
        if size < 2:
            raise TooFewPoints(f"need at least 2 points, got {size}")
        best_cost = None
        best_line = -1
        ties = 0
        for li in self.order:
            cost = self.costs[li]
            if exclude is not None:
                if exclude in self.fragile[li]:
                    continue
                r = self.rows[li][exclude]
                if r is not None:
                    cost -= self._term(r)
            if best_cost is None or cost < best_cost:
                best_cost, best_line, ties = cost, li, 1
            elif cost == best_cost:
                ties += 1
        if best_cost is None:
            raise DegenerateX("all x values are equal")
        return FitResult(
            self.lines[best_line],
            self._exact(best_cost),
            self._support(best_line, exclude),
            ties,
        )

    def _support(self, li: int, exclude: Optional[int]) -> tuple[int, int]:
        on = [j for j in self.on_line[li] if j != exclude]
        for ai, a in enumerate(on):
            for c in on[ai + 1:]:
                if self.xs[a] != self.xs[c]:
                    if exclude is None:
                        return (a, c)
                    # Re-index into the training list with ``exclude`` removed.
                    return (a - (a > exclude), c - (c > exclude))
        raise AssertionError("line without two distinct-x support points")


def _row_val(n: int, p: int, vdx: int):
    if n == 0:
        return None
    return int_valuation(n, p) - vdx


def _frac_row_val(n: Fraction, p: int, vdx):
    if n == 0:
        return None
    return valuation(n, p) - vdx


def fit_padic(points: Sequence, p: int = 2) -> FitResult:
    """Exact p-adic line of best fit by enumerating all point pairs, O(n^3).

    Pairs sharing an ``x`` are skipped.  Duplicate points count once per
    occurrence.  ``tie_count`` is the number of distinct lines attaining the
    minimal residual sum; the reported line is the smallest ``(m, b)``.

    Raises:
        TooFewPoints: fewer than two points.
        DegenerateX: every point has the same ``x``.
    """
    if len(points) < 2:
        raise TooFewPoints(f"need at least 2 points, got {len(points)}")
    return _PairTable(points, p).best()


def padic_leave_one_out(points: Sequence, p: int = 2) -> list:
    """``fit_padic`` on every leave-one-out subset, sharing one pair table.

    Entry ``i`` is the FitResult for ``points`` without point ``i`` (support
    indices refer to that reduced list), or the FitFailed it raised.
    """
    if len(points) < 2:
        return [TooFewPoints("need at least 2 points") for _ in points]
    table = _PairTable(points, p)
    out = []
    for i in range(len(points)):
        try:
            out.append(table.best(exclude=i))
        except FitFailed as exc:
            out.append(exc)
    return out


def _median(sorted_vals: Sequence[Fraction]) -> Fraction:
    n = len(sorted_vals)
    mid = n // 2
    if n % 2:
        return sorted_vals[mid]
    return (sorted_vals[mid - 1] + sorted_vals[mid]) / 2


def _median_without(sorted_vals: list, drop: int) -> Fraction:
    # Median of sorted_vals with the element at index ``drop`` removed.
    n = len(sorted_vals) - 1
    mid = n // 2

    def at(k):
        return sorted_vals[k if k < drop else k + 1]

    if n % 2:
        return at(mid)
    return (at(mid - 1) + at(mid)) / 2


class _SiegelTable:
    def __init__(self, points: Sequence):
        xs, ys = _xy(points)
        self.xs = [Fraction(x) for x in xs]
        self.ys = [Fraction(y) for y in ys]
        self.n = len(xs)
        self.slopes = []
        for i in range(self.n):
            xi, yi = self.xs[i], self.ys[i]
            s = [(self.ys[j] - yi) / (self.xs[j] - xi) for j in range(self.n) if self.xs[j] != xi]
            s.sort()
            self.slopes.append(s)

    def fit(self, exclude: Optional[int] = None) -> Line:
        size = self.n - (exclude is not None)
        if size < 2:
            raise TooFewPoints(f"need at least 2 points, got {size}")
        keep = [i for i in range(self.n) if i != exclude]
        inner = []
        for i in keep:
            s = self.slopes[i]
            if exclude is not None and self.xs[exclude] != self.xs[i]:
                gone = (self.ys[exclude] - self.ys[i]) / (self.xs[exclude] - self.xs[i])
                if len(s) > 1:
                    inner.append(_median_without(s, bisect_left(s, gone)))
            elif s:
                inner.append(_median(s))
        if not inner:
            raise DegenerateX("all x values are equal")
        inner.sort()
        m = _median(inner)
        intercepts = sorted(self.ys[i] - m * self.xs[i] for i in keep)
        return Line(m, _median(intercepts))


def fit_siegel(points: Sequence) -> Line:
    """Siegel repeated-median line over exact rationals.

    ``m = median_i median_j slope(i, j)`` over partners with a different
    ``x``; points without such a partner are left out of the outer median.
    ``b = median_i (y_i - m*x_i)``.  Even-length medians average the middle
    pair.
    """
    if len(points) < 2:
        raise TooFewPoints(f"need at least 2 points, got {len(points)}")
    return _SiegelTable(points).fit()


def siegel_leave_one_out(points: Sequence) -> list:
    """``fit_siegel`` on every leave-one-out subset (Line or FitFailed per entry)."""
    if len(points) < 2:
        return [TooFewPoints("need at least 2 points") for _ in points]
    table = _SiegelTable(points)
    out = []
    for i in range(len(points)):
        try:
            out.append(table.fit(exclude=i))
        except FitFailed as exc:
            out.append(exc)
    return out


@dataclass(frozen=True)
class Metric:
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("padic", "euclidean"):
            raise ValueError(f"unknown metric {self.kind!r}")
        if self.kind == "padic":
            check_prime(self.p)


EUCLIDEAN = Metric("euclidean")


def padic_metric(p: int = 2) -> Metric:
    return Metric("padic", p)


def neighbors(query_x: Number, training: Sequence, metric: Metric, k: int) -> list:
    """The ``k`` training points whose ``x`` is nearest ``query_x``.

    Ties are broken by absolute difference, then by ``x`` and ``y``, so the
    result does not depend on the order of ``training``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if metric.kind == "padic":
        p = metric.p
        integral = type(query_x) is int

        def key(pt):
            diff = query_x - pt[0]
            v = int_valuation(diff, p) if integral and type(pt[0]) is int else valuation(diff, p)
            return (-v, abs(diff), pt[0], pt[1])
    else:
        def key(pt):
            return (abs(query_x - pt[0]), pt[0], pt[1])

    return sorted(training, key=key)[:k]


def line_to_word(line: Line, x: Number) -> str:
    """Decode the prediction of ``line`` at ``x``.

    Raises:
        PredictionNotAWord: the prediction is fractional, negative, or not a
            valid code-point packing.
    """
    y = predict(line, x)
    if y.denominator != 1 or y < 0:
        raise PredictionNotAWord(f"prediction {y} is not a natural number")
    try:
        return decode(y.numerator)
    except InvalidCodePoint as exc:
        raise PredictionNotAWord(str(exc)) from exc


def fit_line(spec: AlgorithmSpec, points: Sequence) -> Line:
    if spec.variant.regressor == "padic":
        return fit_padic(points, spec.p).line
    return fit_siegel(points)


def predict_word(spec: AlgorithmSpec, training: Sequence, query: str) -> str:
    """Predict the plural of ``query`` from singular/plural training points.

    Local and hybrid variants first restrict training to the ``k`` nearest
    singulars (p-adic, or Euclidean for local Siegel).

    Raises:
        PredictionNotAWord, FitFailed
    """
    if not training:
        raise TooFewPoints("empty training set")
    qx = encode(query)
    if spec.variant.is_local:
        training = neighbors(qx, training, spec.metric(), spec.k)
    return line_to_word(fit_line(spec, training), qx)
