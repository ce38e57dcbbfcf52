"""Aggregation of indicator records: summaries, CDFs, rankings, scatter, histograms.

Undefined relative values (``None``) are left out of every statistic rather
than counted as zero.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal

from citeimpact.indicators import INDICATOR_NAMES, CiterProfile, IndicatorRecord, check_indicator

ALL_GROUP = "ALL"


class NoDefinedValues(ValueError):
    pass


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    median: float


@dataclass(frozen=True)
class RankRow:
    rank: int
    pub_id: str
    value: float | None
    record: IndicatorRecord


@dataclass(frozen=True)
class RankTable:
    indicator: str
    rows: list[RankRow]


@dataclass
class GroupSummaryTable:
    """``cells[(group, indicator)]``; the ``ALL`` group covers every record."""

    groups: list[str]
    indicators: list[str]
    cells: dict[tuple[str, str], SummaryStats] = field(default_factory=dict)

    def get(self, group: str, indicator: str) -> SummaryStats | None:
        return self.cells.get((group, indicator))

    def rows(self) -> list[tuple[str, str, SummaryStats]]:
        out = []
        for ind in self.indicators:
            for grp in [*self.groups, ALL_GROUP]:
                cell = self.cells.get((grp, ind))
                if cell is not None:
                    out.append((grp, ind, cell))
        return out


@dataclass(frozen=True)
class Histogram:
    side: str
    bins: list[tuple[int, int]]
    mean: float | None


def summarize(values: Iterable[float | None], skip_undefined: bool = True) -> SummaryStats:
    vals = list(values)
    if skip_undefined:
        vals = [v for v in vals if v is not None]
    elif any(v is None for v in vals):
        raise ValueError("undefined value present and skip_undefined is False")
    if not vals:
        raise NoDefinedValues("no defined values")
    n = len(vals)
    s = sorted(vals)
    mid = n // 2
    median = s[mid] if n % 2 else (s[mid - 1] + s[mid]) / 2
    return SummaryStats(n, sum(vals) / n, median)


def cdf(values: Iterable[float | None]) -> list[tuple[float, float]]:
    """Empirical CDF as ``(value, fraction of values <= value)`` per distinct value."""
    vals = sorted(v for v in values if v is not None)
    if not vals:
        raise NoDefinedValues("no defined values")
    n = len(vals)
    out: list[tuple[float, float]] = []
    for i, v in enumerate(vals):
        if i + 1 < n and vals[i + 1] == v:
            continue
        out.append((v, (i + 1) / n))
    return out


def _group_of(rec: IndicatorRecord, groups: Mapping[str, str | None] | None) -> str | None:
    if groups is None:
        return None
    return groups.get(rec.pub_id)


def group_summaries(records: Sequence[IndicatorRecord],
                    groups: Mapping[str, str | None] | None,
                    indicators: Sequence[str] = INDICATOR_NAMES) -> GroupSummaryTable:
    """Mean/median per (group, indicator) plus an ``ALL`` column.

    ``groups`` maps publication tokens to group labels; records without a
    label only count towards ``ALL``. Cells with no defined value are absent.
    """
    if not records:
        raise ValueError("no records to summarize")
    for ind in indicators:
        check_indicator(ind)
    by_group: dict[str, list[IndicatorRecord]] = {}
    for rec in records:
        g = _group_of(rec, groups)
        if g is not None:
            by_group.setdefault(g, []).append(rec)
    labels = sorted(by_group)
    table = GroupSummaryTable(labels, list(indicators))
    for ind in indicators:
        for label, recs in [*((lb, by_group[lb]) for lb in labels), (ALL_GROUP, records)]:
            try:
                table.cells[(label, ind)] = summarize(getattr(r, ind) for r in recs)
            except NoDefinedValues:
                pass
    return table


def group_cdfs(records: Sequence[IndicatorRecord],
               groups: Mapping[str, str | None] | None,
               indicators: Sequence[str]) -> list[tuple[str, str, float, float]]:
    """CDF rows ``(group, indicator, value, fraction)``, grouped like ``group_summaries``."""
    for ind in indicators:
        check_indicator(ind)
    by_group: dict[str, list[IndicatorRecord]] = {}
    for rec in records:
        g = _group_of(rec, groups)
        if g is not None:
            by_group.setdefault(g, []).append(rec)
    out = []
    for ind in indicators:
        for label in [*sorted(by_group), ALL_GROUP]:
            recs = records if label == ALL_GROUP else by_group[label]
            vals = [getattr(r, ind) for r in recs]
            if all(v is None for v in vals):
                continue
            out.extend((label, ind, v, frac) for v, frac in cdf(vals))
    return out


def rank_top(records: Iterable[IndicatorRecord], indicator: str, n: int) -> RankTable:
    """Top ``n`` by ``indicator``, descending; ties by ascending token, undefined last."""
    check_indicator(indicator)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    def key(r: IndicatorRecord):
        v = getattr(r, indicator)
        return (v is None, -(v if v is not None else 0), r.pub_id)

    ranked = sorted(records, key=key)[:n]
    rows = [RankRow(i, r.pub_id, getattr(r, indicator), r) for i, r in enumerate(ranked, 1)]
    return RankTable(indicator, rows)


def scatter(records: Iterable[IndicatorRecord], x: str, y: str
            ) -> tuple[list[tuple[str, float, float]], int]:
    """Points ``(pub_id, x, y)`` and the number of records skipped as undefined."""
    check_indicator(x)
    check_indicator(y)
    points = []
    omitted = 0
    for r in records:
        xv = getattr(r, x)
        yv = getattr(r, y)
        if xv is None or yv is None:
            omitted += 1
        else:
            points.append((r.pub_id, xv, yv))
    return points, omitted


def histogram(profiles: Sequence[CiterProfile],
              which: Literal["r_citing", "r_cited"]) -> Histogram:
    if which not in ("r_citing", "r_cited"):
        raise ValueError(f"which must be 'r_citing' or 'r_cited', got {which!r}")
    vals = [getattr(p, which) for p in profiles]
    counts = Counter(vals)
    mean = sum(vals) / len(vals) if vals else None
    return Histogram(which, sorted(counts.items()), mean)


__all__ = [
    "ALL_GROUP",
    "GroupSummaryTable",
    "Histogram",
    "INDICATOR_NAMES",
    "NoDefinedValues",
    "RankRow",
    "RankTable",
    "SummaryStats",
    "cdf",
    "group_cdfs",
    "group_summaries",
    "histogram",
    "rank_top",
    "scatter",
    "summarize",
]
