"""Recovery-cost and load-balance metrics for a (code, placement) pair.

Five aggregates, all exact rationals:

    adrc  - mean repair helper count over data blocks (degraded read)
    cdrc  - mean cross-cluster helper count over data blocks
    arc   - mean repair helper count over all n blocks (reconstruction);
            this is the recovery locality r-bar
    carc  - mean cross-cluster helper count over all n blocks
    lbnr  - normal-read load balance: max cluster data-block count over
            the mean across clusters holding at least one stripe block

Costs are in block units; byte conversion happens in the simulator.
A normal read touches data blocks only, so lbnr counts those alone.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

from .codes import CodeDefinition, repair_plan
from .placement import PlacementMap, cross_cluster_cost


@dataclass(frozen=True)
class MetricsReport:
    per_block_cost: tuple[int, ...]
    per_block_cross_cost: tuple[int, ...]
    adrc: Fraction
    cdrc: Fraction
    arc: Fraction
    carc: Fraction
    lbnr: Fraction

    @property
    def r_bar(self) -> Fraction:
        return self.arc


def compute_metrics(code: CodeDefinition, pmap: PlacementMap) -> MetricsReport:
    n, k = code.spec.n, code.spec.k
    cost = tuple(len(repair_plan(code, b).helpers) for b in range(n))
    cross = tuple(cross_cluster_cost(code, pmap, b) for b in range(n))
    return MetricsReport(
        per_block_cost=cost,
        per_block_cross_cost=cross,
        adrc=Fraction(sum(cost[:k]), k),
        cdrc=Fraction(sum(cross[:k]), k),
        arc=Fraction(sum(cost), n),
        carc=Fraction(sum(cross), n),
        lbnr=lbnr_of(pmap, code),
    )


def lbnr_of(pmap: PlacementMap, code: CodeDefinition) -> Fraction:
    """Max over clusters of data blocks read in a full-stripe normal read,
    divided by the mean over clusters holding at least one stripe block."""
    k = code.spec.k
    data_counts = []
    for blocks in pmap.clusters():
        if blocks:
            data_counts.append(sum(1 for b in blocks if b < k))
    if not data_counts or k == 0:
        return Fraction(1)
    mean = Fraction(sum(data_counts), len(data_counts))
    return Fraction(max(data_counts)) / mean


METRIC_COLUMNS = ("family", "scheme", "metric", "value")
METRIC_NAMES = ("adrc", "cdrc", "arc", "carc", "lbnr", "r_bar")


def write_metrics_csv(
    out: TextIO, rows: Iterable[tuple[str, str, MetricsReport]]
) -> None:
    """One row per (family, scheme, metric); values at 6 significant digits."""
    writer = csv.writer(out)
    writer.writerow(METRIC_COLUMNS)
    for family, scheme, report in rows:
        for name in METRIC_NAMES:
            value = getattr(report, name)
            writer.writerow([family, scheme, name, f"{float(value):.6g}"])
