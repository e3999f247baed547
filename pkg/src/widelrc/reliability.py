"""Markov reliability model: recovery traffic, repair rates, and MTTDL.

The chain tracks how many of a stripe's n nodes are alive.  From state i
(n-f <= i <= n) any of the i nodes fails at rate i*lambda; one failure is
repaired at rate mu (bandwidth-limited, traffic-dependent), deeper states
repair at rate mu' = 1/T (detect-and-trigger time).  The state below n-f
is absorbing data loss.

Two solvers:

  mttdl_exact    expected first-passage time to absorption from the
                 all-alive state, solved as a linear system in exact
                 rational arithmetic.  Authoritative.
  mttdl_product  closed-form chain product: (product of repair rates) /
                 (product of failure rates).  The dimensionally
                 consistent orientation; agrees with the exact solver to
                 within 10% whenever repairs are much faster than
                 failures, which holds for every default configuration.

Unit conventions: node capacity in bytes, bandwidth in bits/s (converted
internally), rates in 1/s, results reported in years of 365.25 days.
Everything is a Fraction, so results are exact and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

import csv

from .codes import CodeDefinition
from .errors import ModelError, ParameterError
from .metrics import MetricsReport, compute_metrics
from .placement import PlacementMap

SECONDS_PER_YEAR = Fraction(31557600)  # 365.25 days


@dataclass(frozen=True)
class MarkovParams:
    """Model inputs; defaults follow common storage-cluster assumptions."""

    num_nodes: int = 400
    node_capacity_bytes: Fraction = Fraction(16 * 10**12)
    node_bandwidth_bits: Fraction = Fraction(10**9)
    recovery_fraction: Fraction = Fraction(1, 10)
    delta: Fraction = Fraction(1, 10)
    detect_trigger_seconds: Fraction = Fraction(1800)
    failure_rate: Fraction = Fraction(1, 4 * 31557600)  # node MTTF 4 years
    tolerated_failures: int = 1

    def __post_init__(self) -> None:
        if self.tolerated_failures < 1:
            raise ParameterError("need at least one tolerated failure")
        if not (0 < self.delta <= 1):
            raise ParameterError("delta must be in (0, 1]")


def default_params(f: int) -> MarkovParams:
    """The standard parameter set: N=400, S=16 TB, B=1 Gb/s, eps=0.1,
    delta=0.1, T=30 min, node MTTF 4 years."""
    return MarkovParams(
        failure_rate=Fraction(1) / (4 * SECONDS_PER_YEAR),
        tolerated_failures=f,
    )


@dataclass(frozen=True)
class RecoveryCost:
    """Average per-block repair traffic, split by locality (block units)."""

    c1: Fraction  # cross-cluster blocks
    c2: Fraction  # inner-cluster blocks
    delta: Fraction

    @property
    def combined(self) -> Fraction:
        return self.c1 + self.delta * self.c2


def recovery_cost(
    code: CodeDefinition,
    pmap: PlacementMap,
    delta: Fraction,
    report: MetricsReport | None = None,
) -> RecoveryCost:
    """c1 = cross-cluster average recovery cost, c2 = the inner remainder."""
    if report is None:
        report = compute_metrics(code, pmap)
    return RecoveryCost(c1=report.carc, c2=report.arc - report.carc, delta=delta)


@dataclass(frozen=True)
class MarkovChain:
    """Birth-death chain over alive-node counts with one absorbing state.

    failure_rates[i] is the rate out of state (n - i) downwards, for
    i = 0..f; repair_rates[i] is the rate from state (n - 1 - i) back up,
    for i = 0..f-1 (index 0 is the bandwidth-limited single-failure rate).
    """

    n: int
    failure_rates: tuple[Fraction, ...]
    repair_rates: tuple[Fraction, ...]

    @property
    def f(self) -> int:
        return len(self.failure_rates) - 1


def repair_rate(params: MarkovParams, cost: RecoveryCost) -> Fraction:
    """mu: recovery bandwidth of the surviving nodes over the traffic.

    Total recovery bandwidth is eps*(N-1)*B; the data to move is the
    combined per-block traffic times the node capacity.
    """
    c = cost.combined
    if c <= 0:
        raise ModelError("combined recovery traffic must be positive")
    bandwidth_bytes = (
        params.recovery_fraction * (params.num_nodes - 1) * params.node_bandwidth_bits
    ) / 8
    return bandwidth_bytes / (c * params.node_capacity_bytes)


def build_chain(params: MarkovParams, cost: RecoveryCost, n: int) -> MarkovChain:
    f = params.tolerated_failures
    if f > n:
        raise ParameterError("cannot tolerate more failures than nodes")
    lam = params.failure_rate
    failure_rates = tuple(Fraction(n - i) * lam for i in range(f + 1))
    mu = repair_rate(params, cost)
    mu_prime = Fraction(1) / params.detect_trigger_seconds
    repair_rates = (mu,) + tuple(mu_prime for _ in range(f - 1))
    return MarkovChain(n=n, failure_rates=failure_rates, repair_rates=repair_rates)


def mttdl_exact(chain: MarkovChain) -> Fraction:
    """Expected time to absorption from the all-alive state, in years.

    With E[i] the expected absorption time from the state with i failures
    (i = 0..f), E[f+1] = 0:
        E[i] = 1/R_i + (fail_i/R_i) E[i+1] + (rep_i/R_i) E[i-1]
    solved by backward substitution expressing E[i] = a_i + b_i * E[i-1].
    """
    f = chain.f
    fail = chain.failure_rates
    rep = (Fraction(0),) + chain.repair_rates  # rep[i] is upward rate at i failures
    if any(r <= 0 for r in fail) or any(r <= 0 for r in chain.repair_rates):
        raise ModelError("all transition rates must be positive")
    # coefficients: E[i] = alpha[i] + beta[i] * E[i-1], computed from i=f down
    alpha = [Fraction(0)] * (f + 1)
    beta = [Fraction(0)] * (f + 1)
    for i in range(f, 0, -1):
        total = fail[i] + rep[i]
        if i == f:
            denom = total
            alpha[i] = Fraction(1) / denom
            beta[i] = rep[i] / denom
        else:
            # E[i] = (1 + fail_i*E[i+1] + rep_i*E[i-1]) / total with
            # E[i+1] = alpha[i+1] + beta[i+1]*E[i]
            denom = total - fail[i] * beta[i + 1]
            alpha[i] = (1 + fail[i] * alpha[i + 1]) / denom
            beta[i] = rep[i] / denom
    e0 = (1 + fail[0] * alpha[1]) / (fail[0] - fail[0] * beta[1]) if f >= 1 else (
        Fraction(1) / fail[0]
    )
    return e0 / SECONDS_PER_YEAR


def mttdl_product(chain: MarkovChain) -> Fraction:
    """Chain-product approximation in years: repair rates over failure rates."""
    num = Fraction(1)
    for r in chain.repair_rates:
        num *= r
    den = Fraction(1)
    for r in chain.failure_rates:
        den *= r
    return (num / den) / SECONDS_PER_YEAR


@dataclass(frozen=True)
class MttdlResult:
    exact_years: Fraction
    product_years: Fraction
    chain: MarkovChain
    cost: RecoveryCost


def evaluate(
    params: MarkovParams, cost: RecoveryCost, n: int
) -> MttdlResult:
    chain = build_chain(params, cost, n)
    return MttdlResult(
        exact_years=mttdl_exact(chain),
        product_years=mttdl_product(chain),
        chain=chain,
        cost=cost,
    )


RELIABILITY_COLUMNS = (
    "scheme",
    "family",
    "c1",
    "c2",
    "c",
    "mttdl_exact_years",
    "mttdl_product_years",
)


def write_reliability_csv(
    out: TextIO, rows: Iterable[tuple[str, str, MttdlResult]]
) -> None:
    writer = csv.writer(out)
    writer.writerow(RELIABILITY_COLUMNS)
    for scheme, family, res in rows:
        writer.writerow(
            [
                scheme,
                family,
                f"{float(res.cost.c1):.6g}",
                f"{float(res.cost.c2):.6g}",
                f"{float(res.cost.combined):.6g}",
                f"{float(res.exact_years):.6g}",
                f"{float(res.product_years):.6g}",
            ]
        )
