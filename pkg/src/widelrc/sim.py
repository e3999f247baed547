"""Deterministic discrete-event simulator over a two-tier bandwidth topology.

Model: every block lives on its own node behind a per-node inner link;
each cluster shares one gateway link for all cross-cluster traffic (both
directions).  A transfer's rate is the minimum over its links of
capacity / concurrent-transfer-count; rates are recomputed at every
completion, and time is exact rational, so identical configs (including
the seed) produce bit-identical results.  Compute time is ignored: the
regimes of interest are network-dominated.

Latency is measured client request-to-last-byte.  For repairs, helper
transfers complete before the rebuilt block leaves the repair site.

Single-threaded event loop per run; no shared mutable state across runs.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

from .codes import CodeDefinition, repair_plan
from .errors import ParameterError
from .placement import ClusterTopology, PlacementMap

CLIENT = ("client", None)  # sits outside every cluster, unconstrained link

WORKLOAD_NORMAL_READ = "normal_read"
WORKLOAD_DEGRADED_READ = "degraded_read"
WORKLOAD_RECONSTRUCTION = "reconstruction"
WORKLOAD_FULL_NODE = "full_node"


@dataclass(frozen=True)
class Workload:
    kind: str
    requests: int = 1
    stripes: int = 0  # full_node: stripes owned by the failed node
    failed_node_bytes: int = 0  # full_node: alternative to stripes
    replacement_pool: int = 4  # full_node: round-robin rebuild targets
    object_sizes: tuple[int, ...] = ()
    object_ratios: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class SimConfig:
    topology: ClusterTopology
    block_size: int
    code: CodeDefinition
    pmap: PlacementMap
    workload: Workload
    seed: int = 0

    def __post_init__(self) -> None:
        if self.block_size <= 0:
            raise ParameterError("block_size must be positive")


@dataclass(frozen=True)
class SimResult:
    throughput: Fraction  # bytes/s
    latency_samples: tuple[Fraction, ...]
    cross_cluster_bytes: int
    inner_cluster_bytes: int


@dataclass
class _Transfer:
    links: tuple
    remaining: Fraction
    label: str = ""
    done_at: Fraction | None = None


def _links_for(src, dst, topology: ClusterTopology):
    """Link set crossed by a src-node -> dst-node transfer.

    Nodes are (tag, cluster) pairs; cluster None means outside every
    cluster (the client), reached through an unconstrained link.
    """
    links = []
    src_cluster = src[1]
    dst_cluster = dst[1]
    if src_cluster is not None:
        links.append(("node", src))
        if dst_cluster != src_cluster:
            links.append(("gw", src_cluster))
    if dst_cluster is not None:
        if src_cluster != dst_cluster:
            links.append(("gw", dst_cluster))
        links.append(("node", dst))
    return tuple(links)


def _capacity(link, topology: ClusterTopology) -> Fraction:
    if link[0] == "gw":
        return Fraction(topology.cross_bandwidth)
    return Fraction(topology.inner_bandwidth)


def _run_fluid(
    transfers: list[_Transfer],
    topology: ClusterTopology,
    trace: list | None = None,
) -> Fraction:
    """Advance all transfers to completion; returns the makespan.

    Each link splits its capacity equally among the transfers currently
    crossing it; a transfer moves at the minimum share over its links.
    """
    now = Fraction(0)
    active = [t for t in transfers if t.remaining > 0]
    for t in transfers:
        if t.remaining == 0:
            t.done_at = now
    while active:
        counts: dict = {}
        for t in active:
            for link in t.links:
                counts[link] = counts.get(link, 0) + 1
        rates = []
        for t in active:
            rate = min(_capacity(link, topology) / counts[link] for link in t.links)
            rates.append(rate)
        dt = min(t.remaining / rate for t, rate in zip(active, rates))
        now += dt
        still = []
        for t, rate in zip(active, rates):
            t.remaining -= rate * dt
            if t.remaining == 0:
                t.done_at = now
            else:
                still.append(t)
        active = still
    if trace is not None:
        for t in transfers:
            trace.append(
                {
                    "transfer": t.label,
                    "links": [f"{kind}:{ident}" for kind, ident in t.links],
                    "done_at_seconds": str(t.done_at),
                }
            )
    return now


def _block_node(pmap: PlacementMap, block: int, stripe: int = 0):
    return ((stripe, block), pmap.cluster_of[block])


def _fresh_node(pmap: PlacementMap, cluster: int, tag):
    return (tag, cluster)


def _repair_tallies(
    cfg: SimConfig, failed: int, helpers
) -> tuple[int, int]:
    home = cfg.pmap.cluster_of[failed]
    cross = sum(1 for h in helpers if cfg.pmap.cluster_of[h] != home)
    inner = len(helpers) - cross
    return cross * cfg.block_size, inner * cfg.block_size


def _request_blocks(cfg: SimConfig) -> list[list[int]]:
    """Data blocks touched by each request of a normal/degraded workload."""
    w = cfg.workload
    k = cfg.code.spec.k
    if not w.object_sizes:
        return [list(range(k)) for _ in range(w.requests)]
    sizes = gen_workload(w.object_sizes, w.object_ratios, w.requests, cfg.seed)
    out = []
    offset = 0
    for size in sizes:
        count = min(k, -(-size // cfg.block_size))
        out.append([(offset + i) % k for i in range(count)])
        offset = (offset + count) % k
    return out


def sim_normal_read(cfg: SimConfig, trace: list | None = None) -> SimResult:
    """Full-stripe (or object-mix) reads: every data block streams to the
    client concurrently; a cluster's blocks share its gateway."""
    bs = cfg.block_size
    latencies = []
    total_bytes = 0
    for req, blocks in enumerate(_request_blocks(cfg)):
        transfers = [
            _Transfer(
                links=_links_for(_block_node(cfg.pmap, b), CLIENT, cfg.topology),
                remaining=Fraction(bs),
                label=f"read-{req}-block-{b}",
            )
            for b in blocks
        ]
        latencies.append(_run_fluid(transfers, cfg.topology, trace))
        total_bytes += len(blocks) * bs
    elapsed = sum(latencies, Fraction(0))
    throughput = Fraction(total_bytes) / elapsed if elapsed else Fraction(0)
    return SimResult(
        throughput=throughput,
        latency_samples=tuple(latencies),
        cross_cluster_bytes=total_bytes,  # every data block leaves its cluster
        inner_cluster_bytes=0,
    )


def sim_degraded_read(cfg: SimConfig, trace: list | None = None) -> SimResult:
    """Client reads of one unavailable data block per request.

    Helpers stream to a repair site in the failed block's cluster, then
    the decoded block travels to the client over the gateway.
    """
    bs = cfg.block_size
    k = cfg.code.spec.k
    latencies = []
    cross_bytes = inner_bytes = 0
    for req in range(cfg.workload.requests):
        failed = req % k
        plan = repair_plan(cfg.code, failed, cluster_of=cfg.pmap.cluster_of)
        site = _fresh_node(cfg.pmap, cfg.pmap.cluster_of[failed], ("proxy", req))
        transfers = [
            _Transfer(
                links=_links_for(_block_node(cfg.pmap, h), site, cfg.topology),
                remaining=Fraction(bs),
                label=f"degraded-{req}-helper-{h}",
            )
            for h in plan.helpers
        ]
        t_repair = _run_fluid(transfers, cfg.topology, trace)
        delivery = _Transfer(
            links=_links_for(site, CLIENT, cfg.topology),
            remaining=Fraction(bs),
            label=f"degraded-{req}-delivery",
        )
        t_deliver = _run_fluid([delivery], cfg.topology, trace)
        latencies.append(t_repair + t_deliver)
        c, i = _repair_tallies(cfg, failed, plan.helpers)
        cross_bytes += c
        inner_bytes += i
    elapsed = sum(latencies, Fraction(0))
    throughput = Fraction(len(latencies) * bs) / elapsed if elapsed else Fraction(0)
    return SimResult(
        throughput=throughput,
        latency_samples=tuple(latencies),
        cross_cluster_bytes=cross_bytes,
        inner_cluster_bytes=inner_bytes,
    )


def sim_reconstruction(cfg: SimConfig, trace: list | None = None) -> SimResult:
    """Single-block repair, repeated over every block of the stripe.

    Recovery throughput is total rebuilt bytes over total repair time
    (repairs run one after another, as a background fixer would).
    """
    bs = cfg.block_size
    n = cfg.code.spec.n
    times = []
    cross_bytes = inner_bytes = 0
    for failed in range(n):
        plan = repair_plan(cfg.code, failed, cluster_of=cfg.pmap.cluster_of)
        target = _fresh_node(cfg.pmap, cfg.pmap.cluster_of[failed], ("repl", failed))
        transfers = [
            _Transfer(
                links=_links_for(_block_node(cfg.pmap, h), target, cfg.topology),
                remaining=Fraction(bs),
                label=f"rebuild-{failed}-helper-{h}",
            )
            for h in plan.helpers
        ]
        times.append(_run_fluid(transfers, cfg.topology, trace))
        c, i = _repair_tallies(cfg, failed, plan.helpers)
        cross_bytes += c
        inner_bytes += i
    total = sum(times, Fraction(0))
    return SimResult(
        throughput=Fraction(n * bs) / total,
        latency_samples=tuple(times),
        cross_cluster_bytes=cross_bytes,
        inner_cluster_bytes=inner_bytes,
    )


def sim_full_node(cfg: SimConfig, trace: list | None = None) -> SimResult:
    """Concurrent repair of every stripe block owned by one failed node.

    Stripe s lost block s mod n; rebuilt blocks land round-robin on a
    small pool of replacement nodes per cluster, and all repairs share
    the links concurrently.
    """
    w = cfg.workload
    bs = cfg.block_size
    n = cfg.code.spec.n
    stripes = w.stripes
    if w.failed_node_bytes:
        stripes = -(-w.failed_node_bytes // bs)
    stripes = stripes or n
    transfers = []
    cross_bytes = inner_bytes = 0
    for s in range(stripes):
        failed = s % n
        plan = repair_plan(cfg.code, failed, cluster_of=cfg.pmap.cluster_of)
        target = _fresh_node(
            cfg.pmap,
            cfg.pmap.cluster_of[failed],
            ("repl", s % max(1, w.replacement_pool)),
        )
        for h in plan.helpers:
            transfers.append(
                _Transfer(
                    links=_links_for(
                        _block_node(cfg.pmap, h, stripe=s), target, cfg.topology
                    ),
                    remaining=Fraction(bs),
                    label=f"node-rebuild-stripe-{s}-helper-{h}",
                )
            )
        c, i = _repair_tallies(cfg, failed, plan.helpers)
        cross_bytes += c
        inner_bytes += i
    makespan = _run_fluid(transfers, cfg.topology, trace)
    return SimResult(
        throughput=Fraction(stripes * bs) / makespan,
        latency_samples=(makespan,),
        cross_cluster_bytes=cross_bytes,
        inner_cluster_bytes=inner_bytes,
    )


def simulate(cfg: SimConfig, trace: list | None = None) -> SimResult:
    kind = cfg.workload.kind
    if kind == WORKLOAD_NORMAL_READ:
        return sim_normal_read(cfg, trace)
    if kind == WORKLOAD_DEGRADED_READ:
        return sim_degraded_read(cfg, trace)
    if kind == WORKLOAD_RECONSTRUCTION:
        return sim_reconstruction(cfg, trace)
    if kind == WORKLOAD_FULL_NODE:
        return sim_full_node(cfg, trace)
    raise ParameterError(f"unknown workload kind {kind!r}")


def gen_workload(sizes, ratios, count: int, seed: int) -> list[int]:
    """Seed-deterministic request-size stream with the given mix."""
    sizes = list(sizes)
    ratios = [Fraction(r) for r in ratios]
    if len(sizes) != len(ratios) or not sizes:
        raise ParameterError("sizes and ratios must be equal-length and non-empty")
    if sum(ratios) != 1:
        raise ParameterError("ratios must sum to 1")
    rng = random.Random(seed)
    weights = [float(r) for r in ratios]
    return rng.choices(sizes, weights=weights, k=count)


def percentile(samples, q: Fraction) -> Fraction:
    """Nearest-rank percentile of a sample list (deterministic)."""
    if not samples:
        return Fraction(0)
    ordered = sorted(samples)
    rank = -((-q * len(ordered)) // 1)  # ceil(q * N)
    idx = max(0, min(len(ordered) - 1, int(rank) - 1))
    return ordered[idx]


SIM_COLUMNS = (
    "scheme",
    "family",
    "workload",
    "throughput_bytes_per_s",
    "latency_p50_s",
    "latency_p95_s",
    "cross_cluster_bytes",
    "inner_cluster_bytes",
)


def write_sim_csv(
    out: TextIO, rows: Iterable[tuple[str, str, str, SimResult]]
) -> None:
    writer = csv.writer(out)
    writer.writerow(SIM_COLUMNS)
    for scheme, family, workload, res in rows:
        writer.writerow(
            [
                scheme,
                family,
                workload,
                f"{float(res.throughput):.6g}",
                f"{float(percentile(res.latency_samples, Fraction(1, 2))):.6g}",
                f"{float(percentile(res.latency_samples, Fraction(19, 20))):.6g}",
                res.cross_cluster_bytes,
                res.inner_cluster_bytes,
            ]
        )
