"""Stripe-to-cluster placement and cross-cluster repair accounting.

Two placers: the native one-group-one-cluster map for the coupled family,
and a deterministic greedy packer in the style of topology-aware placement
for the baselines.  The packer fills clusters of capacity d-1 blocks with
whole groups first-fit-decreasing; groups that exceed the capacity are cut
into capacity-sized chunks placed across the minimal number of clusters.
Any produced map must survive the loss of any single cluster, checked
against the actual generator (not the claimed distance).

Pure functions; maps are immutable once produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .codes import (
    FAMILY_UNILRC,
    CodeDefinition,
    decodable,
    repair_plan,
)
from .errors import ParameterError


@dataclass(frozen=True)
class PlacementMap:
    """Assignment of every stripe block to a cluster id."""

    cluster_of: tuple[int, ...]
    num_clusters: int

    def blocks_in(self, cluster: int) -> list[int]:
        return [b for b, c in enumerate(self.cluster_of) if c == cluster]

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_clusters)]
        for b, c in enumerate(self.cluster_of):
            out[c].append(b)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {"num_clusters": self.num_clusters, "clusters": self.clusters()},
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "PlacementMap":
        doc = json.loads(text)
        clusters = doc["clusters"]
        total = sum(len(c) for c in clusters)
        cluster_of = [0] * total
        for ci, blocks in enumerate(clusters):
            for b in blocks:
                cluster_of[b] = ci
        return cls(cluster_of=tuple(cluster_of), num_clusters=doc["num_clusters"])


@dataclass(frozen=True)
class ClusterTopology:
    """Two-tier bandwidth model: shared per-cluster gateways over node links."""

    num_clusters: int
    inner_bandwidth: int
    cross_bandwidth: int

    def __post_init__(self) -> None:
        if self.cross_bandwidth > self.inner_bandwidth:
            raise ParameterError("cross-cluster bandwidth cannot exceed inner")


def place_unilrc(code: CodeDefinition) -> PlacementMap:
    """Native map: group i lands wholly in cluster i, z clusters in total."""
    if code.spec.family != FAMILY_UNILRC:
        raise ParameterError("native placement applies to the unilrc family only")
    cluster_of = [0] * code.spec.n
    for ci, members in enumerate(code.layout.groups):
        for b in members:
            cluster_of[b] = ci
    return PlacementMap(cluster_of=tuple(cluster_of), num_clusters=len(code.layout.groups))


def place_ecwide(code: CodeDefinition) -> PlacementMap:
    """Greedy minimum-cluster packing that survives one-cluster loss.

    Capacity per cluster starts at d-1 blocks of the stripe.  Groups are
    placed largest-first (ties by lowest block index); a group's
    not-yet-placed blocks go whole into the first cluster with room, or
    are chunked capacity-at-a-time when they exceed it.  At least two
    clusters are always produced so a cluster loss never takes the whole
    stripe.

    The claimed distance of a baseline family can overstate what its
    substituted coefficients actually tolerate, so the packer checks its
    map against the real generator and shrinks the capacity until the
    one-cluster-loss check passes.
    """
    n = code.spec.n
    start = min(code.spec.d - 1, n - 1)  # never a single all-blocks cluster
    if start < 1:
        raise ParameterError("cluster capacity must be at least one block")
    for capacity in range(start, 0, -1):
        pmap = _pack(code, capacity)
        if validate_placement(code, pmap):
            return pmap
    raise ParameterError("no cluster capacity yields a one-cluster-loss-safe map")


def _pack(code: CodeDefinition, capacity: int) -> PlacementMap:
    n = code.spec.n
    order = sorted(
        range(len(code.layout.groups)),
        key=lambda gi: (-len(code.layout.groups[gi]), code.layout.groups[gi][0]),
    )
    clusters: list[list[int]] = []
    placed = [False] * n

    def fit(chunk: list[int]) -> None:
        for members in clusters:
            if len(members) + len(chunk) <= capacity:
                members.extend(chunk)
                return
        clusters.append(list(chunk))

    for gi in order:
        todo = [b for b in code.layout.groups[gi] if not placed[b]]
        for b in todo:
            placed[b] = True
        while len(todo) > capacity:
            fit(todo[:capacity])
            todo = todo[capacity:]
        if todo:
            fit(todo)

    cluster_of = [0] * n
    for ci, members in enumerate(clusters):
        for b in members:
            cluster_of[b] = ci
    return PlacementMap(cluster_of=tuple(cluster_of), num_clusters=len(clusters))


def validate_placement(code: CodeDefinition, pmap: PlacementMap) -> bool:
    """True iff losing any one whole cluster leaves the stripe decodable."""
    if len(pmap.cluster_of) != code.spec.n:
        raise ParameterError("placement map size does not match the code")
    for cluster_blocks in pmap.clusters():
        if cluster_blocks and not decodable(code, cluster_blocks):
            return False
    return True


def cross_cluster_cost(
    code: CodeDefinition, pmap: PlacementMap, failed: int
) -> int:
    """Helper blocks read from outside the failed block's cluster.

    Uses the block's cheapest supported repair: the XOR group with the
    fewest cross-cluster helpers when one exists, otherwise global decode
    reading the k data blocks.
    """
    plan = repair_plan(code, failed, cluster_of=pmap.cluster_of)
    home = pmap.cluster_of[failed]
    return sum(1 for h in plan.helpers if pmap.cluster_of[h] != home)


def helpers_by_location(
    code: CodeDefinition, pmap: PlacementMap, failed: int
) -> tuple[list[int], list[int]]:
    """Split the repair helper set into (same-cluster, cross-cluster) lists."""
    plan = repair_plan(code, failed, cluster_of=pmap.cluster_of)
    home = pmap.cluster_of[failed]
    same = [h for h in plan.helpers if pmap.cluster_of[h] == home]
    cross = [h for h in plan.helpers if pmap.cluster_of[h] != home]
    return same, cross


def minimal_cluster_count(
    group_sizes: Sequence[int], capacity: int
) -> int:
    """Exhaustive minimum over legal packings (whole groups, oversized split).

    Test oracle for the greedy packer; exponential, keep n small.
    """
    items: list[int] = []
    for s in group_sizes:
        while s > capacity:
            items.append(capacity)
            s -= capacity
        if s:
            items.append(s)
    items.sort(reverse=True)

    best = len(items)

    def search(idx: int, loads: list[int]) -> None:
        nonlocal best
        if len(loads) >= best:
            return
        if idx == len(items):
            best = min(best, len(loads))
            return
        size = items[idx]
        seen = set()
        for i, load in enumerate(loads):
            if load + size <= capacity and load not in seen:
                seen.add(load)
                loads[i] += size
                search(idx + 1, loads)
                loads[i] -= size
        loads.append(size)
        search(idx + 1, loads)
        loads.pop()

    search(0, [])
    return max(best, 2 if sum(group_sizes) > 1 else 1)
