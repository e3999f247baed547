"""Construction and coding operations for four wide-LRC families.

Families
--------
unilrc
    Coupled construction: global parity coefficients come from consecutive
    powers of distinct nonzero field elements, and each group's single
    local parity row is the sum of the group's global rows plus the
    indicator of the group's data columns.  Every group of r+1 blocks
    XORs to zero, so any single block repairs with r XOR reads.
alrc
    Azure-style layout: XOR local parities over disjoint data groups plus
    globally-coded parities whose repair must read all k data blocks.
olrc
    Few large groups with uniform locality.  The groups are rotating
    windows over the data+global blocks and may overlap; every block
    repairs from exactly `r` others.
ulrc
    Two group-size classes covering all n blocks, with global parities
    packed into the large groups.

Block index convention (also used in the JSON export): data blocks are
0..k-1 in group order, then global parities k..k+g-1 in group order, then
local parities.

CodeDefinition is immutable after construction; encode/repair/decode are
pure given the definition.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .errors import (
    DecodeError,
    FieldTooSmallError,
    NotLocallyRepairableError,
    ParameterError,
)
from .linalg import GfMatrix, derive_parity_check, vandermonde

SCHEMA_VERSION = 1

FAMILY_UNILRC = "unilrc"
FAMILY_ALRC = "alrc"
FAMILY_OLRC = "olrc"
FAMILY_ULRC = "ulrc"
FAMILIES = (FAMILY_UNILRC, FAMILY_ALRC, FAMILY_OLRC, FAMILY_ULRC)

ROLE_DATA = "data"
ROLE_GLOBAL = "global"
ROLE_LOCAL = "local"


@dataclass(frozen=True)
class CodeSpec:
    """Numeric parameters of one code instance.

    `d` is the design-rule minimum distance: exact for unilrc (verified by
    brute force at small scale), claimed for the baseline families.  `f`
    is the tolerated failure count d-1.
    """

    family: str
    n: int
    k: int
    r: int
    z: int
    g: int
    l: int
    d: int
    f: int
    alpha: int | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        if self.n != self.k + self.g + self.l:
            raise ParameterError("n != k + g + l")
        if self.f != self.d - 1:
            raise ParameterError("f must equal d - 1")

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)


@dataclass(frozen=True)
class GroupLayout:
    """Repair groups plus a role tag per block.

    Groups are ordered member lists (data, then globals, then the local
    parity).  For unilrc/alrc/ulrc the groups are disjoint; olrc groups
    may overlap but still jointly cover every block.  Each group carries
    exactly one local parity, except alrc's trailing global-parity group
    which has none (its members repair via global decode).
    """

    groups: tuple[tuple[int, ...], ...]
    roles: tuple[str, ...]

    def groups_of(self, block: int) -> list[int]:
        return [i for i, members in enumerate(self.groups) if block in members]


@dataclass(frozen=True)
class CodeDefinition:
    spec: CodeSpec
    layout: GroupLayout
    generator: GfMatrix
    parity_check: GfMatrix
    eval_points: tuple[int, ...]
    # per-block group membership, precomputed once
    _groups_of: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def __post_init__(self) -> None:
        if not self._groups_of:
            lookup = tuple(
                tuple(self.layout.groups_of(b)) for b in range(self.spec.n)
            )
            object.__setattr__(self, "_groups_of", lookup)

    def groups_of(self, block: int) -> tuple[int, ...]:
        return self._groups_of[block]

    def role_of(self, block: int) -> str:
        return self.layout.roles[block]

    def data_blocks(self) -> range:
        return range(self.spec.k)


@dataclass(frozen=True)
class Stripe:
    """The n coded blocks of one stripe, stacked as an (n, block_size) array."""

    blocks: np.ndarray

    @property
    def block_size(self) -> int:
        return self.blocks.shape[1]


@dataclass(frozen=True)
class RepairPlan:
    helpers: tuple[int, ...]
    xor_only: bool
    group: int | None


@dataclass(frozen=True)
class DistanceResult:
    distance: int
    exhaustive: bool


def _eval_points(k: int) -> tuple[int, ...]:
    """First k nonzero field elements in natural byte order: 1, 2, ..., k."""
    if k > 255:
        raise FieldTooSmallError(f"k={k} exceeds the 255 nonzero elements of GF(2^8)")
    return tuple(range(1, k + 1))


def _finish(
    family: str,
    n: int,
    k: int,
    r: int,
    z: int,
    g: int,
    l: int,
    d: int,
    alpha: int | None,
    groups: list[list[int]],
    roles: list[str],
    parity_rows: np.ndarray,
    points: tuple[int, ...],
) -> CodeDefinition:
    gen = np.zeros((n, k), dtype=np.uint8)
    gen[:k] = np.eye(k, dtype=np.uint8)
    gen[k:] = parity_rows
    generator = GfMatrix(gen)
    spec = CodeSpec(
        family=family, n=n, k=k, r=r, z=z, g=g, l=l, d=d, f=d - 1, alpha=alpha
    )
    layout = GroupLayout(
        groups=tuple(tuple(m) for m in groups), roles=tuple(roles)
    )
    return CodeDefinition(
        spec=spec,
        layout=layout,
        generator=generator,
        parity_check=derive_parity_check(generator),
        eval_points=points,
    )


def build_unilrc(alpha: int, z: int) -> CodeDefinition:
    """Coupled construction with z uniform groups of r+1 = alpha*z + 1 blocks.

    Parameters: n = alpha*z^2 + z, k = alpha*z*(z-1), r = g = alpha*z,
    l = z, d = r + 2.  z must be at least 2: a single group cannot
    tolerate the loss of the cluster it lives in.
    """
    if alpha < 1:
        raise ParameterError("alpha must be a positive integer")
    if z < 2:
        raise ParameterError("z must be at least 2 (single cluster rejected)")
    k = alpha * z * (z - 1)
    g = alpha * z
    l = z
    n = k + g + l
    r = alpha * z
    if k > 255:
        raise FieldTooSmallError(
            f"k={k} exceeds the 255 nonzero elements of GF(2^8)"
        )
    # the integers 1..k dealt round-robin: group i's data points are
    # i+1, i+1+z, i+1+2z, ...  Arithmetic stride-z spacing inside a group
    # keeps every cluster-erasure submatrix full rank at all supported
    # sizes, where a consecutive run does not.
    per_group_data = k // z  # alpha * (z - 1)
    points = tuple(
        1 + i + j * z for i in range(z) for j in range(per_group_data)
    )

    # global parity rows: consecutive powers 1..g of the evaluation points
    global_rows = vandermonde(points, g, start_power=1).a

    local_rows = np.zeros((z, k), dtype=np.uint8)
    for i in range(z):
        acc = local_rows[i]
        for t in range(i * alpha, (i + 1) * alpha):
            np.bitwise_xor(acc, global_rows[t], out=acc)
        acc[i * per_group_data : (i + 1) * per_group_data] ^= 1

    groups: list[list[int]] = []
    roles = [ROLE_DATA] * k + [ROLE_GLOBAL] * g + [ROLE_LOCAL] * l
    for i in range(z):
        members = list(range(i * per_group_data, (i + 1) * per_group_data))
        members += list(range(k + i * alpha, k + (i + 1) * alpha))
        members.append(k + g + i)
        groups.append(members)

    parity_rows = np.vstack([global_rows, local_rows])
    return _finish(
        FAMILY_UNILRC, n, k, r, z, g, l, r + 2, alpha, groups, roles, parity_rows, points
    )


def build_alrc(k: int, group_data_size: int, num_global: int) -> CodeDefinition:
    """XOR local groups over data plus globally-coded parities of locality k."""
    if k < 1 or group_data_size < 1 or num_global < 1:
        raise ParameterError("k, group_data_size and num_global must be positive")
    if k % group_data_size:
        raise ParameterError("group_data_size must divide k")
    l = k // group_data_size
    g = num_global
    n = k + g + l
    points = _eval_points(k)

    global_rows = vandermonde(points, g, start_power=1).a
    local_rows = np.zeros((l, k), dtype=np.uint8)
    for i in range(l):
        local_rows[i, i * group_data_size : (i + 1) * group_data_size] = 1

    groups: list[list[int]] = []
    roles = [ROLE_DATA] * k + [ROLE_GLOBAL] * g + [ROLE_LOCAL] * l
    for i in range(l):
        members = list(range(i * group_data_size, (i + 1) * group_data_size))
        members.append(k + g + i)
        groups.append(members)
    groups.append(list(range(k, k + g)))  # global parities, no local repair path

    parity_rows = np.vstack([global_rows, local_rows])
    return _finish(
        FAMILY_ALRC,
        n,
        k,
        group_data_size,
        len(groups),
        g,
        l,
        g + 2,
        None,
        groups,
        roles,
        parity_rows,
        points,
    )


def build_olrc(k: int, locality: int, num_global: int, num_local: int) -> CodeDefinition:
    """Uniform-locality layout with few large (possibly overlapping) groups.

    The k data and g global blocks form a cycle; group i covers the
    `locality` blocks starting at offset i * (k+g)/l, plus its own local
    parity (the sum of the covered coefficient rows, so each group XORs
    to zero).  Every block therefore repairs from exactly `locality`
    others.  Claimed distance is the locality-aware Singleton value.
    """
    if k < 1 or locality < 1 or num_global < 1 or num_local < 1:
        raise ParameterError("all olrc parameters must be positive")
    covered = k + num_global
    if covered % num_local:
        raise ParameterError("k + g must be a multiple of the local-parity count")
    stride = covered // num_local
    if locality < stride:
        raise ParameterError(
            f"locality {locality} too small to cover all blocks (needs >= {stride})"
        )
    if locality >= covered:
        raise ParameterError("locality must be smaller than k + g")
    g = num_global
    l = num_local
    n = covered + l
    points = _eval_points(k)

    global_rows = vandermonde(points, g, start_power=1).a
    coeff = np.vstack([np.eye(k, dtype=np.uint8), global_rows])  # rows for covered ids

    windows = [
        sorted((i * stride + t) % covered for t in range(locality)) for i in range(l)
    ]
    local_rows = np.zeros((l, k), dtype=np.uint8)
    for i, window in enumerate(windows):
        acc = local_rows[i]
        for c in window:
            np.bitwise_xor(acc, coeff[c], out=acc)

    groups = [window + [covered + i] for i, window in enumerate(windows)]
    roles = [ROLE_DATA] * k + [ROLE_GLOBAL] * g + [ROLE_LOCAL] * l
    d = n - k - -(-k // locality) + 2
    parity_rows = np.vstack([global_rows, local_rows])
    return _finish(
        FAMILY_OLRC, n, k, locality, len(groups), g, l, d, None, groups, roles,
        parity_rows, points,
    )


def build_ulrc(
    k: int,
    small_locality: int,
    large_locality: int,
    num_small: int,
    num_large: int,
) -> CodeDefinition:
    """Two group-size classes partitioning all n blocks.

    Group sizes are locality+1.  Global parities are packed into the
    largest groups (split as evenly as possible among them), data fills
    the remaining covered slots in group order, and each group's local
    parity is the sum of its members' coefficient rows.
    """
    if num_small < 0 or num_large < 0 or num_small + num_large < 1:
        raise ParameterError("need at least one group")
    sizes = [small_locality + 1] * num_small + [large_locality + 1] * num_large
    if any(s < 2 for s in sizes):
        raise ParameterError("groups need at least one covered block")
    n = sum(sizes)
    l = len(sizes)
    g = n - k - l
    if g < 1:
        raise ParameterError("group sizes leave no room for global parities")
    covered_sizes = [s - 1 for s in sizes]

    # globals go to the largest groups first, evenly within a size class
    global_counts = [0] * l
    remaining = g
    for size in sorted(set(sizes), reverse=True):
        cls = [i for i, s in enumerate(sizes) if s == size]
        capacity = sum(covered_sizes[i] for i in cls)
        take = min(remaining, capacity)
        base, extra = divmod(take, len(cls))
        for pos, i in enumerate(cls):
            global_counts[i] = base + (1 if pos >= len(cls) - extra else 0)
        remaining -= take
        if remaining == 0:
            break
    if remaining:
        raise ParameterError("too many global parities for the group sizes")
    data_counts = [covered_sizes[i] - global_counts[i] for i in range(l)]
    if sum(data_counts) != k:
        raise ParameterError(
            f"group sizes imply {sum(data_counts)} data blocks, expected {k}"
        )

    points = _eval_points(k)
    global_rows = vandermonde(points, g, start_power=1).a

    groups: list[list[int]] = []
    roles = [ROLE_DATA] * k + [ROLE_GLOBAL] * g + [ROLE_LOCAL] * l
    local_rows = np.zeros((l, k), dtype=np.uint8)
    next_data = 0
    next_global = 0
    for i in range(l):
        members = list(range(next_data, next_data + data_counts[i]))
        local_rows[i, next_data : next_data + data_counts[i]] = 1
        next_data += data_counts[i]
        for _ in range(global_counts[i]):
            members.append(k + next_global)
            np.bitwise_xor(local_rows[i], global_rows[next_global], out=local_rows[i])
            next_global += 1
        members.append(k + g + i)
        groups.append(members)

    parity_rows = np.vstack([global_rows, local_rows])
    return _finish(
        FAMILY_ULRC,
        n,
        k,
        max(small_locality, large_locality),
        len(groups),
        g,
        l,
        g + 2,
        None,
        groups,
        roles,
        parity_rows,
        points,
    )


def encode(code: CodeDefinition, data) -> Stripe:
    """Encode k equal-size data blocks into a systematic stripe of n blocks."""
    k, n = code.spec.k, code.spec.n
    if isinstance(data, np.ndarray):
        arr = data.astype(np.uint8, copy=False)
        if arr.ndim != 2:
            raise ValueError("data array must be 2-D (k, block_size)")
    else:
        rows = [np.frombuffer(bytes(b), dtype=np.uint8) for b in data]
        if len({r.shape[0] for r in rows}) > 1:
            raise ValueError("data blocks must all have the same size")
        arr = np.vstack(rows) if rows else np.zeros((0, 0), dtype=np.uint8)
    if arr.shape[0] != k:
        raise ValueError(f"expected {k} data blocks, got {arr.shape[0]}")
    out = np.zeros((n, arr.shape[1]), dtype=np.uint8)
    out[:k] = arr
    parity = GfMatrix(code.generator.a[k:])
    out[k:] = parity.apply_blocks(arr)
    return Stripe(blocks=out)


def is_locally_repairable(code: CodeDefinition, block: int) -> bool:
    """True when the block belongs to a group carrying a local parity."""
    for gi in code.groups_of(block):
        members = code.layout.groups[gi]
        if any(code.role_of(m) == ROLE_LOCAL for m in members):
            return True
    return False


def repair_plan(
    code: CodeDefinition, failed: int, cluster_of: Sequence[int] | None = None
) -> RepairPlan:
    """Helper set for the cheapest supported repair of one block.

    Locally repairable blocks read the rest of one containing group (the
    group with the fewest cross-cluster helpers when a placement is
    given, lowest group id otherwise).  alrc global parities fall back to
    global decode and read all k data blocks.
    """
    if not 0 <= failed < code.spec.n:
        raise ParameterError(f"block {failed} out of range")
    candidates = []
    for gi in code.groups_of(failed):
        members = code.layout.groups[gi]
        if not any(code.role_of(m) == ROLE_LOCAL for m in members):
            continue
        helpers = tuple(m for m in members if m != failed)
        candidates.append((gi, helpers))
    if not candidates:
        # alrc global parity: read every data block and re-encode
        helpers = tuple(range(code.spec.k))
        return RepairPlan(helpers=helpers, xor_only=False, group=None)
    if cluster_of is not None:
        def cross(item):
            gi, helpers = item
            return sum(1 for h in helpers if cluster_of[h] != cluster_of[failed])
        gi, helpers = min(candidates, key=lambda item: (cross(item), item[0]))
    else:
        gi, helpers = candidates[0]
    return RepairPlan(helpers=helpers, xor_only=True, group=gi)


def local_repair(code: CodeDefinition, stripe: Stripe, failed: int) -> np.ndarray:
    """XOR the other blocks of the failed block's group back together."""
    plan = repair_plan(code, failed)
    if not plan.xor_only:
        raise NotLocallyRepairableError(
            f"block {failed} has no XOR group; use global_decode"
        )
    out = np.zeros(stripe.block_size, dtype=np.uint8)
    for h in plan.helpers:
        np.bitwise_xor(out, stripe.blocks[h], out=out)
    return out


def decodable(code: CodeDefinition, erased: Iterable[int]) -> bool:
    """True iff the surviving generator rows still span all k data symbols."""
    erased_set = set(erased)
    n, k = code.spec.n, code.spec.k
    if any(not 0 <= e < n for e in erased_set):
        raise ParameterError("erased index out of range")
    if len(erased_set) > n - k:
        return False
    missing_data = sorted(e for e in erased_set if e < k)
    if not missing_data:
        return True
    rows = [
        code.generator.a[p, missing_data]
        for p in range(k, n)
        if p not in erased_set
    ]
    if len(rows) < len(missing_data):
        return False
    return GfMatrix(np.array(rows, dtype=np.uint8)).rank() == len(missing_data)


def _select_parity_rows(
    code: CodeDefinition, erased: set[int], missing_data: list[int]
) -> list[int]:
    """Greedy choice of |missing| independent surviving parity rows."""
    need = len(missing_data)
    chosen: list[int] = []
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    for p in range(code.spec.k, code.spec.n):
        if p in erased:
            continue
        v = code.generator.a[p, missing_data].copy()
        for piv, row in zip(pivots, basis):
            if v[piv]:
                gf.mul_block_acc(v, int(v[piv]), row)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            continue
        piv = int(nz[0])
        scale = gf.inv(int(v[piv]))
        if scale != 1:
            v = gf.MUL_TABLE[scale][v]
        pivots.append(piv)
        basis.append(v)
        chosen.append(p)
        if len(chosen) == need:
            return chosen
    raise DecodeError(
        f"erasure pattern {sorted(erased)} is not decodable"
    )


def global_decode(
    code: CodeDefinition, stripe: Stripe, erased: Iterable[int]
) -> np.ndarray:
    """Reconstruct all k data blocks from any decodable erasure pattern."""
    erased_set = set(erased)
    n, k = code.spec.n, code.spec.k
    if any(not 0 <= e < n for e in erased_set):
        raise ParameterError("erased index out of range")
    data = stripe.blocks[:k].copy()
    missing_data = sorted(e for e in erased_set if e < k)
    if not missing_data:
        return data
    chosen = _select_parity_rows(code, erased_set, missing_data)
    known = [j for j in range(k) if j not in erased_set]
    bs = stripe.block_size
    rhs = np.zeros((len(chosen), bs), dtype=np.uint8)
    for out_i, p in enumerate(chosen):
        acc = rhs[out_i]
        np.bitwise_xor(acc, stripe.blocks[p], out=acc)
        row = code.generator.a[p]
        for j in known:
            c = int(row[j])
            if c:
                gf.mul_block_acc(acc, c, stripe.blocks[j])
    m = GfMatrix(code.generator.a[np.ix_(chosen, missing_data)])
    solved = m.solve_blocks(rhs)
    for idx, j in enumerate(missing_data):
        data[j] = solved[idx]
    return data


def verify_distance(code: CodeDefinition, max_n: int = 24) -> DistanceResult:
    """Smallest erasure count with an undecodable pattern, by enumeration.

    Patterns are tried in increasing size, lexicographic order, with an
    early exit on the first failure.  Refuses codes wider than `max_n`
    and reports the claimed distance unverified instead.
    """
    n = code.spec.n
    if n > max_n:
        return DistanceResult(distance=code.spec.d, exhaustive=False)
    for e in range(1, n - code.spec.k + 2):
        for pattern in combinations(range(n), e):
            if not decodable(code, pattern):
                return DistanceResult(distance=e, exhaustive=True)
    raise AssertionError("unreachable: n-k+1 erasures are never decodable")


def sample_erasure_check(
    code: CodeDefinition, samples: int = 10_000, seed: int = 0
) -> bool:
    """Spot-check fault tolerance: random (d-1)-erasure patterns must decode."""
    rng = np.random.default_rng(seed)
    n, f = code.spec.n, code.spec.f
    for _ in range(samples):
        pattern = rng.choice(n, size=f, replace=False)
        if not decodable(code, pattern.tolist()):
            return False
    return True


def rate_check(spec: CodeSpec) -> Fraction:
    """Rate k/n of a unilrc spec, checked against both closed forms."""
    if spec.family != FAMILY_UNILRC:
        raise ParameterError("rate_check applies to unilrc specs")
    rate = Fraction(spec.k, spec.n)
    alpha, z, r = spec.alpha, spec.z, spec.r
    assert rate == Fraction(r, r + 1) * (1 - Fraction(1, z))
    assert rate == 1 - Fraction(alpha + 1, alpha * z + 1)
    return rate


def parity_bound_check(spec: CodeSpec) -> bool:
    """True iff n - k equals n/z + z - 1 exactly (the optimal-parity count)."""
    if spec.family != FAMILY_UNILRC:
        raise ParameterError("parity_bound_check applies to unilrc specs")
    return (spec.n - spec.k) * spec.z == spec.n + (spec.z - 1) * spec.z


def to_json(code: CodeDefinition) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "reduction_poly": hex(gf.REDUCING_POLY),
        "family": code.spec.family,
        "n": code.spec.n,
        "k": code.spec.k,
        "r": code.spec.r,
        "z": code.spec.z,
        "alpha": code.spec.alpha,
        "g": code.spec.g,
        "l": code.spec.l,
        "d": code.spec.d,
        "f": code.spec.f,
        "eval_points": bytes(code.eval_points).hex(),
        "roles": list(code.layout.roles),
        "groups": [list(g) for g in code.layout.groups],
        "generator": [bytes(row.tolist()).hex() for row in code.generator.a],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> CodeDefinition:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParameterError(f"unsupported schema_version {doc.get('schema_version')}")
    if int(doc["reduction_poly"], 16) != gf.REDUCING_POLY:
        raise ParameterError("code definition uses a different reduction polynomial")
    spec = CodeSpec(
        family=doc["family"],
        n=doc["n"],
        k=doc["k"],
        r=doc["r"],
        z=doc["z"],
        g=doc["g"],
        l=doc["l"],
        d=doc["d"],
        f=doc["f"],
        alpha=doc["alpha"],
    )
    rows = [list(bytes.fromhex(h)) for h in doc["generator"]]
    generator = GfMatrix(np.array(rows, dtype=np.uint8))
    if generator.rows != spec.n or generator.cols != spec.k:
        raise ParameterError("generator dimensions disagree with the spec fields")
    layout = GroupLayout(
        groups=tuple(tuple(g) for g in doc["groups"]),
        roles=tuple(doc["roles"]),
    )
    return CodeDefinition(
        spec=spec,
        layout=layout,
        generator=generator,
        parity_check=derive_parity_check(generator),
        eval_points=tuple(bytes.fromhex(doc["eval_points"])),
    )


def content_hash(code: CodeDefinition) -> str:
    return hashlib.sha256(to_json(code).encode()).hexdigest()
