"""Batch command-line surface for the kit.

Subcommands: construct, encode, repair, decode, verify, analyze, mttdl,
simulate.  All file outputs are deterministic given identical inputs and
seed flags; exit code 0 means every requested check or operation
succeeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import codes, metrics, placement, presets, reliability, sim
from .errors import WideLrcError

MANIFEST_SCHEMA_VERSION = 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WideLrcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="widelrc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a code definition JSON file")
    c.add_argument("--family", choices=codes.FAMILIES)
    c.add_argument("--preset", help="e.g. unilrc-30-of-42 or ulrc-180-of-210")
    c.add_argument("--alpha", type=int)
    c.add_argument("--z", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--group-data-size", type=int)
    c.add_argument("--g", type=int)
    c.add_argument("--l", type=int)
    c.add_argument("--r", type=int)
    c.add_argument("--small-locality", type=int)
    c.add_argument("--large-locality", type=int)
    c.add_argument("--num-small", type=int)
    c.add_argument("--num-large", type=int)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("encode", help="encode a file into n block files")
    e.add_argument("--code", required=True)
    e.add_argument("--input", required=True)
    e.add_argument("--block-size", type=int, default=0,
                   help="bytes per block; default: smallest that fits the input")
    e.add_argument("--out-dir", required=True)
    e.set_defaults(func=cmd_encode)

    r = sub.add_parser("repair", help="restore erased block files")
    r.add_argument("--manifest", required=True)
    r.add_argument("--erased", type=int, nargs="+", required=True)
    r.set_defaults(func=cmd_repair)

    d = sub.add_parser("decode", help="rebuild the original file from block files")
    d.add_argument("--manifest", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_decode)

    v = sub.add_parser("verify", help="check code invariants and distance")
    v.add_argument("--code", required=True)
    v.add_argument("--budget", type=int, default=24,
                   help="max stripe width for exhaustive distance enumeration")
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="emit the recovery-cost metrics CSV")
    a.add_argument("--all-42", action="store_true",
                   help="all four families at the 42-block scheme")
    a.add_argument("--all", action="store_true",
                   help="all families at all three schemes")
    a.add_argument("--code")
    a.add_argument("--placement", choices=("native", "ecwide"), default=None)
    a.add_argument("--out", default="-")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("mttdl", help="emit the reliability CSV")
    m.add_argument("--defaults", action="store_true",
                   help="default model parameters (N=400, 16 TB, 1 Gb/s, ...)")
    m.add_argument("--delta", default="0.1")
    m.add_argument("--out", default="-")
    m.set_defaults(func=cmd_mttdl)

    s = sub.add_parser("simulate", help="emit the cluster-simulator CSV")
    s.add_argument("--all-42", action="store_true")
    s.add_argument("--scheme", choices=presets.SCHEMES, default="30-of-42")
    s.add_argument("--workload", choices=(
        sim.WORKLOAD_NORMAL_READ, sim.WORKLOAD_DEGRADED_READ,
        sim.WORKLOAD_RECONSTRUCTION, sim.WORKLOAD_FULL_NODE), default=None,
        help="default: all four workloads")
    s.add_argument("--sweep-cross-bw", default=None, metavar="LO..HI",
                   help="sweep cross-bandwidth multipliers, e.g. 0.5..10")
    s.add_argument("--block-size", type=int, default=1 << 20)
    s.add_argument("--inner-bw", type=int, default=1_250_000_000)
    s.add_argument("--cross-bw", type=int, default=125_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--requests", type=int, default=64)
    s.add_argument("--out", default="-")
    s.add_argument("--trace-out", default=None,
                   help="also write a JSON event trace (debugging)")
    s.set_defaults(func=cmd_simulate)

    return p


def _load_code(path: str) -> codes.CodeDefinition:
    return codes.from_json(Path(path).read_text())


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _summary(code: codes.CodeDefinition) -> str:
    s = code.spec
    return (
        f"family={s.family} n={s.n} k={s.k} r={s.r} z={s.z} g={s.g} l={s.l} "
        f"d={s.d} f={s.f} rate={float(s.rate):.4f}"
    )


def cmd_construct(args) -> int:
    if args.preset:
        family, _, scheme = args.preset.partition("-")
        code = presets.build_preset(family, scheme)
    elif args.family == codes.FAMILY_UNILRC:
        _require(args, "alpha", "z")
        code = codes.build_unilrc(args.alpha, args.z)
    elif args.family == codes.FAMILY_ALRC:
        _require(args, "k", "group_data_size", "g")
        code = codes.build_alrc(args.k, args.group_data_size, args.g)
    elif args.family == codes.FAMILY_OLRC:
        _require(args, "k", "r", "g", "l")
        code = codes.build_olrc(args.k, args.r, args.g, args.l)
    elif args.family == codes.FAMILY_ULRC:
        _require(args, "k", "small_locality", "large_locality",
                 "num_small", "num_large")
        code = codes.build_ulrc(args.k, args.small_locality, args.large_locality,
                                args.num_small, args.num_large)
    else:
        raise WideLrcError("give either --preset or --family with its parameters")
    Path(args.out).write_text(codes.to_json(code))
    print(_summary(code))
    return 0


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise WideLrcError(
            "missing required options: " + ", ".join("--" + n.replace("_", "-") for n in missing)
        )


def cmd_encode(args) -> int:
    code = _load_code(args.code)
    data = Path(args.input).read_bytes()
    k = code.spec.k
    block_size = args.block_size or max(1, -(-len(data) // k))
    padded = data + b"\0" * (k * block_size - len(data))
    if len(padded) != k * block_size:
        raise WideLrcError(
            f"input ({len(data)} bytes) exceeds k*block_size ({k * block_size})"
        )
    arr = np.frombuffer(padded, dtype=np.uint8).reshape(k, block_size)
    stripe = codes.encode(code, arr)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i in range(code.spec.n):
        name = f"block_{i:04d}.bin"
        (out_dir / name).write_bytes(stripe.blocks[i].tobytes())
        names.append(name)
    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "code_file": str(Path(args.code).resolve()),
        "code_sha256": codes.content_hash(code),
        "block_size": block_size,
        "original_length": len(data),
        "n": code.spec.n,
        "k": code.spec.k,
        "block_files": names,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2)
    )
    print(f"wrote {code.spec.n} blocks of {block_size} bytes to {out_dir}")
    return 0


def _load_manifest(path: str):
    mpath = Path(path)
    manifest = json.loads(mpath.read_text())
    if manifest.get("schema_version") != MANIFEST_SCHEMA_VERSION:
        raise WideLrcError("unsupported manifest schema_version")
    code = _load_code(manifest["code_file"])
    if codes.content_hash(code) != manifest["code_sha256"]:
        raise WideLrcError("code definition does not match the manifest hash")
    return manifest, code, mpath.parent


def _read_blocks(manifest, base: Path):
    bs = manifest["block_size"]
    present = {}
    for i, name in enumerate(manifest["block_files"]):
        path = base / name
        if path.exists():
            raw = path.read_bytes()
            if len(raw) != bs:
                raise WideLrcError(f"{name} has {len(raw)} bytes, expected {bs}")
            present[i] = np.frombuffer(raw, dtype=np.uint8)
    return present


def cmd_repair(args) -> int:
    manifest, code, base = _load_manifest(args.manifest)
    present = _read_blocks(manifest, base)
    erased = sorted(set(args.erased))
    for b in erased:
        present.pop(b, None)
    missing = [i for i in range(code.spec.n) if i not in present]
    bs = manifest["block_size"]

    restored: dict[int, np.ndarray] = {}
    helpers_used = 0
    xor_only = True
    for b in missing:
        plan = codes.repair_plan(code, b)
        if plan.xor_only and all(h in present for h in plan.helpers):
            out = np.zeros(bs, dtype=np.uint8)
            for h in plan.helpers:
                np.bitwise_xor(out, present[h], out=out)
            restored[b] = out
            helpers_used = max(helpers_used, len(plan.helpers))
        else:
            xor_only = False
    if any(b not in restored for b in missing):
        # multi-erasure or non-local block: full decode path
        if not codes.decodable(code, missing):
            raise codes.DecodeError(f"erasure pattern {missing} is not decodable")
        stripe_blocks = np.zeros((code.spec.n, bs), dtype=np.uint8)
        for i, block in present.items():
            stripe_blocks[i] = block
        data = codes.global_decode(code, codes.Stripe(stripe_blocks), missing)
        stripe = codes.encode(code, data)
        for b in missing:
            restored[b] = stripe.blocks[b]
        helpers_used = max(helpers_used, code.spec.k)
    for b in missing:
        (base / manifest["block_files"][b]).write_bytes(restored[b].tobytes())
    print(f"restored={missing} helpers={helpers_used} xor_only={str(xor_only).lower()}")
    return 0


def cmd_decode(args) -> int:
    manifest, code, base = _load_manifest(args.manifest)
    present = _read_blocks(manifest, base)
    missing = [i for i in range(code.spec.n) if i not in present]
    if not codes.decodable(code, missing):
        raise codes.DecodeError(f"erasure pattern {missing} is not decodable")
    bs = manifest["block_size"]
    stripe_blocks = np.zeros((code.spec.n, bs), dtype=np.uint8)
    for i, block in present.items():
        stripe_blocks[i] = block
    data = codes.global_decode(code, codes.Stripe(stripe_blocks), missing)
    raw = data.tobytes()[: manifest["original_length"]]
    Path(args.out).write_bytes(raw)
    print(f"decoded {len(raw)} bytes to {args.out} (erased={missing})")
    return 0


def cmd_verify(args) -> int:
    code = _load_code(args.code)
    spec = code.spec
    ok = True

    def report(name: str, passed: bool, detail: str = "") -> None:
        nonlocal ok
        ok = ok and passed
        tail = f" {detail}" if detail else ""
        print(f"{name}:{tail} {'PASS' if passed else 'FAIL'}")

    gen = code.generator
    systematic = bool(
        np.array_equal(gen.a[: spec.k], np.eye(spec.k, dtype=np.uint8))
    )
    report("systematic", systematic)

    hg = code.parity_check.mul(gen)
    report("parity-check-nullity", not hg.a.any(), "H*G = 0")

    rng = np.random.default_rng(args.seed)
    stripe = codes.encode(code, rng.integers(0, 256, size=(spec.k, 64), dtype=np.uint8))
    hy = code.parity_check.apply_blocks(stripe.blocks)
    report("parity-check-on-stripe", not hy.any(), "H*y = 0")

    if spec.family != codes.FAMILY_ALRC:
        group_xor_ok = True
        for members in code.layout.groups:
            acc = np.zeros(stripe.block_size, dtype=np.uint8)
            for b in members:
                np.bitwise_xor(acc, stripe.blocks[b], out=acc)
            group_xor_ok = group_xor_ok and not acc.any()
        report("group-xor", group_xor_ok)

    if spec.family == codes.FAMILY_UNILRC:
        rate = codes.rate_check(spec)
        report("rate", True, f"{float(rate):.4f}")
        report("parity-bound", codes.parity_bound_check(spec),
               f"n-k = n/z + z - 1 = {spec.n - spec.k}")

    if spec.n <= args.budget:
        result = codes.verify_distance(code, max_n=args.budget)
        report(
            "distance",
            result.distance == spec.d,
            f"measured={result.distance} claimed={spec.d} (exhaustive)",
        )
    else:
        passed = codes.sample_erasure_check(code, samples=args.samples, seed=args.seed)
        report(
            "distance",
            passed,
            f"claimed={spec.d}, sampled {args.samples} ({spec.f}-erasure patterns)",
        )
    return 0 if ok else 1


def _analysis_targets(args):
    if getattr(args, "all", False):
        schemes = presets.SCHEMES
    elif args.all_42:
        schemes = ("30-of-42",)
    else:
        schemes = None
    if schemes is not None:
        for scheme in schemes:
            for family in codes.FAMILIES:
                code = presets.build_preset(family, scheme)
                pmap = (
                    placement.place_unilrc(code)
                    if family == codes.FAMILY_UNILRC
                    else placement.place_ecwide(code)
                )
                yield scheme, family, code, pmap
        return
    if not args.code:
        raise WideLrcError("give --all-42, --all, or --code")
    code = _load_code(args.code)
    style = args.placement or (
        "native" if code.spec.family == codes.FAMILY_UNILRC else "ecwide"
    )
    pmap = (
        placement.place_unilrc(code) if style == "native" else placement.place_ecwide(code)
    )
    yield f"{code.spec.k}-of-{code.spec.n}", code.spec.family, code, pmap


def cmd_analyze(args) -> int:
    rows = []
    for scheme, family, code, pmap in _analysis_targets(args):
        rows.append((family, scheme, metrics.compute_metrics(code, pmap)))
    out, close = _open_out(args.out)
    try:
        metrics.write_metrics_csv(out, rows)
    finally:
        if close:
            out.close()
    return 0


def cmd_mttdl(args) -> int:
    delta = Fraction(args.delta)
    rows = []
    for scheme in presets.SCHEMES:
        for family in codes.FAMILIES:
            code = presets.build_preset(family, scheme)
            pmap = (
                placement.place_unilrc(code)
                if family == codes.FAMILY_UNILRC
                else placement.place_ecwide(code)
            )
            cost = reliability.recovery_cost(code, pmap, delta)
            params = reliability.default_params(presets.chain_failures(code, scheme))
            rows.append((scheme, family, reliability.evaluate(params, cost, code.spec.n)))
    out, close = _open_out(args.out)
    try:
        reliability.write_reliability_csv(out, rows)
    finally:
        if close:
            out.close()
    return 0


def _parse_sweep(text: str) -> list[Fraction]:
    lo_text, _, hi_text = text.partition("..")
    lo, hi = Fraction(lo_text), Fraction(hi_text)
    if not lo_text or not hi_text or lo <= 0 or hi < lo:
        raise WideLrcError(f"bad sweep range {text!r}")
    points = [lo]
    cur = lo
    while cur * 2 < hi:
        cur *= 2
        points.append(cur)
    if points[-1] != hi:
        points.append(hi)
    return points


def cmd_simulate(args) -> int:
    scheme = "30-of-42" if args.all_42 else args.scheme
    workloads = (
        (args.workload,)
        if args.workload
        else (
            sim.WORKLOAD_NORMAL_READ,
            sim.WORKLOAD_DEGRADED_READ,
            sim.WORKLOAD_RECONSTRUCTION,
            sim.WORKLOAD_FULL_NODE,
        )
    )
    multipliers = _parse_sweep(args.sweep_cross_bw) if args.sweep_cross_bw else [Fraction(1)]
    rows = []
    trace = [] if args.trace_out else None
    for family in codes.FAMILIES:
        code = presets.build_preset(family, scheme)
        pmap = (
            placement.place_unilrc(code)
            if family == codes.FAMILY_UNILRC
            else placement.place_ecwide(code)
        )
        for mult in multipliers:
            topo = placement.ClusterTopology(
                num_clusters=pmap.num_clusters,
                inner_bandwidth=args.inner_bw,
                cross_bandwidth=int(args.cross_bw * mult),
            )
            for kind in workloads:
                workload = sim.Workload(
                    kind=kind,
                    requests=args.requests,
                    stripes=code.spec.n,
                )
                cfg = sim.SimConfig(
                    topology=topo,
                    block_size=args.block_size,
                    code=code,
                    pmap=pmap,
                    workload=workload,
                    seed=args.seed,
                )
                label = kind if len(multipliers) == 1 else f"{kind}@x{float(mult):g}"
                rows.append((scheme, family, label, sim.simulate(cfg, trace)))
    out, close = _open_out(args.out)
    try:
        sim.write_sim_csv(out, rows)
    finally:
        if close:
            out.close()
    if args.trace_out:
        Path(args.trace_out).write_text(json.dumps(trace, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
