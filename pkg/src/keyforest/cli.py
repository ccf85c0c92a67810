"""Command line surface: generate, analyze, partition, setup, derive, verify.

Every command is deterministic given its flags and seed; machine-readable
artifacts go to files (or stdout) in the formats owned by their modules,
while stdout text is for humans except for ``derive``'s single-line output.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import chainpart, crypto, netflow, oracle, policy, treepart

EXIT_OK = 0
EXIT_ERROR = 1

_DOMAIN_ERRORS = (ValueError, RuntimeError, KeyError, IndexError, OSError)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_policy(path: str) -> policy.Policy:
    return policy.parse_policy(_read(path))


def _load_partition(path: str):
    """Detect the dump kind by its first directive: 't' tree, 'c' chain."""
    text = _read(path)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("t"):
            return treepart.parse_tree_partition(text)
        if line.startswith("c"):
            return chainpart.parse_chain_partition(text)
        break
    raise ValueError(f"{path}: not a tree or chain partition dump")


def _anchor_map_for(p, forest):
    if isinstance(forest, treepart.TreePartition):
        return treepart.anchors(p, forest)
    chainpart.validate_chain_partition(p, forest)
    return chainpart.chain_anchors(p, forest)


def cmd_generate(args) -> int:
    if args.kind == "interval":
        pol = policy.interval_poset(args.n)
    else:
        pol = oracle.random_policy(oracle.PolicyGenerator(args.seed, args.n, args.density))
    _emit(policy.serialize_policy(pol), args.out)
    return EXIT_OK


def _scheme_rows(p, tree, chain) -> list[tuple[str, str, str, str, str]]:
    total_users = sum(p.users)
    cover_edges = p.num_cover_edges()
    order_pairs = p.num_order_pairs()
    depth = max((xy[1] for xy in _levels(p)), default=0)

    tree_anchors = treepart.anchors(p, tree)
    tree_total = treepart.total_secrets(p, tree, tree_anchors)
    tree_per_user = max((len(tree_anchors[x]) for x in range(p.n)), default=0)
    tree_steps = treepart.max_derivation_steps(p, tree.parents, tree_anchors)

    chain_anchors = chainpart.chain_anchors(p, chain)
    chain_total = chainpart.chain_secrets(p, chain)
    chain_per_user = max((len(chain_anchors[x]) for x in range(p.n)), default=0)
    chain_steps = treepart.max_derivation_steps(p, chain.parent_list(), chain_anchors)

    rows = [
        ("single-step", str(order_pairs), "1", str(total_users), "1" if order_pairs else "0"),
        ("multi-step", str(cover_edges), "1", str(total_users), str(depth)),
        ("tree", "0", str(tree_per_user), str(tree_total), str(tree_steps)),
        ("chain", "0", str(chain_per_user), str(chain_total), str(chain_steps)),
    ]
    return rows


def _levels(p) -> list[tuple[int, int]]:
    level = [0] * p.n
    for x in sorted(range(p.n), key=lambda v: p.below[v].bit_count()):
        children = p.children_of(x)
        level[x] = 1 + max((level[c] for c in children), default=-1)
    return list(enumerate(level))


def cmd_analyze(args) -> int:
    p = _load_policy(args.policy)
    tree = treepart.minimal_tree_partition(p)
    chain = chainpart.minimal_chain_partition(p)
    width = policy.width(p)
    rows = _scheme_rows(p, tree, chain)

    print(f"labels           {p.n}")
    print(f"cover edges      {p.num_cover_edges()}")
    print(f"order pairs      {p.num_order_pairs()}")
    print(f"width            {width}")
    header = ("scheme", "public_items", "secrets_per_user_max", "total_secrets", "derivation_steps_max")
    print()
    print(f"{header[0]:<12} {header[1]:>12} {header[2]:>20} {header[3]:>13} {header[4]:>20}")
    for row in rows:
        print(f"{row[0]:<12} {row[1]:>12} {row[2]:>20} {row[3]:>13} {row[4]:>20}")

    if args.out:
        lines = [
            f"# labels={p.n}\tcover_edges={p.num_cover_edges()}"
            f"\torder_pairs={p.num_order_pairs()}\twidth={width}",
            "\t".join(header),
        ]
        lines.extend("\t".join(row) for row in rows)
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")

    figures_dir = args.figures
    if figures_dir is None and args.out and not args.no_figures:
        figures_dir = str(Path(args.out).parent)
    if figures_dir is not None and not args.no_figures:
        from . import report

        stem = Path(args.out).stem if args.out else "policy"
        try:
            paths = report.render_analysis_figures(p, tree, chain, Path(figures_dir), stem)
        except ValueError as exc:
            print(f"figures skipped: {exc}", file=sys.stderr)
        else:
            for path in paths:
                print(f"figure {path}")
    return EXIT_OK


def cmd_partition(args) -> int:
    p = _load_policy(args.policy)
    if args.mode == "tree":
        part = treepart.minimal_tree_partition(p)
        dump = treepart.format_tree_partition(part)
        total = treepart.total_secrets(p, part, treepart.anchors(p, part))
    elif args.mode == "tree-optimal":
        part = treepart.optimal_tree_partition(p)
        dump = treepart.format_tree_partition(part)
        total = treepart.total_secrets(p, part, treepart.anchors(p, part))
    else:
        w = policy.width(p)
        net = chainpart.build_chain_network(p, w)
        flow = netflow.min_cost_flow(net)
        part = chainpart.flow_to_chain_partition(p, flow)
        dump = chainpart.format_chain_partition(part)
        total = chainpart.chain_secrets(p, part)
        if args.dump_flow:
            Path(args.dump_flow).write_text(netflow.format_flow(net, flow), encoding="utf-8")
    _emit(dump, args.out)
    print(f"total secrets {total}", file=sys.stderr)
    return EXIT_OK


def cmd_setup(args) -> int:
    p = _load_policy(args.policy)
    forest = _load_partition(args.partition)
    anchor_map = _anchor_map_for(p, forest)
    if args.seed is not None:
        seed = bytes.fromhex(args.seed)
    else:
        seed = os.urandom(crypto.KEY_BYTES)
        print(f"seed {seed.hex()}", file=sys.stderr)
    state = crypto.setup(p, forest, anchor_map, seed)
    _emit(crypto.write_key_material(state), args.out)
    return EXIT_OK


def cmd_derive(args) -> int:
    p = _load_policy(args.policy)
    forest = _load_partition(args.partition)
    anchor_map = _anchor_map_for(p, forest)
    state = crypto.parse_key_material(_read(args.keys))
    x = p.label_for(args.x)
    y = p.label_for(args.y)
    key = crypto.derive(p, forest, anchor_map, x, y, state.issued[x])
    print("BOT" if key is None else key.hex())
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _load_policy(args.policy)
    forest = _load_partition(args.partition)
    anchor_map = _anchor_map_for(p, forest)
    state = crypto.parse_key_material(_read(args.keys))
    report = crypto.verify_scheme(p, forest, anchor_map, state)
    if report.ok:
        print(f"ok ({report.checks_run} checks)")
        return EXIT_OK
    for failure in report.failures:
        print(failure)
    return EXIT_ERROR


def cmd_oracle_check(args) -> int:
    p = _load_policy(args.policy)
    failures = []

    lib_width = policy.width(p)
    if lib_width != oracle.brute_width(p):
        failures.append("width")

    tree = treepart.minimal_tree_partition(p)
    tree_total = treepart.total_secrets(p, tree, treepart.anchors(p, tree))
    if tree_total != oracle.brute_min_tree_secrets(p):
        failures.append("tree-secrets")

    chain = chainpart.minimal_chain_partition(p)
    best_secrets, best_count = oracle.brute_min_chain_secrets(p)
    if chainpart.chain_secrets(p, chain) != best_secrets:
        failures.append("chain-secrets")
    if chain.chain_count() != best_count or chain.chain_count() != lib_width:
        failures.append("chain-count")

    optimal = treepart.optimal_tree_partition(p)
    if optimal.leaf_count() != oracle.brute_min_leaf_count(p):
        failures.append("tree-leaves")

    if failures:
        for name in failures:
            print(name)
        return EXIT_ERROR
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyforest",
        description="Secret-minimizing tree/chain partitions and PRF key assignment for information flow policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a policy file")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    gi = gen_sub.add_parser("interval", help="interval-containment policy on n points")
    gi.add_argument("-n", type=int, required=True)
    gi.add_argument("--out", metavar="FILE")
    gi.set_defaults(func=cmd_generate)
    gr = gen_sub.add_parser("random", help="seeded random policy")
    gr.add_argument("-n", type=int, required=True)
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--density", type=float, default=0.3)
    gr.add_argument("--out", metavar="FILE")
    gr.set_defaults(func=cmd_generate)

    an = sub.add_parser("analyze", help="report structure and scheme costs")
    an.add_argument("--policy", required=True, metavar="FILE")
    an.add_argument("--out", metavar="FILE", help="write a TSV report")
    an.add_argument("--figures", metavar="DIR", help="directory for rendered figures")
    an.add_argument("--no-figures", action="store_true")
    an.set_defaults(func=cmd_analyze)

    pa = sub.add_parser("partition", help="compute a tree or chain partition")
    pa.add_argument("--policy", required=True, metavar="FILE")
    pa.add_argument("--mode", choices=("tree", "tree-optimal", "chain"), default="tree")
    pa.add_argument("--out", metavar="FILE")
    pa.add_argument("--dump-flow", metavar="FILE", help="debug dump of the chain flow")
    pa.set_defaults(func=cmd_partition)

    se = sub.add_parser("setup", help="generate key material for a partition")
    se.add_argument("--policy", required=True, metavar="FILE")
    se.add_argument("--partition", required=True, metavar="FILE")
    se.add_argument("--seed", metavar="HEX", help="64 hex chars; omitted = OS randomness")
    se.add_argument("--out", metavar="FILE")
    se.set_defaults(func=cmd_setup)

    de = sub.add_parser("derive", help="derive the key of y from x's issued secrets")
    de.add_argument("--policy", required=True, metavar="FILE")
    de.add_argument("--partition", required=True, metavar="FILE")
    de.add_argument("--keys", required=True, metavar="FILE")
    de.add_argument("x")
    de.add_argument("y")
    de.set_defaults(func=cmd_derive)

    ve = sub.add_parser("verify", help="check a key material file against its policy")
    ve.add_argument("--policy", required=True, metavar="FILE")
    ve.add_argument("--partition", required=True, metavar="FILE")
    ve.add_argument("--keys", required=True, metavar="FILE")
    ve.set_defaults(func=cmd_verify)

    oc = sub.add_parser("oracle-check", help="compare the optimizers against brute force")
    oc.add_argument("--policy", required=True, metavar="FILE")
    oc.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
