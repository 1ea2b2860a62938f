"""Command-line entry point.

Exit codes: 0 success, 1 negative analysis result (denied request,
non-conforming network, non-lattice under ``--expect-lattice``), 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conformance import add_channel, parse_policy, remove_channel, verify
from .errors import PoflowError, UnknownEntity, UnknownFlow
from .formats import (
    export_dot,
    parse_network,
    render_conformance,
    render_labels,
    render_lattice,
    render_set,
    render_system_labels,
    serialize_network,
)
from .lattice import dedekind_macneille, induced_subnetwork, lattice_check, merge_networks
from .model import FlowSystem, build_flow_system
from .order import compute_labels, condense, simulate_propagation
from .pdp import PDPSession, Request

OK, NEGATIVE, USAGE = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load(path: str) -> FlowSystem:
    return parse_network(_read(path))


def _flow(system: FlowSystem, flow_id: str):
    net = system.network(flow_id)
    if net is None:
        raise UnknownFlow(flow_id)
    return net


def cmd_labels(args, out) -> int:
    system = _load(args.net)
    out.write(render_system_labels([compute_labels(n) for n in system.networks]))
    return OK


def cmd_decide(args, out) -> int:
    system = _load(args.net)
    session = PDPSession(system, timestamps=args.audit_timestamps)
    decision, record = session.evaluate_and_log(Request(args.flow, args.src, args.dst, args.op))
    out.write(f"{decision.verdict.value} {decision.reason.value}\n")
    if args.audit_log:
        with open(args.audit_log, "a") as fh:
            fh.write(record.line() + "\n")
    return OK if decision.granted else NEGATIVE


def cmd_check(args, out) -> int:
    system = _load(args.net)
    spec = parse_policy(_read(args.policy))
    report = verify(_flow(system, spec.flow_id), spec)
    out.write(render_conformance(report))
    return OK if report.conforms else NEGATIVE


def cmd_lattice(args, out) -> int:
    system = _load(args.net)
    all_lattices = True
    blocks = []
    for net in system.networks:
        poset = condense(net)
        report = lattice_check(poset)
        all_lattices &= report.is_lattice
        completion = dedekind_macneille(poset) if args.complete else None
        blocks.append(render_lattice(net.flow_id, report, completion))
    out.write("\n".join(blocks))
    if args.expect_lattice and not all_lattices:
        return NEGATIVE
    return OK


def cmd_merge(args, out) -> int:
    first, second = _load(args.net1), _load(args.net2)
    networks = {n.flow_id: n for n in first.networks}
    order = list(networks)
    for net in second.networks:
        if net.flow_id in networks:
            networks[net.flow_id] = merge_networks(networks[net.flow_id], net, args.shared)
        else:
            networks[net.flow_id] = net
            order.append(net.flow_id)
    merged = build_flow_system(
        [networks[f] for f in order], first.split_groups | second.split_groups
    )
    out.write(serialize_network(merged))
    return OK


def cmd_extract(args, out) -> int:
    system = _load(args.net)
    keep = set(args.entities)
    for e in args.entities:
        if system.flow_of(e) is None:
            raise UnknownEntity(e, "system")
    networks = [induced_subnetwork(n, keep & n.entities) for n in system.networks]
    groups = [g & keep for g in system.split_groups if len(g & keep) >= 2]
    out.write(serialize_network(build_flow_system(networks, groups)))
    return OK


def cmd_dot(args, out) -> int:
    out.write(export_dot(_load(args.net)))
    return OK


def cmd_simulate(args, out) -> int:
    net = _flow(_load(args.net), args.flow)
    out.write(render_set(simulate_propagation(net, args.source)) + "\n")
    return OK


def cmd_edit(args, out) -> int:
    system = _load(args.net)
    src, dst = args.add or args.remove
    flow = system.flow_of(src)
    if flow is None:
        raise UnknownEntity(src, "system")
    net = system.network(flow)
    table = compute_labels(net)
    if args.add:
        net, table = add_channel(net, table, src, dst)
    else:
        net, table = remove_channel(net, table, src, dst)
    if args.labels:
        out.write(render_labels(table))
    else:
        networks = [net if n.flow_id == flow else n for n in system.networks]
        out.write(serialize_network(build_flow_system(networks, system.split_groups)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poflow", description="Partial-order data-flow labels, decisions and analysis."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("labels", help="print the provenance label of every entity")
    p.add_argument("net")
    p.set_defaults(func=cmd_labels)

    p = sub.add_parser("decide", help="decide one data-transfer request")
    p.add_argument("net")
    p.add_argument("flow")
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("--op", default="", help="operation tag (informational)")
    p.add_argument("--audit-log", metavar="FILE", help="append the audit record to FILE")
    p.add_argument("--audit-timestamps", action="store_true",
                   help="add a UTC timestamp to the audit record")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("check", help="verify a network against a policy file")
    p.add_argument("net")
    p.add_argument("policy")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lattice", help="report whether each flow's order is a lattice")
    p.add_argument("net")
    p.add_argument("--complete", action="store_true", help="also compute the completion")
    p.add_argument("--expect-lattice", action="store_true",
                   help="exit 1 when some flow is not a lattice")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("merge", help="union two network files")
    p.add_argument("net1")
    p.add_argument("net2")
    p.add_argument("--shared", action="store_true",
                   help="identify same-named entities instead of rejecting them")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("extract", help="restrict a network to some entities")
    p.add_argument("net")
    p.add_argument("entities", nargs="+")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("dot", help="export the channel graph in DOT syntax")
    p.add_argument("net")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("simulate", help="propagate a token from one entity")
    p.add_argument("net")
    p.add_argument("flow")
    p.add_argument("source")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("edit", help="add or remove one channel")
    p.add_argument("net")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--add", nargs=2, metavar=("SRC", "DST"))
    group.add_argument("--remove", nargs=2, metavar=("SRC", "DST"))
    p.add_argument("--labels", action="store_true",
                   help="print the updated labels instead of the network")
    p.set_defaults(func=cmd_edit)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (PoflowError, OSError) as err:
        print(f"poflow: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
