"""Command-line front end.

Exit status: 0 success or property holds, 1 property fails, 2 usage or domain
error, 3 a state/size bound was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import CoordKind, CycloidSpec, equivalent, metrics, normalize, regular_label
from .errors import CycloidError, ParseError, ResourceError
from .isomorphism import isomorphic
from .nets import (
    FoldSpec,
    Net,
    attach_regular_labels,
    backward_fold,
    delete_process,
    fold_classes,
    initial_marking,
    make_stop_resilient,
    synthesize,
)
from .scenarios import stop_and_cascade, stop_scenario
from .semantics import (
    DEFAULT_MAX_STATES,
    PropertyReport,
    check_fold_bisimulation,
    check_liveness,
    check_safety,
    reachability,
)
from .serialize import export, import_json, net_title

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Usage(Exception):
    pass


def _fold_arg(text: str):
    if text == "total":
        return "total"
    try:
        return frozenset(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'total' or comma-separated indices, got {text!r}") from None


def _index_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _spec(params) -> CycloidSpec:
    return CycloidSpec(*params)


def _folded(spec: CycloidSpec, fold) -> Net:
    net = synthesize(spec)
    if spec.is_regular:
        net = attach_regular_labels(net)
    if fold is None:
        return net
    D = FoldSpec.total(spec.beta) if fold == "total" else FoldSpec(fold)
    return backward_fold(net, D)


def _node_text(net: Net, x) -> str:
    return f"{x}={net.labels[x]}" if x in net.labels else str(x)


def _marking_text(net: Net, m: dict) -> str:
    return " ".join(_node_text(net, p) if c == 1 else f"{_node_text(net, p)}*{c}" for p, c in sorted(m.items()))


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list = []
        self.data: dict = {}

    def line(self, text: str = ""):
        self.lines.append(text)

    def flush(self):
        if self.as_json:
            sys.stdout.write(json.dumps(self.data, indent=2) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _emit_net(args, out: _Out, net: Net, m: dict) -> None:
    if args.format:
        payload = export(net, m, args.format)
        if args.output:
            Path(args.output).write_bytes(payload)
            out.line(f"wrote {args.output}")
            out.data["written"] = args.output
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
        return
    out.line(f"{net_title(net)}: |T|={len(net.transitions)} |S|={len(net.places)} |F|={len(net.arcs)}")
    out.line(f"marking: {_marking_text(net, m)}")
    out.data.update(
        net=net_title(net),
        transitions=len(net.transitions),
        places=len(net.places),
        arcs=len(net.arcs),
        marking={str(p): c for p, c in sorted(m.items())},
    )


def _report(out: _Out, net: Net, report: PropertyReport) -> int:
    out.data.setdefault("reports", []).append(report.to_dict())
    verdict = "inconclusive" if report.inconclusive else ("yes" if report.holds else "no")
    out.line(f"{report.property}: {verdict}")
    for key in ("states", "edges", "complete", "pairs"):
        if key in report.stats:
            out.line(f"  {key}: {report.stats[key]}")
    w = report.witness or {}
    if "sequence" in w:
        out.line("  witness: " + (" ".join(_node_text(net, t) for t in w["sequence"]) or "(initial marking)"))
    if "marking" in w:
        out.line(f"  reached: {_marking_text(net, w['marking'])}")
    if "place" in w:
        out.line(f"  {w['place']} carries {w['tokens']} tokens")
    for key in ("unreachable", "enabled_only_in_folded", "enabled_only_in_base"):
        if w.get(key):
            out.line(f"  {key.replace('_', ' ')}: " + " ".join(map(str, w[key])))
    if report.inconclusive:
        return EXIT_RESOURCE
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_info(args, out: _Out) -> int:
    spec = _spec(args.params)
    mt = metrics(spec)
    yn = {True: "yes", False: "no"}
    out.line(f"A={mt.area} p={spec.process_length if spec.is_regular else '-'} n={mt.n} regular={yn[mt.is_regular]}")
    out.line(f"forward cycles: {mt.fwd_cycle_count} x length {mt.fwd_cycle_len}, {mt.fwd_tokens_per_cycle} tokens each")
    out.line(f"backward cycles: {mt.bwd_cycle_count} x length {mt.bwd_cycle_len}, {mt.bwd_tokens_per_cycle} tokens each")
    out.line(f"minimal cycle: {mt.min_cycle} ({mt.min_cycle_source})")
    out.data = {"spec": str(spec), **{k: v for k, v in vars(mt).items()}}
    return EXIT_OK


def cmd_equiv(args, out: _Out) -> int:
    spec = _spec(args.params)
    a, b = tuple(args.points[:2]), tuple(args.points[2:])
    eq = equivalent(spec, a, b)
    out.line(f"({a[0]},{a[1]}) {'==' if eq else '!='} ({b[0]},{b[1]}) in {spec}")
    out.data = {"spec": str(spec), "a": list(a), "b": list(b), "equivalent": eq}
    return EXIT_OK if eq else EXIT_FAIL


def cmd_normalize(args, out: _Out) -> int:
    spec = _spec(args.params)
    w = normalize(spec, tuple(args.point))
    out.line(str(w.representative))
    out.data = {"spec": str(spec), "point": list(args.point), "representative": list(w.representative), "m": w.m, "n": w.n_steps}
    return EXIT_OK


def cmd_build(args, out: _Out) -> int:
    net = _folded(_spec(args.params), args.fold)
    _emit_net(args, out, net, initial_marking(net, args.marking, args.k))
    return EXIT_OK


def cmd_fold(args, out: _Out) -> int:
    spec = _spec(args.params)
    net = _folded(spec, args.fold)
    if args.format:
        _emit_net(args, out, net, initial_marking(net, args.marking, args.k))
        return EXIT_OK
    out.line(f"{net_title(net)}: |T|={len(net.transitions)} |S|={len(net.places)} |F|={len(net.arcs)}")
    D = FoldSpec.total(spec.beta) if args.fold == "total" else FoldSpec(args.fold)
    classes = []
    for c in fold_classes(spec, D):
        labels = [str(x) for x in sorted(regular_label(spec, m.point, CoordKind.BWD_PLACE) for m in c.members)]
        out.line(f"SB{{{c.index}}} = {{{', '.join(labels)}}}")
        classes.append({"index": c.index, "members": labels})
    out.data = {"net": net_title(net), "classes": classes}
    return EXIT_OK


def cmd_stop(args, out: _Out) -> int:
    net = make_stop_resilient(args.g, args.c, force=args.force, gamma=args.gamma, delta=args.delta, processes=args.processes)
    m = initial_marking(net)
    if args.fire is not None:
        m, seq = stop_and_cascade(net, m, args.fire)
        out.line("fired: " + " ".join(_node_text(net, t) for t in seq))
        out.data["fired"] = [str(t) for t in seq]
    _emit_net(args, out, net, m)
    return EXIT_OK


def cmd_delete(args, out: _Out) -> int:
    if args.input:
        if len(args.ints) != 1:
            raise _Usage("delete --from FILE takes exactly one process index")
        net, m = import_json(Path(args.input).read_bytes())
        j = args.ints[0]
    else:
        if len(args.ints) != 3:
            raise _Usage("delete takes G C J (or --from FILE J)")
        g, c, j = args.ints
        net = make_stop_resilient(g, c)
        m, seq = stop_and_cascade(net, initial_marking(net), j)
        out.line("fired: " + " ".join(_node_text(net, t) for t in seq))
        out.data["fired"] = [str(t) for t in seq]
    reduced = delete_process(net, j)
    m = {p: n for p, n in m.items() if p in reduced.places}
    _emit_net(args, out, reduced, m)
    return EXIT_OK


def _net_source(args):
    if args.input:
        if args.params:
            raise _Usage("give either four parameters or --from FILE, not both")
        net, m = import_json(Path(args.input).read_bytes())
        return net, m, None
    if len(args.params or ()) != 4:
        raise _Usage("expected four cycloid parameters or --from FILE")
    spec = _spec(args.params)
    net = _folded(spec, args.fold)
    return net, initial_marking(net, args.marking, args.k), spec


def cmd_check(args, out: _Out) -> int:
    net, m, spec = _net_source(args)
    props = ["safe", "live", "bisim"] if args.property == "all" else [args.property]
    if "bisim" in props and (spec is None or not net.is_folded):
        if args.property == "bisim":
            raise _Usage("--property bisim needs cycloid parameters and --fold")
        props.remove("bisim")
    out.line(f"{net_title(net)} from {_marking_text(net, m)}")
    codes = []
    rg = None
    for prop in props:
        if prop == "bisim":
            base = attach_regular_labels(synthesize(spec))
            report = check_fold_bisimulation(base, initial_marking(base, args.marking, args.k), net, args.rule, args.max_states)
        else:
            if rg is None:
                rg = reachability(net, m, args.rule, args.max_states)
            report = check_safety(rg) if prop == "safe" else check_liveness(rg)
        codes.append(_report(out, net, report))
    return max(codes)


def cmd_scenario(args, out: _Out) -> int:
    report = stop_scenario(args.g, args.c, args.s, args.processes, args.max_states)
    for r in report.stats["rounds"]:
        seq = " ".join(map(str, r["sequence"]))
        out.line(
            f"round {r['round']}: stop a_{r['stopped']} of {r['from']} [{seq}] -> {r['target']}"
            f" isomorphic={r['isomorphic']} safe={r['safe']} live={r['live']} states={r['states']}"
        )
    d = report.to_dict()
    if report.holds:
        d["witness"] = {"mapping_size": len(report.witness["mapping"])}
    out.data = d
    verdict = "inconclusive" if report.inconclusive else ("holds" if report.holds else "fails")
    out.line(f"stop scenario ({args.g},{args.c},{args.s}): {verdict}")
    if report.inconclusive:
        return EXIT_RESOURCE
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_iso(args, out: _Out) -> int:
    if args.files:
        (a, ma), (b, mb) = (import_json(Path(f).read_bytes()) for f in args.files)
    else:
        if len(args.specs) != 8:
            raise _Usage("iso takes eight cycloid parameters (two specs) or --files A.json B.json")
        a, b = _folded(_spec(args.specs[:4]), args.fold), _folded(_spec(args.specs[4:]), args.fold)
        ma, mb = initial_marking(a, args.marking, args.k), initial_marking(b, args.marking, args.k)
    report = isomorphic(a, b, (ma, mb) if args.with_marking else None, args.max_nodes)
    out.line(f"{net_title(a)} ~ {net_title(b)}: {'yes' if report.holds else 'no'}")
    d = report.to_dict()
    if report.holds:
        d["witness"]["mapping"] = dict(sorted(d["witness"]["mapping"].items()))
        if args.show_mapping:
            for x, y in sorted(report.witness["mapping"].items()):
                out.line(f"  {x} -> {y}")
    else:
        out.line(f"  {report.witness['reason']}")
    out.data = d
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_export(args, out: _Out) -> int:
    net, m = import_json(Path(args.input).read_bytes())
    args.format = args.format or "json"
    _emit_net(args, out, net, m)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON output")

    def net_opts(p, fold_default=None):
        p.add_argument("--fold", type=_fold_arg, default=fold_default, metavar="total|I,J,...", help="backward folding")
        p.add_argument("--marking", choices=["regular", "standard"], default="regular")
        p.add_argument("--k", type=int, default=0, help="k of the k-regular marking")

    def out_opts(p):
        p.add_argument("--format", choices=["json", "dot", "pnml"], help="export instead of printing a summary")
        p.add_argument("-o", "--output", help="write the export to this file")

    parser = _Parser(prog="cycloids", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("info", parents=[common], help="parameters, cycle structure and minimal cycle")
    p.add_argument("params", nargs=4, type=int, metavar="P", help="alpha beta gamma delta")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("equiv", parents=[common], help="are two points equivalent")
    p.add_argument("params", nargs=4, type=int, metavar="P", help="alpha beta gamma delta")
    p.add_argument("points", nargs=4, type=int, metavar="C", help="x1 y1 x2 y2 (put -- before negative values)")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("normalize", parents=[common], help="fundamental representative of a point")
    p.add_argument("params", nargs=4, type=int, metavar="P", help="alpha beta gamma delta")
    p.add_argument("point", nargs=2, type=int, metavar="C", help="x y (put -- before negative values)")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("build", parents=[common], help="synthesize a cycloid net")
    p.add_argument("params", nargs=4, type=int, metavar="P", help="alpha beta gamma delta")
    net_opts(p)
    out_opts(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("fold", parents=[common], help="backward folding and its classes")
    p.add_argument("params", nargs=4, type=int, metavar="P", help="alpha beta gamma delta")
    net_opts(p, fold_default="total")
    out_opts(p)
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("stop", parents=[common], help="stop-resilient cycloid C^stop_bf(g,c)")
    p.add_argument("g", type=int)
    p.add_argument("c", type=int)
    p.add_argument("--force", action="store_true", help="allow a base cycloid other than C(g,c,c,c)")
    p.add_argument("--gamma", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--processes", type=_index_list, help="processes that get a stop transition")
    p.add_argument("--fire", type=int, metavar="K", help="fire the stop of a_K and its cascade")
    out_opts(p)
    p.set_defaults(func=cmd_stop)

    p = sub.add_parser("delete", parents=[common], help="stop a process, cascade and delete it")
    p.add_argument("ints", nargs="+", type=int, metavar="N", help="G C J, or J with --from")
    p.add_argument("--from", dest="input", metavar="FILE", help="start from an exported JSON net and marking")
    out_opts(p)
    p.set_defaults(func=cmd_delete)

    p = sub.add_parser("check", parents=[common], help="safety, liveness or fold bisimulation")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--from", dest="input", metavar="FILE")
    net_opts(p)
    p.add_argument("--property", choices=["safe", "live", "bisim", "all"], default="all")
    p.add_argument("--rule", choices=["plain", "contact-free"], default="plain")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scenario", parents=[common], help="stop s processes of C^stop_bf(g,c) in turn")
    p.add_argument("g", type=int)
    p.add_argument("c", type=int)
    p.add_argument("s", type=int)
    p.add_argument("--processes", type=_index_list, help="process stopped in each round (default: last)")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("iso", parents=[common], help="net isomorphism between two cycloids or two JSON files")
    p.add_argument("specs", nargs="*", type=int, metavar="PARAM")
    p.add_argument("--files", nargs=2, metavar="FILE")
    net_opts(p)
    p.add_argument("--with-marking", action="store_true", help="also preserve token counts")
    p.add_argument("--show-mapping", action="store_true")
    p.add_argument("--max-nodes", type=int, default=1000)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("export", parents=[common], help="re-export a JSON net as dot, pnml or json")
    p.add_argument("input", metavar="FILE")
    out_opts(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.json)
    try:
        code = args.func(args, out)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"cycloids {args.verb}: error: {exc}\n")
        return EXIT_USAGE
    except (CycloidError, ParseError, OSError) as exc:
        sys.stderr.write(f"cycloids {args.verb}: error: {exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        sys.stderr.write(f"cycloids {args.verb}: resource bound: {exc}\n")
        return EXIT_RESOURCE
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
