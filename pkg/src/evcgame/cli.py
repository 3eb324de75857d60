"""Single entry point for the toolkit.

Verbs: mvc, classify, approx2, evc exact, evc cobip, reduce rbds,
verify reduction, extract-domset, strategy check, gen, play, serve.
Machine-readable output via --json. Decision answers (YES/NO) are results:
they print on stdout and exit 0. Usage errors exit 2, computation errors 1.
EVC_BUDGET overrides the configuration-enumeration budget.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import cobipartite as cb
from . import engine, reduction
from .graphs import (Graph, GraphFormatError, INFINITE, classify, diameter,
                     is_vertex_cover, mvc_exact, parse_graph, serialize_graph,
                     two_matching_cover)


class CliError(RuntimeError):
    pass


def _budget() -> engine.Budget:
    raw = os.environ.get("EVC_BUDGET")
    if not raw:
        return engine.Budget()
    try:
        configs = int(raw)
    except ValueError:
        raise CliError(f"EVC_BUDGET must be an integer, got {raw!r}")
    return engine.Budget(configs=configs,
                         transitions=max(engine.DEFAULT_TRANSITION_BUDGET,
                                         100 * configs))


def _load_graph(path: str) -> Graph:
    try:
        return parse_graph(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    except GraphFormatError as exc:
        raise CliError(f"{path}: {exc}")


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(human))


def cmd_mvc(args) -> int:
    g = _load_graph(args.graph)
    size, witness = mvc_exact(g, limit=args.limit)
    ids = sorted(g.ids[v] for v in witness)
    _emit(args, {"mvc": size, "witness": ids},
          [f"mvc = {size}", f"witness: {' '.join(ids)}"])
    return 0


def cmd_classify(args) -> int:
    g = _load_graph(args.graph)
    f = classify(g)
    d = diameter(g)
    payload = {"bipartite": f.bipartite, "split": f.split,
               "cobipartite": f.cobipartite,
               "diameter": None if d == INFINITE else int(d)}
    _emit(args, payload,
          [f"bipartite:   {f.bipartite}", f"split:       {f.split}",
           f"cobipartite: {f.cobipartite}",
           f"diameter:    {'infinite' if d == INFINITE else int(d)}"])
    return 0


def cmd_approx2(args) -> int:
    g = _load_graph(args.graph)
    cover = two_matching_cover(g)
    ids = sorted(g.ids[v] for v in cover)
    _emit(args, {"size": len(cover), "cover": ids},
          [f"2-approximation cover of size {len(cover)}",
           f"cover: {' '.join(ids)}"])
    return 0


def cmd_evc_exact(args) -> int:
    g = _load_graph(args.graph)
    res = engine.evc_exact(g, k_max=args.kmax, budget=_budget())
    profile = {str(k): v for k, v in sorted(res.win_profile.items())}
    payload = {"mvc": res.mvc, "evc": res.evc, "win_profile": profile,
               "warnings": list(res.warnings)}
    human = [f"mvc = {res.mvc}",
             f"evc = {res.evc if res.evc is not None else 'not found in range'}"]
    human += [f"  k={k}: {'defender wins' if v else 'attacker wins'}"
              for k, v in sorted(res.win_profile.items())]
    human += [f"warning: {w}" for w in res.warnings]
    _emit(args, payload, human)
    if args.dump_safe and res.safe is not None:
        Path(args.dump_safe).write_text(engine.render_safe_set(res.safe),
                                        encoding="utf-8")
    return 0


def cmd_evc_cobip(args) -> int:
    g = _load_graph(args.graph)
    try:
        a, b = cb.parse_sides(g, Path(args.sides).read_text(encoding="utf-8"))
        inst = cb.normalize(g, a, b)
    except OSError as exc:
        raise CliError(f"cannot read {args.sides}: {exc}")
    except cb.SideError as exc:
        raise CliError(str(exc))
    analysis = cb.analyze(inst)
    value, branch = cb.evc_cobip(inst, analysis)
    payload = {"evc": value, "branch": branch, "mvc": cb.mvc_cobip(inst),
               "p": inst.p, "q": inst.q}
    human = [f"evc = {value} (branch {branch}; p={inst.p}, q={inst.q}, "
             f"mvc={cb.mvc_cobip(inst)})"]
    if args.trace:
        rng = random.Random(args.seed)
        ct = cb.initial_template(inst, analysis)
        lines = []
        config = ct.materialize(inst)
        for rnd in range(1, args.trace + 1):
            if not g.edges:
                break
            e = rng.choice(g.edges)
            plan, ct = cb.defend_cobip(inst, analysis, ct, e)
            config = ct.materialize(inst)
            moves = ";".join(f"{g.ids[x]}->{g.ids[y]}" for x, y in plan.movers())
            lines.append(f"{rnd}, {g.ids[e[0]]}-{g.ids[e[1]]}, {moves}, "
                         f"{' '.join(sorted(g.ids[v] for v in config))}")
        payload["trace"] = lines
        human += lines
    _emit(args, payload, human)
    return 0


def cmd_reduce_rbds(args) -> int:
    try:
        inst = reduction.RbdsInstance.from_json(
            Path(args.instance).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {args.instance}: {exc}")
    except reduction.ReductionError as exc:
        raise CliError(str(exc))
    pre = reduction.preprocess_rbds(inst)
    if pre.outcome != "normalized":
        _emit(args, {"outcome": pre.outcome, "reason": pre.reason},
              [f"{pre.outcome}: {pre.reason}"])
        return 0
    ri = reduction.build_reduction(inst, args.variant)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{args.variant}-{inst.digest()}"
    graph_path = out / f"{stem}.graph"
    sidecar_path = out / f"{stem}.sidecar.json"
    graph_path.write_text(serialize_graph(ri.h), encoding="utf-8")
    sidecar_path.write_text(reduction.write_reduction_sidecar(ri),
                            encoding="utf-8")
    report = reduction.verify_instance(ri, budget=_budget())
    payload = {"outcome": "reduced", "graph": str(graph_path),
               "sidecar": str(sidecar_path), "ell": ri.ell,
               "n": ri.h.n, "m": len(ri.h.edges),
               "verification_ok": report.ok,
               "verification": [[c.name, c.ok, c.detail] for c in report.checks]}
    human = [f"wrote {graph_path}", f"wrote {sidecar_path}",
             f"ell = {ri.ell}, |V| = {ri.h.n}, |E| = {len(ri.h.edges)}"]
    human += report.lines()
    _emit(args, payload, human)
    return 0 if report.ok else 1


def _load_reduced(path: str) -> reduction.ReducedInstance:
    try:
        return reduction.load_reduction(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    except reduction.ReductionError as exc:
        raise CliError(str(exc))


def cmd_verify_reduction(args) -> int:
    ri = _load_reduced(args.sidecar)
    report = reduction.verify_instance(ri, budget=_budget())
    _emit(args, {"ok": report.ok,
                 "checks": [[c.name, c.ok, c.detail] for c in report.checks]},
          report.lines())
    return 0 if report.ok else 1


def cmd_extract_domset(args) -> int:
    ri = _load_reduced(args.sidecar)
    s = engine.safe_set(ri.h, ri.ell, budget=_budget())
    if not s.members:
        _emit(args, {"answer": "NO",
                     "detail": f"safe set at ell={ri.ell} is empty"},
              [f"NO: the defender cannot win with ell = {ri.ell} guards"])
        return 0
    ds = reduction.extract_dominating_set(ri, s)
    _emit(args, {"answer": "YES", "dominating_set": sorted(ds)},
          [f"YES: dominating set of size {len(ds)}: {' '.join(sorted(ds))}"])
    return 0


def cmd_strategy_check(args) -> int:
    failures: list[str] = []
    checked = 0
    if args.reduction:
        ri = _load_reduced(args.reduction)
        ok, witness = reduction.rbds_oracle(ri.source)
        if not ok:
            raise CliError("strategy check needs a YES instance "
                           "(no dominating set exists)")
        positions = {ri.source.reds.index(w) + 1 for w in witness}
        dom = reduction.pad_dominating_set(ri.source, positions)
        for nc in reduction.nice_cover_families(ri, dom):
            cover = nc.vertices(ri)
            for e in ri.h.edges:
                checked += 1
                try:
                    plan, nc2 = reduction.defend_nice(ri, nc, e)
                    target = nc2.vertices(ri)
                    engine.validate_plan(ri.h, cover, target, e, plan)
                    if not is_vertex_cover(ri.h, target):
                        raise reduction.ReductionError("result is not a cover")
                    if reduction.classify_cover(ri, target) is None:
                        raise reduction.ReductionError("result is not nice")
                except Exception as exc:  # collected, not raised: this is a report
                    failures.append(f"{nc.kind} vs {e}: {exc}")
    elif args.cobip:
        g = _load_graph(args.cobip)
        a, b = cb.parse_sides(g, Path(args.sides).read_text(encoding="utf-8"))
        inst = cb.normalize(g, a, b)
        analysis = cb.analyze(inst)
        _value, branch = cb.evc_cobip(inst, analysis)
        templates = cb.valid_templates(inst, analysis)
        tset = {t.kind for t in templates}
        for ct in templates:
            cover = ct.materialize(inst)
            for e in g.edges:
                checked += 1
                try:
                    plan, ct2 = cb.defend_cobip(inst, analysis, ct, e)
                    target = ct2.materialize(inst)
                    engine.validate_plan(g, cover, target, e, plan)
                    if not is_vertex_cover(g, target):
                        raise cb.StrategyError("result is not a cover")
                    if ct2.kind[0] == "sij" and ct2.kind not in tset:
                        raise cb.StrategyError("result leaves the template family")
                except Exception as exc:
                    failures.append(f"{ct.kind} vs {e}: {exc}")
    else:
        raise CliError("provide --reduction SIDECAR or --cobip GRAPH --sides FILE")
    payload = {"pairs_checked": checked, "failures": failures}
    human = [f"checked {checked} (cover, edge) pairs: "
             f"{'all closed' if not failures else f'{len(failures)} failures'}"]
    human += failures[:20]
    _emit(args, payload, human)
    return 0 if not failures else 1


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    out = Path(args.output) if args.output else None
    if out:
        out.mkdir(parents=True, exist_ok=True)

    def write(name: str, text: str) -> None:
        if out:
            (out / name).write_text(text, encoding="utf-8")
            print(out / name)
        else:
            sys.stdout.write(text)

    if args.family == "graph":
        for idx in range(args.count):
            edges = [(i, j) for i in range(args.n) for j in range(i + 1, args.n)
                     if rng.random() < args.density]
            g = Graph.from_indices(args.n, edges)
            write(f"graph-{args.seed}-{idx}.graph", serialize_graph(g))
    elif args.family == "rbds":
        for idx in range(args.count):
            reds = tuple(f"r{i}" for i in range(1, args.reds + 1))
            blues = tuple(f"b{i}" for i in range(1, args.blues + 1))
            edges = tuple((r, b) for r in reds for b in blues
                          if rng.random() < args.density)
            inst = reduction.RbdsInstance(reds, blues, edges, args.k)
            write(f"rbds-{args.seed}-{idx}.json", inst.to_json())
    else:  # cobip
        for idx in range(args.count):
            pattern = rng.getrandbits(args.p * args.q) if args.p * args.q else 0
            g, aids, bids = cb.build_cobip(args.p, args.q, pattern)
            inst = cb.normalize(g, [g.index(x) for x in aids],
                                [g.index(x) for x in bids])
            write(f"cobip-{args.seed}-{idx}.graph", serialize_graph(g))
            write(f"cobip-{args.seed}-{idx}.sides", cb.render_sides(inst))
    return 0


def _repl_defender(args, g: Graph):
    # mirrors the session defender sources without the HTTP layer
    if args.source == "exact":
        s = engine.safe_set(g, args.k, budget=_budget())
        if not s.members:
            raise CliError(f"safe set empty at k={args.k}; defender cannot start")
        return engine.ExactDefender(s)
    if args.source == "all-but-one":
        if args.k != g.n - 1:
            raise CliError("all-but-one play uses k = n-1")

        class Abo:
            hole = 0

            def initial(self, g2, k):
                return frozenset(x for x in range(g2.n) if x != self.hole)

            def defend(self, g2, config, attacked):
                u, v = attacked
                mapping = {x: x for x in config}
                if self.hole in (u, v):
                    other = v if self.hole == u else u
                    mapping[other] = self.hole
                    crossing = (other, self.hole)
                    self.hole = other
                else:
                    mapping[u], mapping[v] = v, u
                    crossing = (u, v)
                plan = engine.MovePlan(tuple(sorted(mapping.items())), crossing)
                return plan, frozenset(mapping.values())

        return Abo()
    raise CliError(f"unknown play source {args.source!r}")


def cmd_play(args) -> int:
    g = _load_graph(args.graph)
    defender = _repl_defender(args, g)
    config = defender.initial(g, args.k)
    print(f"playing on {args.graph}: n={g.n}, m={len(g.edges)}, k={args.k}")
    print("you attack; the engine defends. enter an edge like: a b   (or 'quit')")
    rnd = 0
    while True:
        print(f"round {rnd}: guards on {' '.join(sorted(g.ids[v] for v in config))}")
        try:
            line = input("attack> ").strip()
        except EOFError:
            print()
            return 0
        if not line or line in ("q", "quit", "exit"):
            return 0
        parts = line.split()
        if len(parts) != 2:
            print("enter two vertex ids")
            continue
        try:
            e = g.edge_key(g.index(parts[0]), g.index(parts[1]))
        except (KeyError, GraphFormatError) as exc:
            print(f"bad edge: {exc}")
            continue
        outcome = defender.defend(g, config, e)
        if outcome is None:
            print("defender has no legal move: you win")
            return 0
        plan, config = outcome
        rnd += 1
        moves = ", ".join(f"{g.ids[a]}->{g.ids[b]}" for a, b in plan.movers())
        print(f"defense: {moves}")


def cmd_serve(args) -> int:
    import uvicorn

    from .session import create_app
    static = Path(args.ui) if args.ui else None
    if static is not None and not (static / "index.html").exists():
        raise CliError(f"{static} has no index.html (build the frontend first)")
    app = create_app(trace_dir=Path(args.trace_dir) if args.trace_dir else None,
                     static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evcgame",
                                description="eternal vertex cover game toolkit")
    sub = p.add_subparsers(dest="verb", required=True)

    def add_json(sp):
        sp.add_argument("--json", action="store_true",
                        help="machine-readable output")

    sp = sub.add_parser("mvc", help="exact minimum vertex cover")
    sp.add_argument("graph")
    sp.add_argument("--limit", type=int, default=engine.DEFAULT_MVC_LIMIT)
    add_json(sp)
    sp.set_defaults(fn=cmd_mvc)

    sp = sub.add_parser("classify", help="bipartite/split/cobipartite flags")
    sp.add_argument("graph")
    add_json(sp)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("approx2", help="matching-endpoint 2-approximation")
    sp.add_argument("graph")
    add_json(sp)
    sp.set_defaults(fn=cmd_approx2)

    evc = sub.add_parser("evc", help="eternal vertex cover number")
    evc_sub = evc.add_subparsers(dest="mode", required=True)
    sp = evc_sub.add_parser("exact", help="fixed-point solver")
    sp.add_argument("graph")
    sp.add_argument("--kmax", type=int, default=None)
    sp.add_argument("--dump-safe", default=None,
                    help="write the winning region to a file")
    add_json(sp)
    sp.set_defaults(fn=cmd_evc_exact)
    sp = evc_sub.add_parser("cobip", help="polynomial cobipartite formula")
    sp.add_argument("graph")
    sp.add_argument("--sides", required=True)
    sp.add_argument("--trace", type=int, default=0,
                    help="also print N rounds of strategy trace")
    sp.add_argument("--seed", type=int, default=0)
    add_json(sp)
    sp.set_defaults(fn=cmd_evc_cobip)

    red = sub.add_parser("reduce", help="instance transformations")
    red_sub = red.add_subparsers(dest="what", required=True)
    sp = red_sub.add_parser("rbds", help="RBDS to EVC gadget")
    sp.add_argument("instance")
    sp.add_argument("--variant", choices=("bipartite", "split"),
                    default="bipartite")
    sp.add_argument("-o", "--output", default=".")
    add_json(sp)
    sp.set_defaults(fn=cmd_reduce_rbds)

    ver = sub.add_parser("verify", help="artifact verification")
    ver_sub = ver.add_subparsers(dest="what", required=True)
    sp = ver_sub.add_parser("reduction", help="re-check a reduction sidecar")
    sp.add_argument("sidecar")
    add_json(sp)
    sp.set_defaults(fn=cmd_verify_reduction)

    sp = sub.add_parser("extract-domset",
                        help="solve the gadget and pull back a dominating set")
    sp.add_argument("sidecar")
    add_json(sp)
    sp.set_defaults(fn=cmd_extract_domset)

    strat = sub.add_parser("strategy", help="strategy validation")
    strat_sub = strat.add_subparsers(dest="what", required=True)
    sp = strat_sub.add_parser("check", help="exhaustive closure check")
    sp.add_argument("--reduction", default=None, metavar="SIDECAR")
    sp.add_argument("--cobip", default=None, metavar="GRAPH")
    sp.add_argument("--sides", default=None)
    add_json(sp)
    sp.set_defaults(fn=cmd_strategy_check)

    sp = sub.add_parser("gen", help="seeded corpora")
    sp.add_argument("family", choices=("graph", "rbds", "cobip"))
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("-o", "--output", default=None)
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--density", type=float, default=0.4)
    sp.add_argument("--reds", type=int, default=3)
    sp.add_argument("--blues", type=int, default=2)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--q", type=int, default=3)
    sp.set_defaults(fn=cmd_gen, json=False)

    sp = sub.add_parser("play", help="terminal REPL against an engine defender")
    sp.add_argument("graph")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--source", choices=("exact", "all-but-one"),
                    default="exact")
    sp.set_defaults(fn=cmd_play, json=False)

    sp = sub.add_parser("serve", help="run the local session service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8123)
    sp.add_argument("--trace-dir", default=None)
    sp.add_argument("--ui", default=None, metavar="DIR",
                    help="also serve a built web client from this directory")
    sp.set_defaults(fn=cmd_serve, json=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GraphFormatError, reduction.ReductionError, cb.SideError,
            cb.StrategyError, engine.BudgetExceededError,
            engine.UnsafeConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
