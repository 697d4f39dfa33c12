"""Command-line front end.

Subcommands: matrix, variety, demazure, weights, weave, chart, mellit, form,
count, cluster, mutation-graph.  All output is plain deterministic text in
the canonical renderings; DOT files are written on request.  Exit codes:
0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import random
import sys

from . import braid, chart, cluster, count, form, ring, torus, variety, weave


def _parse_braid_arg(text: str) -> braid.BraidWord:
    return braid.parse_braid(text)


def _parse_order(text: str):
    return [int(t) for t in text.replace(",", " ").split()]


def _parse_pi(text: str, n: int):
    if text == "w0":
        return braid.longest_perm(n)
    if text == "id":
        return braid.identity_perm(n)
    return braid.parse_perm(text)


def cmd_matrix(args, out):
    word = _parse_braid_arg(args.braid)
    out.write(braid.braid_matrix(word).render() + "\n")


def cmd_variety(args, out):
    word = _parse_braid_arg(args.braid)
    pres = variety.variety_equations(word, _parse_pi(args.pi, word.n))
    text = pres.render()
    out.write((text + "\n") if text else "")


def cmd_demazure(args, out):
    word = _parse_braid_arg(args.braid)
    out.write(braid.render_perm(braid.demazure_product(word)) + "\n")


def cmd_weights(args, out):
    word = _parse_braid_arg(args.braid)
    wa = torus.action_weights(word, args.side)
    for v in word.variables:
        vec = ",".join(str(x) for x in wa[v])
        out.write(f"{ring.var_name(v)} : ({vec})\n")


def cmd_weave(args, out):
    with open(args.weave) as fh:
        w = weave.parse_weave(fh.read())
    slices = weave.validate(w)
    for s in slices:
        out.write(" ".join(str(i) for i in s) + "\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(weave.export_dot(w) + "\n")
        out.write(f"dot written: {args.dot}\n")


def _chart_for(args):
    beta = _parse_braid_arg(args.braid)
    order = chart.mellit_order(beta) if args.mellit else _parse_order(args.order)
    w = weave.weave_from_opening_order(beta, order)
    return beta, order, chart.chart_parametrize(w)


def cmd_chart(args, out):
    if not args.mellit and not args.order:
        raise SystemExit(2)
    _, _, ch = _chart_for(args)
    out.write(ch.render() + "\n")


def cmd_mellit(args, out):
    beta = _parse_braid_arg(args.braid)
    out.write(" ".join(str(r) for r in chart.mellit_order(beta)) + "\n")


def cmd_form(args, out):
    beta = _parse_braid_arg(args.braid)
    order = _parse_order(args.order) if args.order else list(range(1, len(beta) + 1))
    m = form.chart_form_matrix(beta, order)
    out.write(m.render() + "\n")


def cmd_count(args, out):
    beta = _parse_braid_arg(args.braid)
    rng = random.Random(args.seed)
    poly = count.point_count_polynomial(beta, rng=rng)
    line = f"polynomial: {poly.render()}"
    if args.q:
        line += f"; q={args.q}: {poly.eval(args.q)}"
    out.write(line + "\n")
    if args.strata:
        for (a, b), mult in sorted(poly.strata.items()):
            out.write(f"stratum a={a} b={b} count={mult}\n")


def cmd_cluster(args, out):
    beta = _parse_braid_arg(args.braid)
    order = _parse_order(args.order) if args.order else list(range(1, len(beta) + 1))
    w = weave.weave_from_opening_order(beta, order)
    coords = cluster.a_coordinates(w, beta, order)
    basis = cluster.i_cycle_basis(w)
    for k, (mono, val, label) in enumerate(coords, start=1):
        ms = "*".join(
            (f"s{r}" if e == 1 else f"s{r}^{e}") for r, e in sorted(mono.items())
        )
        line = f"gamma_{k} = {ms} = {val.render()}"
        if label:
            line += f" = {label}"
        out.write(line + "\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(cluster.quiver_dot(basis.intersections) + "\n")
        out.write(f"dot written: {args.dot}\n")


def cmd_mutation_graph(args, out):
    beta = _parse_braid_arg(args.braid)
    graph = weave.mutation_graph(beta)
    out.write(graph.render() + "\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(weave.export_dot(graph) + "\n")
        out.write(f"dot written: {args.dot}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="braidweave",
        description="Exact computations with braid varieties and weave diagrams",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **flags):
        sp = sub.add_parser(name)
        for flag, kw in flags.items():
            sp.add_argument(flag, **kw)
        sp.set_defaults(fn=fn)
        return sp

    add("matrix", cmd_matrix, **{"--braid": dict(required=True)})
    add(
        "variety",
        cmd_variety,
        **{"--braid": dict(required=True), "--pi": dict(default="id")},
    )
    add("demazure", cmd_demazure, **{"--braid": dict(required=True)})
    add(
        "weights",
        cmd_weights,
        **{"--braid": dict(required=True), "--side": dict(default="left", choices=["left", "right"])},
    )
    add(
        "weave",
        cmd_weave,
        **{"--weave": dict(required=True), "--dot": dict(default=None)},
    )
    add(
        "chart",
        cmd_chart,
        **{
            "--braid": dict(required=True),
            "--order": dict(default=None),
            "--mellit": dict(action="store_true"),
        },
    )
    add("mellit", cmd_mellit, **{"--braid": dict(required=True)})
    add(
        "form",
        cmd_form,
        **{"--braid": dict(required=True), "--order": dict(default=None)},
    )
    add(
        "count",
        cmd_count,
        **{
            "--braid": dict(required=True),
            "--q": dict(type=int, default=None),
            "--strata": dict(action="store_true"),
            "--seed": dict(type=int, default=0),
        },
    )
    add(
        "cluster",
        cmd_cluster,
        **{
            "--braid": dict(required=True),
            "--order": dict(default=None),
            "--dot": dict(default=None),
        },
    )
    add(
        "mutation-graph",
        cmd_mutation_graph,
        **{"--braid": dict(required=True), "--dot": dict(default=None)},
    )
    return p


DOMAIN_ERRORS = (
    ring.RingError,
    braid.BraidError,
    weave.BudgetExceeded,
    weave.InvalidLabels,
    variety.EliminationFailed,
    cluster.NotTwoStrand,
    cluster.NotPolynomial,
    OSError,
)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        args.fn(args, out)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def run(argv, out=None) -> int:
    """Programmatic entry point: route one invocation, returning the exit
    code (0 success, 1 domain error, 2 usage error)."""
    return main(argv, out=out)


if __name__ == "__main__":
    sys.exit(main())
