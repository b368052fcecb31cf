"""Command-line interface: ``gridhfk <command> FILE ...``.

Exit codes: 0 success, 1 domain error (bad diagram, illegal move, failed
check), 2 usage error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .complex import DEFAULT_MAX_N
from .errors import CycleCheckFailed, GridHFKError, LimitExceeded
from .grid import (
    CommuteCols,
    CommuteRows,
    Destabilize,
    GridDiagram,
    Stabilize,
    Symmetry,
    apply_move,
    classical_invariants,
    format_move,
    parse_grid,
    parse_script,
    resolve,
    trace_components,
)
from .homology import DEFAULT_MAX_BUCKET, half, reduced_ranks, tau, tilde_homology_table
from .legendrian import (
    U_POWER_TABLE,
    canonical_chain,
    canonical_cycles,
    classes_equal,
    destabilization_transport,
    lambda_report,
    pentagon_transport,
)

CAVEAT = (
    "Caveat: the classes are invariants only up to quasi-isomorphism. A loop of "
    "grid moves from a diagram back to itself can act nontrivially on homology, "
    "so a lambda verdict is about the two presented diagrams, not about canonical "
    "elements of an abstract homology group."
)


class UsageError(Exception):
    pass


def _threads() -> int | None:
    raw = os.environ.get("GRIDHFK_THREADS")
    if raw is None:
        return None
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k < 1:
        raise UsageError(f"GRIDHFK_THREADS must be a positive integer, got {raw!r}")
    return k


def _load(path: str) -> GridDiagram:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_grid(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=False)


def _fmt_a(a2: Sequence[int]) -> str:
    return ",".join(str(half(v)) for v in a2)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> str:
    G = _load(args.file)
    P = trace_components(G)
    return f"ok: n={G.n}, components={P.count}"


def cmd_invariants(args) -> str:
    inv = classical_invariants(_load(args.file))
    d = inv.as_dict()
    if args.json:
        return _dump(d)
    return "\n".join(f"{k}: {' '.join(map(str, v)) if isinstance(v, list) else v}" for k, v in d.items())


def cmd_gradings(args) -> str:
    G = _load(args.file)
    inv = classical_invariants(G)
    cc = canonical_cycles(G, inv)  # raises CycleCheckFailed on any mismatch
    lines = [
        f"tb: {' '.join(map(str, inv.tb))}   rot: {' '.join(map(str, inv.rot))}",
        f"x+ = {list(cc.x_plus)}  M={cc.m_plus}  A={_fmt_a(cc.a2_plus)}  cycle: yes",
        f"x- = {list(cc.x_minus)}  M={cc.m_minus}  A={_fmt_a(cc.a2_minus)}  cycle: yes",
        "gradings match tb/rot prediction: yes",
    ]
    return "\n".join(lines)


def cmd_homology(args) -> str:
    table = tilde_homology_table(_load(args.file), max_n=args.max_n)
    return table.to_json() if args.json else table.to_text()


def cmd_lambda(args) -> str:
    if args.depth < 0:
        raise UsageError("--depth must be nonnegative")
    G = _load(args.file)
    rep = lambda_report(G, args.depth, args.max_bucket, args.max_n)
    return _dump(rep.as_dict())


def cmd_tau(args) -> str:
    return _dump(tau(_load(args.file), max_n=args.max_n).as_dict())


def _flag(v) -> str:
    return "null" if v is None else str(v).lower()


def cmd_distinguish(args) -> str:
    G1, G2 = _load(args.file1), _load(args.file2)
    i1, i2 = classical_invariants(G1), classical_invariants(G2)
    details = [
        f"{args.file1}: tb={list(i1.tb)} rot={list(i1.rot)}",
        f"{args.file2}: tb={list(i2.tb)} rot={list(i2.rot)}",
    ]
    verdict = None
    if i1.tb != i2.tb:
        verdict = f"distinguished (classical): tb differs ({list(i1.tb)} vs {list(i2.tb)})"
    elif i1.rot != i2.rot:
        verdict = f"distinguished (classical): rot differs ({list(i1.rot)} vs {list(i2.rot)})"
    else:
        h1 = tilde_homology_table(G1, max_n=args.max_n)
        h2 = tilde_homology_table(G2, max_n=args.max_n)
        if reduced_ranks(h1, trace_components(G1).sizes) != reduced_ranks(h2, trace_components(G2).sizes):
            verdict = "distinguished (classical): homology tables differ"
        else:
            e1 = classes_equal(G1, args.max_bucket, args.max_n)
            e2 = classes_equal(G2, args.max_bucket, args.max_n)
            details.append(f"classes_equal: {_flag(e1)} vs {_flag(e2)}")
            if e1 is not None and e2 is not None and e1 != e2:
                verdict = f"distinguished (lambda): classes_equal differs ({_flag(e1)} vs {_flag(e2)})"
    if verdict is None:
        verdict = "inconclusive"
    if args.verbose:
        return "\n".join([verdict, *details, CAVEAT])
    return verdict


def _class_step(G: GridDiagram, H: GridDiagram, move) -> dict:
    """How the canonical classes of H relate to those of G after one move.

    ``plus``/``minus`` name the class of G that the class of H corresponds
    to, with the U-power picked up; None when no transport is available.
    """
    step = {"move": format_move(move), "plus": "plus", "minus": "minus",
            "u_power_plus": 0, "u_power_minus": 0}
    match move:
        case Symmetry(kind):
            if kind in ("reflect-ad", "rot180"):
                step["plus"], step["minus"] = "minus", "plus"
        case CommuteCols() | CommuteRows():
            for which in ("plus", "minus"):
                img = pentagon_transport(G, H, canonical_chain(G, which), which)
                if img != canonical_chain(H, which):
                    raise CycleCheckFailed(f"commutation did not carry x{which} to x{which}")
        case Stabilize() | Destabilize():
            typ = move.type
            if typ not in U_POWER_TABLE:
                step.update(plus=None, minus=None, u_power_plus=None, u_power_minus=None,
                            note=f"no direct transport for {typ}")
            else:
                big, small = (H, G) if isinstance(move, Stabilize) else (G, H)
                rec = destabilization_transport(big, small, typ)
                sign = 1 if isinstance(move, Stabilize) else -1
                step["u_power_plus"] = sign * rec.u_power_plus
                step["u_power_minus"] = sign * rec.u_power_minus
            step["type"] = typ
    return step


def cmd_move(args) -> str:
    G0 = _load(args.file)
    moves = parse_script(args.script)
    G = G0
    steps = []
    track = {"plus": ("plus", 0), "minus": ("minus", 0)}
    for m in moves:
        m = resolve(G, m)
        H = apply_move(G, m)
        if args.transport:
            st = _class_step(G, H, m)
            steps.append(st)
            new = {}
            for which in ("plus", "minus"):
                src = st[which]
                if src is None or track[src] is None:
                    new[which] = None
                else:
                    label, u = track[src]
                    new[which] = (label, u + st[f"u_power_{which}"])
            track = new
        G = H
    text = G.to_text() + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if not args.transport:
        return text.rstrip("\n")
    i0, i1 = classical_invariants(G0), classical_invariants(G)

    def shape(v):
        return list(v) if len(v) != 1 else v[0]

    report = {
        "diagram": G.to_text(),
        "tb": [shape(i0.tb), shape(i1.tb)],
        "rot": [shape(i0.rot), shape(i1.rot)],
        "steps": steps,
        "transport": {
            which: None if track[which] is None
            else {"from": track[which][0], "u_power": track[which][1]}
            for which in ("plus", "minus")
        },
    }
    return _dump(report)


def cmd_front(args) -> str:
    from .front import render_front

    G = _load(args.file)
    svg = render_front(G)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    inv = classical_invariants(G)
    return f"wrote {args.output}: {sum(inv.cusps_up) + sum(inv.cusps_down)} cusps"


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gridhfk", description="Knot Floer data and Legendrian invariants from grid diagrams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def limits(sp):
        sp.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="largest grid size to enumerate")
        sp.add_argument("--max-bucket", type=int, default=DEFAULT_MAX_BUCKET,
                        help="largest bigraded piece of the minus complex to search")

    sp = sub.add_parser("validate", help="check a diagram file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("invariants", help="writhe, cusps, tb, rot (and sl for knots)")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("gradings", help="audit the canonical cycles x+ and x-")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_gradings)

    sp = sub.add_parser("homology", help="bigraded ranks of the tilde complex")
    sp.add_argument("file")
    sp.add_argument("--variant", choices=["tilde"], default="tilde")
    sp.add_argument("--json", action="store_true")
    limits(sp)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("lambda", help="Legendrian invariant report (JSON)")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, default=3, help="U-power depth for the nonvanishing check")
    limits(sp)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("distinguish", help="try to tell two Legendrian diagrams apart")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--verbose", action="store_true")
    limits(sp)
    sp.set_defaults(func=cmd_distinguish)

    sp = sub.add_parser("tau", help="tau of a knot (JSON)")
    sp.add_argument("file")
    limits(sp)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("move", help="apply a move script")
    sp.add_argument("file")
    sp.add_argument("--script", required=True, help='e.g. "stab X:SW 0; comm-col 2; rot180"')
    sp.add_argument("-o", "--output")
    sp.add_argument("--transport", action="store_true", help="report how x+ and x- are carried along")
    sp.set_defaults(func=cmd_move)

    sp = sub.add_parser("front", help="render the front projection as SVG")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_front)
    return p


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Run one command; returns (exit code, output text)."""
    try:
        _threads()
        args = build_parser().parse_args(argv)
        if getattr(args, "max_n", 1) < 1 or getattr(args, "max_bucket", 1) < 1:
            raise UsageError("limits must be positive")
        return 0, args.func(args)
    except UsageError as exc:
        return 2, f"usage error: {exc}"
    except LimitExceeded as exc:
        return 3, f"limit exceeded: {exc}"
    except GridHFKError as exc:
        return 1, f"error: {type(exc).__name__}: {exc}"


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return 0
    code, out = run(argv)
    stream = sys.stdout if code == 0 else sys.stderr
    if out:
        print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
