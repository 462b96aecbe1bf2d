"""Command-line entry point. JSON goes to stdout (or ``-o``), summaries to stderr.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from .checker import check_separating
from .errors import PolyinvError, RunNotHalted
from .execution import HALTED, build_witness, reach_oracle, run
from .model import BAD
from .reductions import SimplexLayout, gadget_reduce, lifted_labeling, project_invariant, state_encode
from .serialize import (
    dumps,
    invariant_from_dict,
    invariant_to_dict,
    layout_from_dict,
    layout_to_dict,
    load_system,
    reach_to_dict,
    read_json,
    report_to_dict,
    run_to_dict,
    system_to_dict,
)
from .synth import NOT_FOUND_NOTE, TemplateSpec, encode_bounded_existence, search_bounded

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_invariant(path: str, vars_, states):
    try:
        return invariant_from_dict(read_json(path), vars_, states)
    except PolyinvError as exc:
        if str(exc).startswith(path):
            raise
        raise type(exc)(f"{path}: {exc}") from None


def _simplex_layout(path: str) -> SimplexLayout:
    try:
        layout = layout_from_dict(read_json(path))
    except PolyinvError as exc:
        raise type(exc)(f"{path}: {exc}") from None
    if not isinstance(layout, SimplexLayout):
        raise PolyinvError(f"{path}: lift-inv and project-inv need a state-encoding layout")
    return layout


def cmd_simulate(a) -> int:
    s = load_system(a.system)
    r = run(s, a.steps)
    _emit(dumps(run_to_dict(r, s)), a.output)
    _note(f"{r.status} after {len(r.configs) - 1} steps at {r.last.state.name}")
    return EXIT_OK if r.status == HALTED else EXIT_NEGATIVE


def cmd_check(a) -> int:
    s = load_system(a.system)
    inv = _load_invariant(a.invariant, s.vars, [st.name for st in s.states])
    report = check_separating(s, inv)
    _emit(dumps(report_to_dict(report, s)), a.output)
    _note(f"verdict: {report.verdict}")
    for o in report.failures:
        _note(f"  transition {o.index} {o.transition.label()}: {o.note}")
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_reduce(a) -> int:
    s = load_system(a.system)
    if a.kind == "gadget":
        target, layout = gadget_reduce(s, le_guard=a.le_guard)
    else:
        if a.le_guard:
            raise PolyinvError("--le-guard only applies to the gadget reduction")
        target, layout = state_encode(s)
    _emit(dumps(system_to_dict(target)), a.output)
    if a.layout:
        Path(a.layout).write_text(dumps(layout_to_dict(layout)), encoding="utf-8")
    _note(f"{a.kind}: {len(target.states)} states, dimension {target.dim}")
    return EXIT_OK


def cmd_witness(a) -> int:
    s = load_system(a.system)
    r = run(s, a.steps)
    try:
        inv = build_witness(s, r)
    except RunNotHalted as exc:
        _emit(dumps(run_to_dict(r, s)), a.output)
        _note(str(exc))
        return EXIT_NEGATIVE
    report = check_separating(s, inv)
    if not report.ok:
        _emit(dumps(report_to_dict(report, s)), a.output)
        _note(f"witness rejected by the checker: {report.verdict}")
        return EXIT_NEGATIVE
    _emit(dumps(invariant_to_dict(inv, s.vars)), a.output)
    _note(f"halted after {len(r.configs) - 1} steps; witness is {report.verdict}")
    return EXIT_OK


def cmd_lift(a) -> int:
    layout = _simplex_layout(a.layout)
    inv = _load_invariant(a.invariant, layout.source_vars, layout.order)
    _emit(dumps(invariant_to_dict(lifted_labeling(inv, layout), layout.target_vars)), a.output)
    _note(f"lifted {len(layout.order)} labels into dimension {layout.target_dim}")
    return EXIT_OK


def cmd_project(a) -> int:
    layout = _simplex_layout(a.layout)
    inv = _load_invariant(a.invariant, layout.target_vars, None)
    if layout.main_state not in inv:
        raise PolyinvError(f"{a.invariant}: no label for {layout.main_state!r}")
    out = project_invariant(inv[layout.main_state], layout)
    _emit(dumps(invariant_to_dict(out, layout.source_vars)), a.output)
    _note(f"projected onto {len(out)} control states")
    return EXIT_OK


def cmd_emit_smt(a) -> int:
    s = load_system(a.system)
    _emit(encode_bounded_existence(s, TemplateSpec(a.k)), a.output)
    _note(f"emitted template encoding with k = {a.k}")
    return EXIT_OK


def cmd_search(a) -> int:
    s = load_system(a.system)
    found = search_bounded(s, TemplateSpec(a.k, a.B))
    if found is None:
        _emit(dumps({"found": False, "note": NOT_FOUND_NOTE}), a.output)
        _note(NOT_FOUND_NOTE)
        return EXIT_NEGATIVE
    _emit(dumps(invariant_to_dict(found, s.vars)), a.output)
    _note(f"found a separating inductive invariant with k = {a.k}, B = {a.B}")
    return EXIT_OK


def cmd_oracle(a) -> int:
    s = load_system(a.system)
    configs = reach_oracle(s, a.steps)
    doc = reach_to_dict(configs, s)
    _emit(dumps(doc), a.output)
    _note(f"{len(configs)} configurations within {a.steps} steps; bad reachable: {doc['bad_reachable']}")
    return EXIT_NEGATIVE if any(c.state.kind == BAD for c in configs) else EXIT_OK


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyinv", description="Polyhedral separating invariants for guarded affine transition systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
        return sp

    sp = command("simulate", cmd_simulate, "run the deterministic machine")
    sp.add_argument("system")
    sp.add_argument("--steps", type=_nonneg, required=True)

    sp = command("check", cmd_check, "check a labeling is a separating inductive invariant")
    sp.add_argument("system")
    sp.add_argument("invariant")

    sp = command("reduce", cmd_reduce, "apply a reduction")
    sp.add_argument("kind", choices=["gadget", "states"])
    sp.add_argument("system")
    sp.add_argument("--le-guard", action="store_true", help="gadget: guard with y <= (t^2+t)/2 instead of equality")
    sp.add_argument("--layout", help="also write the layout file here")

    sp = command("witness", cmd_witness, "run, build the hull witness and check it")
    sp.add_argument("system")
    sp.add_argument("--steps", type=_nonneg, required=True)

    sp = command("lift-inv", cmd_lift, "lift a labeling through a state-encoding layout")
    sp.add_argument("invariant")
    sp.add_argument("layout")

    sp = command("project-inv", cmd_project, "project an encoded invariant back to per-state labels")
    sp.add_argument("invariant")
    sp.add_argument("layout")

    sp = command("emit-smt", cmd_emit_smt, "write the bounded-template existence problem as SMT-LIB 2")
    sp.add_argument("system")
    sp.add_argument("-k", type=_nonneg, required=True)

    sp = command("search", cmd_search, "enumerate small integer templates")
    sp.add_argument("system")
    sp.add_argument("-k", type=_nonneg, required=True)
    sp.add_argument("-B", type=_nonneg, required=True)

    sp = command("oracle", cmd_oracle, "bounded breadth-first reachability")
    sp.add_argument("system")
    sp.add_argument("--steps", type=_nonneg, required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except PolyinvError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
