"""Regenerate the sample JSON files in this directory."""
from __future__ import annotations

from pathlib import Path

from polyinv.model import (
    BAD, INITIAL, LE, ORDINARY, AffineExpr, AffineUpdate, ControlState, Guard, LinAtom,
    Transition, TransitionSystem,
)
from polyinv.execution import build_witness, run
from polyinv.polyhedra import VPolytope
from polyinv.reductions import gadget_reduce, state_encode
from polyinv.serialize import dumps, invariant_to_dict, layout_to_dict, system_to_dict

HERE = Path(__file__).parent


def src_t() -> TransitionSystem:
    s0, h, bad = ControlState(0, "s0", INITIAL), ControlState(1, "h", ORDINARY), ControlState(2, "bad", BAD)
    inc = AffineUpdate({0: AffineExpr({0: 1}, 1)})
    return TransitionSystem(["x"], [s0, h, bad], [
        Transition(s0, s0, Guard([LinAtom({0: 1}, LE, 2)]), inc),
        Transition(s0, h, Guard([LinAtom({0: -1}, LE, -3)])),
    ])


def src_l() -> TransitionSystem:
    s0, bad = ControlState(0, "s0", INITIAL), ControlState(1, "bad", BAD)
    return TransitionSystem(["x"], [s0, bad], [Transition(s0, s0, Guard(), AffineUpdate({0: AffineExpr({0: 1}, 1)}))])


def toy(bad_rhs: int = -1) -> TransitionSystem:
    s0, bad = ControlState(0, "s0", INITIAL), ControlState(1, "bad", BAD)
    return TransitionSystem(["x"], [s0, bad], [
        Transition(s0, s0, Guard(), AffineUpdate({0: AffineExpr({0: 1}, 1)})),
        Transition(s0, bad, Guard([LinAtom({0: 1}, LE, bad_rhs)])),
    ])


def write(name: str, doc) -> None:
    (HERE / name).write_text(dumps(doc), encoding="utf-8")


def main() -> None:
    gad_t, layout = gadget_reduce(src_t())
    witness = build_witness(gad_t, run(gad_t, 100))
    bad_witness = dict(witness)
    bad_witness["s0"] = VPolytope(3, list(witness["s0"].points) + [(2, 2, "5/2")])
    enc, enc_layout = state_encode(gad_t)
    write("src-t.json", system_to_dict(src_t()))
    write("src-l.json", system_to_dict(src_l()))
    write("toy.json", system_to_dict(toy()))
    write("toy-reachable.json", system_to_dict(toy(5)))
    write("gad-t.json", system_to_dict(gad_t))
    write("gad-t.layout.json", layout_to_dict(layout))
    write("witness.json", invariant_to_dict(witness, gad_t.vars))
    write("bad-witness.json", invariant_to_dict(bad_witness, gad_t.vars))
    write("gad-t-states.json", system_to_dict(enc))
    write("gad-t-states.layout.json", layout_to_dict(enc_layout))


if __name__ == "__main__":
    main()
