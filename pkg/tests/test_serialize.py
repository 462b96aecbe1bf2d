from __future__ import annotations

import copy
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyinv.errors import InputError
from polyinv.execution import build_witness, run
from polyinv.model import (
    BAD, INITIAL, ORDINARY, AffineExpr, AffineUpdate, ControlState, Guard, LinAtom, Transition, TransitionSystem,
)
from polyinv.polyhedra import HPolyhedron, VPolytope, eq, le
from polyinv.reductions import gadget_reduce, state_encode
from polyinv.serialize import (
    dumps,
    invariant_from_dict,
    invariant_to_dict,
    layout_from_dict,
    layout_to_dict,
    system_from_dict,
    system_to_dict,
)
from systems import src_t


def reparse(doc):
    return json.loads(dumps(doc))


def test_gadget_system_round_trip():
    g, layout = gadget_reduce(src_t(), le_guard=True)
    doc = system_to_dict(g)
    assert system_from_dict(reparse(doc)) == g
    assert dumps(system_to_dict(system_from_dict(reparse(doc)))) == dumps(doc)
    assert layout_from_dict(reparse(layout_to_dict(layout))) == layout


def test_simplex_layout_round_trip():
    enc, layout = state_encode(gadget_reduce(src_t())[0])
    assert system_from_dict(reparse(system_to_dict(enc))) == enc
    assert layout_from_dict(reparse(layout_to_dict(layout))) == layout


def test_invariant_round_trip():
    g, _ = gadget_reduce(src_t())
    w = build_witness(g, run(g, 20))
    w["h"] = HPolyhedron(3, [le([1, 0, 0], "1/2"), eq([0, 1, -1], 4)])
    back = invariant_from_dict(reparse(invariant_to_dict(w, g.vars)), g.vars, [s.name for s in g.states])
    assert back["s0"] == w["s0"] and back["h"] == w["h"]
    assert back["bad"] == VPolytope.empty(3)


def test_rationals_are_strings_and_keys_sorted():
    text = dumps(system_to_dict(gadget_reduce(src_t())[0]))
    assert '"-1/2"' in text and '"coeff": -' not in text
    doc = json.loads(text)
    assert list(doc) == sorted(doc)


def mutate(doc, path, value):
    doc = copy.deepcopy(doc)
    target = doc
    for key in path[:-1]:
        target = target[key]
    if value is KeyError:
        del target[path[-1]]
    else:
        target[path[-1]] = value
    return doc


@pytest.mark.parametrize("path, value, fragment", [
    (("extra",), 1, "unknown field 'extra'"),
    (("initial",), KeyError, "missing field 'initial'"),
    (("transitions", 0, "guard", "lin", 0, "rhs"), 2, "transitions[0].guard.lin[0].rhs"),
    (("transitions", 0, "guard", "lin", 0, "rhs"), "1.5", "not a rational"),
    (("transitions", 0, "guard", "lin", 0, "rel"), ">=", "transitions[0].guard.lin[0].rel"),
    (("transitions", 0, "guard", "lin", 0, "coeffs"), {"z": "1"}, "unknown variable 'z'"),
    (("transitions", 0, "to"), "nowhere", "transitions[0].to"),
    (("states", 1, "kind"), "final", "states[1].kind"),
    (("initial", "values"), ["0", "0"], "initial.values"),
    (("transitions", 0, "update", "assign", "x", "surprise"), 1, "unknown field 'surprise'"),
])
def test_system_errors_name_the_field(path, value, fragment):
    doc = mutate(system_to_dict(src_t()), path, value)
    with pytest.raises(InputError) as err:
        system_from_dict(doc)
    assert fragment in str(err.value)


def test_invariant_errors():
    vars_ = ["x"]
    with pytest.raises(InputError, match="labels.s0.vrep"):
        invariant_from_dict({"labels": {"s0": {"vrep": [["1", "2"]]}}}, vars_)
    with pytest.raises(InputError, match="missing control state 'h'"):
        invariant_from_dict({"labels": {"s0": "empty"}}, vars_, ["s0", "h"])
    with pytest.raises(InputError, match="relation"):
        invariant_from_dict({"labels": {"s0": {"hrep": [{"coeffs": {"x": "1"}, "rel": "<", "rhs": "0"}]}}}, vars_)
    with pytest.raises(InputError, match="unknown field"):
        invariant_from_dict({"labels": {"s0": {"hrep": [], "vrep": []}}}, vars_)


names = st.sampled_from(["x", "y", "z"])
rats = st.fractions(-99, 99, max_denominator=9)


@st.composite
def systems(draw):
    vars_ = ["x", "y", "z"]
    states = [ControlState(0, "a", INITIAL), ControlState(1, "b", ORDINARY), ControlState(2, "c", BAD)]
    transitions = []
    for _ in range(draw(st.integers(0, 3))):
        src = draw(st.sampled_from(states[:2]))
        dst = draw(st.sampled_from(states))
        atoms = [LinAtom({vars_.index(v): c for v, c in draw(st.dictionaries(names, rats)).items()},
                         draw(st.sampled_from(["<=", "<", "="])), draw(rats)) for _ in range(draw(st.integers(0, 2)))]
        assign = {vars_.index(v): AffineExpr({vars_.index(w): c for w, c in draw(st.dictionaries(names, rats)).items()},
                                             draw(rats))
                  for v in draw(st.sets(names))}
        transitions.append(Transition(src, dst, Guard(atoms), AffineUpdate(assign)))
    return TransitionSystem(vars_, states, transitions, draw(st.lists(rats, min_size=3, max_size=3)))


@settings(max_examples=60, deadline=None)
@given(systems())
def test_random_system_round_trip(s):
    doc = system_to_dict(s)
    assert system_from_dict(reparse(doc)) == s
    assert dumps(system_to_dict(system_from_dict(reparse(doc)))) == dumps(doc)
