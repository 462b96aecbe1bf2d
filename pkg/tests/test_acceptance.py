"""Acceptance criteria AC-1 .. AC-9. Each test prints one PASS/FAIL line."""
from __future__ import annotations

import contextlib
import itertools
import random
import time
from fractions import Fraction

import pytest

from polyinv.checker import NOT_INDUCTIVE, SEPARATING_INDUCTIVE, check_separating
from polyinv.execution import BUDGET_EXHAUSTED, HALTED, build_witness, labeling_from_configs, reach_oracle, run
from polyinv.model import (
    BAD, EQ, INITIAL, LE, LT, AffineExpr, AffineUpdate, ControlState, Guard, LinAtom, Transition, TransitionSystem,
    apply_update, eval_guard,
)
from polyinv.polyhedra import (
    HPolyhedron,
    VPolytope,
    contains,
    fm_eliminate,
    h_entails,
    hrep_to_vrep,
    is_bounded,
    is_vertex,
    le,
    member_of_hull,
    same_set,
    vrep_to_hrep,
)
from polyinv.reductions import (
    decode_config,
    gadget_reduce,
    lift_invariant,
    lifted_labeling,
    project_gadget_config,
    project_invariant,
    state_encode,
)
from polyinv.smtlib import check_script, sample_violations
from polyinv.synth import TemplateSpec, encode_bounded_existence, search_bounded, template_model
from systems import src_l, src_t, toy, vec


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def report(name: str, summary: str):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"\n{name} FAIL: {summary}")
            raise
        with capsys.disabled():
            print(f"\n{name} PASS: {summary}")
    return report


def gadget_t_witness():
    g, _ = gadget_reduce(src_t())
    r = run(g, 100)
    return g, r, build_witness(g, r)


def test_ac1_terminating_run_gives_invariant(criterion):
    with criterion("AC-1", "gadget(SRC-T) run -> witness -> separating-inductive, bad label empty, < 1 s"):
        start = time.perf_counter()
        g, r, w = gadget_t_witness()
        report = check_separating(g, w)
        elapsed = time.perf_counter() - start
        assert r.status == HALTED
        assert [(c.state.name, *c.values) for c in r.configs] == [
            ("s0", 0, 0, 0), ("s0", 1, 1, 1), ("s0", 2, 2, 3), ("s0", 3, 3, 6), ("h", 3, 4, 10)]
        assert report.verdict == SEPARATING_INDUCTIVE
        assert w["bad"].points == ()
        assert elapsed < 1.0, elapsed


def test_ac2_closed_form(criterion):
    with criterion("AC-2", "gadget(SRC-L) config k has t = k, y = (k^2+k)/2 for k <= 100"):
        g, layout = gadget_reduce(src_l())
        for budget in (0, 1, 17, 100):
            r = run(g, budget)
            assert r.status == BUDGET_EXHAUSTED and len(r.configs) == budget + 1
            for k, c in enumerate(r.configs):
                assert c.values[layout.t_var] == k
                assert c.values[layout.y_var] == Fraction(k * k + k, 2)


def test_ac3_vertex_property(criterion):
    with criterion("AC-3", "run configs are vertices; 50 on-parabola points at non-run t rejected"):
        _, r, w = gadget_t_witness()
        for name, P in w.items():
            assert all(is_vertex(P, i) for i in range(len(P.points))), name
        rng = random.Random(3)
        P = w["s0"]
        tested = 0
        while tested < 50:
            t = Fraction(rng.randint(1, 299), rng.randint(2, 100))
            if t.denominator == 1 or not 0 < t < 3:
                continue
            for x in (t, Fraction(rng.randint(0, 3))):
                assert not member_of_hull(P, (x, t, (t * t + t) / 2))
            tested += 1


@pytest.mark.parametrize("name, make", [("SRC-T", src_t), ("SRC-L", src_l)])
def test_ac4_reachability_preserved(criterion, name, make):
    with criterion("AC-4", f"{name}: source, gadget-projected and simplex-decoded reach sets coincide at 12 steps"):
        s = make()
        g, glayout = gadget_reduce(s)
        enc, slayout = state_encode(s)
        source = reach_oracle(s, 12)
        assert {project_gadget_config(c, glayout) for c in reach_oracle(g, 12)} == source
        assert {decode_config(c, slayout, s) for c in reach_oracle(enc, 12)} == source


def test_ac5_simplex_round_trip(criterion):
    with criterion("AC-5", "lift then project returns the witness; both sides separating-inductive"):
        g, _, w = gadget_t_witness()
        enc, layout = state_encode(g)
        lifted = lift_invariant(w, layout)
        back = project_invariant(lifted, layout)
        for name, P in w.items():
            assert same_set(back[name], P), name
        assert check_separating(g, w).verdict == SEPARATING_INDUCTIVE
        assert check_separating(enc, lifted_labeling(w, layout)).verdict == SEPARATING_INDUCTIVE
        # the same through the constraint form of the lifted polytope
        H = vrep_to_hrep(lifted)
        back_h = project_invariant(H, layout)
        assert all(same_set(back_h[n], w[n]) for n in w)


def test_ac6_truncated_runs_fail(criterion):
    with criterion("AC-6", "gadget(SRC-L) prefixes n = 2..8 fail, witnessed at t = n-1"):
        g, layout = gadget_reduce(src_l())
        r = run(g, 20)
        for n in range(2, 9):
            labels = labeling_from_configs(g, r.configs[:n])
            report = check_separating(g, labels)
            assert report.verdict == NOT_INDUCTIVE, n
            (fail,) = report.failures
            assert fail.transition.source == fail.transition.target == g.initial_state
            assert fail.witness[layout.t_var] == n - 1 and fail.image[layout.t_var] == n


def random_bounded_polytope(rng: random.Random) -> HPolyhedron:
    while True:
        d = rng.randint(1, 4)
        m = rng.randint(d + 1, 8)
        rows = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(m)]
        P = HPolyhedron(d, [le(r, rng.randint(0, 6)) for r in rows])
        if is_bounded(P):
            return P


def test_ac7_polyhedra_kernel(criterion):
    with criterion("AC-7", "200 random H-polytopes: H->V->H mutual entailment, FM = dropped-vertex hull"):
        rng = random.Random(7)
        for _ in range(200):
            P = random_bounded_polytope(rng)
            V = hrep_to_vrep(P)
            H = vrep_to_hrep(V)
            assert all(h_entails(P, c) for c in H.constraints) and all(h_entails(H, c) for c in P.constraints)
            if P.dim > 1:
                v = rng.randrange(P.dim)
                shadow = fm_eliminate(P, v)
                dropped = VPolytope(P.dim - 1, [p[:v] + p[v + 1:] for p in V.points])
                assert same_set(shadow, dropped)


def test_ac8_bounded_search(criterion):
    with criterion("AC-8", "toy search finds x >= 0 (k=1, B=1) < 1 s; SMT valid; 1000-sample consistency"):
        s = toy()
        spec = TemplateSpec(1, 1)
        start = time.perf_counter()
        found = search_bounded(s, spec)
        elapsed = time.perf_counter() - start
        assert found is not None and elapsed < 1.0, elapsed
        assert found["s0"].constraints == (le([-1], 0),)
        assert check_separating(s, found).verdict == SEPARATING_INDUCTIVE
        text = encode_bounded_existence(s, spec)
        check_script(text)
        assert sample_violations(text, template_model(s, found, spec.k), samples=1000) == []


def random_system(rng: random.Random) -> TransitionSystem:
    s0, bad = ControlState(0, "s0", INITIAL), ControlState(1, "bad", BAD)
    transitions = []
    for _ in range(rng.randint(1, 3)):
        target = s0 if rng.random() < 0.6 else bad
        atoms = [LinAtom({0: rng.randint(-2, 2), 1: rng.randint(-2, 2)}, rng.choice([LE, LT, EQ]), rng.randint(-4, 4))
                 for _ in range(rng.randint(0, 2))]
        assign = {v: AffineExpr({0: rng.randint(-1, 1), 1: rng.randint(-1, 1)}, rng.randint(-2, 2))
                  for v in range(2) if rng.random() < 0.7}
        transitions.append(Transition(s0, target, Guard(atoms), AffineUpdate(assign)))
    return TransitionSystem(["x", "y"], [s0, bad], transitions, [rng.randint(-2, 2), rng.randint(-2, 2)])


def random_label(rng: random.Random, s: TransitionSystem):
    if rng.random() < 0.5:
        # the hull of what is reachable in a few steps; often inductive
        return labeling_from_configs(s, reach_oracle(s, rng.randint(0, 4)))["s0"]
    cons = []
    for v in range(2):
        # boxes around the initial point, so the initial condition usually holds
        x0 = int(s.initial_values[v])
        lo, hi = rng.randint(-8, x0), rng.randint(x0, 8)
        unit = [int(i == v) for i in range(2)]
        cons += [le(unit, hi), le([-u for u in unit], -lo)]
    cons += [le([rng.randint(-2, 2), rng.randint(-2, 2)], rng.randint(-2, 8)) for _ in range(rng.randint(0, 2))]
    return HPolyhedron(2, cons)


def test_ac9_checker_vs_brute_force(criterion):
    passes = 0
    with criterion("AC-9", "50 random 2-state integer systems: no integer counterexample when the checker passes"):
        rng = random.Random(9)
        box = [vec(x, y) for x, y in itertools.product(range(-8, 9), repeat=2)]
        for _ in range(50):
            s = random_system(rng)
            labels = {"s0": random_label(rng, s), "bad": VPolytope.empty(2)}
            report = check_separating(s, labels)
            if report.verdict != SEPARATING_INDUCTIVE:
                continue
            passes += 1
            P = labels["s0"]
            inside = [p for p in box if contains(P, p)]
            for t in s.transitions:
                Q = labels[t.target.name]
                for p in inside:
                    if eval_guard(t.guard, p):
                        assert contains(Q, apply_update(t.update, p)), (t.label(), p)
        # the comparison must actually have been exercised
        assert passes >= 5, passes
