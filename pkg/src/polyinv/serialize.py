"""JSON file formats for systems, invariants, layouts, runs and reports.

Rationals are written as strings ``"p"`` or ``"p/q"``. Readers are strict:
unknown or missing fields raise ``InputError`` naming the offending path.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from .checker import CheckReport
from .errors import InputError
from .execution import Run
from .model import (
    BAD,
    EQ,
    LE,
    RELATIONS,
    STATE_KINDS,
    AffineExpr,
    AffineUpdate,
    Config,
    ControlState,
    Guard,
    LinAtom,
    Monomial,
    PolyAtom,
    Transition,
    TransitionSystem,
    parse_rational,
    render_rational,
)
from .polyhedra import Constraint, HPolyhedron, Polyhedron, VPolytope
from .reductions import GadgetLayout, SimplexLayout


def _obj(value: Any, where: str, required: Iterable[str], optional: Iterable[str] = ()) -> dict:
    if not isinstance(value, dict):
        raise InputError(f"{where}: expected an object")
    required, optional = set(required), set(optional)
    unknown = set(value) - required - optional
    if unknown:
        raise InputError(f"{where}: unknown field {sorted(unknown)[0]!r}")
    missing = required - set(value)
    if missing:
        raise InputError(f"{where}: missing field {sorted(missing)[0]!r}")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list")
    return value


def _str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise InputError(f"{where}: expected a string")
    return value


def _rat(value: Any, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def _var(name: Any, vars_: Sequence[str], where: str) -> int:
    name = _str(name, where)
    if name not in vars_:
        raise InputError(f"{where}: unknown variable {name!r}")
    return vars_.index(name)


def _coeffs(value: Any, vars_: Sequence[str], where: str) -> dict[int, Fraction]:
    if not isinstance(value, dict):
        raise InputError(f"{where}: expected an object of coefficients")
    return {_var(k, vars_, f"{where}.{k}"): _rat(v, f"{where}.{k}") for k, v in value.items()}


def _render_coeffs(items: Iterable[tuple[int, Fraction]], vars_: Sequence[str]) -> dict[str, str]:
    return {vars_[v]: render_rational(c) for v, c in items if c != 0}


def _rel(value: Any, where: str, allowed: Sequence[str] = RELATIONS) -> str:
    if value not in allowed:
        raise InputError(f"{where}: relation must be one of {list(allowed)}, got {value!r}")
    return value


# --- systems ----------------------------------------------------------------

def system_to_dict(s: TransitionSystem) -> dict:
    vars_ = s.vars

    def guard(g: Guard) -> dict:
        return {
            "lin": [{"coeffs": _render_coeffs(a.coeffs, vars_), "rel": a.rel, "rhs": render_rational(a.rhs)}
                    for a in g.lin],
            "poly": [{"monomials": [{"coeff": render_rational(m.coeff),
                                     "vars": {vars_[v]: e for v, e in m.exponents}} for m in a.monomials],
                      "rel": a.rel, "rhs": render_rational(a.rhs)} for a in g.poly],
        }

    def update(u: AffineUpdate) -> dict:
        return {"assign": {vars_[v]: {"coeffs": _render_coeffs(e.coeffs, vars_), "offset": render_rational(e.offset)}
                           for v, e in u.assign}}

    return {
        "vars": list(vars_),
        "states": [{"name": st.name, "kind": st.kind} for st in s.states],
        "initial": {"state": s.initial_state.name, "values": [render_rational(x) for x in s.initial_values]},
        "transitions": [{"from": t.source.name, "to": t.target.name, "guard": guard(t.guard),
                         "update": update(t.update)} for t in s.transitions],
    }


def system_from_dict(doc: Any) -> TransitionSystem:
    doc = _obj(doc, "system", ["vars", "states", "initial", "transitions"])
    vars_ = [_str(v, f"vars[{i}]") for i, v in enumerate(_list(doc["vars"], "vars"))]
    if len(set(vars_)) != len(vars_):
        raise InputError("vars: duplicate variable name")
    states = []
    for i, st in enumerate(_list(doc["states"], "states")):
        where = f"states[{i}]"
        st = _obj(st, where, ["name", "kind"])
        kind = st["kind"]
        if kind not in STATE_KINDS:
            raise InputError(f"{where}.kind: must be one of {list(STATE_KINDS)}, got {kind!r}")
        states.append(ControlState(i, _str(st["name"], f"{where}.name"), kind))
    by_name = {st.name: st for st in states}
    if len(by_name) != len(states):
        raise InputError("states: duplicate state name")

    def state(name: Any, where: str) -> ControlState:
        name = _str(name, where)
        if name not in by_name:
            raise InputError(f"{where}: unknown state {name!r}")
        return by_name[name]

    init = _obj(doc["initial"], "initial", ["state", "values"])
    init_state = state(init["state"], "initial.state")
    if init_state.kind != "initial":
        raise InputError(f"initial.state: state {init_state.name!r} is not of kind 'initial'")
    values = [_rat(v, f"initial.values[{i}]") for i, v in enumerate(_list(init["values"], "initial.values"))]
    if len(values) != len(vars_):
        raise InputError(f"initial.values: expected {len(vars_)} values, got {len(values)}")

    transitions = []
    for i, t in enumerate(_list(doc["transitions"], "transitions")):
        where = f"transitions[{i}]"
        t = _obj(t, where, ["from", "to", "guard", "update"])
        g = _obj(t["guard"], f"{where}.guard", ["lin", "poly"])
        lin = []
        for j, a in enumerate(_list(g["lin"], f"{where}.guard.lin")):
            w = f"{where}.guard.lin[{j}]"
            a = _obj(a, w, ["coeffs", "rel", "rhs"])
            lin.append(LinAtom(_coeffs(a["coeffs"], vars_, f"{w}.coeffs"), _rel(a["rel"], f"{w}.rel"),
                               _rat(a["rhs"], f"{w}.rhs")))
        poly = []
        for j, a in enumerate(_list(g["poly"], f"{where}.guard.poly")):
            w = f"{where}.guard.poly[{j}]"
            a = _obj(a, w, ["monomials", "rel", "rhs"])
            monos = []
            for k, m in enumerate(_list(a["monomials"], f"{w}.monomials")):
                mw = f"{w}.monomials[{k}]"
                m = _obj(m, mw, ["coeff", "vars"])
                exps = m["vars"]
                if not isinstance(exps, dict) or not all(isinstance(e, int) and e > 0 for e in exps.values()):
                    raise InputError(f"{mw}.vars: expected an object of positive integer exponents")
                monos.append(Monomial(_rat(m["coeff"], f"{mw}.coeff"),
                                      {_var(v, vars_, f"{mw}.vars.{v}"): e for v, e in exps.items()}))
            try:
                poly.append(PolyAtom(monos, _rel(a["rel"], f"{w}.rel"), _rat(a["rhs"], f"{w}.rhs")))
            except InputError as exc:
                raise InputError(f"{w}: {exc}") from None
        u = _obj(t["update"], f"{where}.update", ["assign"])
        if not isinstance(u["assign"], dict):
            raise InputError(f"{where}.update.assign: expected an object")
        assign = {}
        for name, e in u["assign"].items():
            w = f"{where}.update.assign.{name}"
            e = _obj(e, w, ["coeffs", "offset"])
            assign[_var(name, vars_, w)] = AffineExpr(_coeffs(e["coeffs"], vars_, f"{w}.coeffs"),
                                                      _rat(e["offset"], f"{w}.offset"))
        transitions.append(Transition(state(t["from"], f"{where}.from"), state(t["to"], f"{where}.to"),
                                      Guard(lin, poly), AffineUpdate(assign)))
    return TransitionSystem(vars_, states, transitions, values)


# --- invariants -------------------------------------------------------------

def constraint_to_dict(c: Constraint, vars_: Sequence[str]) -> dict:
    return {"coeffs": _render_coeffs(enumerate(c.coeffs), vars_), "rel": c.rel, "rhs": render_rational(c.rhs)}


def polyhedron_to_json(P: Polyhedron, vars_: Sequence[str]) -> Any:
    if isinstance(P, VPolytope):
        if not P.points:
            return "empty"
        return {"vrep": [[render_rational(x) for x in p] for p in P.points]}
    return {"hrep": [constraint_to_dict(c, vars_) for c in P.constraints]}


def polyhedron_from_json(value: Any, vars_: Sequence[str], where: str) -> Polyhedron:
    d = len(vars_)
    if value == "empty":
        return VPolytope.empty(d)
    if isinstance(value, dict) and "vrep" in value:
        value = _obj(value, where, ["vrep"])
        points = []
        for i, p in enumerate(_list(value["vrep"], f"{where}.vrep")):
            p = [_rat(x, f"{where}.vrep[{i}][{j}]") for j, x in enumerate(_list(p, f"{where}.vrep[{i}]"))]
            if len(p) != d:
                raise InputError(f"{where}.vrep[{i}]: expected {d} coordinates, got {len(p)}")
            points.append(p)
        return VPolytope(d, points)
    value = _obj(value, where, ["hrep"])
    cons = []
    for i, c in enumerate(_list(value["hrep"], f"{where}.hrep")):
        w = f"{where}.hrep[{i}]"
        c = _obj(c, w, ["coeffs", "rel", "rhs"])
        row = [Fraction(0)] * d
        for v, k in _coeffs(c["coeffs"], vars_, f"{w}.coeffs").items():
            row[v] = k
        cons.append(Constraint(row, _rel(c["rel"], f"{w}.rel", (LE, EQ)), _rat(c["rhs"], f"{w}.rhs")))
    return HPolyhedron(d, cons)


def invariant_to_dict(labels: Mapping[str, Polyhedron], vars_: Sequence[str]) -> dict:
    return {"labels": {name: polyhedron_to_json(P, vars_) for name, P in labels.items()}}


def invariant_from_dict(doc: Any, vars_: Sequence[str], states: Iterable[str] | None = None) -> dict[str, Polyhedron]:
    doc = _obj(doc, "invariant", ["labels"])
    if not isinstance(doc["labels"], dict):
        raise InputError("labels: expected an object")
    labels = {_str(k, "labels"): polyhedron_from_json(v, vars_, f"labels.{k}") for k, v in doc["labels"].items()}
    if states is not None:
        states = list(states)
        for name in labels:
            if name not in states:
                raise InputError(f"labels.{name}: unknown control state")
        for name in states:
            if name not in labels:
                raise InputError(f"labels: missing control state {name!r}")
    return labels


# --- layouts ----------------------------------------------------------------

def layout_to_dict(layout: GadgetLayout | SimplexLayout) -> dict:
    if isinstance(layout, GadgetLayout):
        return {"kind": "gadget", "t_var": layout.t_var, "y_var": layout.y_var,
                "bad_state": layout.bad_state, "source_dim": layout.source_dim}
    return {
        "kind": "simplex",
        "source_vars": list(layout.source_vars),
        "target_vars": list(layout.target_vars),
        "enc_vars": list(layout.enc_vars),
        "order": list(layout.order),
        "encodings": {k: [render_rational(x) for x in v] for k, v in layout.encodings.items()},
        "bad_state": layout.bad_state,
        "main_state": layout.main_state,
        "target_bad": layout.target_bad,
    }


def _int(value: Any, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InputError(f"{where}: expected a nonnegative integer")
    return value


def layout_from_dict(doc: Any) -> GadgetLayout | SimplexLayout:
    if not isinstance(doc, dict) or doc.get("kind") not in ("gadget", "simplex"):
        raise InputError("layout.kind: expected 'gadget' or 'simplex'")
    if doc["kind"] == "gadget":
        doc = _obj(doc, "layout", ["kind", "t_var", "y_var", "bad_state", "source_dim"])
        return GadgetLayout(_int(doc["t_var"], "layout.t_var"), _int(doc["y_var"], "layout.y_var"),
                            _str(doc["bad_state"], "layout.bad_state"), _int(doc["source_dim"], "layout.source_dim"))
    doc = _obj(doc, "layout", ["kind", "source_vars", "target_vars", "enc_vars", "order", "encodings",
                               "bad_state", "main_state", "target_bad"])
    source_vars = tuple(_str(v, "layout.source_vars") for v in _list(doc["source_vars"], "layout.source_vars"))
    target_vars = tuple(_str(v, "layout.target_vars") for v in _list(doc["target_vars"], "layout.target_vars"))
    enc = tuple(_int(v, "layout.enc_vars") for v in _list(doc["enc_vars"], "layout.enc_vars"))
    order = tuple(_str(v, "layout.order") for v in _list(doc["order"], "layout.order"))
    if not isinstance(doc["encodings"], dict) or set(doc["encodings"]) != set(order):
        raise InputError("layout.encodings: expected one code per state in layout.order")
    codes = {}
    for name in order:
        code = tuple(_rat(x, f"layout.encodings.{name}") for x in _list(doc["encodings"][name], f"layout.encodings.{name}"))
        if len(code) != len(enc):
            raise InputError(f"layout.encodings.{name}: expected {len(enc)} coordinates")
        codes[name] = code
    if len(target_vars) != len(source_vars) + len(enc):
        raise InputError("layout.target_vars: length must be source_vars plus enc_vars")
    return SimplexLayout(len(source_vars), source_vars, enc, order, codes, _str(doc["bad_state"], "layout.bad_state"),
                         target_vars, _str(doc["main_state"], "layout.main_state"),
                         _str(doc["target_bad"], "layout.target_bad"))


# --- runs, reachability and reports -----------------------------------------

def config_to_dict(cfg: Config, vars_: Sequence[str]) -> dict:
    return {"state": cfg.state.name, "values": [render_rational(x) for x in cfg.values]}


def run_to_dict(r: Run, s: TransitionSystem) -> dict:
    out = {"status": r.status, "configs": [config_to_dict(c, s.vars) for c in r.configs]}
    if r.conflict:
        out["conflict"] = [t.label() for t in r.conflict]
    return out


def reach_to_dict(configs: Iterable[Config], s: TransitionSystem) -> dict:
    ordered = sorted(configs, key=lambda c: (c.state.index, c.values))
    return {"configs": [config_to_dict(c, s.vars) for c in ordered],
            "bad_reachable": any(c.state.kind == BAD for c in ordered)}


def _point(p, vars_: Sequence[str]) -> dict | None:
    if p is None:
        return None
    return {v: render_rational(x) for v, x in zip(vars_, p)}


def report_to_dict(report: CheckReport, s: TransitionSystem) -> dict:
    return {
        "verdict": report.verdict,
        "initial_ok": report.initial_ok,
        "bad_empty": report.bad_empty,
        "transitions": [
            {
                "index": o.index,
                "from": o.transition.source.name,
                "to": o.transition.target.name,
                "status": o.status,
                "fragment": o.fragment,
                "witness": _point(o.witness, s.vars),
                "image": _point(o.image, s.vars),
                "note": o.note,
            }
            for o in report.outcomes
        ],
    }


# --- files ------------------------------------------------------------------

def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_system(path: str | Path) -> TransitionSystem:
    try:
        return system_from_dict(read_json(path))
    except InputError as exc:
        if str(exc).startswith(str(path)):
            raise
        raise InputError(f"{path}: {exc}") from None
