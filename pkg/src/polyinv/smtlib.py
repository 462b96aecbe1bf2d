"""A small reader for the SMT-LIB 2 subset the encoder emits.

Used as an independent check on emitted scripts: ``check_script`` validates
syntax, declarations and sorts; ``sample_violations`` plugs a candidate model
into every assertion and evaluates universally quantified bodies at sampled
rational points, exactly.
"""
from __future__ import annotations

import random
from collections.abc import Callable, Mapping
from fractions import Fraction

REAL = "Real"
BOOL = "Bool"


class SmtSyntaxError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    out, i, n = [], 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            out.append(ch)
            i += 1
        elif ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise SmtSyntaxError("unterminated quoted symbol")
            out.append(text[i + 1:j])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();|":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def parse(text: str) -> list:
    tokens = tokenize(text)
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise SmtSyntaxError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise SmtSyntaxError("unbalanced ')'")
        if tok != "(":
            return tok
        items = []
        while True:
            if pos >= len(tokens):
                raise SmtSyntaxError("missing ')'")
            if tokens[pos] == ")":
                pos += 1
                return items
            items.append(expr())

    exprs = []
    while pos < len(tokens):
        exprs.append(expr())
    return exprs


def _is_number(tok: str) -> bool:
    head, _, tail = tok.partition(".")
    return head.isdigit() and (tail == "" or tail.isdigit())


_ARITH = {"+", "-", "*", "/"}
_COMPARE = {"<=", "<", ">=", ">", "="}
_BOOL_OPS = {"and", "or", "=>", "not"}


def _sort(term, scope: Mapping[str, str]) -> str:
    if isinstance(term, str):
        if _is_number(term):
            return REAL
        if term in ("true", "false"):
            return BOOL
        if term not in scope:
            raise SmtSyntaxError(f"undeclared symbol {term!r}")
        return scope[term]
    if not term or not isinstance(term[0], str):
        raise SmtSyntaxError("malformed application")
    head, args = term[0], term[1:]
    if head in ("forall", "exists"):
        if len(args) != 2 or not isinstance(args[0], list) or not args[0]:
            raise SmtSyntaxError(f"malformed {head}")
        inner = dict(scope)
        for b in args[0]:
            if not (isinstance(b, list) and len(b) == 2 and isinstance(b[0], str) and b[1] in (REAL, BOOL)):
                raise SmtSyntaxError(f"malformed binder {b!r}")
            inner[b[0]] = b[1]
        if _sort(args[1], inner) != BOOL:
            raise SmtSyntaxError(f"{head} body must be Bool")
        return BOOL
    sorts = [_sort(a, scope) for a in args]
    if head in _ARITH:
        if not args or (head != "-" and len(args) < 2) or any(s != REAL for s in sorts):
            raise SmtSyntaxError(f"bad arguments to {head!r}")
        return REAL
    if head in _COMPARE:
        if len(args) < 2 or len(set(sorts)) != 1 or (head != "=" and sorts[0] != REAL):
            raise SmtSyntaxError(f"bad arguments to {head!r}")
        return BOOL
    if head in _BOOL_OPS:
        if any(s != BOOL for s in sorts) or (head == "not" and len(args) != 1) or (head == "=>" and len(args) < 2):
            raise SmtSyntaxError(f"bad arguments to {head!r}")
        return BOOL
    raise SmtSyntaxError(f"unknown function {head!r}")


def check_script(text: str) -> dict[str, str]:
    """Validate the script; return the declared constants and their sorts."""
    commands = parse(text)
    scope: dict[str, str] = {}
    logic_set = False
    for cmd in commands:
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], str):
            raise SmtSyntaxError(f"not a command: {cmd!r}")
        name, args = cmd[0], cmd[1:]
        if name == "set-logic":
            if logic_set or len(args) != 1 or not isinstance(args[0], str):
                raise SmtSyntaxError("bad set-logic")
            logic_set = True
        elif name == "declare-const":
            if len(args) != 2 or args[1] not in (REAL, BOOL) or not isinstance(args[0], str):
                raise SmtSyntaxError(f"bad declare-const {args!r}")
            if args[0] in scope:
                raise SmtSyntaxError(f"duplicate declaration of {args[0]!r}")
            scope[args[0]] = args[1]
        elif name == "assert":
            if len(args) != 1 or _sort(args[0], scope) != BOOL:
                raise SmtSyntaxError("assert needs one Bool term")
        elif name in ("check-sat", "get-model", "exit"):
            if args:
                raise SmtSyntaxError(f"{name} takes no arguments")
        elif name in ("set-info", "set-option"):
            pass
        else:
            raise SmtSyntaxError(f"unknown command {name!r}")
        if name != "set-logic" and name not in ("set-info", "set-option") and not logic_set:
            raise SmtSyntaxError(f"{name} before set-logic")
    return scope


def evaluate(term, env: Mapping[str, Fraction | bool]):
    if isinstance(term, str):
        if _is_number(term):
            return Fraction(term)
        if term == "true":
            return True
        if term == "false":
            return False
        return env[term]
    head, args = term[0], term[1:]
    if head in ("forall", "exists"):
        raise ValueError("nested quantifiers are evaluated by sampling only at top level")
    if head == "=>":
        vals = [evaluate(a, env) for a in args]
        out = vals[-1]
        for v in reversed(vals[:-1]):
            out = (not v) or out
        return out
    if head == "and":
        return all(evaluate(a, env) for a in args)
    if head == "or":
        return any(evaluate(a, env) for a in args)
    if head == "not":
        return not evaluate(args[0], env)
    vals = [evaluate(a, env) for a in args]
    if head == "+":
        return sum(vals, Fraction(0))
    if head == "-":
        return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:], Fraction(0))
    if head == "*":
        out = Fraction(1)
        for v in vals:
            out *= v
        return out
    if head == "/":
        out = vals[0]
        for v in vals[1:]:
            out /= v
        return out
    pairs = list(zip(vals, vals[1:]))
    if head == "<=":
        return all(a <= b for a, b in pairs)
    if head == "<":
        return all(a < b for a, b in pairs)
    if head == ">=":
        return all(a >= b for a, b in pairs)
    if head == ">":
        return all(a > b for a, b in pairs)
    if head == "=":
        return all(a == b for a, b in pairs)
    raise ValueError(f"unknown function {head!r}")


def random_rational(rng: random.Random, bound: int = 10) -> Fraction:
    if rng.random() < 0.5:
        return Fraction(rng.randint(-bound, bound))
    return Fraction(rng.randint(-bound * 4, bound * 4), rng.randint(1, 4))


def sample_violations(
    text: str,
    model: Mapping[str, Fraction],
    samples: int = 1000,
    seed: int = 0,
    sampler: Callable[[random.Random, list[str]], Mapping[str, Fraction]] | None = None,
) -> list[tuple[int, dict[str, Fraction]]]:
    """Assertions falsified under ``model``: ``(assert index, bound-variable values)``."""
    check_script(text)
    rng = random.Random(seed)
    if sampler is None:
        def sampler(r, names):
            return {n: random_rational(r) for n in names}
    found = []
    asserts = [c[1] for c in parse(text) if c[0] == "assert"]
    for i, term in enumerate(asserts):
        if isinstance(term, list) and term[0] == "forall":
            names = [b[0] for b in term[1]]
            for _ in range(samples):
                point = dict(sampler(rng, names))
                if not evaluate(term[2], {**model, **point}):
                    found.append((i, point))
                    break
        elif not evaluate(term, model):
            found.append((i, {}))
    return found
