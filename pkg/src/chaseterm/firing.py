"""The firing relation between constraints.

can_cause(alpha, beta, P, mode) asks: is there an instance I and assignments
a, b such that applying alpha on (I, a) yields a J in which b newly violates
beta? Six conditions define the positive answer: (a is a violation of alpha
in I; b is not one in I; the step applies; b violates beta in J; and, in the
position-guarded mode, nulls of I sit only in positions from P and b puts a
null into beta's head).

The search enumerates candidates and hands each to a concrete validator that
replays the step and checks every condition with the ordinary satisfaction
test, so the enumeration may overapproximate freely. Candidates are built
canonically: assignment values are either constants named in the two
constraints or pool symbols introduced in first-use order, each new symbol
tried both as a constant and as a null (a restricted-growth enumeration, so
isomorphic candidates are generated once). For a TGD alpha the candidate
instance is a's body image plus the beta-body atoms not matched into the
step's added facts; matching into added facts uses placeholder nulls that
are resolved against the real fresh nulls once the step has run. For an EGD
alpha the extra atoms range over the pre-images of b's body image under the
merge, which is where a merge can complete a previously absent body.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from chaseterm.chase import ChaseFailed, chase_step
from chaseterm.model import (
    TGD, Assignment, Atom, Constant, Constraint, Instance, LabeledNull,
    Position, Value, Variable, fact_key, instantiate, satisfies, value_key,
)

PRECEDES = "precedes"        # the firing conditions alone
PRECEDES_P = "precedes_p"    # plus the null-position guard and null-copying

_PLACEHOLDER_BASE = 1_000_000


@dataclass(frozen=True)
class Witness:
    """A concrete firing scenario: alpha applied on (instance, assignment_a)
    yields successor, where assignment_b newly violates beta."""

    alpha_id: str
    beta_id: str
    instance: Instance
    assignment_a: Tuple[Tuple[str, Value], ...]
    assignment_b: Tuple[Tuple[str, Value], ...]
    successor: Instance


def _named_constants(alpha: Constraint, beta: Constraint) -> Tuple[Constant, ...]:
    out = set()
    for c in (alpha, beta):
        for f in tuple(c.body) + tuple(c.head):
            for t in f.args:
                if isinstance(t, Constant):
                    out.add(t)
    return tuple(sorted(out, key=lambda c: c.name))


def _new_symbols(index: int, taken: frozenset) -> Tuple[Constant, LabeledNull]:
    name = f"c{index}"
    while name in taken:
        name = "c_" + name
    return Constant(name), LabeledNull(f"u{index}", index + 1)


def _extensions(vars_seq: Sequence[Variable], bound: Assignment,
                pool: Tuple[Value, ...], named: Tuple[Constant, ...],
                fresh_count: int) -> Iterator[Tuple[Assignment, Tuple[Value, ...], int]]:
    """Canonical completions of bound over vars_seq. Each unbound variable
    reuses an available value or introduces the next pool symbol."""
    if not vars_seq:
        yield bound, pool, fresh_count
        return
    v, rest = vars_seq[0], vars_seq[1:]
    if v in bound:
        yield from _extensions(rest, bound, pool, named, fresh_count)
        return
    options: List[Value] = []
    for val in pool + named:
        if val not in options:
            options.append(val)
    for val in options:
        yield from _extensions(rest, {**bound, v: val}, pool, named, fresh_count)
    taken = frozenset(c.name for c in named)
    for val in _new_symbols(fresh_count, taken):
        yield from _extensions(rest, {**bound, v: val}, pool + (val,), named,
                               fresh_count + 1)


def _is_placeholder(v: Value) -> bool:
    return isinstance(v, LabeledNull) and v.creation_index >= _PLACEHOLDER_BASE


def _added_pattern(alpha: Constraint, a: Assignment) -> List[Atom]:
    """Alpha's instantiated head with placeholder nulls for the existentials."""
    ext = dict(a)
    for i, v in enumerate(alpha.existential_vars):
        ext[v] = LabeledNull(f"~f{i}", _PLACEHOLDER_BASE + i)
    return sorted(instantiate(alpha.head, ext), key=fact_key)


def _unify(pattern: Atom, fact: Atom, bound: Assignment) -> Optional[Assignment]:
    if pattern.relation != fact.relation or len(pattern.args) != len(fact.args):
        return None
    b = dict(bound)
    for t, val in zip(pattern.args, fact.args):
        if isinstance(t, Variable):
            if t in b:
                if b[t] != val:
                    return None
            else:
                b[t] = val
        elif t != val:
            return None
    return b


def _subset_matches(atoms: Sequence[Atom], facts: Sequence[Atom],
                    ) -> Iterator[Tuple[Assignment, List[Atom]]]:
    """Every way to match a non-empty subset of atoms into facts; yields the
    bindings and the unmatched remainder."""

    def go(i: int, bound: Assignment, deferred: List[Atom],
           matched: bool) -> Iterator[Tuple[Assignment, List[Atom]]]:
        if i == len(atoms):
            if matched:
                yield bound, deferred
            return
        at = atoms[i]
        yield from go(i + 1, bound, deferred + [at], matched)
        for f in facts:
            b2 = _unify(at, f, bound)
            if b2 is not None:
                yield from go(i + 1, b2, deferred, True)

    yield from go(0, {}, [], False)


def _mk_instance(facts: frozenset) -> Instance:
    counter = 1
    for f in facts:
        for t in f.args:
            if isinstance(t, LabeledNull):
                counter = max(counter, t.creation_index + 1)
    return Instance(facts, counter)


def _ground(atom: Atom, b: Assignment) -> Atom:
    args = tuple(b[t] if isinstance(t, Variable) else t for t in atom.args)
    return Atom(atom.relation, args)


def _holds(I: Instance, alpha: Constraint, a: Assignment, beta: Constraint,
           b: Assignment, P: frozenset, mode: str):
    """Check all conditions concretely. b may still contain placeholders for
    alpha's fresh nulls; returns the resolved (b, J) on success."""
    if mode == PRECEDES_P:
        for f in I.facts:
            for i, t in enumerate(f.args):
                if isinstance(t, LabeledNull) and Position(f.relation, i + 1) not in P:
                    return None
    if satisfies(I, alpha, a):
        return None
    try:
        J, rec = chase_step(I, alpha, a)
    except (ChaseFailed, ValueError):
        return None
    fresh = [n for n, _ in rec.fresh_nulls]
    rb: Assignment = {}
    for var, val in b.items():
        if _is_placeholder(val):
            val = fresh[val.creation_index - _PLACEHOLDER_BASE]
        rb[var] = val
    if not satisfies(I, beta, rb):
        return None
    if satisfies(J, beta, rb):
        return None
    if mode == PRECEDES_P:
        if not any(isinstance(rb[v], LabeledNull)
                   for v in beta.head_vars() if v in rb):
            return None
    return rb, J


def _tgd_candidates(alpha: Constraint, a: Assignment, beta: Constraint,
                    pool: Tuple[Value, ...], named: Tuple[Constant, ...],
                    fresh_count: int) -> Iterator[Tuple[Assignment, frozenset]]:
    """(b, B) pairs for a TGD alpha: b matches part of beta's body into the
    step's added facts, B holds the rest, to be planted in I."""
    pattern = _added_pattern(alpha, a)
    for b0, deferred in _subset_matches(list(beta.body), pattern):
        remaining = [v for v in beta.universal_vars if v not in b0]
        for b, _, _ in _extensions(remaining, b0, pool, named, fresh_count):
            B = set()
            ok = True
            for at in deferred:
                f = _ground(at, b)
                if any(_is_placeholder(t) for t in f.args):
                    ok = False
                    break
                B.add(f)
            if ok:
                yield b, frozenset(B)


def _egd_candidates(alpha: Constraint, a: Assignment, beta: Constraint,
                    pool: Tuple[Value, ...], named: Tuple[Constant, ...],
                    fresh_count: int) -> Iterator[Tuple[Assignment, frozenset]]:
    """(b, B) pairs for an EGD alpha: B ranges over the pre-images of b's
    body under the merge, so the merge itself can complete beta's body."""
    left, right = alpha.equated  # type: ignore[misc]
    u, v = a[left], a[right]
    if u == v or (isinstance(u, Constant) and isinstance(v, Constant)):
        return
    survivor, loser = sorted((u, v), key=value_key)
    for b, _, _ in _extensions(list(beta.universal_vars), {}, pool, named, fresh_count):
        if loser in b.values():
            continue
        image = sorted(instantiate(beta.body, b), key=fact_key)
        per_atom: List[List[Atom]] = []
        for f in image:
            slots = [i for i, t in enumerate(f.args) if t == survivor]
            choices = []
            for picks in itertools.product((survivor, loser), repeat=len(slots)):
                args = list(f.args)
                for slot, val in zip(slots, picks):
                    args[slot] = val
                choices.append(Atom(f.relation, tuple(args)))
            per_atom.append(choices)
        for combo in itertools.product(*per_atom):
            yield b, frozenset(combo)


@lru_cache(maxsize=None)
def _search(alpha: Constraint, beta: Constraint, P: frozenset,
            mode: str) -> Optional[Witness]:
    if alpha.kind == TGD:
        # a TGD step only adds facts, so an assignment that newly violates
        # beta must match part of beta's body into them; no shared relation,
        # no edge (in particular a body-less beta has none)
        added = {f.relation for f in alpha.head}
        if not any(f.relation in added for f in beta.body):
            return None
    named = _named_constants(alpha, beta)
    for a, pool, fc in _extensions(list(alpha.universal_vars), {}, (), named, 0):
        base = instantiate(alpha.body, a)
        if alpha.kind == TGD:
            candidates = _tgd_candidates(alpha, a, beta, pool, named, fc)
        else:
            candidates = _egd_candidates(alpha, a, beta, pool, named, fc)
        for b, B in candidates:
            I = _mk_instance(base | B)
            got = _holds(I, alpha, a, beta, b, P, mode)
            if got is None:
                continue
            rb, J = got
            return Witness(
                alpha.id, beta.id, I,
                tuple((v.name, a[v]) for v in alpha.universal_vars),
                tuple((v.name, rb[v]) for v in beta.universal_vars),
                J)
    return None


def can_cause(alpha: Constraint, beta: Constraint, P=frozenset(),
              mode: str = PRECEDES_P) -> Optional[Witness]:
    """A witness that firing alpha can newly violate beta, or None.

    Mode PRECEDES_P enforces the position guard P and null-copying; mode
    PRECEDES drops both, and P is then ignored.
    """
    if mode == PRECEDES:
        P = frozenset()
    elif mode == PRECEDES_P:
        P = frozenset(P)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _search(alpha, beta, P, mode)


def verify_witness(alpha: Constraint, beta: Constraint, w: Witness,
                   P=frozenset(), mode: str = PRECEDES_P) -> bool:
    """Recheck a witness from scratch against the defining conditions."""
    if w.alpha_id != alpha.id or w.beta_id != beta.id:
        return False
    a = {Variable(name): val for name, val in w.assignment_a}
    b = {Variable(name): val for name, val in w.assignment_b}
    if mode == PRECEDES:
        P = frozenset()
    got = _holds(w.instance, alpha, a, beta, b, frozenset(P), mode)
    if got is None:
        return False
    rb, J = got
    return rb == b and J == w.successor
