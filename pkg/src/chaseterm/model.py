"""Terms, atoms, constraints, instances and the operations shared by everything else.

The data model is deliberately small. Three disjoint kinds of term exist:
constants, labeled nulls and variables. Instances are finite sets of ground
atoms over constants and nulls; constraint bodies and heads are conjunctions
of atoms over variables and constants. A constraint is either a TGD
(body -> head, head variables missing from the body are existential) or an
EGD (body -> x = y).

Everything here is an immutable value. Operations are pure functions, so the
rest of the package can memoize and share results freely.

A note on equality: nulls compare by name only. The creation index a null
carries is bookkeeping for the chase (freshness, merge tie-breaking) and two
nulls with the same name are the same null regardless of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union


class ModelError(ValueError):
    """Raised for ill-formed atoms, constraints or instances."""


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class LabeledNull:
    """A labeled null. creation_index is 0 for nulls present in the initial
    instance and increases for chase-created ones; it does not take part in
    equality or hashing."""

    name: str
    creation_index: int = field(default=0, compare=False)

    def __repr__(self) -> str:
        return "?" + self.name


@dataclass(frozen=True)
class Variable:
    name: str

    def __repr__(self) -> str:
        return self.name


Term = Union[Constant, LabeledNull, Variable]
Value = Union[Constant, LabeledNull]


def value_key(v: Value) -> Tuple:
    """Global value order: constants by name, then nulls by creation index.

    Ties between nulls of equal creation index fall back to the name. The
    order is total on values and fixes every enumeration in the package.
    """
    if isinstance(v, Constant):
        return (0, v.name)
    if isinstance(v, LabeledNull):
        return (1, v.creation_index, v.name)
    raise ModelError(f"not a value: {v!r}")


# ---------------------------------------------------------------------------
# Positions and atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Position:
    """Argument slot index (1-based) of a relation symbol, e.g. E^2."""

    relation: str
    index: int

    def __repr__(self) -> str:
        return f"{self.relation}^{self.index}"


def position_key(p: Position) -> Tuple[str, int]:
    return (p.relation, p.index)


@dataclass(frozen=True)
class Atom:
    relation: str
    args: Tuple[Term, ...]

    def __repr__(self) -> str:
        return f"{self.relation}({', '.join(map(repr, self.args))})"

    @property
    def positions(self) -> Tuple[Position, ...]:
        return tuple(Position(self.relation, i + 1) for i in range(len(self.args)))

    def is_ground(self) -> bool:
        return all(not isinstance(t, Variable) for t in self.args)


def atom(relation: str, *args: Term) -> Atom:
    return Atom(relation, tuple(args))


def check_arities(atoms: Iterable[Atom], table: Optional[Dict[str, int]] = None) -> Dict[str, int]:
    """Infer relation arities on first use and fail on later mismatches."""
    table = dict(table) if table else {}
    for a in atoms:
        seen = table.get(a.relation)
        if seen is None:
            table[a.relation] = len(a.args)
        elif seen != len(a.args):
            raise ModelError(
                f"arity mismatch for {a.relation}: saw {seen}, now {len(a.args)} in {a!r}")
    return table


def _dedup(atoms: Sequence[Atom]) -> Tuple[Atom, ...]:
    # conjunctions are sets; keep first-occurrence order for determinism
    out: List[Atom] = []
    for a in atoms:
        if a not in out:
            out.append(a)
    return tuple(out)


def atom_vars(a: Atom) -> List[Variable]:
    return [t for t in a.args if isinstance(t, Variable)]


def conjunction_vars(atoms: Sequence[Atom]) -> List[Variable]:
    """Variables of a conjunction in first-occurrence order."""
    seen: List[Variable] = []
    for a in atoms:
        for t in a.args:
            if isinstance(t, Variable) and t not in seen:
                seen.append(t)
    return seen


# ---------------------------------------------------------------------------
# Constraints
# ---------------------------------------------------------------------------

TGD = "tgd"
EGD = "egd"


@dataclass(frozen=True)
class Constraint:
    """A TGD or an EGD. Build through tgd() / egd(), which validate.

    For a TGD the head is non-empty and head variables absent from the body
    are existential. For an EGD the head is the equated variable pair and
    both variables occur in the body.
    """

    id: str
    kind: str
    body: Tuple[Atom, ...]
    head: Tuple[Atom, ...] = ()
    equated: Optional[Tuple[Variable, Variable]] = None

    def __repr__(self) -> str:
        return f"<{self.id}>"

    @cached_property
    def body_vars(self) -> Tuple[Variable, ...]:
        return tuple(conjunction_vars(self.body))

    @cached_property
    def universal_vars(self) -> Tuple[Variable, ...]:
        return self.body_vars

    @cached_property
    def existential_vars(self) -> Tuple[Variable, ...]:
        if self.kind != TGD:
            return ()
        bv = set(self.body_vars)
        return tuple(v for v in conjunction_vars(self.head) if v not in bv)

    @cached_property
    def body_positions(self) -> frozenset:
        return frozenset(p for a in self.body for p in a.positions)

    @cached_property
    def positions(self) -> frozenset:
        ps = set(self.body_positions)
        for a in self.head:
            ps.update(a.positions)
        return frozenset(ps)

    def head_vars(self) -> Tuple[Variable, ...]:
        if self.kind == EGD:
            assert self.equated is not None
            return self.equated
        return tuple(conjunction_vars(self.head))


def tgd(cid: str, body: Sequence[Atom], head: Sequence[Atom]) -> Constraint:
    body = _dedup(body)
    head = _dedup(head)
    if not head:
        raise ModelError(f"{cid}: a TGD needs a non-empty head")
    for a in list(body) + list(head):
        for t in a.args:
            if isinstance(t, LabeledNull):
                raise ModelError(f"{cid}: nulls cannot occur in constraints ({a!r})")
    check_arities(list(body) + list(head))
    return Constraint(id=cid, kind=TGD, body=body, head=head)


def egd(cid: str, body: Sequence[Atom], left: Variable, right: Variable) -> Constraint:
    body = _dedup(body)
    if not body:
        raise ModelError(f"{cid}: an EGD needs a non-empty body")
    for a in body:
        for t in a.args:
            if isinstance(t, LabeledNull):
                raise ModelError(f"{cid}: nulls cannot occur in constraints ({a!r})")
    bv = set(conjunction_vars(body))
    for v in (left, right):
        if v not in bv:
            raise ModelError(f"{cid}: equated variable {v.name} does not occur in the body")
    check_arities(body)
    return Constraint(id=cid, kind=EGD, body=body, equated=(left, right))


def constraint_positions(constraints: Sequence[Constraint]) -> frozenset:
    """All positions occurring in the given constraints, bodies and heads."""
    ps = set()
    for c in constraints:
        ps.update(c.positions)
    return frozenset(ps)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A finite set of ground atoms plus the next free null creation index."""

    facts: frozenset
    null_counter: int = 1

    def __repr__(self) -> str:
        shown = ", ".join(repr(f) for f in sorted(self.facts, key=fact_key))
        return f"Instance({{{shown}}})"

    def domain(self) -> frozenset:
        return frozenset(t for a in self.facts for t in a.args)

    def null_names(self) -> frozenset:
        return frozenset(t.name for t in self.domain() if isinstance(t, LabeledNull))

    def positions_of(self, v: Value) -> frozenset:
        return frozenset(
            Position(a.relation, i + 1)
            for a in self.facts for i, t in enumerate(a.args) if t == v)

    def with_facts(self, new_facts: Iterable[Atom], null_counter: Optional[int] = None) -> "Instance":
        return Instance(self.facts | frozenset(new_facts),
                        self.null_counter if null_counter is None else null_counter)


def fact_key(a: Atom) -> Tuple:
    return (a.relation, len(a.args), tuple(value_key(t) for t in a.args))


def instance(facts: Iterable[Atom], null_counter: Optional[int] = None) -> Instance:
    """Build an instance, checking groundness and arity consistency."""
    fs = frozenset(facts)
    for a in fs:
        if not a.is_ground():
            raise ModelError(f"instance atoms must be ground, got {a!r}")
    check_arities(fs)
    if null_counter is None:
        indices = [t.creation_index for a in fs for t in a.args if isinstance(t, LabeledNull)]
        null_counter = max(indices, default=0) + 1
    return Instance(facts=fs, null_counter=null_counter)


def replace_value(facts: Iterable[Atom], old: Value, new: Value) -> frozenset:
    """Substitute one value for another in every fact."""
    out = set()
    for a in facts:
        out.add(Atom(a.relation, tuple(new if t == old else t for t in a.args)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Assignments and conjunction matching
# ---------------------------------------------------------------------------

Assignment = Dict[Variable, Value]


def instantiate(conjunction: Sequence[Atom], a: Assignment) -> frozenset:
    """Apply an assignment to a conjunction, producing ground atoms.

    Constants pass through unchanged; every variable must be covered."""
    out = set()
    for at in conjunction:
        args = []
        for t in at.args:
            if isinstance(t, Variable):
                if t not in a:
                    raise ModelError(f"unbound variable {t.name} in {at!r}")
                args.append(a[t])
            else:
                args.append(t)
        out.add(Atom(at.relation, tuple(args)))
    return frozenset(out)


def _facts_by_relation(I: Instance) -> Dict[str, List[Atom]]:
    by_rel: Dict[str, List[Atom]] = {}
    for f in I.facts:
        by_rel.setdefault(f.relation, []).append(f)
    for fs in by_rel.values():
        fs.sort(key=fact_key)
    return by_rel


def match_conjunction(atoms: Sequence[Atom], I: Instance,
                      binding: Optional[Assignment] = None) -> Iterator[Assignment]:
    """All extensions of `binding` that map every atom into I.

    Plain backtracking join over the facts, grouped by relation. Yields each
    completed assignment once per derivation; callers dedup if they care.
    """
    by_rel = _facts_by_relation(I)

    def extend(i: int, b: Assignment) -> Iterator[Assignment]:
        if i == len(atoms):
            yield dict(b)
            return
        at = atoms[i]
        for f in by_rel.get(at.relation, ()):
            if len(f.args) != len(at.args):
                continue
            nb = dict(b)
            ok = True
            for pat, val in zip(at.args, f.args):
                if isinstance(pat, Variable):
                    bound = nb.get(pat)
                    if bound is None:
                        nb[pat] = val
                    elif bound != val:
                        ok = False
                        break
                elif pat != val:
                    ok = False
                    break
            if ok:
                yield from extend(i + 1, nb)

    yield from extend(0, binding or {})


# ---------------------------------------------------------------------------
# Satisfaction and violations
# ---------------------------------------------------------------------------

def satisfies(I: Instance, c: Constraint, a: Assignment) -> bool:
    """Does I satisfy c under assignment a?

    True when the instantiated body is not contained in I (vacuous case).
    Otherwise a TGD needs some extension of a over its existential variables
    mapping the whole head into I, and an EGD needs the equated values to
    coincide. An EGD equating a value with itself is satisfied, so it never
    fires.
    """
    body = instantiate(c.body, a)
    if not body <= I.facts:
        return True
    if c.kind == EGD:
        left, right = c.equated  # type: ignore[misc]
        return a[left] == a[right]
    base = {v: a[v] for v in c.body_vars if v in a}
    for _ in match_conjunction(c.head, I, base):
        return True
    return False


def find_violations(I: Instance, c: Constraint) -> List[Assignment]:
    """All assignments whose body image lies in I but which violate c, ordered
    lexicographically by value tuple (body variables in first-occurrence
    order) under the global value order."""
    seen = set()
    out: List[Assignment] = []
    if c.body:
        candidates = match_conjunction(c.body, I)
    else:
        candidates = iter([{}])
    for a in candidates:
        key = tuple(a[v] for v in c.body_vars)
        if key in seen:
            continue
        seen.add(key)
        if not satisfies(I, c, a):
            out.append(a)
    out.sort(key=lambda a: tuple(value_key(a[v]) for v in c.body_vars))
    return out


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

def find_homomorphism(source: Instance, target: Instance) -> Optional[Dict[Value, Value]]:
    """A mapping h on dom(source), identity on constants, with
    h(facts(source)) contained in facts(target); None if there is none.

    Backtracking over the source facts grouped by relation. Exponential in
    the worst case, which is fine at the instance sizes this package is for.
    """
    by_rel = _facts_by_relation(target)
    facts = sorted(source.facts, key=fact_key)

    def extend(i: int, h: Dict[Value, Value]) -> Optional[Dict[Value, Value]]:
        if i == len(facts):
            return dict(h)
        f = facts[i]
        for g in by_rel.get(f.relation, ()):
            if len(g.args) != len(f.args):
                continue
            nh = dict(h)
            ok = True
            for s, t in zip(f.args, g.args):
                if isinstance(s, Constant):
                    if s != t:
                        ok = False
                        break
                else:
                    bound = nh.get(s)
                    if bound is None:
                        nh[s] = t
                    elif bound != t:
                        ok = False
                        break
            if ok:
                res = extend(i + 1, nh)
                if res is not None:
                    return res
        return None

    h = extend(0, {})
    if h is None:
        return None
    for v in source.domain():
        if isinstance(v, Constant):
            h[v] = v
        else:
            h.setdefault(v, v)
    return h


def hom_equivalent(I: Instance, J: Instance) -> bool:
    return find_homomorphism(I, J) is not None and find_homomorphism(J, I) is not None
