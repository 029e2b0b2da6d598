"""Static termination analysis of a constraint set.

The ladder, from most to least syntactic:

  weak acyclicity   no special-edge cycle in the dependency graph over all
                    positions
  safety            the same check on the propagation graph, which keeps
                    only edges whose source variable is confined to affected
                    positions
  stratification    every nontrivial SCC of the pairwise firing graph is
                    weakly acyclic
  safe restriction  every nontrivial SCC of the minimal restriction system
                    is safe
  inductive         every element of the part decomposition (recursive SCC
  restriction       refinement of the restriction system) is safe

A positive verdict anywhere guarantees all chase sequences terminate for all
instances. Negative verdicts carry concrete cycle witnesses.

Position bookkeeping follows two conventions worth naming: the position set
of a single constraint, as used in the restriction-system propagation rule,
means its body positions; the dependency graph ranges over all positions of
bodies and heads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from chaseterm.firing import PRECEDES_P, Witness, can_cause
from chaseterm.graphs import cycle_through, nontrivial_components
from chaseterm.model import (
    TGD, Constraint, Position, Variable, check_arities, position_key,
)

Cycle = Tuple[Position, ...]


def _var_positions(atoms, v: Variable) -> frozenset:
    return frozenset(Position(f.relation, i + 1)
                     for f in atoms for i, t in enumerate(f.args) if t == v)


def affected_positions(sigma: Sequence[Constraint]) -> frozenset:
    """Least set of positions that can carry labeled nulls in some chase:
    existential head positions, closed under propagation through universal
    variables whose body occurrences are all affected. EGDs contribute
    nothing (they never create nulls)."""
    tgds = [c for c in sigma if c.kind == TGD]
    aff = set()
    for c in tgds:
        ex = set(c.existential_vars)
        for f in c.head:
            for i, t in enumerate(f.args):
                if t in ex:
                    aff.add(Position(f.relation, i + 1))
    changed = True
    while changed:
        changed = False
        for c in tgds:
            for v in c.universal_vars:
                if _var_positions(c.body, v) <= aff:
                    for p in _var_positions(c.head, v):
                        if p not in aff:
                            aff.add(p)
                            changed = True
    return frozenset(aff)


def aff_cl(alpha: Constraint, P) -> frozenset:
    """Head positions of alpha where nulls can land when alpha fires on an
    instance whose nulls sit only in P: positions holding an existential
    variable, and positions all of whose universal variables are body-bound
    to P."""
    if alpha.kind != TGD:
        raise ValueError("aff_cl is defined for TGDs only")
    P = frozenset(P)
    ex = set(alpha.existential_vars)
    univ_at: Dict[Position, set] = {}
    holds_ex = set()
    for f in alpha.head:
        for i, t in enumerate(f.args):
            pos = Position(f.relation, i + 1)
            univ_at.setdefault(pos, set())
            if t in ex:
                holds_ex.add(pos)
            elif isinstance(t, Variable):
                univ_at[pos].add(t)
    out = set()
    for pos, uvs in univ_at.items():
        if pos in holds_ex or all(_var_positions(alpha.body, v) <= P for v in uvs):
            out.add(pos)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Position graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositionGraph:
    """Positions as nodes; regular edges copy values, special edges mark
    places where a firing creates a fresh null."""

    nodes: Tuple[Position, ...]
    regular: Tuple[Tuple[Position, Position], ...]
    special: Tuple[Tuple[Position, Position], ...]

    @property
    def edges(self) -> Tuple[Tuple[Position, Position], ...]:
        return self.regular + self.special


def _edge_key(e):
    return (position_key(e[0]), position_key(e[1]))


def _position_graph(tgds: Sequence[Constraint], nodes,
                    restrict: Optional[frozenset]) -> PositionGraph:
    regular, special = set(), set()
    for c in tgds:
        ex_positions = set()
        ex = set(c.existential_vars)
        for v in ex:
            ex_positions |= _var_positions(c.head, v)
        for v in c.universal_vars:
            occ = _var_positions(c.body, v)
            if restrict is not None and not occ <= restrict:
                continue
            head_occ = _var_positions(c.head, v)
            for p in occ:
                for q in head_occ:
                    regular.add((p, q))
                for q in ex_positions:
                    special.add((p, q))
    return PositionGraph(tuple(sorted(nodes, key=position_key)),
                         tuple(sorted(regular, key=_edge_key)),
                         tuple(sorted(special, key=_edge_key)))


def propagation_graph(sigma: Sequence[Constraint]) -> PositionGraph:
    """Null propagation between affected positions (the safety graph)."""
    tgds = [c for c in sigma if c.kind == TGD]
    aff = affected_positions(tgds)
    return _position_graph(tgds, aff, aff)


def dependency_graph(sigma: Sequence[Constraint]) -> PositionGraph:
    """The same construction over all positions, unrestricted (the weak
    acyclicity graph)."""
    tgds = [c for c in sigma if c.kind == TGD]
    nodes = set()
    for c in tgds:
        nodes |= c.positions
    return _position_graph(tgds, nodes, None)


def _special_cycle(g: PositionGraph) -> Optional[Cycle]:
    cyc = cycle_through(g.edges, g.special)
    return tuple(cyc) if cyc is not None else None


def safety(sigma: Sequence[Constraint]) -> Tuple[bool, Optional[Cycle], PositionGraph]:
    g = propagation_graph(sigma)
    cyc = _special_cycle(g)
    return cyc is None, cyc, g


def is_safe(sigma: Sequence[Constraint]) -> bool:
    return safety(sigma)[0]


def weak_acyclicity(sigma: Sequence[Constraint]) -> Tuple[bool, Optional[Cycle], PositionGraph]:
    g = dependency_graph(sigma)
    cyc = _special_cycle(g)
    return cyc is None, cyc, g


def is_weakly_acyclic(sigma: Sequence[Constraint]) -> bool:
    return weak_acyclicity(sigma)[0]


# ---------------------------------------------------------------------------
# Restriction systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictionSystem:
    """The firing graph over Sigma together with the position guard f under
    which each constraint's firings were tested."""

    constraints: Tuple[Constraint, ...]
    edges: Tuple[Tuple[str, str], ...]
    f: Dict[str, frozenset]
    witnesses: Dict[Tuple[str, str], Witness]


def minimal_restriction_system(sigma: Sequence[Constraint]) -> RestrictionSystem:
    """Least fixpoint: discover edges with the guard at its current value,
    then grow each target's guard by exactly the positions the edge forces
    (the firing constraint's affected closure for TGDs, its own guard for
    EGDs, cut down to the target's body positions)."""
    return _minimal_system(tuple(sigma))


@lru_cache(maxsize=None)
def _minimal_system(sigma: Tuple[Constraint, ...]) -> RestrictionSystem:
    by_id = {c.id: c for c in sigma}
    f: Dict[str, frozenset] = {c.id: frozenset() for c in sigma}
    witnesses: Dict[Tuple[str, str], Witness] = {}
    changed = True
    while changed:
        changed = False
        for a in sigma:
            for b in sigma:
                if (a.id, b.id) in witnesses:
                    continue
                w = can_cause(a, b, f[a.id], PRECEDES_P)
                if w is not None:
                    witnesses[(a.id, b.id)] = w
                    changed = True
        for (aid, bid) in sorted(witnesses):
            a = by_id[aid]
            add = aff_cl(a, f[aid]) if a.kind == TGD else f[aid]
            add &= by_id[bid].body_positions
            if not add <= f[bid]:
                f[bid] |= add
                changed = True
    return RestrictionSystem(tuple(sigma), tuple(sorted(witnesses)), f, witnesses)


def nontrivial_sccs(constraints: Sequence[Constraint],
                    edges) -> List[Tuple[Constraint, ...]]:
    """Strongly connected components holding at least one edge, as tuples of
    constraints sorted by id; components ordered by their smallest id."""
    by_id = {c.id: c for c in constraints}
    id_edges = [(a, b) for a, b in edges]
    comps = nontrivial_components(sorted(by_id), id_edges)
    out = [tuple(by_id[i] for i in sorted(comp)) for comp in comps]
    out.sort(key=lambda comp: comp[0].id)
    return out


def part(sigma: Sequence[Constraint]) -> List[Tuple[Constraint, ...]]:
    """Recursive SCC refinement of the minimal restriction system. A set
    returns itself once it is its own single component; otherwise the
    refinement descends into each component."""
    out: List[Tuple[Constraint, ...]] = []
    seen = set()
    for piece in _part(tuple(sigma)):
        key = frozenset(c.id for c in piece)
        if key not in seen:
            seen.add(key)
            out.append(piece)
    return out


def _part(sigma: Tuple[Constraint, ...]) -> List[Tuple[Constraint, ...]]:
    system = _minimal_system(sigma)
    comps = nontrivial_sccs(sigma, system.edges)
    if len(comps) == 1:
        if set(comps[0]) != set(sigma):
            return _part(comps[0])
        return [comps[0]]
    out: List[Tuple[Constraint, ...]] = []
    for comp in comps:
        out.extend(_part(comp))
    return out


def is_safely_restricted(sigma: Sequence[Constraint]) -> bool:
    system = minimal_restriction_system(sigma)
    return all(is_safe(comp) for comp in nontrivial_sccs(list(sigma), system.edges))


def is_inductively_restricted(sigma: Sequence[Constraint]) -> bool:
    return all(is_safe(piece) for piece in part(sigma))


def is_stratified(sigma: Sequence[Constraint]) -> bool:
    from chaseterm.dynamic import chase_graph
    g = chase_graph(sigma)
    return all(is_weakly_acyclic(comp)
               for comp in nontrivial_sccs(list(sigma), g.edges))


# ---------------------------------------------------------------------------
# The full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnalysisReport:
    constraints: Tuple[Constraint, ...]
    weakly_acyclic: bool
    dependency_graph: PositionGraph
    dependency_cycle: Optional[Cycle]
    safe: bool
    propagation_graph: PositionGraph
    propagation_cycle: Optional[Cycle]
    stratified: bool
    chase_graph: "object"  # dynamic.ChaseGraph; typed loosely to avoid a cycle
    stratification_failures: Tuple[Tuple[Tuple[str, ...], Cycle], ...]
    safely_restricted: bool
    restriction_system: RestrictionSystem
    restriction_failures: Tuple[Tuple[Tuple[str, ...], Cycle], ...]
    inductively_restricted: bool
    parts: Tuple[Tuple[Constraint, ...], ...]
    part_failures: Tuple[Tuple[Tuple[str, ...], Cycle], ...]

    @property
    def terminating(self) -> bool:
        """Any rung of the ladder suffices."""
        return (self.weakly_acyclic or self.safe or self.stratified
                or self.safely_restricted or self.inductively_restricted)


def _component_failures(comps, check) -> Tuple:
    failures = []
    for comp in comps:
        ok, cyc, _ = check(comp)
        if not ok:
            failures.append((tuple(c.id for c in comp), cyc))
    return tuple(failures)


def analyze(sigma: Sequence[Constraint]) -> AnalysisReport:
    """Run the whole ladder and bundle verdicts with their evidence."""
    from chaseterm.dynamic import chase_graph
    sigma = tuple(sigma)
    check_arities([f for c in sigma for f in tuple(c.body) + tuple(c.head)])

    wa, wa_cycle, dep = weak_acyclicity(sigma)
    safe, safe_cycle, prop = safety(sigma)

    cg = chase_graph(sigma)
    strat_failures = _component_failures(
        nontrivial_sccs(list(sigma), cg.edges), weak_acyclicity)

    system = minimal_restriction_system(sigma)
    sr_failures = _component_failures(
        nontrivial_sccs(list(sigma), system.edges), safety)

    parts = tuple(part(sigma))
    part_failures = _component_failures(parts, safety)

    return AnalysisReport(
        constraints=sigma,
        weakly_acyclic=wa, dependency_graph=dep, dependency_cycle=wa_cycle,
        safe=safe, propagation_graph=prop, propagation_cycle=safe_cycle,
        stratified=not strat_failures, chase_graph=cg,
        stratification_failures=strat_failures,
        safely_restricted=not sr_failures, restriction_system=system,
        restriction_failures=sr_failures,
        inductively_restricted=not part_failures, parts=parts,
        part_failures=part_failures)
