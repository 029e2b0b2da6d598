"""Data-dependent termination: pruning a constraint set against an instance.

The instance itself becomes a body-less TGD (alpha_I) whose head asserts the
instance up to null renaming. Constraints not reachable from alpha_I in the
firing graph, or from a body-less constraint the instance leaves violated,
can never fire in any chase of that instance, so termination only depends on
the reachable ones. The check is sound but necessarily incomplete:
unreachable means irrelevant, reachable proves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from chaseterm.firing import PRECEDES, Witness, can_cause
from chaseterm.graphs import reachable_from
from chaseterm.model import (
    Atom, Constraint, Instance, LabeledNull, ModelError, Variable, fact_key,
    find_violations, tgd,
)
from chaseterm.static import is_inductively_restricted, part

ALPHA_I = "alpha_I"

ALL_INSTANCES = "AllInstances"
THIS_INSTANCE = "ThisInstance"
NO_GUARANTEE = "None"


def constraint_from_instance(I: Instance) -> Constraint:
    """The body-less TGD asserting I: nulls become distinct existential
    variables, constants stay parameters."""
    if not I.facts:
        raise ModelError("cannot build alpha_I from an empty instance")
    head = []
    for f in sorted(I.facts, key=fact_key):
        args = tuple(Variable(t.name) if isinstance(t, LabeledNull) else t
                     for t in f.args)
        head.append(Atom(f.relation, args))
    return tgd(ALPHA_I, [], head)


@dataclass(frozen=True)
class ChaseGraph:
    """All-pairs firing graph: an edge means the source's application can
    newly violate the target."""

    constraints: Tuple[Constraint, ...]
    edges: Tuple[Tuple[str, str], ...]
    witnesses: Dict[Tuple[str, str], Witness]


def chase_graph(sigma: Sequence[Constraint]) -> ChaseGraph:
    sigma = tuple(sigma)
    witnesses: Dict[Tuple[str, str], Witness] = {}
    for a in sigma:
        for b in sigma:
            w = can_cause(a, b, mode=PRECEDES)
            if w is not None:
                witnesses[(a.id, b.id)] = w
    return ChaseGraph(sigma, tuple(sorted(witnesses)), witnesses)


def irrelevant_constraints(I: Instance, sigma: Sequence[Constraint],
                           ) -> Tuple[Tuple[Constraint, ...], Tuple[Constraint, ...], ChaseGraph]:
    """Split sigma into (irrelevant, relevant) for chasing I, with the graph
    as evidence. Relevant means reachable from alpha_I or from a body-less
    constraint that I leaves violated.

    The extra roots matter: a body-less constraint violated by I fires with
    no predecessor (it was violated before alpha_I ran, so no edge reaches
    it), while one satisfied by I stays satisfied forever, since steps only
    add facts or rename nulls away."""
    alpha = constraint_from_instance(I)
    g = chase_graph(tuple(sigma) + (alpha,))
    roots = [ALPHA_I] + [c.id for c in sigma
                         if not c.body and find_violations(I, c)]
    reached = reachable_from(roots, g.edges)
    relevant = tuple(c for c in sigma if c.id in reached and c.id != ALPHA_I)
    irrelevant = tuple(c for c in sigma if c not in relevant)
    return irrelevant, relevant, g


@dataclass(frozen=True)
class TerminationGuarantee:
    """What the static ladder still guarantees once the instance is fixed."""

    level: str                                # AllInstances / ThisInstance / None
    relevant: Tuple[Constraint, ...]
    irrelevant: Tuple[Constraint, ...]
    chase_graph: Optional[ChaseGraph]
    parts: Tuple[Tuple[Constraint, ...], ...]  # decomposition behind the verdict


def data_dependent_guarantee(I: Instance, sigma: Sequence[Constraint],
                             ) -> TerminationGuarantee:
    """AllInstances when sigma alone passes inductive restriction,
    ThisInstance when the subset relevant to I does, None otherwise."""
    sigma = tuple(sigma)
    if is_inductively_restricted(sigma):
        return TerminationGuarantee(ALL_INSTANCES, sigma, (), None,
                                    tuple(part(sigma)))
    if I.facts:
        irrelevant, relevant, g = irrelevant_constraints(I, sigma)
    else:
        irrelevant, relevant, g = (), sigma, None
    level = THIS_INSTANCE if is_inductively_restricted(relevant) else NO_GUARANTEE
    return TerminationGuarantee(level, relevant, irrelevant, g,
                                tuple(part(relevant)))
