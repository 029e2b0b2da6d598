"""Chase steps and chase runs.

A step repairs one violated constraint instance: a TGD step adds the
instantiated head with fresh labeled nulls for the existential variables, an
EGD step merges the two equated values (the constant survives if there is
one, otherwise the null with the smaller creation index). Equating two
distinct constants has no repair; the run is Failed.

A run applies steps until no violation is left. The application order is a
policy: deterministic (round-robin over the constraints in the given order,
first violation in enumeration order) or randomized from a seed. Runs can be
bounded by a step limit and, through the monitor hook, by cycle depth in the
null-provenance graph; both produce an Aborted result instead of looping
forever.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from chaseterm.model import (
    TGD, Assignment, Constant, Constraint, Instance, LabeledNull,
    Position, Value, find_violations, instantiate, replace_value, value_key,
)

TERMINATED = "terminated"
FAILED = "failed"
ABORTED = "aborted"

STEP_LIMIT = "step_limit"
K_CYCLIC = "k_cyclic"


class ChaseFailed(Exception):
    """Hard constraint violation: attempt to equate two distinct constants."""

    def __init__(self, left: Constant, right: Constant):
        super().__init__(f"cannot equate distinct constants {left!r} and {right!r}")
        self.clash = (left, right)


@dataclass(frozen=True)
class ChaseStepRecord:
    """One applied step, with enough detail to replay it exactly."""

    index: int
    constraint_id: str
    assignment: Tuple[Tuple[str, Value], ...]  # body variables in order
    added_facts: frozenset                      # TGD: instantiated head
    merged_pair: Optional[Tuple[Value, Value]]  # EGD: (survivor, removed)
    fresh_nulls: Tuple[Tuple[LabeledNull, frozenset], ...]  # null, positions in added facts


@dataclass(frozen=True)
class ChasePolicy:
    order: str = "det"                  # "det" or "rand"
    seed: int = 0
    max_steps: Optional[int] = None     # None: unlimited
    monitor_k: Optional[int] = None     # None: no cycle monitor


@dataclass(frozen=True)
class ChaseResult:
    outcome: str                        # terminated / failed / aborted
    final: Optional[Instance]           # last instance reached
    steps: Tuple[ChaseStepRecord, ...]
    failed_step: Optional[int] = None
    clash: Optional[Tuple[Constant, Constant]] = None
    abort_reason: Optional[str] = None  # step_limit / k_cyclic
    abort_k: Optional[int] = None
    kcyclic_chain: Optional[tuple] = None


def chase_step(I: Instance, c: Constraint, a: Assignment) -> Tuple[Instance, ChaseStepRecord]:
    """Apply one chase step for a violated (c, a). Raises ChaseFailed when an
    EGD would equate two distinct constants."""
    recorded = tuple((v.name, a[v]) for v in c.body_vars)
    if c.kind == TGD:
        used = set(I.null_names())
        counter = I.null_counter
        ext = dict(a)
        fresh: List[LabeledNull] = []
        for v in c.existential_vars:
            while f"n{counter}" in used:
                counter += 1
            n = LabeledNull(f"n{counter}", counter)
            used.add(n.name)
            counter += 1
            ext[v] = n
            fresh.append(n)
        added = instantiate(c.head, ext)
        fresh_with_pos = tuple(
            (n, frozenset(Position(f.relation, i + 1)
                          for f in added for i, t in enumerate(f.args) if t == n))
            for n in fresh)
        J = Instance(I.facts | added, counter)
        rec = ChaseStepRecord(0, c.id, recorded, added, None, fresh_with_pos)
        return J, rec
    # EGD
    left, right = c.equated  # type: ignore[misc]
    u, v = a[left], a[right]
    if u == v:
        raise ValueError("chase_step called on a satisfied equality")
    if isinstance(u, Constant) and isinstance(v, Constant):
        raise ChaseFailed(u, v)
    survivor, loser = sorted((u, v), key=value_key)
    J = Instance(replace_value(I.facts, loser, survivor), I.null_counter)
    rec = ChaseStepRecord(0, c.id, recorded, frozenset(), (survivor, loser), ())
    return J, rec


def apply_record(I: Instance, rec: ChaseStepRecord) -> Instance:
    """Replay one recorded step on an instance."""
    if rec.merged_pair is not None:
        survivor, loser = rec.merged_pair
        return Instance(replace_value(I.facts, loser, survivor), I.null_counter)
    counter = I.null_counter
    for n, _ in rec.fresh_nulls:
        counter = max(counter, n.creation_index + 1)
    return Instance(I.facts | rec.added_facts, counter)


def _next_violation_det(I: Instance, sigma: Sequence[Constraint], pointer: int):
    n = len(sigma)
    for off in range(n):
        idx = (pointer + off) % n
        vs = find_violations(I, sigma[idx])
        if vs:
            return idx, vs[0]
    return None


def _next_violation_rand(I: Instance, sigma: Sequence[Constraint], rng: random.Random):
    pool = []
    for idx, c in enumerate(sigma):
        for a in find_violations(I, c):
            pool.append((idx, a))
    if not pool:
        return None
    return pool[rng.randrange(len(pool))]


def chase(I: Instance, sigma: Sequence[Constraint], policy: ChasePolicy = ChasePolicy()) -> ChaseResult:
    """Run the chase to completion under the given policy.

    Returns Terminated with the final instance, Failed on a constant clash,
    or Aborted when the step limit or the cycle monitor trips.
    """
    monitor = None
    if policy.monitor_k is not None:
        from chaseterm.monitor import MonitorGraph, is_k_cyclic, monitor_update
        monitor = MonitorGraph.empty()
    rng = random.Random(policy.seed) if policy.order == "rand" else None
    sigma = list(sigma)
    current = I
    steps: List[ChaseStepRecord] = []
    pointer = 0
    while True:
        if rng is None:
            pick = _next_violation_det(current, sigma, pointer)
        else:
            pick = _next_violation_rand(current, sigma, rng)
        if pick is None:
            return ChaseResult(TERMINATED, current, tuple(steps))
        if policy.max_steps is not None and len(steps) >= policy.max_steps:
            return ChaseResult(ABORTED, current, tuple(steps),
                               abort_reason=STEP_LIMIT)
        idx, a = pick
        c = sigma[idx]
        try:
            nxt, rec = chase_step(current, c, a)
        except ChaseFailed as f:
            return ChaseResult(FAILED, current, tuple(steps),
                               failed_step=len(steps), clash=f.clash)
        rec = ChaseStepRecord(len(steps), rec.constraint_id, rec.assignment,
                              rec.added_facts, rec.merged_pair, rec.fresh_nulls)
        if monitor is not None:
            body_image = instantiate(c.body, a)
            monitor = monitor_update(monitor, rec, body_image)
            cyc, chain = is_k_cyclic(monitor, policy.monitor_k)
            if cyc:
                steps.append(rec)
                return ChaseResult(ABORTED, nxt, tuple(steps),
                                   abort_reason=K_CYCLIC, abort_k=policy.monitor_k,
                                   kcyclic_chain=chain)
        steps.append(rec)
        current = nxt
        pointer = (idx + 1) % len(sigma)
