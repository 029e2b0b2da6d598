"""Parameterized fixture families with known chase behavior."""

from __future__ import annotations

from typing import Tuple

from chaseterm.model import (
    Atom, Constant, Constraint, Instance, ModelError, Variable, instance, tgd,
)


def rotation_family(k: int) -> Tuple[Instance, Tuple[Constraint, ...]]:
    """The k-ary rotation fixture: I_k holds S(c1)..S(ck) and one k-tuple
    R_k(c1..ck); the single rule shifts the tuple right behind a fresh null,

        S(x_k), R_k(x1..xk) -> exists y. R_k(y, x1..x_{k-1})

    Each firing consumes one S-guard: the run takes exactly k steps, and its
    monitor graph chains k-1 same-class edges, so it separates cycle depths
    k-1 and k.
    """
    if k < 1:
        raise ModelError(f"rotation family needs k >= 1, got {k}")
    rel = f"R{k}"
    cs = [Constant(f"c{i}") for i in range(1, k + 1)]
    xs = [Variable(f"X{i}") for i in range(1, k + 1)]
    I = instance([Atom("S", (c,)) for c in cs] + [Atom(rel, tuple(cs))])
    phi = tgd("phi", [Atom("S", (xs[-1],)), Atom(rel, tuple(xs))],
              [Atom(rel, tuple([Variable("Y")] + xs[:-1]))])
    return I, (phi,)
