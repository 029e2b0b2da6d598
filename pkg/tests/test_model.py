"""Core model: terms, satisfaction, violations, homomorphisms."""

import pytest

from chaseterm.model import (
    Atom, Constant, LabeledNull, ModelError, Variable,
    egd, find_homomorphism, find_violations, hom_equivalent, instance,
    instantiate, satisfies, tgd, value_key,
)
from .conftest import A, C, N, V
from . import oracles


class TestTerms:
    def test_kinds_are_disjoint(self):
        assert Constant("a") != LabeledNull("a")
        assert Constant("a") != Variable("a")
        assert LabeledNull("a") != Variable("a")

    def test_null_equality_ignores_creation_index(self):
        assert LabeledNull("n1", 0) == LabeledNull("n1", 7)
        assert hash(LabeledNull("n1", 0)) == hash(LabeledNull("n1", 7))
        assert LabeledNull("n1") != LabeledNull("n2")

    def test_value_order_constants_before_nulls(self):
        vals = [N("b", 2), C("z"), N("a", 1), C("a")]
        ordered = sorted(vals, key=value_key)
        assert ordered == [C("a"), C("z"), N("a", 1), N("b", 2)]


class TestConstruction:
    def test_tgd_requires_head(self):
        with pytest.raises(ModelError):
            tgd("c", [A("S", V("X"))], [])

    def test_egd_requires_equated_vars_in_body(self):
        with pytest.raises(ModelError):
            egd("c", [A("R", V("X"), V("Y"))], V("X"), V("Z"))

    def test_no_nulls_inside_constraints(self):
        with pytest.raises(ModelError):
            tgd("c", [A("S", N("n"))], [A("S", V("X"))])

    def test_arity_is_consistent(self):
        with pytest.raises(ModelError):
            tgd("c", [A("R", V("X")), A("R", V("X"), V("Y"))], [A("S", V("X"))])
        with pytest.raises(ModelError):
            instance([A("R", C("a")), A("R", C("a"), C("b"))])

    def test_instance_must_be_ground(self):
        with pytest.raises(ModelError):
            instance([A("R", V("X"))])

    def test_conjunctions_are_sets(self):
        x = V("X")
        c = tgd("c", [A("S", x), A("S", x)], [A("T", x), A("T", x)])
        assert len(c.body) == 1 and len(c.head) == 1

    def test_existential_vars(self, feedback_sigma):
        a1, a2 = feedback_sigma
        assert a1.existential_vars == ()
        assert a2.existential_vars == (V("Z"),)


class TestInstantiate:
    def test_direct_substitution(self):
        a = {V("X"): C("a"), V("Y"): C("b")}
        assert instantiate([A("E", V("X"), V("Y"))], a) == frozenset([A("E", C("a"), C("b"))])

    def test_empty_conjunction(self):
        assert instantiate([], {V("X"): C("a")}) == frozenset()

    def test_constants_pass_through(self):
        a = {V("X"): C("a"), V("Y"): N("n1")}
        got = instantiate([A("S", V("X")), A("E", V("X"), V("Y"))], a)
        assert got == frozenset([A("S", C("a")), A("E", C("a"), N("n1"))])

    def test_unbound_variable_is_named(self):
        with pytest.raises(ModelError, match="Y"):
            instantiate([A("E", V("X"), V("Y"))], {V("X"): C("a")})


class TestSatisfies:
    def test_fly_constraint_violated(self, travel_sigma):
        # one flight lands in b; nothing departs from b
        a3 = travel_sigma[2]
        I = instance([A("fly", C("a"), C("b"), C("d"))])
        a = {V("X1"): C("a"), V("X2"): C("b"), V("Y1"): C("d")}
        assert satisfies(I, a3, a) is False

    def test_empty_instance_vacuous(self, feedback_sigma):
        a1, _ = feedback_sigma
        I = instance([])
        a = {V("X"): C("a"), V("Y"): C("b")}
        assert satisfies(I, a1, a) is True

    def test_body_not_contained_vacuous(self, feedback_sigma):
        a1, _ = feedback_sigma
        I = instance([A("E", C("a"), C("b")), A("E", C("b"), C("a"))])
        a = {V("X"): C("a"), V("Y"): C("b")}
        assert satisfies(I, a1, a) is True  # S(a) missing

    def test_egd_self_equation_is_satisfied(self):
        e = egd("e", [A("R", V("X"), V("Y"))], V("X"), V("X"))
        I = instance([A("R", C("a"), C("b"))])
        assert satisfies(I, e, {V("X"): C("a"), V("Y"): C("b")}) is True

    def test_matches_brute_force_on_samples(self, feedback_sigma):
        a1, a2 = feedback_sigma
        I = instance([A("S", C("a")), A("E", C("a"), N("n1")), A("E", N("n1"), C("a"))])
        for c in (a1, a2):
            for a in oracles.bf_violations(I, c):
                assert satisfies(I, c, a) is False
            for val_x in sorted(I.domain(), key=value_key):
                for val_y in sorted(I.domain(), key=value_key):
                    a = {V("X"): val_x, V("Y"): val_y}
                    assert satisfies(I, c, a) == oracles.bf_satisfies(I, c, a)


class TestFindViolations:
    def test_rail_and_fly_single_violation(self, travel_sigma, oneway_instance):
        a3 = travel_sigma[2]
        vs = find_violations(oneway_instance, a3)
        assert vs == [{V("X1"): N("x1"), V("X2"): N("x2"), V("Y1"): N("y2")}]

    def test_model_case_is_empty(self, feedback_sigma):
        a1, _ = feedback_sigma
        I = instance([A("S", C("a")), A("E", C("a"), C("b")), A("E", C("b"), C("a"))])
        assert find_violations(I, a1) == []

    def test_chain_example_frozen(self):
        # R(a,b), R(b,c) with R(x,y), R(y,z) -> exists w. R(z,w):
        # the single join embedding is x=a, y=b, z=c and nothing leaves c.
        x, y, z, w = V("X"), V("Y"), V("Z"), V("W")
        c = tgd("c", [A("R", x, y), A("R", y, z)], [A("R", z, w)])
        I = instance([A("R", C("a"), C("b")), A("R", C("b"), C("c"))])
        expected = [{x: C("a"), y: C("b"), z: C("c")}]
        assert find_violations(I, c) == expected
        assert oracles.bf_violations(I, c) == expected

    def test_agrees_with_oracle_and_ordering(self, feedback_sigma):
        a1, a2 = feedback_sigma
        I = instance([
            A("S", C("a")), A("S", N("u")), A("E", C("a"), C("b")),
            A("E", N("u"), C("a")), A("E", C("b"), N("u")),
        ])
        for c in (a1, a2):
            got = find_violations(I, c)
            want = oracles.bf_violations(I, c)
            assert [dict(v) for v in got] == sorted(
                want, key=lambda a: tuple(value_key(a[v]) for v in c.body_vars))

    def test_empty_body_constraint(self):
        c = tgd("c", [], [A("S", V("X"))])
        assert find_violations(instance([]), c) == [{}]
        assert find_violations(instance([A("S", C("a"))]), c) == []


class TestHomomorphism:
    def test_identity(self, roundtrip_instance):
        h = find_homomorphism(roundtrip_instance, roundtrip_instance)
        assert h is not None
        for v in roundtrip_instance.domain():
            assert h[v] == v or isinstance(v, LabeledNull)
        assert hom_equivalent(roundtrip_instance, roundtrip_instance)

    def test_collapse_onto_constant(self):
        src = instance([A("E", N("n1"), N("n2"))])
        tgt = instance([A("E", C("a"), C("a"))])
        h = find_homomorphism(src, tgt)
        assert h == {N("n1"): C("a"), N("n2"): C("a")}

    def test_constant_must_map_to_itself(self):
        src = instance([A("E", C("a"), N("n1"))])
        tgt = instance([A("E", C("b"), C("c"))])
        assert find_homomorphism(src, tgt) is None
        assert oracles.bf_homomorphism(src, tgt) is None

    def test_composition_is_homomorphism(self):
        I = instance([A("E", N("n1"), N("n2"))])
        J = instance([A("E", N("m1"), N("m1"))])
        K = instance([A("E", C("a"), C("a"))])
        h = find_homomorphism(I, J)
        g = find_homomorphism(J, K)
        assert h is not None and g is not None
        composed = {v: g[h[v]] for v in I.domain()}
        image = {A("E", composed[N("n1")], composed[N("n2")])}
        assert image <= K.facts

    def test_agrees_with_oracle(self, oneway_instance, roundtrip_instance):
        assert (find_homomorphism(oneway_instance, roundtrip_instance) is None) == \
            (oracles.bf_homomorphism(oneway_instance, roundtrip_instance) is None)
        assert (find_homomorphism(roundtrip_instance, oneway_instance) is None) == \
            (oracles.bf_homomorphism(roundtrip_instance, oneway_instance) is None)
