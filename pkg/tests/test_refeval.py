import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from impg import corpus
from impg.code import contains_preopt, peephole
from impg.compiler import compile_arrow, compile_program
from impg.domcod import cod, dom
from impg.errors import BudgetExhausted, TypeMismatch, UninhabitedType
from impg.forest import Leaf, Node, check_data, is_normal
from impg.objects import FlatBasic, ProdList, SumList, flatten
from impg.refeval import (
    Base, Inl, Inr, PairV, Unit, arrow_type, check_value, coerce, countdown, eval_ref, gen_arrow, gen_type,
    gen_value, rep, unrep,
)
from impg.stdlib.nat import nat_signature, nat_types
from impg.syntax import ArrDist, ArrPair, ArrProj1, ArrProj2, ObjI, ObjName, ObjO, ObjProd, ObjSum
from impg.vm import execute

N = ObjName("N")
A, B, C = ObjName("A"), ObjName("B"), ObjName("C")
FN = FlatBasic("N")

TYPES = nat_types()
SIG = nat_signature()

seeds = st.integers(min_value=0, max_value=2**32 - 1)
slow = settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def generated(seed):
    rng = random.Random(seed)
    f, x, y = gen_arrow(TYPES, rng, depth=4)
    return f, x, y, gen_value(x, rng)


class TestRepresentation:
    def test_unit(self):
        assert rep(Unit(), ProdList(())) == ()

    def test_binary_sum(self):
        assert rep(Inl(Base(5)), SumList((FN, FN))) == (Node(0, (Leaf(5),)),)
        assert rep(Inr(Base(5)), SumList((FN, FN))) == (Node(1, (Leaf(5),)),)

    def test_nested_sum_offsets(self):
        assert rep(Inr(Inl(Base(5))), flatten(ObjSum(N, ObjSum(N, N)))) == (Node(1, (Leaf(5),)),)

    def test_left_nested_sum_offsets(self):
        t = ObjSum(ObjSum(N, N), N)
        assert rep(Inl(Inr(Base(5))), t) == (Node(1, (Leaf(5),)),)
        assert rep(Inr(Base(5)), t) == (Node(2, (Leaf(5),)),)

    def test_products_concatenate(self):
        assert rep(PairV(Base(1), PairV(Unit(), Base(2))), ObjProd(N, ObjProd(ObjI(), N))) == (Leaf(1), Leaf(2))

    def test_sum_with_empty_side_is_untagged(self):
        assert rep(Inr(Base(3)), ObjSum(ObjO(), N)) == (Leaf(3),)

    def test_wrong_value(self):
        with pytest.raises(TypeMismatch):
            rep(Base(1), ObjSum(N, N))

    def test_unrep_rejects_bad_tags(self):
        with pytest.raises(TypeMismatch):
            unrep((Node(3, (Leaf(1),)),), ObjSum(N, N))

    def test_coerce_reassociates(self):
        v = Inr(Inl(Base(1)))
        assert coerce(v, ObjSum(A, ObjSum(B, C)), ObjSum(ObjSum(A, B), C)) == Inl(Inr(Base(1)))
        with pytest.raises(TypeMismatch):
            coerce(v, ObjSum(A, B), ObjSum(B, A))

    @given(seeds)
    @settings(max_examples=200)
    def test_well_typed_and_injective(self, seed):
        rng = random.Random(seed)
        t = gen_type(rng, 3)
        values = {gen_value(t, rng) for _ in range(8)}
        forests = {rep(v, t) for v in values}
        assert len(forests) == len(values)
        for v in values:
            assert check_value(v, t)
            assert check_data(rep(v, t), flatten(t))
            assert unrep(rep(v, t), t) == v


class TestGenerators:
    def test_empty_type(self):
        with pytest.raises(UninhabitedType):
            gen_value(ObjO(), 0)

    def test_deterministic(self):
        assert gen_arrow(TYPES, 7) == gen_arrow(TYPES, 7)
        assert gen_value(ObjProd(N, ObjSum(N, N)), 3) == gen_value(ObjProd(N, ObjSum(N, N)), 3)

    def test_both_summands_occur(self):
        t = flatten(ObjSum(N, ObjProd(N, N)))
        rng = random.Random(0)
        tags = {rep(gen_value(ObjSum(N, ObjProd(N, N)), rng), t)[0].tag for _ in range(50)}
        assert tags == {0, 1}

    def test_uninhabited_summand_is_skipped(self):
        assert all(isinstance(gen_value(ObjSum(ObjO(), N), s), Inr) for s in range(20))

    def test_generated_arrows_are_typed(self):
        for seed in range(100):
            f, x, y = gen_arrow(TYPES, seed)
            assert arrow_type(f, TYPES) == (x, y)


class TestEvaluation:
    def test_twist(self):
        twist = ArrPair(ArrProj2((A, B)), ArrProj1((A, B)))
        assert eval_ref(twist, PairV(Base("a"), Base("b"))) == PairV(Base("b"), Base("a"))

    def test_distributivity(self):
        v = PairV(Base("a"), Inr(Base("c")))
        assert eval_ref(ArrDist((A, B, C)), v) == Inr(PairV(Base("a"), Base("c")))

    def test_countdown(self):
        assert eval_ref(countdown(), Base(3), types=TYPES) == Base(0)

    def test_budget(self):
        with pytest.raises(BudgetExhausted):
            eval_ref(countdown(), Base(3), budget=2, types=TYPES)

    def test_program_definitions(self):
        compiled = compile_program(corpus.load("fact"))
        assert eval_ref(compiled.find("fact").arrow, Base(5), compiled) == Base(120)

    def test_program_text(self):
        program = corpus.load("add")
        arrow = compile_program(program).find("add").arrow
        assert eval_ref(arrow, PairV(Base(3), Base(4)), program) == Base(7)


class TestAgainstMachine:
    @given(seeds)
    @slow
    def test_compiled_code_agrees(self, seed):
        f, x, y, v = generated(seed)
        code = compile_arrow(f, flatten(x), flatten(y), SIG)
        expected = rep(eval_ref(f, v, types=TYPES), y)
        assert not contains_preopt(code)
        assert execute(code, rep(v, x)) == expected

    @given(seeds)
    @slow
    def test_optimization_is_sound(self, seed):
        f, x, y, v = generated(seed)
        raw = compile_arrow(f, flatten(x), flatten(y), SIG, optimize=False)
        d = rep(v, x)
        assert execute(raw, d) == execute(peephole(raw), d)

    @given(seeds)
    @slow
    def test_peephole_is_idempotent(self, seed):
        f, x, y, _ = generated(seed)
        code = compile_arrow(f, flatten(x), flatten(y), SIG)
        assert peephole(code) == code

    def test_countdown_on_machine(self):
        code = compile_arrow(countdown(), FN, FN, SIG)
        assert execute(code, (Leaf(6),)) == (Leaf(0),)


class TestGeneratedInvariants:
    @given(seeds)
    @slow
    def test_inferred_types_are_sound(self, seed):
        f, x, y, _ = generated(seed)
        inferred_dom, inferred_cod = dom(f, SIG), cod(f, SIG)
        if inferred_dom is not None:
            assert inferred_dom == flatten(x)
        if inferred_cod is not None:
            assert inferred_cod == flatten(y)

    @given(seeds)
    @slow
    def test_machine_preserves_types(self, seed):
        f, x, y, v = generated(seed)
        code = compile_arrow(f, flatten(x), flatten(y), SIG)
        assert check_data(execute(code, rep(v, x)), flatten(y))

    @given(seeds)
    @slow
    def test_machine_preserves_normal_form(self, seed):
        f, x, y, v = generated(seed)
        d = rep(v, x)
        assert is_normal(d)
        assert is_normal(execute(compile_arrow(f, flatten(x), flatten(y), SIG), d))
