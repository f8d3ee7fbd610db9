import math
import random

import pytest

from impg import corpus
from impg.callnf import (
    CallForm, as_call, case_nf, count_calls, flatten_nf, lift, nest_sum, normalize, normalize_def, pair_nf,
    permute_sum, prod_nf, seq_nf, sum_nf,
)
from impg.code import count_iters
from impg.compiler import compile_arrow, compile_program
from impg.errors import TypeMismatch
from impg.forest import Leaf
from impg.objects import flatten
from impg.refeval import Base, Inl, Inr, PairV, Unit, countdown, eval_ref, gen_arrow, gen_value, rep
from impg.signature import ArrowKind, Entry
from impg.stdlib.nat import nat_signature, nat_types
from impg.syntax import (
    ArrCall, ArrCase, ArrId, ArrInj1, ArrInj2, ArrName, ArrPair, ArrProj1, ArrProj2, ArrSeq, ArrSum, ObjI,
    ObjName, ObjO, ObjProd, ObjSum,
)
from impg.vm import execute

N, A, B = ObjName("N"), ObjName("A"), ObjName("B")
I_N = ObjSum(ObjI(), N)
TYPES = nat_types()
SIG = nat_signature()

PRED = ArrName("p")
SUCC = ArrSeq(ArrInj2((ObjI(), N)), ArrName("s"))


def run(cf, v):
    return eval_ref(as_call(cf), v, types=TYPES)


def machine(cf, v):
    code = compile_arrow(as_call(cf), flatten(cf.input), flatten(cf.output), SIG)
    return execute(code, rep(v, cf.input))


def program_signature(compiled):
    sig = compiled.signature
    for d in compiled.defs:
        sig = sig.extend(Entry(d.name, flatten(d.dom), flatten(d.cod), ArrowKind.DEFINED))
    return sig


def arrow_with_calls(rng, low=1, high=3):
    """Random elaborated arrow holding between ``low`` and ``high`` calls."""
    while True:
        f, x, y = gen_arrow(TYPES, rng, depth=3)
        if low <= count_calls(f) <= high:
            return f, x, y


class TestLift:
    def test_identity(self):
        cf = lift(ArrId(A), A, A)
        assert (cf.input, cf.local, cf.output) == (A, ObjO(), A)
        for k in range(100):
            assert run(cf, Base(k)) == Base(k)

    def test_trivial_loop_is_optimized_away(self):
        cf = lift(PRED, N, I_N)
        code = compile_arrow(as_call(cf), flatten(N), flatten(I_N), SIG)
        assert count_iters(code) == 0

    def test_same_values_as_the_arrow(self):
        cf = lift(PRED, N, I_N)
        for k in range(100):
            assert run(cf, Base(k)) == eval_ref(PRED, Base(k), types=TYPES)
            assert machine(cf, Base(k)) == rep(eval_ref(PRED, Base(k), types=TYPES), I_N)


class TestConstructions:
    def test_composition(self):
        cf = seq_nf(lift(PRED, N, I_N), lift(ArrName("s"), I_N, N))
        assert cf.local == ObjSum(ObjSum(ObjO(), I_N), ObjO())
        for k in range(100):
            assert run(cf, Base(k)) == Base(k)
            assert machine(cf, Base(k)) == (Leaf(k),)

    def test_composition_is_associative(self):
        a = lift(PRED, N, I_N)
        b = lift(ArrName("s"), I_N, N)
        c = lift(ArrPair(ArrId(N), SUCC), N, ObjProd(N, N))
        left, right = seq_nf(seq_nf(a, b), c), seq_nf(a, seq_nf(b, c))
        for k in range(100):
            assert run(left, Base(k)) == run(right, Base(k)) == PairV(Base(k), Base(k + 1))

    def test_composition_type_mismatch(self):
        with pytest.raises(TypeMismatch):
            seq_nf(lift(PRED, N, I_N), lift(PRED, N, I_N))

    def test_sum(self):
        cf = sum_nf(lift(PRED, N, I_N), lift(SUCC, N, N))
        rng = random.Random(1)
        for _ in range(100):
            v = gen_value(ObjSum(N, N), rng)
            assert run(cf, v) == eval_ref(ArrSum(PRED, SUCC), v, types=TYPES)

    def test_product_local_space(self):
        u, y, u2, y2 = ObjO(), I_N, ObjO(), N
        cf = prod_nf(lift(PRED, N, I_N), lift(SUCC, N, N))
        assert cf.local == nest_sum([ObjProd(u, u2), ObjProd(u, y2), ObjProd(y, u2)])
        assert cf.output == ObjProd(y, y2)

    def test_product(self):
        cf = prod_nf(lift(PRED, N, I_N), lift(SUCC, N, N))
        assert run(cf, PairV(Base(0), Base(4))) == PairV(Inl(Unit()), Base(5))
        assert run(cf, PairV(Base(3), Base(4))) == PairV(Inr(Base(2)), Base(5))

    def test_product_of_loops_of_different_lengths(self):
        down = normalize(countdown(), types=TYPES)
        cf = prod_nf(down, lift(SUCC, N, N))
        assert run(cf, PairV(Base(6), Base(1))) == PairV(Base(0), Base(2))

    def test_pairing_is_twist(self):
        cf = pair_nf(
            lift(ArrProj2((A, B)), ObjProd(A, B), B),
            lift(ArrProj1((A, B)), ObjProd(A, B), A),
        )
        for k in range(100):
            assert run(cf, PairV(Base(k), Base(-k))) == PairV(Base(-k), Base(k))

    def test_case(self):
        cf = case_nf(lift(PRED, N, I_N), lift(ArrInj1((ObjI(), N)), ObjI(), I_N))
        assert run(cf, Inl(Base(3))) == Inr(Base(2))
        assert run(cf, Inr(Unit())) == Inl(Unit())

    def test_nested_loops_merge(self):
        inner = as_call(lift(countdown().body, ObjSum(N, N), ObjSum(N, N)))
        cf = flatten_nf(CallForm(N, N, N, inner))
        assert cf.local == ObjSum(ObjO(), N)
        assert count_calls(cf.body) == 0
        for k in range(100):
            assert run(cf, Base(k)) == Base(0)

    def test_merge_needs_annotated_call(self):
        with pytest.raises(TypeMismatch):
            flatten_nf(CallForm(N, N, N, PRED))

    def test_permutation(self):
        iso = permute_sum([A, B, N], [2, 0, 1])
        assert eval_ref(iso, Inr(Inl(Base(7)))) == Inr(Inr(Base(7)))
        with pytest.raises(ValueError):
            permute_sum([A, B], [0, 0])


class TestNormalize:
    def test_call_free_arrow_is_lifted(self):
        assert normalize(PRED, types=TYPES) == lift(PRED, N, I_N)

    def test_two_loops_become_one(self):
        f = ArrSeq(countdown(), ArrSeq(SUCC, countdown()))
        cf = normalize(f, types=TYPES)
        assert count_calls(as_call(cf)) == 1
        for k in range(30):
            assert run(cf, Base(k)) == Base(0)
            assert machine(cf, Base(k)) == (Leaf(0),)

    def test_double_nested_loop(self):
        inner = as_call(lift(countdown().body, ObjSum(N, N), ObjSum(N, N)))
        cf = normalize(ArrCall((N, N, N), inner), types=TYPES)
        assert count_calls(cf.body) == 0
        assert run(cf, Base(9)) == Base(0)

    def test_unannotated_call(self):
        with pytest.raises(TypeMismatch):
            normalize(ArrCall(None, ArrCase(PRED, PRED)), types=TYPES)

    @pytest.mark.parametrize("seed", range(25))
    def test_random_arrows(self, seed):
        rng = random.Random(seed)
        f, x, y = arrow_with_calls(rng)
        assert 1 <= count_calls(f) <= 3
        cf = normalize(f, types=TYPES)
        assert count_calls(cf.body) == 0
        code = compile_arrow(as_call(cf), flatten(x), flatten(y), SIG)
        assert count_iters(code) <= 1
        for _ in range(100):
            v = gen_value(x, rng)
            expected = rep(eval_ref(f, v, types=TYPES), y)
            assert rep(run(cf, v), y) == expected
            assert execute(code, rep(v, x)) == expected


@pytest.fixture(scope="module")
def nested():
    return compile_program(corpus.load("nested_call"))


class TestDefinitions:
    @pytest.mark.parametrize("name, expected", [("fact", math.factorial), ("square", lambda n: n * n)])
    def test_nested_calls(self, nested, name, expected):
        cf = normalize_def(name, nested)
        arrow = as_call(cf)
        assert count_calls(arrow) == 1
        code = compile_arrow(arrow, flatten(cf.input), flatten(cf.output), program_signature(nested))
        for n in range(9):
            assert execute(code, (Leaf(n),), nested) == (Leaf(expected(n)),)
            assert execute(nested.code_of(name), (Leaf(n),), nested) == (Leaf(expected(n)),)
        for n in range(6):
            assert eval_ref(arrow, Base(n), nested) == Base(expected(n))

    def test_call_free_definitions_stay_named(self, nested):
        cf = normalize(ArrName("succ"), nested)
        assert cf.body.first.left == ArrName("succ")

    def test_missing_definition(self, nested):
        with pytest.raises(TypeMismatch):
            normalize_def("nope", nested)
