import random

import pytest

from impg.errors import DispatchError, ImpError
from impg.forest import Leaf, Node
from impg.objects import UNIT, FlatBasic, ProdList, SumList
from impg.signature import ArrowKind, Entry, Signature, spec_of
from impg.stdlib import Library, dispatch, find_provider, get_library, libraries, register, unregister
from impg.stdlib.nat import FALSE, TRUE, apply_nat, datum_check, nat_signature, nat_types, parse_datum
from impg.syntax import ObjI, ObjName, ObjSum

N = FlatBasic("N")


def number(n):
    return (Leaf(n),)


def succ(n):
    return apply_nat("s", (Node(1, (Leaf(n),)),))


def pred(n):
    return apply_nat("p", (Leaf(n),))


class TestSignature:
    def test_entries(self):
        sig = nat_signature()
        assert isinstance(sig, Signature)
        assert len(sig) == 8
        assert spec_of("s", sig) == Entry("s", SumList((UNIT, N)), N, ArrowKind.LIBRARY)
        assert spec_of("gt", sig).cod == SumList((UNIT, UNIT))
        assert spec_of("plus", sig).dom == ProdList((N, N))
        assert spec_of("succ", sig) is None
        assert [entry.name for entry in sig] == ["s", "p", "plus", "minus", "times", "gt", "ge", "eq"]

    def test_binary_types(self):
        assert nat_types()["s"] == (ObjSum(ObjI(), ObjName("N")), ObjName("N"))


class TestApply:
    def test_successor(self):
        assert succ(5) == number(6)
        assert apply_nat("s", (Node(0, ()),)) == number(0)

    def test_predecessor(self):
        assert pred(0) == (Node(0, ()),)
        assert pred(7) == (Node(1, (Leaf(6),)),)

    def test_truncated_minus(self):
        assert apply_nat("minus", (Leaf(2), Leaf(5))) == number(0)
        assert apply_nat("minus", (Leaf(5), Leaf(2))) == number(3)

    def test_comparisons(self):
        assert apply_nat("gt", (Leaf(3), Leaf(2))) == TRUE
        assert apply_nat("ge", (Leaf(2), Leaf(2))) == TRUE
        assert apply_nat("eq", (Leaf(2), Leaf(3))) == FALSE

    @pytest.mark.parametrize("n", range(1001))
    def test_successor_and_predecessor_are_inverse(self, n):
        assert apply_nat("p", succ(n)) == (Node(1, (Leaf(n),)),)
        assert apply_nat("s", pred(n)) == number(n)

    def test_arithmetic_against_python_integers(self):
        rng = random.Random(2024)
        for _ in range(1000):
            a, b = rng.randrange(10**30), rng.randrange(10**30)
            assert apply_nat("plus", (Leaf(a), Leaf(b))) == number(a + b)
            assert apply_nat("times", (Leaf(a), Leaf(b))) == number(a * b)
            assert apply_nat("minus", (Leaf(a), Leaf(b))) == number(max(a - b, 0))
            assert apply_nat("gt", (Leaf(a), Leaf(b))) == (TRUE if a > b else FALSE)

    @pytest.mark.parametrize(
        "name, d",
        [
            ("s", (Leaf(3),)),
            ("p", (Node(0, ()),)),
            ("p", (Leaf(-1),)),
            ("plus", (Leaf(1),)),
            ("sqrt", (Leaf(4),)),
        ],
    )
    def test_malformed_input(self, name, d):
        with pytest.raises(DispatchError):
            apply_nat(name, d)


class TestDatum:
    def test_parse(self):
        assert parse_datum("42") == 42
        with pytest.raises(ValueError):
            parse_datum("-1")

    def test_check(self):
        assert datum_check("N", 3)
        assert not datum_check("N", -3)
        assert not datum_check("N", True)
        assert not datum_check("M", 3)


@pytest.fixture
def echo_library():
    library = Library(
        name="echo",
        parse_datum=str,
        datum_check=lambda obj, datum: isinstance(datum, str),
        signature={"echo": (FlatBasic("S"), FlatBasic("S"))},
        apply=lambda name, d: tuple(d),
    )
    register(library)
    yield library
    unregister("echo")


class TestRegistry:
    def test_nat_registered_on_import(self):
        assert get_library("nat").name == "nat"
        assert find_provider("times").name == "nat"

    def test_unknown_library(self):
        with pytest.raises(ImpError):
            get_library("nope")

    def test_register_and_dispatch(self, echo_library):
        assert echo_library in list(libraries())
        assert dispatch("echo", (Leaf("hi"),)) == (Leaf("hi"),)

    def test_duplicate_registration_rejected(self, echo_library):
        with pytest.raises(ImpError):
            register(echo_library)

    def test_dispatch_unknown_arrow(self):
        with pytest.raises(DispatchError):
            dispatch("nothing", ())
