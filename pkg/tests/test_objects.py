import pytest
from hypothesis import given
from hypothesis import strategies as st

from impg.objects import (
    EMPTY, UNIT, FlatBasic, ProdList, SumList, as_prod, as_sum, basic_names, elem, flatten, format_flat, plen,
    rebuild_prod, rebuild_sum, slen, to_obj, word_length,
)
from impg.syntax import ObjI, ObjName, ObjO, ObjProd, ObjSum

A, B, C = FlatBasic("A"), FlatBasic("B"), FlatBasic("C")
OA, OB, OC = ObjName("A"), ObjName("B"), ObjName("C")


def is_flat_normal(x):
    if isinstance(x, FlatBasic):
        return True
    if len(x.items) == 1:
        return False
    if any(type(item) is type(x) for item in x.items):
        return False
    return all(is_flat_normal(item) for item in x.items)


objects = st.recursive(
    st.sampled_from([OA, OB, OC, ObjI(), ObjO()]),
    lambda inner: st.builds(ObjSum, inner, inner) | st.builds(ObjProd, inner, inner),
    max_leaves=12,
)


class TestFlatten:
    def test_nested_sum(self):
        assert flatten(ObjSum(OA, ObjSum(OB, OC))) == SumList((A, B, C))

    def test_terminal(self):
        assert flatten(ObjI()) == ProdList(())

    def test_unit_factor_vanishes(self):
        assert flatten(ObjProd(OA, ObjI())) == A

    def test_initial(self):
        assert flatten(ObjO()) == EMPTY

    def test_empty_summand_vanishes(self):
        assert flatten(ObjSum(ObjO(), OA)) == A

    def test_product_does_not_distribute(self):
        assert flatten(ObjProd(OA, ObjSum(OB, OC))) == ProdList((A, SumList((B, C))))

    @given(objects)
    def test_result_is_normal(self, x):
        assert is_flat_normal(flatten(x))

    @given(objects)
    def test_associativity_invisible(self, x):
        regrouped = ObjSum(ObjSum(x, OA), OB)
        assert flatten(regrouped) == flatten(ObjSum(x, ObjSum(OA, OB)))

    @given(objects)
    def test_to_obj_reads_back(self, x):
        flat = flatten(x)
        assert flatten(to_obj(flat)) == flat


class TestViews:
    @pytest.mark.parametrize(
        "x, expected",
        [(SumList((A, B)), (A, B)), (A, (A,)), (EMPTY, ())],
    )
    def test_as_sum(self, x, expected):
        assert as_sum(x) == expected

    @pytest.mark.parametrize(
        "x, expected",
        [(ProdList((A, B)), (A, B)), (SumList((A, B)), (SumList((A, B)),)), (UNIT, ())],
    )
    def test_as_prod(self, x, expected):
        assert as_prod(x) == expected

    def test_lengths(self):
        assert slen(SumList((A, B, C))) == 3
        assert plen(UNIT) == 0
        assert slen(EMPTY) == 0
        assert slen(A) == 1


class TestRebuild:
    def test_single_summand_unwrapped(self):
        assert rebuild_sum([A]) == A

    def test_nested_sum_spliced(self):
        assert rebuild_sum([A, SumList((B, C))]) == SumList((A, B, C))

    def test_empty_product(self):
        assert rebuild_prod([]) == ProdList(())

    @given(objects)
    def test_inverse_of_views(self, x):
        flat = flatten(x)
        assert rebuild_sum(as_sum(flat)) == flat
        assert rebuild_prod(as_prod(flat)) == flat


class TestElem:
    def test_zero_based(self):
        assert elem(0, [A, B]) == A
        assert elem(1, [A, B]) == B

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            elem(2, [A, B])


class TestPrinting:
    def test_format_flat(self):
        assert format_flat(ProdList((A, SumList((B, C))))) == "*(A +(B C))"
        assert format_flat(EMPTY) == "+()"
        assert format_flat(UNIT) == "*()"

    def test_basic_names(self):
        assert basic_names(flatten(ObjSum(OA, ObjProd(OB, OA)))) == ("A", "B", "A")


class TestWordLength:
    def test_atoms(self):
        assert word_length(OA) == 1
        assert word_length(ObjI()) == word_length(ObjO()) == 1

    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_n_copies_of_a_power(self, n):
        power = OA
        for _ in range(n - 1):
            power = ObjProd(OA, power)
        x = power
        for _ in range(n - 1):
            x = ObjSum(power, x)
        assert word_length(x) == n * n
