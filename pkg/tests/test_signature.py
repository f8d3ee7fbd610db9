import pytest

from impg.objects import UNIT, FlatBasic, SumList
from impg.signature import (
    Ambiguous, ArrowKind, DuplicateArrow, DuplicateObject, Entry, NotFromTo, Signature, UndeclaredArrows,
    UndeclaredObjects, arrow_built_from, obj_built_from, spec_of,
)
from impg.syntax import (
    ArrCall, ArrCase, ArrInj1, ArrInj2, ArrName, ArrProj1, ArrSeq, ObjI, ObjName, ObjProd, ObjSum, Span,
)

N = FlatBasic("N")
A, B, C = ObjName("A"), ObjName("B"), ObjName("C")
X, Y, Z = ObjName("X"), ObjName("Y"), ObjName("Z")


@pytest.fixture
def nat_sig():
    return Signature([
        Entry("s", SumList((UNIT, N)), N),
        Entry("p", N, SumList((UNIT, N))),
    ])


class TestSignature:
    def test_lookup(self, nat_sig):
        entry = spec_of("s", nat_sig)
        assert (entry.dom, entry.cod, entry.kind) == (SumList((UNIT, N)), N, ArrowKind.LIBRARY)

    def test_missing(self):
        assert spec_of("q", Signature()) is None

    def test_first_entry_wins(self):
        sig = Signature([Entry("f", N, N), Entry("f", UNIT, N)])
        assert sig.spec_of("f").dom == N

    def test_extend_appends(self, nat_sig):
        extended = nat_sig.extend(Entry("g", N, N, ArrowKind.DEFINED))
        assert len(extended) == 3
        assert "g" in extended and "g" not in nat_sig
        assert [e.name for e in extended] == ["s", "p", "g"]


class TestBuiltFrom:
    def test_objects(self):
        assert obj_built_from(ObjSum(A, B), ["A", "B"])
        assert obj_built_from(ObjI(), [])
        assert not obj_built_from(ObjProd(A, C), ["A", "B"])

    def test_arrows(self, nat_sig):
        assert arrow_built_from(ArrInj1(None), Signature())
        assert arrow_built_from(ArrSeq(ArrName("p"), ArrName("s")), nat_sig)
        assert not arrow_built_from(ArrCall(None, ArrName("f")), Signature())


GOLDEN = [
    ("duplicate_object", DuplicateObject("N")),
    ("duplicate_arrow", DuplicateArrow("f")),
    ("undeclared_objects", UndeclaredObjects(ObjSum(A, ObjName("Q")))),
    ("undeclared_arrows", UndeclaredArrows(ArrSeq(ArrName("p"), ArrName("q")))),
    ("not_from_to", NotFromTo(ArrSeq(ArrProj1(None), ArrInj1(None)), ObjProd(X, Z), ObjSum(X, Y))),
    ("ambiguous", Ambiguous(ArrCase(ArrInj2(None), ArrInj1(None)))),
]


class TestDiagnostics:
    @pytest.mark.parametrize("name, diagnostic", GOLDEN)
    def test_messages_match_golden_files(self, golden, name, diagnostic):
        assert diagnostic.message == golden(name)

    def test_render_with_position(self):
        d = DuplicateArrow("f", span=Span(3, 5))
        assert d.render("x.imp") == "x.imp:3:5: arrow name f already used"
        assert str(d) == "arrow name f already used"

    def test_span_ignored_in_equality(self):
        assert DuplicateObject("N", span=Span(1, 1)) == DuplicateObject("N")

    def test_not_from_to_prints_objects(self):
        d = NotFromTo(ArrName("f"), ObjProd(A, C), ObjSum(A, B))
        assert d.message == "arrow f is not from A * C to A + B"
