import pytest
from hypothesis import given

from gcla import instances
from gcla.errors import ElementOutOfUniverse, FormatError, InvalidInstance
from gcla.instances import SumInstance

from conftest import sum_instances


def test_sets_are_sorted_and_deduplicated():
    inst = SumInstance.of([3, 1, 3], [2], [2, 2], U=4)
    assert inst.sets == ((1, 3), (2,), (2,))
    assert inst.m == 2 and inst.k == 3


@pytest.mark.parametrize("sets,U,t,signed,err", [
    (([1], [1]), 1, None, False, InvalidInstance),
    (([1], [], [1]), 1, None, False, InvalidInstance),
    (([1], [2], [5]), 4, None, False, ElementOutOfUniverse),
    (([0], [1], [1]), 4, None, False, ElementOutOfUniverse),
    (([1], [1], [1]), 1, 4, False, InvalidInstance),
    (([1], [1], [1]), 1, 0, False, InvalidInstance),
    (([1], [1], [-1]), 1, 3, True, InvalidInstance),
    (([1], [1], [1]), 0, None, False, InvalidInstance),
])
def test_validation(sets, U, t, signed, err):
    with pytest.raises(err):
        SumInstance(sets, U, t, signed)


def test_signed_range():
    inst = SumInstance.of([-3, 2], [0], [3], U=3, signed=True)
    assert inst.A == (-3, 2)
    with pytest.raises(ElementOutOfUniverse):
        SumInstance.of([-4], [0], [3], U=3, signed=True)


def test_format():
    inst = SumInstance.of([1, 2], [3], [4, 5], U=6, t=7)
    assert instances.dumps(inst) == "sum v1 3 2 6 7\n1 2\n3\n4 5\n"


@given(sum_instances(k=4))
def test_round_trip(inst):
    text = instances.dumps(inst)
    assert instances.loads(text) == inst
    assert instances.dumps(instances.loads(text)) == text


def test_signed_round_trip():
    inst = SumInstance.of([1, 2], [3], [-5, -4], U=5, signed=True)
    assert instances.loads(instances.dumps(inst)) == inst


@pytest.mark.parametrize("text", [
    "", "sum v2 3 1 1\n1\n1\n1\n", "sum v1 3 1 1\n1\n1\n", "sum v1 3 1 4\n1 2\n1\n1\n", "sum v1 3 1 4\nx\n1\n1\n",
])
def test_rejects_malformed(text):
    with pytest.raises(FormatError):
        instances.loads(text)
