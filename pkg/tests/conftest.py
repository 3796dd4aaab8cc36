import pytest

from inflatearm.specio import table1_chain


@pytest.fixture
def chain1():
    return table1_chain(1)


@pytest.fixture
def chain2():
    return table1_chain(2)


@pytest.fixture
def chain3():
    """3-DoF fabricated-parameter arm: parallel / orthogonal / parallel."""
    return table1_chain(3)


@pytest.fixture
def chain3_planar():
    return table1_chain(3, axes=("parallel",) * 3)
