import pytest

from szlab import gf2field as gf
from szlab import szcore
from szlab.groupengine import all_subgroups


@pytest.fixture(scope="session")
def f3():
    return gf.field_new(3)


@pytest.fixture(scope="session")
def sz8(f3):
    return szcore.build_sz(f3)


@pytest.fixture(scope="session")
def P3(f3):
    t = szcore.pair_group_table(f3)
    return t, all_subgroups(t)


@pytest.fixture(scope="session")
def sz8_survey(sz8):
    from szlab import szlattice

    return szlattice.survey(sz8)
