from functools import lru_cache

import pytest

from qslice.pyramid import Partition, enumerate_pyramids
from qslice.structure import NilpotentDatum, isotropic_choice


@lru_cache(maxsize=None)
def datum_for(parts, idx=0):
    return NilpotentDatum.from_pyramid(enumerate_pyramids(Partition.of(parts))[idx])


@lru_cache(maxsize=None)
def choice_for(parts, idx=0, mode="lagrangian"):
    return isotropic_choice(datum_for(parts, idx), mode)


@pytest.fixture
def datum():
    return datum_for


@pytest.fixture
def choice():
    return choice_for
