import pytest

from divfree.algebra import AlgebraParams
from divfree.sampling import PROFILES


@pytest.fixture(params=PROFILES, ids=lambda p: p.name)
def profile_params(request):
    return request.param.params()


def make(l1, l2, l3, gens=None, rho=None):
    return AlgebraParams.make(l1, l2, l3, gens, rho)
