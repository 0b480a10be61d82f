import numpy as np
import pytest

from asklab.graphloci import Graph, graph_rep
from asklab.grouplab.lie import full_nilpotent, lie_adjoint_rep, lie_inclusion_rep
from asklab.modrep import ModuleRep, alternating_hull, direct_sum, identity_rep


def random_rep(rng, max_dim=2, low=-2, high=2, name=None):
    l, d, e = (int(x) for x in rng.integers(0, max_dim + 1, size=3))
    t = rng.integers(low, high + 1, size=(l, d, e))
    return ModuleRep.from_array(t.tolist(), name=name, shape=(l, d, e))


def rep_suite():
    id1 = identity_rep()
    n3 = full_nilpotent(3)
    return [
        id1,
        alternating_hull(id1),
        direct_sum(id1, id1),
        graph_rep(Graph.complete(2)),
        graph_rep(Graph.empty(2)),
        lie_adjoint_rep(n3),
        lie_inclusion_rep(n3),
    ]


@pytest.fixture
def suite():
    return rep_suite()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
