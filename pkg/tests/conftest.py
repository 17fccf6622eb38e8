import numpy as np
import pytest

from grnbench.dataset import RankedEdgeList


def edge_list(pairs) -> RankedEdgeList:
    """Edge list over bare pairs; scores descend with rank position."""
    n = len(pairs)
    return RankedEdgeList(
        tuple((p, c, float(n - i)) for i, (p, c) in enumerate(pairs))
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
