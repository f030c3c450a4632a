import pytest

from xyness.model import ChainParams
from xyness.quadrature import QuadSpec


@pytest.fixture
def fig_params():
    """Reference nonequilibrium point (beta_L, beta_R, kappa) = (1/2, 2, 1/5), x0 = 1."""
    return ChainParams(0.5, 2.0, 0.2, x0=1)


@pytest.fixture
def quad():
    return QuadSpec()
