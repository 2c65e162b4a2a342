import os

import pytest

# The below imports depend on these environment variables,
# so set them before importing them.
os.environ["TESTING"] = "True"
os.environ["ENV"] = "test"

from wcusp_waves.core.unfolding import rest_frame
from wcusp_waves.figures import load_figure, panel_config
from wcusp_waves.models import UnfoldingParams

from .utils import small_config


@pytest.fixture
def mirrored_params() -> UnfoldingParams:
    """A mirrored-hysteresis slice family at β = 1/3 (no rest-state requirements)."""
    return UnfoldingParams(lam=0.32, alpha=-0.08, beta=1 / 3, gamma=0.0)


@pytest.fixture(scope="session")
def fig8_pde_params() -> UnfoldingParams:
    figure = load_figure("fig8")
    return panel_config(figure, figure.panels[0]).params


@pytest.fixture(scope="session")
def fig8_params(fig8_pde_params) -> UnfoldingParams:
    """Fig. 8 parameters in the lemma frame: the traveling-burst witness."""
    return rest_frame(fig8_pde_params)[0]


@pytest.fixture
def standing_params() -> UnfoldingParams:
    """Class-3 witness of the standing integral inequalities (w_h1 = w_h2 = −λ)."""
    return UnfoldingParams(lam=0.5, alpha=0.0, beta=1 / 3, gamma=0.0)


@pytest.fixture
def symmetric_params() -> UnfoldingParams:
    """The rest slice is symmetric about its middle root, so c* = 0."""
    return UnfoldingParams(lam=3**-0.5, alpha=0.0, beta=1 / 3, gamma=0.0)


@pytest.fixture
def sim_config():
    return small_config()
