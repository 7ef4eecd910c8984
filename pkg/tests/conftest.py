import pytest

from rsskit.core import RssParams, ScenarioState


@pytest.fixture
def params():
    """Reference parameter set used throughout the worked examples."""
    return RssParams(rho=0.3, a_max=2.0, a_brake_min=4.0, a_brake_max=8.0)


def state(gap, v_r, v_f):
    """Scenario state with the rear vehicle at the origin."""
    return ScenarioState(x_f=gap, v_f=v_f, x_r=0.0, v_r=v_r)
