import hypothesis
import pytest

from locsim.mobility import MobilityParams
from locsim.simulator import SimulationConfig, parse_schedule
from locsim.strategy import StrategyConfig

hypothesis.settings.register_profile("suite", deadline=None, max_examples=60)
hypothesis.settings.load_profile("suite")


@pytest.fixture
def make_constant_config():
    """Build a run config over a constant-velocity trace (t1_s > duration)."""

    def _make(
        v: float = 5.0,
        duration: int = 3600,
        requirement: str = "0:500",
        alpha: float = 0.5,
        beta: float = 1.0,
        kind: str = "adaptive",
        t_min_refix_s: float = 1.0,
    ) -> SimulationConfig:
        params = MobilityParams(
            duration_s=duration,
            t1_s=duration + 10,
            v_min=1.0,
            v_max=10.0,
            v0=v,
            seed=0,
        )
        strategy_cfg = StrategyConfig(alpha=alpha, beta=beta, t_min_refix_s=t_min_refix_s)
        return SimulationConfig(params, strategy_cfg, parse_schedule(requirement), kind)

    return _make
