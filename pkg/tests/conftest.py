import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from funcapprox import NetSpec, init_params  # noqa: E402
from inner_ppo import RolloutBuffer  # noqa: E402


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run desk-scale training checks')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: desk-scale training, needs --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_policy():
    return init_params(NetSpec(4, [6, 5], 3, 'policy'), 0)


@pytest.fixture
def tiny_value():
    return init_params(NetSpec(4, [6], 1, 'value'), 1)


def fill_buffer(policy, n, n_events, rng, episode_len=7):
    """Random on-policy-shaped batch: real log-probs, random events and rewards."""
    from funcapprox import policy_forward
    from inner_ppo import sample_action

    obs_dim = policy.spec.input_dim
    buf = RolloutBuffer(n, obs_dim, n_events)
    obs = rng.normal(size=obs_dim)
    for t in range(n):
        probs = policy_forward(policy, obs)
        a = sample_action(probs, rng)
        nxt = rng.normal(size=obs_dim)
        events = (rng.random(n_events) < 0.3).astype(np.int64)
        done = (t + 1) % episode_len == 0
        buf.add(obs, a, float(rng.normal()), nxt, events, done, np.log(probs[a]),
                float(rng.normal()), float(rng.normal()))
        obs = nxt
    return buf


@pytest.fixture
def toy_buffer(tiny_policy, rng):
    return fill_buffer(tiny_policy, 40, 3, rng)


@pytest.fixture
def make_buffer():
    return fill_buffer
