import numpy as np
import pytest

from envs import (
    DOMAINS, EAT, DRINK, HOPPER_TABLE, SWIMMER_TABLE, DelayWrapper, PayoutQueue, SparseEpisodeWrapper,
    StepResult, SynthRewardEnv, UnknownDomainError, bucketize, format_transition, grid_potential, make_env, reset,
    rollout_trace, step_fight_monster, step_foraging, step_hungry_thirsty,
)


class RandomRewardEnv:
    """Scalar-reward stub with random episode lengths."""
    domain = 'stub'
    n_actions = 2
    n_events = 1
    obs_dim = 1
    event_names = ['tick']

    def __init__(self, seed):
        self.rng = np.random.default_rng(seed)
        self.obs = None

    def reset(self, seed=None):
        self.length = int(self.rng.integers(1, 30))
        self.t = 0
        self.obs = np.zeros(1)
        return self.obs

    def step(self, action):
        self.t += 1
        done = self.t >= self.length
        reward = float(self.rng.normal()) if self.rng.random() < 0.5 else 0.0
        return StepResult(np.zeros(1), reward, np.ones(1, dtype=np.int64), done, None)

    def potential(self):
        return 0.0


class FixedRewardEnv:
    """Scalar-reward stub replaying one fixed episode."""
    domain = 'stub'
    n_actions = 1
    n_events = 0
    obs_dim = 1
    event_names = []

    def __init__(self, rewards):
        self.rewards = list(rewards)
        self.obs = None

    def reset(self, seed=None):
        self.t = 0
        self.obs = np.zeros(1)
        return self.obs

    def step(self, action):
        reward = self.rewards[self.t]
        self.t += 1
        return StepResult(np.zeros(1), reward, np.zeros(0, dtype=np.int64), self.t >= len(self.rewards), None)

    def potential(self):
        return 0.0


# ============================================================
#  BUCKET TABLES
# ============================================================

class TestBuckets:
    @pytest.mark.parametrize('r, index', [
        (-3.5, 0), (-3.0, 1), (-2.0, 2), (-1.0, 3), (-0.5, 4), (0.0, 5),
        (0.5, 6), (1.0, 7), (1.5, 8), (2.0, 9), (3.0, 10), (50.0, 10),
    ])
    def test_hopper(self, r, index):
        assert bucketize(r, HOPPER_TABLE, 0) == index

    @pytest.mark.parametrize('r, index', [(-0.1, 0), (0.0, 1), (0.5, 2), (1.0, 3), (2.0, 4)])
    def test_swimmer_forward(self, r, index):
        assert bucketize(r, SWIMMER_TABLE, 0) == index

    @pytest.mark.parametrize('r, index', [(-3.0, 5), (-2.0, 6), (-1.5, 6), (-1.0, 7), (-0.2, 7), (0.0, 7)])
    def test_swimmer_control(self, r, index):
        assert bucketize(r, SWIMMER_TABLE, 1) == index

    @pytest.mark.parametrize('table, stream', [(HOPPER_TABLE, 0), (SWIMMER_TABLE, 0), (SWIMMER_TABLE, 1)])
    def test_intervals_partition_the_reals(self, table, stream):
        values = np.random.default_rng(11).normal(scale=3.0, size=100_000)
        lows, highs = np.array(table.intervals(stream)).T
        hits = (values[:, None] >= lows) & (values[:, None] < highs)
        assert np.all(hits.sum(axis=1) == 1)
        offset = table.streams[stream]['offset']
        expected = offset + hits.argmax(axis=1)
        got = np.array([bucketize(v, table, stream) for v in values])
        np.testing.assert_array_equal(got, expected)

    def test_table_sizes(self):
        assert HOPPER_TABLE.n_events == 11
        assert SWIMMER_TABLE.n_events == 8

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            bucketize(float('nan'), HOPPER_TABLE, 0)


# ============================================================
#  DELAYED PAYOUTS
# ============================================================

class TestDelay:
    def test_payout_queue_timing(self):
        q = PayoutQueue(10)
        q.schedule(0, 1.0)
        assert q.collect(9) == 0.0
        assert q.collect(10) == 1.0
        assert q.flush() == 0.0

    @pytest.mark.parametrize('k', [0, 1, 10])
    def test_wrapper_conserves_episode_sums(self, k):
        inner_sums, outer_sums = [], []
        env = DelayWrapper(RandomRewardEnv(k), k)
        reference = RandomRewardEnv(k)
        for _ in range(1000):
            env.reset()
            reference.reset()
            done = False
            total_in = total_out = 0.0
            while not done:
                total_out += env.step(0).reward
                result = reference.step(0)
                total_in += result.reward
                done = result.done
            inner_sums.append(total_in)
            outer_sums.append(total_out)
        np.testing.assert_allclose(outer_sums, inner_sums, atol=1e-12)

    def test_zero_delay_is_identity(self):
        env = DelayWrapper(RandomRewardEnv(3), 0)
        reference = RandomRewardEnv(3)
        env.reset()
        reference.reset()
        for _ in range(5):
            a, b = env.step(0), reference.step(0)
            assert a.reward == b.reward
            if a.done:
                break

    def test_negative_delay(self):
        with pytest.raises(ValueError):
            DelayWrapper(RandomRewardEnv(0), -1)

    def test_short_foraging_episode_pays_everything(self):
        rng = np.random.default_rng(0)
        for seed in range(30):
            env = make_env('foraging', seed=seed, max_steps=5, delay=10)
            env.reset()
            reward, events = 0.0, np.zeros(2)
            done = False
            while not done:
                result = env.step(int(rng.integers(4)))
                reward += result.reward
                events += result.events
                done = result.done
            assert reward == pytest.approx(events[0] - events[1])


# ============================================================
#  GRID-WORLDS
# ============================================================

def _place(state, agent, **objects):
    state.agent = agent
    for name, cell in objects.items():
        state.objects[name] = cell


class TestGridWorlds:
    @pytest.mark.parametrize('domain', ['foraging', 'hungry_thirsty', 'fight_monster'])
    def test_reset_places_objects_on_distinct_cells(self, domain):
        for seed in range(20):
            _, state = reset(domain, seed)
            cells = [state.agent] + list(state.objects.values())
            assert len(set(cells)) == len(cells)

    def test_hungry_thirsty_starts_fed_and_watered(self):
        for seed in range(10):
            obs, state = reset('hungry_thirsty', seed)
            assert not state.hungry and not state.thirsty
            assert state.thirst_timer == state.thirst_period
            # hungry, thirsty, thirst level
            np.testing.assert_array_equal(obs[-3:], [0.0, 0.0, 1.0])

    def test_fight_monster_starts_without_buffs(self):
        obs, state = reset('fight_monster', 0)
        assert not state.buff and not state.debuff
        np.testing.assert_array_equal(obs[-2:], [0.0, 0.0])

    @pytest.mark.parametrize('domain', DOMAINS)
    def test_traces_are_deterministic(self, domain):
        actions = np.random.default_rng(5).integers(make_env(domain).n_actions, size=60)
        a = rollout_trace(make_env(domain, seed=1), actions, 9)
        b = rollout_trace(make_env(domain, seed=1), actions, 9)
        assert a == b

    def test_step_after_done(self):
        env = make_env('foraging', seed=0, max_steps=1)
        env.reset()
        assert env.step(0).done
        with pytest.raises(RuntimeError):
            step_foraging(env.state, 0)

    def test_invalid_action(self):
        _, state = reset('foraging', 0)
        with pytest.raises(ValueError):
            step_foraging(state, 4)

    def test_foraging_apple_and_respawn(self):
        _, state = reset('foraging', 0, delay=0)
        _place(state, (2, 1), apple=(2, 2), poison=(0, 0))
        result = step_foraging(state, 3)
        assert result.events.tolist() == [1, 0]
        assert result.reward == 1.0
        assert state.objects['apple'] not in (None, state.agent)

    def test_foraging_poison(self):
        _, state = reset('foraging', 0, delay=0)
        _place(state, (2, 1), apple=(0, 0), poison=(2, 2))
        result = step_foraging(state, 3)
        assert result.events.tolist() == [0, 1]
        assert result.reward == -1.0

    def test_foraging_reward_is_delayed(self):
        _, state = reset('foraging', 0, delay=10)
        _place(state, (2, 1), apple=(2, 2), poison=(4, 4))
        assert step_foraging(state, 3).reward == 0.0

    def test_eat_while_not_thirsty(self):
        _, state = reset('hungry_thirsty', 0)
        _place(state, (1, 1), food=(1, 1), water=(3, 3))
        result = step_hungry_thirsty(state, EAT)
        assert result.events.tolist() == [1, 0]
        assert result.reward == 1.0
        assert not state.hungry

    def test_eat_while_thirsty_fails(self):
        _, state = reset('hungry_thirsty', 0)
        _place(state, (1, 1), food=(1, 1), water=(3, 3))
        state.thirst_timer = 0
        state.thirsty = True
        result = step_hungry_thirsty(state, EAT)
        assert result.events.tolist() == [0, 0]
        assert result.reward == 0.0
        assert state.hungry

    def test_drink_refills_timer_without_reward(self):
        _, state = reset('hungry_thirsty', 0)
        _place(state, (3, 3), food=(1, 1), water=(3, 3))
        state.thirst_timer = 0
        state.thirsty = True
        result = step_hungry_thirsty(state, DRINK)
        assert result.events.tolist() == [0, 1]
        assert result.reward == 0.0
        assert state.thirst_timer == state.thirst_period and not state.thirsty

    def test_thirst_builds_up(self):
        _, state = reset('hungry_thirsty', 0)
        _place(state, (0, 0), food=(4, 4), water=(4, 3))
        for _ in range(state.thirst_period):
            step_hungry_thirsty(state, 0)
        assert state.thirsty

    @pytest.mark.parametrize('buff, debuff, reward, event', [
        (True, False, 1.0, 2), (False, True, -1.0, 3), (False, False, -0.1, 4), (True, True, 1.0, 2),
    ])
    def test_fight_outcomes(self, buff, debuff, reward, event):
        _, state = reset('fight_monster', 0)
        _place(state, (2, 1), monster=(2, 2), weapon=(0, 0), poison=(4, 4))
        state.buff, state.debuff = buff, debuff
        result = step_fight_monster(state, 3)
        assert result.done
        assert result.reward == pytest.approx(reward)
        assert result.events[event] == 1 and result.events.sum() == 1

    def test_weapon_gives_buff_once(self):
        _, state = reset('fight_monster', 0)
        _place(state, (0, 1), monster=(4, 4), weapon=(0, 2), poison=(3, 3))
        result = step_fight_monster(state, 3)
        assert result.events[0] == 1 and state.buff
        assert state.objects['weapon'] is None

    def test_potential_is_zero_on_target(self):
        _, state = reset('foraging', 0)
        _place(state, (2, 2), apple=(2, 2), poison=(0, 0))
        assert grid_potential(state) == 0.0
        _place(state, (0, 4), apple=(2, 2))
        assert grid_potential(state) == pytest.approx(-4 / 10)


# ============================================================
#  SYNTHETIC SPARSE DOMAINS
# ============================================================

class TestSparseEpisodes:
    @pytest.mark.parametrize('domain, n_events, n_streams', [('synth_hopper', 11, 1), ('synth_swimmer', 8, 2)])
    def test_reward_only_at_end_and_one_point_per_stream(self, domain, n_events, n_streams):
        env = make_env(domain, seed=0, max_steps=25)
        assert env.n_events == n_events
        env.reset()
        inner_total, rewards = 0.0, []
        done = False
        while not done:
            result = env.step(4)
            inner_total += float(np.sum(result.streams))
            rewards.append(result.reward)
            assert result.events.sum() == n_streams
            done = result.done
        assert all(r == 0.0 for r in rewards[:-1])
        assert rewards[-1] == pytest.approx(inner_total)

    def test_constant_rewards_pay_the_sum_at_the_end(self):
        env = SparseEpisodeWrapper(FixedRewardEnv([0.6, 0.6, 0.6]), HOPPER_TABLE)
        env.reset()
        results = [env.step(0) for _ in range(3)]
        assert [r.reward for r in results[:2]] == [0.0, 0.0]
        assert results[2].reward == pytest.approx(1.8, abs=1e-12)
        assert results[2].done
        for r in results:
            assert r.events[6] == 1 and r.events.sum() == 1


class TestSynthChain:
    def test_rollout_matches_hand_computed_stream(self):
        env = SynthRewardEnv(seed=0, max_steps=10, chain_length=500.0)
        env.reset()
        env.x, env.v = 10.0, 0.0
        # forces 2, 2, 1, -2, 0
        steps = [env.step(a) for a in (4, 4, 3, 0, 2)]
        progress = [1.5, 2.25, 1.875, -0.5625, -0.28125]
        control = [-2.0, -2.0, -0.5, -2.0, 0.0]
        np.testing.assert_allclose([s.streams[0] for s in steps], progress, atol=1e-12)
        np.testing.assert_allclose([s.streams[1] for s in steps], control, atol=1e-12)
        np.testing.assert_allclose([s.reward for s in steps], np.add(progress, control), atol=1e-12)
        assert env.x == pytest.approx(13.1875)

    def test_same_seed_same_stream(self):
        actions = np.random.default_rng(2).integers(5, size=40)

        def rollout(seed):
            env = SynthRewardEnv(seed=seed, max_steps=40)
            start = env.reset().tolist()
            return start, [env.step(a).reward for a in actions]

        assert rollout(7) == rollout(7)
        assert rollout(7)[0] != rollout(8)[0]

    def test_position_stays_on_the_chain(self):
        env = SynthRewardEnv(seed=1, max_steps=200, chain_length=5.0)
        env.reset()
        for a in [0] * 100 + [4] * 100:
            env.step(a)
            assert 0.0 <= env.x <= 5.0


def test_unknown_domain():
    with pytest.raises(UnknownDomainError):
        make_env('mountain_car')


def test_transition_line_format():
    line = format_transition(3, np.zeros(2), 1, 0.5, np.array([0, 1]), False)
    fields = line.split('\t')
    assert fields[0] == '3' and fields[2] == '1' and fields[3] == '0.5'
    assert fields[4] == '0,1' and fields[5] == '0'
    assert len(fields[1]) == 12
