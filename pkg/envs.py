#!/usr/bin/env python3
"""
Grid-World Domains + Reward Wrappers
=====================================
Three 5x5 grid-worlds that emit per-step event vectors (game points)
alongside the extrinsic reward, plus generic wrappers:

  Foraging        events [eat_apple, eat_poison]
                  +1 / -1 paid out `delay` (default 10) steps after the event
  Hungry-Thirsty  events [eat, drink]
                  eating pays +1 only while non-thirsty; drinking pays nothing
                  but refills a thirst timer (default 5 steps)
  Fight Monster   events [get_buff, get_debuff, win, lose, draw]
                  touching the monster ends the episode: +1 with buff,
                  -1 with debuff only, -0.1 otherwise (buff wins ties)

  DelayWrapper         queue every extrinsic reward k steps
  SparseEpisodeWrapper pay the episode sum only at the end, emit bucketed
                       game points every step (Hopper / Swimmer tables)
  SynthRewardEnv       1-D chain with progress and control reward streams

Every domain is a deterministic function of (seed, action sequence).
Payouts still queued when an episode ends are folded into its last step.

Usage:
    python3 envs.py                 # list domains
    python3 envs.py foraging 3      # print a random-action trace, seed 3
"""
import hashlib
import sys
from collections import deque, namedtuple

import numpy as np

from settings import DOMAIN_CONFIG, HARNESS_CONFIG


class UnknownDomainError(KeyError):
    pass


StepResult = namedtuple('StepResult', ['obs', 'reward', 'events', 'done', 'streams'])

# (row, col) offsets; actions 0-3 are moves in every grid-world
MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))
MOVE_NAMES = ('up', 'down', 'left', 'right')
EAT, DRINK = 4, 5

GRID_OBJECTS = {
    'foraging': ('apple', 'poison'),
    'hungry_thirsty': ('food', 'water'),
    'fight_monster': ('weapon', 'poison', 'monster'),
}
GRID_FLAGS = {
    'foraging': (),
    'hungry_thirsty': ('hungry', 'thirsty', 'thirst_level'),
    'fight_monster': ('buff', 'debuff'),
}
GRID_ACTIONS = {
    'foraging': MOVE_NAMES,
    'hungry_thirsty': MOVE_NAMES + ('eat', 'drink'),
    'fight_monster': MOVE_NAMES,
}


# ============================================================
#  PAYOUT QUEUE (shared by Foraging and DelayWrapper)
# ============================================================

class PayoutQueue:
    def __init__(self, delay):
        if delay < 0:
            raise ValueError(f"delay must be >= 0, got {delay}")
        self.delay = int(delay)
        self.pending = deque()

    def schedule(self, t, amount):
        if amount != 0.0:
            self.pending.append((t + self.delay, amount))

    def collect(self, t):
        total = 0.0
        while self.pending and self.pending[0][0] <= t:
            total += self.pending.popleft()[1]
        return total

    def flush(self):
        total = sum(amount for _, amount in self.pending)
        self.pending.clear()
        return total

    def clear(self):
        self.pending.clear()


# ============================================================
#  GRID-WORLD STATE
# ============================================================

class GridWorldState:
    """Mutable state of one grid-world episode; owns its respawn RNG."""

    def __init__(self, domain, size=5, max_steps=200, seed=0, delay=0,
                 thirst_period=5, step_cost=0.0):
        if domain not in GRID_OBJECTS:
            raise UnknownDomainError(domain)
        self.domain = domain
        self.width = self.height = int(size)
        self.max_steps = int(max_steps)
        self.rng = np.random.default_rng(seed)
        self.agent = (0, 0)
        self.objects = {}
        self.hungry = False
        self.thirsty = False
        self.thirst_period = int(thirst_period)
        self.thirst_timer = self.thirst_period
        self.buff = False
        self.debuff = False
        self.step_cost = float(step_cost)
        self.t = 0
        self.done = False
        self.payouts = PayoutQueue(delay)

    def cell_index(self, cell):
        return cell[0] * self.width + cell[1]

    def index_cell(self, idx):
        return (int(idx) // self.width, int(idx) % self.width)

    def occupied(self):
        cells = {self.agent}
        cells.update(c for c in self.objects.values() if c is not None)
        return cells

    def random_empty_cell(self):
        taken = {self.cell_index(c) for c in self.occupied()}
        free = [i for i in range(self.width * self.height) if i not in taken]
        return self.index_cell(free[self.rng.integers(len(free))])


def place_objects(state):
    names = GRID_OBJECTS[state.domain]
    cells = state.rng.choice(state.width * state.height, size=len(names) + 1, replace=False)
    state.agent = state.index_cell(cells[0])
    state.objects = {name: state.index_cell(c) for name, c in zip(names, cells[1:])}


def observe(state):
    """One-hot cell channel for the agent and each object, then status flags."""
    cells = state.width * state.height
    names = GRID_OBJECTS[state.domain]
    flags = GRID_FLAGS[state.domain]
    obs = np.zeros(cells * (len(names) + 1) + len(flags))
    obs[state.cell_index(state.agent)] = 1.0
    for k, name in enumerate(names, start=1):
        cell = state.objects.get(name)
        if cell is not None:
            obs[k * cells + state.cell_index(cell)] = 1.0
    base = cells * (len(names) + 1)
    for k, flag in enumerate(flags):
        if flag == 'thirst_level':
            obs[base + k] = state.thirst_timer / max(state.thirst_period, 1)
        else:
            obs[base + k] = float(getattr(state, flag))
    return obs


def obs_dim_for(domain, size=5):
    return size * size * (len(GRID_OBJECTS[domain]) + 1) + len(GRID_FLAGS[domain])


def _move(state, action):
    dr, dc = MOVES[action]
    r = min(max(state.agent[0] + dr, 0), state.height - 1)
    c = min(max(state.agent[1] + dc, 0), state.width - 1)
    state.agent = (r, c)


def _finish_step(state, raw_reward, events, terminal=False):
    """Queue the raw reward, collect payouts due now, advance the clock."""
    t = state.t
    state.payouts.schedule(t, raw_reward)
    reward = state.payouts.collect(t)
    state.t += 1
    done = terminal or state.t >= state.max_steps
    if done:
        reward += state.payouts.flush()
    state.done = done
    return StepResult(observe(state), reward, events, done, None)


def _check_action(state, action, n_actions):
    if state.done:
        raise RuntimeError(f"{state.domain}: step() called on a finished episode")
    if not 0 <= int(action) < n_actions:
        raise ValueError(f"{state.domain}: invalid action {action}")


# ============================================================
#  DOMAIN DYNAMICS
# ============================================================

def reset(domain, seed, **options):
    """Fresh episode: (observation, GridWorldState) with distinct random placements."""
    if domain not in GRID_OBJECTS:
        raise UnknownDomainError(domain)
    cfg = DOMAIN_CONFIG[domain]
    kwargs = {
        'size': cfg.get('size', 5),
        'max_steps': HARNESS_CONFIG['grid']['max_ep_len'],
        'delay': cfg.get('delay', 0),
        'thirst_period': cfg.get('thirst_period', 5),
        'step_cost': cfg.get('step_cost', 0.0),
    }
    kwargs.update({k: v for k, v in options.items() if v is not None})
    state = GridWorldState(domain, seed=seed, **kwargs)
    place_objects(state)
    return observe(state), state


def step_foraging(state, action):
    _check_action(state, action, 4)
    _move(state, action)
    events = np.zeros(2, dtype=np.int64)
    raw = 0.0
    if state.agent == state.objects['apple']:
        events[0] = 1
        raw += 1.0
        state.objects['apple'] = None
        state.objects['apple'] = state.random_empty_cell()
    elif state.agent == state.objects['poison']:
        events[1] = 1
        raw -= 1.0
        state.objects['poison'] = None
        state.objects['poison'] = state.random_empty_cell()
    return _finish_step(state, raw, events)


def step_hungry_thirsty(state, action):
    _check_action(state, action, 6)
    events = np.zeros(2, dtype=np.int64)
    raw = 0.0
    drank = False
    state.hungry = True
    if action < 4:
        _move(state, action)
    elif action == EAT:
        # eating fails while thirsty, and a failed eat is not an event
        if state.agent == state.objects['food'] and not state.thirsty:
            events[0] = 1
            raw = 1.0
            state.hungry = False
    elif action == DRINK:
        if state.agent == state.objects['water']:
            events[1] = 1
            state.thirst_timer = state.thirst_period
            drank = True
    if not drank:
        state.thirst_timer = max(state.thirst_timer - 1, 0)
    state.thirsty = state.thirst_timer == 0
    return _finish_step(state, raw, events)


def step_fight_monster(state, action):
    _check_action(state, action, 4)
    _move(state, action)
    events = np.zeros(5, dtype=np.int64)
    raw = 0.0
    terminal = False
    if state.agent == state.objects['monster']:
        terminal = True
        if state.buff:
            raw, events[2] = 1.0, 1
        elif state.debuff:
            raw, events[3] = -1.0, 1
        else:
            raw, events[4] = -0.1, 1
    else:
        if state.agent == state.objects.get('weapon'):
            state.buff = True
            state.objects['weapon'] = None
            events[0] = 1
        elif state.agent == state.objects.get('poison'):
            state.debuff = True
            state.objects['poison'] = None
            events[1] = 1
        raw = -state.step_cost
    return _finish_step(state, raw, events, terminal=terminal)


STEP_FUNCTIONS = {
    'foraging': step_foraging,
    'hungry_thirsty': step_hungry_thirsty,
    'fight_monster': step_fight_monster,
}


def _manhattan(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def grid_potential(state):
    """-(distance to nearest positive object) / (width + height)."""
    if state.domain == 'foraging':
        targets = [state.objects['apple']]
    elif state.domain == 'hungry_thirsty':
        targets = [state.objects['food'], state.objects['water']]
    else:
        weapon = state.objects.get('weapon')
        targets = [weapon] if weapon is not None else [state.objects['monster']]
    dist = min(_manhattan(state.agent, t) for t in targets)
    return -dist / float(state.width + state.height)


# ============================================================
#  ENVIRONMENT OBJECTS
# ============================================================
#
#  All environments share one small interface:
#    reset(seed=None) -> obs      seed None draws from the env's seed stream
#    step(action)     -> StepResult
#    potential()      -> float    PBRS potential of the current state
#    obs              current observation, None until reset
#    n_actions, n_events, obs_dim, event_names, domain
# ============================================================

class GridWorldEnv:
    def __init__(self, domain, seed=0, max_steps=None, **options):
        if domain not in GRID_OBJECTS:
            raise UnknownDomainError(domain)
        self.domain = domain
        self.options = dict(options, max_steps=max_steps)
        self.size = options.get('size') or DOMAIN_CONFIG[domain].get('size', 5)
        self.n_actions = len(GRID_ACTIONS[domain])
        self.event_names = list(DOMAIN_CONFIG[domain]['event_names'])
        self.n_events = len(self.event_names)
        self.obs_dim = obs_dim_for(domain, self.size)
        self._seeds = np.random.default_rng(seed)
        self._step = STEP_FUNCTIONS[domain]
        self.state = None
        self.obs = None

    def reset(self, seed=None):
        if seed is None:
            seed = int(self._seeds.integers(2**31 - 1))
        self.obs, self.state = reset(self.domain, seed, **self.options)
        return self.obs

    def step(self, action):
        result = self._step(self.state, int(action))
        self.obs = None if result.done else result.obs
        return result

    def potential(self):
        return grid_potential(self.state)


def make_grid_env(domain, seed=0, **options):
    return GridWorldEnv(domain, seed=seed, **options)


class DelayWrapper:
    """Delivers every inner extrinsic reward k steps later; events are not delayed."""

    def __init__(self, inner, k):
        if k < 0:
            raise ValueError(f"delay must be >= 0, got {k}")
        self.inner = inner
        self.k = int(k)
        self.queue = PayoutQueue(k)
        self.t = 0
        for attr in ('domain', 'n_actions', 'n_events', 'obs_dim', 'event_names'):
            setattr(self, attr, getattr(inner, attr))

    @property
    def obs(self):
        return self.inner.obs

    def reset(self, seed=None):
        self.queue.clear()
        self.t = 0
        return self.inner.reset(seed)

    def step(self, action):
        result = self.inner.step(action)
        self.queue.schedule(self.t, result.reward)
        reward = self.queue.collect(self.t)
        self.t += 1
        if result.done:
            reward += self.queue.flush()
        return result._replace(reward=reward)

    def potential(self):
        return self.inner.potential()


def delay_wrapper(inner, k):
    return DelayWrapper(inner, k)


# ============================================================
#  GAME-POINT BUCKET TABLES
# ============================================================
#
#  Each stream is a sorted list of finite edges e_0 < ... < e_m-1:
#    bucket 0 = (-inf, e_0), bucket j = [e_j-1, e_j), bucket m = [e_m-1, inf)
#  Its global event index is offset + bucket. 'source' lists the inner
#  reward streams summed to form the bucketed value.
# ============================================================

class BucketTable:
    def __init__(self, name, streams):
        self.name = name
        self.streams = []
        offset = 0
        for s in streams:
            edges = np.asarray(s['edges'], dtype=np.float64)
            if len(edges) and (not np.all(np.isfinite(edges)) or np.any(np.diff(edges) <= 0)):
                raise ValueError(f"{name}/{s['name']}: edges must be finite and increasing")
            self.streams.append({'name': s['name'], 'edges': edges,
                                 'offset': offset, 'source': tuple(s['source'])})
            offset += len(edges) + 1
        self.n_events = offset

    def intervals(self, stream):
        edges = list(self.streams[stream]['edges'])
        lows = [-np.inf] + edges
        highs = edges + [np.inf]
        return list(zip(lows, highs))


def bucketize(r, table, stream):
    """Global event index of the interval containing r."""
    if np.isnan(r):
        raise ValueError("cannot bucketize NaN")
    s = table.streams[stream]
    return s['offset'] + int(np.searchsorted(s['edges'], r, side='right'))


# Hopper: one stream over the whole per-step reward, game points 0-10
HOPPER_TABLE = BucketTable('hopper', [
    {'name': 'reward', 'source': (0, 1),
     'edges': [-3, -2, -1, -0.5, 0, 0.5, 1, 1.5, 2, 3]},
])

# Swimmer: forward reward -> points 0-4, control reward -> points 5-7.
# The control row stops at 0; non-negative control values fall in point 7.
SWIMMER_TABLE = BucketTable('swimmer', [
    {'name': 'forward', 'source': (0,), 'edges': [0, 0.5, 1, 2]},
    {'name': 'control', 'source': (1,), 'edges': [-2, -1]},
])


class SparseEpisodeWrapper:
    """
    Extrinsic reward is 0 until the episode ends, then the episode sum.
    Events are the bucketed per-step rewards, one game point per stream.
    """

    def __init__(self, inner, table):
        self.inner = inner
        self.table = table
        self.domain = inner.domain
        self.n_actions = inner.n_actions
        self.obs_dim = inner.obs_dim
        self.n_events = table.n_events
        self.event_names = [f'gp{i}' for i in range(table.n_events)]
        self.total = 0.0

    @property
    def obs(self):
        return self.inner.obs

    def reset(self, seed=None):
        self.total = 0.0
        return self.inner.reset(seed)

    def step(self, action):
        result = self.inner.step(action)
        events = np.zeros(self.n_events, dtype=np.int64)
        streams = np.atleast_1d(result.streams if result.streams is not None else result.reward)
        for k, s in enumerate(self.table.streams):
            value = float(sum(streams[i] for i in s['source'] if i < len(streams)))
            events[bucketize(value, self.table, k)] += 1
        self.total += result.reward
        reward = self.total if result.done else 0.0
        return StepResult(result.obs, reward, events, result.done, result.streams)

    def potential(self):
        return self.inner.potential()


def sparse_episode_wrapper(inner, table):
    return SparseEpisodeWrapper(inner, table)


# ============================================================
#  SYNTHETIC SCALAR-REWARD CHAIN
# ============================================================
#
#  Dynamics, with force f from FORCES[action]:
#    v'  = 0.5 * v + 0.5 * f
#    x'  = clip(x + v', 0, L)
#    progress = 1.5 * (x' - x)
#    control  = -0.5 * f^2
#    reward   = progress + control
#  Reset: x ~ U(0, 0.1 L), v = 0. Observation [x / L, v / 2].
# ============================================================

SYNTH_FORCES = (-2.0, -1.0, 0.0, 1.0, 2.0)


class SynthRewardEnv:
    def __init__(self, seed=0, max_steps=1000, chain_length=500.0, domain='synth'):
        self.domain = domain
        self.max_steps = int(max_steps)
        self.length = float(chain_length)
        self.n_actions = len(SYNTH_FORCES)
        self.n_events = 0
        self.event_names = []
        self.obs_dim = 2
        self._seeds = np.random.default_rng(seed)
        self.x = 0.0
        self.v = 0.0
        self.t = 0
        self.obs = None

    def _observe(self):
        return np.array([self.x / self.length, self.v / 2.0])

    def reset(self, seed=None):
        if seed is None:
            seed = int(self._seeds.integers(2**31 - 1))
        rng = np.random.default_rng(seed)
        self.x = float(rng.uniform(0.0, 0.1 * self.length))
        self.v = 0.0
        self.t = 0
        self.obs = self._observe()
        return self.obs

    def step(self, action):
        if not 0 <= int(action) < self.n_actions:
            raise ValueError(f"synthetic chain: invalid action {action}")
        f = SYNTH_FORCES[int(action)]
        v = 0.5 * self.v + 0.5 * f
        x = min(max(self.x + v, 0.0), self.length)
        progress = 1.5 * (x - self.x)
        control = -0.5 * f * f
        self.x, self.v = x, v
        self.t += 1
        done = self.t >= self.max_steps
        obs = self._observe()
        self.obs = None if done else obs
        return StepResult(obs, progress + control, np.zeros(0, dtype=np.int64),
                          done, np.array([progress, control]))

    def potential(self):
        return self.x / self.length


def synth_reward_env(seed, **options):
    return SynthRewardEnv(seed=seed, **options)


# ============================================================
#  FACTORY
# ============================================================

DOMAINS = ('foraging', 'hungry_thirsty', 'fight_monster', 'synth_hopper', 'synth_swimmer')


def make_env(domain, seed=0, max_steps=None, **options):
    """Build a ready-to-reset environment for a domain id."""
    if domain not in DOMAINS:
        raise UnknownDomainError(domain)
    cfg = DOMAIN_CONFIG[domain]
    if domain in GRID_OBJECTS:
        return GridWorldEnv(domain, seed=seed, max_steps=max_steps, **options)
    inner = SynthRewardEnv(seed=seed,
                           max_steps=max_steps or HARNESS_CONFIG['synthetic']['max_ep_len'],
                           chain_length=options.get('chain_length') or cfg['chain_length'],
                           domain=domain)
    table = HOPPER_TABLE if domain == 'synth_hopper' else SWIMMER_TABLE
    return SparseEpisodeWrapper(inner, table)


# ============================================================
#  EPISODE TRACES
# ============================================================
#
#  One transition per line, tab separated:
#    step  obs_hash  action  r_ex  events  done
# ============================================================

def obs_hash(obs):
    return hashlib.sha1(np.ascontiguousarray(obs, dtype=np.float64).tobytes()).hexdigest()[:12]


def format_transition(step, obs, action, reward, events, done):
    ev = ','.join(str(int(e)) for e in events)
    return f"{step}\t{obs_hash(obs)}\t{int(action)}\t{reward:.10g}\t{ev}\t{int(bool(done))}"


def rollout_trace(env, actions, seed):
    """Play a fixed action sequence from reset(seed); returns trace lines."""
    obs = env.reset(seed)
    lines = []
    for t, action in enumerate(actions):
        result = env.step(action)
        lines.append(format_transition(t, obs, action, result.reward, result.events, result.done))
        if result.done:
            break
        obs = result.obs
    return lines


def write_trace(lines, path):
    with open(path, 'w') as f:
        for line in lines:
            f.write(line + '\n')


if __name__ == '__main__':
    if len(sys.argv) < 2:
        for d in DOMAINS:
            env = make_env(d)
            print(f"  {d:15s} actions={env.n_actions} events={env.n_events} obs_dim={env.obs_dim}")
        sys.exit(0)
    domain = sys.argv[1]
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    env = make_env(domain, seed=seed)
    rng = np.random.default_rng(seed)
    actions = rng.integers(env.n_actions, size=50)
    for line in rollout_trace(env, actions, seed):
        print(line)
