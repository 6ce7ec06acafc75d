"""
Inner Optimization - on-policy rollouts + clipped-surrogate PPO

The inner learner maximizes whatever reward stream it is handed: the
extrinsic reward, the learned intrinsic reward w . rho, or an extrinsic
reward plus a count bonus or potential-based shaping term. The reward
source is any object with a rewards(buffer) method (see reward_design)
or a plain reward array.

Advantages use GAE(lambda); Monte-Carlo returns (mc_returns) are kept
for the motivation vectors in reward_design.
"""
import numpy as np

from funcapprox import (
    NumericalError, OptimizerState, adaptive_step, log_softmax, mlp_backward,
    mlp_forward, policy_forward, value_forward_batch,
)


# ============================================================
#  ROLLOUT BUFFER
# ============================================================

class RolloutBuffer:
    """
    Fixed-capacity on-policy buffer. Each fill is consumed by exactly one
    update and then cleared. Holds r_ex alongside the events, so one buffer
    serves both the policy update and the reward-weight update.
    """

    def __init__(self, capacity, obs_dim, n_events):
        self.capacity = int(capacity)
        self.obs_dim = int(obs_dim)
        self.n_events = int(n_events)
        self.obs = np.zeros((capacity, obs_dim))
        self.next_obs = np.zeros((capacity, obs_dim))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards_ex = np.zeros(capacity)
        self.events = np.zeros((capacity, n_events), dtype=np.int64)
        self.dones = np.zeros(capacity, dtype=bool)
        self.logps = np.zeros(capacity)
        self.potentials = np.zeros(capacity)
        self.next_potentials = np.zeros(capacity)
        self.episode_returns = []
        # extrinsic return of the episode still running when the fill ended
        self.partial_return = 0.0
        self.size = 0
        self.consumed = False

    def __len__(self):
        return self.size

    def is_full(self):
        return self.size == self.capacity

    def add(self, obs, action, reward, next_obs, events, done, logp,
            potential=0.0, next_potential=0.0):
        if self.size >= self.capacity:
            raise RuntimeError("rollout buffer is full")
        if not np.isfinite(logp):
            raise NumericalError(f"non-finite behavior log-probability at step {self.size}")
        i = self.size
        self.obs[i] = obs
        self.actions[i] = action
        self.rewards_ex[i] = reward
        self.next_obs[i] = next_obs
        self.events[i] = events
        self.dones[i] = done
        self.logps[i] = logp
        self.potentials[i] = potential
        self.next_potentials[i] = next_potential
        self.size += 1

    def view(self, name):
        return getattr(self, name)[:self.size]

    def mark_consumed(self):
        if self.consumed:
            raise RuntimeError("rollout buffer already consumed by an update")
        self.consumed = True

    def clear(self):
        self.size = 0
        self.consumed = False
        self.episode_returns = []


# ============================================================
#  COLLECTION
# ============================================================

def sample_action(probs, rng):
    a = int(np.searchsorted(np.cumsum(probs), rng.random() * probs.sum(), side='right'))
    return min(a, len(probs) - 1)


def collect_rollout(env, policy, steps, rng, buffer=None, track_potential=False):
    """
    Run the policy for exactly `steps` transitions, continuing the env's
    current episode and resetting it whenever one ends. The stored
    log-probabilities are those of the behavior policy at storage time.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if buffer is None:
        buffer = RolloutBuffer(steps, env.obs_dim, env.n_events)
    if len(buffer) != 0:
        raise RuntimeError("collect_rollout needs an empty buffer")
    if steps > buffer.capacity:
        raise ValueError(f"steps={steps} exceeds buffer capacity {buffer.capacity}")

    obs = env.obs if env.obs is not None else env.reset()
    running = buffer.partial_return
    for _ in range(steps):
        probs = policy_forward(policy, obs)
        action = sample_action(probs, rng)
        phi = env.potential() if track_potential else 0.0
        result = env.step(action)
        phi_next = env.potential() if track_potential and not result.done else 0.0
        buffer.add(obs, action, result.reward, result.obs, result.events, result.done,
                   np.log(probs[action]), phi, phi_next)
        running += result.reward
        if result.done:
            buffer.episode_returns.append(running)
            running = 0.0
            obs = env.reset()
        else:
            obs = result.obs
    buffer.partial_return = running
    return buffer


# ============================================================
#  RETURNS + ADVANTAGES
# ============================================================

def mc_returns(rewards, dones, gamma):
    """
    G_t = sum_{i>=t} gamma^(i-t) r_i within each episode. Works on N or
    N x k rewards; a trailing partial episode is summed to the buffer end.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    rewards = np.asarray(rewards, dtype=np.float64)
    dones = np.asarray(dones, dtype=bool)
    returns = np.zeros_like(rewards)
    running = np.zeros(rewards.shape[1:])
    for t in reversed(range(len(rewards))):
        if dones[t]:
            running = np.zeros(rewards.shape[1:])
        running = rewards[t] + gamma * running
        returns[t] = running
    return returns


def gae_advantages(buffer, value, gamma, lam, rewards=None, source='extrinsic',
                   normalize=True):
    """
    Generalized advantage estimates against `rewards` (default r_ex).

    Returns dict: advantages (normalized if asked), raw_advantages,
    returns (value targets = raw advantage + baseline), source.
    """
    if not (0.0 <= gamma <= 1.0 and 0.0 <= lam <= 1.0):
        raise ValueError(f"gamma and lambda must be in [0, 1], got {gamma}, {lam}")
    n = len(buffer)
    if rewards is None:
        rewards = buffer.view('rewards_ex')
    rewards = np.asarray(rewards, dtype=np.float64)
    dones = buffer.view('dones')
    values = value_forward_batch(value, buffer.view('obs'))
    next_values = value_forward_batch(value, buffer.view('next_obs')) * (~dones)

    deltas = rewards + gamma * next_values - values
    raw = np.zeros(n)
    running = 0.0
    for t in reversed(range(n)):
        if dones[t]:
            running = 0.0
        running = deltas[t] + gamma * lam * running
        raw[t] = running

    advantages = raw
    if normalize and n > 1:
        advantages = (raw - raw.mean()) / (raw.std() + 1e-8)
    batch = {
        'advantages': advantages,
        'raw_advantages': raw,
        'returns': raw + values,
        'source': source,
    }
    for key in ('advantages', 'returns'):
        if not np.all(np.isfinite(batch[key])):
            raise NumericalError(f"non-finite {key} in advantage batch")
    return batch


# ============================================================
#  PPO UPDATE
# ============================================================

def clipped_surrogate(logp, old_logp, advantages, clip):
    """
    Per-sample min(ratio * A, clip(ratio, 1-eps, 1+eps) * A) and its
    derivative with respect to logp.
    """
    ratio = np.exp(logp - old_logp)
    unclipped = ratio * advantages
    clipped = np.clip(ratio, 1.0 - clip, 1.0 + clip) * advantages
    objective = np.minimum(unclipped, clipped)
    # gradient flows only where the unclipped branch is the active minimum
    active = unclipped <= clipped
    d_logp = np.where(active, unclipped, 0.0)
    return objective, d_logp


def surrogate_objective(policy, X, actions, old_logp, advantages, clip, entropy_coef=0.0):
    """Mean clipped surrogate (+ entropy bonus) and its gradient over the policy."""
    logits, acts = mlp_forward(policy, X)
    logp_all = log_softmax(logits)
    probs = np.exp(logp_all)
    idx = np.arange(len(actions))
    logp = logp_all[idx, actions]
    per_sample, d_logp = clipped_surrogate(logp, old_logp, advantages, clip)
    n = len(actions)

    d_logits = -probs * d_logp[:, None]
    d_logits[idx, actions] += d_logp
    entropy = -(probs * logp_all).sum(axis=1)
    objective = per_sample.mean()
    if entropy_coef:
        objective += entropy_coef * entropy.mean()
        d_logits += entropy_coef * (-probs * (logp_all + entropy[:, None]))
    grad = mlp_backward(policy, acts, d_logits / n)
    info = {
        'entropy': float(entropy.mean()),
        'approx_kl': float(np.mean(old_logp - logp)),
        'clip_fraction': float(np.mean(np.abs(np.exp(logp - old_logp) - 1.0) > clip)),
    }
    return objective, grad, info


def value_loss(value, X, targets, value_coef=0.5):
    """value_coef * mean squared error and its gradient."""
    out, acts = mlp_forward(value, X)
    err = out[:, 0] - targets
    loss = value_coef * np.mean(err ** 2)
    d_out = (2.0 * value_coef / len(targets)) * err[:, None]
    return loss, mlp_backward(value, acts, d_out)


def new_optimizers(policy, value, config):
    return {
        'policy': OptimizerState(len(policy), config['policy_lr'], config['adam_beta1'],
                                 config['adam_beta2'], config['adam_eps']),
        'value': OptimizerState(len(value), config['value_lr'], config['adam_beta1'],
                                config['adam_beta2'], config['adam_eps']),
    }


def resolve_rewards(reward_source, buffer):
    if isinstance(reward_source, np.ndarray):
        return reward_source[:len(buffer)], 'array'
    return reward_source.rewards(buffer), reward_source.name


def ppo_update(buffer, reward_source, policy, value, config, optimizers, rng=None):
    """
    Clipped-surrogate ascent on the policy and squared-error descent on
    the value head for config['epochs'] epochs over the buffer.

    `optimizers` is a dict {'policy', 'value'} of OptimizerState; its
    entries are replaced by the advanced states. On NumericalError the
    caller's parameters and optimizer entries are left untouched.

    Returns (policy, value, diagnostics).
    """
    buffer.mark_consumed()
    rewards, source = resolve_rewards(reward_source, buffer)
    batch = gae_advantages(buffer, value, config['gamma'], config['gae_lambda'],
                           rewards=rewards, source=source,
                           normalize=config.get('normalize_advantages', True))
    X = buffer.view('obs')
    actions = buffer.view('actions')
    old_logp = buffer.view('logps')
    advantages = batch['advantages']
    targets = batch['returns']
    n = len(buffer)

    mb = int(config.get('minibatch_size') or 0)
    if mb <= 0 or mb >= n:
        mb = n
    if mb < n and rng is None:
        rng = np.random.default_rng(0)

    p_opt, v_opt = optimizers['policy'], optimizers['value']
    surrogates, v_losses = [], []
    info = {}
    for _ in range(int(config['epochs'])):
        order = rng.permutation(n) if mb < n else np.arange(n)
        for start in range(0, n, mb):
            idx = order[start:start + mb]
            obj, p_grad, info = surrogate_objective(policy, X[idx], actions[idx], old_logp[idx],
                                                    advantages[idx], config['clip'],
                                                    config.get('entropy_coef', 0.0))
            v_loss, v_grad = value_loss(value, X[idx], targets[idx], config['value_coef'])
            if not (np.isfinite(obj) and np.isfinite(v_loss)):
                raise NumericalError(f"non-finite PPO loss (surrogate={obj}, value={v_loss})")
            policy, p_opt = adaptive_step(policy, -p_grad, p_opt)
            value, v_opt = adaptive_step(value, v_grad, v_opt)
            surrogates.append(obj)
            v_losses.append(v_loss)

    optimizers['policy'], optimizers['value'] = p_opt, v_opt
    diagnostics = {
        'source': source,
        'policy_loss': float(-np.mean(surrogates)),
        'value_loss': float(np.mean(v_losses)),
        'entropy': info.get('entropy', float('nan')),
        'approx_kl': info.get('approx_kl', float('nan')),
        'clip_fraction': info.get('clip_fraction', float('nan')),
        'mean_reward': float(np.mean(rewards)),
    }
    return policy, value, diagnostics
