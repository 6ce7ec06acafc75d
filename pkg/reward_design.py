"""
Reward Design - motivation alignment of a linear intrinsic reward

Intrinsic reward is linear in the event vector: r_in = w . rho.

Motivations are policy gradients of two virtual objectives, estimated
from one on-policy batch with Monte-Carlo returns (no baseline):

    z_ex = (1/N) sum_t grad log pi(a_t|s_t) * G_ex_t
    z_in = (1/N) sum_t grad log pi(a_t|s_t) * G_in_t,   G_in_t = w . Grho_t

where Grho_t is the discounted future event count. The reward weights
ascend the alignment objective

    J_o(w) = z_ex . z_in - beta * reg(w)

with reg = ||z_in|| (z_norm) or ||w - w_init||^2 (weight_anchor). Since
z_in = M w with M = (1/N) sum_t score_t (x) Grho_t, the first gradient
term M^T z_ex is contracted per sample and M is never built.

Also here: the count-based bonus (CB) and potential-based shaping
(PBRS) baselines, and the reward-source objects handed to inner_ppo.
"""
import numpy as np

from funcapprox import InputError, NumericalError, OptimizerState, adaptive_step, log_prob_grad_batch
from inner_ppo import mc_returns

REG_MODES = ('z_norm', 'weight_anchor')
NORM_FLOOR = 1e-12


# ============================================================
#  INTRINSIC REWARD + EVENT RETURNS
# ============================================================

def intrinsic_reward(w, rho):
    """w . rho for one event vector, or per row for an N x n matrix."""
    w = np.asarray(w, dtype=np.float64)
    rho = np.asarray(rho, dtype=np.float64)
    if rho.shape[-1] != w.shape[0]:
        raise InputError(f"event vector of length {rho.shape[-1]} vs {w.shape[0]} weights")
    return rho @ w


def event_returns(buffer, gamma):
    """Grho_t: per-channel discounted future event counts within each episode."""
    return mc_returns(buffer.view('events'), buffer.view('dones'), gamma)


# ============================================================
#  MOTIVATIONS
# ============================================================

def motivation(scores, returns, weights=None):
    """
    Score-function gradient from per-sample scores (N x P) and returns (N).
    Batch mean by default; with `weights` the weighted sum (exact expectations).
    """
    returns = np.asarray(returns, dtype=np.float64)
    if weights is None:
        return scores.T @ returns / len(returns)
    return scores.T @ (np.asarray(weights) * returns)


def batch_scores(buffer, policy):
    _, scores = log_prob_grad_batch(policy, buffer.view('obs'), buffer.view('actions'))
    return scores


def motivation_ex(buffer, policy, gamma, scores=None):
    if len(buffer) == 0:
        raise ValueError("motivation needs a non-empty buffer")
    if scores is None:
        scores = batch_scores(buffer, policy)
    g_ex = mc_returns(buffer.view('rewards_ex'), buffer.view('dones'), gamma)
    return motivation(scores, g_ex)


def motivation_in(buffer, policy, w, gamma, scores=None):
    if len(buffer) == 0:
        raise ValueError("motivation needs a non-empty buffer")
    if scores is None:
        scores = batch_scores(buffer, policy)
    g_in = intrinsic_reward(_weights_of(w), event_returns(buffer, gamma))
    return motivation(scores, g_in)


def alignment_cosine(z_ex, z_in):
    """cos of the angle between motivations; 0 when either is (near) zero."""
    n_ex = np.linalg.norm(z_ex)
    n_in = np.linalg.norm(z_in)
    if n_ex < NORM_FLOOR or n_in < NORM_FLOOR:
        return 0.0
    return float(np.dot(z_ex, z_in) / (n_ex * n_in))


# ============================================================
#  OUTER OBJECTIVE + GRADIENT
# ============================================================

def _weights_of(w):
    return w.w if isinstance(w, IntrinsicWeights) else np.asarray(w, dtype=np.float64)


def _anchor_of(w, w_init):
    if w_init is not None:
        return np.asarray(w_init, dtype=np.float64)
    if isinstance(w, IntrinsicWeights):
        return w.w_init
    return np.zeros_like(_weights_of(w))


def _check_parts(scores, g_ex, g_rho, w):
    if g_rho.ndim != 2 or g_rho.shape[1] != len(w):
        raise InputError(f"event returns {g_rho.shape} vs {len(w)} weights")
    if not (scores.shape[0] == len(g_ex) == g_rho.shape[0]):
        raise InputError(f"batch sizes differ: scores {scores.shape[0]}, "
                         f"G_ex {len(g_ex)}, Grho {g_rho.shape[0]}")


def _project(scores, vec, weights):
    """(1/N) sum_t (vec . score_t) * per-sample row, as the weight vector for Grho."""
    s = scores @ vec
    if weights is None:
        return s / len(s)
    return s * np.asarray(weights)


def outer_parts(scores, g_ex, g_rho, w, w_init, beta, reg_mode, weights=None):
    """
    Everything the outer step needs from one batch.

    Returns dict: grad (dJ_o/dw), z_ex, z_in, cosine, reg_value, reg_grad,
    alignment (z_ex . z_in), objective (J_o).
    """
    if reg_mode not in REG_MODES:
        raise ValueError(f"reg_mode must be one of {REG_MODES}, got {reg_mode!r}")
    w = np.asarray(w, dtype=np.float64)
    g_ex = np.asarray(g_ex, dtype=np.float64)
    g_rho = np.asarray(g_rho, dtype=np.float64)
    _check_parts(scores, g_ex, g_rho, w)

    z_ex = motivation(scores, g_ex, weights)
    z_in = motivation(scores, g_rho @ w, weights)
    first = g_rho.T @ _project(scores, z_ex, weights)

    if reg_mode == 'z_norm':
        norm = np.linalg.norm(z_in)
        reg_value = norm
        if norm < NORM_FLOOR:
            reg_grad = np.zeros_like(w)
        else:
            reg_grad = g_rho.T @ _project(scores, z_in, weights) / norm
    else:
        diff = w - np.asarray(w_init, dtype=np.float64)
        reg_value = float(diff @ diff)
        reg_grad = 2.0 * diff

    grad = first - beta * reg_grad
    if not np.all(np.isfinite(grad)):
        raise NumericalError("non-finite outer gradient")
    alignment = float(z_ex @ z_in)
    return {
        'grad': grad,
        'alignment_grad': first,
        'z_ex': z_ex,
        'z_in': z_in,
        'cosine': alignment_cosine(z_ex, z_in),
        'alignment': alignment,
        'reg_value': float(reg_value),
        'reg_grad': reg_grad,
        'objective': alignment - beta * float(reg_value),
    }


def outer_objective(scores, g_ex, g_rho, w, w_init, beta, reg_mode, weights=None):
    """J_o(w) = z_ex . z_in - beta * reg(w)."""
    w = np.asarray(w, dtype=np.float64)
    z_ex = motivation(scores, g_ex, weights)
    z_in = motivation(scores, np.asarray(g_rho) @ w, weights)
    if reg_mode == 'z_norm':
        reg = np.linalg.norm(z_in)
    elif reg_mode == 'weight_anchor':
        diff = w - np.asarray(w_init, dtype=np.float64)
        reg = diff @ diff
    else:
        raise ValueError(f"reg_mode must be one of {REG_MODES}, got {reg_mode!r}")
    return float(z_ex @ z_in - beta * reg)


def outer_grad(buffer, policy, w, gamma, beta, reg_mode, w_init=None, scores=None):
    """dJ_o/dw for one batch (length n)."""
    w_vec = _weights_of(w)
    if scores is None:
        scores = batch_scores(buffer, policy)
    g_ex = mc_returns(buffer.view('rewards_ex'), buffer.view('dones'), gamma)
    g_rho = event_returns(buffer, gamma)
    parts = outer_parts(scores, g_ex, g_rho, w_vec, _anchor_of(w, w_init), beta, reg_mode)
    grad = parts['grad']
    if isinstance(w, IntrinsicWeights):
        grad = w.jacobian().T @ grad
    return grad


# ============================================================
#  INTRINSIC WEIGHTS + OUTER UPDATE
# ============================================================

class IntrinsicWeights:
    """
    Learned reward weights with their regularization anchor and optimizer.

    The weights are their own parameters (phi = w); jacobian() is the
    d w / d phi hook for a deeper parameterization.
    """

    def __init__(self, n, w_init=0.1, lr=1e-3, w=None):
        self.w_init = np.full(n, float(w_init)) if np.isscalar(w_init) else np.array(w_init, dtype=np.float64)
        self.w = self.w_init.copy() if w is None else np.array(w, dtype=np.float64)
        if self.w.shape != (n,) or self.w_init.shape != (n,):
            raise InputError(f"intrinsic weights must have length {n}")
        self.opt = OptimizerState(n, lr)
        self.skipped = 0

    def __len__(self):
        return len(self.w)

    def jacobian(self):
        return np.eye(len(self.w))

    def copy(self):
        other = IntrinsicWeights(len(self.w), self.w_init, self.opt.lr, self.w)
        other.opt = OptimizerState(len(self.w), self.opt.lr, self.opt.beta1, self.opt.beta2,
                                   self.opt.eps, self.opt.m, self.opt.v, self.opt.t)
        other.skipped = self.skipped
        return other


def outer_update(weights, grad, state=None):
    """
    One adaptive ascent step on J_o. Returns new IntrinsicWeights; a
    non-finite gradient skips the step with a warning.
    """
    new = weights.copy()
    if state is not None:
        new.opt = state
    try:
        new.w, new.opt = adaptive_step(new.w, -np.asarray(grad, dtype=np.float64), new.opt)
    except NumericalError as e:
        print(f"  ⚠️  outer update skipped: {e}")
        new.skipped += 1
    return new


def virtual_losses(scores_logp, g_in, g_ex):
    """-(1/N) sum log pi * G for the intrinsic and extrinsic virtual agents."""
    return float(-np.mean(scores_logp * g_in)), float(-np.mean(scores_logp * g_ex))


def outer_step(buffer, policy, weights, gamma, beta, reg_mode):
    """
    Full outer update on one batch under the behavior policy that
    collected it. Returns (new IntrinsicWeights, diagnostics dict).
    """
    logp, scores = log_prob_grad_batch(policy, buffer.view('obs'), buffer.view('actions'))
    g_ex = mc_returns(buffer.view('rewards_ex'), buffer.view('dones'), gamma)
    g_rho = event_returns(buffer, gamma)
    parts = outer_parts(scores, g_ex, g_rho, weights.w, weights.w_init, beta, reg_mode)
    grad = weights.jacobian().T @ parts['grad']
    new = outer_update(weights, grad)
    inner_loss, outer_loss = virtual_losses(logp, g_rho @ weights.w, g_ex)
    diagnostics = {
        'cosine': parts['cosine'],
        'z_ex_norm': float(np.linalg.norm(parts['z_ex'])),
        'z_in_norm': float(np.linalg.norm(parts['z_in'])),
        'alignment': parts['alignment'],
        'reg_term': float(beta * parts['reg_value']),
        'objective': parts['objective'],
        'inner_virtual_loss': inner_loss,
        'outer_virtual_loss': outer_loss,
        'skipped': new.skipped > weights.skipped,
    }
    return new, diagnostics


# ============================================================
#  COUNT-BASED BONUS (CB)
# ============================================================

class EventCounts:
    """Lifetime occurrence count per event channel."""

    def __init__(self, n):
        self.counts = np.zeros(n, dtype=np.int64)

    def __len__(self):
        return len(self.counts)


def count_bonus(counts, rho):
    """
    Adds this step's events to the counts, then returns
    sum over triggered channels of sqrt(1 / count_i).
    """
    rho = np.asarray(rho, dtype=np.int64)
    if rho.shape != counts.counts.shape:
        raise InputError(f"event vector {rho.shape} vs counts {counts.counts.shape}")
    counts.counts += rho
    hit = rho > 0
    if not hit.any():
        return 0.0
    return float(np.sum(np.sqrt(1.0 / counts.counts[hit])))


# ============================================================
#  POTENTIAL-BASED SHAPING (PBRS)
# ============================================================

def pbrs_terms(phi, phi_next, dones, gamma):
    """F = gamma * phi(s') - phi(s), with phi(s') = 0 on terminal transitions."""
    phi = np.asarray(phi, dtype=np.float64)
    phi_next = np.where(np.asarray(dones, dtype=bool), 0.0, np.asarray(phi_next, dtype=np.float64))
    return gamma * phi_next - phi


def pbrs_shape(potential, s, s_next, gamma, done):
    return float(pbrs_terms(potential(s), potential(s_next), done, gamma))


# ============================================================
#  REWARD SOURCES FOR THE INNER LEARNER
# ============================================================

class ExtrinsicSource:
    name = 'extrinsic'

    def rewards(self, buffer):
        return buffer.view('rewards_ex').copy()


class IntrinsicSource:
    """w . rho per step; never reads r_ex."""
    name = 'intrinsic'

    def __init__(self, weights):
        self.weights = weights

    def rewards(self, buffer):
        return intrinsic_reward(_weights_of(self.weights), buffer.view('events'))


class CountBonusSource:
    """r_ex + sqrt(1/n) bonus; counts accumulate over the whole run."""
    name = 'extrinsic+bonus'

    def __init__(self, n_events):
        self.counts = EventCounts(n_events)

    def rewards(self, buffer):
        events = buffer.view('events')
        bonus = np.array([count_bonus(self.counts, rho) for rho in events])
        return buffer.view('rewards_ex') + bonus


class PotentialShapingSource:
    """r_ex + gamma * phi(s') - phi(s) from potentials stored at collection."""
    name = 'extrinsic+pbrs'

    def __init__(self, gamma):
        self.gamma = gamma

    def rewards(self, buffer):
        shaping = pbrs_terms(buffer.view('potentials'), buffer.view('next_potentials'),
                             buffer.view('dones'), self.gamma)
        return buffer.view('rewards_ex') + shaping
