"""
Function Approximation - small MLPs over flat parameter vectors

Provides the categorical policy pi_theta, the state-value head and an
Adam-style optimizer. Every network is a plain float64 vector with a
named slice per layer, so policy-gradient vectors and parameter updates
are ordinary vector algebra.

Layer i of a network stores W_i (fan_in x fan_out, row-major) followed
by b_i. Hidden layers use ReLU; the output layer is linear (logits for
the policy, a scalar for the value head).
"""
import json

import numpy as np


class InputError(ValueError):
    """Dimension mismatch or out-of-range index."""


class NumericalError(FloatingPointError):
    """Non-finite gradient or loss."""


# ============================================================
#  NETWORK SPEC + PARAMETER VECTOR
# ============================================================

class NetSpec:
    def __init__(self, input_dim, hidden, output_dim, name='net'):
        hidden = [int(h) for h in (hidden or [])]
        if int(input_dim) < 1 or int(output_dim) < 1 or any(h < 1 for h in hidden):
            raise InputError(f"all layer widths must be >= 1: "
                             f"in={input_dim}, hidden={hidden}, out={output_dim}")
        self.input_dim = int(input_dim)
        self.hidden = hidden
        self.output_dim = int(output_dim)
        self.name = name

    @property
    def layer_dims(self):
        widths = [self.input_dim] + self.hidden + [self.output_dim]
        return list(zip(widths[:-1], widths[1:]))

    def param_count(self):
        return sum(fi * fo + fo for fi, fo in self.layer_dims)

    def to_dict(self):
        return {'input_dim': self.input_dim, 'hidden': list(self.hidden),
                'output_dim': self.output_dim, 'name': self.name}

    @classmethod
    def from_dict(cls, d):
        return cls(d['input_dim'], d['hidden'], d['output_dim'], d.get('name', 'net'))

    def __eq__(self, other):
        return isinstance(other, NetSpec) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return (f"NetSpec(in={self.input_dim}, hidden={self.hidden}, "
                f"out={self.output_dim}, name={self.name!r})")


def build_slices(spec):
    """name -> (offset, length); disjoint and covering the vector exactly."""
    slices = {}
    offset = 0
    for i, (fi, fo) in enumerate(spec.layer_dims):
        slices[f'{spec.name}.W{i}'] = (offset, fi * fo)
        offset += fi * fo
        slices[f'{spec.name}.b{i}'] = (offset, fo)
        offset += fo
    return slices


class ParamVector:
    def __init__(self, spec, values=None):
        self.spec = spec
        self.slices = build_slices(spec)
        n = spec.param_count()
        if values is None:
            values = np.zeros(n)
        values = np.array(values, dtype=np.float64)
        if values.shape != (n,):
            raise InputError(f"{spec.name}: expected {n} parameters, got {values.shape}")
        self.values = values

    def __len__(self):
        return len(self.values)

    def get(self, name):
        offset, length = self.slices[name]
        return self.values[offset:offset + length]

    def layer(self, i):
        fi, fo = self.spec.layer_dims[i]
        W = self.get(f'{self.spec.name}.W{i}').reshape(fi, fo)
        b = self.get(f'{self.spec.name}.b{i}')
        return W, b

    def with_values(self, values):
        return ParamVector(self.spec, values)

    def copy(self):
        return ParamVector(self.spec, self.values.copy())


def init_params(spec, seed):
    """Scaled-uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases."""
    rng = np.random.default_rng(seed)
    params = ParamVector(spec)
    for i, (fi, fo) in enumerate(spec.layer_dims):
        bound = 1.0 / np.sqrt(fi)
        offset, length = params.slices[f'{spec.name}.W{i}']
        params.values[offset:offset + length] = rng.uniform(-bound, bound, size=length)
    return params


# ============================================================
#  FORWARD / BACKWARD
# ============================================================

def _as_batch(params, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != params.spec.input_dim:
        raise InputError(f"{params.spec.name}: expected observations of length "
                         f"{params.spec.input_dim}, got shape {X.shape}")
    return X


def mlp_forward(params, X):
    """Batched forward pass. Returns (outputs N x out, cache for mlp_backward)."""
    X = _as_batch(params, X)
    n_layers = len(params.spec.layer_dims)
    acts = [X]
    h = X
    for i in range(n_layers):
        W, b = params.layer(i)
        z = h @ W + b
        if i < n_layers - 1:
            h = np.maximum(z, 0.0)
            acts.append(h)
        else:
            h = z
    return h, acts


def mlp_backward(params, acts, d_out, per_sample=False):
    """
    Backprop d_out (N x out) through the network.

    Returns the flat gradient summed over the batch, or an N x P matrix of
    per-sample gradients when per_sample is set.
    """
    n_layers = len(params.spec.layer_dims)
    N = d_out.shape[0]
    if per_sample:
        grad = np.zeros((N, len(params)))
    else:
        grad = np.zeros(len(params))
    delta = d_out
    for i in reversed(range(n_layers)):
        a = acts[i]
        w_off, w_len = params.slices[f'{params.spec.name}.W{i}']
        b_off, b_len = params.slices[f'{params.spec.name}.b{i}']
        if per_sample:
            grad[:, w_off:w_off + w_len] = (a[:, :, None] * delta[:, None, :]).reshape(N, -1)
            grad[:, b_off:b_off + b_len] = delta
        else:
            grad[w_off:w_off + w_len] = (a.T @ delta).ravel()
            grad[b_off:b_off + b_len] = delta.sum(axis=0)
        if i > 0:
            W, _ = params.layer(i)
            delta = (delta @ W.T) * (acts[i] > 0.0)
    return grad


def softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


# ============================================================
#  POLICY
# ============================================================

def policy_forward_batch(params, X):
    logits, _ = mlp_forward(params, X)
    return softmax(logits)


def policy_forward(params, obs):
    obs = np.asarray(obs, dtype=np.float64)
    if obs.ndim != 1:
        raise InputError(f"expected a single observation vector, got shape {obs.shape}")
    return policy_forward_batch(params, obs)[0]


def _check_actions(params, actions):
    actions = np.asarray(actions)
    n_actions = params.spec.output_dim
    if actions.size and (actions.min() < 0 or actions.max() >= n_actions):
        raise InputError(f"action index out of range [0, {n_actions})")
    return actions.astype(np.int64)


def log_prob_grad_batch(params, X, actions):
    """
    Per-sample log pi(a|s) and score vectors grad_theta log pi(a|s).

    Returns (logp: N, scores: N x P).
    """
    X = _as_batch(params, X)
    actions = _check_actions(params, np.atleast_1d(actions))
    if len(actions) != X.shape[0]:
        raise InputError(f"{X.shape[0]} observations but {len(actions)} actions")
    logits, acts = mlp_forward(params, X)
    logp_all = log_softmax(logits)
    idx = np.arange(len(actions))
    d_logits = -np.exp(logp_all)
    d_logits[idx, actions] += 1.0
    scores = mlp_backward(params, acts, d_logits, per_sample=True)
    return logp_all[idx, actions], scores


def log_prob_grad(params, obs, action):
    obs = np.asarray(obs, dtype=np.float64)
    if obs.ndim != 1:
        raise InputError(f"expected a single observation vector, got shape {obs.shape}")
    logp, scores = log_prob_grad_batch(params, obs, [action])
    return float(logp[0]), scores[0]


# ============================================================
#  VALUE HEAD
# ============================================================

def value_forward_batch(params, X):
    out, _ = mlp_forward(params, X)
    return out[:, 0]


def value_forward(params, obs):
    obs = np.asarray(obs, dtype=np.float64)
    if obs.ndim != 1:
        raise InputError(f"expected a single observation vector, got shape {obs.shape}")
    return float(value_forward_batch(params, obs)[0])


def value_grad_batch(params, X):
    """Per-sample values and gradients grad_theta V(s). Returns (N, N x P)."""
    out, acts = mlp_forward(params, X)
    grads = mlp_backward(params, acts, np.ones_like(out), per_sample=True)
    return out[:, 0], grads


def value_grad(params, obs):
    obs = np.asarray(obs, dtype=np.float64)
    if obs.ndim != 1:
        raise InputError(f"expected a single observation vector, got shape {obs.shape}")
    v, grads = value_grad_batch(params, obs)
    return float(v[0]), grads[0]


# ============================================================
#  ADAPTIVE OPTIMIZER
# ============================================================

class OptimizerState:
    def __init__(self, size, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8,
                 m=None, v=None, t=0):
        self.m = np.zeros(size) if m is None else np.array(m, dtype=np.float64)
        self.v = np.zeros(size) if v is None else np.array(v, dtype=np.float64)
        self.t = int(t)
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)

    def __len__(self):
        return len(self.m)


def adaptive_step(params, grad, state):
    """
    One bias-corrected Adam descent step. Pure: returns (new params, new state).

    params may be a ParamVector or a plain vector. A non-finite gradient
    raises NumericalError and nothing changes.
    """
    values = params.values if isinstance(params, ParamVector) else np.asarray(params, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != values.shape or len(state) != len(values):
        raise InputError(f"gradient {grad.shape} / optimizer {len(state)} "
                         f"do not match parameters {values.shape}")
    if not np.all(np.isfinite(grad)):
        raise NumericalError("non-finite gradient entries")

    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_values = values - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)

    new_state = OptimizerState(len(values), state.lr, state.beta1, state.beta2,
                               state.eps, m=m, v=v, t=t)
    if isinstance(params, ParamVector):
        return params.with_values(new_values), new_state
    return new_values, new_state


# ============================================================
#  PERSISTENCE
# ============================================================

def save_networks(path, policy, value):
    np.savez(path,
             policy=policy.values, value=value.values,
             specs=np.array(json.dumps({'policy': policy.spec.to_dict(),
                                        'value': value.spec.to_dict()})))


def load_networks(path):
    with np.load(path) as data:
        specs = json.loads(str(data['specs']))
        policy = ParamVector(NetSpec.from_dict(specs['policy']), data['policy'])
        value = ParamVector(NetSpec.from_dict(specs['value']), data['value'])
    return policy, value
