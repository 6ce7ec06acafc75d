#!/usr/bin/env python3
"""
Experiment Harness - seeded runs, sweeps and aggregation
==========================================================
One run = collect -> (MBRD) intrinsic rewards -> PPO update with the
method's reward source -> (MBRD) outer update, repeated until the step
budget is spent, with greedy extrinsic-only evaluations every
eval_interval steps.

Methods:
  mbrd   PPO on w . rho, w learned by motivation alignment
  ppo    PPO on the extrinsic reward
  cb     PPO on extrinsic + sqrt(1/n) count bonus over events
  pbrs   PPO on extrinsic + potential-based shaping

Run directory layout: <out>/<domain>/<method>/<seed>/
  config.txt    flat key=value RunConfig
  record.csv    step,mean_return,std_return[,w_0..w_n-1,cosine],train_return
  updates.csv   per-update losses (and weights / alignment for mbrd)
  policy.npz    final policy + value parameters
  warnings.txt  anything flagged during the run

A RunConfig is a flat dict built by build_config(); a RunRecord is the
dict returned by run().
"""
import multiprocessing as mp
import os
import sys

import numpy as np
import pandas as pd

from settings import (
    NETWORK_CONFIG, PPO_CONFIG, MBRD_CONFIG, BASELINE_CONFIG,
    DOMAIN_CONFIG, HARNESS_CONFIG, OUTPUT_CONFIG,
)
from envs import DOMAINS, GRID_OBJECTS, UnknownDomainError, format_transition, make_env, write_trace
from funcapprox import NetSpec, NumericalError, init_params, load_networks, policy_forward, save_networks
from inner_ppo import RolloutBuffer, collect_rollout, new_optimizers, ppo_update
from reward_design import (
    REG_MODES, CountBonusSource, ExtrinsicSource, IntrinsicSource, IntrinsicWeights,
    PotentialShapingSource, outer_step,
)
import database


class ConfigError(ValueError):
    pass


METHODS = ('mbrd', 'ppo', 'cb', 'pbrs')

GRID_OPTION_KEYS = ('size', 'delay', 'thirst_period', 'step_cost')
SYNTH_OPTION_KEYS = ('chain_length',)
# scale spellings stored under their canonical name
SCALE_ALIASES = {'full': 'paper'}

# key -> expected type; lists are layer widths
KEY_TYPES = {
    'domain': str, 'method': str, 'scale': str, 'out': str,
    'seed': int, 'total_steps': int, 'max_ep_len': int, 'update_period': int,
    'epochs': int, 'minibatch_size': int, 'eval_interval': int, 'eval_episodes': int,
    'gamma': float, 'gae_lambda': float, 'clip': float, 'value_coef': float,
    'entropy_coef': float, 'policy_lr': float, 'value_lr': float,
    'adam_beta1': float, 'adam_beta2': float, 'adam_eps': float,
    'normalize_advantages': bool, 'quiet': bool,
    'beta': float, 'reg_mode': str, 'w_init': float, 'outer_lr': float,
    'policy_hidden': list, 'value_hidden': list,
    'size': int, 'delay': int, 'thirst_period': int, 'step_cost': float,
    'chain_length': float,
}

RECORD_FILES = ('record.csv', 'updates.csv', 'warnings.txt')


# ============================================================
#  CONFIG
# ============================================================

def default_out_root():
    return os.environ.get(OUTPUT_CONFIG['out_env_var']) or OUTPUT_CONFIG['out_root']


def default_config():
    """Harness-level defaults shared by every domain and method."""
    cfg = {k: v for k, v in PPO_CONFIG.items()}
    cfg.update({
        'method': 'mbrd',
        'scale': 'paper',
        'seed': 0,
        'out': default_out_root(),
        'quiet': False,
        'beta': 1e-3,
        'reg_mode': MBRD_CONFIG['reg_mode'],
        'w_init': MBRD_CONFIG['w_init'],
        'outer_lr': MBRD_CONFIG['outer_lr'],
        'eval_interval': HARNESS_CONFIG['eval_interval'],
        'eval_episodes': HARNESS_CONFIG['eval_episodes'],
    })
    return cfg


def parse_value(text, key=None):
    """
    key=value right-hand side -> bool, int, float, list, None or str.
    String-typed keys keep the raw text; '[]' is the empty list.
    """
    s = text.strip()
    if KEY_TYPES.get(key) is str:
        return s
    if s == '[]':
        return []
    low = s.lower()
    if low in ('true', 'yes'):
        return True
    if low in ('false', 'no'):
        return False
    if low in ('none', 'null', ''):
        return None
    if ',' in s:
        return [parse_value(part) for part in s.split(',') if part.strip()]
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    return s


def load_config_file(path):
    cfg = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split('=', 1)
            key = key.strip().replace('-', '_')
            cfg[key] = parse_value(value, key)
    return cfg


def _format_value(value):
    if isinstance(value, (list, tuple)):
        if not value:
            return '[]'
        return ','.join(_format_value(v) for v in value)
    if value is None:
        return 'none'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_config_file(cfg, path):
    with open(path, 'w') as f:
        for key in sorted(cfg):
            f.write(f"{key}={_format_value(cfg[key])}\n")


def _coerce(key, value):
    kind = KEY_TYPES[key]
    if kind is list:
        value = value if isinstance(value, (list, tuple)) else [value]
        if not all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v >= 1 for v in value):
            raise ConfigError(f"{key}: layer widths must be positive integers, got {value!r}")
        return [int(v) for v in value]
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected true/false, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, bool) or not float(value).is_integer():
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return int(value)
    if kind is float:
        if isinstance(value, bool):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        return float(value)
    return str(value)


def validate_config(cfg):
    """Type-coerces in place and rejects unknown keys or out-of-range values."""
    unknown = sorted(set(cfg) - set(KEY_TYPES))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        for key in list(cfg):
            cfg[key] = _coerce(key, cfg[key])
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e

    if cfg.get('domain') not in DOMAINS:
        raise ConfigError(f"unknown domain {cfg.get('domain')!r}; choose from {', '.join(DOMAINS)}")
    if cfg['method'] in BASELINE_CONFIG and BASELINE_CONFIG[cfg['method']] is None:
        raise ConfigError(f"method {cfg['method']!r} is not implemented")
    if cfg['method'] not in METHODS:
        raise ConfigError(f"unknown method {cfg['method']!r}; choose from {', '.join(METHODS)}")
    cfg['reg_mode'] = cfg['reg_mode'].replace('-', '_')
    if cfg['reg_mode'] not in REG_MODES:
        raise ConfigError(f"reg_mode must be one of {', '.join(REG_MODES)}")
    cfg['scale'] = SCALE_ALIASES.get(cfg['scale'], cfg['scale'])
    if cfg['scale'] not in ('paper', 'desk'):
        raise ConfigError(f"scale must be paper (or full) or desk, got {cfg['scale']!r}")

    for key in ('gamma', 'gae_lambda'):
        if not 0.0 <= cfg[key] <= 1.0:
            raise ConfigError(f"{key} must be in [0, 1], got {cfg[key]}")
    for key in ('total_steps', 'max_ep_len', 'update_period', 'epochs',
                'eval_interval', 'eval_episodes'):
        if cfg[key] < 1:
            raise ConfigError(f"{key} must be >= 1, got {cfg[key]}")
    for key in ('beta', 'seed', 'minibatch_size', 'clip', 'value_coef', 'entropy_coef'):
        if cfg[key] < 0:
            raise ConfigError(f"{key} must be >= 0, got {cfg[key]}")
    for key in ('policy_lr', 'value_lr', 'outer_lr'):
        if cfg[key] <= 0:
            raise ConfigError(f"{key} must be > 0, got {cfg[key]}")

    allowed = GRID_OPTION_KEYS if cfg['domain'] in GRID_OBJECTS else SYNTH_OPTION_KEYS
    stray = [k for k in GRID_OPTION_KEYS + SYNTH_OPTION_KEYS if k in cfg and k not in allowed]
    if stray:
        raise ConfigError(f"{cfg['domain']} does not take {', '.join(stray)}")
    if cfg.get('delay', 0) < 0:
        raise ConfigError(f"delay must be >= 0, got {cfg['delay']}")
    return cfg


def build_config(domain, method='mbrd', scale='paper', config_file=None, overrides=None):
    """
    RunConfig for one run. Layers, later winning:
    harness defaults -> domain profile -> config file -> overrides.
    The desk scale divides the domain's default step budget.
    """
    if domain not in DOMAIN_CONFIG:
        raise UnknownDomainError(domain)
    dcfg = DOMAIN_CONFIG[domain]
    profile = dcfg['profile']

    cfg = default_config()
    cfg.update({k: v for k, v in HARNESS_CONFIG[profile].items()})
    cfg['policy_hidden'] = list(NETWORK_CONFIG[profile]['policy_hidden'])
    cfg['value_hidden'] = list(NETWORK_CONFIG[profile]['value_hidden'])
    cfg['domain'] = domain
    cfg['method'] = method
    cfg['scale'] = scale
    cfg['beta'] = dcfg['beta']
    cfg['total_steps'] = dcfg['total_steps']
    if scale == 'desk':
        cfg['total_steps'] = dcfg['total_steps'] // HARNESS_CONFIG['desk_divisor']
    for key in GRID_OPTION_KEYS + SYNTH_OPTION_KEYS:
        if key in dcfg:
            cfg[key] = dcfg[key]

    if config_file:
        cfg.update(load_config_file(config_file))
    if overrides:
        cfg.update({k: v for k, v in overrides.items() if v is not None})
    return validate_config(cfg)


def env_options(cfg):
    return {k: cfg[k] for k in GRID_OPTION_KEYS + SYNTH_OPTION_KEYS if k in cfg}


def run_dir(cfg):
    return os.path.join(cfg['out'], cfg['domain'], cfg['method'], str(cfg['seed']))


# ============================================================
#  EVALUATION
# ============================================================

def greedy_action(policy, obs):
    return int(np.argmax(policy_forward(policy, obs)))


def evaluate(env, policy, episodes):
    """
    Greedy rollouts scored by extrinsic reward only.
    Returns (mean, std, per-episode returns).
    """
    returns = []
    for _ in range(episodes):
        obs = env.reset()
        total = 0.0
        done = False
        while not done:
            result = env.step(greedy_action(policy, obs))
            total += result.reward
            done = result.done
            obs = result.obs
        returns.append(total)
    returns = np.array(returns)
    return float(returns.mean()), float(returns.std()), returns


def _eval_env(cfg, seed):
    return make_env(cfg['domain'], seed=seed, max_steps=cfg['max_ep_len'], **env_options(cfg))


def greedy_trace(cfg, policy, seed):
    """Trace lines for one greedy episode."""
    env = _eval_env(cfg, seed)
    obs = env.reset()
    lines = []
    t = 0
    done = False
    while not done:
        action = greedy_action(policy, obs)
        result = env.step(action)
        lines.append(format_transition(t, obs, action, result.reward, result.events, result.done))
        done = result.done
        obs = result.obs
        t += 1
    return lines


def evaluate_saved(path, episodes=None, seed=None, trace_path=None):
    """
    Re-evaluate the policy saved in a run directory.
    Returns (mean, std, returns).
    """
    cfg = validate_config(load_config_file(os.path.join(path, 'config.txt')))
    policy, _ = load_networks(os.path.join(path, 'policy.npz'))
    episodes = episodes or cfg['eval_episodes']
    seed = cfg['seed'] if seed is None else seed
    mean, std, returns = evaluate(_eval_env(cfg, seed), policy, episodes)
    if trace_path:
        write_trace(greedy_trace(cfg, policy, seed), trace_path)
    return mean, std, returns


# ============================================================
#  SINGLE RUN
# ============================================================

def reward_source_for(cfg, env, weights):
    method = cfg['method']
    if method == 'mbrd':
        return IntrinsicSource(weights)
    if method == 'cb':
        return CountBonusSource(env.n_events)
    if method == 'pbrs':
        return PotentialShapingSource(cfg['gamma'])
    return ExtrinsicSource()


def _append_csv(row, path, columns):
    pd.DataFrame([row], columns=columns).to_csv(
        path, mode='a', header=not os.path.exists(path), index=False,
        float_format='%.10g', na_rep='nan')


def _prepare_run_dir(path):
    os.makedirs(path, exist_ok=True)
    for name in RECORD_FILES:
        target = os.path.join(path, name)
        if os.path.exists(target):
            os.remove(target)


def run(cfg):
    """
    Execute one RunConfig. Returns a RunRecord dict:
      config, run_dir, status ('ok' | 'numerical_abort'), evaluations,
      updates, warnings, final_return, final_w (None unless mbrd).
    """
    cfg = validate_config(dict(cfg))
    quiet = cfg['quiet']
    path = run_dir(cfg)
    _prepare_run_dir(path)
    write_config_file(cfg, os.path.join(path, 'config.txt'))

    warnings = []

    def warn(msg):
        warnings.append(msg)
        if not quiet:
            print(f"  ⚠️  {msg}")

    init_seq, env_seq, sample_seq, eval_seq = np.random.SeedSequence(cfg['seed']).spawn(4)
    policy_seq, value_seq = init_seq.spawn(2)
    env = make_env(cfg['domain'], seed=env_seq, max_steps=cfg['max_ep_len'], **env_options(cfg))
    rng = np.random.default_rng(sample_seq)

    policy = init_params(NetSpec(env.obs_dim, cfg['policy_hidden'], env.n_actions, 'policy'), policy_seq)
    value = init_params(NetSpec(env.obs_dim, cfg['value_hidden'], 1, 'value'), value_seq)
    optimizers = new_optimizers(policy, value, cfg)

    mbrd = cfg['method'] == 'mbrd'
    weights = IntrinsicWeights(env.n_events, cfg['w_init'], cfg['outer_lr']) if mbrd else None
    source = reward_source_for(cfg, env, weights)
    buffer = RolloutBuffer(cfg['update_period'], env.obs_dim, env.n_events)

    w_cols = [f'w_{i}' for i in range(env.n_events)] if mbrd else []
    record_cols = ['step', 'mean_return', 'std_return'] + w_cols + (['cosine'] if mbrd else []) + ['train_return']
    update_cols = ['update', 'step', 'policy_loss', 'value_loss', 'entropy', 'approx_kl',
                   'clip_fraction', 'mean_reward']
    if mbrd:
        update_cols += w_cols + ['cosine', 'z_ex_norm', 'z_in_norm', 'alignment', 'reg_term',
                                 'objective', 'inner_virtual_loss', 'outer_virtual_loss']

    record_csv = os.path.join(path, 'record.csv')
    updates_csv = os.path.join(path, 'updates.csv')
    evaluations, updates = [], []
    train_returns = []
    last_cosine = float('nan')

    def evaluate_at(step):
        mean, std, _ = evaluate(_eval_env(cfg, eval_seq), policy, cfg['eval_episodes'])
        train = float(np.mean(train_returns)) if train_returns else float('nan')
        if step > 0 and not train_returns:
            warn(f"no training episode finished before step {step}; train_return is nan")
        if not (np.isfinite(mean) and np.isfinite(std)):
            warn(f"non-finite evaluation at step {step}")
        row = {'step': step, 'mean_return': mean, 'std_return': std, 'train_return': train}
        if mbrd:
            row.update({c: float(v) for c, v in zip(w_cols, weights.w)})
            row['cosine'] = last_cosine
        train_returns.clear()
        evaluations.append(row)
        _append_csv(row, record_csv, record_cols)
        if not quiet:
            print(f"  step {step:>10,d}  eval {mean:8.3f} ± {std:6.3f}  train {train:8.3f}")

    tag = f"{cfg['domain']}/{cfg['method']}/seed {cfg['seed']}"
    if not quiet:
        print("=" * 40)
        print(f"Run {tag}: {cfg['total_steps']:,} steps, update every {cfg['update_period']}")

    status = 'ok'
    steps = 0
    update = 0
    next_eval = cfg['eval_interval']
    try:
        evaluate_at(0)
        while steps < cfg['total_steps']:
            n = min(cfg['update_period'], cfg['total_steps'] - steps)
            buffer.clear()
            collect_rollout(env, policy, n, rng, buffer, track_potential=cfg['method'] == 'pbrs')
            train_returns.extend(buffer.episode_returns)
            behavior = policy
            policy, value, diag = ppo_update(buffer, source, policy, value, cfg, optimizers, rng)
            row = {'update': update, 'step': steps + n}
            row.update({k: diag[k] for k in update_cols[2:8]})
            if mbrd:
                weights, odiag = outer_step(buffer, behavior, weights, cfg['gamma'],
                                            cfg['beta'], cfg['reg_mode'])
                source.weights = weights
                if odiag['skipped']:
                    warn(f"non-finite outer gradient at update {update}; weights unchanged")
                last_cosine = odiag['cosine']
                row.update({c: float(v) for c, v in zip(w_cols, weights.w)})
                row.update({k: odiag[k] for k in update_cols[8 + len(w_cols):]})
            steps += n
            update += 1
            updates.append(row)
            _append_csv(row, updates_csv, update_cols)
            if not quiet and mbrd:
                w_txt = ' '.join(f'{v:+.3f}' for v in weights.w)
                print(f"  update {update:5d}  w=[{w_txt}]  cos {last_cosine:+.3f}")
            if steps >= next_eval:
                evaluate_at(steps)
                while next_eval <= steps:
                    next_eval += cfg['eval_interval']
        if evaluations[-1]['step'] != steps:
            evaluate_at(steps)
    except NumericalError as e:
        status = 'numerical_abort'
        warnings.append(f"numerical abort after {steps} steps: {e}")
        print(f"  ❌ {tag}: numerical abort after {steps:,} steps: {e}")

    save_networks(os.path.join(path, 'policy.npz'), policy, value)
    with open(os.path.join(path, 'warnings.txt'), 'w') as f:
        for msg in warnings:
            f.write(msg + '\n')

    final_return = evaluations[-1]['mean_return'] if evaluations else float('nan')
    if not quiet and status == 'ok':
        print(f"  ✅ {tag}: final return {final_return:.3f}")
    return {
        'config': cfg,
        'run_dir': path,
        'status': status,
        'evaluations': evaluations,
        'updates': updates,
        'warnings': warnings,
        'final_return': final_return,
        'final_w': [float(v) for v in weights.w] if mbrd else None,
    }


# ============================================================
#  RUN-POOL + EXPERIMENT GRIDS
# ============================================================

def record_runs(records, db_root):
    db_path = os.path.join(db_root, OUTPUT_CONFIG['db_name'])
    database.initialize_database(db_path)
    for rec in records:
        database.record_run(db_path, rec)
    return db_path


def run_many(configs, workers=1, db_root=None):
    """
    Run independent configs, up to `workers` at a time. Records come
    back in input order; the parent writes them to the run index.
    """
    configs = [dict(c) for c in configs]
    if workers > 1 and len(configs) > 1:
        for c in configs:
            c['quiet'] = True
        print(f"Running {len(configs)} runs on {workers} workers...")
        with mp.Pool(min(workers, len(configs))) as pool:
            records = pool.map(run, configs)
    else:
        records = [run(c) for c in configs]
    for rec in records:
        mark = '✅' if rec['status'] == 'ok' else '❌'
        cfg = rec['config']
        print(f"  {mark} {cfg['domain']}/{cfg['method']}/{cfg['seed']}: "
              f"final {rec['final_return']:.3f} ({rec['status']})")
    if db_root:
        record_runs(records, db_root)
    return records


def seed_list(seeds):
    """int n -> [0..n-1]; an explicit list is kept."""
    if isinstance(seeds, (list, tuple)):
        return [int(s) for s in seeds]
    return list(range(int(seeds)))


def grid(domains, methods, seeds, scale='paper', workers=1, out=None, config_file=None, overrides=None):
    """Every (domain, method, seed) combination; returns the records."""
    out = out or default_out_root()
    configs = []
    for domain in domains:
        for method in methods:
            for seed in seed_list(seeds):
                extra = dict(overrides or {}, seed=seed, out=out)
                configs.append(build_config(domain, method, scale, config_file, extra))
    return run_many(configs, workers, db_root=out)


def final_table(records, keys):
    """Final greedy return per group: mean, std (ddof 0), seed count, mean final w_i."""
    rows = []
    for rec in records:
        row = {k: rec['config'][k] for k in keys}
        row['final_return'] = rec['final_return']
        for i, v in enumerate(rec['final_w'] or []):
            row[f'w_{i}'] = v
        rows.append(row)
    df = pd.DataFrame(rows)
    agg = {'final_mean': ('final_return', 'mean'),
           'final_std': ('final_return', lambda s: float(np.std(s.to_numpy()))),
           'n_seeds': ('final_return', 'size')}
    for col in sorted(c for c in df.columns if c.startswith('w_')):
        agg[f'mean_{col}'] = (col, 'mean')
    return df.groupby(list(keys), sort=True).agg(**agg).reset_index()


def sweep_beta(base, betas, seeds, workers=1):
    """One run per beta per seed, each beta under <out>/beta_<b>/."""
    if not betas:
        raise ConfigError("sweep_beta needs at least one beta")
    if any(b < 0 for b in betas):
        raise ConfigError(f"beta must be >= 0, got {betas}")
    root = base['out']
    configs = []
    for beta in betas:
        for seed in seed_list(seeds):
            cfg = dict(base, beta=float(beta), seed=seed, out=os.path.join(root, f'beta_{beta:g}'))
            configs.append(validate_config(cfg))
    records = run_many(configs, workers, db_root=root)
    return records, final_table(records, ['beta'])


def sweep_episode_length(base, lengths, methods=None, seeds=5, workers=1):
    """One run per length per method per seed, each length under <out>/eplen_<L>/."""
    if not lengths:
        raise ConfigError("sweep_episode_length needs at least one length")
    methods = methods or list(METHODS)
    root = base['out']
    configs = []
    for length in lengths:
        for method in methods:
            for seed in seed_list(seeds):
                cfg = dict(base, method=method, max_ep_len=int(length), seed=seed,
                           out=os.path.join(root, f'eplen_{int(length)}'))
                configs.append(validate_config(cfg))
    records = run_many(configs, workers, db_root=root)
    return records, final_table(records, ['method', 'max_ep_len'])


# ============================================================
#  AGGREGATION
# ============================================================

def aggregate(records):
    """
    Per (method, domain, step): mean, std (ddof 0) and seed count of the
    greedy mean return. Runs of unequal length are cut to the shortest
    in their group. Output does not depend on record order.
    """
    warnings = []
    frames = []
    for i, rec in enumerate(records):
        df = pd.DataFrame(rec['evaluations'], columns=['step', 'mean_return'])
        df['method'] = rec['config']['method']
        df['domain'] = rec['config']['domain']
        df['run'] = i
        frames.append(df)
    columns = ['method', 'domain', 'step', 'mean', 'std', 'n_seeds']
    if not frames:
        out = pd.DataFrame(columns=columns)
        out.attrs['warnings'] = warnings
        return out

    data = pd.concat(frames, ignore_index=True)
    rows = []
    for (method, domain), grp in data.groupby(['method', 'domain'], sort=True):
        last = grp.groupby('run')['step'].max()
        horizon = last.min()
        if (last > horizon).any():
            msg = f"{domain}/{method}: runs of unequal length, truncated to step {horizon}"
            warnings.append(msg)
            print(f"  ⚠️  {msg}")
        kept = grp[grp['step'] <= horizon]
        for step, vals in kept.groupby('step', sort=True):
            v = np.sort(vals['mean_return'].to_numpy())
            rows.append({'method': method, 'domain': domain, 'step': int(step),
                         'mean': float(v.mean()), 'std': float(v.std()), 'n_seeds': len(v)})
    out = pd.DataFrame(rows, columns=columns)
    out.attrs['warnings'] = warnings
    return out


def load_record(path):
    """Rebuild a RunRecord (without updates) from a run directory."""
    cfg = validate_config(load_config_file(os.path.join(path, 'config.txt')))
    evals = pd.read_csv(os.path.join(path, 'record.csv'))
    return {'config': cfg, 'run_dir': path, 'status': 'ok',
            'evaluations': evals.to_dict('records'), 'updates': [], 'warnings': [],
            'final_return': float(evals['mean_return'].iloc[-1]) if len(evals) else float('nan'),
            'final_w': None}


if __name__ == '__main__':
    domain = sys.argv[1] if len(sys.argv) > 1 else 'foraging'
    method = sys.argv[2] if len(sys.argv) > 2 else 'mbrd'
    rec = run(build_config(domain, method, 'desk', overrides={'total_steps': 20480}))
    print(rec['final_return'], rec['final_w'])
