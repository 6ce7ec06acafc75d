"""
Configuration settings for the Motivation-Based Reward Design trainer

Copy this file to config.py and edit to override defaults:
    cp config_example.py config.py

Anything not overridden in config.py must still be present there, the
loader picks one file or the other, it does not merge them.
"""

# NETWORK SETTINGS
# Separate policy and value networks, ReLU on hidden layers.
NETWORK_CONFIG = {
    'grid': {
        'policy_hidden': [8, 8],
        'value_hidden': [32, 32],
    },
    'synthetic': {
        'policy_hidden': [64, 64],
        'value_hidden': [64, 64],
    },
}

# INNER PPO SETTINGS
PPO_CONFIG = {
    'clip': 0.2,
    'gae_lambda': 0.95,
    'value_coef': 0.5,
    'entropy_coef': 0.0,
    'policy_lr': 1e-3,
    'value_lr': 1e-3,
    'adam_beta1': 0.9,
    'adam_beta2': 0.999,
    'adam_eps': 1e-8,
    'minibatch_size': 0,            # 0 = full batch
    'normalize_advantages': True,
}

# OUTER (REWARD DESIGN) SETTINGS
MBRD_CONFIG = {
    'w_init': 0.1,
    'outer_lr': 1e-3,
    'reg_mode': 'weight_anchor',    # or 'z_norm'
}

# BASELINES
# LIRPG meta-gradients through the full PPO update are not implemented.
BASELINE_CONFIG = {
    'methods': ['mbrd', 'ppo', 'cb', 'pbrs'],
    'lirpg': None,
}

# DOMAIN SETTINGS
# 'profile' picks the harness defaults block below.
DOMAIN_CONFIG = {
    'foraging': {
        'profile': 'grid',
        'size': 5,
        'delay': 10,
        'beta': 1e-3,
        'total_steps': 2_000_000,
        'event_names': ['eat_apple', 'eat_poison'],
        'potential': 'distance to apple',
    },
    'hungry_thirsty': {
        'profile': 'grid',
        'size': 5,
        'thirst_period': 5,
        'beta': 1e-2,
        'total_steps': 4_000_000,
        'event_names': ['eat', 'drink'],
        'potential': 'distance to nearest of food, water',
    },
    'fight_monster': {
        'profile': 'grid',
        'size': 5,
        'step_cost': 0.0,
        'beta': 1e-3,
        'total_steps': 2_000_000,
        'event_names': ['get_buff', 'get_debuff', 'win', 'lose', 'draw'],
        'potential': 'distance to weapon, then monster',
    },
    'synth_hopper': {
        'profile': 'synthetic',
        'chain_length': 500.0,
        'beta': 1e-3,
        'total_steps': 3_000_000,
        'event_names': [f'gp{i}' for i in range(11)],
        'potential': 'normalized position',
    },
    'synth_swimmer': {
        'profile': 'synthetic',
        'chain_length': 500.0,
        'beta': 1e-3,
        'total_steps': 3_000_000,
        'event_names': [f'gp{i}' for i in range(8)],
        'potential': 'normalized position',
    },
}

# HARNESS SETTINGS
HARNESS_CONFIG = {
    'grid': {
        'gamma': 0.999,
        'max_ep_len': 200,
        'update_period': 1024,
        'epochs': 50,
    },
    'synthetic': {
        'gamma': 0.99,
        'max_ep_len': 1000,
        'update_period': 20000,
        'epochs': 5,
        'minibatch_size': 1024,
    },
    'eval_interval': 10240,
    'eval_episodes': 20,
    'seeds': 5,
    'desk_divisor': 4,
    'workers': 4,
}

# OUTPUT SETTINGS
OUTPUT_CONFIG = {
    'out_root': 'out',
    'out_env_var': 'MBRD_OUT',
    'db_name': 'runs.db',
}
