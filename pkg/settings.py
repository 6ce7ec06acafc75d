"""
Settings loader: config.py when present, config_example.py otherwise.
"""
try:
    from config import (
        NETWORK_CONFIG, PPO_CONFIG, MBRD_CONFIG, BASELINE_CONFIG,
        DOMAIN_CONFIG, HARNESS_CONFIG, OUTPUT_CONFIG,
    )
    CONFIG_SOURCE = 'config.py'
except ImportError:
    from config_example import (
        NETWORK_CONFIG, PPO_CONFIG, MBRD_CONFIG, BASELINE_CONFIG,
        DOMAIN_CONFIG, HARNESS_CONFIG, OUTPUT_CONFIG,
    )
    CONFIG_SOURCE = 'config_example.py'
