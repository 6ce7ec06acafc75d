#!/usr/bin/env python3
"""
RUN REPORT
=================================
Summarizes the run index (runs.db) of an output directory:

  - final greedy return per (domain, method) with a 95% interval
  - learned-weight sign checks for MBRD runs, as a fraction of seeds
    with a Wilson interval
  - MBRD vs plain PPO on mean final return
  - the beta = 0 ablation against the default beta, when both exist

WEIGHT CHECKS (one per domain, pass at >= 80% of seeds):

  foraging        w[eat_apple] > 0 and w[eat_poison] < 0
  hungry_thirsty  w[drink] > 0 (drinking carries no extrinsic reward)
  fight_monster   w[get_buff] > 0

Usage:
    python3 report.py out/              # print + save out/report.txt
"""

import math
import os
import sys
from datetime import datetime

import numpy as np
import pandas as pd

from settings import DOMAIN_CONFIG, OUTPUT_CONFIG
import database


PASS_FRACTION = 0.8


def _w(run, domain, event):
    return run['final_w'][DOMAIN_CONFIG[domain]['event_names'].index(event)]


WEIGHT_CHECKS = [
    {
        'domain': 'foraging',
        'description': 'w[eat_apple] > 0 and w[eat_poison] < 0',
        'check_fn': lambda r: _w(r, 'foraging', 'eat_apple') > 0 and _w(r, 'foraging', 'eat_poison') < 0,
    },
    {
        'domain': 'hungry_thirsty',
        'description': 'w[drink] > 0',
        'check_fn': lambda r: _w(r, 'hungry_thirsty', 'drink') > 0,
    },
    {
        'domain': 'fight_monster',
        'description': 'w[get_buff] > 0',
        'check_fn': lambda r: _w(r, 'fight_monster', 'get_buff') > 0,
    },
]


# ============================================================
#  STATISTICAL HELPERS
# ============================================================

def confidence_interval(values, confidence=0.95):
    """Mean and t-style interval; (mean, None, None) below two values."""
    n = len(values)
    if n == 0:
        return None, None, None
    mean = float(np.mean(values))
    if n < 2:
        return mean, None, None
    std_err = float(np.std(values, ddof=1)) / math.sqrt(n)

    # small-sample t quantiles at 95%
    if n > 120:
        z = 1.96
    elif n > 30:
        z = 2.04
    elif n > 10:
        z = 2.23
    elif n > 4:
        z = 2.78
    else:
        z = 4.30
    return mean, mean - z * std_err, mean + z * std_err


def win_rate_ci(wins, total, confidence=0.95):
    """Wilson score interval for a fraction of seeds."""
    if total == 0:
        return 0, 0, 0

    p = wins / total
    z = 1.96

    denominator = 1 + z**2 / total
    centre = p + z**2 / (2 * total)
    spread = z * math.sqrt((p * (1 - p) + z**2 / (4 * total)) / total)

    return p, (centre - spread) / denominator, (centre + spread) / denominator


def _fmt_ci(lo, hi):
    if lo is None:
        return '       n/a        '
    return f"[{lo:+7.3f}, {hi:+7.3f}]"


# ============================================================
#  SECTIONS
# ============================================================

def returns_section(runs):
    lines = ["  FINAL GREEDY RETURN", "  " + "-" * 60]
    df = pd.DataFrame(runs)
    for (domain, method), grp in df.groupby(['domain', 'method'], sort=True):
        vals = grp['final_return'].dropna().to_list()
        mean, lo, hi = confidence_interval(vals)
        failed = int((grp['status'] != 'ok').sum())
        note = f"  ({failed} aborted)" if failed else ''
        mean_txt = f"{mean:+8.3f}" if mean is not None else '     n/a'
        lines.append(f"    {domain:<15s} {method:<5s} n={len(vals):2d}  "
                     f"mean {mean_txt}  95% CI {_fmt_ci(lo, hi)}{note}")
    lines.append("")
    return lines


def weight_section(runs, beta=None):
    lines = ["  LEARNED WEIGHT SIGNS (MBRD)", "  " + "-" * 60]
    for check in WEIGHT_CHECKS:
        mine = [r for r in runs if r['domain'] == check['domain'] and r['method'] == 'mbrd'
                and r['final_w'] is not None and (beta is None or r['beta'] == beta)]
        if not mine:
            continue
        wins = sum(1 for r in mine if check['check_fn'](r))
        p, lo, hi = win_rate_ci(wins, len(mine))
        sig = "✅" if p >= PASS_FRACTION else "❌"
        lines.append(f"    {check['domain']:<15s} {check['description']:<40s} "
                     f"{wins}/{len(mine)}  [{lo*100:4.1f}%, {hi*100:5.1f}%] {sig}")
    lines.append("")
    return lines


def comparison_section(runs):
    lines = ["  MBRD vs PPO (mean final return)", "  " + "-" * 60]
    df = pd.DataFrame(runs)
    for domain in sorted(df['domain'].unique()):
        sub = df[df['domain'] == domain]
        mbrd = sub[sub['method'] == 'mbrd']['final_return'].dropna()
        ppo = sub[sub['method'] == 'ppo']['final_return'].dropna()
        if mbrd.empty or ppo.empty:
            continue
        sig = "✅" if mbrd.mean() >= ppo.mean() else "❌"
        lines.append(f"    {domain:<15s} mbrd {mbrd.mean():+8.3f}  ppo {ppo.mean():+8.3f}  {sig}")
    lines.append("")
    return lines


def ablation_section(runs):
    """beta = 0 must not beat the default beta on the weight checks."""
    lines = []
    for check in WEIGHT_CHECKS:
        default_beta = DOMAIN_CONFIG[check['domain']]['beta']
        mbrd = [r for r in runs if r['domain'] == check['domain'] and r['method'] == 'mbrd'
                and r['final_w'] is not None]
        zero = [r for r in mbrd if r['beta'] == 0.0]
        base = [r for r in mbrd if r['beta'] == default_beta]
        if not zero or not base:
            continue
        f_zero = sum(1 for r in zero if check['check_fn'](r)) / len(zero)
        f_base = sum(1 for r in base if check['check_fn'](r)) / len(base)
        sig = "✅" if f_zero <= f_base else "⚠️ "
        if not lines:
            lines = ["  BETA = 0 ABLATION", "  " + "-" * 60]
        lines.append(f"    {check['domain']:<15s} beta=0 {f_zero*100:5.1f}%  "
                     f"beta={default_beta:g} {f_base*100:5.1f}%  {sig}")
    if lines:
        lines.append("")
    return lines


# ============================================================
#  GENERATE TEXT REPORT
# ============================================================

def generate_report(db_path, output_path=None):
    """Text report over every indexed run; saved when output_path is given."""
    runs = database.get_runs(db_path)
    stats = database.get_database_stats(db_path)

    lines = []
    lines.append("=" * 72)
    lines.append("  REWARD DESIGN RUN REPORT")
    lines.append(f"  Generated: {datetime.now().strftime('%Y-%m-%d %H:%M')}")
    lines.append(f"  Runs: {stats['total_runs']} ({stats['failed_runs']} not ok), "
                 f"{stats['domains']} domains, {stats['methods']} methods")
    lines.append("=" * 72)
    lines.append("")

    if runs:
        lines += returns_section(runs)
        lines += weight_section(runs)
        lines += comparison_section(runs)
        lines += ablation_section(runs)
    else:
        lines.append("  No runs indexed.")

    report = '\n'.join(lines)

    if output_path:
        with open(output_path, 'w') as f:
            f.write(report + '\n')
        print(f"  Report saved: {output_path}")

    return report


def report_directory(out_dir):
    db_path = os.path.join(out_dir, OUTPUT_CONFIG['db_name'])
    if not os.path.exists(db_path):
        raise FileNotFoundError(f"no run index at {db_path}")
    return generate_report(db_path, os.path.join(out_dir, 'report.txt'))


if __name__ == '__main__':
    target = sys.argv[1] if len(sys.argv) > 1 else OUTPUT_CONFIG['out_root']
    try:
        print(report_directory(target))
    except FileNotFoundError as e:
        print(f"ERROR: {e}")
        sys.exit(1)
