#!/usr/bin/env python3
"""
Motivation-Based Reward Design - Main Script

Verbs:
  train        one run (domain, method, seed)
  grid         every domain x method x seed, on the run-pool
  sweep-beta   regularizer strength ablation
  sweep-eplen  maximum episode length ablation on delayed Foraging
  eval         re-evaluate a saved policy (optionally write a trace)
  plot         SVG learning curves and weight traces for a directory
  list-envs    domains with their actions, events and defaults
  report       summary of the run index with confidence intervals

Usage:
    python main.py train --domain foraging --method mbrd --seed 3
    python main.py train --domain hungry_thirsty --scale desk --reg-mode z-norm
    python main.py grid --seeds 5 --scale desk --workers 4
    python main.py sweep-beta --domain hungry_thirsty --betas 0.01,0.0001,0
    python main.py sweep-eplen --lengths 50,100,200
    python main.py eval out/foraging/mbrd/3 --trace trace.txt
    python main.py plot out/foraging
    python main.py report out

Exit codes: 0 ok, 2 usage error, 1 run or plot failure.
Default output root: $MBRD_OUT, else ./out
"""

import argparse
import os
import sys
from datetime import datetime

from settings import CONFIG_SOURCE, DOMAIN_CONFIG, HARNESS_CONFIG
from envs import DOMAINS, UnknownDomainError, make_env
from harness import (
    METHODS, ConfigError, build_config, default_out_root, evaluate_saved, grid,
    record_runs, run, sweep_beta, sweep_episode_length,
)
from funcapprox import InputError
from plotter import plot_directory
import report


def _float_list(text):
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(choices):
    def parse(text):
        names = [v.strip() for v in text.split(',') if v.strip()]
        bad = [n for n in names if n not in choices]
        if bad:
            raise argparse.ArgumentTypeError(f"unknown: {', '.join(bad)}; choose from {', '.join(choices)}")
        return names
    return parse


def build_parser():
    run_flags = argparse.ArgumentParser(add_help=False)
    run_flags.add_argument('--steps', type=int, help='total environment steps')
    run_flags.add_argument('--beta', type=float, help='regularizer strength')
    run_flags.add_argument('--reg-mode', choices=['z-norm', 'weight-anchor'], help='outer regularizer')
    run_flags.add_argument('--gamma', type=float, help='discount')
    run_flags.add_argument('--max-ep-len', type=int, help='maximum episode length')
    run_flags.add_argument('--scale', choices=['paper', 'full', 'desk'], default='paper',
                           help='desk divides the default step budget by '
                                f"{HARNESS_CONFIG['desk_divisor']}")
    run_flags.add_argument('--out', help='output root (default $MBRD_OUT or ./out)')
    run_flags.add_argument('--config', help='flat key=value config file')

    pool_flags = argparse.ArgumentParser(add_help=False)
    pool_flags.add_argument('--seeds', type=int, default=HARNESS_CONFIG['seeds'], help='seeds 0..N-1')
    pool_flags.add_argument('--workers', type=int, default=HARNESS_CONFIG['workers'], help='concurrent runs')

    parser = argparse.ArgumentParser(prog='main.py', description='Motivation-Based Reward Design')
    sub = parser.add_subparsers(dest='verb', metavar='verb', required=True)

    p = sub.add_parser('train', parents=[run_flags], help='one run')
    p.add_argument('--domain', required=True, choices=DOMAINS)
    p.add_argument('--method', default='mbrd', choices=METHODS)
    p.add_argument('--seed', type=int, default=0)

    p = sub.add_parser('grid', parents=[run_flags, pool_flags], help='domain x method x seed')
    p.add_argument('--domains', type=_name_list(DOMAINS), default=list(DOMAINS[:3]))
    p.add_argument('--methods', type=_name_list(METHODS), default=list(METHODS))

    p = sub.add_parser('sweep-beta', parents=[run_flags, pool_flags], help='beta ablation (mbrd)')
    p.add_argument('--domain', default='hungry_thirsty', choices=DOMAINS)
    p.add_argument('--betas', type=_float_list, default=[0.01, 0.0001, 0.0])

    p = sub.add_parser('sweep-eplen', parents=[run_flags, pool_flags],
                       help='episode length ablation on delayed foraging')
    p.add_argument('--lengths', type=_int_list, default=[50, 100, 200])
    p.add_argument('--methods', type=_name_list(METHODS), default=list(METHODS))

    p = sub.add_parser('eval', help='re-evaluate a saved run')
    p.add_argument('run_dir')
    p.add_argument('--episodes', type=int)
    p.add_argument('--seed', type=int)
    p.add_argument('--trace', help='write a greedy episode trace here')

    p = sub.add_parser('plot', help='SVG charts for a run directory')
    p.add_argument('directory')

    sub.add_parser('list-envs', help='list domains')

    p = sub.add_parser('report', help='summarize the run index')
    p.add_argument('directory', nargs='?')
    return parser


def parse_args(argv=None):
    """Strict parse; usage errors exit 2, --help exits 0."""
    return build_parser().parse_args(argv)


def overrides_from(args):
    reg_mode = args.reg_mode.replace('-', '_') if args.reg_mode else None
    return {
        'total_steps': args.steps,
        'beta': args.beta,
        'reg_mode': reg_mode,
        'gamma': args.gamma,
        'max_ep_len': args.max_ep_len,
        'out': args.out or default_out_root(),
    }


# ============================================================
#  VERBS
# ============================================================

def cmd_train(args):
    cfg = build_config(args.domain, args.method, args.scale, args.config,
                       dict(overrides_from(args), seed=args.seed))
    rec = run(cfg)
    record_runs([rec], cfg['out'])
    return 0 if rec['status'] == 'ok' else 1


def _failed(records):
    return sum(1 for r in records if r['status'] != 'ok')


def cmd_grid(args):
    overrides = overrides_from(args)
    records = grid(args.domains, args.methods, args.seeds, args.scale, args.workers,
                   overrides['out'], args.config, overrides)
    return 1 if _failed(records) else 0


def cmd_sweep_beta(args):
    base = build_config(args.domain, 'mbrd', args.scale, args.config, overrides_from(args))
    records, table = sweep_beta(base, args.betas, args.seeds, args.workers)
    print("\n" + "=" * 40)
    print(table.to_string(index=False))
    table.to_csv(os.path.join(base['out'], 'sweep_beta.csv'), index=False, float_format='%.10g')
    return 1 if _failed(records) else 0


def cmd_sweep_eplen(args):
    base = build_config('foraging', 'mbrd', args.scale, args.config, overrides_from(args))
    records, table = sweep_episode_length(base, args.lengths, args.methods, args.seeds, args.workers)
    print("\n" + "=" * 40)
    print(table.to_string(index=False))
    table.to_csv(os.path.join(base['out'], 'sweep_eplen.csv'), index=False, float_format='%.10g')
    return 1 if _failed(records) else 0


def cmd_eval(args):
    mean, std, returns = evaluate_saved(args.run_dir, args.episodes, args.seed, args.trace)
    print(f"  {args.run_dir}: {mean:.3f} ± {std:.3f} over {len(returns)} episodes")
    if args.trace:
        print(f"  Trace saved: {args.trace}")
    return 0


def cmd_plot(args):
    files, warnings = plot_directory(args.directory)
    for f in files:
        print(f"  ✅ {f}")
    if not files:
        print(f"  ❌ nothing rendered: {'; '.join(warnings)}")
        return 1
    return 0


def cmd_list_envs(args):
    print(f"{'domain':<16s}{'actions':>8s}{'events':>8s}{'obs':>6s}  {'beta':>7s}  events")
    for domain in DOMAINS:
        env = make_env(domain)
        cfg = DOMAIN_CONFIG[domain]
        print(f"{domain:<16s}{env.n_actions:>8d}{env.n_events:>8d}{env.obs_dim:>6d}  "
              f"{cfg['beta']:>7g}  {', '.join(env.event_names)}")
    return 0


def cmd_report(args):
    print(report.report_directory(args.directory or default_out_root()))
    return 0


COMMANDS = {
    'train': cmd_train,
    'grid': cmd_grid,
    'sweep-beta': cmd_sweep_beta,
    'sweep-eplen': cmd_sweep_eplen,
    'eval': cmd_eval,
    'plot': cmd_plot,
    'list-envs': cmd_list_envs,
    'report': cmd_report,
}


def main(argv=None):
    args = parse_args(argv)

    if args.verb not in ('list-envs', 'eval', 'plot', 'report'):
        print("#" * 60)
        print(f"# MOTIVATION-BASED REWARD DESIGN: {args.verb}")
        print(f"# {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}  (settings: {CONFIG_SOURCE})")
        print("#" * 60)

    try:
        return COMMANDS[args.verb](args)
    except (ConfigError, UnknownDomainError) as e:
        print(f"  ❌ configuration error: {e}")
        return 2
    except (FileNotFoundError, InputError) as e:
        print(f"  ❌ {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
