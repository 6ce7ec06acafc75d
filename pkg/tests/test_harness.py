import os

import numpy as np
import pandas as pd
import pytest

import harness
from funcapprox import NumericalError
from harness import (
    ConfigError, aggregate, build_config, evaluate_saved, load_config_file, parse_value,
    run, run_many, sweep_beta, sweep_episode_length, validate_config, write_config_file,
)

TINY = {
    'total_steps': 256, 'update_period': 64, 'epochs': 2, 'eval_interval': 128,
    'eval_episodes': 2, 'max_ep_len': 20, 'quiet': True,
}


def tiny_config(tmp_path, domain='foraging', method='mbrd', **extra):
    return build_config(domain, method, overrides=dict(TINY, out=str(tmp_path), **extra))


def fake_record(method, steps, means, domain='foraging'):
    return {'config': {'method': method, 'domain': domain},
            'evaluations': [{'step': s, 'mean_return': m} for s, m in zip(steps, means)]}


class TestConfig:
    def test_grid_defaults(self):
        cfg = build_config('foraging')
        assert cfg['gamma'] == 0.999
        assert cfg['max_ep_len'] == 200
        assert cfg['update_period'] == 1024
        assert cfg['epochs'] == 50
        assert cfg['total_steps'] == 2_000_000
        assert cfg['delay'] == 10
        assert cfg['reg_mode'] == 'weight_anchor' and cfg['w_init'] == 0.1

    def test_hungry_thirsty_runs_longer(self):
        assert build_config('hungry_thirsty')['total_steps'] == 4_000_000
        assert build_config('hungry_thirsty')['beta'] == 1e-2

    def test_synthetic_defaults(self):
        cfg = build_config('synth_hopper')
        assert cfg['gamma'] == 0.99
        assert cfg['max_ep_len'] == 1000
        assert cfg['update_period'] == 20000
        assert cfg['epochs'] == 5
        assert cfg['minibatch_size'] == 1024
        assert cfg['beta'] == 1e-3
        assert cfg['policy_hidden'] == [64, 64]

    def test_desk_scale(self):
        assert build_config('foraging', scale='desk')['total_steps'] == 500_000
        assert build_config('hungry_thirsty', scale='desk')['total_steps'] == 1_000_000

    def test_layering(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text("# overrides\nbeta=0.5\nepochs = 3\npolicy_hidden=16,16\n\n")
        cfg = build_config('foraging', config_file=str(path), overrides={'beta': 0.25, 'gamma': None})
        assert cfg['beta'] == 0.25
        assert cfg['epochs'] == 3
        assert cfg['policy_hidden'] == [16, 16]
        assert cfg['gamma'] == 0.999

    def test_file_round_trip(self, tmp_path):
        cfg = build_config('fight_monster', 'cb', overrides={'out': str(tmp_path)})
        write_config_file(cfg, str(tmp_path / 'config.txt'))
        assert validate_config(load_config_file(str(tmp_path / 'config.txt'))) == cfg

    @pytest.mark.parametrize('text, value', [
        ('3', 3), ('0.001', 0.001), ('true', True), ('8,8', [8, 8]), ('none', None), ('mbrd', 'mbrd'), ('[]', []),
    ])
    def test_parse_value(self, text, value):
        assert parse_value(text) == value

    @pytest.mark.parametrize('overrides', [
        {'bogus': 1}, {'method': 'lirpg'}, {'method': 'dqn'}, {'gamma': 1.5},
        {'reg_mode': 'l2'}, {'total_steps': 0}, {'beta': -1.0}, {'chain_length': 10.0},
    ])
    def test_rejected(self, overrides):
        with pytest.raises(ConfigError):
            build_config('foraging', overrides=overrides)

    def test_hyphenated_reg_mode(self):
        assert build_config('foraging', overrides={'reg_mode': 'z-norm'})['reg_mode'] == 'z_norm'

    @pytest.mark.parametrize('scale', ['paper', 'full'])
    def test_published_budget_scale(self, scale):
        cfg = build_config('foraging', scale=scale)
        assert cfg['scale'] == 'paper'
        assert cfg['total_steps'] == 2_000_000

    def test_unknown_scale(self):
        with pytest.raises(ConfigError):
            build_config('foraging', scale='huge')

    def test_round_trip_keeps_empty_layers_and_comma_paths(self, tmp_path):
        out = str(tmp_path / 'runs,v2')
        cfg = build_config('foraging', overrides={'out': out, 'policy_hidden': []})
        write_config_file(cfg, str(tmp_path / 'config.txt'))
        back = validate_config(load_config_file(str(tmp_path / 'config.txt')))
        assert back['policy_hidden'] == []
        assert back['out'] == out
        assert back == cfg


class TestRun:
    def test_mbrd_run_layout(self, tmp_path):
        rec = run(tiny_config(tmp_path))
        assert rec['status'] == 'ok'
        path = rec['run_dir']
        assert path == os.path.join(str(tmp_path), 'foraging', 'mbrd', '0')
        for name in ('config.txt', 'record.csv', 'updates.csv', 'policy.npz', 'warnings.txt'):
            assert os.path.exists(os.path.join(path, name))
        record = pd.read_csv(os.path.join(path, 'record.csv'))
        assert list(record.columns) == ['step', 'mean_return', 'std_return', 'w_0', 'w_1',
                                        'cosine', 'train_return']
        assert record['step'].tolist() == [0, 128, 256]
        updates = pd.read_csv(os.path.join(path, 'updates.csv'))
        assert len(updates) == 4
        assert updates['step'].is_monotonic_increasing
        assert len(rec['final_w']) == 2

    def test_ppo_never_allocates_weights(self, tmp_path):
        rec = run(tiny_config(tmp_path, method='ppo'))
        assert rec['final_w'] is None
        record = pd.read_csv(os.path.join(rec['run_dir'], 'record.csv'))
        assert not any(c.startswith('w_') for c in record.columns)
        updates = pd.read_csv(os.path.join(rec['run_dir'], 'updates.csv'))
        assert 'cosine' not in updates.columns

    @pytest.mark.parametrize('method', ['cb', 'pbrs'])
    def test_baselines_run(self, tmp_path, method):
        rec = run(tiny_config(tmp_path, domain='fight_monster', method=method))
        assert rec['status'] == 'ok'
        assert np.isfinite(rec['final_return'])

    def test_identical_config_gives_identical_files(self, tmp_path):
        a = run(tiny_config(tmp_path / 'a', domain='hungry_thirsty'))
        b = run(tiny_config(tmp_path / 'b', domain='hungry_thirsty'))
        for name in ('record.csv', 'updates.csv'):
            with open(os.path.join(a['run_dir'], name), 'rb') as fa, \
                    open(os.path.join(b['run_dir'], name), 'rb') as fb:
                assert fa.read() == fb.read()

    def test_zero_beta_logs_zero_regularizer(self, tmp_path):
        rec = run(tiny_config(tmp_path, beta=0.0))
        updates = pd.read_csv(os.path.join(rec['run_dir'], 'updates.csv'))
        assert (updates['reg_term'] == 0.0).all()

    def test_numerical_abort_is_flagged(self, tmp_path, monkeypatch):
        def explode(*args, **kwargs):
            raise NumericalError("non-finite PPO loss")
        monkeypatch.setattr(harness, 'ppo_update', explode)
        rec = run(tiny_config(tmp_path))
        assert rec['status'] == 'numerical_abort'
        assert rec['warnings']
        assert [e['step'] for e in rec['evaluations']] == [0]

    def test_saved_policy_evaluates(self, tmp_path):
        rec = run(tiny_config(tmp_path, method='ppo'))
        trace = str(tmp_path / 'trace.txt')
        mean, std, returns = evaluate_saved(rec['run_dir'], episodes=3, trace_path=trace)
        assert len(returns) == 3 and np.isfinite(mean)
        with open(trace) as f:
            lines = f.read().splitlines()
        assert 1 <= len(lines) <= 20
        assert lines[-1].endswith('\t1')

    def test_linear_policy_reloads_from_its_own_config(self, tmp_path):
        rec = run(tiny_config(tmp_path, method='ppo', policy_hidden=[]))
        mean, _, returns = evaluate_saved(rec['run_dir'], episodes=2)
        assert len(returns) == 2 and np.isfinite(mean)

    def test_run_many_indexes_runs(self, tmp_path):
        import database
        configs = [tiny_config(tmp_path, method='ppo', seed=s) for s in (0, 1)]
        records = run_many(configs, workers=1, db_root=str(tmp_path))
        assert [r['config']['seed'] for r in records] == [0, 1]
        runs = database.get_runs(str(tmp_path / 'runs.db'))
        assert len(runs) == 2


class TestSweeps:
    def test_empty_beta_list(self, tmp_path):
        with pytest.raises(ConfigError):
            sweep_beta(tiny_config(tmp_path), [], 1)

    def test_beta_sweep(self, tmp_path):
        records, table = sweep_beta(tiny_config(tmp_path), [0.01, 0.0], 1)
        assert len(records) == 2
        assert sorted(table['beta'].tolist()) == [0.0, 0.01]
        assert os.path.isdir(os.path.join(str(tmp_path), 'beta_0.01', 'foraging', 'mbrd', '0'))

    def test_episode_length_sweep_shorter_than_delay(self, tmp_path):
        records, table = sweep_episode_length(tiny_config(tmp_path), [5, 20], ['ppo', 'mbrd'], 1)
        assert len(records) == 4
        assert set(zip(table['method'], table['max_ep_len'])) == {
            ('mbrd', 5), ('mbrd', 20), ('ppo', 5), ('ppo', 20)}
        assert all(r['status'] == 'ok' for r in records)


class TestAggregate:
    def test_single_record_has_zero_std(self):
        out = aggregate([fake_record('mbrd', [0, 10], [1.0, 2.0])])
        assert out['std'].tolist() == [0.0, 0.0]
        assert out['n_seeds'].tolist() == [1, 1]

    def test_unequal_lengths_truncate(self):
        out = aggregate([fake_record('ppo', [0, 10, 20], [1.0, 2.0, 3.0]),
                         fake_record('ppo', [0, 10], [3.0, 4.0])])
        assert out['step'].tolist() == [0, 10]
        assert out['mean'].tolist() == [2.0, 3.0]
        assert out.attrs['warnings']

    def test_order_does_not_matter(self):
        recs = [fake_record('mbrd', [0, 10], [0.1, 0.7]), fake_record('mbrd', [0, 10], [0.3, 0.2]),
                fake_record('ppo', [0, 10], [1.1, -0.4]), fake_record('mbrd', [0, 10], [0.9, 0.05])]
        pd.testing.assert_frame_equal(aggregate(recs), aggregate(recs[::-1]))

    def test_groups_by_method_and_domain(self):
        out = aggregate([fake_record('mbrd', [0], [1.0]), fake_record('mbrd', [0], [2.0], 'fight_monster')])
        assert len(out) == 2
