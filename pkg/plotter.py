#!/usr/bin/env python3
"""
SVG Plotter - learning curves and weight traces from run directories

Walks a directory for <domain>/<method>/<seed>/ run folders and writes
into <dir>/plots/:

  <group>.svg                 mean greedy return per method, +-1 std band
  <group>_<method>_<seed>_weights.svg   w_i over updates (mbrd runs)

Output is a pure function of the CSVs: same input, same bytes.

Usage:
    python3 plotter.py out/foraging
"""
import os
import sys

import numpy as np
import pandas as pd

from settings import DOMAIN_CONFIG
from harness import aggregate

WIDTH, HEIGHT = 640, 400
MARGIN = {'left': 70, 'right': 150, 'top': 40, 'bottom': 50}
PALETTE = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e',
           '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf', '#000000')


def _num(v):
    return f"{v:.2f}"


class SvgChart:
    """Minimal line + band chart on a fixed canvas."""

    def __init__(self, title, x_label, y_label, xs, ys):
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        ys = ys[np.isfinite(ys)]
        self.x0, self.x1 = (float(xs.min()), float(xs.max())) if xs.size else (0.0, 1.0)
        self.y0, self.y1 = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 1.0, self.y1 + 1.0
        self.elements = []
        self.legend = []

    def px(self, x):
        span = WIDTH - MARGIN['left'] - MARGIN['right']
        return MARGIN['left'] + (x - self.x0) / (self.x1 - self.x0) * span

    def py(self, y):
        span = HEIGHT - MARGIN['top'] - MARGIN['bottom']
        return HEIGHT - MARGIN['bottom'] - (y - self.y0) / (self.y1 - self.y0) * span

    def _points(self, xs, ys):
        return ' '.join(f"{_num(self.px(x))},{_num(self.py(y))}"
                        for x, y in zip(xs, ys) if np.isfinite(y))

    def line(self, xs, ys, color, label=None):
        self.elements.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                             f'points="{self._points(xs, ys)}"/>')
        if label is not None:
            self.legend.append((label, color))

    def band(self, xs, lo, hi, color):
        pts = self._points(list(xs) + list(xs)[::-1], list(hi) + list(lo)[::-1])
        self.elements.append(f'<polygon fill="{color}" fill-opacity="0.2" stroke="none" points="{pts}"/>')

    def _axes(self):
        left, bottom = MARGIN['left'], HEIGHT - MARGIN['bottom']
        right, top = WIDTH - MARGIN['right'], MARGIN['top']
        out = [f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
               f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>']
        for k in range(5):
            x = self.x0 + (self.x1 - self.x0) * k / 4
            y = self.y0 + (self.y1 - self.y0) * k / 4
            out.append(f'<text x="{_num(self.px(x))}" y="{bottom + 16}" font-size="10" '
                       f'text-anchor="middle">{x:.4g}</text>')
            out.append(f'<text x="{left - 6}" y="{_num(self.py(y) + 3)}" font-size="10" '
                       f'text-anchor="end">{y:.3g}</text>')
        out.append(f'<text x="{(left + right) // 2}" y="{HEIGHT - 12}" font-size="12" '
                   f'text-anchor="middle">{self.x_label}</text>')
        out.append(f'<text x="16" y="{(top + bottom) // 2}" font-size="12" text-anchor="middle" '
                   f'transform="rotate(-90 16 {(top + bottom) // 2})">{self.y_label}</text>')
        out.append(f'<text x="{WIDTH // 2}" y="22" font-size="14" text-anchor="middle">{self.title}</text>')
        for i, (label, color) in enumerate(self.legend):
            y = top + 14 * i + 6
            out.append(f'<line x1="{right + 10}" y1="{y}" x2="{right + 30}" y2="{y}" '
                       f'stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{right + 34}" y="{y + 4}" font-size="11">{label}</text>')
        return out

    def render(self):
        body = self.elements + self._axes()
        return ('<svg xmlns="http://www.w3.org/2000/svg" '
                f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
                f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
                + '\n'.join(body) + '\n</svg>\n')


# ============================================================
#  RUN DISCOVERY
# ============================================================

def find_runs(root):
    """Sorted run directories (those holding a record.csv) under root."""
    runs = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        if 'plots' in dirnames:
            dirnames.remove('plots')
        if 'record.csv' in filenames:
            runs.append(dirpath)
    return sorted(runs)


def _run_key(path):
    """(group dir, domain, method, seed) from <group>/<method>/<seed>."""
    seed_dir = os.path.abspath(path)
    method_dir = os.path.dirname(seed_dir)
    group_dir = os.path.dirname(method_dir)
    return group_dir, os.path.basename(group_dir), os.path.basename(method_dir), os.path.basename(seed_dir)


def _slug(root, group_dir):
    rel = os.path.relpath(group_dir, os.path.abspath(root))
    if rel == '.':
        rel = os.path.basename(os.path.abspath(root))
    return rel.replace(os.sep, '_')


# ============================================================
#  CHARTS
# ============================================================

def comparison_svg(title, summary):
    """One line + std band per method from an aggregate() table."""
    lo = summary['mean'] - summary['std']
    hi = summary['mean'] + summary['std']
    chart = SvgChart(title, 'training step', 'greedy return', summary['step'],
                     np.concatenate([lo.to_numpy(), hi.to_numpy()]))
    for i, (method, grp) in enumerate(summary.groupby('method', sort=True)):
        color = PALETTE[i % len(PALETTE)]
        chart.band(grp['step'], grp['mean'] - grp['std'], grp['mean'] + grp['std'], color)
        chart.line(grp['step'], grp['mean'], color, f"{method} (n={int(grp['n_seeds'].min())})")
    return chart.render()


def weights_svg(title, updates, event_names=None):
    w_cols = sorted((c for c in updates.columns if c.startswith('w_')), key=lambda c: int(c[2:]))
    if not w_cols:
        raise ValueError("no w_i columns")
    chart = SvgChart(title, 'training step', 'intrinsic weight', updates['step'],
                     updates[w_cols].to_numpy().ravel())
    for i, col in enumerate(w_cols):
        idx = int(col[2:])
        label = event_names[idx] if event_names and idx < len(event_names) else col
        chart.line(updates['step'], updates[col], PALETTE[i % len(PALETTE)], label)
    return chart.render()


def _write(path, text):
    with open(path, 'w') as f:
        f.write(text)


def plot_directory(root):
    """
    Render every chart for the runs under root.
    Returns (written files, warnings); a bad CSV only costs its own chart.
    """
    files, warnings = [], []
    runs = find_runs(root) if os.path.isdir(root) else []
    if not runs:
        return files, [f"no run records under {root}"]

    out_dir = os.path.join(root, 'plots')
    os.makedirs(out_dir, exist_ok=True)

    groups = {}
    for path in runs:
        group_dir, domain, method, seed = _run_key(path)
        try:
            evals = pd.read_csv(os.path.join(path, 'record.csv'))
            if not {'step', 'mean_return'} <= set(evals.columns) or evals.empty:
                raise ValueError("missing step/mean_return rows")
        except (OSError, ValueError, pd.errors.ParserError) as e:
            warnings.append(f"{path}/record.csv: {e}")
            print(f"  ⚠️  skipped {path}/record.csv: {e}")
            continue
        record = {'config': {'domain': domain, 'method': method},
                  'evaluations': evals[['step', 'mean_return']].to_dict('records')}
        groups.setdefault(group_dir, []).append(record)

        updates_csv = os.path.join(path, 'updates.csv')
        if method != 'mbrd' or not os.path.exists(updates_csv):
            continue
        try:
            updates = pd.read_csv(updates_csv)
            names = DOMAIN_CONFIG.get(domain, {}).get('event_names')
            svg = weights_svg(f"{domain} / {method} / seed {seed}: intrinsic weights", updates, names)
        except (OSError, ValueError, KeyError, pd.errors.ParserError) as e:
            warnings.append(f"{updates_csv}: {e}")
            print(f"  ⚠️  skipped {updates_csv}: {e}")
            continue
        target = os.path.join(out_dir, f"{_slug(root, group_dir)}_{method}_{seed}_weights.svg")
        _write(target, svg)
        files.append(target)

    for group_dir in sorted(groups):
        summary = aggregate(groups[group_dir])
        warnings += summary.attrs.get('warnings', [])
        if summary.empty:
            continue
        slug = _slug(root, group_dir)
        target = os.path.join(out_dir, f"{slug}.svg")
        _write(target, comparison_svg(f"{os.path.basename(group_dir)}: greedy return", summary))
        files.append(target)

    return sorted(files), warnings


if __name__ == '__main__':
    target = sys.argv[1] if len(sys.argv) > 1 else 'out'
    written, problems = plot_directory(target)
    for f in written:
        print(f"  ✅ {f}")
    sys.exit(0 if written else 1)
