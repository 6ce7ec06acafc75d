import json
import sqlite3
from datetime import datetime

from settings import OUTPUT_CONFIG

def get_connection(db_path=None):
    return sqlite3.connect(db_path or OUTPUT_CONFIG['db_name'])

def initialize_database(db_path=None):
    conn = get_connection(db_path)
    cursor = conn.cursor()
    cursor.execute('''
        CREATE TABLE IF NOT EXISTS runs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            run_dir TEXT UNIQUE,
            domain TEXT,
            method TEXT,
            seed INTEGER,
            beta REAL,
            reg_mode TEXT,
            max_ep_len INTEGER,
            total_steps INTEGER,
            scale TEXT,
            status TEXT,
            final_return REAL,
            final_w TEXT,
            n_warnings INTEGER,
            recorded_at DATETIME
        )
    ''')
    conn.commit()
    conn.close()

def record_run(db_path, rec):
    """Insert or replace the index row for one RunRecord (keyed by run_dir)."""
    cfg = rec['config']
    conn = get_connection(db_path)
    cursor = conn.cursor()
    try:
        cursor.execute('''
            INSERT OR REPLACE INTO runs (
                run_dir, domain, method, seed, beta, reg_mode, max_ep_len,
                total_steps, scale, status, final_return, final_w, n_warnings, recorded_at
            ) VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?)
        ''', (rec['run_dir'], cfg['domain'], cfg['method'], cfg['seed'], cfg['beta'],
              cfg['reg_mode'], cfg['max_ep_len'], cfg['total_steps'], cfg['scale'],
              rec['status'], rec['final_return'],
              json.dumps(rec['final_w']) if rec.get('final_w') is not None else None,
              len(rec.get('warnings', [])), datetime.now().strftime('%Y-%m-%d %H:%M:%S')))
        conn.commit()
        return True
    except sqlite3.Error as e:
        print(f"  ❌ could not index {rec['run_dir']}: {e}")
        return False
    finally:
        conn.close()

def get_runs(db_path, domain=None, method=None, status=None):
    conn = get_connection(db_path)
    cursor = conn.cursor()
    clauses, params = [], []
    for column, value in (('domain', domain), ('method', method), ('status', status)):
        if value is not None:
            clauses.append(f'{column} = ?')
            params.append(value)
    where = f"WHERE {' AND '.join(clauses)}" if clauses else ''
    cursor.execute(f'''
        SELECT run_dir, domain, method, seed, beta, reg_mode, max_ep_len,
               total_steps, scale, status, final_return, final_w, n_warnings
        FROM runs {where}
        ORDER BY domain, method, beta, max_ep_len, seed
    ''', params)
    results = [{'run_dir': r[0], 'domain': r[1], 'method': r[2], 'seed': r[3], 'beta': r[4],
                'reg_mode': r[5], 'max_ep_len': r[6], 'total_steps': r[7], 'scale': r[8],
                'status': r[9], 'final_return': r[10],
                'final_w': json.loads(r[11]) if r[11] else None,
                'n_warnings': r[12]} for r in cursor.fetchall()]
    conn.close()
    return results

def get_database_stats(db_path=None):
    conn = get_connection(db_path)
    cursor = conn.cursor()
    stats = {}
    cursor.execute('SELECT COUNT(*) FROM runs')
    stats['total_runs'] = cursor.fetchone()[0]
    cursor.execute("SELECT COUNT(*) FROM runs WHERE status != 'ok'")
    stats['failed_runs'] = cursor.fetchone()[0]
    cursor.execute('SELECT COUNT(DISTINCT domain) FROM runs')
    stats['domains'] = cursor.fetchone()[0]
    cursor.execute('SELECT COUNT(DISTINCT method) FROM runs')
    stats['methods'] = cursor.fetchone()[0]
    cursor.execute('SELECT MIN(recorded_at), MAX(recorded_at) FROM runs')
    dr = cursor.fetchone()
    stats['earliest_run'] = dr[0]
    stats['latest_run'] = dr[1]
    conn.close()
    return stats

if __name__ == '__main__':
    import sys
    path = sys.argv[1] if len(sys.argv) > 1 else OUTPUT_CONFIG['db_name']
    initialize_database(path)
    print(get_database_stats(path))
