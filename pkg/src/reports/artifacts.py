"""CSV/JSON artifacts written by the command line, and readers for them.

CSV is the curve format (one row per x value, fixed header); JSON carries
scalars and metadata. Floats are written with repr() so re-running a
command reproduces files byte for byte.
"""
import csv
import json
import logging
import os
from collections import defaultdict
from typing import Any, Dict, Iterable, List, Sequence

from models import ComparisonReport, ModelOutputs, RunManifest, SimStats
from src.exceptions import ParameterError

logger = logging.getLogger(__name__)

XI_HEADER = ['epsilon', 'N', 'xi']
DELTA_HEADER = ['r', 'delta', 'lower_bound']
CURVES_HEADER = ['kind', 'x', 'value']
REPORT_HEADER = ['metric', 'model', 'simulation', 'value', 'tolerance', 'passed']
GAMMA_HEADER = ['c', 'gamma_hat', 'gamma_printed', 'gamma_continuous']
TABLE2_HEADER = ['k', 'w', 'q', 'model', 'published_model', 'model_relative_error',
                 'model_continuous_w3', 'continuous_w3_relative_error',
                 'simulation', 'published_simulation', 'simulation_relative_error']


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(headers)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.info("Saved %s", path)
    return path


def write_json(path: str, data: Dict[str, Any]) -> str:
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write('\n')
    logger.info("Saved %s", path)
    return path


def read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise ParameterError(f"missing input file: {path}")


def read_csv(path: str) -> List[Dict[str, str]]:
    try:
        with open(path, newline='') as f:
            return list(csv.DictReader(f))
    except FileNotFoundError:
        raise ParameterError(f"missing input file: {path}")


def write_model_outputs(out_dir: str, outputs: ModelOutputs) -> List[str]:
    bound = dict(outputs.lower_bound)
    return [
        write_json(os.path.join(out_dir, 'metrics.json'), outputs.to_dict()),
        write_csv(os.path.join(out_dir, 'xi_curve.csv'), XI_HEADER, outputs.xi_curve),
        write_csv(os.path.join(out_dir, 'delta_curve.csv'), DELTA_HEADER,
                  [(r, d, bound[r]) for r, d in outputs.delta_curve]),
    ]


def read_model_outputs(model_dir: str) -> ModelOutputs:
    metrics = read_json(os.path.join(model_dir, 'metrics.json'))
    xi = read_csv(os.path.join(model_dir, 'xi_curve.csv'))
    delta = read_csv(os.path.join(model_dir, 'delta_curve.csv'))
    return ModelOutputs(
        k=int(metrics['k']), w=int(metrics['w']), q=int(metrics['q']), alpha=float(metrics['alpha']),
        expected_transmissions=float(metrics['expected_transmissions']),
        xi_curve=[(int(row['epsilon']), int(row['N']), float(row['xi'])) for row in xi],
        delta_curve=[(int(row['r']), float(row['delta'])) for row in delta],
        lower_bound=[(int(row['r']), float(row['lower_bound'])) for row in delta],
        theta_source=metrics.get('theta_source', 'fitted'),
        chain_states=int(metrics.get('chain_states') or 0),
    )


def write_sim_stats(out_dir: str, stats: SimStats) -> List[str]:
    rows = [('xi', eps, value) for eps, _, value in stats.xi_curve]
    rows += [('delta', r, value) for r, value in stats.delta_curve]
    rows += [('op_count', r, value) for r, value in stats.op_count_curve]
    rows += [('tsnc_w', r, value) for r, value in stats.density_curve]
    return [
        write_json(os.path.join(out_dir, 'stats.json'), stats.to_dict()),
        write_csv(os.path.join(out_dir, 'curves.csv'), CURVES_HEADER, rows),
    ]


def read_sim_stats(sim_dir: str) -> SimStats:
    data = read_json(os.path.join(sim_dir, 'stats.json'))
    curves = defaultdict(list)
    for row in read_csv(os.path.join(sim_dir, 'curves.csv')):
        curves[row['kind']].append((int(row['x']), float(row['value'])))
    k = int(data['config']['k'])
    return SimStats(
        runs=int(data['runs']), mean=float(data['mean']), stddev=float(data['stddev']),
        stderr=float(data['stderr']), mean_op_count=float(data['mean_op_count']),
        xi_curve=[(eps, k + eps, value) for eps, value in curves['xi']],
        delta_curve=curves['delta'],
        op_count_curve=curves['op_count'],
        density_curve=curves['tsnc_w'],
        config=data['config'],
    )


def write_report(out_dir: str, report: ComparisonReport) -> List[str]:
    return [
        write_json(os.path.join(out_dir, 'report.json'), report.to_dict()),
        write_csv(os.path.join(out_dir, 'report.csv'), REPORT_HEADER,
                  [[row[h] for h in REPORT_HEADER] for row in report.rows]),
    ]


def write_manifest(out_dir: str, manifest: RunManifest) -> str:
    return write_json(os.path.join(out_dir, 'manifest.json'), manifest.to_dict())


def read_manifest(path: str) -> RunManifest:
    data = read_json(path)
    return RunManifest(**data)
