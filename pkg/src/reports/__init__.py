from .artifacts import (
    XI_HEADER, DELTA_HEADER, CURVES_HEADER, REPORT_HEADER, GAMMA_HEADER, TABLE2_HEADER,
    write_csv, write_json, read_json, read_csv,
    write_model_outputs, read_model_outputs, write_sim_stats, read_sim_stats,
    write_report, write_manifest, read_manifest,
)

__all__ = [
    'XI_HEADER', 'DELTA_HEADER', 'CURVES_HEADER', 'REPORT_HEADER', 'GAMMA_HEADER', 'TABLE2_HEADER',
    'write_csv', 'write_json', 'read_json', 'read_csv',
    'write_model_outputs', 'read_model_outputs', 'write_sim_stats', 'read_sim_stats',
    'write_report', 'write_manifest', 'read_manifest',
]
