import os
import yaml
from dotenv import load_dotenv
from typing import Dict, Any

from src.theta.gamma import ThetaFitParams

load_dotenv()

ENV_PREFIX = 'SNC_'


class ConfigLoader:
    """Configuration loader that supports both YAML and environment variables"""

    def __init__(self, config_files=('config.local.yaml', 'config.yaml')):
        self.config_data = {}
        self.source = None
        self.load_yaml_config(config_files)

    def load_yaml_config(self, config_files):
        """Load configuration from YAML files"""
        # Local config first, then the default one
        base = os.path.dirname(os.path.abspath(__file__))
        for config_file in config_files:
            path = config_file if os.path.isabs(config_file) else os.path.join(base, config_file)
            if os.path.exists(path):
                with open(path, 'r') as f:
                    self.config_data = yaml.safe_load(f) or {}
                self.source = path
                break

    def get(self, key_path: str, default=None):
        """Get configuration value using dot notation (e.g., 'simulation.runs')"""
        # Environment variable first (SNC_ + uppercase with underscores)
        env_key = ENV_PREFIX + key_path.upper().replace('.', '_')
        env_value = os.environ.get(env_key)
        if env_value is not None:
            return env_value

        # Then YAML configuration
        value = self.config_data
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            elif isinstance(value, dict) and key.isdigit() and int(key) in value:
                value = value[int(key)]
            else:
                return default

        return value


def _as_bool(value) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ('1', 'true', 'yes', 'on')
    return bool(value)


# Global configuration loader instance
config_loader = ConfigLoader()


class Config:
    # Markov model
    EPSILON_MAX = int(config_loader.get('model.epsilon_max', 30))
    XI_TOLERANCE = float(config_loader.get('model.xi_tolerance', 1e-12))
    HORIZON_FACTOR = int(config_loader.get('model.horizon_factor', 20))
    CONTINUOUS_W3 = _as_bool(config_loader.get('model.continuous_w3', False))

    # Campaigns
    RUNS = int(config_loader.get('simulation.runs', 10000))
    SEED = int(config_loader.get('simulation.seed', 1))
    LOSS_RATE = float(config_loader.get('simulation.loss_rate', 0.0))
    TSNC_THRESHOLD = float(config_loader.get('simulation.tsnc_threshold', 1.1))
    MAX_TRANSMISSIONS_FACTOR = int(config_loader.get('simulation.max_transmissions_factor', 100))
    PAYLOAD_LENGTH = int(config_loader.get('simulation.payload_length', 0))

    # Oracle
    ORACLE_TRIALS = int(config_loader.get('oracle.trials', 100000))
    ORACLE_R_POINTS = int(config_loader.get('oracle.r_points', 20))
    ORACLE_MAX_ATTEMPTS = int(config_loader.get('oracle.max_attempts', 10000))

    # Comparison tolerances
    COMPARE_TOLERANCES = {
        'mean_relative_error': float(config_loader.get('compare.mean_relative_error', 0.008)),
        'xi_mse': float(config_loader.get('compare.xi_mse', 2e-4)),
        'delta_mse': float(config_loader.get('compare.delta_mse', 4e-4)),
    }

    THREADS = int(config_loader.get('workers.threads', 0)) or (os.cpu_count() or 1)
    OUTPUT_DIR = config_loader.get('output.dir', 'results')

    # Logging Configuration
    LOG_LEVEL = config_loader.get('logging.level', 'INFO')
    LOG_FILE = config_loader.get('logging.file', 'logs/snc.log')
    LOG_MAX_FILE_SIZE_MB = int(config_loader.get('logging.max_file_size_mb', 10))
    LOG_BACKUP_COUNT = int(config_loader.get('logging.backup_count', 5))
    LOG_CONSOLE_OUTPUT = _as_bool(config_loader.get('logging.console_output', True))

    @classmethod
    def get_fit_params(cls) -> Dict[int, ThetaFitParams]:
        """Fit parameters of gamma(c) for every configured q"""
        table = config_loader.get('theta.fit_params', {}) or {}
        params = {}
        for q, values in table.items():
            params[int(q)] = ThetaFitParams(
                m_odd=float(values['m_odd']),
                m_even=float(values['m_even']),
                m_w4=float(values['m_w4']),
                b_w4=float(values['b_w4']),
                c0=float(values['c0']),
            )
        return params

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        return {name: getattr(cls, name) for name in dir(cls)
                if name.isupper() and not name.startswith('_')}
