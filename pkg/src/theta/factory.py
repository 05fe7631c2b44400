from src.exceptions import ParameterError
from . import ThetaSource
from .fitted_source import FittedThetaSource
from .table_source import TableThetaSource


class ThetaSourceFactory:
    """Factory class for dependence-probability sources"""

    @staticmethod
    def create_source(source_type: str, w: int, q: int, **kwargs) -> ThetaSource:
        """Create a source instance based on type"""
        if source_type.lower() == 'fitted':
            return FittedThetaSource(w, q, params=kwargs.get('params'),
                                     continuous_w3=kwargs.get('continuous_w3', False))
        elif source_type.lower() == 'table':
            if kwargs.get('samples') is not None:
                return TableThetaSource(w, q, kwargs['samples'])
            return TableThetaSource.from_csv(kwargs['path'], w, q)
        else:
            raise ParameterError(f"Unknown theta source type: {source_type}")

    @staticmethod
    def get_available_sources() -> list:
        return ['fitted', 'table']
