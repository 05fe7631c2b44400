from abc import ABC, abstractmethod


class ThetaSource(ABC):
    """Abstract base class for sources of the dependence probability theta_q(r, c, w)"""

    def __init__(self, w: int, q: int):
        self.w = w
        self.q = q

    @abstractmethod
    def theta(self, r: int, c: int) -> float:
        """Probability that a fresh vector on the c covered columns is dependent"""
        pass

    @abstractmethod
    def get_source_name(self) -> str:
        """Get the name of this source"""
        pass

    def validate_for(self, k: int):
        """Raise if this source cannot describe generations of size k"""
        pass
