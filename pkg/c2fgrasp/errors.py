from typing import Optional

__all__ = ['DegenerateRollError', 'EmptyPositiveSetError', 'ParseError']


class DegenerateRollError(ValueError):
    """The (theta_cos, theta_sin) pair of a cell is zero, so roll is undefined."""


class EmptyPositiveSetError(ValueError):
    """A loss normalized by |S| was asked to run with no positive cells."""


class ParseError(ValueError):

    def __init__(self, reason: str, path: Optional[str] = None,
                 lineno: Optional[int] = None):
        self.reason = reason
        self.path = path
        self.lineno = lineno
        where = path or "<input>"
        if lineno is not None:
            where = f"{where}:{lineno}"
        super().__init__(f"{where}: {reason}")
