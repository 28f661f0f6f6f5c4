"""Exception hierarchy for circwalk."""


class CircwalkError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(CircwalkError, ValueError):
    pass


class DisconnectedGraph(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NotBijective(GraphError):
    """A vertex labeling is not a bijection onto ``0..deg(u)-1``."""

    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"labeling at vertex {vertex} is not a bijection")


class CoinError(CircwalkError, ValueError):
    pass


class NotUnitary(CoinError):
    pass


class ZeroEntry(CoinError):
    pass


class NotTwoRegular(CircwalkError):
    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"blow-up vertex {vertex} is not 2-in/2-out")


class UnsupportedFormat(CircwalkError, ValueError):
    pass


class DimensionMismatch(CircwalkError, ValueError):
    pass


class UnknownVertex(CircwalkError, KeyError):
    pass


class MaxStepsExceeded(CircwalkError):
    pass


class InconsistentSystem(CircwalkError):
    pass
