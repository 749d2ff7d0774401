"""Exceptions shared across modules."""


class ResourceLimitExceeded(RuntimeError):
    """A ball grew past its vertex cap before the requested computation finished."""

    def __init__(self, message: str, partial_size: int = 0):
        super().__init__(message)
        self.partial_size = partial_size


class GeodesicLimitExceeded(RuntimeError):
    """More geodesics than the enumeration cap; ``count`` is the exact total."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} geodesics exceed the enumeration cap {cap}")
        self.count = count
        self.cap = cap


class SearchLimitExceeded(RuntimeError):
    """Isomorphism search hit its node cap; this is not a non-existence proof."""

    def __init__(self, nodes: int):
        super().__init__(f"search aborted after {nodes} nodes")
        self.nodes = nodes


class NotQuasiAlgebraic(ValueError):
    def __init__(self, index: int):
        super().__init__(f"step at index {index} changes the free part of the step")
        self.index = index
