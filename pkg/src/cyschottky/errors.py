class CYSchottkyError(Exception):
    """Base class for mathematical input errors raised by the package."""


class AlgebraError(CYSchottkyError):
    pass


class FrameError(CYSchottkyError):
    pass


class JetError(CYSchottkyError):
    pass


class TransversalityViolation(JetError):
    def __init__(self, component: str, term, order: int):
        self.component = component
        self.term = term
        self.order = order
        super().__init__(f"transversality violation: component {component!r} has term "
                         f"{term} of degree below its weight {order}")


class NormalizationViolation(JetError):
    def __init__(self, component: str):
        self.component = component
        super().__init__(f"normalization violation: W1 component {component!r} "
                         "differs from its coordinate")


class OrderOverflow(JetError):
    pass


class SingularHypersurface(CYSchottkyError):
    pass


class HypersurfaceError(CYSchottkyError):
    pass


class RelationError(CYSchottkyError):
    pass
