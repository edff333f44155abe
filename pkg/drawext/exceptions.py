class DrawExtException(Exception):
    def __init__(self, message: str = None):
        super().__init__(message)
        self.message = message


class StructureError(DrawExtException):
    pass


class PlacementError(DrawExtException):
    pass


class CrossabilityError(PlacementError):
    pass


class InstanceError(DrawExtException):
    pass


class ParseError(DrawExtException):
    def __init__(self, message: str = None, path: str = None):
        super().__init__(message)
        self.path = path


class SemanticError(ParseError):
    pass


class BudgetError(DrawExtException):
    pass


class RegimeError(DrawExtException):
    pass


class ConsistencyError(DrawExtException):
    pass


class PatternError(DrawExtException):
    pass
