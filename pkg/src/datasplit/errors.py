"""Exception hierarchy shared by every solver module."""


class DataSplitError(Exception):
    """Base class for all errors raised by the package."""


class InstanceError(DataSplitError, ValueError):
    """The instance is malformed and cannot be solved as given."""


class AttributeOutOfRange(InstanceError):
    def __init__(self, attribute, n):
        if n is None:
            super().__init__(f"attribute {attribute} is negative")
        else:
            super().__init__(f"attribute {attribute} outside universe [0, {n})")
        self.attribute = attribute
        self.n = n


class EmptyForbiddenSet(InstanceError):
    def __init__(self):
        super().__init__("forbidden family contains the empty set")


class SingletonForbiddenSet(InstanceError):
    def __init__(self, attribute):
        super().__init__(f"forbidden family contains the singleton {{{attribute}}}")
        self.attribute = attribute


class InfeasibleInstance(DataSplitError):
    """Some forbidden set lies inside a required set, so no covering exists."""

    def __init__(self, forbidden=None, required=None):
        self.forbidden = forbidden
        self.required = required
        if forbidden is None:
            msg = "instance admits no covering"
        else:
            msg = f"forbidden {forbidden} is contained in required {required}"
        super().__init__(msg)


class UniverseMismatch(DataSplitError, ValueError):
    pass


class NotAntichain(DataSplitError, ValueError):
    pass


class ChosenNotInFamily(DataSplitError, ValueError):
    pass


class SizeExceedsK(DataSplitError, ValueError):
    pass


class VariableCapExceeded(DataSplitError):
    pass


class RowOutOfRange(DataSplitError, ValueError):
    pass


class BudgetExceeded(DataSplitError):
    """A search ran out of its node or pair budget before reaching a verdict."""

    def __init__(self, what, budget):
        super().__init__(f"{what} budget of {budget} exhausted")
        self.budget = budget
