# "src/errors.py"

## Exception hierarchy shared by every subpackage:
## - ValidationError and its children signal bad inputs or configuration (CLI exit 2)
## - NumericFailure and its children signal a numeric decision that could not be made (CLI exit 3)


class LabError(Exception):
    pass


class ValidationError(LabError, ValueError):
    pass


class HypothesisViolation(ValidationError):
    def __init__(self, theorem, relation):
        self.theorem = theorem
        self.relation = relation
        super().__init__(f"{theorem} requires {relation}")


class ConfigError(ValidationError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class GridMembershipError(ValidationError):
    pass


class ResourceLimitError(ValidationError):
    pass


class NumericFailure(LabError, RuntimeError):
    pass


class NoReverseHolder(NumericFailure):
    pass


class IndeterminateError(NumericFailure):
    pass


class AllPairsSkipped(NumericFailure):
    pass
