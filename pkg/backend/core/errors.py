from typing import List


class Cohom1Error(Exception):
    pass


class IntLinError(Cohom1Error):
    pass


class UnsupportedSubgroupShape(Cohom1Error):
    pass


class NotASphere(Cohom1Error):
    pass


class NotInTable(Cohom1Error):
    pass


class WrongFamily(Cohom1Error):
    pass


class InvalidFamily(Cohom1Error):
    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("invalid family instance: " + ", ".join(self.violations))


class MalformedPresentation(Cohom1Error):
    pass


class NormalizationError(Cohom1Error):
    pass


class LiftAmbiguous(Cohom1Error):
    pass


class DslError(Cohom1Error):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class DslSemanticError(DslError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class SweepCapExceeded(Cohom1Error):
    pass


class UnknownOracle(Cohom1Error):
    pass
