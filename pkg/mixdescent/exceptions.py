class MixdescentError(Exception):
    # trace recorded up to the failure, attached by the runners before re-raising
    partial_trace = None


class DomainError(MixdescentError, ValueError):
    pass


class DimensionMismatch(DomainError):
    pass


class SimplexError(DomainError):
    pass


class PowerDomainError(DomainError):
    """
    Power transform evaluated outside of its domain, ie. (alpha - 1) * v + 1 <= 0
    """

    def __init__(self, index, value):
        super().__init__(index, value)
        self.index = index
        self.value = value

    def __str__(self):
        return "Power transform undefined at atom {} (v = {!r}): gradient left the transform domain".format(
            self.index, self.value)


class BoundUndefined(MixdescentError):
    pass


class FlaggedGradient(MixdescentError):
    def __init__(self, atoms, step=None):
        super().__init__(atoms, step)
        self.atoms = list(atoms)
        self.step = step

    def __str__(self):
        where = "" if self.step is None else " at step {}".format(self.step)
        return "Gradient estimate is not finite for atoms {}{}".format(self.atoms, where)


class InfiniteGradient(MixdescentError):
    pass


class DegenerateWeights(MixdescentError):
    pass


class InadmissibleConfig(MixdescentError):
    def __init__(self, report):
        super().__init__(report)
        self.report = report

    def __str__(self):
        return "Transform configuration is not admissible: {}".format('; '.join(self.report.reasons))


class ConfigError(MixdescentError):
    pass


class LibsvmFormatError(MixdescentError):
    def __init__(self, line_number, message):
        super().__init__(line_number, message)
        self.line_number = line_number
        self.message = message

    def __str__(self):
        return "line {}: {}".format(self.line_number, self.message)


# mapped to exit code 2 by the command line
NUMERICAL_FAILURES = (FlaggedGradient, InfiniteGradient, PowerDomainError, DegenerateWeights, BoundUndefined)
