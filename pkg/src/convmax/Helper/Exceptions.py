import textwrap


class ConvmaxException(Exception):
    """Base class of all errors raised by convmax.

    The ``exit_code`` is what the command line reports when the exception
    reaches ``RunFactory``.
    """

    exit_code: int = 2

    def __init__(self, msg: str):
        super().__init__(msg)
        self.message = msg


class DomainException(ConvmaxException):
    def __init__(self, precondition: str, value: object):
        super().__init__(
            "Violated precondition %s (got %s)" % (precondition, value)
        )
        self.precondition = precondition
        self.value = value


class InfeasibilityException(ConvmaxException):
    def __init__(self, msg: str):
        super().__init__("Infeasible on this grid: %s" % msg)


class DegenerateInputException(ConvmaxException):
    def __init__(self, what: str):
        super().__init__("Degenerate input: %s" % what)


class GridMismatchException(ConvmaxException):
    def __init__(self, left, right):
        super().__init__(
            "Sampled functions live on different grids: %s != %s"
            % (left, right)
        )


class SweepConfigException(ConvmaxException):
    def __init__(self, msg: str):
        super().__init__("Invalid sweep configuration: %s" % msg)


class SamplesFileException(ConvmaxException):
    """Raised when a samples CSV cannot be read or does not fit the grid."""

    exit_code: int = 1

    def __init__(self, e: Exception, file: str):
        ConvmaxException.__init__(self, str(e))
        self.file = file
        self.inner_exception = e

    def __str__(self):
        return self.message + textwrap.dedent(
            """
            File:       %(file)s
            Error-Type: %(type)s
            """
            % {
                "file": self.file,
                "type": type(self.inner_exception),
            }
        )


class JsonFileParseException(SamplesFileException):
    pass
