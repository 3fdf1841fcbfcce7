"""Exception hierarchy shared by every module."""


class OneTwoOneError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(OneTwoOneError, ValueError):
    pass


class SizeLimitError(OneTwoOneError):
    """An enumeration or construction would exceed its configured cap."""


class UnsupportedModeError(OneTwoOneError):
    pass


class NotFoundError(OneTwoOneError, LookupError):
    pass


class ScheduleInfeasibleError(OneTwoOneError):
    """A flow asks more of a link than the schedule lets it carry."""

    def __init__(self, link, required, available):
        self.link = link
        self.required = required
        self.available = available
        self.deficit = required - available
        super().__init__(
            f"link {link[0]}->{link[1]} needs {required} but the schedule "
            f"supports only {available} (deficit {self.deficit})"
        )
