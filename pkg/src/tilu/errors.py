class TiluError(Exception):
    """Base class for errors raised by this package."""


class ClassMismatchError(TiluError):
    pass


class UnrealizableError(TiluError):
    pass


class EnumerationCapError(TiluError):
    pass


class TicketError(TiluError):
    """Tickets in an unlearning request are missing, corrupted or inconsistent."""


class OneShotError(TiluError):
    pass


class CapExceededError(TiluError):
    pass


class UnknownSchemeError(TiluError):
    pass
