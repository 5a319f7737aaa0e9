"""Exception hierarchy shared by all modules."""


class NablaError(Exception):
    """Base class for every error raised by the toolkit."""


class ParseError(NablaError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class TypeMismatch(NablaError):
    """An element does not have the shape required by a functor."""


class CarrierMismatch(NablaError):
    """An element or relation mentions atoms outside the declared carrier."""


class NotFinitary(NablaError):
    """The functor contains Bag or Dist, so T X is infinite for finite X."""


class NotEnumerable(NablaError):
    """A requested set is not finite (e.g. lifted members of a distribution)."""


class EnumerationLimit(NablaError):
    def __init__(self, message, level=None):
        self.level = level
        super().__init__(message)


class UnknownState(NablaError):
    pass


class DerivationError(NablaError):
    """Raised by the derivation checker.

    ``path`` is the list of child indices leading from the root to the
    offending node, ``reason`` is one of the short codes listed in
    :mod:`nabla.proof`.
    """

    def __init__(self, path, reason, detail=""):
        self.path = list(path)
        self.reason = reason
        self.detail = detail
        where = "/".join(map(str, self.path)) or "<root>"
        super().__init__(f"{reason} at node {where}: {detail}".rstrip(": "))
