"""Exception hierarchy.

Every error raised on bad input derives from :class:`InputError`, which the
CLI maps to exit code 2. :class:`Diverged` maps to exit code 3.
"""


class HarsanyiError(Exception):
    pass


class InputError(HarsanyiError, ValueError):
    pass


class CapExceeded(InputError):
    pass


class BadLength(InputError):
    pass


class MissingMask(InputError):
    pass


class DuplicateMask(InputError):
    pass


class NonFinite(InputError):
    pass


class EmptyPlantedMask(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class DuplicateIndex(InputError):
    pass


class EmptyCoalition(InputError):
    pass


class VariableNotInCoalition(InputError):
    pass


class Diverged(HarsanyiError, RuntimeError):
    pass
