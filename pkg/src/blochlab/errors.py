"""Exception hierarchy shared by all blochlab modules."""


class BlochLabError(Exception):
    """Base class for every error raised by blochlab."""


class ParseError(BlochLabError):
    """The ring description does not match the ring grammar."""


class NotPrimePower(ParseError):
    """``GF(n)`` was requested for an ``n`` that is not a prime power."""


class TooLarge(BlochLabError):
    """A configured size cap would be exceeded."""


class IllDefined(BlochLabError):
    """A homomorphism does not kill some relation of its source."""


class NotAHom(BlochLabError):
    """A proposed map of rings violates a ring axiom."""


class NotAClique(BlochLabError):
    """A tuple of projective points is not a clique of distinct points."""


class NotStable(BlochLabError):
    """A lattice is not preserved by the acting matrices."""


class GenerationIncomplete(BlochLabError):
    """Proposed matrix generators do not generate the whole group."""


class DomainError(BlochLabError):
    """A parameter lies outside the domain of a distinguished element."""
