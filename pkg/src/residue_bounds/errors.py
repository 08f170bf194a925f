"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ResidueBoundsError(Exception):
    """Base class for every error raised by this package."""


class InputError(ResidueBoundsError, ValueError):
    """An argument is malformed or outside its allowed set (e.g. a non-prime p)."""


class RangeError(ResidueBoundsError, ValueError):
    """A truncation point exceeds the limit of the prime table."""


class DomainError(ResidueBoundsError, ValueError):
    """A bound function was evaluated outside the range where it is defined."""


class BadPrimeError(ResidueBoundsError):
    """Splitting data is unavailable for one or more primes.

    Raised when a prime may divide the index of the defining polynomial and
    no explicit decomposition was supplied for it.
    """

    def __init__(self, primes):
        self.primes = sorted(set(int(p) for p in primes))
        shown = ", ".join(str(p) for p in self.primes[:20])
        more = "" if len(self.primes) <= 20 else f", ... ({len(self.primes)} total)"
        super().__init__(f"no decomposition data for prime(s) {shown}{more}")


class RecordError(ResidueBoundsError, ValueError):
    """A field record failed to parse or validate."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class PoleError(DomainError):
    """Minimal-constant inversion hit ln ln ln|disc| = 0 (|disc| = e^e)."""
