"""Exception types shared across the package."""


class CurlFluxError(Exception):
    """Base class for all errors raised by this package."""


class EnumerationCapError(CurlFluxError):
    """Enumeration too large: the requested sphere/ball exceeds the word cap."""

    def __init__(self, needed, cap):
        super().__init__(
            f"enumeration too large: {needed} words exceeds cap {cap}"
        )
        self.needed = needed
        self.cap = cap


class BlowupCapError(CurlFluxError):
    """An intermediate image exceeded the growth blow-up cap."""

    def __init__(self, length, cap, completed):
        super().__init__(
            f"image length {length} exceeds blow-up cap {cap} "
            f"(largest completed iteration: {completed})"
        )
        self.length = length
        self.cap = cap
        self.completed = completed


class TransducerClosureError(CurlFluxError):
    """Window doubling hit its ceiling without reaching a closed machine.

    Raised when a transition's cancellation would consume the entire stored
    suffix of a truncated state at every window up to the ceiling.  Expected
    for some non-injective maps; brute force or sampling still apply.
    """

    def __init__(self, window, ceiling):
        super().__init__(
            "unbounded cancellation suspected; use brute force or sampling "
            f"(window reached {window}, ceiling {ceiling})"
        )
        self.window = window
        self.ceiling = ceiling


class StateExplosionError(CurlFluxError):
    """Transducer construction exceeded the configured state budget."""

    def __init__(self, limit):
        super().__init__(f"transducer state count exceeded budget {limit}")
        self.limit = limit


class EngineMemoryError(CurlFluxError):
    """The DP ran out of its memory budget; carries the largest completed n."""

    def __init__(self, budget_bytes, largest_completed_n):
        super().__init__(
            f"memory budget {budget_bytes} bytes exceeded; "
            f"largest completed n = {largest_completed_n}"
        )
        self.budget_bytes = budget_bytes
        self.largest_completed_n = largest_completed_n


class MapParseError(CurlFluxError):
    """A map file or word literal failed to parse."""


class RankMismatchError(CurlFluxError):
    """Two objects built over different group contexts were combined."""


class InverseVerificationError(CurlFluxError):
    """A claimed inverse failed verification on some generator."""

    def __init__(self, generator_name, direction):
        super().__init__(
            f"composition does not fix generator {generator_name!r} "
            f"({direction})"
        )
        self.generator_name = generator_name
        self.direction = direction
