"""Free-group core: letters, reduced words, enumeration, ball/sphere counts.

Letters are small integer codes.  Generator ``i`` (1-based) has code
``2*(i-1)``; its inverse has code ``2*(i-1) + 1``, so ``inverse(c) == c ^ 1``.
The total order of codes (``0 < 1 < 2 < ...``) fixes every enumeration order
in the package: generator 1 < its inverse < generator 2 < ...

Words are tuples of letter codes with no letter adjacent to its own inverse.
The empty tuple is the identity.

Text format: generator ``i`` renders as the i-th context name (``a, b, c,
...`` by default), its inverse as the same letter uppercased, and the
identity as ``"1"``.  Parsing accepts exactly that alphabet plus whitespace.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Iterator

from curlflux import _kernels
from curlflux.errors import EnumerationCapError, MapParseError

Word = tuple  # tuple of int letter codes, freely reduced

#: Refuse to enumerate more words than this unless the caller raises the cap.
DEFAULT_ENUMERATION_CAP = 10**8


@dataclass(frozen=True)
class GroupContext:
    """A free group of rank ``rank`` with named generators.

    Rank 1 (infinite cyclic) is accepted but degenerate: most of the
    interesting behaviour needs rank >= 2.
    """

    rank: int
    names: tuple = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if self.names is None:
            if self.rank <= 26:
                object.__setattr__(
                    self, "names", tuple(string.ascii_lowercase[: self.rank])
                )
        else:
            names = tuple(self.names)
            if len(names) != self.rank:
                raise ValueError("names must match rank")
            if len(set(names)) != self.rank:
                raise ValueError("generator names must be distinct")
            for nm in names:
                if len(nm) != 1 or nm not in string.ascii_lowercase:
                    raise ValueError(
                        f"generator names must be single lowercase ascii "
                        f"letters, got {nm!r}"
                    )
            object.__setattr__(self, "names", names)

    @property
    def is_degenerate(self):
        return self.rank == 1

    @property
    def num_letters(self):
        return 2 * self.rank

    def letters(self):
        return range(2 * self.rank)


def make_letter(index, sign):
    """Letter code for generator ``index`` (1-based) with sign +1 or -1."""
    if index < 1:
        raise ValueError(f"generator index must be >= 1, got {index}")
    if sign == 1:
        return 2 * (index - 1)
    if sign == -1:
        return 2 * (index - 1) + 1
    raise ValueError(f"sign must be +1 or -1, got {sign}")


def letter_index(code):
    """1-based generator index of a letter code."""
    return code // 2 + 1


def letter_sign(code):
    return -1 if code & 1 else 1


def letter_inverse(code):
    return code ^ 1


def reduce(raw) -> Word:
    """Freely reduced form of an arbitrary letter sequence.  Idempotent."""
    return tuple(_kernels.free_reduce(raw))


def is_reduced(seq) -> bool:
    return all(seq[i] != seq[i + 1] ^ 1 for i in range(len(seq) - 1))


def inverse(w: Word) -> Word:
    """Inverse word: reversed sequence of inverted letters."""
    return tuple(c ^ 1 for c in reversed(w))


def concat(u: Word, v: Word) -> Word:
    """Reduced product of two reduced words.

    Cancellation can only happen at the junction, so this scans inward
    instead of re-reducing from scratch.
    """
    c = 0
    max_c = min(len(u), len(v))
    while c < max_c and u[len(u) - 1 - c] == v[c] ^ 1:
        c += 1
    return u[: len(u) - c] + v[c:]


def sphere_size(ctx: GroupContext, n: int) -> int:
    """Number of reduced words of length exactly n: 2r(2r-1)^(n-1)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    q = 2 * ctx.rank - 1
    return 2 * ctx.rank * q ** (n - 1)


def ball_size(ctx: GroupContext, n: int) -> int:
    """Number of reduced words of length <= n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    r = ctx.rank
    if r == 1:
        return 2 * n + 1
    q = 2 * r - 1
    # 1 + 2r * (q^n - 1) / (q - 1), exactly in integers
    return 1 + 2 * r * (q**n - 1) // (q - 1)


def enumerate_sphere(ctx: GroupContext, n: int,
                     cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Word]:
    """Yield every reduced word of length n once, in letter-code order.

    The order is lexicographic over tuples of codes, so the first word of
    the rank-2 sphere of radius 2 is ``(0, 0)`` ("aa").  Raises
    EnumerationCapError when the sphere exceeds ``cap`` words.
    """
    size = sphere_size(ctx, n)
    if size > cap:
        raise EnumerationCapError(size, cap)
    return _sphere_iter(ctx.num_letters, n)


def _sphere_iter(num_letters, n):
    if n == 0:
        yield ()
        return
    word = [0] * n
    # Depth-first in code order; position 0 admits all letters, later
    # positions all but the inverse of the previous one.
    depth = 0
    word[0] = -1
    while depth >= 0:
        c = word[depth] + 1
        if depth > 0 and c == word[depth - 1] ^ 1:
            c += 1
        if c >= num_letters:
            depth -= 1
            continue
        word[depth] = c
        if depth == n - 1:
            yield tuple(word)
        else:
            depth += 1
            word[depth] = -1


def enumerate_ball(ctx: GroupContext, n: int,
                   cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Word]:
    """Yield every reduced word of length <= n, shortest first."""
    size = ball_size(ctx, n)
    if size > cap:
        raise EnumerationCapError(size, cap)
    return itertools.chain.from_iterable(
        _sphere_iter(ctx.num_letters, k) for k in range(n + 1)
    )


# -- text format --------------------------------------------------------

def format_word(ctx: GroupContext, w: Word) -> str:
    if ctx.names is None:
        raise ValueError(f"rank {ctx.rank} has no single-letter alphabet")
    if not w:
        return "1"
    out = []
    for c in w:
        name = ctx.names[c >> 1]
        out.append(name.upper() if c & 1 else name)
    return "".join(out)


def parse_word(ctx: GroupContext, text: str) -> Word:
    """Parse the text format; must denote a freely reduced word."""
    if ctx.names is None:
        raise MapParseError(f"rank {ctx.rank} has no single-letter alphabet")
    stripped = "".join(text.split())
    if stripped == "1":
        return ()
    if not stripped:
        raise MapParseError("empty word (the identity is written '1')")
    code_of = {}
    for i, nm in enumerate(ctx.names):
        code_of[nm] = 2 * i
        code_of[nm.upper()] = 2 * i + 1
    letters = []
    for ch in stripped:
        if ch not in code_of:
            raise MapParseError(f"unknown letter {ch!r} in word {text!r}")
        letters.append(code_of[ch])
    if not is_reduced(letters):
        raise MapParseError(f"unreduced word {text!r}")
    return tuple(letters)
