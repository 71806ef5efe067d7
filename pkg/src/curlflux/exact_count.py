"""Brute-force engine: exact curl/flux and growth values by enumeration.

This is the oracle the scalable transducer engine is checked against; it
only runs while the ball fits under the enumeration cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from curlflux import words
from curlflux._kernels import apply_images
from curlflux.errors import BlowupCapError
from curlflux.morphisms import Endomorphism
from curlflux.words import DEFAULT_ENUMERATION_CAP, GroupContext

#: Abort growth iteration when an intermediate image gets this long.
DEFAULT_BLOWUP_CAP = 10**6


@dataclass(frozen=True)
class CurlFluxPoint:
    """curl_count + flux_count == ball, exactly, at radius n."""

    n: int
    curl_count: int
    flux_count: int
    ball: int

    def __post_init__(self):
        assert self.curl_count + self.flux_count == self.ball
        assert 0 <= self.curl_count <= self.ball


@dataclass(frozen=True)
class GrowthPoint:
    """Largest image length over the sphere of radius m after n iterations."""

    m: int
    n: int
    value: int


@dataclass(frozen=True)
class JointLengthTable:
    """Exact counts N[l][m] of words of length l whose image has length m.

    ``rows[l]`` maps image length to count.  The transducer engine produces
    the same table with an ``out`` bucket per level aggregating word classes
    proven unable to return below the radius; brute-force tables have
    ``out=None``.  One table computed at radius n answers every radius
    below it.
    """

    ctx: GroupContext
    n: int
    rows: tuple  # tuple of dict {m: count}
    curl_count: int
    flux_count: int
    ball: int
    out: Optional[tuple] = None

    def curl_at(self, n: int) -> int:
        """#{w : |w| <= n, |phi(w)| <= n} from the table rows."""
        if n > self.n:
            raise ValueError(f"table only covers radii <= {self.n}")
        return sum(
            c for l in range(n + 1)
            for m, c in self.rows[l].items() if m <= n
        )

    def point(self, n: int) -> CurlFluxPoint:
        curl = self.curl_at(n)
        ball = words.ball_size(self.ctx, n)
        return CurlFluxPoint(n, curl, ball - curl, ball)


def joint_length_histogram(phi: Endomorphism, n: int,
                           cap: int = DEFAULT_ENUMERATION_CAP) -> JointLengthTable:
    """Enumerate all spheres up to n and bucket words by image length."""
    rows = []
    table = phi.letter_images
    for l in range(n + 1):
        row: dict = {}
        for w in words.enumerate_sphere(phi.ctx, l, cap):
            m = len(apply_images(table, w))
            row[m] = row.get(m, 0) + 1
        rows.append(row)
    curl = sum(
        c for l in range(n + 1) for m, c in rows[l].items() if m <= n
    )
    ball = words.ball_size(phi.ctx, n)
    return JointLengthTable(phi.ctx, n, tuple(rows), curl, ball - curl, ball)


def curl_flux_brute(phi: Endomorphism, n: int,
                    cap: int = DEFAULT_ENUMERATION_CAP,
                    image_cardinality: bool = False) -> CurlFluxPoint:
    """Count words of the ball whose image stays inside the ball.

    The default counts preimages: #{w : |w| <= n, |phi(w)| <= n}.  With
    ``image_cardinality=True`` it counts |phi(B_n) ∩ B_n| instead: the two
    agree for injective maps but differ in general; the preimage count is
    the form every downstream identity in this package is stated in.
    """
    ball = words.ball_size(phi.ctx, n)
    if image_cardinality:
        seen = set()
        for w in words.enumerate_ball(phi.ctx, n, cap):
            img = phi(w)
            if len(img) <= n:
                seen.add(img)
        curl = len(seen)
    else:
        curl = 0
        table = phi.letter_images
        for w in words.enumerate_ball(phi.ctx, n, cap):
            if len(apply_images(table, w)) <= n:
                curl += 1
    return CurlFluxPoint(n, curl, ball - curl, ball)


def growth_function(phi: Endomorphism, m: int, n: int,
                    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                    blowup_cap: int = DEFAULT_BLOWUP_CAP) -> GrowthPoint:
    """max |phi^n(w)| over words of length m, by iterated application."""
    value = None
    for point in growth_trajectory(phi, m, n, enumeration_cap, blowup_cap):
        if point.n == n:
            value = point.value
    assert value is not None
    return GrowthPoint(m, n, value)


def growth_trajectory(phi: Endomorphism, m: int, n_max: int,
                      enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                      blowup_cap: int = DEFAULT_BLOWUP_CAP):
    """Yield GrowthPoint(m, n, ...) for n = 0..n_max.

    Images are iterated word by word (never composing generator images),
    so memory stays proportional to the longest single image.  Raises
    BlowupCapError when any intermediate image exceeds ``blowup_cap``.
    """
    current = list(words.enumerate_sphere(phi.ctx, m, enumeration_cap))
    yield GrowthPoint(m, 0, m)
    for n in range(1, n_max + 1):
        longest = 0
        next_words = []
        for w in current:
            img = phi(w)
            if len(img) > blowup_cap:
                raise BlowupCapError(len(img), blowup_cap, n - 1)
            longest = max(longest, len(img))
            next_words.append(img)
        current = next_words
        yield GrowthPoint(m, n, longest)
