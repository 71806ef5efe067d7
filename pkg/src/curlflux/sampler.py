"""Monte Carlo estimation of curl/flux ratios.

Sampling is exactly uniform over the ball: the word length is drawn by
big-integer inverse CDF over exact sphere sizes (no floating point in the
distribution), then letters are drawn uniformly among the non-cancelling
choices.  The RNG is counter-based (numpy Philox, "philox4x64"); estimates
record the algorithm and seed so any run can be reproduced bit for bit.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from curlflux import words
from curlflux._kernels import apply_images
from curlflux.morphisms import Endomorphism
from curlflux.words import GroupContext, Word

RNG_ALGORITHM = "philox4x64"


@dataclass(frozen=True)
class RatioEstimate:
    n: int
    samples: int
    hits: int
    point: float
    ci95: float
    seed: int
    algorithm: str = RNG_ALGORITHM

    @property
    def flux_point(self) -> float:
        return 1.0 - self.point

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "hits": self.hits,
            "curl_ratio": self.point,
            "flux_ratio": self.flux_point,
            "ci95": self.ci95,
            "seed": self.seed,
            "algorithm": self.algorithm,
        }


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


class _BallSampler:
    """Uniform sampler over the ball of radius n, reusable across draws."""

    def __init__(self, ctx: GroupContext, n: int):
        self.ctx = ctx
        self.n = n
        self.cumulative = []
        total = 0
        for l in range(n + 1):
            total += words.sphere_size(ctx, l)
            self.cumulative.append(total)
        self.ball = total
        self.bits = max(1, self.ball.bit_length())
        self.nwords = (self.bits + 63) // 64
        self.mask = (1 << self.bits) - 1

    def _uniform_ball_index(self, rng) -> int:
        while True:
            raw = rng.integers(0, 2**64, size=self.nwords, dtype=np.uint64)
            u = 0
            for w in raw:
                u = (u << 64) | int(w)
            u &= self.mask
            if u < self.ball:
                return u

    def draw_length(self, rng) -> int:
        return bisect_right(self.cumulative, self._uniform_ball_index(rng))

    def draw_word(self, rng) -> Word:
        l = self.draw_length(rng)
        if l == 0:
            return ()
        nl = self.ctx.num_letters
        first = int(rng.integers(0, nl))
        picks = rng.integers(0, nl - 1, size=l - 1)
        word = [first]
        prev = first
        for k in picks:
            c = int(k)
            if c >= prev ^ 1:
                c += 1
            word.append(c)
            prev = c
        return tuple(word)


def sample_uniform_ball(ctx: GroupContext, n: int,
                        rng: np.random.Generator) -> Word:
    """One uniform reduced word of length <= n."""
    return _BallSampler(ctx, n).draw_word(rng)


def estimate_curl_ratio(phi: Endomorphism, n: int, samples: int,
                        seed: int) -> RatioEstimate:
    """Unbiased estimate of P(|phi(w)| <= n) for w uniform over the ball.

    The flux ratio is 1 minus the point estimate; ci95 is the normal
    approximation half-width.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = make_rng(seed)
    ball_sampler = _BallSampler(phi.ctx, n)
    table = phi.letter_images
    hits = 0
    for _ in range(samples):
        w = ball_sampler.draw_word(rng)
        if len(apply_images(table, w)) <= n:
            hits += 1
    point = hits / samples
    ci95 = 1.96 * math.sqrt(point * (1.0 - point) / samples)
    return RatioEstimate(n, samples, hits, point, ci95, seed)
