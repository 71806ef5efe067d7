"""Scalable exact counting via an image-length transducer.

The machine reads a reduced word w letter by letter and tracks the reduced
image phi(w) incrementally.  Appending a letter b replaces phi(w) by
reduce(phi(w) . phi(b)); since both parts are reduced, cancellation happens
only at the junction, so the update needs nothing but a bounded suffix of
phi(w).  A state therefore stores:

    (last letter of w, stored suffix of phi(w) up to a window W, truncated?)

with ``truncated`` marking that letters of phi(w) older than the stored
suffix exist but are unknown.  The construction is *verified closed*: if any
transition's cancellation would consume the entire stored suffix of a
truncated state, the window is doubled and the machine rebuilt.  Maps with
bounded cancellation (in particular automorphisms) close at a small window;
maps whose images can collapse unboundedly hit the window ceiling and raise
TransducerClosureError; for those, brute force or sampling still apply.

Counting is a dynamic program over word length l: one big-integer count per
(state, image length m) cell.  Cells with m too large to ever return to
m <= n within the remaining steps move to an aggregated OUT bucket, which
keeps the live m-range proportional to n.  All counts are exact arbitrary
precision integers; ratios are formed only downstream.
"""

from __future__ import annotations

import json
from array import array
from dataclasses import dataclass, field
from typing import Optional

from curlflux import words
from curlflux._kernels import dp_step
from curlflux.errors import (
    EngineMemoryError,
    StateExplosionError,
    TransducerClosureError,
)
from curlflux.exact_count import CurlFluxPoint, JointLengthTable
from curlflux.morphisms import Endomorphism

DEFAULT_WINDOW_CEILING_FACTOR = 1024  # windows tried: w0, 2*w0, ..., <= 1024*maximg
DEFAULT_MAX_STATES = 500_000


class _ClosureViolation(Exception):
    """Internal: current window is too small."""


@dataclass(frozen=True)
class Transducer:
    """Verified-closed image-length machine for one endomorphism."""

    phi: Endomorphism
    window: int
    states: tuple          # (last_letter, suffix, truncated) per state id
    edge_src: tuple
    edge_tgt: tuple
    edge_delta: tuple
    start: int = 0
    _step: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        step = [dict() for _ in self.states]
        for s, t, d in zip(self.edge_src, self.edge_tgt, self.edge_delta):
            letter = self.states[t][0]
            step[s][letter] = (t, d)
        object.__setattr__(self, "_step", tuple(step))

    @property
    def num_states(self):
        return len(self.states)

    @property
    def min_delta(self):
        return min(self.edge_delta)

    @property
    def max_delta(self):
        return max(self.edge_delta)

    @property
    def max_step_decrease(self):
        """Largest single-step drop in image length (>= 0)."""
        return max(0, -self.min_delta)

    def walk(self, w):
        """Follow w's path from the start; returns (state id, weight sum).

        The accumulated weight equals |phi(w)| for every reduced w.
        """
        sid, total = self.start, 0
        for c in w:
            sid, d = self._step[sid][c]
            total += d
        return sid, total

    def to_json(self) -> dict:
        """Dump states, edges and weights for debugging and comparison."""
        ctx = self.phi.ctx
        fmt = (lambda suf: words.format_word(ctx, tuple(suf))) \
            if ctx.names is not None else list
        return {
            "map": self.phi.describe(),
            "rank": ctx.rank,
            "window": self.window,
            "start": self.start,
            "states": [
                {"last": last, "suffix": fmt(suf), "truncated": trunc}
                for last, suf, trunc in self.states
            ],
            "edges": [
                {"from": s, "to": t, "delta": d}
                for s, t, d in zip(self.edge_src, self.edge_tgt, self.edge_delta)
            ],
        }

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)


def build(phi: Endomorphism, initial_window: Optional[int] = None,
          window_ceiling_factor: int = DEFAULT_WINDOW_CEILING_FACTOR,
          max_states: int = DEFAULT_MAX_STATES) -> Transducer:
    """Construct a verified-closed transducer, doubling the window as needed.

    The initial window defaults to the longest generator image: large enough
    that most maps close immediately, small enough that stored suffixes carry
    no dead context (oversized windows blow up the state count for
    conjugation-like maps, whose suffixes would then memorise arbitrary word
    tails).  Raises TransducerClosureError when the doubling ceiling is hit
    (unbounded cancellation suspected) and StateExplosionError past the
    state budget.
    """
    maximg = max(1, phi.max_image_length)
    window = initial_window if initial_window is not None else maximg
    if window < 1:
        raise ValueError("initial_window must be >= 1")
    ceiling = window_ceiling_factor * maximg
    while True:
        try:
            return _build_at_window(phi, window, max_states)
        except _ClosureViolation:
            if 2 * window > ceiling:
                raise TransducerClosureError(window, ceiling) from None
            window *= 2


def _build_at_window(phi, window, max_states):
    table = phi.letter_images
    num_letters = phi.ctx.num_letters
    start = (-1, (), False)
    ids = {start: 0}
    states = [start]
    edge_src, edge_tgt, edge_delta = [], [], []
    todo = [0]
    while todo:
        sid = todo.pop()
        last, suf, trunc = states[sid]
        suf_len = len(suf)
        for b in range(num_letters):
            if last >= 0 and b == last ^ 1:
                continue
            img = table[b]
            c = 0
            img_len = len(img)
            while c < img_len and c < suf_len and suf[suf_len - 1 - c] == img[c] ^ 1:
                c += 1
            if trunc and c == suf_len:
                raise _ClosureViolation
            new_suf = suf[: suf_len - c] + img[c:]
            new_trunc = trunc
            if len(new_suf) > window:
                new_suf = new_suf[len(new_suf) - window:]
                new_trunc = True
            st = (b, new_suf, new_trunc)
            tid = ids.get(st)
            if tid is None:
                tid = len(states)
                if tid >= max_states:
                    raise StateExplosionError(max_states)
                ids[st] = tid
                states.append(st)
                todo.append(tid)
            edge_src.append(sid)
            edge_tgt.append(tid)
            edge_delta.append(img_len - 2 * c)
    t = Transducer(phi, window, tuple(states),
                   tuple(edge_src), tuple(edge_tgt), tuple(edge_delta))
    maximg = max(1, phi.max_image_length)
    assert all(-window <= d <= maximg for d in t.edge_delta)
    return t


def count_joint(t: Transducer, n: int,
                keep_rows: bool = True,
                out_slack: int = 0,
                validate: bool = True,
                memory_budget: Optional[int] = None) -> JointLengthTable:
    """Run the counting DP up to radius n.

    A cell at level l moves to OUT once its image length exceeds
    ``n + D*(n-l) + out_slack`` where D is the largest single-step decrease:
    no extension of such a word can re-enter image length <= n while its own
    length stays <= n.  With ``validate`` every level checks that live cells
    plus OUT sum to the sphere size.  ``memory_budget`` (bytes, approximate)
    aborts with the largest completed radius.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    ctx = t.phi.ctx
    q = ctx.num_letters - 1
    ns = t.num_states
    D = t.max_step_decrease
    dmin, dmax = t.min_delta, t.max_delta
    src = array("l", t.edge_src)
    tgt = array("l", t.edge_tgt)
    dlt = array("l", t.edge_delta)

    # level 0: the empty word, at the start state, with empty image.
    # Dense slice layout: index = state * width + (m - lo).
    counts = [0] * ns
    counts[t.start] = 1
    lo, mlo, mhi = 0, 0, 0
    width = 1
    curl = 1              # |1| = 0 <= n and |phi(1)| = 0 <= n
    rows = [{0: 1}] if keep_rows else None
    out_levels = [0] if keep_rows else None
    out_total = 0
    empty = False

    for l in range(1, n + 1):
        cap = n + D * (n - l) + out_slack
        if empty:
            out_total *= q
            if keep_rows:
                rows.append({})
                out_levels.append(out_total)
            if validate:
                assert out_total == words.sphere_size(ctx, l)
            continue
        new_lo = max(0, mlo + dmin)
        new_hi = min(cap, mhi + dmax)
        if new_hi < new_lo:
            new_hi = new_lo  # single dummy column; every count exceeds cap
        new_width = new_hi - new_lo + 1
        new_counts = [0] * (ns * new_width)
        moved_out, nmlo, nmhi = dp_step(
            counts, ns, width, lo, mlo - lo, mhi - lo,
            new_counts, new_width, new_lo, cap, src, tgt, dlt,
        )
        out_total = out_total * q + moved_out
        counts, lo, width = new_counts, new_lo, new_width
        if nmlo > nmhi:
            empty = True
            mlo, mhi = 0, -1
        else:
            mlo, mhi = nmlo, nmhi
            jhi = min(mhi, n) - lo
            if jhi >= 0:
                jlo = max(0, mlo - lo)
                for s in range(ns):
                    base = s * width
                    curl += sum(counts[base + jlo: base + jhi + 1])
        if keep_rows:
            row = {}
            if not empty:
                for j in range(max(0, mlo - lo), mhi - lo + 1):
                    m = lo + j
                    tot = sum(counts[s * width + j] for s in range(ns))
                    if tot:
                        row[m] = tot
            rows.append(row)
            out_levels.append(out_total)
        if validate:
            live = sum(counts) if not empty else 0
            assert live + out_total == words.sphere_size(ctx, l), (
                f"level {l}: {live} live + {out_total} out != sphere"
            )
        if memory_budget is not None:
            bits = words.sphere_size(ctx, l).bit_length()
            approx = ns * width * (44 + bits // 8)
            if approx > memory_budget:
                raise EngineMemoryError(memory_budget, l)

    ball = words.ball_size(ctx, n)
    return JointLengthTable(
        ctx, n, tuple(rows) if keep_rows else (), curl, ball - curl, ball,
        out=tuple(out_levels) if keep_rows else None,
    )


def curl_flux_dp(phi: Endomorphism, n: int,
                 transducer: Optional[Transducer] = None,
                 validate: bool = True,
                 memory_budget: Optional[int] = None) -> CurlFluxPoint:
    """Exact curl/flux counts at radius n via the transducer engine.

    Identical contract to exact_count.curl_flux_brute wherever both run.
    """
    t = transducer if transducer is not None else build(phi)
    table = count_joint(t, n, keep_rows=False, validate=validate,
                        memory_budget=memory_budget)
    return CurlFluxPoint(n, table.curl_count, table.flux_count, table.ball)
