"""Ratios, n-th roots, rate trends, and executable property suites.

Counts stay exact integers end to end; floats appear only here, at the
reporting boundary.  Rate limits are never reported as converged values:
the output is always the finite-n root sequence with successive differences
so convergence can be judged, not asserted.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations as iter_permutations
from typing import Optional, Sequence

from curlflux import exact_count, transducer, words
from curlflux.errors import RankMismatchError
from curlflux.exact_count import CurlFluxPoint
from curlflux.morphisms import (
    Endomorphism,
    VerifiedAutomorphism,
    compose,
    identity,
    inner,
    permutation,
    power_map,
)
from curlflux.words import GroupContext

#: Tolerance for asymptotic (rate-level) checks at the largest computed n,
#: sized to the observable convergence speed of the root sequences.
RATE_TOLERANCE = 0.02

#: Auto engine: brute force while the ball is at most this many words.
BRUTE_BALL_LIMIT = 10**7


def exact_ratio(count: int, total: int) -> float:
    """Correctly rounded float of count/total for big integers."""
    return float(Fraction(count, total))


def big_root(count: int, total: int, n: int) -> float:
    """(count/total)^(1/n) computed in the log domain from exact integers.

    Uses exact-integer logarithms (top-bits mantissa plus bit-length
    scaling); relative error is a few ulps, far inside 1e-12.  A zero count
    gives root 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if count == 0:
        return 0.0
    return math.exp((math.log(count) - math.log(total)) / n)


@dataclass(frozen=True)
class RatePoint:
    n: int
    value: float          # ratio for curl/flux, raw value for growth
    root: float
    count: Optional[int] = None
    ball: Optional[int] = None


@dataclass(frozen=True)
class RateEstimate:
    """Finite-n approximants of a rate: value/root per n plus a trend tail."""

    kind: str             # 'curl' | 'flux' | 'growth'
    points: tuple
    trend_roots: tuple = field(default=())
    trend_diffs: tuple = field(default=())

    def last_root(self) -> float:
        return self.points[-1].root


def _with_trend(kind, pts, tail=5):
    roots = tuple(p.root for p in pts[-tail:])
    diffs = tuple(b - a for a, b in zip(roots, roots[1:]))
    return RateEstimate(kind, tuple(pts), roots, diffs)


def curl_roots(points: Sequence[CurlFluxPoint]) -> RateEstimate:
    pts = []
    for p in points:
        if p.n < 1:
            continue
        ratio = exact_ratio(p.curl_count, p.ball)
        assert 0.0 <= ratio <= 1.0
        pts.append(RatePoint(p.n, ratio, big_root(p.curl_count, p.ball, p.n),
                             p.curl_count, p.ball))
    return _with_trend("curl", pts)


def flux_roots(points: Sequence[CurlFluxPoint]) -> RateEstimate:
    pts = []
    for p in points:
        if p.n < 1:
            continue
        ratio = exact_ratio(p.flux_count, p.ball)
        assert 0.0 <= ratio <= 1.0
        pts.append(RatePoint(p.n, ratio, big_root(p.flux_count, p.ball, p.n),
                             p.flux_count, p.ball))
    return _with_trend("flux", pts)


def growth_rate_points(phi: Endomorphism, m: int, n_max: int,
                       **caps) -> RateEstimate:
    """Growth values and their n-th roots for n = 1..n_max; no limit claimed."""
    pts = []
    for gp in exact_count.growth_trajectory(phi, m, n_max, **caps):
        if gp.n < 1:
            continue
        root = math.exp(math.log(gp.value) / gp.n) if gp.value else 0.0
        pts.append(RatePoint(gp.n, float(gp.value), root))
    return _with_trend("growth", pts)


# -- engines --------------------------------------------------------------

def curl_flux_series(phi: Endomorphism, n_max: int, engine: str = "auto",
                     **dp_kwargs):
    """CurlFluxPoint for every n = 0..n_max from a single engine run.

    One enumeration (brute) or one DP sweep (dp) at the largest radius
    yields every smaller radius exactly.
    """
    if engine == "auto":
        engine = ("brute"
                  if words.ball_size(phi.ctx, n_max) <= BRUTE_BALL_LIMIT
                  else "dp")
    if engine == "brute":
        table = exact_count.joint_length_histogram(phi, n_max)
    elif engine == "dp":
        t = transducer.build(phi)
        table = transducer.count_joint(t, n_max, keep_rows=True, **dp_kwargs)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return [table.point(n) for n in range(n_max + 1)]


# -- property reports ------------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one executable property over a batch of instances.

    ``violations`` are hard failures; ``notes`` record soft findings that
    are reported but not fatal (e.g. sub-threshold roots at small n, where
    the property is asymptotic).
    """

    property_id: str
    instances: int
    violations: tuple
    notes: tuple = ()
    worst_margin: Optional[float] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "property": self.property_id,
            "instances": self.instances,
            "violations": list(self.violations),
            "notes": list(self.notes),
            "worst_margin": self.worst_margin,
            "ok": self.ok,
        }


def check_inverse_symmetry(auto: VerifiedAutomorphism, n_max: int,
                           engine: str = "auto") -> PropertyReport:
    """Curl and flux functions of an automorphism equal its inverse's,
    as exact integers, at every radius up to n_max."""
    fwd = curl_flux_series(auto.forward, n_max, engine)
    bwd = curl_flux_series(auto.inverse, n_max, engine)
    violations = []
    for pf, pb in zip(fwd, bwd):
        if pf.curl_count != pb.curl_count or pf.flux_count != pb.flux_count:
            violations.append(
                f"n={pf.n}: forward (curl={pf.curl_count}, flux={pf.flux_count})"
                f" != inverse (curl={pb.curl_count}, flux={pb.flux_count})"
            )
    return PropertyReport("inverse-symmetry", n_max + 1, tuple(violations))


_INEQUALITIES = ("a", "b", "c", "d", "e")


def check_composition_inequalities(alpha: Endomorphism, beta: Endomorphism,
                                   n_max: int, engine: str = "auto",
                                   automorphisms: bool = True) -> PropertyReport:
    """Count inequalities relating a composite to its factors.

    With ``composite = compose(alpha, beta)`` (alpha applied first):

        (a) curl(composite) <= curl(beta) + flux(alpha)
        (b) flux(composite) <= flux(alpha) + flux(beta)
        (c) curl(composite) >= curl(beta) - flux(alpha)
        (d) flux(composite) >= |flux(beta) - flux(alpha)|
        (e) flux(composite) >= curl(alpha) - curl(beta)

    (a) and (b) need both maps injective; (c)-(e) need automorphisms and are
    skipped when ``automorphisms`` is false.  All comparisons are exact
    integer comparisons at every radius up to n_max.
    """
    if alpha.ctx.rank != beta.ctx.rank:
        raise RankMismatchError("composition inequality check needs equal ranks")
    comp = compose(alpha, beta)
    sa = curl_flux_series(alpha, n_max, engine)
    sb = curl_flux_series(beta, n_max, engine)
    sc = curl_flux_series(comp, n_max, engine)
    violations = []
    worst = None

    def note(tag, n, margin):
        nonlocal worst
        margin = int(margin)
        if worst is None or margin < worst:
            worst = margin
        if margin < 0:
            violations.append(f"({tag}) violated at n={n} by {-margin}")

    for pa, pb, pc in zip(sa, sb, sc):
        n = pa.n
        note("a", n, pb.curl_count + pa.flux_count - pc.curl_count)
        note("b", n, pa.flux_count + pb.flux_count - pc.flux_count)
        if automorphisms:
            note("c", n, pc.curl_count - pb.curl_count + pa.flux_count)
            note("d", n, pc.flux_count - pb.flux_count + pa.flux_count)
            note("d", n, pc.flux_count - pa.flux_count + pb.flux_count)
            note("e", n, pc.flux_count - pa.curl_count + pb.curl_count)
    checked = _INEQUALITIES if automorphisms else _INEQUALITIES[:2]
    return PropertyReport(
        f"composition-inequalities-{''.join(checked)}",
        n_max + 1, tuple(violations), worst_margin=float(worst),
    )


def check_power_map_formula(rank: int, k: int, n_max: int,
                            root_radius: int = 50,
                            tolerance: float = RATE_TOLERANCE) -> PropertyReport:
    """For the k-th power map the curl count at radius n is exactly the
    ball of radius floor(n/k), and the curl root approaches
    (2r-1)^(1/k) / (2r-1)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    ctx = GroupContext(rank)
    phi = power_map(ctx, k)
    t = transducer.build(phi)
    table = transducer.count_joint(t, n_max, keep_rows=True)
    violations = []
    for n in range(n_max + 1):
        expected = words.ball_size(ctx, n // k)
        got = table.curl_at(n)
        if got != expected:
            violations.append(f"n={n}: curl {got} != ball({n // k}) = {expected}")
    point = transducer.curl_flux_dp(phi, root_radius, transducer=t)
    root = big_root(point.curl_count, point.ball, root_radius)
    q = 2 * rank - 1
    target = q ** (1.0 / k) / q
    margin = tolerance - abs(root - target)
    if margin < 0:
        violations.append(
            f"root at n={root_radius} is {root:.6f}, "
            f"target {target:.6f}, tolerance {tolerance}"
        )
    return PropertyReport(f"power-map-curl-r{rank}-k{k}", n_max + 2,
                          tuple(violations), worst_margin=margin)


def check_flux_gap(phi: Endomorphism, n: int,
                   engine: str = "auto") -> PropertyReport:
    """Flux root at radius n for an injective map with a long image.

    The gap (no flux rate strictly between 0 and 1/4) is asymptotic, so a
    sub-0.25 root at finite n is reported as a note, never a violation.
    Maps sending every generator to a single letter are exempt: their flux
    is identically zero.
    """
    notes = []
    if phi.max_image_length <= 1:
        series = curl_flux_series(phi, n, engine)
        if series[-1].flux_count != 0:
            return PropertyReport(
                "flux-gap", 1,
                (f"single-letter images but flux {series[-1].flux_count} != 0",),
            )
        return PropertyReport("flux-gap", 1, (), ("exempt: length-preserving",))
    point = curl_flux_series(phi, n, engine)[-1]
    root = big_root(point.flux_count, point.ball, n)
    if root < 0.25:
        notes.append(f"flux root {root:.6f} < 0.25 at n={n} (finite-n report)")
    else:
        notes.append(f"flux root {root:.6f} at n={n}")
    return PropertyReport("flux-gap", 1, (), tuple(notes),
                          worst_margin=root - 0.25)


def letter_permutations(ctx: GroupContext):
    """All automorphisms permuting the letter set (2^r * r! of them)."""
    result = []
    r = ctx.rank
    for perm in iter_permutations(range(r)):
        for signs in range(2**r):
            m = [0] * (2 * r)
            for i in range(r):
                flip = (signs >> i) & 1
                m[2 * i] = 2 * perm[i] + flip
                m[2 * i + 1] = 2 * perm[i] + 1 - flip
            result.append(permutation(ctx, m))
    return result


def check_invariance_under_simple_composition(
        phi: Endomorphism, n_exact: int = 8, n_rate: int = 50,
        conjugators=((0,), (0, 2)), engine: str = "auto",
        max_permutations: int = 8) -> PropertyReport:
    """Composing with a letter permutation preserves the curl/flux functions
    exactly (either order); composing with a conjugation preserves the rates,
    checked as root agreement within RATE_TOLERANCE at n_rate."""
    base = curl_flux_series(phi, n_exact, engine)
    violations = []
    perms = letter_permutations(phi.ctx)[:max_permutations]
    instances = 0
    for pi in perms:
        for label, comp in (("pi-second", compose(phi, pi)),
                            ("pi-first", compose(pi, phi))):
            instances += 1
            series = curl_flux_series(comp, n_exact, engine)
            for pb, pc in zip(base, series):
                if pb.curl_count != pc.curl_count:
                    violations.append(
                        f"{label}: curl differs at n={pb.n}: "
                        f"{pb.curl_count} != {pc.curl_count}"
                    )
                    break
    base_root = None
    notes = []
    for g in conjugators:
        conj = inner(phi.ctx, tuple(g))
        for label, comp in (("inner-second", compose(phi, conj)),
                            ("inner-first", compose(conj, phi))):
            instances += 1
            if base_root is None:
                p = transducer.curl_flux_dp(phi, n_rate)
                base_root = big_root(p.curl_count, p.ball, n_rate)
            pc = transducer.curl_flux_dp(comp, n_rate)
            root = big_root(pc.curl_count, pc.ball, n_rate)
            notes.append(f"{label} g={g}: root {root:.6f} vs {base_root:.6f}")
            if abs(root - base_root) > RATE_TOLERANCE:
                violations.append(
                    f"{label}: curl root at n={n_rate} drifted "
                    f"{abs(root - base_root):.4f} > {RATE_TOLERANCE}"
                )
    return PropertyReport("simple-composition-invariance", instances,
                          tuple(violations), tuple(notes))


# -- the standard battery --------------------------------------------------

def standard_battery():
    """The rank-2 endomorphism battery exercised across the test suite."""
    ctx = GroupContext(2)
    x, X, y, Y = 0, 1, 2, 3
    maps = [
        identity(ctx),
        permutation(ctx, (y, Y, x, X)),          # swap generators
        permutation(ctx, (X, x, Y, y)),          # invert both
        inner(ctx, (x,)),
        inner(ctx, (x, y)),
        Endomorphism(ctx, ((x, y), (y,)), label="shift"),
        Endomorphism(ctx, ((x, y, y), (y,)), label="double-shift"),
        Endomorphism(ctx, ((x, x), (y, y)), label="square"),
        Endomorphism(ctx, ((x, y), (x,)), label="fibonacci"),
        Endomorphism(ctx, ((x, y), ()), label="collapse"),
    ]
    return maps


def random_injective_endomorphism(ctx: GroupContext, rng: random.Random,
                                  moves: int = 3) -> Endomorphism:
    """Injective non-automorphism: Nielsen moves mixed with a power map.

    Every factor is injective (automorphisms trivially; the k-th power map
    multiplies all lengths by k so has trivial kernel), hence so is the
    composite.
    """
    from curlflux.morphisms import nielsen_moves

    elementary = nielsen_moves(ctx)
    phi = power_map(ctx, rng.choice((2, 3)))
    for _ in range(moves):
        nxt = rng.choice(elementary)[0]
        if rng.random() < 0.5:
            phi = compose(phi, nxt)
        else:
            phi = compose(nxt, phi)
    return phi
