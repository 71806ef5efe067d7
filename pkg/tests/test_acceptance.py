"""Acceptance suite: one test per release criterion, tolerances pinned.

Each test registers a PASS/FAIL line printed in the terminal summary.
Expected table values are frozen 6-significant-digit strings; counts are
compared as exact integers.
"""

import math
import random
import time

import pytest

import curlflux as cf
from curlflux import metrics, morphisms, transducer
from curlflux.errors import TransducerClosureError

X, Xi, Y, Yi = 0, 1, 2, 3


def sig6(x: float) -> str:
    return "%.6g" % x


def dp_table(phi, n):
    t = cf.build(phi)
    return cf.count_joint(t, n, keep_rows=True)


def battery_with_transducers():
    pairs = []
    for phi in metrics.standard_battery():
        try:
            pairs.append((phi, cf.build(phi)))
        except TransducerClosureError:
            continue
    return pairs


class TestTableReproduction:
    def test_criterion_01_shift_map_rows(self, criterion, shift_map):
        expected = {
            10: ("0.331634", "0.960509"),
            20: ("0.181176", "0.990055"),
            50: ("0.0372579", "0.999241"),
            100: ("0.0033803", "0.999966"),
        }
        with criterion(1, "first-table rows n=10..100 at 6 digits, "
                          "n=100 under 5 minutes"):
            start = time.perf_counter()
            table = dp_table(shift_map, 100)
            for n, (curl_ratio, flux_root) in expected.items():
                p = table.point(n)
                assert sig6(metrics.exact_ratio(p.curl_count, p.ball)) == curl_ratio
                assert sig6(metrics.big_root(p.flux_count, p.ball, n)) == flux_root
            elapsed = time.perf_counter() - start
            assert elapsed <= 300.0, f"n=100 sweep took {elapsed:.1f}s"

    def test_criterion_01s_stretch_row_500(self, criterion, shift_map):
        with criterion("1s", "stretch: n=500 curl ratio 6.71114e-11"):
            p = cf.curl_flux_dp(shift_map, 500)
            assert sig6(metrics.exact_ratio(p.curl_count, p.ball)) == "6.71114e-11"

    def test_criterion_02_stabilized_map(self, criterion, stab_map, shift_map):
        with criterion(2, "second-table rows n=10,20 and curl roots below "
                          "the rank-2 map's"):
            table3 = dp_table(stab_map, 50)
            table2 = dp_table(shift_map, 50)
            expected = {10: "0.220658", 20: "0.0832884"}
            for n, ratio in expected.items():
                p = table3.point(n)
                assert sig6(metrics.exact_ratio(p.curl_count, p.ball)) == ratio
            for n in (10, 20, 50):
                p3 = table3.point(n)
                p2 = table2.point(n)
                root3 = metrics.big_root(p3.curl_count, p3.ball, n)
                root2 = metrics.big_root(p2.curl_count, p2.ball, n)
                assert root3 < root2

    def test_criterion_03_square_of_shift(self, criterion, double_shift_map):
        with criterion(3, "third-table rows n=10,20 at 6 digits"):
            table = dp_table(double_shift_map, 20)
            expected = {10: "0.143331", 20: "0.0408009"}
            for n, ratio in expected.items():
                p = table.point(n)
                assert sig6(metrics.exact_ratio(p.curl_count, p.ball)) == ratio


class TestEngineAgreement:
    def test_criterion_04_oracle_equivalence(self, criterion):
        with criterion(4, "brute and DP agree exactly, battery maps, n <= 8"):
            pairs = battery_with_transducers()
            assert len(pairs) >= 9
            for phi, t in pairs:
                brute = cf.joint_length_histogram(phi, 8)
                dp = cf.count_joint(t, 8)
                for n in range(1, 9):
                    assert dp.curl_at(n) == brute.curl_at(n), phi.describe()

    def test_criterion_05_ball_identity(self, criterion):
        with criterion(5, "curl + flux == |ball| exactly on every point, "
                          "both engines"):
            for phi, t in battery_with_transducers():
                for n in range(9):
                    b = cf.curl_flux_brute(phi, n)
                    d = cf.curl_flux_dp(phi, n, transducer=t)
                    ball = cf.ball_size(phi.ctx, n)
                    assert b.curl_count + b.flux_count == ball
                    assert d.curl_count + d.flux_count == ball


class TestInverseSymmetry:
    def test_criterion_06_inverse_symmetry(self, criterion, ctx2):
        with criterion(6, "curl/flux functions equal for phi and its inverse "
                          "on 20 verified automorphisms"):
            rng = random.Random(612)
            autos = [morphisms.random_automorphism(ctx2, rng.randrange(1, 5), rng)
                     for _ in range(20)]
            for auto in autos:
                brute = metrics.check_inverse_symmetry(auto, 8, "brute")
                assert brute.ok, brute.violations
                dp = metrics.check_inverse_symmetry(auto, 40, "dp")
                assert dp.ok, dp.violations


class TestCompositionBounds:
    def test_criterion_07_composition_inequalities(self, criterion, ctx2):
        with criterion(7, "five composite-count inequalities on 50 "
                          "automorphism pairs and 20 injective pairs"):
            rng = random.Random(746)
            for _ in range(50):
                a = morphisms.random_automorphism(ctx2, rng.randrange(1, 4), rng)
                b = morphisms.random_automorphism(ctx2, rng.randrange(1, 4), rng)
                report = metrics.check_composition_inequalities(
                    a.forward, b.forward, 7, "brute")
                assert report.ok, report.violations
            for _ in range(20):
                a = metrics.random_injective_endomorphism(ctx2, rng, moves=2)
                b = metrics.random_injective_endomorphism(ctx2, rng, moves=2)
                report = metrics.check_composition_inequalities(
                    a, b, 7, "brute", automorphisms=False)
                assert report.ok, report.violations


class TestPowerMapCurl:
    def test_criterion_08_power_map_formula(self, criterion):
        with criterion(8, "power-map curl counts exact to n=40, roots near "
                          "(2r-1)^(1/k)/(2r-1) at n=50"):
            for rank, k in ((2, 2), (2, 3), (2, 5), (3, 2)):
                report = metrics.check_power_map_formula(
                    rank, k, 40, root_radius=50, tolerance=0.02)
                assert report.ok, (rank, k, report.violations)


class TestNonInjective:
    def test_criterion_09_collapse_map(self, criterion, collapse_map):
        with criterion(9, "non-injective map: flux strictly between 0 and 1 "
                          "at n=8; transducer fails deterministically"):
            p = cf.curl_flux_brute(collapse_map, 8)
            assert 0 < p.flux_count < p.ball
            assert p.curl_count == 12097 and p.ball == 13121
            messages = []
            for _ in range(2):
                with pytest.raises(TransducerClosureError) as exc_info:
                    cf.build(collapse_map)
                messages.append(str(exc_info.value))
            assert messages[0] == messages[1]
            assert "brute force or sampling" in messages[0]


class TestMonteCarlo:
    def test_criterion_10_calibration(self, criterion, shift_map, ctx2):
        with criterion(10, "10^5-sample CI covers the exact ratio at n=10; "
                           "CI coverage >= 90% over 200 runs"):
            est = cf.estimate_curl_ratio(shift_map, 10, 100_000, seed=7)
            assert abs(est.point - 0.331634) <= est.ci95
            exact = cf.curl_flux_brute(shift_map, 6)
            truth = exact.curl_count / exact.ball
            covered = 0
            for i in range(200):
                run = cf.estimate_curl_ratio(shift_map, 6, 2000, seed=1000 + i)
                if abs(run.point - truth) <= run.ci95:
                    covered += 1
            assert covered >= 180, f"coverage {covered}/200"


class TestGrowthSeparation:
    def test_criterion_11_linear_vs_fibonacci(self, criterion, shift_map,
                                              fibonacci_map):
        with criterion(11, "linear growth n+1 to n=30; Fibonacci growth "
                           "exact to n=25 with root > 1.55"):
            from curlflux.exact_count import growth_trajectory

            values = [gp.value for gp in growth_trajectory(shift_map, 1, 30)]
            assert values == [n + 1 for n in range(31)]

            fib = [1, 1]
            while len(fib) < 30:
                fib.append(fib[-1] + fib[-2])
            got = [gp.value for gp in growth_trajectory(fibonacci_map, 1, 25)]
            expected = [1] + [fib[n + 1] for n in range(1, 26)]
            assert got == expected
            root25 = math.exp(math.log(got[25]) / 25)
            assert root25 > 1.55
