"""Compare the compiled kernels against the pure-Python fallback.

Micro-benchmarks run both implementations side by side in-process; the
end-to-end DP benchmark runs each backend in a subprocess (backend selection
happens at import time).

    python benchmarks/bench_kernels.py [--dp-radius 200] [--repeat 3]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time

from curlflux._kernels import _fallback

try:
    from curlflux._kernels import _core
except ImportError:
    _core = None


def bench(fn, *args, repeat=3):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def micro_benchmarks(repeat):
    rng = random.Random(0)
    raw = [rng.randrange(4) for _ in range(2_000_000)]
    shift_table = ((0, 2), (3, 1), (2,), (3,))
    word = []
    for _ in range(500_000):
        c = rng.randrange(4)
        while word and c == word[-1] ^ 1:
            c = rng.randrange(4)
        word.append(c)

    rows = []
    for name, args in (
        ("free_reduce 2M letters", (raw,)),
        ("apply_images 500k-letter word", (shift_table, word)),
    ):
        fn_name = name.split()[0]
        py = bench(getattr(_fallback, fn_name), *args, repeat=repeat)
        cy = bench(getattr(_core, fn_name), *args, repeat=repeat) if _core else None
        rows.append((name, py, cy))
    return rows


DP_PAYLOAD = """
import json, time
import curlflux as cf
from curlflux._kernels import BACKEND
phi = cf.Endomorphism(cf.GroupContext(2), ((0, 2), (2,)))
t = cf.build(phi)
start = time.perf_counter()
point = cf.curl_flux_dp(phi, {radius}, transducer=t)
elapsed = time.perf_counter() - start
print(json.dumps({{"backend": BACKEND, "seconds": elapsed,
                   "curl_count_digits": len(str(point.curl_count))}}))
"""


def dp_benchmark(radius):
    results = []
    for force in ("0", "1"):
        env = dict(os.environ, CURLFLUX_FORCE_PYTHON=force)
        out = subprocess.run(
            [sys.executable, "-c", DP_PAYLOAD.format(radius=radius)],
            env=env, capture_output=True, text=True, check=True,
        )
        results.append(json.loads(out.stdout))
    return results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dp-radius", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not built; showing fallback timings only")

    print(f"{'kernel':38s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, py, cy in micro_benchmarks(args.repeat):
        if cy is None:
            print(f"{name:38s} {py:9.3f}s {'-':>10s}")
        else:
            print(f"{name:38s} {py:9.3f}s {cy:9.3f}s {py / cy:7.1f}x")

    results = dp_benchmark(args.dp_radius)
    label = f"curl_flux_dp n={args.dp_radius} (end to end)"
    by_backend = {r["backend"]: r["seconds"] for r in results}
    py = by_backend.get("python")
    cy = by_backend.get("cython")
    if cy is not None and py is not None:
        print(f"{label:38s} {py:9.3f}s {cy:9.3f}s {py / cy:7.1f}x")
    else:
        print(f"{label:38s} {py:9.3f}s {'-':>10s}")


if __name__ == "__main__":
    main()
