"""Time the quadrature kernel under the compiled and pure-Python backends.

    python benchmarks/bench_quadrature.py [--repeat N]
"""
import argparse
import math
import timeit

from q2fock import _accel
from q2fock.distribution import spectral_params
from q2fock.quadrature import MODE_POWER, MODE_STIELTJES

CASES = [
    # name, a, mode, k, scale, t
    ("field q=1/2 moment 10", 1.5, MODE_POWER, 10, 2.0, 0.0),
    ("field q=1 moment 10", 2.0, MODE_POWER, 10, 2.0, 0.0),
    ("field q=-1/2 mass", 0.5, MODE_POWER, 0, 2.0, 0.0),
    ("q2 a=7/4 stieltjes", 1.75, MODE_STIELTJES, 0, 1.0, 0.5),
]


def args_for(a, mode, k, scale, t):
    if a > 1:
        p = spectral_params(a)
        a1, a2, factored = max(p.a1, 1.0), p.a2, True
    else:
        a1 = a2 = 0.0
        factored = False
    if mode == MODE_STIELTJES:
        return (4 * a / math.pi, a, a1, a2, factored, mode, k, scale, t, 0.0, math.pi / 2, 1e-12, 100_000)
    return (2 * a / math.pi, a, a1, a2, factored, mode, k, scale, t,
            -math.pi / 2, math.pi / 2, 1e-12, 100_000)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=20)
    opts = parser.parse_args()
    backends = [("python", _accel.integrate_family_python)]
    if _accel.integrate_family_compiled is not None:
        backends.append(("cython", _accel.integrate_family_compiled))
    else:
        print("compiled backend unavailable; timing python only")
    print(f"{'case':26s} {'backend':8s} {'evals':>7s} {'ms/call':>9s} {'speedup':>8s}")
    for name, *params in CASES:
        args = args_for(*params)
        base = None
        for label, fn in backends:
            res = fn(*args)
            sec = min(timeit.repeat(lambda: fn(*args), number=1, repeat=opts.repeat))
            base = base or sec
            print(f"{name:26s} {label:8s} {res.evaluations:7d} {sec * 1e3:9.3f} {base / sec:7.1f}x")


if __name__ == "__main__":
    main()
