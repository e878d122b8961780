"""Compare the compiled and pure-Python chord kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

from geowalk import _backend
from geowalk.budget import accuracy_budget
from geowalk.integrator import approx_geodesic
from geowalk.manifolds import UnitTangent, ellipsoid_model
from geowalk.oracle import chord_step


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    body = ellipsoid_model([1.0, 1.0, 1.2])
    b = body.bounds
    theta = accuracy_budget(b, b.alpha, b.beta, 0.2).theta_eps
    s = UnitTangent([1.0, 0.0, 0.0], [0.0, 0.6, 0.8])
    cases = {
        "chord_step": (lambda: chord_step(body, s, theta), 200),
        "approx_geodesic": (lambda: approx_geodesic(body, s, b.t_max, theta), 3),
    }
    backends = ["python"] + (["cython"] if _backend.compiled_kernels is not None else [])
    calls = approx_geodesic(body, s, b.t_max, theta).star_calls
    print(f"ellipsoid (1, 1, 1.2), theta = {theta:.4g}, {calls} chord steps per geodesic")
    print(f"{'case':<18}{'backend':<10}{'best ms':>10}")
    results = {}
    for name, (fn, number) in cases.items():
        for backend in backends:
            _backend.kernels = _backend.get_kernels(backend)
            best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
            results[name, backend] = best
            print(f"{name:<18}{backend:<10}{1e3 * best:>10.3f}")
    if "cython" in backends:
        for name in cases:
            print(f"{name}: speedup {results[name, 'python'] / results[name, 'cython']:.1f}x")
    _backend.kernels = _backend.get_kernels(_backend.BACKEND)


if __name__ == "__main__":
    main()
