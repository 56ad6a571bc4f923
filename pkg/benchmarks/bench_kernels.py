"""Compare the compiled and numpy kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from sasred import _pykernels, levelset

try:
    from sasred import _ckernels
except ImportError:
    _ckernels = None


def bench_residual(mod, spec, x, number):
    s = spec.system
    return min(timeit.repeat(lambda: mod.residual_jacobian(x, s.rows, s.ia, s.ib, s.coef, s.const, s.n_rows),
                             number=number, repeat=5)) / number


def bench_enumeration(mod, bound, number):
    return min(timeit.repeat(lambda: mod.admissible_triples(bound), number=number, repeat=3)) / number


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--bound", type=int, default=60)
    args = ap.parse_args()
    mods = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled extension not built; timing the numpy fallback only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<48}" + "".join(f"{name:>14}" for name, _ in mods))
    for spec in (levelset.triple_spec((1, 2, 3)), levelset.quad_spec((0, 1, 2, 3)),
                 levelset.theta_spec(((1, 0, 1), (0, 1, 1)))):
        x = rng.standard_normal(spec.n_real)
        times = [bench_residual(m, spec, x, args.repeat) for _, m in mods]
        label = f"residual+jacobian {spec.family} {spec.weights}"
        print(f"{label:<48}" + "".join(f"{t * 1e6:>11.2f} us" for t in times))
    times = [bench_enumeration(m, args.bound, 3) for _, m in mods]
    print(f"{'admissible triples to ' + str(args.bound):<48}" + "".join(f"{t * 1e3:>11.2f} ms" for t in times))
    sample_spec = levelset.triple_spec((1, 2, 3))
    t = min(timeit.repeat(lambda: levelset.sample_level_set(sample_spec, 100, 42), number=1, repeat=3))
    print(f"sampling 100 points of (1,2,3) with the active backend: {t:.3f} s")


if __name__ == "__main__":
    main()
