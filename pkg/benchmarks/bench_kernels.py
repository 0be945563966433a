"""Compare the compiled and pure-Python integer kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--sizes 16,32,64]

Times ``int_matmul`` and ``row_reduce`` on random integer matrices, then an
end-to-end cohomology computation with each backend swapped in.
"""

import argparse
import random
import timeit

from liemod import kernels
from liemod.liealg import sl2
from liemod.modops import Cohomology, tensor
from liemod.repmod import representation_module


def random_matrix(rng, n, m, bound=9, density=0.6):
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(m)] for _ in range(n)]


def bench(fn, repeat):
    times = timeit.repeat(fn, number=1, repeat=repeat)
    return min(times)


def end_to_end():
    g = sl2()
    ad = representation_module(g, [g.ad(i) for i in range(3)])
    Cohomology(tensor(ad, ad))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="16,32,64")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    found = kernels.backends()
    print(f"backends available: {', '.join(sorted(found))}")
    rng = random.Random(0)
    rows = []
    for n in sizes:
        a = random_matrix(rng, n, n)
        b = random_matrix(rng, n, n)
        r = random_matrix(rng, n, n + 1, bound=5)
        for name, mod in sorted(found.items()):
            t_mul = bench(lambda: mod.int_matmul(a, b, n), args.repeat)
            t_red = bench(lambda: mod.row_reduce(r, n + 1), args.repeat)
            rows.append((n, name, t_mul, t_red))
    print(f"{'n':>4}  {'backend':<8} {'matmul ms':>10} {'row_reduce ms':>14}")
    for n, name, t_mul, t_red in rows:
        print(f"{n:>4}  {name:<8} {t_mul * 1e3:>10.3f} {t_red * 1e3:>14.3f}")

    saved = kernels.int_matmul, kernels.row_reduce
    print("\nend to end: cohomology of ad (x) ad over sl2")
    try:
        for name, mod in sorted(found.items()):
            kernels.int_matmul, kernels.row_reduce = mod.int_matmul, mod.row_reduce
            print(f"  {name:<8} {bench(end_to_end, max(1, args.repeat // 2)) * 1e3:>9.1f} ms")
    finally:
        kernels.int_matmul, kernels.row_reduce = saved


if __name__ == "__main__":
    main()
