"""Compare the compiled word-evaluation kernel with the pure-Python fallback.

Also times the two rational backends on the coefficient products that feed
every class sum.  Run from the repository root:

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit
from fractions import Fraction

from rolewicz import kernels
from rolewicz.maps import ceil_family, counterexample_family, interleaved_family
from rolewicz.scalars import Q

CASES = [
    ("counterexample", counterexample_family(), 16, range(1, 9)),
    ("interleaved t=3", interleaved_family(3), 10, range(1, 9)),
    ("ceil (3/2, 5/4)", ceil_family([Q(3, 2), Q(5, 4)]), 2, range(1, 10001)),
]


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(repeat):
    rows = []
    for label, fam, r, starts in CASES:
        starts = list(starts)
        ref = kernels.word_values(fam.maps, r, starts, force="python")
        py = best(lambda: kernels.word_values(fam.maps, r, starts, force="python"), repeat)
        row = {"case": label, "r": r, "words": fam.t**r * len(starts), "python_s": py}
        if kernels.HAVE_EXTENSION:
            assert kernels.word_values(fam.maps, r, starts, force="cython") == ref
            cy = best(lambda: kernels.word_values(fam.maps, r, starts, force="cython"), repeat)
            row.update(cython_s=cy, speedup=py / cy)
        rows.append(row)
    return rows


def _products(make, coeffs, r):
    layer = [make(1)]
    cs = [make(*c) for c in coeffs]
    for _ in range(r):
        layer = [v * c for v in layer for c in cs]
    return sum(layer, make(0))


def bench_rationals(repeat):
    coeffs = [(3, 7), (-5, 11), (13, 17)]
    out = {"r": 9}
    out["fractions_s"] = best(lambda: _products(Fraction, coeffs, 9), repeat)
    try:
        from gmpy2 import mpq
    except ImportError:  # pragma: no cover
        return out
    assert _products(mpq, coeffs, 9) == _products(Fraction, coeffs, 9)
    out["gmpy2_s"] = best(lambda: _products(mpq, coeffs, 9), repeat)
    out["speedup"] = out["fractions_s"] / out["gmpy2_s"]
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", metavar="PATH")
    args = parser.parse_args(argv)

    kern = bench_kernels(args.repeat)
    rats = bench_rationals(args.repeat)
    print(f"extension built: {kernels.HAVE_EXTENSION}")
    print(f"{'case':<18}{'r':>3}{'words':>10}{'python ms':>12}{'cython ms':>12}{'speedup':>9}")
    for row in kern:
        cy = f"{row['cython_s'] * 1e3:12.2f}{row['speedup']:8.1f}x" if "cython_s" in row else f"{'-':>12}{'-':>9}"
        print(f"{row['case']:<18}{row['r']:>3}{row['words']:>10}{row['python_s'] * 1e3:12.2f}{cy}")
    line = f"rational products (3^9 terms): Fraction {rats['fractions_s'] * 1e3:.1f} ms"
    if "gmpy2_s" in rats:
        line += f", gmpy2 {rats['gmpy2_s'] * 1e3:.1f} ms ({rats['speedup']:.1f}x)"
    print(line)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"kernels": kern, "rationals": rats}, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
