"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""

import argparse
import json
import sys
import timeit

from cubecolor import _kernels

CASES = [
    ("enumerate_proper(3, 4)", lambda k: k.enumerate_proper(3, 4)),
    ("count_avoiding_pairs Q_3 [C_4(Q_4)]",
     lambda k: k.count_avoiding_pairs(_FLAT[k.__name__], 8, 0, len(_FLAT[k.__name__]) // 8)),
    ("count_independent(4)", lambda k: k.count_independent(4)),
    ("independent_masks(4)", lambda k: k.independent_masks(4)),
    ("count_disjoint_pairs Q_4 [i(Q_5)]",
     lambda k: k.count_disjoint_pairs(_MASKS[k.__name__], 0, len(_MASKS[k.__name__]))),
]

_FLAT: dict = {}
_MASKS: dict = {}


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", help="write results here")
    args = p.parse_args(argv)

    backends = {name: mod for name, mod in sorted(_kernels.BACKENDS.items())}
    if "cython" not in backends:
        print("compiled extension not built; timing the fallback only", file=sys.stderr)
    for mod in backends.values():
        _FLAT[mod.__name__] = mod.enumerate_proper(3, 4)
        _MASKS[mod.__name__] = mod.independent_masks(4)

    results = []
    print("%-38s %12s %12s %9s" % ("kernel", "python [s]", "cython [s]", "speedup"))
    for label, fn in CASES:
        row = {"kernel": label}
        values = set()
        for name, mod in backends.items():
            out = fn(mod)
            values.add(out if isinstance(out, int) else bytes(out))
            row[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        if len(values) > 1:
            print("backends disagree on %s" % label, file=sys.stderr)
            return 1
        speed = row["python"] / row["cython"] if "cython" in row and row["cython"] else float("nan")
        row["speedup"] = speed
        results.append(row)
        print("%-38s %12.4f %12s %9.1f" % (label, row["python"],
                                           "%.4f" % row["cython"] if "cython" in row else "-", speed))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
