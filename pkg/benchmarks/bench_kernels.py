"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import timeit

import numpy as np

from lobachevsky import _kernels_py
from lobachevsky.horosphere import Horosphere
from lobachevsky.minkowski import Geodesic, HPoint, IdealPoint
from lobachevsky.parallels import _ray_frame

try:
    from lobachevsky import _kernels as _compiled
except ImportError:
    _compiled = None


def workloads():
    rng = np.random.default_rng(0)
    w = rng.normal(size=(2, 3))
    d = rng.uniform(0, 2, size=(2, 1))
    u, v = np.hstack([np.cosh(d), np.sinh(d) * w / np.linalg.norm(w, axis=1, keepdims=True)])
    h = Horosphere(IdealPoint(np.array([1.0, 1.0, 0.0, 0.0])), 1.0, 1.0)
    path = h.chart.embed_many(np.linspace(0, 1, 257)[:, None] * np.array([[3.0, -2.0]]))
    l = Geodesic(HPoint.origin(2), np.array([0.0, 1.0, 0.0]))
    P = HPoint(np.array([math.cosh(1.0), 0.0, math.sinh(1.0)]))
    fr = _ray_frame(P, l)
    return {
        "hdist": lambda k: k.hdist(u, v, 1.0),
        "chord_length(257 pts)": lambda k: k.chord_length(path, 1.0),
        "bisect_boundary(tol 1e-10)": lambda k: k.bisect_boundary(
            fr.normal, P.x, fr.e_foot, fr.e_perp, 1.0, 1e-10, math.pi / 2 - 1e-10, 1e-10, 60),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()
    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.append(("cython", _compiled))
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':28s}" + "".join(f"{name:>14s}" for name, _ in backends) + "   speedup")
    for label, fn in workloads().items():
        times = []
        for _, mod in backends:
            best = min(timeit.repeat(lambda: fn(mod), number=args.repeat, repeat=3))
            times.append(best / args.repeat * 1e6)
        ratio = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
        print(f"{label:28s}" + "".join(f"{t:12.2f}us" for t in times) + "  " + ratio)


if __name__ == "__main__":
    main()
