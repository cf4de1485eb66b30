"""Average optimal cost against number of available vendors on random instances.

Usage: python scripts/vendor_count_cost.py [--instances N] [--suppliers N] [--seed N]
"""

import argparse
import statistics
from collections import defaultdict

import numpy as np

from multivendor.flow import Status
from multivendor.model import make_scenario
from multivendor.sweep import sweep_subsets


def random_instance(gen, n_suppliers):
    items = ["optics", "switch"]
    demands = [(f"{k}-{j}", k, int(gen.integers(1, 6))) for k in items for j in range(2)]
    suppliers = [(f"v{i}", int(gen.integers(10, 25))) for i in range(n_suppliers)]
    costs = {}
    for s, _ in suppliers:
        for name, k, _ in demands:
            if gen.random() < 0.85:
                costs[(s, k, name)] = round(float(gen.uniform(5, 20)), 2)
    return make_scenario(suppliers, demands, costs, items=items)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--suppliers", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    gen = np.random.default_rng(args.seed)
    ratio = defaultdict(list)
    infeasible = defaultdict(int)
    total = defaultdict(int)
    for _ in range(args.instances):
        r = sweep_subsets(random_instance(gen, args.suppliers))
        if r.baseline_z is None:
            continue
        for e in r.entries:
            total[e.size] += 1
            if e.status is Status.INFEASIBLE:
                infeasible[e.size] += 1
            else:
                ratio[e.size].append(e.z / r.baseline_z)
    print("vendors  mean z/z_all  infeasible%")
    for k in sorted(total):
        print(f"{k:>7}  {statistics.fmean(ratio[k]) if ratio[k] else float('nan'):>12.4f}  {100 * infeasible[k] / total[k]:>10.1f}")


if __name__ == "__main__":
    main()
