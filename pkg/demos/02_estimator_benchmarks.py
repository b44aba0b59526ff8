"""Reproduce the accuracy and speed comparisons on a small synthetic grid.

Each grid cell draws a fresh true concentration vector with components in
(0, 1], generates that many samples, and fits with every method. The CSVs
written here carry one row per (cell, method) with errors and timings.
"""

import numpy as np

from polyalda import BenchGrid, run_accuracy_bench, run_speed_bench, write_bench_csv

grid = BenchGrid(
    dimension=10,
    alpha_upper=1.0,
    sample_counts=(50, 200, 800),
    element_counts=(1000, 8000),
    repeats=2,
    seed=42,
)

print("accuracy benchmark (per-cell mean absolute error)")
records = run_accuracy_bench(grid)
write_bench_csv(records, "accuracy_bench.csv")
by_cell = {}
for r in records:
    by_cell.setdefault((r.n_samples, r.n_elements), {})[r.method] = r
print(f"{'N':>5} {'elements':>9} {'moments':>9} {'fpi':>9} {'gn':>9}")
for (n, e), cell in sorted(by_cell.items()):
    print(f"{n:>5} {e:>9} {cell['moments'].mean_abs_err:>9.4f} "
          f"{cell['fpi'].mean_abs_err:>9.4f} {cell['gn'].mean_abs_err:>9.4f}")

print("\nspeed benchmark (sweeps to convergence at 1e-6)")
speed = run_speed_bench(grid)
write_bench_csv(speed, "speed_bench.csv")
by_cell = {}
for r in speed:
    by_cell.setdefault((r.n_samples, r.n_elements), {})[r.method] = r
ratios = []
print(f"{'N':>5} {'elements':>9} {'fpi':>6} {'gn':>6} {'ratio':>7}")
for (n, e), cell in sorted(by_cell.items()):
    ratio = cell["gn"].iterations / cell["fpi"].iterations
    ratios.append(ratio)
    print(f"{n:>5} {e:>9} {cell['fpi'].iterations:>6} {cell['gn'].iterations:>6} {ratio:>7.2f}")
print(f"\nmedian sweep ratio gn/fpi: {np.median(ratios):.2f}")
print("wrote accuracy_bench.csv and speed_bench.csv")
