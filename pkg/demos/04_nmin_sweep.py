import sys

from tsylv.bench import bench_nmin, rows_to_csv

# Cutoff sweep for an order-3 Laplace-like problem. Pure recursion wants a
# small cutoff: its leaves assemble dense operators of size n_min**3. The
# merged solver speeds up as n_min grows (more of the work goes to fast
# matrix-equation solves) and then flattens out.
n = 32
rows = bench_nmin("laplace", 3, n, list(range(2, 13, 2)), strategies=("recursion_only",), reps=3)
rows += bench_nmin("laplace", 3, n, list(range(2, 33, 3)), strategies=("merge",), reps=3)
for r in rows:
    print(f"{r.strategy:15s} n_min={r.n_min:2d}  {r.wall_min_s * 1e3:7.1f} ms")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", newline="") as fh:
        rows_to_csv(rows, fh)
