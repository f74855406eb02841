import numpy as np

from tsylv import GSylvProblem, SolverConfig, solve_gsylv
from tsylv.bench import sylvester_baseline
from tsylv.oracle import oracle_solve

rng = np.random.default_rng(1)
dims = (9, 7, 6)

# X x_1 A1 + X x_1 C x_2 A2 x_3 A3 = B
A = [rng.standard_normal((n, n)) for n in dims]
C = rng.standard_normal((dims[0], dims[0]))
B = rng.standard_normal(dims)
problem = GSylvProblem(A, C, B)

X_ref = oracle_solve(problem)  # dense LU on the 378 x 378 assembled matrix

for cfg in (SolverConfig(strategy="recursion_only"),
            SolverConfig(strategy="recursion_only", arithmetic="real_quasitriangular"),
            SolverConfig(strategy="merge")):
    rep = solve_gsylv(problem, cfg)
    err = np.linalg.norm(rep.solution - X_ref) / np.linalg.norm(X_ref)
    print(f"{cfg.strategy:15s} {cfg.arithmetic:21s} rel. error {err:.1e}  "
          f"dropped imag {rep.discarded_imag:.1e}")

# Same equation reshaped into a single matrix equation.
rep = sylvester_baseline(problem)
print("reshaped baseline rel. error",
      f"{np.linalg.norm(rep.solution - X_ref) / np.linalg.norm(X_ref):.1e}")
