import numpy as np

from tsylv.kernels import shuffle_block_structure

# Real Schur factors with one 2x2 block each.
A1 = np.triu(np.ones((4, 4)))
A1[2, 1] = -1.0
A2 = np.triu(np.ones((3, 3)))
A2[2, 1] = -1.0


def show(M):
    for row in M:
        print(" ".join("x" if v else "." for v in row))


for kind in ("laplace", "kron"):
    sizes, perm, M = shuffle_block_structure(A1, A2, kind, return_matrix=True)
    print(f"{kind}: diagonal blocks {sizes}")
    show(M != 0)
    print()
