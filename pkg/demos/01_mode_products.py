import numpy as np

from tsylv.tensor import matricize, mode_multiply, vectorize

# Tensors are plain numpy arrays. The first index varies fastest in memory,
# so vectorize(X) is just X.ravel(order="F").
X = np.arange(1.0, 25.0).reshape(2, 3, 4, order="F")
print("vec(X)[:8] =", vectorize(X)[:8])

# Mode-0 matricization puts the first index on the rows.
print(matricize(X, 0))

# A mode product multiplies one mode by a matrix, Y_(mu) = A X_(mu).
rng = np.random.default_rng(0)
A = [rng.standard_normal((n, n)) for n in X.shape]
Y = X
for mu, Amu in enumerate(A):
    Y = mode_multiply(Y, Amu, mu)

# Products on every mode equal one big Kronecker product acting on vec(X),
# with the last coefficient outermost.
K = np.kron(A[2], np.kron(A[1], A[0]))
print("kron check:", np.allclose(vectorize(Y), K @ vectorize(X)))
