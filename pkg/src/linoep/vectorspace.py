"""Real inner-product-space primitives.

A vector is a 1-D float64 array; a vector set is a 2-D float64 array whose
*rows* are the member vectors, so ``V[i]`` is the i-th vector and ``V.shape``
is ``(n, m)``. Arrays returned from :func:`as_vector` and :func:`as_vector_set`
are read-only copies.
"""
import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, EmptySet, InputError

DEFAULT_TOL = 1e-10


def _freeze(a):
    a.setflags(write=False)
    return a


def as_vector(values):
    """Validate ``values`` as a finite 1-D real vector of dimension >= 1."""
    a = np.array(values, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-D vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("vector entries must be finite")
    return _freeze(a)


def as_vector_set(vectors):
    """Validate ``vectors`` as an ordered set of equal-dimension finite vectors.

    Accepts anything ``numpy.array`` understands (a list of lists, a 2-D
    array). An empty sequence gives a ``(0, 0)`` set; operations that need at
    least one vector raise :class:`EmptySet` themselves.
    """
    if isinstance(vectors, np.ndarray):
        a = np.array(vectors, dtype=np.float64)
    else:
        rows = list(vectors)
        if not rows:
            return _freeze(np.zeros((0, 0)))
        dims = {len(r) for r in rows}
        if len(dims) != 1:
            raise DimensionMismatch(f"vectors have differing dimensions {sorted(dims)}")
        a = np.array(rows, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D (n, m) vector set, got shape {a.shape}")
    if a.shape[0] > 0 and a.shape[1] == 0:
        raise DimensionMismatch("vectors must have dimension >= 1")
    if not np.all(np.isfinite(a)):
        raise InputError("vector entries must be finite")
    return _freeze(a)


def inner(a, b):
    """Standard inner product ``sum(a_k * b_k)``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"cannot take inner product of shapes {a.shape} and {b.shape}")
    return float(np.dot(a, b))


def norm_sq(a):
    """Energy of a vector, i.e. its squared Euclidean norm."""
    a = np.asarray(a, dtype=np.float64)
    return float(np.dot(a, a))


def gram(vectors):
    """Gram matrix ``G[i, j] = <v_i, v_j>``.

    Only the upper triangle is computed; the lower triangle is a mirror, so
    the result is exactly symmetric.
    """
    V = as_vector_set(vectors)
    n = V.shape[0]
    G = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = np.dot(V[i], V[j])
    return _freeze(G)


def numerical_rank(vectors, tol=DEFAULT_TOL):
    """Rank of a vector set from a column-pivoted QR factorization.

    A pivot counts when its residual norm ``|R[k, k]|`` exceeds
    ``tol * max_i ||v_i||``, which makes the test invariant to scaling.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    V = as_vector_set(vectors)
    if V.shape[0] == 0:
        raise EmptySet("rank of an empty vector set is undefined")
    scale = float(np.sqrt(np.max(np.einsum("ij,ij->i", V, V))))
    if scale == 0.0:
        return 0
    R = scipy.linalg.qr(V.T, mode="r", pivoting=True)[0]
    pivots = np.abs(np.diagonal(R))
    return int(np.count_nonzero(pivots > tol * scale))


def is_linearly_independent(vectors, tol=DEFAULT_TOL):
    """True when the numerical rank of the set equals its size.

    Sets with more vectors than dimensions are always dependent.

    >>> is_linearly_independent([[1, 1], [2, 2]])
    False
    """
    V = as_vector_set(vectors)
    return numerical_rank(V, tol) == V.shape[0]


def sum_vectors(vectors):
    """Entrywise sum of all vectors in the set."""
    V = as_vector_set(vectors)
    if V.shape[0] == 0:
        raise EmptySet("cannot sum an empty vector set")
    return _freeze(V.sum(axis=0))


def max_norm(vectors):
    """Largest Euclidean norm among the members of a set."""
    V = np.asarray(vectors)
    if V.shape[0] == 0:
        return 0.0
    return float(np.sqrt(np.max(np.einsum("ij,ij->i", V, V))))


def condition_number(vectors):
    """Ratio of extreme singular values of the matrix whose columns are the set."""
    s = np.linalg.svd(as_vector_set(vectors), compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])
