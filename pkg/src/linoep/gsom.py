"""Classical Gram-Schmidt with explicit coefficient bookkeeping.

The input rows ``y_k`` are written as ``y_k = s_k + sum_{i<k} c_ki s_i`` where
the ``s_k`` are mutually orthogonal. The unit lower triangular matrix of the
``c_ki`` and its column sums give an energy identity for ``sum(y)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import EmptySet, NotLinearlyIndependent
from .vectorspace import DEFAULT_TOL, as_vector_set, max_norm


@dataclass(frozen=True)
class GsomResult:
    input_set: np.ndarray
    orthogonal_set: np.ndarray
    coeff_matrix: np.ndarray
    column_sums: np.ndarray

    @property
    def n(self):
        return self.orthogonal_set.shape[0]

    def reconstruct(self):
        """Rebuild the input as ``coeff_matrix @ orthogonal_set``."""
        return self.coeff_matrix @ self.orthogonal_set

    def orthogonality_residual(self):
        """Largest ``|<s_i, s_j>| / (||s_i|| ||s_j||)`` over ``i != j``."""
        S = self.orthogonal_set
        if self.n < 2:
            return 0.0
        norms = np.linalg.norm(S, axis=1)
        cos = (S @ S.T) / np.outer(norms, norms)
        np.fill_diagonal(cos, 0.0)
        return float(np.max(np.abs(cos)))


@dataclass(frozen=True)
class EnergyIdentity:
    lhs: float
    rhs: float
    residual: float


def gsom_transform(vectors, tol=DEFAULT_TOL):
    """Orthogonalize a linearly independent set in the given order.

    Uses the classical update ``c_ki = <y_k, s_i> / <s_i, s_i>`` (projections
    of the *original* ``y_k``), with no re-orthogonalization.

    Parameters
    ----------
    vectors : array_like, shape (n, m)
        Rows are the input vectors ``y_1 .. y_n``.
    tol : float
        A residual ``s_k`` with ``||s_k|| <= tol * max ||y||`` is treated as
        linear dependence.

    Returns
    -------
    GsomResult

    Raises
    ------
    NotLinearlyIndependent
        If some residual vanishes at tolerance ``tol``.
    """
    Y = as_vector_set(vectors)
    n = Y.shape[0]
    if n == 0:
        raise EmptySet("cannot orthogonalize an empty set")
    floor = tol * max_norm(Y)
    S = np.empty_like(Y)
    C = np.eye(n)
    energies = np.empty(n)
    for k in range(n):
        s = Y[k].copy()
        for i in range(k):
            C[k, i] = np.dot(Y[k], S[i]) / energies[i]
            s -= C[k, i] * S[i]
        energies[k] = np.dot(s, s)
        if not np.sqrt(energies[k]) > floor:
            raise NotLinearlyIndependent(
                f"vector {k} lies in the span of the preceding vectors (tol={tol:g})"
            )
        S[k] = s
    for a in (S, C):
        a.setflags(write=False)
    col = C.sum(axis=0)
    col.setflags(write=False)
    return GsomResult(Y, S, C, col)


def gsom_energy_identity(result):
    """Compare ``||sum y||^2`` against ``sum_i c_i^2 ||s_i||^2``.

    The left side is recomputed from the reconstructed input, the right from
    the column sums.
    """
    total = result.reconstruct().sum(axis=0)
    lhs = float(np.dot(total, total))
    S = result.orthogonal_set
    rhs = float(np.sum(result.column_sums**2 * np.einsum("ij,ij->i", S, S)))
    return EnergyIdentity(lhs, rhs, abs(lhs - rhs))
