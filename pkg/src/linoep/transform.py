"""Linearly independent, non-orthogonal, energy-preserving (LINOEP) vectors.

Given rows ``y_1 .. y_n`` the backward recursion

    c_n = y_n
    S_k = c_{k+1} + ... + c_n
    alpha_k = <y_k, S_k> / <S_k, S_k>
    c_k = y_k - alpha_k * S_k                (k = n-1, ..., 1)

makes every ``c_k`` orthogonal to the sum of the vectors after it. That
nesting is enough for ``||sum c||^2 == sum ||c_i||^2`` even though the ``c_i``
are not pairwise orthogonal.

``sum c`` is not ``sum y``; :func:`noep_extend` appends one more vector and
rescales so that ``n + 1`` vectors ``d_i`` add up to ``sum y`` while still
splitting its energy exactly.
"""
import dataclasses
from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .errors import DegenerateTailSum, EmptySet, NotLinearlyIndependent
from .vectorspace import (
    DEFAULT_TOL,
    as_vector,
    as_vector_set,
    is_linearly_independent,
    max_norm,
    sum_vectors,
)


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LinoepResult:
    """Output of :func:`linoep_transform`, completed by :func:`noep_extend`.

    ``alphas[j]`` and ``tail_sums[j]`` belong to ``c_set[j]`` (0-based), so
    ``input_set[j] == c_set[j] + alphas[j] * tail_sums[j]``. The NOEP fields
    (``betas``, ``gamma``, ``d_set``, ``z2``) are ``None`` until extended.
    """

    input_set: np.ndarray
    c_set: np.ndarray
    alphas: np.ndarray
    tail_sums: np.ndarray
    betas: np.ndarray | None = None
    gamma: float | None = None
    d_set: np.ndarray | None = None
    z2: np.ndarray | None = None
    original_sum: np.ndarray | None = None

    @property
    def n(self):
        return self.c_set.shape[0]

    @property
    def is_extended(self):
        return self.d_set is not None

    @property
    def coefficients(self):
        """All scalars the method computes: the alphas, then gamma if present."""
        extra = [] if self.gamma is None else [self.gamma]
        return [float(a) for a in self.alphas] + extra

    def reconstruct(self):
        """Rebuild each ``y_k = c_k + alpha_k S_k``; the last row is ``c_n``."""
        Y = np.array(self.c_set)
        Y[:-1] += self.alphas[:, None] * self.tail_sums
        return Y

    def nested_orthogonality_residual(self):
        """Largest ``|<c_k, S_k>| / (||c_k|| ||S_k||)``; 0 when ``n == 1``."""
        if self.n < 2:
            return 0.0
        C = self.c_set[:-1]
        T = self.tail_sums
        num = np.abs(np.einsum("ij,ij->i", C, T))
        den = np.linalg.norm(C, axis=1) * np.linalg.norm(T, axis=1)
        return float(np.max(num / den))

    def sum_residual(self):
        """Largest entrywise gap between ``sum d`` and the caller's ``sum y``."""
        return float(np.max(np.abs(self.d_set.sum(axis=0) - self.original_sum)))


def linoep_transform(vectors, tol=DEFAULT_TOL, check_independence=True):
    """Run the backward alpha-recursion on the rows of ``vectors``.

    Parameters
    ----------
    vectors : array_like, shape (n, m)
        The input rows ``y_1 .. y_n``, in order.
    tol : float
        Tolerance for the independence check and for the tail-sum
        degeneracy test ``||S_k||^2 <= tol^2 * max ||y||^2``.
    check_independence : bool
        Skip the up-front rank test when the caller already knows the set is
        independent (e.g. when permuting a checked set).

    Returns
    -------
    LinoepResult
        With only the ``c``-part filled in.
    """
    Y = as_vector_set(vectors)
    n = Y.shape[0]
    if n == 0:
        raise EmptySet("cannot transform an empty set")
    if check_independence and not is_linearly_independent(Y, tol):
        raise NotLinearlyIndependent(f"input set is not linearly independent (tol={tol:g})")

    floor = (tol * max_norm(Y)) ** 2
    C = np.empty_like(Y)
    alphas = np.empty(n - 1)
    tails = np.empty((n - 1, Y.shape[1]))
    C[-1] = Y[-1]
    tail = Y[-1].copy()
    for k in range(n - 2, -1, -1):
        energy = np.dot(tail, tail)
        if not energy > floor:
            raise DegenerateTailSum(f"tail sum after vector {k} vanished (|S|^2={energy:.3g})")
        alphas[k] = np.dot(Y[k], tail) / energy
        C[k] = Y[k] - alphas[k] * tail
        tails[k] = tail
        tail = tail + C[k]
    return LinoepResult(Y, _frozen(C), _frozen(alphas), _frozen(tails))


def noep_extend(partial, original_sum, tol=DEFAULT_TOL):
    """Complete a LINOEP result with the ``n + 1`` vector NOEP set.

    ``original_sum`` is the caller's ``sum y``; the returned ``d_set`` is
    built from the ``c``-part alone and adds up to it (up to rounding)::

        beta_i = alpha_1 + ... + alpha_i
        p2 = sum c_i,  p1 = sum_{i<n} beta_i c_{i+1}
        gamma = <p1, p2> / <p2, p2>,  z2 = p1 - gamma p2
        d_i = (1 + gamma) c_i,  d_{n+1} = z2
    """
    original_sum = as_vector(original_sum)
    C = partial.c_set
    if original_sum.shape[0] != C.shape[1]:
        raise ValueError("original_sum has the wrong dimension")
    betas = np.array(list(accumulate(float(a) for a in partial.alphas)))
    p2 = C.sum(axis=0)
    p1 = np.zeros_like(p2)
    for i, beta in enumerate(betas):
        p1 += beta * C[i + 1]
    energy = np.dot(p2, p2)
    if not energy > (tol * max_norm(C)) ** 2:
        raise DegenerateTailSum(f"sum of c vectors vanished (|p2|^2={energy:.3g})")
    gamma = float(np.dot(p1, p2) / energy)
    z2 = p1 - gamma * p2
    D = np.vstack([(1.0 + gamma) * C, z2])
    return dataclasses.replace(
        partial,
        betas=_frozen(betas),
        gamma=gamma,
        d_set=_frozen(D),
        z2=_frozen(z2),
        original_sum=original_sum,
    )


def linoep(vectors, tol=DEFAULT_TOL):
    """Transform and extend in one call, using the input's own sum."""
    partial = linoep_transform(vectors, tol)
    return noep_extend(partial, sum_vectors(partial.input_set), tol)


@dataclass(frozen=True)
class EnergyReport:
    sum_energy: float
    component_energy: float
    residual: float


def energy_report(vectors):
    """Energy of the sum versus the summed energies of a vector set.

    The residual is the magnitude of the total cross term.
    """
    V = as_vector_set(vectors)
    if V.shape[0] == 0:
        raise EmptySet("energy of an empty set is undefined")
    total = V.sum(axis=0)
    sum_energy = float(np.dot(total, total))
    component_energy = float(np.einsum("ij,ij->", V, V))
    return EnergyReport(sum_energy, component_energy, abs(sum_energy - component_energy))
