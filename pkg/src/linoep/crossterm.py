"""Cross terms of a vector set and the ways they can cancel.

``||sum v||^2 - sum ||v_i||^2`` is the total cross term ``sum_{i != j}
<v_i, v_j>``. A set preserves energy when it vanishes, which happens for
three kinds of reason, reported as :class:`Family` members:

* every pair is orthogonal (``PAIRWISE_ORTHOGONAL``);
* under some ordering each vector is orthogonal to the sum of the vectors
  after it (``NESTED``, one entry per qualifying permutation);
* the pairwise products cancel without either structure (``CANCELLATION``).
"""
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .errors import (
    EmptySet,
    GenerationFailed,
    InputError,
    NotLinearlyIndependent,
    TooManyPermutations,
)
from .transform import energy_report, linoep_transform, noep_extend
from .vectorspace import DEFAULT_TOL, as_vector_set, gram, is_linearly_independent

MAX_EXHAUSTIVE_N = 8
GENERATOR_RETRIES = 1000
# generated fixtures keep every defining cosine at least this far from zero,
# so their classification is stable for any tol below it
GENERATOR_MARGIN = 1e-3


class Family(enum.Enum):
    PAIRWISE_ORTHOGONAL = "PairwiseOrthogonal"
    NESTED = "Nested"
    CANCELLATION = "Cancellation"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CrossTermReport:
    gram: np.ndarray
    total_cross_term: float
    direct_cross_term: float
    component_energy: float
    is_energy_preserving: bool
    tol: float
    families: frozenset = frozenset()
    nested_permutations: tuple = ()

    @property
    def identity_residual(self):
        """Gap between the Gram-sum cross term and ``||sum v||^2 - sum ||v||^2``."""
        return abs(self.total_cross_term - self.direct_cross_term)


def cross_term(vectors, tol=DEFAULT_TOL):
    """Total cross term of a set, computed from its Gram matrix.

    The set counts as energy preserving when ``|total| <= tol * sum ||v_i||^2``.
    """
    V = as_vector_set(vectors)
    n = V.shape[0]
    if n == 0:
        raise EmptySet("cross term of an empty set is undefined")
    G = gram(V)
    total = 2.0 * float(np.sum(G[np.triu_indices(n, 1)]))
    energy = energy_report(V)
    direct = energy.sum_energy - energy.component_energy
    return CrossTermReport(
        gram=G,
        total_cross_term=total,
        direct_cross_term=direct,
        component_energy=energy.component_energy,
        is_energy_preserving=abs(total) <= tol * energy.component_energy,
        tol=tol,
    )


def is_pairwise_orthogonal(G, tol):
    norms = np.sqrt(np.diagonal(G))
    off = np.abs(G) - tol * np.outer(norms, norms)
    np.fill_diagonal(off, 0.0)
    return bool(np.all(off <= 0.0))


def nested_permutations(vectors, tol=DEFAULT_TOL, max_n=MAX_EXHAUSTIVE_N, batch=5040):
    """Every ordering under which each vector is orthogonal to its tail sum.

    Permutations are returned as index tuples in lexicographic order. The test
    for position ``i`` is ``|<v_i, T_i>| <= tol * ||v_i|| * ||T_i||`` with
    ``T_i`` the sum of the vectors after it.
    """
    V = as_vector_set(vectors)
    n = V.shape[0]
    if n > max_n:
        raise TooManyPermutations(f"exhaustive search over {n}! orderings refused (limit n={max_n})")
    if n < 2:
        return [tuple(range(n))]
    perms = np.array(list(permutations(range(n))), dtype=np.intp)
    found = []
    for start in range(0, len(perms), batch):
        P = perms[start:start + batch]
        W = V[P]
        # tails[:, i] = sum of W[:, j] for j > i
        tails = np.cumsum(W[:, ::-1], axis=1)[:, ::-1][:, 1:]
        heads = W[:, :-1]
        dots = np.abs(np.einsum("pim,pim->pi", heads, tails))
        bound = tol * np.linalg.norm(heads, axis=2) * np.linalg.norm(tails, axis=2)
        ok = np.all(dots <= bound, axis=1)
        found.extend(tuple(int(i) for i in p) for p in P[ok])
    return found


def classify(vectors, tol=DEFAULT_TOL, max_n=MAX_EXHAUSTIVE_N):
    """Cross-term report with the cancellation families filled in.

    Raises
    ------
    TooManyPermutations
        If ``n > max_n``; nesting is only ever decided exhaustively.
    """
    V = as_vector_set(vectors)
    if V.shape[0] < 2:
        raise InputError("classification needs at least two vectors")
    report = cross_term(V, tol)
    nested = tuple(nested_permutations(V, tol, max_n))
    families = set()
    if is_pairwise_orthogonal(report.gram, tol):
        families.add(Family.PAIRWISE_ORTHOGONAL)
    if nested:
        families.add(Family.NESTED)
    if report.is_energy_preserving and not families:
        families.add(Family.CANCELLATION)
    return CrossTermReport(
        **{
            **report.__dict__,
            "families": frozenset(families),
            "nested_permutations": nested,
        }
    )


def _cosines(V):
    G = V @ V.T
    norms = np.sqrt(np.diagonal(G))
    return np.abs(G) / np.outer(norms, norms)


def make_cancellation_example(seed):
    """Three vectors in R^3 whose pairwise products are all nonzero yet sum to 0.

    ``c1, c2`` are random; ``c3 = t w`` for a random direction ``w`` with
    ``t`` chosen so that ``<c1,c2> + <c1,c3> + <c2,c3> = 0``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(GENERATOR_RETRIES):
        c1, c2, w = rng.uniform(-1.0, 1.0, (3, 3))
        c12 = np.dot(c1, c2)
        if abs(c12) < 0.1:
            continue
        u = c1 + c2
        den = np.dot(u, w)
        if abs(den) < 0.1 * np.linalg.norm(u) * np.linalg.norm(w):
            continue
        V = np.array([c1, c2, (-c12 / den) * w])
        cos = _cosines(V)
        if np.min(cos[np.triu_indices(3, 1)]) < GENERATOR_MARGIN:
            continue
        if abs(cross_term(V).total_cross_term) > 1e-12:
            continue
        if classify(V, GENERATOR_MARGIN).families != {Family.CANCELLATION}:
            continue
        V.setflags(write=False)
        return V
    raise GenerationFailed(f"no cancellation example after {GENERATOR_RETRIES} draws (seed={seed})")


def make_nested_example(seed):
    """Three vectors with ``c1 _|_ (c2 + c3)`` and ``c2 _|_ c3`` but no other
    orthogonal pair, obtained by transforming a random independent set."""
    rng = np.random.default_rng(seed)
    for _ in range(GENERATOR_RETRIES):
        Y = rng.uniform(-1.0, 1.0, (3, 3))
        if not is_linearly_independent(Y, 1e-6):
            continue
        V = np.array(linoep_transform(Y).c_set)
        cos = _cosines(V)
        if min(cos[0, 1], cos[0, 2]) < GENERATOR_MARGIN:
            continue
        report = classify(V, GENERATOR_MARGIN)
        if report.families != {Family.NESTED} or report.nested_permutations != ((0, 1, 2), (0, 2, 1)):
            continue
        V.setflags(write=False)
        return V
    raise GenerationFailed(f"no nested example after {GENERATOR_RETRIES} draws (seed={seed})")


@dataclass(frozen=True)
class SweepEntry:
    permutation: tuple
    result: object
    energy_residual: float
    component_energy: float

    @property
    def relative_residual(self):
        return self.energy_residual / self.component_energy


@dataclass(frozen=True)
class SweepResult:
    entries: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def max_relative_residual(self):
        return max((e.relative_residual for e in self.entries), default=0.0)


def permutation_sweep(vectors, tol=DEFAULT_TOL, max_n=MAX_EXHAUSTIVE_N, max_workers=None):
    """Run the LINOEP transform and NOEP extension on every ordering of the input.

    Entries come back in lexicographic permutation order whether or not a
    thread pool is used.
    """
    Y = as_vector_set(vectors)
    n = Y.shape[0]
    if n == 0:
        raise EmptySet("cannot sweep an empty set")
    if n > max_n:
        raise TooManyPermutations(f"sweep over {n}! orderings refused (limit n={max_n})")
    if not is_linearly_independent(Y, tol):
        raise NotLinearlyIndependent(f"input set is not linearly independent (tol={tol:g})")

    def run(perm):
        P = Y[list(perm)]
        result = noep_extend(linoep_transform(P, tol, check_independence=False), P.sum(axis=0), tol)
        energy = energy_report(result.c_set)
        return SweepEntry(perm, result, energy.residual, energy.component_energy)

    perms = list(permutations(range(n)))
    if max_workers is None:
        entries = [run(p) for p in perms]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            entries = list(pool.map(run, perms))
    return SweepResult(tuple(entries))
