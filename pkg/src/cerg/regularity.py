"""Exact pairwise checkers: lambda/mu multisets, regularity levels,
weak/strong constants, Hoffman bounds, equitable partitions, and
association-scheme axioms.

Everything reduces to integer matrix products (entries stay far below
2^63 at the enforced vertex ceiling) plus elementwise comparisons, so
all reported constants are exact.  Pair scans accept a thread count and
produce thread-count-independent results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import Graph


class NotRegular(ValueError):
    pass


class NotCoEdgeRegular(ValueError):
    pass


class NotEdgeRegular(ValueError):
    pass


class NotSRG(ValueError):
    pass


class SetNotClique(ValueError):
    pass


class SetNotCoclique(ValueError):
    pass


class PartitionInvalid(ValueError):
    pass


class NotAPartition(ValueError):
    pass


class PreconditionFailed(ValueError):
    def __init__(self, which: str):
        super().__init__(which)
        self.which = which


def matmul_chunked(a: np.ndarray, b: np.ndarray, threads: int | None = None) -> np.ndarray:
    """Row-chunked exact int64 product; identical output for any thread count."""
    if not threads or threads <= 1 or a.shape[0] < 2 * threads:
        return a @ b
    bounds = np.linspace(0, a.shape[0], threads + 1, dtype=int)
    chunks = [(bounds[i], bounds[i + 1]) for i in range(threads) if bounds[i] < bounds[i + 1]]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: a[c[0] : c[1]] @ b, chunks))
    return np.vstack(parts)


def _multiset(values: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(values, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


@dataclass
class RegularityProfile:
    n: int
    regular: bool
    k: int | None
    lambda_multiset: dict[int, int]
    mu_multiset: dict[int, int]
    level_co_edge: int | None = None
    level_edge: int | None = None
    mu: int | None = None
    gamma: int | None = None
    alpha: Fraction | None = None
    beta: Fraction | None = None

    def to_json_dict(self) -> dict:
        def frac(x):
            if x is None:
                return None
            f = Fraction(x)
            return [f.numerator, f.denominator]

        return {
            "n": self.n,
            "regular": self.regular,
            "k": self.k,
            "lambda_multiset": {str(v): c for v, c in sorted(self.lambda_multiset.items())},
            "mu_multiset": {str(v): c for v, c in sorted(self.mu_multiset.items())},
            "level_co_edge": self.level_co_edge,
            "level_edge": self.level_edge,
            "mu": self.mu,
            "gamma": self.gamma,
            "alpha": frac(self.alpha),
            "beta": frac(self.beta),
        }


def _pair_values(g: Graph, threads=None):
    """(A, A @ A, upper-triangle masks) shared by the checkers."""
    a = g.adjacency_matrix()
    a2 = matmul_chunked(a, a, threads)
    upper = np.triu(np.ones((g.n, g.n), dtype=bool), 1)
    adj = (a == 1) & upper
    nonadj = (a == 0) & upper
    return a, a2, adj, nonadj


def profile(g: Graph, threads: int | None = None) -> RegularityProfile:
    """Full lambda/mu multisets by exhaustive pair scan, with the derived
    regularity constants filled in whenever they are defined."""
    if g.n < 2:
        raise ValueError("profile needs at least 2 vertices")
    a, a2, adj, nonadj = _pair_values(g, threads)
    lam = _multiset(a2[adj])
    mu = _multiset(a2[nonadj])
    regular, k = g.is_regular()
    prof = RegularityProfile(
        n=g.n,
        regular=regular,
        k=k,
        lambda_multiset=lam,
        mu_multiset=mu,
    )
    mu_constant = len(mu) <= 1
    lam_constant = len(lam) <= 1
    if regular and mu_constant:
        prof.level_co_edge = len(lam)
        prof.mu = next(iter(mu), None)
        strong = strong_co_edge_regular(g, threads=threads, _pre=(a, a2))
        if strong.ok:
            prof.gamma = strong.gamma
    if regular and lam_constant:
        prof.level_edge = len(mu)
    if regular:
        weak = weak_edge_regular(g, threads=threads, _pre=(a, a2))
        if weak.ok and weak.alpha is not None:
            prof.alpha = weak.alpha
            prof.beta = weak.beta
    return prof


@dataclass
class StrongReport:
    ok: bool
    mu: int | None
    gamma: int | None
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def strong_co_edge_regular(g: Graph, threads=None, _pre=None) -> StrongReport:
    """The constant gamma = sum of lambda(x, z) over common neighbours of
    each non-adjacent pair, or a witness of two differing sums."""
    if _pre is None:
        a = g.adjacency_matrix()
        a2 = matmul_chunked(a, a, threads)
    else:
        a, a2 = _pre
    regular, _ = g.is_regular()
    if not regular:
        raise NotCoEdgeRegular("graph is not regular")
    upper = np.triu(np.ones((g.n, g.n), dtype=bool), 1)
    nonadj = (a == 0) & upper
    if not nonadj.any():
        return StrongReport(True, None, None)  # complete: vacuous
    mu_vals = a2[nonadj]
    if mu_vals.min() != mu_vals.max():
        raise NotCoEdgeRegular("mu is not constant over non-adjacent pairs")
    mu = int(mu_vals[0])
    lam_matrix = a * a2
    sums = matmul_chunked(lam_matrix, a, threads)
    if not np.array_equal(sums[nonadj], sums.T[nonadj]):
        idx = np.argwhere(nonadj & (sums != sums.T))[0]
        return StrongReport(
            False,
            mu,
            None,
            witness={
                "pair": (int(idx[0]), int(idx[1])),
                "sum_xy": int(sums[idx[0], idx[1]]),
                "sum_yx": int(sums[idx[1], idx[0]]),
                "reason": "ordered sums disagree",
            },
        )
    vals = sums[nonadj]
    if vals.min() == vals.max():
        return StrongReport(True, mu, int(vals[0]))
    coords = np.argwhere(nonadj)
    flat = vals
    lo = int(np.argmin(flat))
    hi = int(np.argmax(flat))
    return StrongReport(
        False,
        mu,
        None,
        witness={
            "pair": tuple(int(v) for v in coords[lo]),
            "sum": int(flat[lo]),
            "other_pair": tuple(int(v) for v in coords[hi]),
            "other_sum": int(flat[hi]),
        },
    )


@dataclass
class WeakReport:
    ok: bool
    alpha: Fraction | None
    beta: Fraction | None
    family: tuple[int, int] | None = None  # beta = alpha*family[0] - family[1]
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def weak_edge_regular(g: Graph, threads=None, _pre=None) -> WeakReport:
    """Exact rational fit of alpha * lambda(x,y) = sum + beta over edges.

    With two distinct lambda values present the solution is unique; with
    constant lambda every alpha works and the one-parameter family
    (lambda0, sum0) with beta = alpha*lambda0 - sum0 is reported.
    """
    if _pre is None:
        a = g.adjacency_matrix()
        a2 = matmul_chunked(a, a, threads)
    else:
        a, a2 = _pre
    regular, _ = g.is_regular()
    if not regular:
        raise NotRegular("graph is not regular")
    upper = np.triu(np.ones((g.n, g.n), dtype=bool), 1)
    adj = (a == 1) & upper
    if not adj.any():
        return WeakReport(True, None, None, family=(0, 0))
    lam_matrix = a * a2
    sums = matmul_chunked(lam_matrix, a, threads)
    lam_vals = a2[adj]
    sum_vals = sums[adj]
    lam_min, lam_max = int(lam_vals.min()), int(lam_vals.max())
    if lam_min == lam_max:
        if int(sum_vals.min()) == int(sum_vals.max()):
            return WeakReport(True, None, None, family=(lam_min, int(sum_vals[0])))
        coords = np.argwhere(adj)
        lo, hi = int(np.argmin(sum_vals)), int(np.argmax(sum_vals))
        return WeakReport(
            False,
            None,
            None,
            witness={
                "edge": tuple(int(v) for v in coords[lo]),
                "sum": int(sum_vals[lo]),
                "other_edge": tuple(int(v) for v in coords[hi]),
                "other_sum": int(sum_vals[hi]),
                "lambda": lam_min,
            },
        )
    i_min = int(np.argmax(lam_vals == lam_min))
    i_max = int(np.argmax(lam_vals == lam_max))
    s1, l1 = int(sum_vals[i_min]), lam_min
    s2, l2 = int(sum_vals[i_max]), lam_max
    alpha = Fraction(s1 - s2, l1 - l2)
    beta = alpha * l1 - s1
    # verify on every edge with cleared denominators
    den = alpha.denominator
    lhs = alpha.numerator * lam_vals.astype(object)
    rhs = den * sum_vals.astype(object) + int(beta * den)
    bad = lhs != rhs
    if bad.any():
        coords = np.argwhere(adj)
        first = int(np.argmax(bad))
        return WeakReport(
            False,
            None,
            None,
            witness={
                "edge": tuple(int(v) for v in coords[first]),
                "lambda": int(lam_vals[first]),
                "sum": int(sum_vals[first]),
                "alpha_candidate": [alpha.numerator, alpha.denominator],
                "beta_candidate": [beta.numerator, beta.denominator],
            },
        )
    return WeakReport(True, alpha, beta)


def level(g: Graph, threads=None) -> tuple[int | None, int | None]:
    """(#distinct lambda when mu constant, #distinct mu when lambda constant)."""
    prof = profile(g, threads)
    co = prof.level_co_edge
    edge = prof.level_edge
    if co is None and edge is None:
        raise PreconditionFailed(
            "neither mu nor lambda is constant (or the graph is irregular)"
        )
    return co, edge


def is_strongly_regular(g: Graph, threads=None):
    """(True, (n, k, lambda, mu)) for SRGs, else (False, None)."""
    prof = profile(g, threads)
    if not prof.regular:
        return False, None
    if len(prof.lambda_multiset) > 1 or len(prof.mu_multiset) > 1:
        return False, None
    lam = next(iter(prof.lambda_multiset), 0)
    mu = next(iter(prof.mu_multiset), 0)
    return True, (g.n, prof.k, lam, mu)


@dataclass
class HoffmanReport:
    kind: str
    size: int
    bound: Fraction
    tight: bool
    outside_degrees: dict[int, int]
    expected_outside: Fraction
    cross_intersection: int | None = None

    def to_json_dict(self):
        return {
            "kind": self.kind,
            "size": self.size,
            "bound": [self.bound.numerator, self.bound.denominator],
            "tight": self.tight,
            "outside_degrees": {str(v): c for v, c in sorted(self.outside_degrees.items())},
            "expected_outside": [
                self.expected_outside.numerator,
                self.expected_outside.denominator,
            ],
            "cross_intersection": self.cross_intersection,
        }


def hoffman_check(g: Graph, vertex_set, kind: str, m, cross=None) -> HoffmanReport:
    """Hoffman bound report for a clique or co-clique of an SRG.

    m is the magnitude of the smallest eigenvalue (from the spectral
    module).  With ``cross`` a second tight set of the other kind, the
    intersection size is reported as well.
    """
    if kind not in ("clique", "coclique"):
        raise ValueError(f"kind must be 'clique' or 'coclique', not {kind!r}")
    ok, params = is_strongly_regular(g)
    if not ok:
        raise NotSRG("Hoffman bound applies to strongly regular graphs")
    n, k, _, mu = params
    members = sorted(set(vertex_set))
    mask = 0
    for v in members:
        mask |= 1 << v
    for v in members:
        inside = g.row(v) & mask
        expected = mask & ~(1 << v)
        if kind == "clique" and inside != expected:
            raise SetNotClique(f"vertex {v} misses a set member")
        if kind == "coclique" and inside:
            raise SetNotCoclique(f"vertex {v} has a neighbour inside the set")
    m = Fraction(m)
    if kind == "clique":
        bound = (m + k) / m
        expected_outside = Fraction(mu) / m
    else:
        bound = m * n / (m + k)
        expected_outside = m
    size = len(members)
    outside = [
        (g.row(v) & mask).bit_count() for v in range(g.n) if not (1 << v) & mask
    ]
    degrees: dict[int, int] = {}
    for dgr in outside:
        degrees[dgr] = degrees.get(dgr, 0) + 1
    tight = Fraction(size) == bound
    cross_size = None
    if cross is not None:
        cross_size = len(set(members) & set(cross))
    return HoffmanReport(kind, size, bound, tight, degrees, expected_outside, cross_size)


@dataclass
class EquitableReport:
    ok: bool
    quotient: tuple[tuple[int, ...], ...] | None
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def equitable_check(g: Graph, parts) -> EquitableReport:
    """Quotient matrix of a vertex partition, or a witness (u, u', j)."""
    parts = [list(p) for p in parts]
    seen = sorted(v for p in parts for v in p)
    if seen != list(range(g.n)) or any(not p for p in parts):
        raise PartitionInvalid("parts must be non-empty and partition the vertices")
    a = g.adjacency_matrix()
    m = len(parts)
    indicator = np.zeros((g.n, m), dtype=np.int64)
    for j, p in enumerate(parts):
        indicator[p, j] = 1
    counts = a @ indicator
    quotient = []
    for i, p in enumerate(parts):
        block = counts[p]
        ref = block[0]
        diff = block != ref
        if diff.any():
            r, j = np.argwhere(diff)[0]
            return EquitableReport(
                False,
                None,
                witness={
                    "part": i,
                    "u": int(p[0]),
                    "u_prime": int(p[int(r)]),
                    "target_part": int(j),
                    "count_u": int(ref[j]),
                    "count_u_prime": int(block[int(r), int(j)]),
                },
            )
        quotient.append(tuple(int(x) for x in ref))
    return EquitableReport(True, tuple(quotient))


@dataclass
class AssociationSchemeReport:
    ok: bool
    classes: int
    intersection_numbers: dict | None
    witness: dict | None = None

    def __bool__(self):
        return self.ok

    def p_table_json(self):
        if self.intersection_numbers is None:
            return None
        return {f"{i},{j},{h}": v for (i, j, h), v in sorted(self.intersection_numbers.items())}


def scheme_check(relations, threads=None) -> AssociationSchemeReport:
    """Verify the symmetric association scheme axioms by exhaustive
    counting; relation 0 is the implicit identity."""
    if not relations:
        raise NotAPartition("no relations supplied")
    n = relations[0].n
    if any(r.n != n for r in relations):
        raise NotAPartition("relations live on different vertex sets")
    if any(r.edge_count() == 0 for r in relations):
        raise NotAPartition("relations must be non-empty")
    mats = [np.eye(n, dtype=np.int64)] + [r.adjacency_matrix() for r in relations]
    total = sum(mats[1:], start=mats[0].copy())
    if not np.array_equal(total, np.ones((n, n), dtype=np.int64)):
        raise NotAPartition("identity plus relations do not partition X x X")
    d = len(relations)
    table = {}
    for i in range(d + 1):
        for j in range(i, d + 1):
            prod = matmul_chunked(mats[i], mats[j], threads)
            for h in range(d + 1):
                sel = mats[h] == 1
                vals = prod[sel]
                if vals.size == 0:
                    continue
                if int(vals.min()) != int(vals.max()):
                    pos = np.argwhere(sel)
                    flat_lo = int(np.argmin(vals))
                    flat_hi = int(np.argmax(vals))
                    return AssociationSchemeReport(
                        False,
                        d,
                        None,
                        witness={
                            "i": i,
                            "j": j,
                            "h": h,
                            "pair": tuple(int(v) for v in pos[flat_lo]),
                            "count": int(vals[flat_lo]),
                            "other_pair": tuple(int(v) for v in pos[flat_hi]),
                            "other_count": int(vals[flat_hi]),
                        },
                    )
                table[(i, j, h)] = int(vals[0])
                table[(j, i, h)] = int(vals[0])
    return AssociationSchemeReport(True, d, table)
