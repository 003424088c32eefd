"""Scale decomposition of finite metric spaces.

S-component partitions, the chain-infimum ultrametric (the largest
ultrametric below the metric, realized along minimum-spanning-tree paths),
an exhaustive chain oracle for cross-checks, dimension-zero certificates
(the scale table S -> D(S) and the expansion constant m), and the
two-sided comparison bounds those certificates guarantee.
"""

from __future__ import annotations

import itertools
import os
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from . import _linkage
from .errors import fail
from .metric_core import FiniteMetricSpace
from .rational import as_fraction

_ORACLE_ENV = "ULTRAZERO_ORACLE_LIMIT"
_ORACLE_DEFAULT = 8


@dataclass(frozen=True)
class Partition:
    """Blocks of points chained together by steps of length <= scale."""

    scale: Fraction
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self, i: int) -> tuple[int, ...]:
        for block in self.blocks:
            if i in block:
                return block
        raise fail("MalformedInput", f"index {i} not covered by the partition")


@dataclass(frozen=True)
class SubdominantResult:
    """The chain-infimum ultrametric plus the spanning edges realizing it."""

    rho: FiniteMetricSpace
    spanning_edges: tuple[tuple[Fraction, int, int], ...]


@dataclass(frozen=True)
class Dim0Certificate:
    """Scale table and expansion constant.

    ``table`` lists (S, D(S)) over every distinct positive distance S,
    where D(S) is the largest diameter of an S-component; scales strictly
    increase and D is nondecreasing. ``m`` is the maximum of D(S)/S and
    equals 1 exactly on ultrametric inputs (and on spaces with < 2 points,
    where the table is empty).
    """

    m: Fraction
    table: tuple[tuple[Fraction, Fraction], ...]

    def control(self, scale) -> Fraction:
        """D at a realized scale; exact lookup."""
        s = as_fraction(scale)
        for t, d in self.table:
            if t == s:
                return d
        raise fail("MalformedInput", f"scale {s} is not in the table")

    def control_inverse(self, t) -> Fraction | None:
        """Smallest tabulated S with D(S) >= t, None when t exceeds all D."""
        t = as_fraction(t)
        ds = [d for _, d in self.table]
        pos = bisect_left(ds, t)
        if pos == len(ds):
            return None
        return self.table[pos][0]


@dataclass(frozen=True)
class BoundViolation:
    pair: tuple[str, str]
    lhs: Fraction
    mid: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class BoundsReport:
    passed: bool
    violations: tuple[BoundViolation, ...]


def s_components(space: FiniteMetricSpace, scale) -> Partition:
    """Partition into chain components with steps of length <= scale."""
    s = as_fraction(scale)
    if s < 0:
        raise fail("BadParameters", f"scale must be nonnegative, got {s}")
    n = space.n
    ds = _linkage.DisjointSet(n)
    for i in range(n):
        row = space.dist[i]
        for j in range(i + 1, n):
            if row[j] <= s:
                ds.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(ds.find(i), []).append(i)
    blocks = sorted((tuple(sorted(g)) for g in groups.values()), key=lambda b: b[0])
    return Partition(s, tuple(blocks))


def subdominant_ultrametric(space: FiniteMetricSpace) -> SubdominantResult:
    """Largest ultrametric pointwise below the metric.

    For each pair this is the minimum over chains of the largest link, and
    a minimum spanning tree realizes every value at once.
    """
    mst = _linkage.prim_mst(space.dist)
    rho_rows = _linkage.bottleneck_matrix(space.n, mst)
    rho = FiniteMetricSpace(space.labels, tuple(tuple(r) for r in rho_rows))
    edges = tuple(sorted(mst, key=lambda e: (e[0], e[1], e[2])))
    return SubdominantResult(rho, edges)


def _oracle_limit() -> int:
    raw = os.environ.get(_ORACLE_ENV)
    if raw is None:
        return _ORACLE_DEFAULT
    try:
        value = int(raw)
    except ValueError:
        raise fail("BadParameters", f"{_ORACLE_ENV} must be an integer, got {raw!r}") from None
    if value < 2:
        raise fail("BadParameters", f"{_ORACLE_ENV} must be at least 2")
    return value


def chain_minimax_oracle(space: FiniteMetricSpace, x: int, z: int) -> Fraction:
    """Exact minimum over all simple chains of the largest link, by brute force.

    Exists to cross-check subdominant_ultrametric, so it enumerates every
    permutation of intermediate points instead of being clever. Spaces
    larger than ULTRAZERO_ORACLE_LIMIT points (default 8) are refused.
    """
    limit = _oracle_limit()
    if space.n > limit:
        raise fail(
            "OracleSizeExceeded",
            f"{space.n} points exceeds the oracle limit {limit}",
            space.n, limit,
        )
    if not (0 <= x < space.n and 0 <= z < space.n):
        raise fail("MalformedInput", f"indices ({x}, {z}) out of range")
    if x == z:
        return Fraction(0)
    dist = space.dist
    best = dist[x][z]
    others = [i for i in range(space.n) if i != x and i != z]
    for k in range(1, len(others) + 1):
        for mid in itertools.permutations(others, k):
            prev = x
            top = Fraction(0)
            dead = False
            for p in mid:
                w = dist[prev][p]
                if w >= best:
                    dead = True
                    break
                if w > top:
                    top = w
                prev = p
            if dead:
                continue
            w = dist[prev][z]
            if w >= best:
                continue
            best = max(top, w)
    return best


def dim0_certificate(space: FiniteMetricSpace) -> Dim0Certificate:
    """Tabulate the largest S-component diameter at every realized scale.

    Components only change at spanning-tree edge weights, so one sweep over
    tree merges covers all scales; each pair of points crosses exactly one
    merge, keeping the diameter bookkeeping O(n^2) overall.
    """
    n = space.n
    if n < 2:
        return Dim0Certificate(Fraction(1), ())
    dist = space.dist
    mst = sorted(_linkage.prim_mst(dist), key=lambda e: (e[0], e[1], e[2]))
    scales = space.distinct_distances()
    ds = _linkage.DisjointSet(n)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    max_diam = Fraction(0)
    table: list[tuple[Fraction, Fraction]] = []
    edge_pos = 0
    for s in scales:
        while edge_pos < len(mst) and mst[edge_pos][0] <= s:
            _, i, j = mst[edge_pos]
            edge_pos += 1
            ra, rb = ds.find(i), ds.find(j)
            if ra == rb:
                continue
            side_a, side_b = members[ra], members[rb]
            for a in side_a:
                row = dist[a]
                for b in side_b:
                    if row[b] > max_diam:
                        max_diam = row[b]
            ds.union(ra, rb)
            root = ds.find(ra)
            merged = side_a + side_b
            members.pop(ra, None)
            members.pop(rb, None)
            members[root] = merged
        table.append((s, max_diam))
    m = max(d / s for s, d in table)
    return Dim0Certificate(m, tuple(table))


def verify_scale_bounds(
    space: FiniteMetricSpace,
    sub: SubdominantResult,
    cert: Dim0Certificate,
) -> BoundsReport:
    """Audit the two-sided comparison bounds pair by pair.

    Checks, for every pair with distance d and chain-infimum value r:
    d/(2m) <= r <= d, and Sinv/2 <= r where Sinv is the smallest tabulated
    scale whose component diameter reaches d. Inputs must have been
    computed from the given space (labels and scale table are checked).
    """
    if sub.rho.labels != space.labels:
        raise fail("InputMismatch", "chain-infimum result belongs to a different space")
    if tuple(s for s, _ in cert.table) != space.distinct_distances():
        raise fail("InputMismatch", "certificate table does not match the space's scales")
    two_m = 2 * cert.m
    violations: list[BoundViolation] = []
    for i, j in space.pairs():
        d = space.dist[i][j]
        r = sub.rho.dist[i][j]
        pair = (space.labels[i], space.labels[j])
        lower_nagata = d / two_m
        if not lower_nagata <= r <= d:
            violations.append(BoundViolation(pair, lower_nagata, r, d))
        sinv = cert.control_inverse(d)
        # d is realized, so some tabulated diameter reaches it
        assert sinv is not None
        lower_uniform = sinv / 2
        if not lower_uniform <= r <= d:
            violations.append(BoundViolation(pair, lower_uniform, r, d))
    return BoundsReport(not violations, tuple(violations))
