"""Finite metric spaces with exact rational distances.

Value types and the operations that stay inside one space's vocabulary:
axiom validation, ultrametricity certification with violating triangles,
monotone gauge transforms, power-of-three rounding, scale truncation, and
the pointed wedge and cone constructions used to assemble larger spaces.

A space is ultrametric when every triangle is isosceles with the two
largest sides equal; equivalently d(x,z) <= max(d(x,y), d(y,z)) for all
triples. All checks here are exact, no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import _linkage
from .errors import fail
from .rational import as_fraction, ceil_exponent_base3, rational_str

# Exhaustive triple scan up to this size; minimax-tree certification above.
_SCAN_LIMIT = 40


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Immutable labeled distance matrix that passed validation."""

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise fail("MalformedInput", f"no point labeled {label!r}") from None

    def diameter(self) -> Fraction:
        best = Fraction(0)
        for i in range(self.n):
            row = self.dist[i]
            for j in range(i + 1, self.n):
                if row[j] > best:
                    best = row[j]
        return best

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield i, j

    def distinct_distances(self) -> tuple[Fraction, ...]:
        return tuple(sorted({self.dist[i][j] for i, j in self.pairs()}))

    def __repr__(self) -> str:  # compact: matrices get huge
        return f"FiniteMetricSpace(n={self.n}, labels={self.labels[:4]}...)"


@dataclass(frozen=True)
class PointedSpace:
    """A space with a distinguished base point (by index)."""

    space: FiniteMetricSpace
    base: int

    def __post_init__(self):
        if not 0 <= self.base < self.space.n:
            raise fail("MalformedInput", f"base index {self.base} out of range")

    @property
    def base_label(self) -> str:
        return self.space.labels[self.base]


@dataclass(frozen=True)
class UltraWitness:
    """Outcome of the ultrametric check.

    When verdict is False, ``triangle`` holds a triple of indices whose
    sorted side values ``sides = (a, b, c)`` satisfy a <= b < c, breaking
    the rule that the two largest sides agree.
    """

    verdict: bool
    triangle: tuple[int, int, int] | None = None
    sides: tuple[Fraction, Fraction, Fraction] | None = None

    def __bool__(self) -> bool:
        return self.verdict


def validate_metric(labels: Sequence[str], matrix: Sequence[Sequence]) -> FiniteMetricSpace:
    """Check all finite metric axioms and freeze the space.

    Rejections carry stable codes: DuplicateLabel, NonZeroDiagonal,
    NonSymmetric, NegativeOrZeroOffDiagonal, TriangleViolation (with the
    witnessing index triple), MalformedInput for shape problems.
    """
    labs = tuple(labels)
    n = len(labs)
    if n == 0:
        raise fail("MalformedInput", "need at least one point")
    for lab in labs:
        if not isinstance(lab, str):
            raise fail("MalformedInput", f"labels must be strings, got {lab!r}")
    if len(set(labs)) != n:
        seen: set[str] = set()
        for lab in labs:
            if lab in seen:
                raise fail("DuplicateLabel", f"label {lab!r} appears twice", lab)
            seen.add(lab)
    if len(matrix) != n:
        raise fail("MalformedInput", f"need {n} rows, got {len(matrix)}")
    rows: list[tuple[Fraction, ...]] = []
    for i, raw in enumerate(matrix):
        if len(raw) != n:
            raise fail("MalformedInput", f"row {i} has {len(raw)} entries, need {n}")
        rows.append(tuple(as_fraction(v) for v in raw))
    for i in range(n):
        if rows[i][i] != 0:
            raise fail("NonZeroDiagonal", f"d({labs[i]},{labs[i]}) = {rows[i][i]}", i)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise fail(
                    "NonSymmetric",
                    f"d({labs[i]},{labs[j]}) = {rows[i][j]} but reversed gives {rows[j][i]}",
                    i, j,
                )
            if rows[i][j] <= 0:
                raise fail(
                    "NegativeOrZeroOffDiagonal",
                    f"d({labs[i]},{labs[j]}) = {rows[i][j]}",
                    i, j,
                )
    for i in range(n):
        for j in range(i + 1, n):
            dij = rows[i][j]
            for k in range(j + 1, n):
                dik, djk = rows[i][k], rows[j][k]
                if dik > dij + djk or dij > dik + djk or djk > dij + dik:
                    raise fail(
                        "TriangleViolation",
                        f"sides {rational_str(dij)}, {rational_str(dik)}, "
                        f"{rational_str(djk)} on ({labs[i]},{labs[j]},{labs[k]})",
                        i, j, k,
                    )
    return FiniteMetricSpace(labs, tuple(rows))


def _witness_by_scan(space: FiniteMetricSpace) -> UltraWitness:
    dist = space.dist
    n = space.n
    for i in range(n):
        for j in range(i + 1, n):
            dij = dist[i][j]
            for k in range(j + 1, n):
                a, b, c = sorted((dij, dist[i][k], dist[j][k]))
                if b != c:
                    return UltraWitness(False, (i, j, k), (a, b, c))
    return UltraWitness(True)


def _witness_by_linkage(space: FiniteMetricSpace) -> UltraWitness:
    """Certify via the minimax spanning tree in O(n^2).

    The space is ultrametric iff the distance matrix equals its own
    minimax-path matrix. On a mismatch pair (x, z) we walk the tree path:
    the first step y with d(y, z) < d(x, z) closes a violating triangle,
    and one always appears before the path runs out because each non-step
    strictly shrinks the remaining path while keeping the mismatch.
    """
    dist = space.dist
    n = space.n
    mst = _linkage.prim_mst(dist)
    rho = _linkage.bottleneck_matrix(n, mst)
    bad = None
    for i in range(n):
        row_d, row_r = dist[i], rho[i]
        for j in range(i + 1, n):
            if row_r[j] != row_d[j]:
                bad = (i, j)
                break
        if bad:
            break
    if bad is None:
        return UltraWitness(True)
    x, z = bad
    path = _linkage.tree_path(n, mst, x, z)
    for step in range(len(path) - 2):
        y = path[step + 1]
        if dist[y][z] < dist[x][z]:
            a, b, c = sorted((dist[x][y], dist[x][z], dist[y][z]))
            return UltraWitness(False, (x, y, z), (a, b, c))
        x = y
    raise AssertionError("minimax mismatch must yield a violating triangle")


def is_ultrametric(space: FiniteMetricSpace) -> UltraWitness:
    """Decide ultrametricity, returning a violating triangle on failure."""
    if space.n <= _SCAN_LIMIT:
        return _witness_by_scan(space)
    return _witness_by_linkage(space)


@dataclass(frozen=True)
class Gauge:
    """Piecewise-linear map on distances, anchored at (0, 0).

    ``breakpoints`` is a strictly increasing sequence of (t, value) knots
    starting at (0, 0); beyond the last knot the final segment's slope
    extends. Interpolation is exact rational arithmetic.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_points(cls, points: Iterable[tuple] ) -> "Gauge":
        knots = [(as_fraction(t), as_fraction(v)) for t, v in points]
        knots.sort(key=lambda p: p[0])
        if not knots or knots[0][0] > 0:
            knots.insert(0, (Fraction(0), Fraction(0)))
        if knots[0][0] < 0:
            raise fail("BadParameters", "gauge breakpoints need t >= 0")
        if knots[0][1] != 0:
            raise fail("BadParameters", "a gauge must send 0 to 0")
        for (t0, _), (t1, _) in zip(knots, knots[1:]):
            if t0 == t1:
                raise fail("BadParameters", f"duplicate breakpoint t = {t0}")
        if len(knots) < 2:
            raise fail("BadParameters", "need a breakpoint above t = 0")
        return cls(tuple(knots))

    @classmethod
    def identity(cls) -> "Gauge":
        return cls.from_points([(1, 1)])

    @classmethod
    def scaling(cls, factor) -> "Gauge":
        return cls.from_points([(1, as_fraction(factor))])

    @classmethod
    def stretch(cls, b, c) -> "Gauge":
        """Linear up to b, then steep so that c lands on 3b.

        Applied to a triple with sides a <= b < c this sends the sides to
        (a, b, 3b), which breaks the triangle inequality since a < 2b.
        """
        b = as_fraction(b)
        c = as_fraction(c)
        if not 0 < b < c:
            raise fail("BadParameters", f"need 0 < b < c, got {b}, {c}")
        return cls.from_points([(b, b), (c, 3 * b)])

    def is_nondecreasing(self) -> bool:
        values = [v for _, v in self.breakpoints]
        return all(v0 <= v1 for v0, v1 in zip(values, values[1:]))

    def evaluate(self, t) -> Fraction:
        t = as_fraction(t)
        if t < 0:
            raise fail("BadParameters", "gauges are defined for t >= 0")
        knots = self.breakpoints
        if t >= knots[-1][0]:
            (t0, v0), (t1, v1) = knots[-2], knots[-1]
            return v1 + (t - t1) * (v1 - v0) / (t1 - t0)
        lo, hi = 0, len(knots) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if knots[mid][0] <= t:
                lo = mid
            else:
                hi = mid
        (t0, v0), (t1, v1) = knots[lo], knots[hi]
        return v0 + (t - t0) * (v1 - v0) / (t1 - t0)


def apply_gauge(space: FiniteMetricSpace, gauge: Gauge) -> FiniteMetricSpace:
    """Transform every distance through the gauge, revalidating the result.

    Raises GaugeNotMonotone for a decreasing gauge, GaugeNotPositive when
    some positive distance is crushed to 0, and ResultNotMetric with the
    witnessing triple when the transformed matrix breaks a triangle. On
    ultrametric inputs any nondecreasing positive gauge succeeds, and the
    output is again ultrametric.
    """
    if not gauge.is_nondecreasing():
        raise fail("GaugeNotMonotone", "gauge values decrease between breakpoints")
    n = space.n
    labs = space.labels
    cache: dict[Fraction, Fraction] = {}
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            t = space.dist[i][j]
            v = cache.get(t)
            if v is None:
                v = gauge.evaluate(t)
                cache[t] = v
            if v <= 0:
                raise fail(
                    "GaugeNotPositive",
                    f"gauge sends {rational_str(t)} to {rational_str(v)} "
                    f"on ({labs[i]},{labs[j]})",
                    i, j,
                )
            rows[i][j] = rows[j][i] = v
    for i in range(n):
        for j in range(i + 1, n):
            gij = rows[i][j]
            for k in range(j + 1, n):
                gik, gjk = rows[i][k], rows[j][k]
                if gik > gij + gjk or gij > gik + gjk or gjk > gij + gik:
                    raise fail(
                        "ResultNotMetric",
                        f"gauged sides {rational_str(gij)}, {rational_str(gik)}, "
                        f"{rational_str(gjk)} on ({labs[i]},{labs[j]},{labs[k]}) "
                        "break the triangle inequality",
                        i, j, k,
                    )
    return FiniteMetricSpace(labs, tuple(tuple(r) for r in rows))


def quantize_3adic(space: FiniteMetricSpace) -> FiniteMetricSpace:
    """Round every distance up to the nearest power of three.

    Input must be ultrametric. Each d lands on the unique 3^n with
    3^(n-1) < d <= 3^n, so the output is a power-of-three-valued
    ultrametric with d <= out < 3d pairwise.
    """
    w = is_ultrametric(space)
    if not w.verdict:
        raise fail(
            "NotUltrametric",
            f"violating triangle at indices {w.triangle} with sides "
            f"{tuple(rational_str(s) for s in w.sides)}",
            *w.triangle,
        )
    n = space.n
    cache: dict[Fraction, Fraction] = {}
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            t = space.dist[i][j]
            v = cache.get(t)
            if v is None:
                v = Fraction(3) ** ceil_exponent_base3(t)
                cache[t] = v
            rows[i][j] = rows[j][i] = v
    out = FiniteMetricSpace(space.labels, tuple(tuple(r) for r in rows))
    for i, j in out.pairs():  # postcondition, cheap and exact
        assert space.dist[i][j] <= out.dist[i][j] < 3 * space.dist[i][j]
    assert is_ultrametric(out).verdict
    return out


def scale_truncate(space: FiniteMetricSpace, epsilon) -> tuple[FiniteMetricSpace, FiniteMetricSpace]:
    """Split a space at one scale: distances capped at epsilon, and raised to it.

    Returns (small, large) where small has d' = min(d, epsilon) and large
    has d' = max(d, epsilon) off the diagonal. Both are revalidated; both
    stay ultrametric when the input is.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise fail("BadParameters", f"epsilon must be positive, got {eps}")
    n = space.n
    small = [[Fraction(0)] * n for _ in range(n)]
    large = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                t = space.dist[i][j]
                small[i][j] = min(t, eps)
                large[i][j] = max(t, eps)
    return (
        validate_metric(space.labels, small),
        validate_metric(space.labels, large),
    )


def _fresh_label(candidate: str, taken: set[str], part: int) -> str:
    while candidate in taken:
        candidate = f"{part}:{candidate}"
    return candidate


def metric_wedge(parts: Sequence[PointedSpace]) -> PointedSpace:
    """Glue pointed spaces at their base points.

    Points from different parts sit at the maximum of their distances to
    the shared hub; distances within a part are untouched. One part comes
    back unchanged. Ultrametricity of all parts carries over to the wedge.
    Colliding labels from later parts get a "k:" prefix (parts 1-based).
    """
    if not parts:
        raise fail("BadParameters", "wedge needs at least one part")
    if len(parts) == 1:
        return parts[0]
    hub_label = parts[0].base_label
    labels: list[str] = [hub_label]
    taken = {hub_label}
    part_of: list[int] = [-1]
    local: list[int] = [0]
    to_hub: list[Fraction] = [Fraction(0)]
    for k, part in enumerate(parts):
        sp, base = part.space, part.base
        for i in range(sp.n):
            if i == base:
                continue
            lab = _fresh_label(sp.labels[i], taken, k + 1)
            taken.add(lab)
            labels.append(lab)
            part_of.append(k)
            local.append(i)
            to_hub.append(sp.dist[i][base])
    m = len(labels)
    rows = [[Fraction(0)] * m for _ in range(m)]
    for u in range(m):
        for v in range(u + 1, m):
            if part_of[u] == part_of[v]:
                w = parts[part_of[u]].space.dist[local[u]][local[v]]
            else:
                w = max(to_hub[u], to_hub[v])
            rows[u][v] = rows[v][u] = w
    return PointedSpace(FiniteMetricSpace(tuple(labels), tuple(tuple(r) for r in rows)), 0)


def cone(space: FiniteMetricSpace, height, *, apex_label: str = "apex",
         allow_equal: bool = False) -> PointedSpace:
    """Add an apex at a fixed distance above every point.

    The height must exceed the diameter (equality allowed only with
    allow_equal), which keeps ultrametric inputs ultrametric: every new
    triangle has two sides equal to the height on top.
    """
    height = as_fraction(height)
    diam = space.diameter()
    if height < diam or (height == diam and not allow_equal):
        raise fail(
            "ConeHeightTooSmall",
            f"height {rational_str(height)} does not clear diameter {rational_str(diam)}",
            height, diam,
        )
    if height <= 0:
        raise fail("BadParameters", "cone height must be positive")
    apex = apex_label
    while apex in space.labels:
        apex = apex + "'"
    labels = (apex,) + space.labels
    n = space.n
    rows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        rows[0][i + 1] = rows[i + 1][0] = height
        for j in range(n):
            rows[i + 1][j + 1] = space.dist[i][j]
    return PointedSpace(FiniteMetricSpace(labels, tuple(tuple(r) for r in rows)), 0)
