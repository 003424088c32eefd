"""Direct sums of cyclic groups carried as metric spaces.

A spec lists cyclic summand orders with multiplicities (the last may be
infinite). Elements are finite digit strings, digit i running over
0..order_i-1, trailing zeros trimmed. The distance between two elements
is the smallest filtration stage separating them: the longer length when
lengths differ, otherwise the largest disagreeing position. Balls around
the identity are finite ultrametric spaces with integer distances.

Also here: digitwise isometric embeddings between balls, Sylow counts,
the equal-Sylow equivalence decision, and the doubling map into integers
whose ternary digits avoid 1, with its exact distortion audit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import fail
from .metric_core import FiniteMetricSpace


@dataclass(frozen=True)
class CyclicSumSpec:
    """Cyclic summand orders with multiplicities; None means infinitely many.

    summands is a tuple of (order, multiplicity) with order >= 2; only the
    final multiplicity may be None.
    """

    summands: tuple[tuple[int, int | None], ...]

    @classmethod
    def of(cls, summands: Sequence[tuple[int, int | None]]) -> "CyclicSumSpec":
        items = []
        for pos, (order, mult) in enumerate(summands):
            if not isinstance(order, int) or isinstance(order, bool) or order < 2:
                raise fail("MalformedInput", f"summand {pos}: order must be an integer >= 2")
            if mult is None:
                if pos != len(summands) - 1:
                    raise fail(
                        "MalformedInput",
                        f"summand {pos}: only the last multiplicity may be infinite",
                    )
            elif not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
                raise fail("MalformedInput", f"summand {pos}: multiplicity must be >= 1")
            items.append((order, mult))
        return cls(tuple(items))

    @property
    def is_infinite(self) -> bool:
        return any(mult is None for _, mult in self.summands)

    @property
    def length(self) -> int | None:
        """Number of summands, None when infinite."""
        if self.is_infinite:
            return None
        return sum(mult for _, mult in self.summands)  # type: ignore[misc]

    def orders(self, depth: int) -> tuple[int, ...]:
        """The first ``depth`` summand orders, expanded by multiplicity."""
        if depth < 0:
            raise fail("BadParameters", f"depth must be nonnegative, got {depth}")
        if depth == 0:
            return ()
        out: list[int] = []
        for order, mult in self.summands:
            take = depth - len(out) if mult is None else min(mult, depth - len(out))
            out.extend([order] * take)
            if len(out) == depth:
                return tuple(out)
        raise fail(
            "RadiusExceedsSpec",
            f"depth {depth} exceeds the {len(out)} available summands",
            depth, len(out),
        )


@dataclass(frozen=True)
class GroupElement:
    """Canonical digit string: trailing zeros trimmed, identity is empty."""

    digits: tuple[int, ...]

    @classmethod
    def of(cls, digits: Sequence[int]) -> "GroupElement":
        ds = list(digits)
        for d in ds:
            if not isinstance(d, int) or isinstance(d, bool) or d < 0:
                raise fail("MalformedInput", f"digit {d!r} is not a nonnegative integer")
        while ds and ds[-1] == 0:
            ds.pop()
        return cls(tuple(ds))

    @property
    def length(self) -> int:
        return len(self.digits)

    def digit(self, i: int) -> int:
        """1-based digit access, 0 beyond the length."""
        return self.digits[i - 1] if 1 <= i <= len(self.digits) else 0


def validate_element(spec: CyclicSumSpec, element: GroupElement) -> None:
    """Check digits against the spec's expanded orders."""
    if element.length == 0:
        return
    orders = spec.orders(element.length)
    for i, d in enumerate(element.digits):
        if d >= orders[i]:
            raise fail(
                "DigitOutOfRange",
                f"digit {d} at position {i + 1} exceeds order {orders[i]}",
                i + 1, d, orders[i],
            )


def d_filtration(spec: CyclicSumSpec, p: GroupElement, q: GroupElement) -> int:
    """Smallest filtration stage containing the difference of p and q.

    Equals max(|p|, |q|) when the lengths differ, otherwise the largest
    position where the digits disagree (0 when p = q).
    """
    validate_element(spec, p)
    validate_element(spec, q)
    if p.length != q.length:
        return max(p.length, q.length)
    top = 0
    for i in range(p.length):
        if p.digits[i] != q.digits[i]:
            top = i + 1
    return top


def element_label(element: GroupElement) -> str:
    if element.length == 0:
        return "e"
    return ".".join(str(d) for d in element.digits)


def ball_elements(spec: CyclicSumSpec, radius: int) -> list[GroupElement]:
    """Every element of the radius-th filtration stage, counter order.

    The first digit runs fastest, so index 0 is the identity and the
    enumeration is the mixed-radix counter over the expanded orders.
    """
    orders = spec.orders(radius)
    total = 1
    for a in orders:
        total *= a
    out: list[GroupElement] = []
    for code in range(total):
        digits = []
        rest = code
        for a in orders:
            digits.append(rest % a)
            rest //= a
        out.append(GroupElement.of(digits))
    return out


def group_ball(spec: CyclicSumSpec, radius: int) -> FiniteMetricSpace:
    """The filtration ball of the given radius as a finite metric space."""
    if radius < 0:
        raise fail("BadParameters", f"radius must be nonnegative, got {radius}")
    elements = ball_elements(spec, radius)
    n = len(elements)
    labels = tuple(element_label(g) for g in elements)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        p = elements[i]
        for j in range(i + 1, n):
            q = elements[j]
            if p.length != q.length:
                w = max(p.length, q.length)
            else:
                w = 0
                for k in range(p.length):
                    if p.digits[k] != q.digits[k]:
                        w = k + 1
            rows[i][j] = rows[j][i] = Fraction(w)
    return FiniteMetricSpace(labels, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class GroupEmbedding:
    """Digitwise isometric embedding between filtration balls."""

    source: FiniteMetricSpace
    target: FiniteMetricSpace
    depth: int
    assignment: tuple[int, ...]
    bijective: bool
    checked_pairs: int


def group_isometric_embedding(
    g: CyclicSumSpec, h: CyclicSumSpec, depth: int
) -> GroupEmbedding:
    """Embed the depth-ball of g into the depth-ball of h digit by digit.

    Works exactly when every stage of g is no wider than the matching
    stage of h (order_i(g) <= order_i(h) for i <= depth); the offending
    1-based stage is reported otherwise. The isometry is audited over all
    pairs before returning.
    """
    a = g.orders(depth)
    b = h.orders(depth)
    for i in range(depth):
        if a[i] > b[i]:
            raise fail(
                "IndexConditionFails",
                f"stage {i + 1}: source order {a[i]} exceeds target order {b[i]}",
                i + 1, a[i], b[i],
            )
    source = group_ball(g, depth)
    target = group_ball(h, depth)
    src_elements = ball_elements(g, depth)
    # recompose each digit string in the target's mixed radix
    weights = []
    w = 1
    for order in b:
        weights.append(w)
        w *= order
    assignment = []
    for el in src_elements:
        code = 0
        for pos, d in enumerate(el.digits):
            code += d * weights[pos]
        assignment.append(code)
    checked = 0
    for i in range(source.n):
        for j in range(i + 1, source.n):
            assert source.dist[i][j] == target.dist[assignment[i]][assignment[j]], (
                "digitwise map failed the isometry audit"
            )
            checked += 1
    bijective = source.n == target.n
    return GroupEmbedding(source, target, depth, tuple(assignment), bijective, checked)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class SylowNumber:
    """p-part of the group order: p**exponent, infinite when exponent is None."""

    prime: int
    exponent: int | None

    @property
    def is_infinite(self) -> bool:
        return self.exponent is None

    def value(self) -> int | None:
        if self.exponent is None:
            return None
        return self.prime**self.exponent

    def text(self) -> str:
        return "inf" if self.exponent is None else str(self.prime**self.exponent)


def sylow_number(spec: CyclicSumSpec, p: int) -> SylowNumber:
    """Largest p-power order among finite subgroups, possibly infinite."""
    if not _is_prime(p):
        raise fail("NotPrime", f"{p} is not a prime")
    exponent = 0
    for order, mult in spec.summands:
        v = _valuation(order, p)
        if v == 0:
            continue
        if mult is None:
            return SylowNumber(p, None)
        exponent += v * mult
    return SylowNumber(p, exponent)


@dataclass(frozen=True)
class ProtasovReport:
    """Sylow comparison table; equal tables decide coarse equivalence."""

    equivalent: bool
    table: tuple[tuple[int, SylowNumber, SylowNumber], ...]
    witness: int | None


def _prime_factors(n: int) -> set[int]:
    out = set()
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.add(k)
            while n % k == 0:
                n //= k
        k += 1 if k == 2 else 2
    if n > 1:
        out.add(n)
    return out


def protasov_equivalent(g: CyclicSumSpec, h: CyclicSumSpec) -> ProtasovReport:
    """Compare Sylow numbers over every prime dividing either group."""
    primes: set[int] = set()
    for spec in (g, h):
        for order, _ in spec.summands:
            primes |= _prime_factors(order)
    table = []
    witness = None
    for p in sorted(primes):
        left = sylow_number(g, p)
        right = sylow_number(h, p)
        table.append((p, left, right))
        if witness is None and left != right:
            witness = p
    return ProtasovReport(witness is None, tuple(table), witness)


def m0_encode(spec: CyclicSumSpec, element: GroupElement) -> int:
    """Map a binary digit string to an integer with ternary digits 0 or 2."""
    for order, _ in spec.summands:
        if order != 2:
            raise fail("NotBinarySpec", f"summand order {order} is not 2")
    validate_element(spec, element)
    value = 0
    power = 1
    for d in element.digits:
        value += 2 * d * power
        power *= 3
    return value


@dataclass(frozen=True)
class M0Report:
    """Exhaustive distortion audit of the doubling map.

    For every pair at filtration distance n the difference of images must
    land strictly inside (3**(n-1), 3**n); min_ratio/max_ratio track
    |difference| / 3**n. window_holds reports whether the one-exponent-up
    window [3**n, 3**(n+1)] also contains every difference (it does not;
    the first failing pair is kept as a witness).
    """

    max_len: int
    element_count: int
    pair_count: int
    sharp_holds: bool
    sharp_witness: tuple[tuple[int, ...], tuple[int, ...], int, int] | None
    min_ratio: Fraction
    max_ratio: Fraction
    window_holds: bool
    window_witness: tuple[tuple[int, ...], tuple[int, ...], int, int] | None


def m0_distortion_check(max_len: int) -> M0Report:
    """Audit the doubling map over all binary strings up to max_len digits."""
    if not isinstance(max_len, int) or isinstance(max_len, bool) or max_len < 1:
        raise fail("BadParameters", f"max_len must be a positive integer, got {max_len!r}")
    if max_len > 20:
        raise fail("BadParameters", f"max_len {max_len} is past the exhaustive range (20)")
    spec = CyclicSumSpec.of([(2, None)])
    elements: list[GroupElement] = [GroupElement.of(())]
    for ln in range(1, max_len + 1):
        for code in range(2 ** (ln - 1)):
            digits = [(code >> k) & 1 for k in range(ln - 1)] + [1]
            elements.append(GroupElement.of(digits))
    values = [m0_encode(spec, g) for g in elements]
    powers = [3**k for k in range(max_len + 2)]
    pair_count = 0
    sharp = True
    sharp_witness = None
    window = True
    window_witness = None
    min_ratio: Fraction | None = None
    max_ratio: Fraction | None = None
    for i, j in combinations(range(len(elements)), 2):
        p, q = elements[i], elements[j]
        if p.length != q.length:
            n = max(p.length, q.length)
        else:
            n = 0
            for k in range(p.length):
                if p.digits[k] != q.digits[k]:
                    n = k + 1
        delta = abs(values[i] - values[j])
        pair_count += 1
        if not powers[n - 1] < delta < powers[n]:
            sharp = False
            if sharp_witness is None:
                sharp_witness = (p.digits, q.digits, n, delta)
        ratio = Fraction(delta, powers[n])
        if min_ratio is None or ratio < min_ratio:
            min_ratio = ratio
        if max_ratio is None or ratio > max_ratio:
            max_ratio = ratio
        if not powers[n] <= delta <= powers[n + 1]:
            window = False
            if window_witness is None:
                window_witness = (p.digits, q.digits, n, delta)
    assert min_ratio is not None and max_ratio is not None
    return M0Report(
        max_len,
        len(elements),
        pair_count,
        sharp,
        sharp_witness,
        min_ratio,
        max_ratio,
        window,
        window_witness,
    )
