"""Closed intervals, projections, and set-valued signum resolvents.

The discrete sliding-mode steps in this package reduce to scalar inclusions

    x in F*sgn(y - x)                       (saturation form)
    z in A*sgn(x - z) + B*sgn(y - z)        (two-signum form)

where sgn is set-valued at zero (sgn(0) = [-1, 1]).  Both inclusions have
closed-form solutions built from nested projections onto closed intervals;
this module provides the interval type, the projection, and those solvers.

For the two-signum form with A > B > 0 the solution is the unique

    z = proj([proj(-C, y), proj(C, y)], x),   C = [A - B, A + B].

The same nested formula stays well defined (the inner bounds remain ordered)
for any A > 0, B >= 0, because |A - B| <= A + B; the uniqueness guarantee is
only established for A > B > 0, so outside that regime the formula is backed
by brute-force grid checks in the test suite rather than by the lemma.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi].

    Construction with lo > hi (or NaN endpoints) raises: ordering bugs in
    nested projections must surface loudly, never be silently swapped.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        # NaN compares false, so this also rejects NaN endpoints.
        if not self.lo <= self.hi:
            raise ValueError(f"malformed interval: lo={self.lo!r} > hi={self.hi!r}")

    def negate(self) -> "Interval":
        """Mirror image -I = [-hi, -lo]; an involution."""
        return Interval(-self.hi, -self.lo)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


def proj(a: Interval, x: float) -> float:
    """Closest point of the closed interval ``a`` to ``x`` (clamp)."""
    if x < a.lo:
        return a.lo
    if x > a.hi:
        return a.hi
    return x


def sgn_set(x: float) -> Interval:
    """Set-valued signum: {x/|x|} for x != 0 and [-1, 1] at x = 0."""
    if x > 0.0:
        return Interval(1.0, 1.0)
    if x < 0.0:
        return Interval(-1.0, -1.0)
    return Interval(-1.0, 1.0)


def sign_selection(x: float) -> float:
    """Single-valued selection of sgn_set; the selection at 0 is 0.

    The midpoint selection keeps explicit sliding-mode steps symmetric and
    avoids injecting bias exactly at the origin.
    """
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def solve_sgnsat(f: float, y: float) -> float:
    """Solve x in f*sgn(y - x) for x, with f >= 0.

    The unique solution is the saturation x = proj([-f, f], y).
    """
    if not f >= 0.0:
        raise ValueError(f"saturation gain must be nonnegative, got {f!r}")
    return proj(Interval(-f, f), y)


def nested_sgn_projection(c: Interval, y: float, x: float) -> float:
    """Resolvent kernel proj([proj(-C, y), proj(C, y)], x).

    Requires c.hi >= |c.lo| so that the inner bounds come out ordered; every
    interval of the form [A - B, A + B] with A, B >= 0 qualifies.  The inner
    Interval constructor re-checks the ordering.
    """
    inner = Interval(proj(c.negate(), y), proj(c, y))
    return proj(inner, x)


def solve_interval_sgn(a: float, b: float, x: float) -> Interval:
    """Solution set of y in [-a, a] + b*sgn(x - y), as an interval.

    With C = [a - b, a + b], the solutions are exactly
    [proj(-C, x), proj(C, x)].  Hypothesis for the equivalence: a > b > 0.
    """
    if not a > 0.0 or not b > 0.0:
        raise ValueError(f"gains must be positive, got a={a!r}, b={b!r}")
    c = Interval(a - b, a + b)
    return Interval(proj(c.negate(), x), proj(c, x))


def solve_two_sgn(a: float, b: float, x: float, y: float) -> float:
    """Solve z in a*sgn(x - z) + b*sgn(y - z) for z.

    Evaluates the nested-projection formula with C = [a - b, a + b].  The
    solution is unique and exact for a > b > 0; for a > 0, b >= 0 the formula
    is still evaluated verbatim (empirically validated in the tests).
    """
    if not a > 0.0:
        raise ValueError(f"leading gain must be positive, got a={a!r}")
    if not b >= 0.0:
        raise ValueError(f"second gain must be nonnegative, got b={b!r}")
    return nested_sgn_projection(Interval(a - b, a + b), y, x)
