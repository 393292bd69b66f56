"""Exact arithmetic and hyperbolic geometry for the moonshine groups.

The group of level ``N`` (square-free) consists of the matrices

    (1/sqrt(e)) * [[a, b], [c, d]],   ad - bc = e,  e | N,  e | a,  e | d,  N | c,

acting on the upper half-plane by Mobius transformations, taken projectively
(an element and its negative are identified).  All element arithmetic is done
on the integer five-tuple ``(a, b, c, d, e)``, so products and inverses are
exact; a common square factor picked up in a product is divided out.

Every such group has a single cusp at infinity.  Pullback to the Dirichlet
fundamental domain runs in two certified stages: exact integer recentering
plus height ascent over the finite set of elements whose isometric circles
can support the cusp-centered domain boundary (any point strictly below that
boundary lies strictly inside one of those circles, so a single move always
makes progress), followed by distance descent to the Dirichlet center over
the finite set of elements moving the center at most a precomputed radius
(any point closer to the center than that radius which no such move improves
is already the true Dirichlet representative).  Both sets are enumerated
from the membership conditions, so correctness does not depend on the
generator list being reduction-complete.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import (
    DomainError,
    IterationLimit,
    MembershipViolation,
    UnsupportedGroup,
)

PULLBACK_MAX_ITER = 10_000
#: Dirichlet center used for the built-in profiles; on the imaginary axis,
#: above every elliptic fixed point of the supported levels.
DEFAULT_CENTER = complex(0.0, 1.2)


def prime_factors(n: int) -> tuple[int, ...]:
    """Prime factorization of a square-free positive integer, ascending."""
    if n < 1:
        raise DomainError(f"level must be positive, got {n}")
    out = []
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            m //= p
            if m % p == 0:
                raise DomainError(f"level {n} is not square-free")
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class UpperHalfPoint:
    """A point x + iy in the upper half-plane (y > 0)."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0.0) or not math.isfinite(self.y) or not math.isfinite(self.x):
            raise DomainError(f"point {self.x} + {self.y}i is not in the upper half-plane")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class GroupElement:
    """Group element ``(1/sqrt(e)) [[a, b], [c, d]]`` of the level-``N`` group.

    Stored in the canonical projective representative: ``a > 0``, or ``a == 0``
    and ``c > 0``.  Instances are produced by :func:`make_element`, which
    validates the membership conditions.
    """

    a: int
    b: int
    c: int
    d: int
    e: int
    N: int

    def inverse(self) -> "GroupElement":
        return make_element(self.d, -self.b, -self.c, self.a, self.e, self.N)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.N != other.N:
            raise MembershipViolation("cannot multiply elements of different levels")
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        # The raw product lives under sqrt(e1*e2); the group element it equals
        # carries e = e1*e2 / g**2 with g = gcd(e1, e2), and g divides all
        # four integer entries (guaranteed by closure).
        g = math.gcd(self.e, other.e)
        if any(v % g for v in (a, b, c, d)):
            raise MembershipViolation(
                f"product entries {(a, b, c, d)} not divisible by gcd {g}"
            )
        return make_element(a // g, b // g, c // g, d // g,
                            (self.e * other.e) // (g * g), self.N)

    def apply_complex(self, z: complex) -> complex:
        # The 1/sqrt(e) scaling cancels between numerator and denominator.
        return (self.a * z + self.b) / (self.c * z + self.d)

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e)

    @classmethod
    def identity(cls, N: int) -> "GroupElement":
        return make_element(1, 0, 0, 1, 1, N)


def make_element(a: int, b: int, c: int, d: int, e: int, N: int) -> GroupElement:
    """Validate the five membership conditions and canonicalize the sign.

    Raises :class:`MembershipViolation` naming the first failed condition.
    """
    prime_factors(N)  # level must be positive and square-free
    if e < 1:
        raise MembershipViolation(f"scaling divisor e = {e} must be positive")
    if a * d - b * c != e:
        raise MembershipViolation(f"determinant {a * d - b * c} != e = {e}")
    if N % e:
        raise MembershipViolation(f"e = {e} does not divide the level {N}")
    if a % e:
        raise MembershipViolation(f"e = {e} does not divide a = {a}")
    if d % e:
        raise MembershipViolation(f"e = {e} does not divide d = {d}")
    if c % N:
        raise MembershipViolation(f"level {N} does not divide c = {c}")
    if a < 0 or (a == 0 and c < 0):
        a, b, c, d = -a, -b, -c, -d
    return GroupElement(a, b, c, d, e, N)


def apply(g: GroupElement, z: UpperHalfPoint) -> UpperHalfPoint:
    """Apply the Mobius action of ``g`` to a point of the upper half-plane."""
    w = g.apply_complex(z.z)
    return UpperHalfPoint(w.real, w.imag)


def hyperbolic_distance(z: UpperHalfPoint, w: UpperHalfPoint) -> float:
    """Hyperbolic distance, via d = 2 asinh(|z - w| / (2 sqrt(Im z Im w))).

    This form is exact (cosh d = 1 + |z - w|^2 / (2 Im z Im w)) and keeps full
    precision for nearby points, where the acosh form loses digits.
    """
    return 2.0 * math.asinh(abs(z.z - w.z) / (2.0 * math.sqrt(z.y * w.y)))


@dataclass(frozen=True)
class GroupProfile:
    """Everything the rest of the package needs to know about one group.

    ``volume`` is the hyperbolic area of the quotient, ``elliptic_orders`` the
    orders in the signature, ``n_small`` the number of small eigenvalues
    (the zero eigenvalue counts), ``m_quarter`` the multiplicity of the
    eigenvalue 1/4, and ``y_min`` the height of the lowest point of the
    Dirichlet fundamental domain (the "floor").
    """

    N: int
    volume: float
    elliptic_orders: tuple[int, ...]
    n_small: int
    m_quarter: int
    generators: tuple[GroupElement, ...]
    center: UpperHalfPoint
    y_min: float
    num_cusps: int = 1

    def __post_init__(self):
        if self.num_cusps != 1:
            raise DomainError("only one-cusp groups are supported")
        if not (self.volume > 0.0):
            raise DomainError("volume must be positive")
        if not (0.0 < self.y_min <= self.center.y):
            raise DomainError("floor height must lie in (0, Im center]")
        if any(m < 2 for m in self.elliptic_orders):
            raise DomainError("elliptic orders must be >= 2")

    @property
    def primes(self) -> tuple[int, ...]:
        return prime_factors(self.N)

    def moves(self) -> tuple[GroupElement, ...]:
        """Generators followed by their inverses, the pullback candidate set."""
        return self.generators + tuple(g.inverse() for g in self.generators)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "volume": self.volume,
            "elliptic_orders": list(self.elliptic_orders),
            "n_small": self.n_small,
            "m_quarter": self.m_quarter,
            "generators": [list(g.as_tuple()) for g in self.generators],
            "center": [self.center.x, self.center.y],
            "y_min": self.y_min,
            "num_cusps": self.num_cusps,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GroupProfile":
        N = int(doc["N"])
        gens = tuple(make_element(*map(int, t), N) for t in doc["generators"])
        cx, cy = doc["center"]
        return cls(
            N=N,
            volume=float(doc["volume"]),
            elliptic_orders=tuple(int(m) for m in doc["elliptic_orders"]),
            n_small=int(doc["n_small"]),
            m_quarter=int(doc["m_quarter"]),
            generators=gens,
            center=UpperHalfPoint(float(cx), float(cy)),
            y_min=float(doc["y_min"]),
            num_cusps=int(doc.get("num_cusps", 1)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GroupProfile":
        return cls.from_dict(json.loads(text))


# Generator five-tuples for the built-in levels.
_BUILTIN_GENERATORS = {
    1: ((1, 1, 0, 1, 1), (0, -1, 1, 0, 1)),
    5: ((1, 1, 0, 1, 1), (5, -1, 5, 0, 5), (5, -3, 10, -5, 5)),
    6: ((1, 1, 0, 1, 1), (6, -1, 6, 0, 6), (3, -2, 6, -3, 3)),
}

_BUILTIN_SIGNATURE = {
    # N: (volume, elliptic orders, n_small, m_quarter)
    1: (math.pi / 3.0, (2, 3), 1, 0),
    5: (math.pi, (2, 2, 2), 1, 0),
    6: (math.pi, (2, 2, 2), 1, 0),
}


@lru_cache(maxsize=None)
def builtin_profile(N: int) -> GroupProfile:
    """Built-in profile for a supported level, with the floor height measured.

    Raises :class:`UnsupportedGroup` for levels without stored group data.
    """
    if N not in _BUILTIN_GENERATORS:
        raise UnsupportedGroup(
            f"no built-in profile for level {N}; supported: {sorted(_BUILTIN_GENERATORS)}"
        )
    volume, orders, n_small, m_quarter = _BUILTIN_SIGNATURE[N]
    gens = tuple(make_element(*t, N) for t in _BUILTIN_GENERATORS[N])
    provisional = GroupProfile(
        N=N,
        volume=volume,
        elliptic_orders=orders,
        n_small=n_small,
        m_quarter=m_quarter,
        generators=gens,
        center=UpperHalfPoint.from_complex(DEFAULT_CENTER),
        y_min=0.05,  # placeholder until the floor is measured
    )
    return replace(provisional, y_min=estimate_floor(provisional))


def _surrogate(z: complex, p: complex) -> float:
    # |z - p|^2 / Im z is strictly monotone in d(p, z) for fixed p, and is
    # cheaper and tie-exact compared with evaluating the distance itself.
    dx = z.real - p.real
    dy = z.imag - p.imag
    return (dx * dx + dy * dy) / z.imag


def _divisors(N: int) -> tuple[int, ...]:
    divs = [1]
    for p in prime_factors(N):
        divs += [d * p for d in divs]
    return tuple(sorted(divs))


def _complete_element(c: int, d: int, e: int, N: int) -> GroupElement | None:
    """Some group element with lower row (c, d) and scaling e, if one exists.

    All completions differ by an integer translation on the left, which the
    reduction recenters away, so any representative is as good as any other.
    The scan range covers a full period of the joint congruence a*d = e (mod
    c), e | a, so a miss proves there is no completion.
    """
    if c == 0:
        return None
    lim = abs(c) * e + e
    for a in range(0, lim + 1, e):
        for aa in ((a, -a) if a else (0,)):
            if (aa * d - e) % c == 0:
                try:
                    return make_element(aa, (aa * d - e) // c, c, d, e, N)
                except MembershipViolation:
                    continue
    return None


@lru_cache(maxsize=None)
def _circle_moves(N: int, y_lb: float) -> tuple:
    """Elements whose isometric circle (center -d/c, radius sqrt(e)/|c|) has
    radius >= y_lb and reaches the unit strip around the imaginary axis."""
    out = {}
    for e in _divisors(N):
        c_max = int(math.floor(math.sqrt(e) / y_lb))
        for c in range(N, c_max + 1, N):
            d_max = int(math.floor(c / 2 + math.sqrt(e)))
            for d in range(-(d_max // e) * e, d_max + 1, e):
                g = _complete_element(c, d, e, N)
                if g is not None:
                    out[(c, d, e)] = g
    return tuple(out.values())


def _envelope_min(moves) -> float:
    """Exact minimum over |x| <= 1/2 of the upper envelope of the circles.

    Envelope arcs are concave, so the minimum sits at an arc crossing or at
    the strip ends; both are enumerated directly.
    """
    circles = []
    for g in moves:
        radius = math.sqrt(g.e) / abs(g.c)
        u0 = -g.d / g.c
        for k in range(math.ceil(-0.5 - radius - u0),
                       math.floor(0.5 + radius - u0) + 1):
            circles.append((u0 + k, radius))

    def env(x: float) -> float:
        h2 = max((r * r - (x - u) * (x - u) for u, r in circles), default=0.0)
        return math.sqrt(h2) if h2 > 0.0 else 0.0

    xs = {-0.5, 0.5}
    for i, (u1, r1) in enumerate(circles):
        for u2, r2 in circles[i + 1:]:
            if u1 != u2:
                x = (r1 * r1 - r2 * r2 + u2 * u2 - u1 * u1) / (2.0 * (u2 - u1))
                if -0.5 <= x <= 0.5:
                    xs.add(x)
    return min(env(x) for x in xs)


@lru_cache(maxsize=None)
def _ford_data(N: int) -> tuple[float, tuple]:
    """Certified circle move set and the exact floor of the cusp-centered domain.

    If the envelope minimum of the radius-limited circle set is at least the
    radius cutoff, no excluded circle (radius below the cutoff) can reach the
    envelope, so the set provably contains every boundary-supporting element
    and the computed floor is exact.
    """
    y_lb = 0.5 / math.sqrt(N)
    for _ in range(60):
        moves = _circle_moves(N, y_lb)
        if moves:
            floor = _envelope_min(moves)
            if floor >= y_lb:
                return floor, moves
        y_lb *= 0.7
    raise IterationLimit(f"could not certify a reduction move set for level {N}")


@lru_cache(maxsize=None)
def _ball_moves(N: int, px: float, py: float, cosh_r: float) -> tuple:
    """All non-translation elements moving p = px + i*py by at most acosh(cosh_r).

    Conjugating so that p sits at i turns the displacement into a Frobenius
    norm: 2 e cosh d(p, gp) = A^2 + B^2/py^2 + C^2 py^2 + D^2 with A = a - px
    c, B = b + px (a - d) - px^2 c, C = c, D = d + px c, which bounds every
    entry and makes the enumeration finite.
    """
    out = {}
    for e in _divisors(N):
        lim = math.sqrt(2.0 * e * cosh_r)
        c_max = int(math.floor(lim / py))
        for c in range(-(c_max // N) * N, c_max + 1, N):
            if c == 0:
                continue
            d_lo = -lim - px * c
            d_hi = lim - px * c
            for d in range(math.ceil(d_lo / e) * e, int(math.floor(d_hi)) + 1, e):
                a_lo = -lim + px * c
                a_hi = lim + px * c
                for a in range(math.ceil(a_lo / e) * e, int(math.floor(a_hi)) + 1, e):
                    if (a * d - e) % c:
                        continue
                    b = (a * d - e) // c
                    A = a - px * c
                    B = b + px * (a - d) - px * px * c
                    D = d + px * c
                    cosh_d = (A * A + B * B / py ** 2 + c * c * py ** 2 + D * D) \
                        / (2.0 * e)
                    if cosh_d > cosh_r * (1.0 + 1e-12):
                        continue
                    try:
                        g = make_element(a, b, c, d, e, N)
                    except MembershipViolation:
                        continue
                    out[g.as_tuple()] = g
    return tuple(out.values())


@lru_cache(maxsize=None)
def _reduction_data(N: int, px: float, py: float):
    """Move sets and thresholds for the two-stage pullback at center px + i*py.

    ``y_skip`` is the height above which a recentered point is provably the
    Dirichlet representative already (every non-translation image of the
    center has height at most 1/(N py), and above the larger root of the
    separating quadratic the center is strictly closest).  ``cosh_r`` is
    sized so the metric ball covers twice the worst center distance over the
    stage-one landing rectangle.
    """
    floor, ford = _ford_data(N)
    v = 1.0 / (N * py)
    if not v < 0.95 * py:
        raise DomainError(
            f"Dirichlet center height {py} too low for a certified reduction")
    y_skip = math.sqrt(v * (0.25 + py * py - py * v) / (py - v)) * 1.02
    y_skip = max(y_skip, floor * 1.01)

    def center_cosh(y: float) -> float:
        return 1.0 + (0.25 + (y - py) ** 2) / (2.0 * py * y)

    d0 = math.acosh(max(center_cosh(floor), center_cosh(max(y_skip, py))))
    cosh_r = math.cosh(2.0 * d0 + 0.5)
    ball = _ball_moves(N, px, py, cosh_r)
    return ford, ball, floor, y_skip


def _as_arrays(moves) -> tuple[np.ndarray, ...]:
    quad = np.array([[g.a, g.b, g.c, g.d] for g in moves], dtype=float)
    es = np.array([g.e for g in moves], dtype=float)
    return quad[:, 0], quad[:, 1], quad[:, 2], quad[:, 3], es


@lru_cache(maxsize=None)
def _reduction_arrays(N: int, px: float, py: float):
    ford, ball, floor, y_skip = _reduction_data(N, px, py)
    return _as_arrays(ford), _as_arrays(ball), floor, y_skip


@lru_cache(maxsize=None)
def _dirichlet_floor(N: int, px: float, py: float) -> float:
    """Exact floor of the Dirichlet domain at p = px + i*py.

    The low boundary of the domain consists of arcs of the perpendicular
    bisectors between p and its images gp = (u, v); for v < py the bisector
    is the circle centered at (px + py (u - px)/(py - v), 0) with radius
    sqrt(py v ((u - px)^2 + (py - v)^2))/(py - v).  The floor is the minimum
    over the width-one strip of the upper envelope of these circles, attained
    at an arc crossing or a strip end.  The certified metric ball contains
    every element whose bisector can support the boundary.
    """
    _, ball, _, _ = _reduction_data(N, px, py)
    p = complex(px, py)
    circles = []
    for g in ball:
        q = g.apply_complex(p)
        u, v = q.real - px, q.imag
        if v >= py:
            continue
        center = px + py * u / (py - v)
        radius = math.sqrt(py * v * (u * u + (py - v) ** 2)) / (py - v)
        circles.append((center, radius))

    def env(x: float) -> float:
        h2 = max((r * r - (x - u) * (x - u) for u, r in circles), default=0.0)
        return math.sqrt(h2) if h2 > 0.0 else 0.0

    xs = {px - 0.5, px + 0.5}
    for i, (u1, r1) in enumerate(circles):
        for u2, r2 in circles[i + 1:]:
            if u1 != u2:
                x = (r1 * r1 - r2 * r2 + u2 * u2 - u1 * u1) / (2.0 * (u2 - u1))
                if px - 0.5 <= x <= px + 0.5:
                    xs.add(x)
    return min(env(x) for x in xs)


def _shift(k: int, N: int) -> GroupElement:
    return GroupElement(1, k, 0, 1, 1, N)


def pullback(
    z: UpperHalfPoint,
    profile: GroupProfile,
    max_iter: int = PULLBACK_MAX_ITER,
) -> tuple[UpperHalfPoint, GroupElement]:
    """Pull a point back into the Dirichlet fundamental domain.

    Stage one lifts the point to the highest representative of its orbit in
    the unit strip (strict height ascent over the certified circle set);
    stage two walks it to the representative closest to the Dirichlet center
    (strict distance descent over the certified metric ball).  Returns the
    final point and the exact group element mapping the input to it.

    Raises :class:`IterationLimit` if the loops do not terminate within
    ``max_iter`` moves in total (signals a corrupt profile).
    """
    N = profile.N
    px, py = profile.center.x, profile.center.y
    ford, ball, _, y_skip = _reduction_data(N, px, py)
    p = profile.center.z
    cur = z.z
    gamma = GroupElement.identity(N)
    budget = max_iter

    while budget > 0:
        budget -= 1
        k = round(cur.real)
        if k:
            cur -= k
            gamma = _shift(-k, N) * gamma
        best = None
        y_best = cur.imag * (1.0 + 1e-15)
        for g in ford:
            w = g.apply_complex(cur)
            if w.imag > y_best:
                y_best, best = w.imag, (g, w)
        if best is None:
            break
        g, cur = best
        gamma = g * gamma
    else:
        raise IterationLimit(f"pullback ascent exceeded {max_iter} iterations")

    while budget > 0:
        budget -= 1
        k = round(cur.real - px)
        if k:
            cur -= k
            gamma = _shift(-k, N) * gamma
        if cur.imag >= y_skip:
            break
        best = None
        s_best = _surrogate(cur, p)
        for g in ball:
            w = g.apply_complex(cur)
            s = _surrogate(w, p)
            if s < s_best:
                s_best, best = s, (g, w)
        if best is None:
            break
        g, cur = best
        gamma = g * gamma
    else:
        raise IterationLimit(f"pullback descent exceeded {max_iter} iterations")
    return UpperHalfPoint(cur.real, cur.imag), gamma


def pullback_points(
    xs: np.ndarray,
    y: float,
    profile: GroupProfile,
    max_iter: int = PULLBACK_MAX_ITER,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized pullback of the points ``xs[k] + iy`` (no element tracking).

    Same two-stage reduction as :func:`pullback`, so the two paths agree;
    this one trades the word for throughput.
    """
    if float(y) <= 0.0:
        raise DomainError("sample height must be positive")
    px, py = profile.center.x, profile.center.y
    (fa, fb, fc, fd, fe), (ba, bb, bc, bd, be), _, y_skip = \
        _reduction_arrays(profile.N, px, py)
    p = profile.center.z
    zs = np.asarray(xs, dtype=float) + 1j * float(y)

    active = np.ones(zs.shape, dtype=bool)
    for _ in range(max_iter):
        za = zs[active]
        if za.size == 0:
            break
        za = za - np.round(za.real)
        denom2 = np.abs(fc[:, None] * za[None, :] + fd[:, None]) ** 2
        heights = fe[:, None] * za.imag[None, :] / denom2
        pick = np.argmax(heights, axis=0)
        cols = np.arange(za.size)
        improved = heights[pick, cols] > za.imag * (1.0 + 1e-15)
        moved = (fa[pick] * za + fb[pick]) / (fc[pick] * za + fd[pick])
        za = np.where(improved, moved, za)
        idx = np.flatnonzero(active)
        zs[idx] = za
        active[idx[~improved]] = False
    else:
        raise IterationLimit(f"pullback ascent exceeded {max_iter} iterations")

    zs = zs - np.round(zs.real - px)
    active = zs.imag < y_skip
    for _ in range(max_iter):
        za = zs[active]
        if za.size == 0:
            break
        s_cur = (np.abs(za - p) ** 2) / za.imag
        cand = (ba[:, None] * za[None, :] + bb[:, None]) / \
            (bc[:, None] * za[None, :] + bd[:, None])
        s_cand = (np.abs(cand - p) ** 2) / cand.imag
        pick = np.argmin(s_cand, axis=0)
        cols = np.arange(za.size)
        improved = s_cand[pick, cols] < s_cur
        moved = cand[pick, cols]
        moved = moved - np.round(moved.real - px)
        za = np.where(improved, moved, za)
        idx = np.flatnonzero(active)
        zs[idx] = za
        active[idx[~improved]] = False
    else:
        raise IterationLimit(f"pullback descent exceeded {max_iter} iterations")
    return zs.real, zs.imag


def estimate_floor(profile: GroupProfile, samples: int = 1200) -> float:
    """Estimate the floor height of the Dirichlet fundamental domain.

    Pulls back a deterministic grid of low-height points spanning one period
    of the cusp width, sharpens the grid minimum by shrinking local passes,
    and crosses the sampled minimum with the exact geometric floor (the
    vertex minimum of the bisector envelope); the smaller of the two times a
    0.99 safety factor is returned, since under-estimating the floor is the
    safe direction.
    """
    if samples < 1000:
        raise DomainError("floor estimation needs at least 1000 samples")
    heights = (0.040, 0.065, 0.105)
    nx = -(-samples // len(heights))  # ceil division
    floor, x0, h0 = math.inf, 0.0, heights[0]
    for y in heights:
        xs = (np.arange(nx) + 0.5) / nx
        _, ys_star = pullback_points(xs, y, profile)
        i = int(np.argmin(ys_star))
        if float(ys_star[i]) < floor:
            floor, x0, h0 = float(ys_star[i]), float(xs[i]), y
    width = 1.0 / nx
    for _ in range(40):
        xs = np.linspace(x0 - width, x0 + width, 9)
        _, ys_star = pullback_points(xs, h0, profile)
        i = int(np.argmin(ys_star))
        if float(ys_star[i]) < floor:
            floor, x0 = float(ys_star[i]), float(xs[i])
        width /= 3.0
    floor = min(floor, _dirichlet_floor(profile.N, profile.center.x,
                                        profile.center.y))
    return 0.99 * floor


def save_profile(profile: GroupProfile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(profile.to_json() + "\n")


def load_profile(path) -> GroupProfile:
    with open(path, "r", encoding="utf-8") as fh:
        return GroupProfile.from_json(fh.read())
