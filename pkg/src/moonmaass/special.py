"""K-Bessel functions of imaginary order, zeta/xi, and the scattering determinant.

The spectral parameter enters through K_{ir}(y), evaluated from the integral
representation

    K_{ir}(y) = int_0^inf exp(-y cosh t) cos(rt) dt .

The integrand decays doubly exponentially in t, so the plain trapezoid rule is
already a double-exponential quadrature; node spacing is halved until two
successive refinements agree.  The catch is cancellation: the integrand has
magnitude ~exp(-y) while the value is ~exp(-pi r/2 - eta(r, y)), so float64
quadrature silently loses exp(pi r/2 - y + eta) of relative accuracy.  The
scaled function exp(pi r/2) K_{ir}(y) is therefore computed by quadrature only
where that loss is a few digits, and continued downward in y by integrating

    y^2 w'' + y w' + (r^2 - y^2) w = 0

with adaptive Taylor steps.  Marching toward smaller y is the stable direction
(the unwanted I-type solution decays there), and the per-order Taylor segments
double as a piecewise evaluator for batch queries.

An independent arbitrary-precision oracle (`bessel_k_ir_oracle`) does the same
quadrature in mpmath with the working precision raised above the cancellation
loss; it is deliberately simple and slow.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import loggamma as _scipy_loggamma

from .errors import DomainError, PoleError
from .groups import GroupProfile, prime_factors

__all__ = [
    "bessel_k_ir",
    "bessel_k_ir_scaled",
    "bessel_k_ir_oracle",
    "log_gamma",
    "zeta",
    "zeta_euler_maclaurin",
    "completed_xi",
    "dirichlet_factor",
    "scattering_det",
]

R_MAX = 500.0
_LOSS_CAP = 7.0          # accepted cancellation, in natural-log units
_TAYLOR_ORDER = 30
_EULER_GAMMA = 0.5772156649015329
_STIELTJES_1 = -0.0728158454836767


# ---------------------------------------------------------------------------
# scaled K-Bessel: float64 production path
# ---------------------------------------------------------------------------

def _decay_exponent(r: float, x: float) -> float:
    """eta(r, x) with exp(pi r/2) K_{ir}(x) ~ C(x) exp(-eta) for x > r."""
    if x <= r:
        return 0.0
    return math.sqrt(x * x - r * r) - r * math.acos(r / x)


def _cancellation_loss(r: float, x: float) -> float:
    # log(integrand peak / result magnitude) for the scaled integrand
    if x >= r:
        return math.pi * r / 2 - x + _decay_exponent(r, x)
    return math.pi * r / 2 - x + 0.25 * math.log(r * r - x * x + 2.0)


def _quad_boundary(r: float) -> float:
    """Smallest x where direct float64 quadrature keeps ~13 digits (0 if all x do)."""
    if _cancellation_loss(r, 1e-3) <= _LOSS_CAP:
        return 0.0
    lo = max(r, 1.0)
    hi = max(4.0 * r, lo + 60.0)
    while _cancellation_loss(r, hi) > _LOSS_CAP:
        hi *= 1.6
    # loss is strictly decreasing in x, so bisection is safe
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _cancellation_loss(r, mid) > _LOSS_CAP:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * hi:
            break
    return hi


def _trapezoid_scaled(r: float, xs: np.ndarray, derivative: bool = False):
    """Trapezoid values of exp(pi r/2) K_{ir}(x) on a shared node grid.

    Returns the value array, or (value, d/dx value) when ``derivative`` is set.
    Node spacing is halved until every entry is stable to ~1e-13 relative
    (with an envelope floor for entries near an oscillation zero).
    """
    xs = np.asarray(xs, dtype=float)
    xmin = float(xs.min())
    pref = math.pi * r / 2
    tmax = math.acosh(max((pref + 760.0) / xmin, 2.0))

    def sweep(h):
        t = np.arange(0.0, tmax + h, h)
        base = np.cos(r * t) * h
        base[0] *= 0.5
        ch = np.cosh(t)
        v = np.empty(xs.size)
        dv = np.empty(xs.size) if derivative else None
        step = max(1, int(3.4e7) // t.size)  # bound the kernel block size
        for i in range(0, xs.size, step):
            block = np.exp(pref - np.outer(xs[i:i + step], ch))
            v[i:i + step] = block @ base
            if derivative:
                dv[i:i + step] = -(block @ (base * ch))
        return v, dv

    h = min(0.35, 2 * math.pi / (r + 40.0))
    new, dnew = sweep(h)
    for _ in range(13):
        vals, dvals = new, dnew
        h *= 0.5
        new, dnew = sweep(h)
        scale = float(np.max(np.abs(new))) + 1e-300
        ok = np.all(np.abs(new - vals) <= 2e-13 * np.abs(new) + 1e-16 * scale)
        if ok and derivative:
            ok = np.all(np.abs(dnew - dvals) <= 2e-13 * np.abs(dnew) + 1e-16 * scale)
        if ok:
            break
    # on fall-through, accept the finest level; the oracle tests police accuracy
    if derivative:
        return new, dnew
    return new


def _taylor_coeffs(r: float, c: float, w0: float, w1: float, order: int) -> np.ndarray:
    """Taylor coefficients at center c of a solution of the K-Bessel ODE."""
    a = np.empty(order + 1)
    a[0], a[1] = w0, w1
    c2 = c * c
    r2 = r * r
    for k in range(order - 1):
        s = (k + 1) * (2 * k + 1) * c * a[k + 1] + (k * k + r2 - c2) * a[k]
        if k >= 1:
            s -= 2.0 * c * a[k - 1]
        if k >= 2:
            s -= a[k - 2]
        a[k + 2] = -s / (c2 * (k + 2) * (k + 1))
    return a


class _KBesselEvaluator:
    """Batch evaluator of exp(pi r/2) K_{ir}(x) for one fixed r >= 0.

    A single downward Taylor march covers every argument: the anchor sits
    where direct float64 quadrature of the cosh-integral is cancellation-safe
    (above both the turning point and the loss boundary) and is pushed up
    lazily when larger arguments appear.  Marching toward smaller x is the
    stable direction for K, so one anchor quadrature serves the whole grid.
    """

    def __init__(self, r: float):
        self.r = float(r)
        self.xq = max(_quad_boundary(self.r), 1.05 * self.r + 2.0, 10.0)
        # marched values deeper than this are too small to anchor accurately
        self.top = math.pi * self.r / 2 + 700.0
        self._anchor: float | None = None
        self._march_x = math.inf
        self._w0 = 0.0       # normalized to O(1); the true value carries
        self._w1 = 0.0       # the running exp(_logscale) factor
        self._logscale = 0.0
        self._centers: list[float] = []
        self._lows: list[float] = []
        self._logs: list[float] = []
        self._coeffs: list[np.ndarray] = []
        self._low_arr = np.empty(0)
        self._center_arr = np.empty(0)
        self._log_arr = np.empty(0)
        self._coef_arr = np.empty((0, _TAYLOR_ORDER + 1))

    def _anchor_at(self, a: float) -> None:
        v, dv = _trapezoid_scaled(self.r, np.array([a]), derivative=True)
        m = max(abs(float(v[0])), abs(float(dv[0])))
        self._anchor = a
        self._march_x = a
        self._logscale = math.log(m)
        self._w0, self._w1 = float(v[0]) / m, float(dv[0]) / m
        self._centers, self._lows, self._logs, self._coeffs = [], [], [], []

    def _ensure(self, lo: float, hi: float) -> None:
        hi = min(hi, self.top)
        if self._anchor is None or hi > self._anchor:
            prev_low = self._march_x if self._anchor is not None else math.inf
            self._anchor_at(max(min(hi + 8.0, self.top), self.xq))
            lo = min(lo, prev_low)
        target = min(lo, self._anchor - 1e-9)
        if target < self._march_x:
            self._extend_to(target)

    def _extend_to(self, x_target: float) -> None:
        c, w0, w1 = self._march_x, self._w0, self._w1
        logscale = self._logscale
        r = self.r
        while c > x_target:
            coeffs = _taylor_coeffs(r, c, w0, w1, _TAYLOR_ORDER)
            rate = (math.sqrt(abs(r * r - c * c)) + 4.0) / c
            dx = min(0.5 * c, 3.2 / rate)
            for _ in range(60):
                powers = np.abs(coeffs) * dx ** np.arange(_TAYLOR_ORDER + 1)
                scale = float(powers.max())
                if powers[-1] + powers[-2] <= 1e-16 * scale:
                    break
                dx *= 0.65
            low = c - dx
            self._centers.append(c)
            self._lows.append(low)
            self._logs.append(logscale)
            self._coeffs.append(coeffs)
            # advance: value and derivative of the series at delta = -dx
            d = -dx
            v = coeffs[-1]
            dv = 0.0
            for k in range(_TAYLOR_ORDER - 1, -1, -1):
                dv = dv * d + v
                v = v * d + coeffs[k]
            # renormalize so the recurrence never runs in the subnormal range
            m = max(abs(v), abs(dv))
            c, w0, w1 = low, float(v) / m, float(dv) / m
            logscale += math.log(m)
        self._march_x, self._w0, self._w1 = c, w0, w1
        self._logscale = logscale
        order = np.argsort(self._lows)
        self._low_arr = np.asarray(self._lows)[order]
        self._center_arr = np.asarray(self._centers)[order]
        self._log_arr = np.asarray(self._logs)[order]
        self._coef_arr = np.asarray(self._coeffs)[order]

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        flat = np.atleast_1d(xs).astype(float)
        out = np.zeros(flat.shape)
        # anything past the underflow horizon of the scaled value stays 0
        horizon = math.pi * self.r / 2 + 745.0
        live = flat < horizon
        deep = live & (flat > self.top)
        if deep.any():
            # rare near-underflow stragglers: direct quadrature, march untouched
            out[deep] = _trapezoid_scaled(self.r, flat[deep])
            live &= ~deep
        if live.any():
            args = flat[live]
            self._ensure(float(args.min()), float(args.max()))
            idx = np.clip(np.searchsorted(self._low_arr, args, side="right") - 1,
                          0, len(self._low_arr) - 1)
            vals = np.empty(idx.shape)
            for seg in np.unique(idx):
                sel = idx == seg
                delta = args[sel] - self._center_arr[seg]
                coeffs = self._coef_arr[seg]
                v = np.full(delta.shape, coeffs[-1])
                for k in range(_TAYLOR_ORDER - 1, -1, -1):
                    v = v * delta + coeffs[k]
                vals[sel] = v * math.exp(self._log_arr[seg])
            out[live] = vals
        return out.reshape(xs.shape) if xs.shape else out


@lru_cache(maxsize=128)
def _evaluator(r: float) -> _KBesselEvaluator:
    return _KBesselEvaluator(r)


def _check_bessel_args(r: float, y: float) -> tuple[float, float]:
    r = float(r)
    y = float(y)
    if not (y > 0.0) or not math.isfinite(y):
        raise DomainError(f"K-Bessel argument must be positive, got {y}")
    if abs(r) > R_MAX or not math.isfinite(r):
        raise DomainError(f"imaginary order |r| = {abs(r)} outside the supported [0, {R_MAX}]")
    return abs(r), y  # K_{ir} = K_{-ir}


def bessel_k_ir_scaled(r: float, y: float) -> float:
    """exp(pi |r|/2) K_{i r}(y), the scaling that stays O(1) below the turning point."""
    r, y = _check_bessel_args(r, y)
    return float(_evaluator(r).values(np.array([y]))[0])


def bessel_k_ir(r: float, y: float) -> float:
    """K_{ir}(y) for real r and y > 0.

    Returns 0.0 once the true magnitude falls below the double-precision
    range; callers that need those magnitudes should use
    :func:`bessel_k_ir_scaled`, which carries the exp(pi r/2) factor
    analytically.
    """
    r, y = _check_bessel_args(r, y)
    return float(_evaluator(r).values(np.array([y]))[0]) * math.exp(-math.pi * r / 2)


def bessel_k_ir_grid(r: float, ys: np.ndarray) -> np.ndarray:
    """Vectorized scaled K-Bessel over an argument array at fixed order."""
    r = abs(float(r))
    if r > R_MAX:
        raise DomainError(f"imaginary order {r} outside the supported [0, {R_MAX}]")
    ys = np.asarray(ys, dtype=float)
    if ys.size and not (ys.min() > 0.0):
        raise DomainError("K-Bessel arguments must be positive")
    return _evaluator(r).values(ys)


def bessel_k_ir_oracle(r: float, y: float, scaled: bool = False,
                       rel_tol: float = 1e-15) -> float:
    """Arbitrary-precision trapezoid quadrature of the cosh-integral.

    Working precision is raised above the cancellation loss, and the node
    spacing is halved until two refinements agree to ``rel_tol``.  Slow by
    design; this is the reference the fast path is tested against.
    """
    r, y = _check_bessel_args(r, y)
    extra = max(0.0, _cancellation_loss(r, y)) / math.log(10.0)
    dps = 22 + int(extra) + 8
    with mpmath.workdps(dps):
        rr = mpmath.mpf(r)
        yy = mpmath.mpf(y)
        pref = mpmath.pi * rr / 2
        tail = pref + (dps + 8) * mpmath.log(10)
        tmax = mpmath.acosh(max(tail / yy, mpmath.mpf(2)))
        h = min(mpmath.mpf(1) / 8, 2 * mpmath.pi / (r + 2.5 * dps + 10))

        def f(t):
            return mpmath.exp(pref - yy * mpmath.cosh(t)) * mpmath.cos(rr * t)

        n = int(mpmath.ceil(tmax / h))
        total = f(mpmath.mpf(0)) / 2
        for k in range(1, n + 1):
            total += f(k * h)
        val = h * total
        for _ in range(30):
            h2 = h / 2
            n2 = int(mpmath.ceil(tmax / h2))
            odd = sum(f(k * h2) for k in range(1, n2 + 1, 2))
            val2 = val / 2 + h2 * odd
            if mpmath.almosteq(val2, val, rel_eps=rel_tol, abs_eps=mpmath.mpf(10) ** (-dps)):
                val = val2
                break
            val, h = val2, h2
        if not scaled:
            val = val * mpmath.e ** (-pref)
        return float(val)


# ---------------------------------------------------------------------------
# zeta, completed xi, scattering determinant
# ---------------------------------------------------------------------------

def log_gamma(s) -> complex:
    """Principal branch of log Gamma; raises PoleError at 0, -1, -2, ..."""
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0.0 and s.real == round(s.real):
        raise PoleError(f"log_gamma pole at s = {s.real}")
    return complex(_scipy_loggamma(s))


def _expm1_c(w: complex) -> complex:
    """exp(w) - 1 without cancellation for small |w| (complex expm1)."""
    if abs(w) >= 0.1:
        return cmath.exp(w) - 1.0
    total = 0j
    term = 1.0 + 0j
    for k in range(1, 16):
        term *= w / k
        total += term
    return total


_ETA_T_MAX = 300.0  # alternating-series acceleration stays in float range here


def _zeta_eta(s: complex, div: complex) -> complex:
    # Chebyshev-accelerated alternating series for eta(s) / (1 - 2^{1-s});
    # the error decays like (3 + sqrt 8)^{-n} e^{pi |t| / 2}.
    t = abs(s.imag)
    n = int((36.0 + math.pi * t / 2 + math.log(3.0 + 2.0 * t)) / 1.7627) + 6
    d = np.empty(n + 1)
    term = 1.0 / n
    acc = term
    d[0] = n * acc
    for i in range(1, n + 1):
        term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2 * i - 1) * (2 * i))
        acc += term
        d[i] = n * acc
    ks = np.arange(1, n + 1, dtype=float)
    powers = np.exp(-s * np.log(ks))
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    num = np.sum(signs * (d[:n] - d[n]) * powers)
    return -complex(num) / (d[n] * div)


_BERN_OVER_FACT = tuple(
    float(mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k)) for k in range(1, 46)
)


def zeta_euler_maclaurin(s, terms: int | None = None) -> complex:
    """Euler-Maclaurin evaluation of zeta(s); the slow cross-check route.

    Valid comfortably for Re s > -1 and |Im s| up to a few thousand.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleError("zeta pole at s = 1")
    N = terms or max(24, int(0.5 * abs(s.imag)) + 24)
    ns = np.arange(1, N, dtype=float)
    acc = complex(np.sum(np.exp(-s * np.log(ns))))
    logN = math.log(N)
    acc += cmath.exp((1.0 - s) * logN) / (s - 1.0)
    acc += cmath.exp(-s * logN) / 2.0
    rising = s
    prev = math.inf
    for k, bf in enumerate(_BERN_OVER_FACT, start=1):
        term = bf * rising * cmath.exp((-s - 2 * k + 1) * logN)
        acc += term
        mag = abs(term)
        if mag <= 1e-17 * abs(acc):
            break
        if mag > prev and k > 3:  # divergent tail: N was too small
            return zeta_euler_maclaurin(s, terms=2 * N)
        prev = mag
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return acc


def _log_sin(w: complex) -> complex:
    # log sin w up to multiples of 2 pi i (always exponentiated afterwards);
    # for Im w > 1 factor out the dominant exp(-iw) to avoid overflow
    if w.imag > 1.0:
        return -1j * w + cmath.log(1.0 - cmath.exp(2j * w)) + complex(-math.log(2.0), math.pi / 2)
    if w.imag < -1.0:
        return _log_sin(w.conjugate()).conjugate()
    return cmath.log(cmath.sin(w))


def _zeta_upper(s: complex) -> complex:
    # Re s >= 1/2
    if abs(s.imag) > _ETA_T_MAX:
        return zeta_euler_maclaurin(s)
    div = -_expm1_c((1.0 - s) * math.log(2.0))
    if abs(div) < 0.05:
        # near the zeros of 1 - 2^{1-s} on Re s = 1 the accelerated form is
        # 0/0; hand those strips to the Euler-Maclaurin route
        return zeta_euler_maclaurin(s)
    return _zeta_eta(s, div)


def _zeta_times_sm1(s: complex) -> complex:
    """(s - 1) zeta(s), entire, equal to 1 at s = 1."""
    d = s - 1.0
    if abs(d) < 1e-6:
        return 1.0 + _EULER_GAMMA * d - _STIELTJES_1 * d * d
    return d * zeta(s)


def zeta(s) -> complex:
    """Riemann zeta via accelerated alternating series plus reflection.

    Raises :class:`PoleError` exactly at s = 1.  Accurate to ~1e-12 relative
    away from the pole for |Im s| <= 1e3.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleError("zeta pole at s = 1")
    if s.real >= 0.5:
        return _zeta_upper(s)
    # reflection: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    w = 1.0 - s
    if abs(s) < 0.25:
        # sin(pi s/2) zeta(1-s) = -(sin(pi s/2)/s) (w-1) zeta(w); the sinc
        # factor keeps the removable 0 * pole at s = 0 exact
        u = math.pi / 2 * s
        if abs(s) < 1e-8:
            sinc = math.pi / 2 * (1.0 - u * u / 6.0)
        else:
            sinc = cmath.sin(u) / s
        bracket = -sinc * _zeta_times_sm1(w)
        return cmath.exp(s * math.log(2.0) + (s - 1.0) * math.log(math.pi)) * \
            cmath.exp(log_gamma(w)) * bracket
    sinval = cmath.sin(math.pi * s / 2)
    if sinval == 0:
        return 0j  # trivial zeros at negative even integers
    lg = s * math.log(2.0) + (s - 1.0) * math.log(math.pi) + _log_sin(math.pi * s / 2) \
        + log_gamma(w)
    return cmath.exp(lg) * _zeta_upper(w)


def completed_xi(s) -> complex:
    """The completed zeta  xi(s) = 1/2 s(s-1) pi^{-s/2} Gamma(s/2) zeta(s).

    Computed as pi^{-s/2} Gamma(s/2 + 1) (s-1) zeta(s), which absorbs the
    Gamma pole at 0 and the zeta pole at 1 exactly; xi(0) = xi(1) = 1/2.
    """
    s = complex(s)
    return cmath.exp(-s / 2 * math.log(math.pi) + log_gamma(s / 2 + 1.0)) * \
        _zeta_times_sm1(s)


def dirichlet_factor(N: int, s) -> complex:
    """The finite Euler-type factor N^{-s} prod_{p | N} (p^s + p)/(p^s + 1)."""
    s = complex(s)
    out = cmath.exp(-s * math.log(N)) if N > 1 else 1.0 + 0j
    for p in prime_factors(N):
        ps = cmath.exp(s * math.log(p))
        out *= (ps + p) / (ps + 1.0)
    return complex(out)


def scattering_det(profile: GroupProfile | int, s) -> complex:
    """Scattering determinant of the one-cusp group of level N:

        phi_N(s) = (s / (s-1)) * xi(2s-1)/xi(2s) * dirichlet_factor(N, s).

    Exactly -1 at s = 1/2; raises PoleError at the spectral pole s = 1.
    """
    N = profile.N if isinstance(profile, GroupProfile) else int(profile)
    prime_factors(N)  # validates the level
    s = complex(s)
    if s == 0.5:
        return complex(-1.0)
    if s == 1.0:
        raise PoleError("scattering determinant pole at s = 1")
    return (s / (s - 1.0)) * completed_xi(2 * s - 1.0) / completed_xi(2 * s) * \
        dirichlet_factor(N, s)
