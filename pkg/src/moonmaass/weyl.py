"""The explicit average eigenvalue-counting main term M_N(T) and its uses.

For the one-cusp groups handled here the smoothed counting function is

    M_N(T) = vol/(4pi) T^2 - 2 T log T / pi + T (2 + log(pi/2N)) / pi
             + [elliptic, volume and spectral constants]
             + 1/(2pi) sum_j alpha_N(j, T)
             - 1/pi   sum_j arctan(q_j^{+-1} tan(alpha_N(j, T)/2))
             + G_N(T),

with alpha_N(j, T) = T log p_j mod pi (a sawtooth), q_j = (sqrt p_j - 1)
/(sqrt p_j + 1), the exponent +-1 flipping with the parity of
floor(T log p_j / pi), and G_N only known through an explicit 1/T envelope.
The sawtooth and the arctan term jump by -1/2 and +1/2 at the same cell
boundaries, so M_N is continuous.

``averaged_s`` integrates the fluctuation N(T) - M_N(T) exactly in the
counting part (telescoping sum) and term-by-term in M_N: polynomials in
closed form, the sawtooth by its per-cell antiderivative, and the arctan
term by fixed-order Gauss-Legendre quadrature over exact period cells.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError, RangeError
from .groups import GroupProfile, prime_factors

__all__ = [
    "WeylTerms",
    "EigenvalueList",
    "alpha",
    "main_term",
    "g_envelope",
    "counting",
    "s_num",
    "averaged_s",
    "averaged_s_grid",
    "averaged_envelope",
    "save_list",
    "load_list",
]

CODE_VERSION = "0.1.0"
MERGE_TOL = 1e-7      # two r values closer than this cannot be told apart
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _fmt(v: float) -> str:
    return f"{v:.15g}"


def _canon(v: float) -> float:
    """Project onto the 15-significant-digit grid used by the file format."""
    return float(_fmt(float(v)))


# ---------------------------------------------------------------------------
# the main term
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylTerms:
    """Additive breakdown of M_N(T); ``total`` omits G_N, ``g_bound`` bounds it."""

    T: float
    quadratic: float
    tlogt: float
    linear: float
    elliptic_const: float
    volume_const: float
    spectral_const: float
    sawtooth: float
    arctan_term: float
    g_bound: float
    total: float


def alpha(N: int, j: int, T: float) -> float:
    """The sawtooth alpha_N(j, T) = T log p_j - floor(T log p_j / pi) pi."""
    primes = prime_factors(N)
    if not 1 <= j <= len(primes):
        raise DomainError(f"level {N} has {len(primes)} prime factors, index {j} invalid")
    if T <= 0:
        raise DomainError(f"alpha needs T > 0, got {T}")
    x = T * math.log(primes[j - 1])
    return x - math.floor(x / math.pi) * math.pi


def elliptic_constant(orders) -> float:
    """sum_i 1/(4 m_i) sum_{j=1}^{m_i - 1} 1/sin^2(pi j / m_i)."""
    total = 0.0
    for m in orders:
        total += sum(1.0 / math.sin(math.pi * j / m) ** 2 for j in range(1, m)) / (4 * m)
    return total


def _constants(profile: GroupProfile) -> tuple[float, float, float]:
    ell = elliptic_constant(profile.elliptic_orders)
    volc = -profile.volume / (48 * math.pi)
    spec = -0.75 - profile.n_small / 2 - profile.m_quarter
    return ell, volc, spec


def g_envelope(profile: GroupProfile, T: float) -> float:
    """The explicit envelope bounding |G_N(T)| for T > 1 (proportional to 1/T)."""
    vol = profile.volume
    total = vol * (2 * math.pi + 1) / (2 * math.pi ** 2 * math.exp(2 * math.pi))
    for m in profile.elliptic_orders:
        total += m / (2 * math.e * math.pi) * sum(
            1.0 / math.sin(math.pi * j / m) for j in range(1, m))
    total += 5051.0 / 900.0
    return total / (2 * math.pi * T)


def main_term(profile: GroupProfile, T: float) -> WeylTerms:
    """M_N(T) with every term reported separately; valid for T > 1.

    ``total`` sums all terms with G_N treated as zero; the theorem guarantees
    the true average counting stays within ``g_bound`` of it.
    """
    T = float(T)
    if T <= 1.0:
        raise DomainError(f"main term envelope requires T > 1, got {T}")
    vol = profile.volume
    quadratic = vol * T * T / (4 * math.pi)
    tlogt = -2 * T * math.log(T) / math.pi
    linear = T * (2 + math.log(math.pi / (2 * profile.N))) / math.pi
    ell, volc, spec = _constants(profile)
    saw = 0.0
    atn = 0.0
    for p in profile.primes:
        x = T * math.log(p)
        k = math.floor(x / math.pi)
        a = x - k * math.pi
        saw += a / (2 * math.pi)
        q = (math.sqrt(p) - 1) / (math.sqrt(p) + 1)
        q_eff = q if k % 2 == 0 else 1.0 / q
        atn -= math.atan(q_eff * math.tan(a / 2)) / math.pi
    total = quadratic + tlogt + linear + ell + volc + spec + saw + atn
    return WeylTerms(T=T, quadratic=quadratic, tlogt=tlogt, linear=linear,
                     elliptic_const=ell, volume_const=volc, spectral_const=spec,
                     sawtooth=saw, arctan_term=atn,
                     g_bound=g_envelope(profile, T), total=total)


# ---------------------------------------------------------------------------
# eigenvalue lists
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenvalueList:
    """Ordered list of spectral parameters r_n with scan metadata.

    Values are canonicalized to 15 significant digits at construction so a
    save/load round trip through the CSV format is exact; lambda_n is always
    recomputed as r_n^2 + 1/4 rather than stored.
    """

    N: int
    rs: tuple
    eps: float
    r_lo: float
    r_hi: float
    config_hash: str = ""
    created: str = ""

    def __post_init__(self):
        rs = tuple(_canon(r) for r in self.rs)
        object.__setattr__(self, "rs", rs)
        if any(r <= 0 for r in rs):
            raise DomainError("spectral parameters must be positive")
        for a, b in zip(rs, rs[1:]):
            if b - a <= MERGE_TOL:
                raise DomainError(
                    f"r values {a} and {b} collide below the merge tolerance {MERGE_TOL}")
        if not self.r_lo < self.r_hi:
            raise DomainError("empty scan range")
        if any(not self.r_lo <= r <= self.r_hi for r in rs):
            raise DomainError("eigenvalue outside the declared scan range")

    def __len__(self):
        return len(self.rs)

    @property
    def lambdas(self) -> tuple:
        return tuple(r * r + 0.25 for r in self.rs)

    @property
    def records(self) -> list:
        """(n, r_n, lambda_n) rows, 1-based."""
        return [(i + 1, r, r * r + 0.25) for i, r in enumerate(self.rs)]


def counting(lst: EigenvalueList, T: float) -> int:
    """#{n : 0 < r_n <= T}; right-continuous step function of T."""
    return int(np.searchsorted(np.asarray(lst.rs), T, side="right"))


def _check_range(lst: EigenvalueList, T: float) -> None:
    if T > lst.r_hi * (1 + 1e-12):
        raise RangeError(
            f"T = {T} beyond the scanned range [{lst.r_lo}, {lst.r_hi}]; counts would be incomplete")


def s_num(lst: EigenvalueList, profile: GroupProfile, T: float) -> float:
    """Pointwise fluctuation: counting(T) minus the main term."""
    _check_range(lst, T)
    return counting(lst, T) - main_term(profile, T).total


# -- exact / quadrature integrals of the periodic terms ----------------------

def _gl_integral(f, a: float, b: float) -> float:
    if b <= a:
        return 0.0
    half = 0.5 * (b - a)
    return half * float(np.dot(_GL_WEIGHTS, f(a + half * (_GL_NODES + 1.0))))


def _arctan_cell_integral(q_eff: float, b: float) -> float:
    """int_0^b arctan(q_eff tan(u/2)) du for 0 <= b <= pi, split in two panels."""
    f = lambda u: np.arctan(q_eff * np.tan(u / 2))
    mid = min(b, math.pi / 2)
    return _gl_integral(f, 0.0, mid) + _gl_integral(f, mid, b)


@lru_cache(maxsize=None)
def _full_cell_integrals(p: int) -> tuple:
    """(even-cell, odd-cell) integrals of the arctan factor over one period."""
    q = (math.sqrt(p) - 1) / (math.sqrt(p) + 1)
    return (_arctan_cell_integral(q, math.pi), _arctan_cell_integral(1.0 / q, math.pi))


def sawtooth_integral(p: int, T: float) -> float:
    """int_0^T alpha(t) dt for the sawtooth of log p, in closed form (alpha^2/2 per cell)."""
    lp = math.log(p)
    x = T * lp
    k = math.floor(x / math.pi)
    a = x - k * math.pi
    return (k * math.pi ** 2 / 2 + a * a / 2) / lp


def sawtooth_integral_quadrature(p: int, T: float) -> float:
    """Same integral by per-cell Gauss-Legendre; the cross-check route."""
    lp = math.log(p)
    x = T * lp
    k = math.floor(x / math.pi)
    a = x - k * math.pi
    ident = lambda u: u
    full = _gl_integral(ident, 0.0, math.pi)
    return (k * full + _gl_integral(ident, 0.0, a)) / lp


def arctan_integral(p: int, T: float) -> float:
    """int_0^T arctan(q^{(-1)^{floor(t log p/pi)}} tan(alpha(t)/2)) dt."""
    lp = math.log(p)
    x = T * lp
    k = math.floor(x / math.pi)
    a = x - k * math.pi
    even_cells = (k + 1) // 2
    odd_cells = k // 2
    i_even, i_odd = _full_cell_integrals(p)
    q = (math.sqrt(p) - 1) / (math.sqrt(p) + 1)
    q_eff = q if k % 2 == 0 else 1.0 / q
    partial = _arctan_cell_integral(q_eff, a)
    return (even_cells * i_even + odd_cells * i_odd + partial) / lp


def main_term_integral(profile: GroupProfile, T: float) -> float:
    """int_0^T M_N(t) dt with polynomial terms in closed form."""
    vol = profile.volume
    total = vol * T ** 3 / (12 * math.pi)
    total += -(T * T / math.pi) * (math.log(T) - 0.5)
    total += (2 + math.log(math.pi / (2 * profile.N))) * T * T / (2 * math.pi)
    ell, volc, spec = _constants(profile)
    total += (ell + volc + spec) * T
    for p in profile.primes:
        total += sawtooth_integral(p, T) / (2 * math.pi)
        total -= arctan_integral(p, T) / math.pi
    return total


def averaged_s(lst: EigenvalueList, profile: GroupProfile, T: float) -> float:
    """(1/T) int_0^T [counting - M_N](t) dt, the averaged fluctuation.

    The counting integral telescopes to sum over r_n <= T of (T - r_n),
    which is exact; the main-term integral is closed-form/per-cell quadrature.
    """
    T = float(T)
    if T <= 1.0:
        raise DomainError(f"averaged fluctuation requires T > 1, got {T}")
    _check_range(lst, T)
    rs = np.asarray(lst.rs)
    below = rs[rs <= T]
    count_part = float(np.sum(T - below))
    return (count_part - main_term_integral(profile, T)) / T


def averaged_s_grid(lst: EigenvalueList, profile: GroupProfile, Ts) -> np.ndarray:
    """Vectorized ``averaged_s`` over an increasing grid of T values."""
    Ts = np.asarray(Ts, dtype=float)
    if Ts.size and (Ts.min() <= 1.0):
        raise DomainError("averaged fluctuation requires T > 1")
    if Ts.size:
        _check_range(lst, float(Ts.max()))
    rs = np.asarray(lst.rs)
    idx = np.searchsorted(rs, Ts, side="right")
    cum = np.concatenate(([0.0], np.cumsum(rs)))
    count_part = Ts * idx - cum[idx]
    main_part = np.array([main_term_integral(profile, t) for t in Ts])
    return (count_part - main_part) / Ts


def averaged_envelope(profile: GroupProfile, T: float) -> float:
    """(1/T) int_0^T of the G_N envelope, extending it by its T=1 value below 1."""
    c = g_envelope(profile, 1.0)
    return c * (1.0 + math.log(max(T, 1.0))) / T


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def save_list(lst: EigenvalueList, path, sidecar: dict | None = None) -> None:
    """Write the CSV (deterministic payload) and a JSON sidecar next to it."""
    path = Path(path)
    lines = [
        f"# group={lst.N}",
        f"# eps={_fmt(lst.eps)}",
        f"# r_lo={_fmt(lst.r_lo)}",
        f"# r_hi={_fmt(lst.r_hi)}",
        f"# count={len(lst)}",
        f"# config_hash={lst.config_hash}",
        "n,r,lambda",
    ]
    for n, r, lam in lst.records:
        lines.append(f"{n},{_fmt(r)},{_fmt(lam)}")
    path.write_text("\n".join(lines) + "\n")
    meta = {
        "group": lst.N,
        "eps": lst.eps,
        "r_lo": lst.r_lo,
        "r_hi": lst.r_hi,
        "count": len(lst),
        "config_hash": lst.config_hash,
        "created": lst.created,
        "code_version": CODE_VERSION,
    }
    if sidecar:
        meta.update(sidecar)
    path.with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n")


def load_list(path) -> EigenvalueList:
    """Parse a CSV written by :func:`save_list`; validates the lambda column."""
    path = Path(path)
    header: dict[str, str] = {}
    rs = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            header[key.strip()] = value.strip()
            continue
        if line.startswith("n,"):
            continue
        n_str, r_str, lam_str = line.split(",")
        r = float(r_str)
        lam = float(lam_str)
        if abs(lam - (r * r + 0.25)) > 1e-9 * max(1.0, lam):
            raise DomainError(f"row {n_str}: lambda {lam} inconsistent with r {r}")
        rs.append(r)
    lst = EigenvalueList(
        N=int(header["group"]),
        rs=tuple(rs),
        eps=float(header["eps"]),
        r_lo=float(header["r_lo"]),
        r_hi=float(header["r_hi"]),
        config_hash=header.get("config_hash", ""),
    )
    if "count" in header and int(header["count"]) != len(lst):
        raise DomainError(f"header count {header['count']} != {len(lst)} rows")
    return lst
