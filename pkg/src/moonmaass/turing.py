"""Consecutiveness checks: does a computed list miss or double-count levels?

The averaged fluctuation (1/T) int_0^T [counting - M_N] stays near zero for a
complete list, while one missing eigenvalue at r_0 shifts it by exactly
-(1 - r_0/T) for T > r_0 (and a spurious insertion by the same amount with
opposite sign).  The verdict compares the averaged fluctuation against a
declared heuristic band; injection/removal helpers produce the perturbed
lists for sharpening experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import RangeError
from .groups import GroupProfile
from .weyl import (EigenvalueList, averaged_envelope, averaged_s,  # noqa: F401
                   averaged_s_grid)

__all__ = ["TuringReport", "consecutiveness", "inject", "remove", "averaged_s"]

DEFAULT_BAND = 0.15
DEBOUNCE = 10


@dataclass(frozen=True)
class TuringReport:
    T_grid: tuple
    avg_s: tuple
    band: tuple
    verdict: str              # consistent | missing_suspected | surplus_suspected
    window: tuple | None      # (T_first, T_last) of the sustained violation
    drift_at_end: float


def consecutiveness(lst: EigenvalueList, profile: GroupProfile,
                    band_base: float = DEFAULT_BAND, points: int = 400,
                    debounce: int = DEBOUNCE) -> TuringReport:
    """Evaluate the averaged fluctuation on [T_max/4, T_max] and judge it.

    The verdict flags a window only when the band is violated for at least
    ``debounce`` consecutive grid points, which ignores the spikes the
    fluctuation shows near individual eigenvalues.
    """
    T_max = lst.r_hi
    if T_max / 4 <= 1.05:
        raise RangeError(
            f"scan range [{lst.r_lo}, {lst.r_hi}] too short for a consecutiveness grid")
    grid = np.linspace(T_max / 4, T_max, points)
    avg = averaged_s_grid(lst, profile, grid)
    band = band_base + np.array([averaged_envelope(profile, t) for t in grid])
    out = np.abs(avg) > band
    window = None
    run = 0
    for i, flag in enumerate(out):
        run = run + 1 if flag else 0
        if run >= debounce:
            start = i - run + 1
            end = i
            while end + 1 < len(out) and out[end + 1]:
                end += 1
            window = (float(grid[start]), float(grid[end]))
            verdict = ("missing_suspected"
                       if float(np.mean(avg[start:end + 1])) < 0
                       else "surplus_suspected")
            break
    else:
        verdict = "consistent"
    return TuringReport(T_grid=tuple(float(t) for t in grid),
                        avg_s=tuple(float(v) for v in avg),
                        band=tuple(float(b) for b in band),
                        verdict=verdict, window=window,
                        drift_at_end=float(avg[-1]))


def inject(lst: EigenvalueList, lambda_fake: float) -> EigenvalueList:
    """New list with a fake eigenvalue inserted; the original is untouched."""
    if lambda_fake <= 0.25:
        raise RangeError(f"lambda = {lambda_fake} has no real spectral parameter")
    r = math.sqrt(lambda_fake - 0.25)
    if not lst.r_lo < r < lst.r_hi:
        raise RangeError(
            f"fake r = {r:.6g} outside the scanned range ({lst.r_lo}, {lst.r_hi})")
    rs = sorted(lst.rs + (r,))
    return replace(lst, rs=tuple(rs))


def remove(lst: EigenvalueList, index: int) -> EigenvalueList:
    """New list with record ``index`` (1-based) dropped."""
    if not 1 <= index <= len(lst):
        raise RangeError(f"index {index} outside 1..{len(lst)}")
    rs = lst.rs[:index - 1] + lst.rs[index:]
    return replace(lst, rs=rs)
