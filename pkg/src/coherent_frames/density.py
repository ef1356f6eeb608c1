"""Beurling densities and frame measures over a nested window sequence.

Limits over a Folner sequence are replaced by the profile over the given
windows; the headline value is the one at the last window.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAFrame
from .frames import analyze
from .groups import canonical_windows, translate_counts


@dataclass(frozen=True)
class DensityReport:
    sizes: tuple[int, ...]
    inf: tuple[float, ...]
    sup: tuple[float, ...]

    @property
    def D_minus(self):
        return self.inf[-1]

    @property
    def D_plus(self):
        return self.sup[-1]


@dataclass(frozen=True)
class MeasureReport:
    sizes: tuple[int, ...]
    inf: tuple[float, ...]
    sup: tuple[float, ...]

    @property
    def M_minus(self):
        return self.inf[-1]

    @property
    def M_plus(self):
        return self.sup[-1]


def _windows(group, windows):
    windows = canonical_windows(group) if windows is None else tuple(windows)
    if not windows:
        raise ValueError("window sequence must be nonempty")
    return windows


def beurling_density(group, lam, windows=None):
    """inf_x and sup_x of #(lam intersect xK)/#K for each window K."""
    windows = _windows(group, windows)
    infs, sups = [], []
    for K in windows:
        c = translate_counts(group, lam, K) / len(K)
        infs.append(float(c.min()))
        sups.append(float(c.max()))
    return DensityReport(tuple(len(K) for K in windows), tuple(infs), tuple(sups))


def frame_measure(analysis, group, windows=None):
    """inf_x and sup_x of the mean pairing over lam intersect xK.

    Translates that miss lam entirely are skipped.
    """
    if not analysis.is_frame:
        raise NotAFrame("frame measure needs a frame")
    windows = _windows(group, windows)
    lam = np.asarray(analysis.lam, dtype=np.int64)
    on_group = np.zeros(group.order)
    on_group[lam] = analysis.pairings
    mask = np.zeros(group.order)
    mask[lam] = 1.0
    infs, sups = [], []
    for K in windows:
        # sort each translate so sums run in element order (exact agreement across x)
        idx = np.sort(group.cayley[:, K.array], axis=1)
        counts = mask[idx].sum(axis=1)
        sums = on_group[idx].sum(axis=1)
        hit = counts > 0
        avg = sums[hit] / counts[hit]
        infs.append(float(avg.min()))
        sups.append(float(avg.max()))
    return MeasureReport(tuple(len(K) for K in windows), tuple(infs), tuple(sups))


@dataclass(frozen=True)
class IdentityReport:
    r1: float
    r2: float
    d_pi: float
    density: DensityReport
    measure: MeasureReport

    @property
    def residuals(self):
        return self.r1, self.r2


def fundamental_identity_report(sys, windows=None):
    """r1 = |M- - d_pi/D+| and r2 = |M+ - d_pi/D-| at the final window."""
    windows = _windows(sys.group, windows)
    an = analyze(sys)
    dens = beurling_density(sys.group, sys.lam, windows)
    meas = frame_measure(an, sys.group, windows)
    d = sys.d_pi
    r1 = abs(meas.M_minus - d / dens.D_plus)
    r2 = abs(meas.M_plus - d / dens.D_minus) if dens.D_minus > 0 else float("inf")
    return IdentityReport(float(r1), float(r2), d, dens, meas)


@dataclass(frozen=True)
class DensityTheoremReport:
    d_pi: float
    D_minus: float
    D_plus: float
    A: float
    B: float
    sandwich: tuple[float, float, float, float]
    frame_density_ok: bool
    sandwich_ok: bool
    tight_ok: bool | None
    riesz_ok: bool | None

    @property
    def passed(self):
        return all(v is not False for v in
                   (self.frame_density_ok, self.sandwich_ok, self.tight_ok, self.riesz_ok))


def density_theorem_check(sys, windows=None, tol=1e-9):
    """Density conditions for frames and Riesz bases plus the frame-bound sandwich.

    Checks D- >= d_pi, A <= D-/d_pi ||g||^2 <= D+/d_pi ||g||^2 <= B, D- = D+
    when A = B, and D+ = d_pi when #lam = dim.
    """
    an = analyze(sys)
    dens = beurling_density(sys.group, sys.lam, windows)
    d = sys.d_pi
    Dm, Dp = dens.D_minus, dens.D_plus
    gg = float(np.linalg.norm(sys.g) ** 2)
    chain = (an.A, Dm * gg / d, Dp * gg / d, an.B)
    scale = max(abs(c) for c in chain)
    sandwich_ok = all(chain[i] <= chain[i + 1] + tol * scale for i in range(3))
    tight = abs(an.A - an.B) <= tol * an.B
    tight_ok = (Dm == Dp) if tight else None
    riesz_ok = (abs(Dp - d) <= tol * d) if len(sys.lam) == sys.dim else None
    return DensityTheoremReport(d, Dm, Dp, an.A, an.B, chain, bool(Dm >= d * (1 - tol)),
                                bool(sandwich_ok), tight_ok, riesz_ok)
