"""Excess, removability certificates and positive-density removal.

The removal pipeline works on a rescaled copy of the system whose frame
bounds lie in (0, 2), so that S^-1 is a convergent Neumann series. All
quantities it certifies (pairings, the certificate matrix) are invariant
under that rescaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .amalgam import matrix_envelope, schur_norm_bound, wiener_norm
from .density import beurling_density, frame_measure
from .errors import (GammaNotRemovable, GammaNotSubset, NotAFrame,
                     NotOvercomplete, NotSubcritical, PipelineExhausted,
                     TruncationTooDeep)
from .frames import (RANK_TOL, analyze, frame_bounds,
                     frame_operator, gramian, inverse_frame_operator,
                     parsevalize, rescale_to_subcritical)
from .groups import canonical_windows, is_U_dense, relative_separation

REMOVABLE_TOL = 1e-9
SHRINK_STRATEGIES = ("drop-largest-pairing", "drop-largest-row-sum")


def excess(analysis):
    """#lam - dim: the number of vectors beyond a basis."""
    if not analysis.is_frame:
        raise NotAFrame("excess is defined for frames")
    return len(analysis.lam) - analysis.dim


def lambda_alpha(analysis, alpha):
    """Elements whose pairing <g_l, h_l> is strictly below alpha."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return tuple(l for l, p in zip(analysis.lam, analysis.pairings) if p < alpha)


@dataclass(frozen=True)
class ExcessCriterion:
    alpha_star: float | None
    subset: tuple
    epsilon: float
    count_small: int
    guaranteed: float


def infinite_excess_criterion(analysis):
    """Largest pairing bounded away from 1, and the elements at or below it.

    Also runs the counting argument on the global mean pairing m: with
    eps = (1 - m)/3 at least eps/(1-eps) * #lam pairings are <= 1 - eps.
    """
    if not analysis.is_frame:
        raise NotAFrame("criterion is defined for frames")
    p = np.asarray(analysis.pairings)
    below = p[p < 1 - REMOVABLE_TOL]
    if below.size == 0:
        alpha_star, subset = None, ()
    else:
        alpha_star = float(below.max())
        subset = tuple(l for l, v in zip(analysis.lam, p) if v <= alpha_star)
    eps = (1 - float(p.mean())) / 3
    count = int(np.sum(p <= 1 - eps)) if eps > 0 else 0
    guaranteed = eps / (1 - eps) * len(p) if eps > 0 else 0.0
    return ExcessCriterion(alpha_star, subset, eps, count, guaranteed)


def contraction_ratio(A, B):
    return max(1 - A, B - 1)


def truncation_order(A, B, epsilon):
    """Smallest N >= 0 with r^(N+1)/(1-r) * B <= epsilon, r = max(1-A, B-1)."""
    if not (0 < A <= B < 2):
        raise NotSubcritical(f"bounds ({A}, {B}) not inside (0, 2)")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    r = contraction_ratio(A, B)
    if r <= 1e-15:
        return 0
    N = max(0, math.ceil(math.log(epsilon * (1 - r) / B) / math.log(r) - 1))
    # guard the float edge of the ceiling
    while N > 0 and r ** N / (1 - r) * B <= epsilon:
        N -= 1
    while r ** (N + 1) / (1 - r) * B > epsilon:
        N += 1
    return N


@dataclass(frozen=True, eq=False)
class TruncationSplit:
    order: int
    M_N: np.ndarray
    D_N: np.ndarray
    R_N: np.ndarray
    M_inf: np.ndarray
    tail_bound: float
    commutation_error: float


def neumann_truncation(sys, N):
    """M_N = sum_{j<=N} (I - CC^*)^j CC^* with its diagonal/off-diagonal split.

    ``sys`` must already have frame bounds inside (0, 2).
    """
    A, B, ok = frame_bounds(sys)
    if not ok:
        raise NotAFrame("system is not a frame")
    if not B < 2:
        raise NotSubcritical(f"upper bound {B} >= 2; rescale first")
    G = gramian(sys)
    n = G.shape[0]
    step = np.eye(n) - G
    term = G.copy()
    M = G.copy()
    for _ in range(N):
        term = step @ term
        M = M + term
    C = np.asarray(sys.vectors).conj()
    S = frame_operator(sys)
    comm = float(np.linalg.norm(C @ (np.eye(S.shape[0]) - S) - step @ C, 2))
    r = contraction_ratio(A, B)
    tail = 0.0 if r <= 1e-15 else r ** (N + 1) / (1 - r) * B
    M_inf = C @ inverse_frame_operator(sys) @ C.conj().T
    D = np.diag(np.diag(M))
    return TruncationSplit(N, M, D, M - D, M_inf, float(tail), comm)


def _separated(group, chosen, cand, U1):
    for gam in chosen:
        if group.mul(group.inv(gam), cand) in U1 or group.mul(group.inv(cand), gam) in U1:
            return False
    return True


def select_packing(group, lam_alpha, U1, disjoint=False):
    """Greedy maximal packing of lam_alpha in ascending element order.

    Default: U1-separated, i.e. gamma'^-1 gamma is outside U1 for distinct
    chosen elements, which is exactly what the certificate bound needs.
    With ``disjoint=True`` the translates gamma U1 are kept pairwise disjoint.
    """
    U1set = set(U1)
    chosen = []
    if disjoint:
        occupied = set()
        for lam in sorted(lam_alpha):
            cells = {group.mul(lam, u) for u in U1set}
            if occupied.isdisjoint(cells):
                chosen.append(lam)
                occupied |= cells
    else:
        for lam in sorted(lam_alpha):
            if _separated(group, chosen, lam, U1set):
                chosen.append(lam)
    return tuple(chosen)


@dataclass(frozen=True)
class CertificateCheck:
    norm: float
    is_removable: bool
    reduced_bounds: tuple[float, float]
    agrees: bool


def _positions(lam, gamma):
    index = {l: i for i, l in enumerate(lam)}
    try:
        return [index[x] for x in gamma]
    except KeyError as exc:
        raise GammaNotSubset(f"element {exc.args[0]} is not in the index set") from None


def removal_certificate(sys, gamma):
    """||C_Gamma S^-1 C_Gamma^*|| and an independent eigensolve of S on lam minus Gamma."""
    A, B, ok = frame_bounds(sys)
    if not ok:
        raise NotAFrame("system is not a frame")
    pos = _positions(sys.lam, gamma)
    V = np.asarray(sys.vectors)
    if pos:
        Cg = V[pos].conj()
        K = Cg @ inverse_frame_operator(sys) @ Cg.conj().T
        norm = float(np.linalg.eigvalsh((K + K.conj().T) / 2)[-1])
    else:
        norm = 0.0
    keep = np.setdiff1d(np.arange(len(sys.lam)), pos)
    if keep.size:
        Vr = V[keep]
        w = np.linalg.eigvalsh(Vr.T @ Vr.conj())
        red = (max(float(w[0]), 0.0), float(w[-1]))
    else:
        red = (0.0, 0.0)
    removable = norm < 1 - REMOVABLE_TOL
    reduced_frame = red[0] > RANK_TOL * B
    return CertificateCheck(norm, bool(removable), red, bool(removable == reduced_frame))


@dataclass(frozen=True)
class RemovalConfig:
    alpha: float | None = None
    epsilon: float | None = None
    max_truncation_order: int = 500
    shrink_strategy: str = "drop-largest-pairing"
    disjoint_packing: bool = False

    def resolve(self, M_plus):
        alpha = (M_plus + 1) / 2 if self.alpha is None else float(self.alpha)
        if not M_plus < alpha < 1:
            raise ValueError(f"alpha={alpha} must satisfy M+ = {M_plus:.6g} < alpha < 1")
        eps = (1 - alpha) / 4 if self.epsilon is None else float(self.epsilon)
        if not 0 < eps < (1 - alpha) / 3:
            raise ValueError(f"epsilon={eps} must lie in (0, (1 - alpha)/3)")
        if self.shrink_strategy not in SHRINK_STRATEGIES:
            raise ValueError(f"unknown shrink strategy {self.shrink_strategy!r}")
        return alpha, eps


@dataclass(frozen=True, eq=False)
class RemovalCertificate:
    gamma: tuple
    certificate_norm: float
    is_removable: bool
    reduced_bounds: tuple[float, float]
    gamma_density: float
    trace: dict
    matrices: dict = field(default_factory=dict, repr=False)


def _mask_outside(theta, U):
    out = theta.copy()
    out[list(U)] = 0.0
    return out


def remove_positive_density(sys, windows=None, config=None):
    """Find Gamma of positive density whose removal leaves a frame, with certificate.

    Stages: rescale into (0, 2); pairings and M+; alpha, eps; Lambda_alpha;
    Neumann truncation M_N; envelope Theta of M_N and the smallest canonical
    U1 with Rel/#Q ||Theta 1_{U1^c}||_W <= eps; smallest U2 for which
    Lambda_alpha is U2-dense; greedy packing Gamma; certificate, shrinking
    Gamma only if the certificate fails.
    """
    config = RemovalConfig() if config is None else config
    group = sys.group
    windows = canonical_windows(group) if windows is None else tuple(windows)
    family = canonical_windows(group)

    scaled, t = rescale_to_subcritical(sys)
    an = analyze(scaled)
    dens = beurling_density(group, sys.lam, windows)
    meas = frame_measure(an, group, windows)
    M_plus, D_minus, d_pi = meas.M_plus, dens.D_minus, sys.d_pi
    if M_plus >= 1 - REMOVABLE_TOL or not D_minus > d_pi:
        raise NotOvercomplete(f"M+ = {M_plus:.6g}, D- = {D_minus:.6g}, d_pi = {d_pi:.6g}")
    alpha, eps = config.resolve(M_plus)

    lam_a = lambda_alpha(an, alpha)
    if not lam_a:
        raise PipelineExhausted("no pairing below alpha")

    N = truncation_order(an.A, an.B, eps)
    if N > config.max_truncation_order:
        raise TruncationTooDeep(f"truncation order {N} exceeds {config.max_truncation_order}")
    split = neumann_truncation(scaled, N)
    theta = matrix_envelope(group, split.M_N, sys.lam)

    U1 = None
    for W in family:
        tail = schur_norm_bound(group, _mask_outside(theta, W), sys.lam, sys.Q)
        if tail <= eps:
            U1, offdiag_bound = W, tail
            break
    U2 = next(W for W in family if is_U_dense(group, lam_a, W))

    gamma = select_packing(group, lam_a, U1, disjoint=config.disjoint_packing)

    pos = _positions(sys.lam, gamma)
    P = np.ix_(pos, pos)
    diag_term = float(np.max(an.pairings[pos]))
    diag_trunc = float(np.max(np.abs(np.diag(split.M_inf)[pos] - np.diag(split.M_N)[pos])))
    trunc_term = float(np.linalg.norm((split.M_inf - split.M_N)[P], 2))
    offdiag_actual = float(np.linalg.norm(split.R_N[P], 2))

    gamma, cert, shrunk = shrink_gamma(sys, gamma, config.shrink_strategy, an, split.M_inf)
    if not cert.agrees:
        raise PipelineExhausted("certificate and reduced-frame eigensolve disagree")

    gdens = beurling_density(group, gamma, windows)
    trace = {
        "rescale_factor": t,
        "scaled_bounds": [an.A, an.B],
        "d_pi": d_pi,
        "D_minus": D_minus,
        "M_plus": M_plus,
        "alpha": alpha,
        "epsilon": eps,
        "lambda_alpha": list(lam_a),
        "truncation_order": N,
        "tail_bound": split.tail_bound,
        "commutation_error": split.commutation_error,
        "rel_lambda": relative_separation(group, sys.lam, sys.Q),
        "Q": list(sys.Q.elements),
        "U1": list(U1.elements),
        "U2": list(U2.elements),
        "envelope_wiener_norm": wiener_norm(group, theta, sys.Q),
        "envelope_tail_norm": wiener_norm(group, _mask_outside(theta, U1), sys.Q),
        "budget_terms": {
            "offdiag_schur_bound": offdiag_bound,
            "diag_max_pairing": diag_term,
            "diag_truncation": diag_trunc,
            "truncation": trunc_term,
        },
        "budget_sum": offdiag_bound + diag_term + diag_trunc + trunc_term,
        "budget_cap": alpha + 3 * eps,
        "offdiag_actual_norm": offdiag_actual,
        "packing_size": len(gamma) + len(shrunk),
        "shrunk": shrunk,
    }
    mats = {"M_N": split.M_N, "M_inf": split.M_inf, "theta": theta}
    return RemovalCertificate(tuple(gamma), cert.norm, cert.is_removable,
                              cert.reduced_bounds, gdens.D_minus, trace, mats)


def shrink_gamma(sys, gamma, strategy="drop-largest-pairing", analysis=None, M_inf=None):
    """Drop elements from gamma until the certificate passes.

    Returns (gamma, certificate, dropped). Raises PipelineExhausted if only
    one element is left and it still fails.
    """
    if strategy not in SHRINK_STRATEGIES:
        raise ValueError(f"unknown shrink strategy {strategy!r}")
    an = analyze(sys) if analysis is None else analysis
    index = {l: i for i, l in enumerate(sys.lam)}
    if strategy == "drop-largest-row-sum" and M_inf is None:
        C = np.asarray(sys.vectors).conj()
        M_inf = C @ inverse_frame_operator(sys) @ C.conj().T

    def key(x):
        if strategy == "drop-largest-pairing":
            return an.pairings[index[x]]
        return float(np.abs(M_inf[index[x], [index[y] for y in gamma]]).sum())

    gamma = tuple(gamma)
    dropped = []
    cert = removal_certificate(sys, gamma)
    while not cert.is_removable:
        if len(gamma) <= 1:
            raise PipelineExhausted("shrinking emptied Gamma")
        drop = max(gamma, key=key)
        gamma = tuple(x for x in gamma if x != drop)
        dropped.append(drop)
        cert = removal_certificate(sys, gamma)
    return gamma, cert, dropped


@dataclass(frozen=True)
class NecessaryConditionReport:
    d_pi: float
    D_plus: float
    reduced_lower_bound: float
    lambda_prime: tuple
    lhs: float
    rhs: float
    density_exceeds_degree: bool
    inequality_holds: bool
    gamma_in_lambda_prime: bool

    @property
    def passed(self):
        return self.density_exceeds_degree and self.inequality_holds and self.gamma_in_lambda_prime


def necessary_condition_check(sys, gamma, windows=None, tol=1e-9):
    """Necessary condition for removing Gamma of positive density.

    A is the optimal lower bound of the Parsevalized system on lam minus
    Gamma, Lambda' = {l : <g_l, h_l> <= 1 - A}; checks D+(lam) > d_pi,
    D-(Lambda') <= D+(lam)(1 - d_pi/D+(lam))/A and Gamma inside Lambda'.
    """
    group = sys.group
    windows = canonical_windows(group) if windows is None else tuple(windows)
    cert = removal_certificate(sys, gamma)
    gdens = beurling_density(group, gamma, windows) if gamma else None
    if not cert.is_removable or gdens is None or not gdens.D_minus > 0:
        raise GammaNotRemovable("Gamma must be removable with positive lower density")
    an = analyze(sys)
    par = parsevalize(sys)
    pos = set(_positions(sys.lam, gamma))
    keep = [i for i in range(len(sys.lam)) if i not in pos]
    Vr = par.vectors[keep]
    A = max(float(np.linalg.eigvalsh(Vr.T @ Vr.conj())[0]), 0.0)
    lam_p = tuple(l for l, p in zip(sys.lam, an.pairings) if p <= 1 - A + tol)
    Dp = beurling_density(group, sys.lam, windows).D_plus
    d = sys.d_pi
    lhs = beurling_density(group, lam_p, windows).D_minus if lam_p else 0.0
    rhs = Dp * (1 - d / Dp) / A
    return NecessaryConditionReport(
        d, Dp, A, lam_p, float(lhs), float(rhs),
        bool(Dp > d * (1 + tol)), bool(lhs <= rhs + tol * max(1.0, abs(rhs))),
        bool(set(gamma) <= set(lam_p)))
