"""Local maximal functions, Wiener amalgam norms and the Schur-type norm bound.

Group functions are plain length-n numpy arrays indexed by group element.
Convolution is (F1 * F2)(x) = sum_y F1(y) F2(y^-1 x) with counting measure.
"""
from dataclasses import dataclass

import numpy as np

from .groups import relative_separation


def _arr(Q):
    return np.asarray(list(Q), dtype=np.int64)


def local_max(group, F, Q, side="left"):
    """M^L F(x) = max_{z in Q} |F(xz)|, or M^R F(x) = max_{z in Q} |F(zx)|."""
    F = np.abs(np.asarray(F))
    Q = _arr(Q)
    if side == "left":
        idx = group.cayley[:, Q]
    elif side == "right":
        idx = group.cayley[Q, :].T
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return F[idx].max(axis=1)


def wiener_norm(group, F, Q):
    """||F||_W = sum_x M^L M^R F(x)."""
    return float(local_max(group, local_max(group, F, Q, "right"), Q, "left").sum())


def restriction_check(group, F, lam, K, Q):
    """Both sides of the restriction inequality.

    lhs = sum over lam outside K of |F|^2,
    rhs = Rel(lam)/#Q * sum over K^c Q of |M^L F|^2.
    """
    F = np.asarray(F)
    Kc = group.complement(K)
    lam_out = np.setdiff1d(_arr(lam), _arr(K))
    lhs = float(np.sum(np.abs(F[lam_out]) ** 2))
    region = group.product_set(Kc, Q)
    ml = local_max(group, F, Q, "left")
    rhs = relative_separation(group, lam, Q) / len(Q) * float(np.sum(ml[region] ** 2))
    return lhs, rhs


def convolve(group, F1, F2):
    F1 = np.asarray(F1)
    F2 = np.asarray(F2)
    # shifted[y, x] = F2(y^-1 x)
    shifted = F2[group.cayley[group.inverse, :]]
    return F1 @ shifted


@dataclass
class ConvolutionReport:
    left_violation: float
    right_violation: float

    @property
    def max_violation(self):
        return max(self.left_violation, self.right_violation)


def convolution_domination_check(group, F1, F2, Q):
    """Pointwise slack of M^L(F1*F2) <= |F1| * M^L F2 and M^R(F1*F2) <= M^R F1 * |F2|."""
    conv = convolve(group, F1, F2)
    lhs_l = local_max(group, conv, Q, "left")
    rhs_l = convolve(group, np.abs(F1), local_max(group, F2, Q, "left"))
    lhs_r = local_max(group, conv, Q, "right")
    rhs_r = convolve(group, local_max(group, F1, Q, "right"), np.abs(F2))
    return ConvolutionReport(float(max(0.0, np.max(lhs_l - rhs_l))),
                             float(max(0.0, np.max(lhs_r - rhs_r))))


def matrix_envelope(group, M, lam):
    """Smallest Theta with |M[l, l']| <= min(Theta(l'^-1 l), Theta(l^-1 l')).

    Theta(x) is the largest |M[l, l']| over pairs hitting x either way, 0 if none.
    """
    lam = _arr(lam)
    absM = np.abs(np.asarray(M))
    theta = np.zeros(group.order)
    inv = group.inverse[lam]
    x1 = group.cayley[inv[None, :], lam[:, None]]   # (l')^-1 l at [l, l']
    x2 = group.cayley[inv[:, None], lam[None, :]]   # l^-1 l' at [l, l']
    np.maximum.at(theta, x1.ravel(), absM.ravel())
    np.maximum.at(theta, x2.ravel(), absM.ravel())
    return theta


def schur_norm_bound(group, theta, lam, Q):
    """Rel(lam)/#Q * ||Theta||_W, an operator-norm bound for any matrix theta dominates."""
    if len(lam) == 0:
        return 0.0
    return relative_separation(group, lam, Q) / len(Q) * wiener_norm(group, theta, Q)
