"""Projective unitary representations of finite groups given by explicit matrices.

Inner products are linear in the first slot: <f, h> = sum_j f_j conj(h_j).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .amalgam import local_max, wiener_norm
from .errors import (DimMismatch, InconsistentDegree, NotHomomorphism,
                     NotProjective, OrderTooLarge)
from .groups import make_cyclic_product, make_heisenberg

UNITARY_TOL = 1e-10
COCYCLE_TOL = 1e-9
DEGREE_RTOL = 1e-9
# |trace|/d below 1 - STRUCTURAL_TOL means pi(xy) is not even roughly a multiple of pi(x)pi(y)
STRUCTURAL_TOL = 0.1
# eager cocycle validation in the builtin constructors up to this group order
EAGER_VALIDATE_ORDER = 1024


def inner(f, h):
    return complex(np.vdot(h, f))


class CocycleExtraction(NamedTuple):
    sigma: np.ndarray
    residual: float
    valid: bool


def _monomial_form(matrices):
    """(perm, phase) with M[x] v = phase[x] * v[perm[x]] when every matrix is monomial, else None."""
    mag = np.abs(matrices)
    nz = mag > 1e-12
    if not np.all(nz.sum(axis=2) == 1):
        return None
    perm = mag.argmax(axis=2)
    phase = np.take_along_axis(matrices, perm[..., None], axis=2)[..., 0]
    return perm, phase


def _cocycle_rows(group, matrices):
    """Yield (x, sigma[x, :], |trace|/d row, residual[x, :]) for every x."""
    n, d, _ = matrices.shape
    mono = _monomial_form(matrices)
    for x in range(n):
        xy = group.cayley[x]
        if mono is not None:
            perm, phase = mono
            # product pi(x) pi(y): perm_y[perm_x], phase_x * phase_y[perm_x]
            p_prod = perm[:, perm[x]]
            ph_prod = phase[x][None, :] * phase[:, perm[x]]
            p_xy = perm[xy]
            ph_xy = phase[xy]
            match = p_xy == p_prod
            tr = np.where(match, ph_xy * ph_prod.conj(), 0).sum(axis=1) / d
            mod = np.abs(tr)
            sigma = np.where(mod > 0, tr / np.where(mod > 0, mod, 1), 1)
            # Frobenius norm of pi(xy) - sigma pi(x)pi(y); mismatched positions contribute 2 per row
            diff = np.where(match, np.abs(ph_xy - sigma[:, None] * ph_prod) ** 2, 2.0)
            resid = np.sqrt(diff.sum(axis=1))
        else:
            prod = matrices[x] @ matrices
            target = matrices[xy]
            tr = np.einsum("yij,yij->y", target, prod.conj()) / d
            mod = np.abs(tr)
            sigma = np.where(mod > 0, tr / np.where(mod > 0, mod, 1), 1)
            resid = np.linalg.norm(target - sigma[:, None, None] * prod, axis=(1, 2))
        yield x, sigma, mod, resid


def extract_cocycle(group, matrices, tol=COCYCLE_TOL):
    """Read off sigma(x, y) from pi(xy) = sigma(x, y) pi(x) pi(y).

    sigma(x, y) is the phase of trace(pi(xy) (pi(x) pi(y))^*) / d, the
    residual is the largest Frobenius misfit over all pairs. Raises
    NotProjective if some pair is far from proportional.
    """
    matrices = np.asarray(matrices, dtype=complex)
    n = group.order
    sigma = np.empty((n, n), dtype=complex)
    residual = 0.0
    for x, s, mod, res in _cocycle_rows(group, matrices):
        if np.min(mod) < 1 - STRUCTURAL_TOL:
            y = int(np.argmin(mod))
            raise NotProjective(f"pi({x}*{y}) is not a scalar multiple of pi({x})pi({y})")
        sigma[x] = s
        residual = max(residual, float(res.max()))
    return CocycleExtraction(sigma, residual, residual <= tol)


@dataclass(frozen=True, eq=False)
class ProjectiveRep:
    group: object
    matrices: np.ndarray
    unitary_tol: float = UNITARY_TOL
    cocycle_tol: float = COCYCLE_TOL
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[0] != self.group.order or m.shape[1] != m.shape[2]:
            raise DimMismatch(f"expected ({self.group.order}, d, d) matrices, got {m.shape}")
        eye = np.eye(m.shape[1])
        err = np.linalg.norm(m @ m.conj().transpose(0, 2, 1) - eye, axis=(1, 2)).max()
        if err > self.unitary_tol:
            raise ValueError(f"matrices not unitary (error {err:.3e})")
        e = m[self.group.identity]
        c = e[0, 0]
        if abs(abs(c) - 1) > self.unitary_tol or np.linalg.norm(e - c * eye) > self.unitary_tol:
            raise ValueError("pi(identity) is not a unimodular multiple of I")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def dim(self):
        return self.matrices.shape[1]

    @cached_property
    def _extraction(self):
        return extract_cocycle(self.group, self.matrices, self.cocycle_tol)

    @property
    def cocycle(self):
        return self._extraction.sigma

    @property
    def cocycle_residual(self):
        return self._extraction.residual

    def validate(self):
        ext = self._extraction
        if not ext.valid:
            raise NotProjective(f"cocycle residual {ext.residual:.3e} exceeds {self.cocycle_tol}")
        return ext

    @cached_property
    def d_pi(self):
        return formal_degree(self)

    def act(self, x, v):
        return self.matrices[x] @ v


def _check_streaming(rep, honest=False):
    for x, s, mod, res in _cocycle_rows(rep.group, rep.matrices):
        if np.min(mod) < 1 - STRUCTURAL_TOL or res.max() > rep.cocycle_tol:
            raise NotProjective(f"projective relation fails at x={x}")
        if honest and np.abs(s - 1).max() > rep.cocycle_tol:
            raise NotHomomorphism(f"nontrivial cocycle at x={x}")


def gabor_rep(N):
    """Time-frequency shifts pi(k, l) = M_l T_k of Z_N x Z_N on C^N.

    (T_k f)(j) = f(j - k), (M_l f)(j) = exp(2 pi i l j / N) f(j); element
    (k, l) has index k + N l.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    if N > 64:
        raise OrderTooLarge("gabor_rep supports N <= 64")
    group = make_cyclic_product([N, N])
    j = np.arange(N)
    mats = np.zeros((N * N, N, N), dtype=complex)
    for l in range(N):
        chirp = np.exp(2j * np.pi * l * j / N)
        for k in range(N):
            mats[k + N * l, j, (j - k) % N] = chirp
    rep = ProjectiveRep(group, mats, label=f"gabor:{N}")
    if group.order <= EAGER_VALIDATE_ORDER:
        _check_streaming(rep)
    return rep


def heisenberg_schroedinger_rep(N):
    """Schroedinger representation of the Heisenberg group over Z_N on C^N.

    pi(a, b, c) f(j) = exp(2 pi i (c + b j) / N) f(j + a). The translation
    runs forward so that pi is an honest homomorphism for the group law
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
    """
    group = make_heisenberg(N)
    j = np.arange(N)
    mats = np.zeros((N ** 3, N, N), dtype=complex)
    for c in range(N):
        for b in range(N):
            ph = np.exp(2j * np.pi * (c + b * j) / N)
            for a in range(N):
                mats[group.encode((a, b, c)), j, (j + a) % N] = ph
    rep = ProjectiveRep(group, mats, label=f"heisenberg:{N}")
    _check_streaming(rep, honest=True)
    return rep


def trivial_rep(group):
    return ProjectiveRep(group, np.ones((group.order, 1, 1), dtype=complex), label="trivial")


def direct_sum(rep1, rep2):
    d1, d2 = rep1.dim, rep2.dim
    n = rep1.group.order
    m = np.zeros((n, d1 + d2, d1 + d2), dtype=complex)
    m[:, :d1, :d1] = rep1.matrices
    m[:, d1:, d1:] = rep2.matrices
    return ProjectiveRep(rep1.group, m, label=f"{rep1.label}+{rep2.label}")


def conjugate_rep(rep, U):
    """The equivalent representation U pi(x) U^* for a unitary U."""
    U = np.asarray(U, dtype=complex)
    return ProjectiveRep(rep.group, U @ rep.matrices @ U.conj().T, label=f"{rep.label}^U")


def random_unit_vector(dim, rng):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def check_irreducible(rep, trials=8, seed=0, tol=1e-9):
    """Commutant test: the group average of pi(x) A pi(x)^* must be scalar.

    Returns (True, None) or (False, A) with A a Hermitian witness.
    """
    rng = np.random.default_rng(seed)
    d = rep.dim
    M = rep.matrices
    for _ in range(trials):
        X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        A = (X + X.conj().T) / 2
        T = np.einsum("xij,jk,xlk->il", M, A, M.conj()) / rep.group.order
        off = np.linalg.norm(T - np.trace(T) / d * np.eye(d))
        if off > tol * np.linalg.norm(A):
            return False, A
    return True, None


def _degree_from(rep, g):
    Vg = rep.matrices @ g
    coeffs = Vg.conj() @ g
    return np.linalg.norm(g) ** 4 / float(np.sum(np.abs(coeffs) ** 2))


def formal_degree(rep, probes=8, seed=0, g=None, rtol=DEGREE_RTOL):
    """d_pi from sum_x |<g, pi(x) g>|^2 = ||g||^4 / d_pi, cross-checked over random probes."""
    rng = np.random.default_rng(seed)
    vals = [_degree_from(rep, random_unit_vector(rep.dim, rng)) for _ in range(probes)]
    if g is not None:
        vals.insert(0, _degree_from(rep, np.asarray(g, dtype=complex)))
    vals = np.array(vals)
    spread = np.max(np.abs(vals - vals[0])) / vals[0]
    if spread > rtol:
        raise InconsistentDegree(f"degree probes disagree (relative spread {spread:.3e})")
    return float(vals[0])


@dataclass(frozen=True, eq=False)
class CoefficientFunction:
    values: np.ndarray
    base_rep: ProjectiveRep

    def __abs__(self):
        return np.abs(self.values)


def matrix_coefficient(rep, f, g):
    """V_g f(x) = <f, pi(x) g> for every group element x."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != (rep.dim,) or g.shape != (rep.dim,):
        raise DimMismatch(f"vectors must have length {rep.dim}")
    return CoefficientFunction((rep.matrices @ g).conj() @ f, rep)


def orthogonality_residual(rep, f1, f2, g1, g2, d_pi=None):
    """|sum_x <f1, pi(x)g1><pi(x)g2, f2> - d_pi^-1 <f1, f2> conj(<g1, g2>)|."""
    d_pi = rep.d_pi if d_pi is None else d_pi
    a = matrix_coefficient(rep, f1, g1).values
    b = matrix_coefficient(rep, f2, g2).values.conj()
    return abs(np.sum(a * b) - inner(f1, f2) * np.conj(inner(g1, g2)) / d_pi)


@dataclass
class BSpaceReport:
    l2_lhs: float
    l2_rhs: float
    w_lhs: float
    w_rhs: float
    holds: bool


def b_space_diagnostics(rep, g, Q, rtol=1e-12):
    """Both inequalities behind B^1 being contained in B^2, with C = d_pi / ||g||^2.

    ||M^L V_g g||_2 <= C ||V_g g||_2 ||M^L V_g g||_1 and ||V_g g||_W <= C ||M^L V_g g||_1^2.
    """
    g = np.asarray(g, dtype=complex)
    V = matrix_coefficient(rep, g, g).values
    C = rep.d_pi / np.linalg.norm(g) ** 2
    ml = local_max(rep.group, V, Q, "left")
    l2_lhs = float(np.linalg.norm(ml))
    l2_rhs = float(C * np.linalg.norm(V) * ml.sum())
    w_lhs = wiener_norm(rep.group, V, Q)
    w_rhs = float(C * ml.sum() ** 2)
    holds = l2_lhs <= l2_rhs * (1 + rtol) + 1e-300 and w_lhs <= w_rhs * (1 + rtol) + 1e-300
    return BSpaceReport(l2_lhs, l2_rhs, w_lhs, w_rhs, bool(holds))
