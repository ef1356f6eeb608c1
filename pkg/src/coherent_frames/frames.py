"""Coherent systems pi(Lambda) g and their frame operators.

A system is stored as its index set and, lazily, the stacked vectors
``vectors[i] = pi(lam[i]) g``. The coefficient matrix is ``C = vectors.conj()``
so that ``C @ f = (<f, g_lam>)_lam``; then ``S = C^* C`` and the Gramian
is ``C C^*`` with entry ``[l, l'] = <g_l', g_l>``.

Everything here also accepts a :class:`VectorFamily`, i.e. any object with
``vectors`` and ``lam`` attributes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import DimMismatch, NotAFrame
from .groups import identity_window, index_set

RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoherentSystem:
    rep: object
    g: np.ndarray
    lam: tuple[int, ...]
    Q: object

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        if g.shape != (self.rep.dim,):
            raise DimMismatch(f"g must have length {self.rep.dim}, got shape {g.shape}")
        if not np.linalg.norm(g) > 0:
            raise ValueError("g must be nonzero")
        lam = index_set(self.rep.group, self.lam)
        if not lam:
            raise ValueError("index set must be nonempty")
        if not (self.Q.symmetric and self.Q.contains_identity):
            raise ValueError("Q must be a symmetric unit neighborhood")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "lam", lam)

    @property
    def group(self):
        return self.rep.group

    @property
    def dim(self):
        return self.rep.dim

    @property
    def d_pi(self):
        return self.rep.d_pi

    @cached_property
    def vectors(self):
        v = self.rep.matrices[list(self.lam)] @ self.g
        v.setflags(write=False)
        return v

    def with_g(self, g):
        return replace(self, g=g)

    def with_lam(self, lam):
        return replace(self, lam=lam)


def make_system(rep, g, lam=None, Q=None):
    """Convenience constructor; lam defaults to the whole group, Q to {e}."""
    lam = range(rep.group.order) if lam is None else lam
    Q = identity_window(rep.group) if Q is None else Q
    return CoherentSystem(rep, g, tuple(lam), Q)


@dataclass(frozen=True, eq=False)
class VectorFamily:
    vectors: np.ndarray
    lam: tuple

    @property
    def dim(self):
        return self.vectors.shape[1]


def coefficient_matrix(sys):
    return np.asarray(sys.vectors).conj()


def frame_operator(sys):
    V = np.asarray(sys.vectors)
    S = V.T @ V.conj()
    return (S + S.conj().T) / 2


def gramian(sys):
    V = np.asarray(sys.vectors)
    return V.conj() @ V.T


def frame_bounds(sys):
    """(A, B, is_frame) from the extreme eigenvalues of S."""
    w = np.linalg.eigvalsh(frame_operator(sys))
    A, B = max(float(w[0]), 0.0), float(w[-1])
    return A, B, bool(A > RANK_TOL * B)


def _eig_functions(S):
    w, U = np.linalg.eigh(S)
    return w, U


def inverse_frame_operator(sys):
    w, U = _eig_functions(frame_operator(sys))
    return (U / w) @ U.conj().T


@dataclass(frozen=True, eq=False)
class FrameAnalysis:
    A: float
    B: float
    is_frame: bool
    lam: tuple
    eigenvalues: np.ndarray
    duals: np.ndarray
    pairings: np.ndarray
    gram: np.ndarray
    dual_bounds: tuple[float, float]
    vectors: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.vectors.shape[1]

    def pairing_of(self, element):
        return float(self.pairings[self.lam.index(element)])


def analyze(sys):
    """Frame bounds, canonical dual h_l = S^-1 g_l, pairings <g_l, h_l> and Gramian."""
    V = np.asarray(sys.vectors)
    S = frame_operator(sys)
    w, U = _eig_functions(S)
    A, B = max(float(w[0]), 0.0), float(w[-1])
    if not A > RANK_TOL * B:
        raise NotAFrame(f"lower frame bound {A:.3e} is not positive (B = {B:.3e})")
    S_inv = (U / w) @ U.conj().T
    duals = V @ S_inv.T                               # rows S^-1 g_l
    pairings = np.einsum("ij,ij->i", V.conj(), duals).real
    dual_w = np.linalg.eigvalsh(duals.T @ duals.conj())
    return FrameAnalysis(A, B, True, tuple(sys.lam), w, duals, pairings, gramian(sys),
                         (float(dual_w[0]), float(dual_w[-1])), V)


def analyze_vectors(vectors, lam=None):
    vectors = np.asarray(vectors, dtype=complex)
    lam = tuple(range(len(vectors))) if lam is None else tuple(lam)
    return analyze(VectorFamily(vectors, lam))


def reconstruct(analysis, f):
    """sum_l <f, h_l> g_l, which returns f for a frame."""
    coeffs = analysis.duals.conj() @ f
    return analysis.vectors.T @ coeffs


def parsevalize(sys):
    """The Parseval frame (S^-1/2 g_l)_l as a VectorFamily."""
    A, B, ok = frame_bounds(sys)
    if not ok:
        raise NotAFrame("system is not a frame")
    w, U = _eig_functions(frame_operator(sys))
    S_mhalf = (U / np.sqrt(w)) @ U.conj().T
    return VectorFamily(np.asarray(sys.vectors) @ S_mhalf.T, tuple(sys.lam))


def subcritical_scale(A, B):
    """t = sqrt(2/(A+B)); scaling g by t maps the bounds to 2A/(A+B) <= 2B/(A+B) < 2."""
    return float(np.sqrt(2.0 / (A + B)))


def rescale_to_subcritical(sys):
    A, B, ok = frame_bounds(sys)
    if not ok:
        raise NotAFrame("system is not a frame")
    t = subcritical_scale(A, B)
    return sys.with_g(t * sys.g), t
