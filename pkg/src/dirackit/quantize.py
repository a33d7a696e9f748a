"""Finite-dimensional Schrodinger-type representations.

Positions live on a periodic lattice of ``N`` (odd) sites per dimension,
``x_j = 2 pi j / N`` for ``j = -(N-1)/2 .. (N-1)/2``; momentum is the
spectral derivative ``P = -i hbar d/dx``, diagonal in the Fourier basis with
eigenvalues ``hbar k``.  Multi-dimensional operators are Kronecker products
with dimension 1 as the leading factor.

Sign convention: with ``[Q, P] = i hbar`` the correspondence checked is
``iota({f, g}) = -(i / hbar) [iota(f), iota(g)]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import UnsupportedError
from .symbolic import Expr, poisson_bracket

MAX_P_DEGREE = 2
KERNEL_TOL = 1e-8
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class Representation:
    dims: int
    sites: int
    hbar: float
    kind: str = "fourier_lattice"

    @property
    def size(self) -> int:
        return self.sites ** self.dims

    @cached_property
    def positions(self) -> np.ndarray:
        m = (self.sites - 1) // 2
        return 2 * np.pi * np.arange(-m, m + 1) / self.sites

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        m = (self.sites - 1) // 2
        return np.arange(-m, m + 1, dtype=float)

    @cached_property
    def _fourier(self) -> np.ndarray:
        return np.exp(1j * np.outer(self.positions, self.wavenumbers)) / np.sqrt(self.sites)

    @cached_property
    def q1d(self) -> np.ndarray:
        return np.diag(self.positions).astype(complex)

    @cached_property
    def p1d(self) -> np.ndarray:
        F = self._fourier
        P = self.hbar * (F * self.wavenumbers) @ F.conj().T
        return (P + P.conj().T) / 2

    def embed(self, axis: int, op1d: np.ndarray) -> np.ndarray:
        """Place a one-dimensional operator on ``axis`` (0-based)."""
        out = np.ones((1, 1), dtype=complex)
        eye = np.eye(self.sites, dtype=complex)
        for a in range(self.dims):
            out = np.kron(out, op1d if a == axis else eye)
        return out

    def Q(self, a: int) -> "Operator":
        return Operator(self.embed(a - 1, self.q1d), self)

    def P(self, a: int) -> "Operator":
        return Operator(self.embed(a - 1, self.p1d), self)

    def identity(self) -> "Operator":
        return Operator(np.eye(self.size, dtype=complex), self)


@dataclass(frozen=True, eq=False)
class Operator:
    entries: np.ndarray
    rep: Representation = field(repr=False)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0) <= tol)

    def norm(self) -> float:
        return operator_norm(self.entries)


def operator_norm(M: np.ndarray) -> float:
    """Spectral norm; Hermitian input takes the cheaper eigenvalue route."""
    if M.size == 0 or not M.any():
        return 0.0
    H = (M + M.conj().T) / 2
    if np.max(np.abs(M - H)) <= 1e-10 * np.max(np.abs(M)):
        return float(np.max(np.abs(np.linalg.eigvalsh(H))))
    return float(np.linalg.norm(M, 2))


def build_rep(d: int, N: int, hbar: float = 1.0) -> Representation:
    if not isinstance(N, (int, np.integer)) or N < 3 or N % 2 == 0:
        raise ValueError(f"N must be odd and >= 3 (got {N})")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if not hbar > 0:
        raise ValueError("hbar must be positive")
    return Representation(int(d), int(N), float(hbar))


def _symmetrized_1d(rep: Representation, alpha: int, beta: int) -> np.ndarray:
    """Average of all distinct orderings of alpha Q factors and beta P factors."""
    n = alpha + beta
    if n == 0:
        return np.eye(rep.sites, dtype=complex)
    Q, P = rep.q1d, rep.p1d
    total = np.zeros((rep.sites, rep.sites), dtype=complex)
    count = 0
    for slots in combinations(range(n), beta):
        slots = set(slots)
        M = None
        for k in range(n):
            F = P if k in slots else Q
            M = F if M is None else M @ F
        total += M
        count += 1
    return total / count


def quantize_poly(
    f: Expr,
    rep: Representation,
    ordering: str = "symmetric",
    max_p_degree: int = MAX_P_DEGREE,
) -> Operator:
    """Fully symmetrized (Weyl) quantization of a polynomial in (q, p)."""
    if ordering != "symmetric":
        raise ValueError(f"unknown ordering {ordering!r}")
    t = f.table
    if t.dim != rep.dims:
        raise ValueError(f"expression has d={t.dim}, representation d={rep.dims}")
    if f.involves("v") or f.involves("u"):
        raise UnsupportedError(f"{f} contains velocities or multipliers")
    pdeg = f.degree_in("p")
    if pdeg > max_p_degree:
        raise UnsupportedError(f"{f} has momentum degree {pdeg} > {max_p_degree}")
    d = t.dim
    out = np.zeros((rep.size, rep.size), dtype=complex)
    cache = {}
    for mono, c in f.items():
        term = np.ones((1, 1), dtype=complex)
        for a in range(d):
            key = (mono[a], mono[d + a])
            if key not in cache:
                cache[key] = _symmetrized_1d(rep, *key)
            term = np.kron(term, cache[key])
        out += float(c) * term
    return Operator(out, rep)


def commutator(A: Operator, B: Operator) -> np.ndarray:
    return A.entries @ B.entries - B.entries @ A.entries


def commutator_check(f: Expr, g: Expr, rep: Representation) -> float:
    """Operator norm of ``iota({f,g}) + (i/hbar)[iota f, iota g]``."""
    A = quantize_poly(f, rep)
    if f.is_constant or g.is_constant:
        # iota(c) = c I commutes with everything and {c, g} = 0
        quantize_poly(g, rep)
        return 0.0
    B = quantize_poly(g, rep)
    # The bracket of two p-degree-2 functions may reach p-degree 3.
    lhs = quantize_poly(poisson_bracket(f, g), rep, max_p_degree=2 * MAX_P_DEGREE - 1)
    rhs = -1j / rep.hbar * commutator(A, B)
    return operator_norm(lhs.entries - rhs)


def hbar_sweep(f: Expr, g: Expr, sites: int, hbars: Sequence[float] = (1.0, 0.1, 0.01)) -> tuple:
    """Residuals over ``hbars`` and the fitted log-log slope."""
    d = f.table.dim
    residuals = [commutator_check(f, g, build_rep(d, sites, h)) for h in hbars]
    if min(residuals) <= 0:
        return residuals, math.inf
    slope = float(np.polyfit(np.log(hbars), np.log(residuals), 1)[0])
    return residuals, slope


@dataclass(frozen=True, eq=False)
class PhysicalStates:
    basis: np.ndarray      # columns are orthonormal kernel vectors
    dimension: int
    singular_values: np.ndarray = field(repr=False)


def physical_states(constraint_ops: Sequence[Operator], tol: float = KERNEL_TOL,
                    rep: Optional[Representation] = None) -> PhysicalStates:
    """Joint numerical kernel; ``tol`` is relative to the largest singular value."""
    if not constraint_ops:
        if rep is None:
            raise ValueError("need a representation when no constraints are given")
        return PhysicalStates(np.eye(rep.size, dtype=complex), rep.size, np.zeros(0))
    stacked = np.vstack([op.entries for op in constraint_ops])
    _, s, Vh = np.linalg.svd(stacked, full_matrices=False)
    smax = s[0] if s.size else 0.0
    if smax == 0:
        keep = np.ones(Vh.shape[0], dtype=bool)
    else:
        padded = np.zeros(Vh.shape[0])
        padded[: s.size] = s
        keep = padded < tol * smax
    basis = Vh[keep].conj().T
    return PhysicalStates(basis, int(keep.sum()), s)


@dataclass(frozen=True)
class AnomalyEntry:
    n: int
    m: int
    norm_small: Optional[float]
    norm: Optional[float]
    anomalous: Optional[bool]
    note: str = ""


def _anomaly_norm(closure, n: int, m: int, rep: Representation) -> float:
    gens = closure.generators
    Gn = quantize_poly(gens[n - 1], rep)
    Gm = quantize_poly(gens[m - 1], rep)
    rhs = np.zeros((rep.size, rep.size), dtype=complex)
    for p, Gp in enumerate(gens, start=1):
        coeff = closure.coefficient(n, m, p)
        if coeff.is_zero:
            continue
        rhs += quantize_poly(coeff, rep).entries @ quantize_poly(Gp, rep).entries
    D = (commutator(Gn, Gm) - 1j * rep.hbar * rhs) / rep.hbar ** 2
    return operator_norm(D)


def smaller_sites(N: int) -> int:
    small = (N + 1) // 2
    if small % 2 == 0:
        small -= 1
    return max(3, small)


def anomaly_residual(analysis, rep: Representation, closure=None, tol: float = 1e-10) -> list:
    """Norms of ``D_nm`` at a smaller lattice and at ``rep``, with a verdict.

    A pair is flagged anomalous when its norm at the full size exceeds ``tol``
    and has not at least halved relative to the smaller size.
    """
    from .gauge import closure_coefficients

    if closure is None:
        closure = closure_coefficients(analysis)
    small_rep = build_rep(rep.dims, smaller_sites(rep.sites), rep.hbar)
    out = []
    for e in closure.entries:
        try:
            small = _anomaly_norm(closure, e.n, e.m, small_rep)
            full = _anomaly_norm(closure, e.n, e.m, rep)
        except UnsupportedError as exc:
            out.append(AnomalyEntry(e.n, e.m, None, None, None, f"unsupported: {exc}"))
            continue
        anomalous = full > tol and full >= 0.5 * small
        out.append(AnomalyEntry(e.n, e.m, small, full, anomalous))
    return out
