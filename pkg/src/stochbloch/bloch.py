"""Drift model from projecting the adjoint Liouvillian onto the pseudospin basis.

The traceless projector P_tl = 1 - (1/2)|1>><<1| splits Liouville space into
the span of {|sigma_->>, |sigma_+>>, |sigma_z>>} and the trace direction. The
rectangular map F sends those superkets to the computational basis of C^3;
its Moore-Penrose inverse differs from F^T because |sigma_z>> has norm
sqrt(2), so the z row carries a factor 1/2.

Projecting L^dag gives the drift matrix A = F P_tl L^dag P_tl F^+ and the
inhomogeneity b = <<1| P_t L^dag P_tl F^+, which together generate the Bloch
vector equation du/dt = A u + b for u = (<sigma_->, <sigma_+>, <sigma_z>).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import NotHurwitz
from .liouville import (
    CorrelationSeries,
    CumulantMatrix,
    IDENTITY_2,
    Liouvillian,
    PSEUDOSPIN_OPS,
    _check_uniform_grid,
    superket,
)


@dataclass(frozen=True)
class ProjectionOperators:
    """Traceless/trace projectors and the pseudospin basis map with its pseudoinverse."""

    p_tl: np.ndarray   # 4x4 projector onto the traceless subspace
    p_t: np.ndarray    # 4x4 projector onto the trace direction
    f: np.ndarray      # 3x4 basis map
    f_pinv: np.ndarray  # 4x3 Moore-Penrose inverse of f


@dataclass(frozen=True)
class DriftModel:
    """Drift matrix a (3x3, 1/ps) and inhomogeneity b (3,), basis order (-, +, z)."""

    a: np.ndarray
    b: np.ndarray


def build_projectors() -> ProjectionOperators:
    """Construct P_tl, P_t, F and F^+ for the two-level Liouville space.

    F has orthogonal rows with squared norms (1, 1, 2), so the Moore-Penrose
    inverse is the row-rescaled transpose F^+ = F^T diag(1, 1, 1/2).
    """
    one = superket(IDENTITY_2)
    p_tl = np.eye(4, dtype=complex) - 0.5 * np.outer(one, one.conj())
    p_t = np.eye(4, dtype=complex) - p_tl
    f = np.array([superket(op).conj() for op in PSEUDOSPIN_OPS])
    f_pinv = f.conj().T * np.array([1.0, 1.0, 0.5])
    return ProjectionOperators(p_tl=p_tl, p_t=p_t, f=f, f_pinv=f_pinv)


_PROJ = build_projectors()
_HURWITZ_TOL = -1e-12


def drift_matrix(liouv: Liouvillian) -> DriftModel:
    """Project L^dag to obtain the drift matrix and inhomogeneity.

    Raises :class:`NotHurwitz` when any eigenvalue of the drift has real part
    >= -1e-12 (1/ps); finite positive lifetimes guarantee a strictly stable
    drift, so this signals invalid input.
    """
    l_dag = liouv.matrix.conj().T
    one_bra = superket(IDENTITY_2).conj()
    a = _PROJ.f @ _PROJ.p_tl @ l_dag @ _PROJ.p_tl @ _PROJ.f_pinv
    b = one_bra @ _PROJ.p_t @ l_dag @ _PROJ.p_tl @ _PROJ.f_pinv
    eigenvalues = np.linalg.eigvals(a)
    worst = float(np.max(eigenvalues.real))
    if worst >= _HURWITZ_TOL:
        raise NotHurwitz(
            f"drift matrix has spectral abscissa {worst:.3e} >= {_HURWITZ_TOL:.0e}")
    return DriftModel(a=a, b=b)


def stationary_mean(drift: DriftModel) -> np.ndarray:
    """Fixed point -A^{-1} b of the Bloch vector equation."""
    return -np.linalg.solve(drift.a, drift.b)


def bloch_mean_evolution(drift: DriftModel, u0: np.ndarray,
                         t_grid: np.ndarray) -> np.ndarray:
    """Exact solution u(t) = e^{A t}(u0 + A^{-1} b) - A^{-1} b on a uniform grid.

    Returns an array of shape (len(t_grid), 3).
    """
    dt = _check_uniform_grid(t_grid)
    fixed = stationary_mean(drift)
    step = expm(drift.a * dt)
    dev = np.asarray(u0, dtype=complex) - fixed
    out = np.empty((len(t_grid), 3), dtype=complex)
    for m in range(len(t_grid)):
        out[m] = fixed + dev
        dev = step @ dev
    return out


def greens_correlation(drift: DriftModel, m: CumulantMatrix,
                       tau_grid: np.ndarray) -> CorrelationSeries:
    """Green's-propagator correlations C(tau) = e^{A tau} M on a uniform grid.

    Mathematically equivalent to the quantum regression theorem route; the
    one-step propagator e^{A dtau} is computed once and applied iteratively.
    """
    dt = _check_uniform_grid(tau_grid)
    step = expm(drift.a * dt)
    n = len(tau_grid)
    values = np.empty((n, 3, 3), dtype=complex)
    g = m.m.copy()
    for k in range(n):
        values[k] = g
        g = step @ g
    return CorrelationSeries(tau=np.asarray(tau_grid, dtype=float),
                             values=values, method="grn")
