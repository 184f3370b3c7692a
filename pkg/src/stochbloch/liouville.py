"""Liouville-space description of a coherently driven two-level system.

Conventions used throughout the package:

- Energy eigenstates: ``|e> = (1, 0)``, ``|g> = (0, 1)``.
- Vectorization is row-major, ``vec(|a><b|) = |a> (x) |b>*``, so a density
  matrix maps to the supervector ``(rho_ee, rho_eg, rho_ge, rho_gg)`` and the
  Liouville basis order is fixed to (ee, eg, ge, gg).
- The Hilbert-Schmidt pairing is ``<<A|B>> = Tr(A^dag B) = vec(A)^dag vec(B)``.
- Pseudospin component order is (-, +, z) everywhere a 3-vector or 3x3 matrix
  appears.
- Internal units: energies in micro-eV, times in ps, rates in 1/ps. Angular
  frequencies are energy / hbar. ``SystemParams.from_rates`` supports the
  dimensionless convention (hbar = 1, time in units of T1) used for the FDTD
  coupling.

The dynamics model is the standard Lindblad master equation with jump
operators ``L1 = sqrt(Gamma1) sigma_-`` (relaxation, Gamma1 = 1/T1) and
``L2 = sqrt(Gamma2) (1 + sigma_z)/2`` (dephasing, Gamma2 = 2/T2), driven by
H = (hbar/2) (Delta sigma_z - Omega_R (sigma_+ + sigma_-)) in the rotating
frame of the laser.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import PropagationDiverged, SingularSystem

#: hbar in micro-eV * ps (CODATA).
HBAR_UEV_PS = 658.2119569

SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_EE = np.array([[1, 0], [0, 0]], dtype=complex)
SIGMA_GG = np.array([[0, 0], [0, 1]], dtype=complex)

#: Component labels for pseudospin-indexed vectors and matrices.
PSEUDOSPIN_LABELS = ("-", "+", "z")
PSEUDOSPIN_OPS = (SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z)

_COMPONENT_INDEX = {"-": 0, "+": 1, "z": 2, 0: 0, 1: 1, 2: 2}


def component_index(label) -> int:
    """Map a pseudospin label ('-', '+', 'z' or 0..2) to its array index."""
    try:
        return _COMPONENT_INDEX[label]
    except KeyError:
        raise ValueError(f"unknown pseudospin component {label!r}") from None


def superket(op: np.ndarray) -> np.ndarray:
    """Vectorize a 2x2 operator (row-major Kronecker convention)."""
    return np.asarray(op, dtype=complex).reshape(4)


def devectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`superket`."""
    return np.asarray(v, dtype=complex).reshape(2, 2)


def hilbert_schmidt(a: np.ndarray, b: np.ndarray) -> complex:
    """<<A|B>> = Tr(A^dag B) for 2x2 operators."""
    return complex(np.trace(a.conj().T @ b))


@dataclass(frozen=True)
class PseudospinBasis:
    """Superkets and matrix forms of the pseudospin operators."""

    sk_minus: np.ndarray = field(default_factory=lambda: superket(SIGMA_MINUS))
    sk_plus: np.ndarray = field(default_factory=lambda: superket(SIGMA_PLUS))
    sk_z: np.ndarray = field(default_factory=lambda: superket(SIGMA_Z))
    sk_gg: np.ndarray = field(default_factory=lambda: superket(SIGMA_GG))
    minus: np.ndarray = field(default_factory=lambda: SIGMA_MINUS.copy())
    plus: np.ndarray = field(default_factory=lambda: SIGMA_PLUS.copy())
    z: np.ndarray = field(default_factory=lambda: SIGMA_Z.copy())
    identity: np.ndarray = field(default_factory=lambda: IDENTITY_2.copy())

    @property
    def superkets(self):
        return (self.sk_minus, self.sk_plus, self.sk_z)


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the driven two-level system.

    ``rabi_energy`` and ``detuning_energy`` are hbar*Omega_R and hbar*Delta in
    micro-eV; ``t1`` and ``t2`` are the relaxation and dephasing times in ps.
    Rates follow Gamma1 = 1/T1 and Gamma2 = 2/T2.
    """

    rabi_energy: float
    detuning_energy: float
    t1: float
    t2: float
    hbar: float = HBAR_UEV_PS

    def __post_init__(self):
        if not (self.t1 > 0 and np.isfinite(self.t1)):
            raise ValueError("t1 must be positive and finite")
        if not (self.t2 > 0 and np.isfinite(self.t2)):
            raise ValueError("t2 must be positive and finite")
        if self.rabi_energy < 0:
            raise ValueError("rabi_energy must be >= 0")
        if self.hbar <= 0:
            raise ValueError("hbar must be > 0")

    @classmethod
    def from_rates(cls, omega_r: float, delta: float, t1: float, t2: float,
                   hbar: float = 1.0) -> "SystemParams":
        """Build from angular-frequency drive parameters (default hbar = 1)."""
        return cls(rabi_energy=omega_r * hbar, detuning_energy=delta * hbar,
                   t1=t1, t2=t2, hbar=hbar)

    @property
    def gamma1(self) -> float:
        return 1.0 / self.t1

    @property
    def gamma2(self) -> float:
        return 2.0 / self.t2

    @property
    def omega_r(self) -> float:
        return self.rabi_energy / self.hbar

    @property
    def delta(self) -> float:
        return self.detuning_energy / self.hbar


@dataclass(frozen=True)
class Liouvillian:
    """4x4 Lindblad generator (units 1/ps) in the (ee, eg, ge, gg) basis."""

    matrix: np.ndarray
    params: SystemParams


@dataclass(frozen=True)
class SteadyState:
    """Steady-state supervector and the pseudospin means extracted from it."""

    rho: np.ndarray            # 4-component supervector
    means: np.ndarray          # (<sigma_->, <sigma_+>, <sigma_z>)

    @property
    def rho_matrix(self) -> np.ndarray:
        return devectorize(self.rho)


@dataclass(frozen=True)
class CumulantMatrix:
    """Second-order steady-state cumulants, indexed (-, +, z) x (-, +, z)."""

    m: np.ndarray


@dataclass(frozen=True)
class CorrelationSeries:
    """Two-time correlation matrices C_ij(tau) on a tau grid starting at 0.

    ``values`` has shape (len(tau), 3, 3) in the (-, +, z) component order;
    ``method`` tags the route that produced it ("sto", "qrt" or "grn").
    """

    tau: np.ndarray
    values: np.ndarray
    method: str

    def component(self, i, j) -> np.ndarray:
        """Return the 1-D series for the (i, j) component pair."""
        return self.values[:, component_index(i), component_index(j)]


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian (hbar/2)(Delta sigma_z - Omega_R (sigma_+ + sigma_-)).

    Returned in energy units (micro-eV), i.e. using the energy parameters
    directly: H = (detuning_energy * sigma_z - rabi_energy * (sigma_+ + sigma_-)) / 2.
    """
    return 0.5 * (params.detuning_energy * SIGMA_Z
                  - params.rabi_energy * (SIGMA_PLUS + SIGMA_MINUS))


def build_liouvillian(params: SystemParams) -> Liouvillian:
    """Assemble the Lindblad generator from its Hamiltonian and jump operators.

    Uses the Kronecker-product representation of left/right multiplication,
    L = -i [[H, .]] / hbar + sum_k (L_k (x) L_k* - (1/2) [[L_k^dag L_k, .]]_+),
    which for this system reproduces the explicit 4x4 matrix entry by entry.
    The result is left-annihilated by the trace functional <<1|.
    """
    h_over_hbar = build_hamiltonian(params) / params.hbar
    jump_ops = (
        np.sqrt(params.gamma1) * SIGMA_MINUS,
        np.sqrt(params.gamma2) * (IDENTITY_2 + SIGMA_Z) / 2,
    )
    l = -1j * (np.kron(h_over_hbar, IDENTITY_2) - np.kron(IDENTITY_2, h_over_hbar.T))
    for lk in jump_ops:
        ldl = lk.conj().T @ lk
        l += np.kron(lk, lk.conj()) - 0.5 * (np.kron(ldl, IDENTITY_2)
                                             + np.kron(IDENTITY_2, ldl.T))
    return Liouvillian(matrix=l, params=params)


_TRACE_ROW = superket(IDENTITY_2).conj()


def pseudospin_means(rho: np.ndarray) -> np.ndarray:
    """Extract (<sigma_->, <sigma_+>, <sigma_z>) = <<sigma_i^dag|rho>>."""
    return np.array([superket(op.conj().T).conj() @ rho for op in PSEUDOSPIN_OPS])


def steady_state(liouv: Liouvillian, tol: float = 1e-9) -> SteadyState:
    """Solve L rho = 0 with the trace constraint Tr rho = 1.

    The first row of L is replaced by the trace functional (valid because
    <<1| L = 0 puts it in the left null space), giving a deterministic linear
    solve. Raises :class:`SingularSystem` when the constrained system is
    numerically rank deficient.
    """
    l = liouv.matrix
    a = l.copy()
    a[0] = _TRACE_ROW
    rhs = np.zeros(4, dtype=complex)
    rhs[0] = 1.0
    try:
        rho = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"steady-state system is singular: {exc}") from exc
    scale = max(np.linalg.norm(l, np.inf), 1.0)
    residual = np.linalg.norm(l @ rho, np.inf) / scale
    if residual > tol or not np.isfinite(rho).all():
        raise SingularSystem(
            f"steady-state residual {residual:.3e} exceeds tolerance {tol:.1e}")
    return SteadyState(rho=rho, means=pseudospin_means(rho))


def steady_state_eig(liouv: Liouvillian) -> SteadyState:
    """Eigendecomposition route to the steady state (cross-check path).

    Picks the right eigenvector of the eigenvalue closest to zero and
    normalizes it to unit trace.
    """
    evals, evecs = np.linalg.eig(liouv.matrix)
    rho = evecs[:, np.argmin(np.abs(evals))]
    trace = rho[0] + rho[3]
    if abs(trace) < 1e-12:
        raise SingularSystem("zero-eigenvalue mode is traceless")
    rho = rho / trace
    return SteadyState(rho=rho, means=pseudospin_means(rho))


def _check_uniform_grid(t_grid: np.ndarray) -> float:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) < 2:
        raise ValueError("time grid must be 1-D with at least two points")
    if abs(t[0]) > 1e-15:
        raise ValueError("time grid must start at 0")
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise ValueError("time grid must be strictly increasing")
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise ValueError("time grid must be uniform (one-step propagator policy)")
    return float(steps[0])


def propagate_density(liouv: Liouvillian, rho0: np.ndarray,
                      t_grid: np.ndarray) -> np.ndarray:
    """Propagate |rho(t)>> = e^{L t} |rho(0)>> on a uniform grid.

    Returns an array of shape (len(t_grid), 4). The one-step propagator
    e^{L dt} is computed once and applied iteratively. Raises
    :class:`PropagationDiverged` if the supervector norm grows by more than
    10x its initial value (non-Hurwitz input or a bad time step).
    """
    dt = _check_uniform_grid(t_grid)
    rho = np.asarray(rho0, dtype=complex).copy()
    step = expm(liouv.matrix * dt)
    out = np.empty((len(t_grid), 4), dtype=complex)
    limit = 10.0 * max(np.linalg.norm(rho), 1e-300)
    for m in range(len(t_grid)):
        out[m] = rho
        if np.linalg.norm(rho) > limit:
            raise PropagationDiverged(
                f"supervector norm exceeded 10x its initial value at step {m}")
        rho = step @ rho
    return out


def second_order_cumulant(ss: SteadyState) -> CumulantMatrix:
    """M_ij = <<(sigma_i sigma_j)^dag|rho_ss>> - <sigma_i><sigma_j>.

    The operator products sigma_i sigma_j are formed exactly as 2x2 matrix
    products (e.g. sigma_+ sigma_- = |e><e|, sigma_- sigma_- = 0).
    """
    m = np.empty((3, 3), dtype=complex)
    for i, op_i in enumerate(PSEUDOSPIN_OPS):
        for j, op_j in enumerate(PSEUDOSPIN_OPS):
            prod = op_i @ op_j
            m[i, j] = superket(prod.conj().T).conj() @ ss.rho \
                - ss.means[i] * ss.means[j]
    return CumulantMatrix(m=m)


def qrt_correlation(liouv: Liouvillian, ss: SteadyState,
                    tau_grid: np.ndarray) -> CorrelationSeries:
    """Quantum-regression-theorem correlations on a uniform tau grid.

    C_ij(tau) = <<sigma_i^dag| e^{L tau} |sigma_j rho_ss>> - <sigma_i><sigma_j>
    evaluated by repeated application of the one-step propagator e^{L dtau}
    to the three seed supervectors vec(sigma_j rho_ss). At tau = 0 this equals
    the second-order cumulant matrix exactly.
    """
    dt = _check_uniform_grid(tau_grid)
    step = expm(liouv.matrix * dt)
    rho_mat = ss.rho_matrix
    bras = [superket(op.conj().T).conj() for op in PSEUDOSPIN_OPS]
    n = len(tau_grid)
    values = np.empty((n, 3, 3), dtype=complex)
    for j, op_j in enumerate(PSEUDOSPIN_OPS):
        v = superket(op_j @ rho_mat)
        limit = 10.0 * max(np.linalg.norm(v), 1e-300)
        for m in range(n):
            if np.linalg.norm(v) > limit:
                raise PropagationDiverged(
                    f"QRT supervector norm exceeded 10x its seed at step {m}")
            for i in range(3):
                values[m, i, j] = bras[i] @ v - ss.means[i] * ss.means[j]
            v = step @ v
    return CorrelationSeries(tau=np.asarray(tau_grid, dtype=float),
                             values=values, method="qrt")


def make_tau_grid(t1: float, dt: float | None = None,
                  tau_max: float | None = None) -> np.ndarray:
    """Default correlation grid: dtau = T1/200 up to tau_max = 15 T1."""
    if dt is None:
        dt = t1 / 200.0
    if tau_max is None:
        tau_max = 15.0 * t1
    n = int(round(tau_max / dt))
    return dt * np.arange(n + 1)
