"""Orbital localization by Jacobi sweeps or gradient ascent, plus Lowdin OAO.

Three molecular-orbital schemes share one engine.  Each maximizes a sum of
squared diagonal quantities that a 2x2 rotation of orbitals (i, j) turns
into a pure fourth-harmonic in the angle,

    f(theta) = const + A cos(4 theta) + B sin(4 theta),

so the optimal angle per pair is closed-form: 4 theta* = atan2(B, A).

  ER  maximizes sum_p (pp|pp), the orbital self-repulsion, straight from
      the two-electron tensor.
  FB  maximizes sum_p |<p|r|p>|^2 over the window.  Because the window
      trace of <r^2> is rotation invariant, this is the same optimum as
      minimizing the orbital spread sum_p (<p|r^2|p> - <p|r|p>^2).
  PM  maximizes sum_p sum_A (orbital Mulliken population on atom A)^2.
      The aggregate atomic-charge sum sum_A Q_A^2 reported by
      :func:`cost_pm` is invariant under window rotations and is kept as
      a diagnostic only.

OAO ignores the window: it returns the rotation carrying the current MO
basis onto the symmetrically orthogonalized AOs, C^-1 S^(-1/2).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ConvergenceWarning, InputError
from .integrals import AuxiliaryIntegrals, MolecularHamiltonian
from .transform import (
    OrbitalRotation,
    lowdin_orthogonalize,
    rotate_hamiltonian,
    transform_two_body,
)

__all__ = [
    "LocalizationRequest",
    "LocalizationResult",
    "SCHEMES",
    "cost_er",
    "cost_fb",
    "cost_pm",
    "localize",
]

SCHEMES = ("oao", "pm", "fb", "er")
GRID_POINTS = 64


METHODS = ("jacobi", "ascent")


@dataclass(frozen=True)
class LocalizationRequest:
    """What to localize and how hard to try.

    ``method`` picks the maximizer for the MO schemes: "jacobi" (pairwise
    sweeps, aggressive, may hop basins) or "ascent" (monotone Riemannian
    gradient ascent, converges to the stationary point nearest the
    starting basis, the way Newton-style localizers in production
    chemistry codes behave).  Both never decrease the objective.
    """

    scheme: str
    window: tuple[int, ...] | None = None
    convergence_tol: float = 1e-8
    max_sweeps: int = 200
    seed: int | None = None
    pm_weight: float = 2.0
    method: str = "jacobi"
    max_iterations: int = 20000  # ascent only

    def __post_init__(self):
        scheme = str(self.scheme).lower()
        if scheme not in SCHEMES:
            raise InputError(f"unknown scheme {self.scheme!r}; pick one of {SCHEMES}")
        object.__setattr__(self, "scheme", scheme)
        method = str(self.method).lower()
        if method not in METHODS:
            raise InputError(f"unknown method {self.method!r}; pick one of {METHODS}")
        object.__setattr__(self, "method", method)
        if self.window is not None:
            window = tuple(int(i) for i in self.window)
            if len(set(window)) != len(window):
                raise InputError("window indices must be distinct")
            object.__setattr__(self, "window", window)

    def resolve_window(self, n_orbitals: int) -> tuple[int, ...]:
        if self.window is None:
            return tuple(range(n_orbitals))
        if self.window and not all(0 <= i < n_orbitals for i in self.window):
            raise InputError(f"window indices out of range 0..{n_orbitals - 1}")
        return self.window


@dataclass(frozen=True)
class LocalizationResult:
    scheme: str
    rotation: OrbitalRotation
    hamiltonian: MolecularHamiltonian
    converged: bool
    sweeps: int
    objective_per_sweep: tuple[float, ...] = field(default_factory=tuple)


def cost_er(ham: MolecularHamiltonian) -> float:
    """Self-repulsion functional sum_p (pp|pp)."""
    return float(np.sum(np.einsum("pppp->p", ham.two_body_dense()), dtype=np.longdouble))


def _mo_dipoles(coeff, aux: AuxiliaryIntegrals):
    if aux is None or aux.dipole_ao is None:
        raise InputError("scheme needs dipole integrals: missing DIPOLE_X/Y/Z sections")
    if coeff is None:
        coeff = aux.mo_coefficients
    if coeff is None:
        raise InputError("scheme needs MO coefficients (argument or MO_COEFF section)")
    return [coeff.T @ aux.dipole_ao[k] @ coeff for k in range(3)]


def cost_fb(coeff, aux: AuxiliaryIntegrals, window) -> float:
    """Dipole-norm form of the Foster-Boys measure: sum_p |<p|r|p>|^2."""
    mats = _mo_dipoles(coeff, aux)
    window = tuple(window)
    total = 0.0
    for m in mats:
        d = np.diagonal(m)[list(window)]
        total += float(np.sum(d * d, dtype=np.longdouble))
    return total


def _population_matrices(coeff, aux: AuxiliaryIntegrals):
    """Symmetrized per-atom Mulliken population matrices in the MO basis."""
    if aux is None:
        raise InputError("scheme needs AO data (overlap, atom map, charges)")
    for name, value in (
        ("OVERLAP", aux.ao_overlap),
        ("AO_ATOM_MAP", aux.ao_to_atom),
        ("ATOMIC_NUMBERS", aux.atomic_numbers),
    ):
        if value is None:
            raise InputError(f"scheme needs the {name} section")
    if coeff is None:
        coeff = aux.mo_coefficients
    if coeff is None:
        raise InputError("scheme needs MO coefficients (argument or MO_COEFF section)")
    sc = aux.ao_overlap @ coeff
    atoms = sorted(set(aux.ao_to_atom))
    mats = []
    ao_atom = np.asarray(aux.ao_to_atom)
    for atom in atoms:
        rows = np.flatnonzero(ao_atom == atom)
        half = coeff[rows, :].T @ sc[rows, :]
        mats.append(0.5 * (half + half.T))
    return atoms, mats


def cost_pm(coeff, aux: AuxiliaryIntegrals, window, weight: float = 2.0) -> float:
    """Squared-Mulliken-charge sum over atoms.

    Q_A = Z_A - weight * sum_{p in window} (population of p on A).  The
    default weight 2 treats every window orbital as doubly occupied.
    Invariant under rotations inside the window; see module docstring.
    """
    atoms, mats = _population_matrices(coeff, aux)
    window = list(window)
    total = 0.0
    for atom, mat in zip(atoms, mats):
        z = aux.atomic_numbers[atom]
        population = float(np.sum(np.diagonal(mat)[window], dtype=np.longdouble))
        total += (z - weight * population) ** 2
    return total


def _diag_square_objective(mats, window) -> float:
    total = 0.0
    for m in mats:
        d = np.diagonal(m)[list(window)]
        total += float(np.sum(d * d, dtype=np.longdouble))
    return total


def _apply_givens_sym(mat, i, j, c, s):
    """In-place congruence update M <- G^T M G for the embedded rotation."""
    col_i, col_j = mat[:, i].copy(), mat[:, j].copy()
    mat[:, i] = c * col_i - s * col_j
    mat[:, j] = s * col_i + c * col_j
    row_i, row_j = mat[i, :].copy(), mat[j, :].copy()
    mat[i, :] = c * row_i - s * row_j
    mat[j, :] = s * row_i + c * row_j


def _apply_givens_tensor(g, i, j, c, s):
    """In-place basis change of a dense 4-index tensor on orbitals (i, j)."""
    for axis in range(4):
        view = np.moveaxis(g, axis, 0)
        g_i, g_j = view[i].copy(), view[j].copy()
        view[i] = c * g_i - s * g_j
        view[j] = s * g_i + c * g_j


def _apply_givens_columns(u, i, j, c, s):
    col_i, col_j = u[:, i].copy(), u[:, j].copy()
    u[:, i] = c * col_i - s * col_j
    u[:, j] = s * col_i + c * col_j


def _best_angle(a: float, b: float, pair_objective) -> tuple[float, float]:
    """Maximizer of const + a cos4t + b sin4t, with a grid fallback.

    Returns (theta, predicted_gain).  When the harmonic coefficients sink
    into round-off the closed form is meaningless; a 64-point scan of the
    directly evaluated pair objective decides instead.
    """
    amplitude = float(np.hypot(a, b))
    if np.isfinite(amplitude) and amplitude > 1e-300:
        theta = 0.25 * float(np.arctan2(b, a))
        return theta, amplitude - a
    thetas = -np.pi / 4 + np.pi / 2 * np.arange(GRID_POINTS) / GRID_POINTS
    values = [pair_objective(t) for t in thetas]
    best = int(np.argmax(values))
    return float(thetas[best]), float(values[best] - pair_objective(0.0))


def _sweep_pairs(window, sweep_index, seed):
    pairs = [(i, j) for a, i in enumerate(window) for j in window[a + 1:]]
    if seed is not None:
        rng = np.random.default_rng((seed, sweep_index))
        rng.shuffle(pairs)
    return pairs


def _jacobi_matrix_scheme(mats, window, request):
    """Sweep engine for objectives sum_k sum_p (M_k)_pp^2; returns (U, log)."""
    n = mats[0].shape[0]
    u = np.eye(n)
    log = [_diag_square_objective(mats, window)]
    converged = False
    sweeps = 0
    for sweep in range(request.max_sweeps):
        sweeps += 1
        for i, j in _sweep_pairs(window, sweep, request.seed):
            u_vec = np.array([m[i, i] - m[j, j] for m in mats])
            v_vec = np.array([m[i, j] for m in mats])
            a = 0.25 * float(u_vec @ u_vec) - float(v_vec @ v_vec)
            b = -float(u_vec @ v_vec)

            def pair_objective(theta, u_vec=u_vec, v_vec=v_vec, mats=mats, i=i, j=j):
                c, s = np.cos(theta), np.sin(theta)
                total = 0.0
                for m in mats:
                    mii, mjj, mij = m[i, i], m[j, j], m[i, j]
                    new_ii = c * c * mii + s * s * mjj - 2 * c * s * mij
                    new_jj = s * s * mii + c * c * mjj + 2 * c * s * mij
                    total += new_ii**2 + new_jj**2
                return total

            theta, gain = _best_angle(a, b, pair_objective)
            if gain <= 0.0 or theta == 0.0:
                continue
            c, s = float(np.cos(theta)), float(np.sin(theta))
            for m in mats:
                _apply_givens_sym(m, i, j, c, s)
            _apply_givens_columns(u, i, j, c, s)
        log.append(_diag_square_objective(mats, window))
        if log[-1] - log[-2] < request.convergence_tol * max(abs(log[-1]), 1.0):
            converged = True
            break
    return u, log, converged, sweeps


def _jacobi_er(ham: MolecularHamiltonian, window, request):
    n = ham.n_orbitals
    g = ham.two_body_dense().copy()
    u = np.eye(n)
    log = [float(np.sum(np.einsum("pppp->p", g), dtype=np.longdouble))]
    converged = False
    sweeps = 0
    for sweep in range(request.max_sweeps):
        sweeps += 1
        for i, j in _sweep_pairs(window, sweep, request.seed):
            g_iiii, g_jjjj = g[i, i, i, i], g[j, j, j, j]
            g_ijij, g_iijj = g[i, j, i, j], g[i, i, j, j]
            g_iiij, g_jjij = g[i, i, i, j], g[j, j, i, j]
            a = 0.25 * (g_iiii + g_jjjj) - g_ijij - 0.5 * g_iijj
            b = g_jjij - g_iiij

            # Gram matrix of the pair densities (rho_ii, rho_jj, rho_ij)
            gram = np.array(
                [
                    [g_iiii, g_iijj, g_iiij],
                    [g_iijj, g_jjjj, g_jjij],
                    [g_iiij, g_jjij, g_ijij],
                ]
            )

            def pair_objective(theta, gram=gram):
                c, s = np.cos(theta), np.sin(theta)
                w_i = np.array([c * c, s * s, -2 * c * s])
                w_j = np.array([s * s, c * c, 2 * c * s])
                return float(w_i @ gram @ w_i + w_j @ gram @ w_j)

            theta, gain = _best_angle(a, b, pair_objective)
            if gain <= 0.0 or theta == 0.0:
                continue
            c, s = float(np.cos(theta)), float(np.sin(theta))
            _apply_givens_tensor(g, i, j, c, s)
            _apply_givens_columns(u, i, j, c, s)
        log.append(float(np.sum(np.einsum("pppp->p", g), dtype=np.longdouble)))
        if log[-1] - log[-2] < request.convergence_tol * max(abs(log[-1]), 1.0):
            converged = True
            break
    return u, log, converged, sweeps


def _ascend(state_cost, state_gradient, state_step, n, window, request):
    """Monotone gradient ascent over window rotations.

    ``state_cost()`` evaluates the objective, ``state_gradient()`` its
    derivative with respect to an antisymmetric generator (columns
    convention), ``state_step(u_step)`` applies a rotation to the working
    state.  Steps that fail to improve are halved; the accumulated
    rotation and the per-iteration objective log are returned.
    """
    mask = np.zeros((n, n), dtype=bool)
    mask[np.ix_(window, window)] = True
    u = np.eye(n)
    cost = state_cost()
    log = [cost]
    eta = None
    converged = False
    iterations = 0
    stalls = 0
    for _ in range(request.max_iterations):
        grad = state_gradient()
        grad = np.where(mask, grad, 0.0)
        gnorm = float(np.max(np.abs(grad))) if grad.size else 0.0
        scale = max(1.0, abs(cost))
        if gnorm <= max(request.convergence_tol, 1e-13) * scale:
            converged = True
            break
        if eta is None:
            eta = 0.2 / gnorm  # first step of ~0.2 rad at the largest entry
        improved = False
        while eta * gnorm >= 1e-15:
            u_step = expm(eta * grad)
            trial_cost = state_step(u_step, trial=True)
            if trial_cost > cost:
                state_step(u_step, trial=False)
                u = u @ u_step
                gain = trial_cost - cost
                cost = trial_cost
                log.append(cost)
                eta *= 1.25
                improved = True
                stalls = stalls + 1 if gain < request.convergence_tol * scale else 0
                break
            eta *= 0.5
        iterations += 1
        if not improved or stalls >= 3:
            converged = True  # out of ascent at this resolution
            break
    return u, log, converged, iterations


def _ascent_er(ham: MolecularHamiltonian, window, request):
    g = ham.two_body_dense().copy()

    def cost():
        return float(np.sum(np.einsum("pppp->p", g), dtype=np.longdouble))

    def gradient():
        raw = 4.0 * np.einsum("pppq->qp", g)
        return raw - raw.T

    def step(u_step, trial):
        nonlocal g
        rotated = transform_two_body(g, u_step)
        if trial:
            return float(np.sum(np.einsum("pppp->p", rotated), dtype=np.longdouble))
        g = rotated
        return None

    return _ascend(cost, gradient, step, ham.n_orbitals, window, request)


def _ascent_matrix_scheme(mats, window, request):
    n = mats[0].shape[0]
    window_mask = np.zeros(n, dtype=bool)
    window_mask[list(window)] = True

    def cost():
        return _diag_square_objective(mats, window)

    def gradient():
        total = np.zeros((n, n))
        for m in mats:
            d = np.where(window_mask, np.diagonal(m), 0.0)
            raw = 4.0 * m * d[np.newaxis, :]  # R_qp = 4 M_qp M_pp [p in window]
            total += raw - raw.T
        return total

    def step(u_step, trial):
        if trial:
            rotated = [u_step.T @ m @ u_step for m in mats]
            return _diag_square_objective(rotated, window)
        for k, m in enumerate(mats):
            mats[k] = u_step.T @ m @ u_step
        return None

    return _ascend(cost, gradient, step, n, window, request)


def _localize_oao(ham, coeff, aux, request):
    if aux is None or aux.ao_overlap is None:
        raise InputError("OAO needs the OVERLAP section")
    s = aux.ao_overlap
    if coeff is None:
        coeff = aux.mo_coefficients
    n = ham.n_orbitals
    if coeff is None:
        if np.max(np.abs(s - np.eye(s.shape[0]))) > 1e-10:
            raise InputError(
                "OAO needs MO coefficients relating the Hamiltonian basis to the AOs"
            )
        coeff = np.eye(n)
    if coeff.shape != (n, n):
        raise InputError(
            "OAO applies to the full orbital space: MO coefficients must be "
            f"square of dimension {n}, got {coeff.shape}"
        )
    inv_sqrt = lowdin_orthogonalize(s)
    v = np.linalg.solve(coeff, inv_sqrt)
    # project to the nearest orthogonal matrix (polar factor)
    w, _, zt = np.linalg.svd(v)
    rotation = OrbitalRotation(w @ zt)
    return LocalizationResult(
        scheme="oao",
        rotation=rotation,
        hamiltonian=rotate_hamiltonian(ham, rotation),
        converged=True,
        sweeps=0,
        objective_per_sweep=(),
    )


def localize(
    ham: MolecularHamiltonian,
    coeff: np.ndarray | None,
    aux: AuxiliaryIntegrals | None,
    request: LocalizationRequest,
) -> LocalizationResult:
    """Run the requested scheme; rotations act only inside the window.

    Returns the accumulated rotation (identity outside the window) and
    the Hamiltonian rebuilt in the rotated basis.  Hitting the sweep cap
    returns the best basis found and raises a ConvergenceWarning.
    """
    if request.scheme == "oao":
        return _localize_oao(ham, coeff, aux, request)

    window = request.resolve_window(ham.n_orbitals)
    if len(window) < 2:
        return LocalizationResult(
            scheme=request.scheme,
            rotation=OrbitalRotation.identity(ham.n_orbitals),
            hamiltonian=ham,
            converged=True,
            sweeps=0,
            objective_per_sweep=(),
        )

    if request.scheme == "er":
        if request.method == "jacobi":
            u, log, converged, sweeps = _jacobi_er(ham, window, request)
        else:
            u, log, converged, sweeps = _ascent_er(ham, window, request)
    else:
        if request.scheme == "fb":
            mats = _mo_dipoles(coeff, aux)
        else:
            _, mats = _population_matrices(coeff, aux)
        mats = [np.array(m, dtype=float, copy=True) for m in mats]
        if request.method == "jacobi":
            u, log, converged, sweeps = _jacobi_matrix_scheme(mats, window, request)
        else:
            u, log, converged, sweeps = _ascent_matrix_scheme(mats, window, request)

    if not converged:
        cap = (
            f"max_sweeps={request.max_sweeps}"
            if request.method == "jacobi"
            else f"max_iterations={request.max_iterations}"
        )
        warnings.warn(
            f"{request.scheme} localization stopped at {cap}",
            ConvergenceWarning,
            stacklevel=2,
        )
    if np.array_equal(u, np.eye(ham.n_orbitals)):
        rotation = OrbitalRotation.identity(ham.n_orbitals)
        rotated = ham
    else:
        rotation = OrbitalRotation(u)
        rotated = rotate_hamiltonian(ham, rotation)
    return LocalizationResult(
        scheme=request.scheme,
        rotation=rotation,
        hamiltonian=rotated,
        converged=converged,
        sweeps=sweeps,
        objective_per_sweep=tuple(log),
    )
