"""Bethe equation residuals, a desk-scale root solver, and eigenstate checks.

The equations are solved in multiplicative form.  Newton linearizes the
principal logarithm of the per-root ratio
``a(q_i) * prod_{a != i} c(q_i - q_a) / c(q_a - q_i)`` (unity at a solution);
branch ambiguity never enters because the solver starts from decoupled
single-root seeds at the homogeneous point and follows a short homotopy in
the inhomogeneities, along which the ratio stays near one.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateRootsError,
    DegenerateStateError,
    ProvenanceError,
    RootCollisionError,
    SingularWeightError,
    SolverFailureError,
)
from .tensor_core import vacuum_state
from .vertex_model import (
    LatticeSpec,
    Regime,
    c_weight,
    log_c_derivative,
    monodromy_entries,
    random_spectral_point,
    transfer_eigenvalue,
    transfer_matrix,
    vacuum_eigenvalue,
)

ROOT_SEPARATION = 1e-8
SOLVE_TOL = 1e-12
MAX_NEWTON_ITER = 200
HOMOTOPY_LEGS = 20


@dataclass(frozen=True)
class BetheRoots:
    """Solved spectral roots with their residual and full provenance."""

    q: tuple[complex, ...]
    residual: float
    family: str
    eta: complex
    xi: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(complex(v) for v in self.q))
        object.__setattr__(self, "xi", tuple(complex(v) for v in self.xi))
        object.__setattr__(self, "eta", complex(self.eta))

    @property
    def length(self) -> int:
        return len(self.xi)

    @property
    def magnons(self) -> int:
        return len(self.q)

    def matches(self, lattice: LatticeSpec, regime: Regime, tol: float = 1e-9) -> bool:
        return (
            self.family == regime.family
            and abs(self.eta - regime.eta) < tol
            and self.length == lattice.length
            and all(abs(a - b) < tol for a, b in zip(self.xi, lattice.xi))
        )


def _require_separated(q, regime: Regime, floor: float = ROOT_SEPARATION):
    for i in range(len(q)):
        for j in range(i + 1, len(q)):
            if abs(regime.phi(q[i] - q[j])) < floor:
                raise DegenerateRootsError(
                    f"roots {i + 1} and {j + 1} closer than {floor}: {q[i]} ~ {q[j]}"
                )


def bae_residuals(q, lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """Per-root residual |a(q_i) - prod_{a != i} c(q_a - q_i) / c(q_i - q_a)|."""
    q = tuple(complex(v) for v in q)
    if not q:
        return np.zeros(0)
    _require_separated(q, regime)
    out = np.empty(len(q))
    for i, qi in enumerate(q):
        rhs = 1.0 + 0.0j
        for alpha, qa in enumerate(q):
            if alpha == i:
                continue
            rhs *= c_weight(qa - qi, regime) / c_weight(qi - qa, regime)
        out[i] = abs(vacuum_eigenvalue(qi, lattice, regime) - rhs)
    return out


def _log_ratio(q, lattice, regime):
    # log of a(q_i) * prod_{a != i} c(q_i - q_a) / c(q_a - q_i), principal branch
    out = np.empty(len(q), dtype=complex)
    for i, qi in enumerate(q):
        ratio = vacuum_eigenvalue(qi, lattice, regime)
        for alpha, qa in enumerate(q):
            if alpha == i:
                continue
            ratio *= c_weight(qi - qa, regime) / c_weight(qa - qi, regime)
        out[i] = cmath.log(ratio)
    return out


def _log_ratio_jacobian(q, lattice, regime):
    m = len(q)
    jac = np.zeros((m, m), dtype=complex)
    for i, qi in enumerate(q):
        diag = -sum(log_c_derivative(x - qi, regime) for x in lattice.xi)
        for alpha, qa in enumerate(q):
            if alpha == i:
                continue
            pair = log_c_derivative(qi - qa, regime) + log_c_derivative(qa - qi, regime)
            diag += pair
            jac[i, alpha] = -pair
        jac[i, i] = diag
    return jac


_ATTEMPT_ERRORS = (DegenerateRootsError, SingularWeightError, ValueError, np.linalg.LinAlgError)


def _newton(q0, lattice, regime, tol, max_iter):
    q = np.asarray(q0, dtype=complex).copy()
    for _ in range(max_iter):
        try:
            res = float(np.max(bae_residuals(q, lattice, regime)))
        except _ATTEMPT_ERRORS:
            return q, np.inf, False
        if res < tol:
            return q, res, True
        try:
            r = _log_ratio(q, lattice, regime)
            jac = _log_ratio_jacobian(q, lattice, regime)
            step = np.linalg.solve(jac, -r)
        except _ATTEMPT_ERRORS:
            return q, np.inf, False
        if not np.all(np.isfinite(step)):
            return q, np.inf, False
        # keep steps tame so the iterate cannot jump onto a pole
        scale = float(np.max(np.abs(step)))
        if scale > 1.0:
            step = step / scale
        q = q + step
    try:
        res = float(np.max(bae_residuals(q, lattice, regime)))
    except _ATTEMPT_ERRORS:
        res = np.inf
    return q, res, res < tol


def _decoupled_seed(branch: int, n_sites: int, center: complex, regime: Regime) -> complex:
    # Root of c(center - q)^L = 1 on the branch exp(2*pi*i*k/L), k != 0.
    omega = cmath.exp(2j * cmath.pi * branch / n_sites)
    eta = regime.eta
    if regime.family == "rational":
        u = omega * eta / (1.0 - omega)
    else:
        den = 1.0 - omega * cmath.cos(eta)
        if abs(den) < 1e-12:
            raise ZeroDivisionError("degenerate decoupled branch")
        u = cmath.atan(omega * cmath.sin(eta) / den)
    return center - u


def solve_bethe_roots(
    magnons: int,
    lattice: LatticeSpec,
    regime: Regime,
    seed: int = 0,
    tol: float = SOLVE_TOL,
    legs: int = HOMOTOPY_LEGS,
    max_iter: int = MAX_NEWTON_ITER,
) -> BetheRoots:
    """Solve for a set of Bethe roots on the given lattice.

    Strategy: converge at the homogeneous point (all inhomogeneities at
    their mean) starting from decoupled single-root seeds on distinct
    branches, then deform the inhomogeneities toward the target along an
    adaptive homotopy, re-converging Newton at every leg.  Collisions along
    the path and non-convergence are reported with a trace.

    Only regular finite-root solutions are searched for.  Sectors whose
    eigenvectors require roots at infinity (e.g. beyond half filling in the
    rational family, where the transfer matrix is spin symmetric) make the
    solver fail honestly rather than return a spurious set.
    """
    L = lattice.length
    if magnons > L:
        raise ValueError(f"cannot place {magnons} particles on {L} sites")
    if magnons == 0:
        return BetheRoots((), 0.0, regime.family, regime.eta, lattice.xi)

    rng = np.random.default_rng(seed)
    center = sum(lattice.xi) / L
    homogeneous = LatticeSpec(L, (center,) * L)
    trace: list[str] = []

    q_start = None
    branch_sets = list(combinations(range(1, L), magnons))
    for jitter_round in range(4):
        jitter_scale = 0.0 if jitter_round == 0 else 10.0 ** (-3 + jitter_round)
        for branches in branch_sets:
            try:
                q0 = [
                    _decoupled_seed(k, L, center, regime)
                    + jitter_scale * complex(rng.normal(), rng.normal())
                    for k in branches
                ]
            except ZeroDivisionError:
                continue
            q, res, ok = _newton(q0, lattice=homogeneous, regime=regime, tol=tol, max_iter=max_iter)
            if ok:
                try:
                    _require_separated(q, regime)
                except DegenerateRootsError:
                    trace.append(f"branches {branches}: converged to colliding roots")
                    continue
                q_start = q
                trace.append(f"homogeneous solve ok from branches {branches} (res {res:.2e})")
                break
            trace.append(f"branches {branches}: no convergence (res {res:.2e})")
        if q_start is not None:
            break
    if q_start is None:
        raise SolverFailureError(
            f"no homogeneous starting roots for M={magnons}, L={L}", trace
        )

    # homotopy in the inhomogeneities, adaptive step size
    q = q_start
    s = 0.0
    h = 1.0 / legs
    min_h = 1.0 / (legs * 512)
    target = np.asarray(lattice.xi, dtype=complex)
    while s < 1.0 - 1e-15:
        h = min(h, 1.0 - s)
        xi_next = tuple(center + (s + h) * (x - center) for x in target)
        leg_lattice = LatticeSpec(L, xi_next)
        q_next, res, ok = _newton(q, lattice=leg_lattice, regime=regime, tol=tol, max_iter=max_iter)
        if ok:
            try:
                _require_separated(q_next, regime)
            except DegenerateRootsError as exc:
                raise RootCollisionError(
                    f"roots collided at homotopy parameter {s + h:.4f}: {exc}"
                ) from exc
            q = q_next
            s += h
            h *= 1.7
        else:
            trace.append(f"leg to s={s + h:.4f} failed (res {res:.2e}); halving")
            h /= 2.0
            if h < min_h:
                raise SolverFailureError(
                    f"homotopy stalled at s={s:.4f} for M={magnons}, L={L}", trace
                )

    residual = float(np.max(bae_residuals(q, lattice, regime)))
    if residual >= tol:
        raise SolverFailureError(
            f"final residual {residual:.3e} above tolerance {tol:.1e}", trace
        )
    return BetheRoots(tuple(q), residual, regime.family, regime.eta, lattice.xi)


def bethe_vector(q, lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """State built by applying the creation blocks at q_1 .. q_M to the vacuum."""
    vec = vacuum_state(lattice.length)
    for qi in reversed(tuple(q)):
        vec = monodromy_entries(qi, lattice, regime, check=False).b @ vec
    return vec


def eigenstate_residual(
    roots: BetheRoots, lattice: LatticeSpec, regime: Regime, t_samples
) -> float:
    """Max over t of ||Z(t)|phi> - Lambda(t)|phi>|| / ||phi||."""
    vec = bethe_vector(roots.q, lattice, regime)
    norm = float(np.linalg.norm(vec))
    if norm < 1e-12:
        raise DegenerateStateError("Bethe vector has numerically zero norm")
    worst = 0.0
    for t in t_samples:
        lam = transfer_eigenvalue(t, roots.q, lattice, regime)
        z = transfer_matrix(t, lattice, regime)
        worst = max(worst, float(np.linalg.norm(z @ vec - lam * vec)) / norm)
    return worst


def default_spectral_samples(
    lattice: LatticeSpec, regime: Regime, roots, count: int = 3, seed: int = 0
):
    rng = np.random.default_rng(seed)
    return [
        random_spectral_point(lattice, regime, rng, avoid=tuple(roots))
        for _ in range(count)
    ]


def _format_complex(z: complex) -> str:
    return repr(complex(z))


def roots_to_text(roots: BetheRoots) -> str:
    lines = [
        "# Bethe root set",
        f"regime: {roots.family}",
        f"eta: {_format_complex(roots.eta)}",
        f"L: {roots.length}",
        f"M: {roots.magnons}",
        "xi: " + ", ".join(_format_complex(x) for x in roots.xi),
        "q: " + ", ".join(_format_complex(v) for v in roots.q),
        f"residual: {roots.residual!r}",
    ]
    return "\n".join(lines) + "\n"


def roots_from_text(text: str) -> BetheRoots:
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        fields[key.strip()] = value.strip()
    try:
        family = fields["regime"]
        eta = complex(fields["eta"])
        length = int(fields["L"])
        magnons = int(fields["M"])
        xi = _parse_complex_list(fields["xi"])
        q = _parse_complex_list(fields["q"])
        residual = float(fields["residual"])
    except KeyError as exc:
        raise ProvenanceError(f"roots document missing field {exc}") from exc
    if len(xi) != length or len(q) != magnons:
        raise ProvenanceError("roots document length fields disagree with lists")
    return BetheRoots(q, residual, family, eta, xi)


def _parse_complex_list(value: str) -> tuple[complex, ...]:
    value = value.strip()
    if not value:
        return ()
    return tuple(complex(part.strip()) for part in value.split(","))


def write_roots(roots: BetheRoots, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(roots_to_text(roots))
    tmp.replace(path)


def read_roots(path) -> BetheRoots:
    return roots_from_text(Path(path).read_text())
