"""Vertex weights, S-matrix, monodromy matrix and transfer matrix.

Weight family: phi(t) = t (rational) or sin(t) (trigonometric), with the
S-matrix normalized so its corner weight is 1.  The monodromy matrix couples
every chain site to one auxiliary spin-1/2 slot; its four auxiliary-space
blocks are the creation/annihilation operator family acting on the chain.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConventionError,
    DegenerateParametersError,
    PoleError,
    SingularWeightError,
)
from .tensor_core import embed_two_site, identity_operator, max_abs_diff, vacuum_state

POLE_TOL = 1e-12
GENERICITY_FLOOR = 1e-6

FAMILIES = ("rational", "trigonometric")

# Sampling profiles, sized so the inhomogeneity separations are comparable
# to eta: every closed-form weight ratio then stays O(1) and the factorizing
# operator keeps a modest condition number at L = 8.  The hard validity
# floor for user-supplied parameters stays at GENERICITY_FLOOR.
_SAMPLING = {
    "rational": {"spread": 1.5, "pair_guard": 0.4, "site_guard": 0.25},
    "trigonometric": {"spread": 1.0, "pair_guard": 0.3, "site_guard": 0.12},
}
SPECTRAL_GUARD = 0.15


def sampling_profile(regime: "Regime") -> dict:
    """Per-family box spread and guard floors used by the random samplers."""
    return dict(_SAMPLING[regime.family])


@dataclass(frozen=True)
class Regime:
    """Weight family plus anisotropy; phi(eta) must not vanish."""

    family: str
    eta: complex

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        object.__setattr__(self, "eta", complex(self.eta))
        if abs(self.phi(self.eta)) < POLE_TOL:
            raise ValueError(f"phi(eta) vanishes for eta={self.eta}")

    def phi(self, t: complex) -> complex:
        if self.family == "rational":
            return t
        return cmath.sin(t)

    def phi_prime(self, t: complex) -> complex:
        if self.family == "rational":
            return 1.0 + 0.0j
        return cmath.cos(t)


@dataclass(frozen=True)
class LatticeSpec:
    """Chain length and per-site inhomogeneity parameters."""

    length: int
    xi: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(complex(x) for x in self.xi))
        if self.length < 1:
            raise ValueError("lattice needs at least one site")
        if len(self.xi) != self.length:
            raise ValueError(f"expected {self.length} inhomogeneities, got {len(self.xi)}")

    def is_generic(self, regime: Regime, floor: float = GENERICITY_FLOOR) -> bool:
        """True if all pairwise weight denominators stay away from poles."""
        for i in range(self.length):
            for j in range(self.length):
                if i == j:
                    continue
                d = self.xi[i] - self.xi[j]
                if abs(regime.phi(d)) < floor or abs(regime.phi(d + regime.eta)) < floor:
                    return False
        return True

    def require_generic(self, regime: Regime, floor: float = GENERICITY_FLOOR) -> None:
        for i in range(self.length):
            for j in range(self.length):
                if i == j:
                    continue
                d = self.xi[i] - self.xi[j]
                if abs(regime.phi(d)) < floor:
                    raise DegenerateParametersError(
                        f"phi(xi_{i + 1} - xi_{j + 1}) ~ 0 (sites {i + 1},{j + 1})"
                    )
                if abs(regime.phi(d + regime.eta)) < floor:
                    raise DegenerateParametersError(
                        f"phi(xi_{i + 1} - xi_{j + 1} + eta) ~ 0 (sites {i + 1},{j + 1})"
                    )


@dataclass(frozen=True)
class MonodromyEntries:
    """Auxiliary-space blocks of the monodromy matrix on the chain space."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray


def c_weight(t: complex, regime: Regime) -> complex:
    """Normalized weight phi(t) / phi(t + eta)."""
    den = regime.phi(t + regime.eta)
    if abs(den) < POLE_TOL:
        raise SingularWeightError(f"phi(t + eta) = 0 at t={t}")
    return regime.phi(t) / den


def b_weight(t: complex, regime: Regime) -> complex:
    """Normalized weight phi(eta) / phi(t + eta)."""
    den = regime.phi(t + regime.eta)
    if abs(den) < POLE_TOL:
        raise SingularWeightError(f"phi(t + eta) = 0 at t={t}")
    return regime.phi(regime.eta) / den


def c_weight_inv(t: complex, regime: Regime) -> complex:
    """1 / c_weight(t), finite where phi(t) does not vanish."""
    num = regime.phi(t)
    if abs(num) < POLE_TOL:
        raise SingularWeightError(f"phi(t) = 0 at t={t}; 1/c has a pole there")
    return regime.phi(t + regime.eta) / num


def log_c_derivative(t: complex, regime: Regime) -> complex:
    """d/dt log c_weight(t) = phi'(t)/phi(t) - phi'(t+eta)/phi(t+eta)."""
    num = regime.phi(t)
    den = regime.phi(t + regime.eta)
    if abs(num) < POLE_TOL or abs(den) < POLE_TOL:
        raise SingularWeightError(f"log-derivative of c at a zero/pole, t={t}")
    return regime.phi_prime(t) / num - regime.phi_prime(t + regime.eta) / den


def s_matrix(t1: complex, t2: complex, regime: Regime) -> np.ndarray:
    """4x4 S-matrix with spectral argument t1 - t2, corner weights 1.

    Basis order (|00>, |01>, |10>, |11>); the middle block is
    [[c, b], [b, c]] in the normalized weights.
    """
    t = t1 - t2
    c = c_weight(t, regime)
    b = b_weight(t, regime)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, c, b, 0],
            [0, b, c, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )


def monodromy_matrix(t: complex, lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """Ordered product over sites of S(site, aux), aux appended as site L+1.

    Factors are composed left to right: site 1 outermost, acting last on kets.
    """
    L = lattice.length
    for i, x in enumerate(lattice.xi, start=1):
        if abs(regime.phi(x - t + regime.eta)) < POLE_TOL:
            raise SingularWeightError(f"phi(xi_{i} - t + eta) = 0 at site {i}, t={t}")
    aux = L + 1
    out = identity_operator(aux)
    for i, x in enumerate(lattice.xi, start=1):
        out = out @ embed_two_site(s_matrix(x, t, regime), i, aux, aux)
    return out


def extract_entries(monodromy: np.ndarray, n_sites: int) -> MonodromyEntries:
    """Slice the four auxiliary-space blocks out of a monodromy matrix.

    The auxiliary slot is the least significant bit;  block assignment to
    names is pinned by the vacuum actions (see ``monodromy_entries``).
    """
    dim = 1 << (n_sites + 1)
    if monodromy.shape != (dim, dim):
        raise ValueError(f"monodromy must act on {n_sites}+1 sites, got {monodromy.shape}")
    return MonodromyEntries(
        a=monodromy[1::2, 1::2].copy(),
        b=monodromy[0::2, 1::2].copy(),
        c=monodromy[1::2, 0::2].copy(),
        d=monodromy[0::2, 0::2].copy(),
    )


def vacuum_eigenvalue(t: complex, lattice: LatticeSpec, regime: Regime) -> complex:
    """Eigenvalue of the diagonal block on the empty chain: prod_i c(xi_i - t)."""
    a = 1.0 + 0.0j
    for x in lattice.xi:
        a *= c_weight(x - t, regime)
    return a


def monodromy_entries(
    t: complex, lattice: LatticeSpec, regime: Regime, check: bool = True
) -> MonodromyEntries:
    """Build the monodromy matrix and return its A, B, C, D blocks.

    With ``check`` on, the vacuum actions A|0> = a(t)|0>, D|0> = |0>,
    C|0> = 0 and the single-particle content of B|0> are verified; failure
    means the block convention is wrong and raises ``ConventionError``.
    """
    entries = extract_entries(monodromy_matrix(t, lattice, regime), lattice.length)
    if check:
        vac = vacuum_state(lattice.length)
        a_t = vacuum_eigenvalue(t, lattice, regime)
        tol = 1e-12 * max(1.0, abs(a_t))
        if max_abs_diff(entries.a @ vac, a_t * vac) > tol:
            raise ConventionError("A(t) does not act on the vacuum as a(t)")
        if max_abs_diff(entries.d @ vac, vac) > 1e-12:
            raise ConventionError("D(t) does not fix the vacuum")
        if float(np.max(np.abs(entries.c @ vac))) > 1e-12:
            raise ConventionError("C(t) does not annihilate the vacuum")
        bvac = entries.b @ vac
        bad = [
            i
            for i in range(bvac.size)
            if abs(bvac[i]) > 1e-12 and bin(i).count("1") != 1
        ]
        if bad:
            raise ConventionError("B(t)|0> leaks outside the one-particle sector")
    return entries


def transfer_matrix(t: complex, lattice: LatticeSpec, regime: Regime) -> np.ndarray:
    """Auxiliary-space trace A(t) + D(t)."""
    entries = monodromy_entries(t, lattice, regime, check=False)
    return entries.a + entries.d


def transfer_eigenvalue(
    t: complex, roots, lattice: LatticeSpec, regime: Regime, pole_tol: float = 1e-8
) -> complex:
    """Transfer-matrix eigenvalue at spectral point t for the given roots.

    Has explicit poles at t = q_alpha; points closer than ``pole_tol`` are
    rejected since the cancellation only happens in the action on the state.
    """
    for i, q in enumerate(roots, start=1):
        if abs(regime.phi(t - q)) < pole_tol:
            raise PoleError(
                f"t={t} within {pole_tol} of root q_{i}={q}; evaluate at a shifted point"
            )
    term1 = vacuum_eigenvalue(t, lattice, regime)
    term2 = 1.0 + 0.0j
    for q in roots:
        term1 *= c_weight_inv(q - t, regime)
        term2 *= c_weight_inv(t - q, regime)
    return term1 + term2


def random_lattice(
    n_sites: int,
    regime: Regime,
    rng: np.random.Generator,
    spread: float | None = None,
    guard: float | None = None,
    site_guard: float | None = None,
    max_tries: int = 2000,
) -> LatticeSpec:
    """Sample inhomogeneities from a complex box, rejecting near-pole draws.

    ``guard`` keeps pairwise differences (plain and eta-shifted) away from
    zeros of phi; ``site_guard`` does the same for the weights at spectral
    point 0, which the exchange identities evaluate.  Defaults come from the
    per-family conditioning profile.
    """
    profile = _SAMPLING[regime.family]
    if spread is None:
        spread = profile["spread"]
    # guards scale down with a narrower user-requested box to stay feasible
    scale = min(1.0, spread / profile["spread"])
    if guard is None:
        guard = profile["pair_guard"] * scale
    if site_guard is None:
        site_guard = profile["site_guard"] * scale
    for _ in range(max_tries):
        re = rng.uniform(-spread, spread, size=n_sites)
        im = rng.uniform(-spread, spread, size=n_sites)
        xi = tuple(complex(a, b) for a, b in zip(re, im))
        lattice = LatticeSpec(n_sites, xi)
        if not lattice.is_generic(regime, floor=guard):
            continue
        ok = all(
            abs(regime.phi(x)) > site_guard
            and abs(regime.phi(x + regime.eta)) > site_guard
            for x in xi
        )
        if ok:
            return lattice
    raise DegenerateParametersError(
        f"could not sample a generic lattice after {max_tries} tries"
    )


def random_spectral_point(
    lattice: LatticeSpec,
    regime: Regime,
    rng: np.random.Generator,
    spread: float | None = None,
    guard: float = SPECTRAL_GUARD,
    avoid=(),
    max_tries: int = 2000,
) -> complex:
    """Sample t from a complex box avoiding weight poles and listed points."""
    if spread is None:
        spread = _SAMPLING[regime.family]["spread"]
    for _ in range(max_tries):
        t = complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        ok = all(
            abs(regime.phi(x - t)) > guard and abs(regime.phi(x - t + regime.eta)) > guard
            for x in lattice.xi
        )
        ok = ok and all(abs(regime.phi(t - q)) > guard for q in avoid)
        if ok:
            return t
    raise DegenerateParametersError(
        f"could not sample a generic spectral point after {max_tries} tries"
    )
