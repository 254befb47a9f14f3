"""Oscillator Hamiltonians on the commutative and noncommutative plane.

Four models:

* ``commutative`` -- two decoupled modes on H x H, spectrum omega(2j+1),
* ``h1``          -- the fixed-coefficient quadratic form in (X^c, P),
* ``h2``          -- its (mu, omega) variant, still built from the commuting
  coordinates; SU(2)-symmetric, diagonalized by a Bogoliubov rotation,
* ``h3``          -- the physical oscillator in the noncommuting positions,
  equal to an h2-type part with renormalized parameters plus a Zeeman term.

Every Hamiltonian is constructed twice (phase-space quadratic form and
ladder closed form) and the two routes are cross-asserted on the safe
block, which catches convention errors in the representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operator_core import FockSpace, Operator, adjoint, annihilator, identity, tensor
from .moyal_rep import HSSpace, ModelConfig, block_norm, build_rep
from .schwinger_su2 import schwinger_noncommutative

__all__ = [
    "MODELS",
    "OscParams",
    "RenormalizedParams",
    "SpectrumFormula",
    "ZeemanDecomposition",
    "h_commutative",
    "h1",
    "h2",
    "h3",
    "alpha_beta",
    "critical_point",
    "renormalize",
    "lambdas",
    "renormalized_params",
    "zeeman_decomposition",
    "analytic_spectrum",
]

MODELS = ("commutative", "h1", "h2", "h3")

# Cross-construction agreement threshold, relative to the operator norm.
_XCHECK_RTOL = 1e-12


@dataclass(frozen=True)
class OscParams:
    """Bare mass and angular frequency (both of dimension 1/length)."""

    mu: float
    omega: float

    def __post_init__(self) -> None:
        if not (self.mu > 0.0 and self.omega > 0.0):
            raise ValueError("mu and omega must be positive")


@dataclass(frozen=True)
class RenormalizedParams:
    """Derived parameters of the physical oscillator at given (mu, omega, theta)."""

    mu_prime: float
    omega_prime: float
    lambda_plus: float
    lambda_minus: float
    alpha: float
    beta: float
    phi: float  # Bogoliubov angle of the physical model (always negative)


def alpha_beta(p: OscParams, theta: float) -> tuple[float, float]:
    """Diagonal / off-diagonal ladder coefficients of the h2 form."""
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    quarter = p.mu * p.omega**2 * theta / 4.0
    inv = 1.0 / (p.mu * theta)
    return (quarter + inv, quarter - inv)


def critical_point(theta: float) -> OscParams:
    """Parameters mu0 = omega0 / 2 = 1 / sqrt(theta) at which h2 is already diagonal."""
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    root = 1.0 / math.sqrt(theta)
    return OscParams(mu=root, omega=2.0 * root)


def renormalize(p: OscParams, theta: float) -> tuple[float, float]:
    """Observable (mu', omega') with mu omega^2 = mu' omega'^2 invariant."""
    if theta < 0.0:
        raise ValueError("theta must be non-negative")
    u2 = (p.mu * p.omega * theta / 2.0) ** 2
    mu_prime = p.mu / (1.0 + u2)
    omega_prime = p.omega * math.sqrt(1.0 + u2)
    return (mu_prime, omega_prime)


def lambdas(p: OscParams, theta: float) -> tuple[float, float]:
    """Spectral coefficients lambda_+- of the physical oscillator."""
    if theta < 0.0:
        raise ValueError("theta must be non-negative")
    mw = p.mu * p.omega
    u = mw * theta
    root = math.sqrt(4.0 + u**2)
    # lambda_minus via the conjugate expression; the naive difference
    # (root - u) cancels catastrophically for large mu omega theta.
    return (mw * (root + u) / 2.0, 2.0 * mw / (root + u))


def renormalized_params(p: OscParams, theta: float) -> RenormalizedParams:
    """Bundle of every derived parameter, with phi taken from the physical model."""
    from .bogoliubov_flow import phi_for  # deferred to avoid an import cycle

    mu_p, om_p = renormalize(p, theta)
    lp, lm = lambdas(p, theta)
    a, b = alpha_beta(p, theta)
    return RenormalizedParams(
        mu_prime=mu_p,
        omega_prime=om_p,
        lambda_plus=lp,
        lambda_minus=lm,
        alpha=a,
        beta=b,
        phi=phi_for(p, theta, "h3"),
    )


def _compress(builder: Callable[[HSSpace], Operator], hs: HSSpace) -> Operator:
    """Exact compression of an infinite lattice operator onto the N^2 block.

    Operator products computed inside the truncation corrupt the entries
    touching the top level (intermediate states above the cutoff are lost),
    which injects spurious low eigenvalues.  Building on a padded space and
    restricting yields the true matrix elements everywhere on the block, so
    the truncated spectrum is variational: eigenvalues approach the exact
    ones from above and never dip below them.
    """
    n = hs.levels
    big = HSSpace(ModelConfig(theta=hs.theta, truncation=n + 2))
    full = builder(big)
    idx = np.array([m * big.levels + k for m in range(n) for k in range(n)])
    return Operator(full.mat[np.ix_(idx, idx)])


def h_commutative(levels: int, p: OscParams) -> Operator:
    """Two decoupled modes, ladder form omega (a1^dag a1 + a2^dag a2 + 1)."""
    b = annihilator(FockSpace(levels))
    eye = identity(levels)
    a1 = tensor(b, eye)
    a2 = tensor(eye, b)
    num = adjoint(a1) @ a1 + adjoint(a2) @ a2
    return p.omega * (num + identity(levels**2))


def _assert_cross_check(quadratic: Operator, ladder: Operator, hs: HSSpace, tag: str) -> None:
    scale = max(ladder.norm(), 1.0)
    dev = block_norm(quadratic - ladder, hs.safe_indices)
    if dev > _XCHECK_RTOL * scale:
        raise AssertionError(f"{tag}: quadratic and ladder constructions disagree ({dev:.3e})")


def _h1_raw(hs: HSSpace) -> Operator:
    rep = build_rep(hs)
    theta = hs.theta
    xc2 = rep.X1c @ rep.X1c + rep.X2c @ rep.X2c
    p2 = rep.P1 @ rep.P1 + rep.P2 @ rep.P2
    quadratic = (1.0 / theta) * xc2 + (theta / 4.0) * p2
    ladder = rep.B_Ldag @ rep.B_L + rep.B_R @ rep.B_Rdag + identity(hs.dim)
    _assert_cross_check(quadratic, ladder, hs, "h1")
    return ladder


def h1(hs: HSSpace) -> Operator:
    """Fixed-coefficient unphysical oscillator (exactly diagonal, spectrum m+n+1)."""
    return _compress(_h1_raw, hs)


def _split_phase_space(levels: int, theta: float) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Phase-space operators as (left, right) factor pairs on the N-level space.

    Each entry (a, c) stands for the vectorized operator
    left_action(a) + right_action(c); keeping the factors small lets the
    quadratic forms be assembled without any N^2 x N^2 matrix products.
    """
    b = annihilator(FockSpace(levels)).mat
    bd = b.conj().T
    zero = np.zeros_like(b)
    s = math.sqrt(theta / 2.0)
    r = 1.0 / math.sqrt(2.0 * theta)
    x1 = (s * (b + bd), zero)
    x2 = (1j * s * (bd - b), zero)
    p1 = (1j * r * (bd - b), 1j * r * (b - bd))
    p2 = (-r * (bd + b), r * (bd + b))
    half = theta / 2.0
    x1c = (x1[0] + half * p2[0], half * p2[1])
    x2c = (x2[0] - half * p1[0], -half * p1[1])
    return {"x1": x1, "x2": x2, "p1": p1, "p2": p2, "x1c": x1c, "x2c": x2c}


def _split_square_sum(
    splits: list[tuple[np.ndarray, np.ndarray]], levels: int
) -> np.ndarray:
    """Sum of squares of split operators.

    Left and right actions commute, so each square factors as
    (L(a) + R(c))^2 = kron(a^2, I) + 2 kron(a, c^T) + kron(I, (c^2)^T),
    which needs only small-matrix products.
    """
    eye = np.eye(levels, dtype=np.complex128)
    total = np.zeros((levels**2, levels**2), dtype=np.complex128)
    for a, c in splits:
        total += np.kron(a @ a, eye)
        total += 2.0 * np.kron(a, c.T)
        total += np.kron(eye, (c @ c).T)
    return total


def _h2_quadratic(space: HSSpace, p: OscParams) -> Operator:
    sp = _split_phase_space(space.levels, space.theta)
    xc2 = _split_square_sum([sp["x1c"], sp["x2c"]], space.levels)
    p2 = _split_square_sum([sp["p1"], sp["p2"]], space.levels)
    return Operator(p2 / (2.0 * p.mu) + 0.5 * p.mu * p.omega**2 * xc2)


def _h2_cross_check(hs: HSSpace, p: OscParams) -> None:
    # Convention check against the dense representation operators (both
    # the quadratic form and the ladder closed form).  The agreement is
    # truncation independent, so a small space keeps it cheap at large N.
    space = hs if hs.levels <= 12 else HSSpace(ModelConfig(hs.theta, 12))
    rep = build_rep(space)
    dense = (
        rep.P1 @ rep.P1 + rep.P2 @ rep.P2
    ) / (2.0 * p.mu) + 0.5 * p.mu * p.omega**2 * (
        rep.X1c @ rep.X1c + rep.X2c @ rep.X2c
    )
    split = _h2_quadratic(space, p)
    if not np.allclose(split.mat, dense.mat, atol=1e-12 * max(dense.norm(), 1.0)):
        raise AssertionError("h2: split-form and dense constructions disagree")
    a, b = alpha_beta(p, space.theta)
    ladder = a * (rep.B_Ldag @ rep.B_L + rep.B_Rdag @ rep.B_R) + b * (
        rep.B_Ldag @ rep.B_R + rep.B_Rdag @ rep.B_L
    )
    _assert_cross_check(dense, ladder, space, "h2")


def h2(hs: HSSpace, p: OscParams) -> Operator:
    """Unphysical (mu, omega) oscillator in the commuting coordinates.

    The quadratic form in (X^c, P) and the (alpha, beta) ladder form are
    cross-asserted against each other before compression.
    """
    _h2_cross_check(hs, p)
    return _compress(lambda space: _h2_quadratic(space, p), hs)


def _h3_direct(space: HSSpace, p: OscParams) -> Operator:
    sp = _split_phase_space(space.levels, space.theta)
    x2 = _split_square_sum([sp["x1"], sp["x2"]], space.levels)
    p2 = _split_square_sum([sp["p1"], sp["p2"]], space.levels)
    return Operator(p2 / (2.0 * p.mu) + 0.5 * p.mu * p.omega**2 * x2)


def _h3_cross_check(hs: HSSpace, p: OscParams) -> None:
    space = hs if hs.levels <= 12 else HSSpace(ModelConfig(hs.theta, 12))
    rep = build_rep(space)
    dense = (
        rep.P1 @ rep.P1 + rep.P2 @ rep.P2
    ) / (2.0 * p.mu) + 0.5 * p.mu * p.omega**2 * (
        rep.X1 @ rep.X1 + rep.X2 @ rep.X2
    )
    split = _h3_direct(space, p)
    if not np.allclose(split.mat, dense.mat, atol=1e-12 * max(dense.norm(), 1.0)):
        raise AssertionError("h3: split-form and dense constructions disagree")
    decomp = zeeman_decomposition(space, p)
    recomposed = decomp.h2_part + decomp.zeeman_coeff * decomp.J3
    _assert_cross_check(recomposed, dense, space, "h3")


def h3(hs: HSSpace, p: OscParams) -> Operator:
    """Physical oscillator in the noncommuting positions."""
    _h3_cross_check(hs, p)
    return _compress(lambda space: _h3_direct(space, p), hs)


@dataclass(frozen=True)
class ZeemanDecomposition:
    """h3 split into a renormalized h2-type part plus zeeman_coeff * J3."""

    h2_part: Operator
    zeeman_coeff: float
    J3: Operator


def zeeman_decomposition(hs: HSSpace, p: OscParams) -> ZeemanDecomposition:
    rep = build_rep(hs)
    mu_p, om_p = renormalize(p, hs.theta)
    xc2 = rep.X1c @ rep.X1c + rep.X2c @ rep.X2c
    p2 = rep.P1 @ rep.P1 + rep.P2 @ rep.P2
    part = p2 / (2.0 * mu_p) + 0.5 * mu_p * om_p**2 * xc2
    j3 = schwinger_noncommutative(hs).J3
    return ZeemanDecomposition(
        h2_part=part,
        zeeman_coeff=p.mu * hs.theta * p.omega**2,
        J3=j3,
    )


@dataclass(frozen=True)
class SpectrumFormula:
    """Closed-form energies over occupation labels (m, n).

    ``energy_jj3`` is the same spectrum expressed over (j, j3); for the
    SU(2)-symmetric models it is independent of j3.
    """

    model: str
    energy: Callable[[int, int], float]
    energy_jj3: Callable[[float, float], float]


def analytic_spectrum(model: str, p: OscParams | None = None, theta: float | None = None) -> SpectrumFormula:
    if model == "commutative":
        if p is None:
            raise ValueError("commutative model needs OscParams")
        om = p.omega
        return SpectrumFormula(model, lambda m, n: om * (m + n + 1), lambda j, j3: om * (2 * j + 1))
    if model == "h1":
        return SpectrumFormula(model, lambda m, n: float(m + n + 1), lambda j, j3: 2 * j + 1)
    if model == "h2":
        if p is None:
            raise ValueError("h2 needs OscParams")
        om = p.omega
        return SpectrumFormula(model, lambda m, n: om * (m + n + 1), lambda j, j3: om * (2 * j + 1))
    if model == "h3":
        if p is None or theta is None:
            raise ValueError("h3 needs OscParams and theta")
        lp, lm = lambdas(p, theta)
        mu_p, om_p = renormalize(p, theta)
        two_mu = 2.0 * p.mu
        zee = theta * mu_p * om_p**2

        def bare(m: int, n: int) -> float:
            return (lp * (2 * m + 1) + lm * (2 * n + 1)) / two_mu

        def dressed(j: float, j3: float) -> float:
            return om_p * (2 * j + 1) + zee * j3

        return SpectrumFormula(model, bare, dressed)
    raise ValueError(f"unknown model {model!r}")
