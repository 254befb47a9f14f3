"""Bogoliubov / dilatation machinery and the exact oscillator ground state.

The hyperbolic mixing angle phi diagonalizes the quadratic Hamiltonians;
the same change of frame is implemented unitarily by the dilatation
operator.  The exact ground state is available in closed form (a diagonal
Hilbert-Schmidt operator with geometric coefficients) and in unitary form
(the dilatation flow applied to the vacuum dyad); the two must agree.

Two conventions in this corner are ambiguous (the constant multiplying
phi*D in the unitary, and the sign of the ground-state exponent), so both
are calibrated numerically at small phi and then frozen, rather than
trusted from any formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse.linalg

from .operator_core import Operator, adjoint, annihilator, commutator, expm
from .moyal_rep import (
    HSSpace,
    HSState,
    ModelConfig,
    basis_state,
    block_norm,
    build_rep,
    hs_norm,
    restrict,
)
from .oscillator_models import OscParams, renormalize

__all__ = [
    "BogoliubovFrame",
    "GroundState",
    "IntertwinerReport",
    "phi_for",
    "bogoliubov_pair",
    "bogoliubov_frame",
    "dilatation",
    "dilatation_quadratic",
    "dilatation_scaling_constant",
    "dilatation_unitary",
    "required_levels",
    "ground_state_closed",
    "ground_state_unitary",
    "c_operators",
    "c_operators_primed",
    "intertwiner_check",
]

TAIL_BOUND = 1e-14


def phi_for(p: OscParams, theta: float, model: str) -> float:
    """Bogoliubov angle: exp(phi) = sqrt(mu omega theta / 2) for h2, and
    exp(2 phi) = mu' omega' theta / 2 for h3 (always negative there)."""
    if not theta > 0.0:
        raise ValueError("theta must be positive")
    if model == "h2":
        return 0.5 * math.log(p.mu * p.omega * theta / 2.0)
    if model == "h3":
        mu_p, om_p = renormalize(p, theta)
        phi = 0.5 * math.log(mu_p * om_p * theta / 2.0)
        # mu' omega' theta / 2 = u / sqrt(1 + u^2) < 1, so phi < 0 always.
        assert phi < 0.0, "physical-model Bogoliubov angle must be negative"
        return phi
    raise ValueError(f"unknown model {model!r}")


def bogoliubov_pair(hs: HSSpace, phi: float) -> tuple[Operator, Operator]:
    """Hyperbolically mixed ladder operators (B_L', B_R')."""
    rep = build_rep(hs)
    c, s = math.cosh(phi), math.sinh(phi)
    return (c * rep.B_L + s * rep.B_R, s * rep.B_L + c * rep.B_R)


def dilatation(hs: HSSpace) -> Operator:
    """Dilatation generator, ladder form i (B_L^dag B_R - B_L B_R^dag).

    Exactly Hermitian even at the truncation edge; the quadratic form in
    (X^c, P) agrees with it on the safe block (asserted here).
    """
    rep = build_rep(hs)
    ladder = 1j * (rep.B_Ldag @ rep.B_R - rep.B_L @ rep.B_Rdag)
    dev = block_norm(ladder - dilatation_quadratic(hs), hs.safe_indices)
    if dev > 1e-12 * max(ladder.norm(), 1.0):
        raise AssertionError(f"dilatation dual forms disagree ({dev:.3e})")
    return ladder


def dilatation_quadratic(hs: HSSpace) -> Operator:
    """Independent construction (1/2)(X^c . P + P . X^c)."""
    rep = build_rep(hs)
    return 0.5 * (
        rep.X1c @ rep.P1 + rep.P1 @ rep.X1c + rep.X2c @ rep.P2 + rep.P2 @ rep.X2c
    )


@lru_cache(maxsize=1)
def dilatation_scaling_constant() -> float:
    """Constant c in U = exp(-i c phi D) such that U X^c U^dag = e^phi X^c.

    Calibrated from the commutator slope [D, X1c] = k X1c at phi -> 0
    instead of trusting a sign convention.  The value is representation
    independent, so a small space suffices.
    """
    hs = HSSpace(ModelConfig(theta=1.0, truncation=8))
    rep = build_rep(hs)
    d = dilatation(hs)
    ix = hs.safe_indices
    lhs = restrict(commutator(d, rep.X1c), ix).ravel()
    basis = restrict(rep.X1c, ix).ravel()
    k = np.vdot(basis, lhs) / np.vdot(basis, basis)
    resid = np.linalg.norm(lhs - k * basis)
    if resid > 1e-10 * np.linalg.norm(lhs):
        raise AssertionError("dilatation flow does not scale X1c")
    c = 1j / k
    if abs(c.imag) > 1e-10:
        raise AssertionError("dilatation scaling constant is not real")
    return float(c.real)


def dilatation_unitary(hs: HSSpace, phi: float) -> Operator:
    """Unitary implementing the phi-dilatation with the calibrated constant."""
    c = dilatation_scaling_constant()
    return expm(Operator(-1j * c * phi * dilatation(hs).mat))


@dataclass(frozen=True)
class BogoliubovFrame:
    """Primed ladder operators plus the unitary realizing the frame change."""

    phi: float
    B_L_prime: Operator
    B_R_prime: Operator
    U: Operator
    scaling_constant: float


def bogoliubov_frame(hs: HSSpace, phi: float) -> BogoliubovFrame:
    bl_p, br_p = bogoliubov_pair(hs, phi)
    return BogoliubovFrame(
        phi=phi,
        B_L_prime=bl_p,
        B_R_prime=br_p,
        U=dilatation_unitary(hs, phi),
        scaling_constant=dilatation_scaling_constant(),
    )


@dataclass(frozen=True)
class GroundState:
    """Normalized exact ground state as a Hilbert-Schmidt element."""

    psi0: HSState
    phi: float
    gamma: float
    norm: float


def _gamma_of(phi: float) -> float:
    ratio = -math.tanh(phi)
    if ratio > 0.0:
        return math.log(ratio)
    return -math.inf if ratio == 0.0 else math.nan


def required_levels(phi: float, tail: float = TAIL_BOUND) -> int:
    """Smallest N with tanh(phi)^(2N) <= tail."""
    t = abs(math.tanh(phi))
    if t == 0.0:
        return 2
    return max(2, math.ceil(math.log(tail) / (2.0 * math.log(t))))


def _check_tail(hs: HSSpace, phi: float) -> None:
    need = required_levels(phi)
    if hs.levels < need:
        raise ValueError(
            f"truncation {hs.levels} too small for phi={phi:.6g}; need at least {need} levels"
        )


def ground_state_closed(hs: HSSpace, phi: float) -> GroundState:
    """Closed form sech(phi) * sum_m (-tanh phi)^m |m><m|."""
    _check_tail(hs, phi)
    n = hs.levels
    coeffs = (1.0 / math.cosh(phi)) * (-math.tanh(phi)) ** np.arange(n)
    mat = np.diag(coeffs.astype(np.complex128))
    state = HSState(hs, mat.ravel())
    return GroundState(psi0=state, phi=phi, gamma=_gamma_of(phi), norm=hs_norm(state))


@lru_cache(maxsize=1)
def _ground_exponent_sign() -> float:
    """Sign s in psi0 = exp(s phi (B_L^dag B_R - B_L B_R^dag)) |0><0|.

    Calibrated against the closed form at small phi and then frozen.
    """
    hs = HSSpace(ModelConfig(theta=1.0, truncation=8))
    phi = 0.05
    target = ground_state_closed(hs, phi).psi0.vec
    rep = build_rep(hs)
    k = (rep.B_Ldag @ rep.B_R - rep.B_L @ rep.B_Rdag).mat
    v0 = basis_state(hs, 0, 0).vec
    best = min(
        (-1.0, 1.0),
        key=lambda s: np.linalg.norm(scipy.sparse.linalg.expm_multiply(s * phi * k, v0) - target),
    )
    return best


def ground_state_unitary(hs: HSSpace, phi: float) -> GroundState:
    """Unitary flow applied to the vacuum dyad; must match the closed form."""
    _check_tail(hs, phi)
    rep = build_rep(hs)
    k = (rep.B_Ldag @ rep.B_R - rep.B_L @ rep.B_Rdag).mat
    v0 = basis_state(hs, 0, 0).vec
    sign = _ground_exponent_sign()
    vec = scipy.sparse.linalg.expm_multiply(sign * phi * k, v0)
    state = HSState(hs, vec)
    return GroundState(psi0=state, phi=phi, gamma=_gamma_of(phi), norm=hs_norm(state))


def c_operators(hs: HSSpace, p: OscParams) -> tuple[Operator, Operator]:
    """Annihilation-type operators built from X^c and P.

    They kill the vacuum dyad only at the critical point.
    """
    rep = build_rep(hs)
    mw = p.mu * p.omega
    scale = 1.0 / math.sqrt(2.0 * mw)
    c1 = scale * (mw * rep.X1c + 1j * rep.P1)
    c2 = scale * (mw * rep.X2c + 1j * rep.P2)
    return (c1, c2)


def c_operators_primed(frame: BogoliubovFrame) -> tuple[Operator, Operator]:
    """Primed variants that annihilate the exact ground state."""
    br_pd = adjoint(frame.B_R_prime)
    c1 = (frame.B_L_prime + br_pd) / math.sqrt(2.0)
    c2 = -1j * (frame.B_L_prime - br_pd) / math.sqrt(2.0)
    return (c1, c2)


@dataclass(frozen=True)
class IntertwinerReport:
    """Residuals of the two equivalent ground-state intertwiner relations."""

    residual: float       # (1 + theta lambda_+) b psi0 = psi0 b
    tanh_residual: float  # b psi0 = -tanh(phi) psi0 b


def intertwiner_check(psi0: GroundState, lambda_plus: float, theta: float) -> IntertwinerReport:
    """Safe-block residuals of the relations tying psi0 to the bare ladder."""
    hs = psi0.psi0.space
    b = annihilator(hs.fock()).mat
    m = psi0.psi0.as_matrix()
    left = b @ m
    right = m @ b
    safe = np.arange(hs.levels - 1)
    sub = np.ix_(safe, safe)
    primary = float(np.linalg.norm(((1.0 + theta * lambda_plus) * left - right)[sub]))
    tanh_form = float(np.linalg.norm((left + math.tanh(psi0.phi) * right)[sub]))
    return IntertwinerReport(residual=primary, tanh_residual=tanh_form)
