"""Schwinger-type su(2) generators in three incarnations.

* commutative: bilinears in two independent oscillator modes on H x H,
* noncommutative: bilinears in the left/right ladder operators on the
  vectorized Hilbert-Schmidt space,
* phase4d: the fixed 4x4 matrices acting on the phase-space 4-tuple
  (x1c, x2c, p1/2, p2/2).

Also provides (j, j3) labeling of the basis lattice, the Casimir in both
its generic and closed quartic form, and the covariance diagnostics that
separate the commuting coordinates (fully SU(2)-covariant) from the
noncommuting positions (covariant only under the J3 rotation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator_core import FockSpace, Operator, adjoint, annihilator, commutator, expm, identity, tensor
from .moyal_rep import HSSpace, build_rep, restrict

__all__ = [
    "SU2Generators",
    "JLabel",
    "CovarianceCheck",
    "schwinger_commutative",
    "schwinger_from_ladders",
    "schwinger_noncommutative",
    "casimir",
    "casimir_quartic",
    "jj3_labels",
    "phase_space_generators",
    "rotation_matrix",
    "conjugate_by_rotation",
    "covariance_residual",
    "position_noncovariance",
    "adjoint_rep_matrix",
    "commutative_phase_space",
]


@dataclass(frozen=True)
class SU2Generators:
    J1: Operator
    J2: Operator
    J3: Operator
    context: str  # "commutative" | "noncommutative" | "phase4d"

    def as_tuple(self) -> tuple[Operator, Operator, Operator]:
        return (self.J1, self.J2, self.J3)

    def plus(self) -> Operator:
        return self.J1 + 1j * self.J2

    def minus(self) -> Operator:
        return self.J1 - 1j * self.J2


@dataclass(frozen=True)
class JLabel:
    """(m, n) lattice point with its angular momentum labels."""

    m: int
    n: int

    @property
    def j(self) -> float:
        return (self.m + self.n) / 2.0

    @property
    def j3(self) -> float:
        return (self.m - self.n) / 2.0


def schwinger_commutative(levels: int) -> SU2Generators:
    """Generators on H x H with a1 = b x 1 and a2 = 1 x b."""
    b = annihilator(FockSpace(levels))
    eye = identity(levels)
    a1 = tensor(b, eye)
    a2 = tensor(eye, b)
    a1d = adjoint(a1)
    a2d = adjoint(a2)
    return SU2Generators(
        J1=0.5 * (a2d @ a1 + a1d @ a2),
        J2=0.5j * (a2d @ a1 - a1d @ a2),
        J3=0.5 * (a1d @ a1 - a2d @ a2),
        context="commutative",
    )


def schwinger_from_ladders(bl: Operator, br: Operator, context: str) -> SU2Generators:
    """Generators from any ladder pair with [bl, bl^dag] = +1, [br, br^dag] = -1.

    Hyperbolically mixed (Bogoliubov) pairs satisfy the same relations, so
    this also produces the symmetry algebra of a frame-changed Hamiltonian.
    """
    bld, brd = adjoint(bl), adjoint(br)
    return SU2Generators(
        J1=0.5 * (br @ bl + bld @ brd),
        J2=0.5j * (br @ bl - bld @ brd),
        J3=0.5 * (bld @ bl - br @ brd),
        context=context,
    )


def schwinger_noncommutative(hs: HSSpace) -> SU2Generators:
    """Generators on the vectorized Hilbert-Schmidt space.

    Obtained from the commutative ones by the substitution a1 -> B_L and
    a2^dag -> B_R (the right action raises the ket-side label).
    """
    rep = build_rep(hs)
    return schwinger_from_ladders(rep.B_L, rep.B_R, "noncommutative")


def casimir(g: SU2Generators) -> Operator:
    """Quadratic Casimir J1^2 + J2^2 + J3^2."""
    return g.J1 @ g.J1 + g.J2 @ g.J2 + g.J3 @ g.J3


def casimir_quartic(hs: HSSpace) -> Operator:
    """Closed-form Casimir (1/4) K (K + 2) with K = B_L^dag B_L + B_R B_R^dag.

    Independent of :func:`casimir`; the two must agree on the safe block.
    """
    rep = build_rep(hs)
    k = rep.B_Ldag @ rep.B_L + rep.B_R @ rep.B_Rdag
    return 0.25 * (k @ (k + 2.0 * identity(hs.dim)))


def jj3_labels(levels: int) -> list[JLabel]:
    """All (m, n) labels of the truncated lattice in index order."""
    if levels < 2:
        raise ValueError("need at least 2 levels")
    return [JLabel(m, n) for m in range(levels) for n in range(levels)]


def phase_space_generators() -> SU2Generators:
    """The fixed 4x4 generators acting on (x1c, x2c, p1/2, p2/2)."""
    j1 = 0.5j * np.array(
        [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex
    )
    j2 = 0.5j * np.array(
        [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=complex
    )
    j3 = 0.5j * np.array(
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=complex
    )
    return SU2Generators(Operator(j1), Operator(j2), Operator(j3), context="phase4d")


def rotation_matrix(lam) -> np.ndarray:
    """4x4 rotation R(lambda) = exp(i lambda . J4).

    Sign convention fixed repo-wide; a test re-derives it from operator
    conjugation at small lambda instead of trusting the formula.
    """
    lam = np.asarray(lam, dtype=float)
    g4 = phase_space_generators()
    gen = sum(l * j.mat for l, j in zip(lam, g4.as_tuple()))
    return expm(Operator(1j * gen)).mat.real.copy()


def conjugate_by_rotation(gens: SU2Generators, ops, lam) -> list[Operator]:
    """Conjugate each operator: O -> exp(-i lam.J) O exp(+i lam.J)."""
    lam = np.asarray(lam, dtype=float)
    gen = sum(l * j.mat for l, j in zip(lam, gens.as_tuple()))
    u = expm(Operator(-1j * gen))
    ud = u.dag()
    return [u @ op @ ud for op in ops]


def _span_fit_residual(target: Operator, basis: list[Operator], indices: np.ndarray):
    """Least-squares expansion of target in span(basis) on a block.

    Returns (coefficients, residual norm of the unexplained part).
    """
    cols = np.column_stack([restrict(op, indices).ravel() for op in basis])
    y = restrict(target, indices).ravel()
    coeffs, *_ = np.linalg.lstsq(cols, y, rcond=None)
    resid = float(np.linalg.norm(y - cols @ coeffs))
    return coeffs, resid


@dataclass(frozen=True)
class CovarianceCheck:
    """Outcome of the finite-rotation covariance test."""

    rotation_residual: float  # max block norm of (conjugated - R(lam) . Xi)
    span_residual: float      # max least-squares residual within span(Xi)


def covariance_residual(gens: SU2Generators, basis_ops, lam, hs: HSSpace) -> CovarianceCheck:
    """Check that the 4-tuple conjugates to R(lambda) times itself.

    Finite rotations are exact only on complete (m + n <= N-2) shells, so
    the comparison block is shell-limited rather than the plain safe block.
    """
    basis_ops = list(basis_ops)
    if len(basis_ops) != 4:
        raise ValueError("need exactly four phase-space operators")
    ix = hs.complete_shell_indices
    rot = rotation_matrix(lam)
    conj = conjugate_by_rotation(gens, basis_ops, lam)
    rot_res = 0.0
    span_res = 0.0
    for a in range(4):
        target = conj[a]
        predicted = sum((rot[a, b] * basis_ops[b].mat for b in range(4)), start=np.zeros_like(target.mat))
        diff = restrict(target - Operator(predicted), ix)
        rot_res = max(rot_res, float(np.linalg.norm(diff)))
        _, resid = _span_fit_residual(target, basis_ops, ix)
        span_res = max(span_res, resid)
    return CovarianceCheck(rotation_residual=rot_res, span_residual=span_res)


def position_noncovariance(gens: SU2Generators, x1: Operator, x2: Operator, lam, hs: HSSpace) -> float:
    """Best-fit residual of the conjugated positions within span{X1, X2}.

    Near zero for pure-J3 rotations; strictly positive for generic
    rotations with a J1 or J2 component.
    """
    ix = hs.complete_shell_indices
    conj = conjugate_by_rotation(gens, [x1, x2], lam)
    worst = 0.0
    for target in conj:
        _, resid = _span_fit_residual(target, [x1, x2], ix)
        worst = max(worst, resid)
    return worst


def adjoint_rep_matrix(j_op: Operator, ops, indices: np.ndarray) -> np.ndarray:
    """4x4 matrix M with [O_a, J] = sum_b M[a, b] O_b, fitted on a block."""
    ops = list(ops)
    out = np.zeros((len(ops), len(ops)), dtype=complex)
    for a, op in enumerate(ops):
        coeffs, resid = _span_fit_residual(commutator(op, j_op), ops, indices)
        scale = max(np.linalg.norm(restrict(op, indices)), 1.0)
        if resid > 1e-10 * scale:
            raise ValueError(f"commutator does not close on the given span (residual {resid:.3e})")
        out[a] = coeffs
    return out


def commutative_phase_space(levels: int) -> tuple[Operator, Operator, Operator, Operator]:
    """Dimensionless pair-oscillator variables (x1, x2, p1, p2) on H x H."""
    b = annihilator(FockSpace(levels))
    eye = identity(levels)
    a1 = tensor(b, eye)
    a2 = tensor(eye, b)
    x1 = (a1 + adjoint(a1)) / np.sqrt(2.0)
    x2 = (a2 + adjoint(a2)) / np.sqrt(2.0)
    p1 = 1j * (adjoint(a1) - a1) / np.sqrt(2.0)
    p2 = 1j * (adjoint(a2) - a2) / np.sqrt(2.0)
    return (x1, x2, p1, p2)
