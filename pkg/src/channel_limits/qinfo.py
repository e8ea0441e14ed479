"""Finite-dimensional quantum information: entropies, Holevo bounds and
two-way information across a shared channel.

Entropies are in bits. A two-way channel carries right-moving states from
the left station (first tensor factor) and left-moving states from the
right station (second factor). The right detector acts on the first factor,
the left detector on the second, and an optional unitary scattering operator
mixes the two before detection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import DimensionError, InvariantError, ResourceLimitError

TOL = 1e-10
PROB_TOL = 1e-12
HOLEVO_SLACK = 1e-9
FOCK_MAX_N = 40


# --------------------------------------------------------------------------
# validation helpers

def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def check_density(rho, tol: float = TOL) -> np.ndarray:
    """Return ``rho`` as a complex array after checking Hermiticity, unit
    trace and positivity (eigenvalues above ``-tol``)."""
    rho = _as_matrix(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvariantError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvariantError(f"density matrix has trace {np.trace(rho).real:.12g}")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise InvariantError("density matrix has a negative eigenvalue")
    return rho


def check_distribution(p, tol: float = PROB_TOL) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvariantError("probability vector must be one-dimensional and non-empty")
    if np.any(p < -tol) or not np.all(np.isfinite(p)) or abs(p.sum() - 1.0) > tol:
        raise InvariantError("not a probability distribution")
    return np.clip(p, 0.0, None)


def check_unitary(u, tol: float = TOL) -> np.ndarray:
    u = _as_matrix(u)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > tol:
        raise InvariantError("scattering operator is not unitary")
    return u


# --------------------------------------------------------------------------
# domain types

@dataclass(frozen=True, eq=False)
class Ensemble:
    """Letters ``a`` sent with probability ``probs[a]`` as state ``states[a]``."""

    probs: np.ndarray
    states: tuple

    def __post_init__(self):
        probs = check_distribution(self.probs)
        states = tuple(check_density(s) for s in self.states)
        if len(states) != probs.size:
            raise DimensionError("need one state per probability")
        if len({s.shape for s in states}) != 1:
            raise DimensionError("all letter states must share one dimension")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    @property
    def mean_state(self) -> np.ndarray:
        return np.einsum("a,aij->ij", self.probs, np.stack(self.states))


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple

    def __post_init__(self):
        elems = tuple(_as_matrix(e) for e in self.elements)
        if not elems or len({e.shape for e in elems}) != 1:
            raise DimensionError("POVM needs at least one element, all the same shape")
        for e in elems:
            if np.max(np.abs(e - e.conj().T)) > TOL or np.linalg.eigvalsh(e).min() < -TOL:
                raise InvariantError("POVM element is not Hermitian positive semidefinite")
        if np.max(np.abs(sum(elems) - np.eye(elems[0].shape[0]))) > TOL:
            raise InvariantError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", elems)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True, eq=False)
class TwoWayChannel:
    left: Ensemble
    right: Ensemble
    scattering: np.ndarray
    right_detector: Povm
    left_detector: Povm

    def __post_init__(self):
        s = check_unitary(self.scattering)
        if s.shape[0] != self.left.dim * self.right.dim:
            raise DimensionError("scattering dimension must be d_L * d_R")
        if self.right_detector.dim != self.left.dim:
            raise DimensionError("right detector acts on the right-moving (first) factor")
        if self.left_detector.dim != self.right.dim:
            raise DimensionError("left detector acts on the left-moving (second) factor")
        object.__setattr__(self, "scattering", s)


def pure_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def basis_projectors(dim: int) -> list:
    return [pure_state(np.eye(dim)[i]) for i in range(dim)]


# --------------------------------------------------------------------------
# classical and quantum entropies

def shannon_entropy(p) -> float:
    p = check_distribution(p, tol=TOL)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def mutual_information(conditional, prior) -> float:
    """``H(B;A)`` in bits for channel rows ``conditional[a, b] = p(b|a)``."""
    prior = check_distribution(prior, tol=TOL)
    cond = np.asarray(conditional, dtype=float)
    if cond.ndim != 2 or cond.shape[0] != prior.size:
        raise DimensionError("conditional must have one row per input letter")
    if np.any(cond < -TOL) or np.max(np.abs(cond.sum(axis=1) - 1.0)) > TOL:
        raise InvariantError("conditional rows must be probability distributions")
    cond = np.clip(cond, 0.0, None)
    joint = prior[:, None] * cond
    p_b = joint.sum(axis=0)
    mask = joint > 0.0
    ratio = np.where(mask, cond, 1.0) / np.where(mask, p_b[None, :], 1.0)
    return float(np.sum(np.where(mask, joint * np.log2(ratio), 0.0)))


def _entropy_of_hermitian(rho: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < -TOL:
        raise InvariantError("state has a negative eigenvalue")
    lam = lam[lam > 0.0]
    return float(-(lam * np.log2(lam)).sum())


def von_neumann_entropy(rho) -> float:
    """``-tr(rho log2 rho)``; eigenvalues in ``[-1e-10, 0]`` count as zero."""
    return _entropy_of_hermitian(check_density(rho))


def holevo_chi(e: Ensemble) -> float:
    avg = sum(p * von_neumann_entropy(s) for p, s in zip(e.probs, e.states))
    return von_neumann_entropy(e.mean_state) - avg


def povm_channel(e: Ensemble, m: Povm) -> np.ndarray:
    """Born-rule rows ``p(b|a) = tr(rho_a F_b)``."""
    if e.dim != m.dim:
        raise DimensionError("ensemble and POVM dimensions differ")
    rho = np.stack(e.states)
    f = np.stack(m.elements)
    # tr(rho F) = sum_ij rho_ij F_ji
    return np.einsum("aij,bji->ab", rho, f).real


@dataclass(frozen=True)
class HolevoCheck:
    info: float
    bound: float
    holds: bool


def verify_holevo(e: Ensemble, m: Povm) -> HolevoCheck:
    info = mutual_information(povm_channel(e, m), e.probs)
    chi = holevo_chi(e)
    return HolevoCheck(info, chi, info <= chi + HOLEVO_SLACK)


def max_entropy_attainment(rho) -> tuple:
    """Ensemble of eigenvectors of ``rho`` weighted by its eigenvalues,
    together with the projective measurement in that eigenbasis.

    The measured mutual information equals ``S(rho)``. Zero-weight
    eigenvectors (up to rounding) are dropped from the alphabet but their projectors stay in
    the POVM so that it remains complete.
    """
    rho = check_density(rho)
    lam, vecs = np.linalg.eigh(rho)
    # eigenvalues at rounding level carry no entropy worth an extra letter
    keep = lam > 64.0 * np.finfo(float).eps * lam.max()
    probs = lam[keep] / lam[keep].sum()
    states = [pure_state(vecs[:, i]) for i in np.flatnonzero(keep)]
    povm = Povm([pure_state(vecs[:, i]) for i in range(rho.shape[0])])
    return Ensemble(probs, states), povm


# --------------------------------------------------------------------------
# two-way information

def two_way_info(left: Ensemble, right: Ensemble, right_detector: Povm) -> float:
    """Net information ``H(B_R; A_L) - H(A_R)`` without interference.

    Signed: it is negative whenever the right station sends more entropy
    than the left station delivers.
    """
    if right_detector.dim != left.dim:
        raise DimensionError("right detector must act on the left ensemble's space")
    return mutual_information(povm_channel(left, right_detector), left.probs) - shannon_entropy(right.probs)


def generalized_holevo_rhs(left: Ensemble, right: Ensemble) -> float:
    return holevo_chi(left) - holevo_chi(right)


def _scattered_states(ch: TwoWayChannel) -> np.ndarray:
    s = ch.scattering
    joint = np.stack([np.kron(rl, rr) for rl in ch.left.states for rr in ch.right.states])
    return s[None] @ joint @ s.conj().T[None]


def scattered_conditionals(ch: TwoWayChannel) -> tuple:
    """``(right_cond, left_cond)`` with rows indexed by ``a_L * n_R + a_R``.

    ``right_cond[:, b_R] = tr[(F_bR x 1) S rho S^dagger]`` and
    ``left_cond[:, b_L] = tr[(1 x F_bL) S rho S^dagger]``.
    """
    sigma = _scattered_states(ch)
    dl, dr = ch.left.dim, ch.right.dim
    ident_l, ident_r = np.eye(dl), np.eye(dr)
    fr = np.stack([np.kron(f, ident_r) for f in ch.right_detector.elements])
    fl = np.stack([np.kron(ident_l, f) for f in ch.left_detector.elements])
    right = np.einsum("kij,bji->kb", sigma, fr).real
    left = np.einsum("kij,bji->kb", sigma, fl).real
    return right, left


def _joint_prior(ch: TwoWayChannel) -> np.ndarray:
    return np.outer(ch.left.probs, ch.right.probs).ravel()


def two_way_info_interference(ch: TwoWayChannel) -> float:
    """``H(B_R; A_L, A_R) - H(A_R)`` with uncorrelated inputs and scattering."""
    right, _ = scattered_conditionals(ch)
    return mutual_information(right, _joint_prior(ch)) - shannon_entropy(ch.right.probs)


def generalized_holevo2_check(ch: TwoWayChannel) -> HolevoCheck:
    info = two_way_info_interference(ch)
    rhs = holevo_chi(ch.left)
    return HolevoCheck(info, rhs, info <= rhs + HOLEVO_SLACK)


def bounce_scenario(n: int, prior_right, prior_left=None) -> TwoWayChannel:
    """Orthonormal letters on both sides, detector projectors onto the
    right-moving basis and a swap scattering that reverses every letter's
    direction. ``prior_left`` defaults to uniform."""
    if n < 2:
        raise ValueError("bounce scenario needs n >= 2 letters")
    prior_right = check_distribution(prior_right, tol=TOL)
    if prior_right.size != n:
        raise DimensionError("prior length must equal n")
    prior_left = np.full(n, 1.0 / n) if prior_left is None else prior_left
    letters = basis_projectors(n)
    swap = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            swap[j * n + i, i * n + j] = 1.0
    return TwoWayChannel(
        Ensemble(prior_left, letters),
        Ensemble(prior_right, letters),
        swap,
        Povm(letters),
        Povm(letters),
    )


def is_product_preserving(ch: TwoWayChannel, tol: float = 1e-9) -> bool:
    """Advisory check that scattering leaves every letter pair uncorrelated.

    Each scattered state is compared with the tensor product of its own
    reduced states; this also covers mixed inputs, where purity of the
    reduced states would not decide the question.
    """
    dl, dr = ch.left.dim, ch.right.dim
    for sigma in _scattered_states(ch):
        t = sigma.reshape(dl, dr, dl, dr)
        red_l = np.einsum("ijkj->ik", t)
        red_r = np.einsum("ijil->jl", t)
        if np.max(np.abs(sigma - np.kron(red_l, red_r))) > tol:
            return False
    return True


# --------------------------------------------------------------------------
# Fock letters

def _patterns(n: int, largest: int, cap: Optional[int]) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        most = n // part if cap is None else min(cap, n // part)
        for k in range(most, 0, -1):
            for rest in _patterns(n - k * part, part - 1, cap):
                yield (part,) * k + rest


def fock_letter_space(N: int, max_multiplicity: Optional[int] = None) -> list:
    """All multisets of mode indices summing to ``N`` (non-increasing tuples)
    with no index repeated more than ``max_multiplicity`` times."""
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    if N > FOCK_MAX_N:
        raise ResourceLimitError(f"N = {N} exceeds the letter-space guard {FOCK_MAX_N}")
    return list(_patterns(int(N), int(N), max_multiplicity))


def fock_uniform_ensemble(N: int, max_multiplicity: Optional[int] = None) -> Ensemble:
    """Equal-weight ensemble of orthonormal Fock letters at total energy ``N``."""
    dim = len(fock_letter_space(N, max_multiplicity))
    return Ensemble(np.full(dim, 1.0 / dim), basis_projectors(dim))


# --------------------------------------------------------------------------
# random instances for fuzzing

def random_density(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Density matrix from a complex-Gaussian purification of given rank."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with the phase convention fixed."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def _inv_sqrt(h: np.ndarray) -> np.ndarray:
    lam, v = np.linalg.eigh(h)
    return (v / np.sqrt(lam)[None, :]) @ v.conj().T


def random_povm(dim: int, outcomes: int, rng: np.random.Generator) -> Povm:
    """Random POVM ``S^{-1/2} A_i S^{-1/2}`` from random positive ``A_i``."""
    while True:
        parts = [random_density(dim, rng, rank=int(rng.integers(1, dim + 1))) for _ in range(outcomes)]
        total = sum(parts)
        lam = np.linalg.eigvalsh(total)
        # low-rank parts may not span the space; redraw until they do
        if lam.min() > 1e-6 * lam.max():
            break
    root = _inv_sqrt(total)
    elems = [root @ a @ root for a in parts]
    elems = [0.5 * (e + e.conj().T) for e in elems]
    return Povm(elems)


def random_ensemble(dim: int, letters: int, rng: np.random.Generator) -> Ensemble:
    probs = rng.dirichlet(np.ones(letters))
    states = [random_density(dim, rng, rank=int(rng.integers(1, dim + 1))) for _ in range(letters)]
    return Ensemble(probs, states)


def random_two_way_channel(dl: int, dr: int, rng: np.random.Generator) -> TwoWayChannel:
    return TwoWayChannel(
        random_ensemble(dl, int(rng.integers(1, 5)), rng),
        random_ensemble(dr, int(rng.integers(1, 5)), rng),
        random_unitary(dl * dr, rng),
        random_povm(dl, int(rng.integers(1, 5)), rng),
        random_povm(dr, int(rng.integers(1, 5)), rng),
    )
