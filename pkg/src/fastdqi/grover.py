"""Exact Grover preparation of the single-constraint state |G>.

For a set S of size r in F_p the target state has amplitude
sqrt((p-r)/(p r)) on members and -sqrt(r/(p (p-r))) elsewhere. It is reached
from the uniform state |0^> by tau full Grover rounds followed by one partial
round with angles (phi, psi), plus a global phase.

The angle formulas need r/p <= 1/2. For a larger set we run the construction
on the complement and negate: g for S equals -g for the complement, since the
two-level amplitudes simply swap roles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSet, LengthMismatch, NotBalanced

_EPS = 1e-12


@dataclass(frozen=True)
class GroverAngles:
    rho: float
    theta: float
    tau: int
    beta: float
    phi: float
    psi: float
    mirrored: bool = False


def compute_angles(r: int, p: int) -> GroverAngles:
    """Angles for |S| = r out of p. If r/p > 1/2 they describe the complement."""
    if not 0 < r < p:
        raise DegenerateSet(f"need 0 < r < p, got r={r}, p={p}")
    mirrored = 2 * r > p
    rr = p - r if mirrored else r
    rho = rr / p
    if 2 * rr == p:
        theta = math.pi / 4
    else:
        theta = math.asin(math.sqrt(rho))
    tau = math.floor(math.pi / (4 * theta) + _EPS)
    beta = max(0.0, math.pi / 2 - 2 * tau * theta)
    if 2 * rr == p:
        phi = psi = math.pi / 2
    else:
        phi = math.acos(-math.tan(beta) / math.tan(2 * theta))
        psi = math.acos(min(1.0, math.sin(beta) / math.sin(2 * theta)))
    return GroverAngles(rr / p, theta, tau, beta, phi, psi, mirrored)


def uniform_state(p: int):
    return np.full(p, 1 / math.sqrt(p), dtype=complex)


def _check_len(state, p=None):
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1 or (p is not None and len(state) != p):
        raise LengthMismatch(f"expected a length-{p} vector")
    return state


def apply_diffusion(state, phi: float):
    """D^phi = |0^><0^| + e^{i phi} (I - |0^><0^|)."""
    state = _check_len(state)
    proj = np.full_like(state, state.mean())
    return proj + np.exp(1j * phi) * (state - proj)


def _membership(S, p):
    mask = np.zeros(p, dtype=bool)
    idx = np.fromiter((int(z) % p for z in S), dtype=np.int64)
    mask[idx] = True
    r = int(mask.sum())
    if r == 0 or r == p:
        raise DegenerateSet("S must be a nonempty proper subset of F_p")
    return mask


def apply_oracle_rotation(state, S, psi: float, p: int | None = None):
    """Multiply the amplitudes on S by e^{i psi}."""
    state = _check_len(state, p)
    mask = _membership(S, len(state))
    out = state.copy()
    out[mask] *= np.exp(1j * psi)
    return out


def g_state_direct(field, S):
    p = field.p if hasattr(field, "p") else int(field)
    mask = _membership(S, p)
    r = int(mask.sum())
    inside = math.sqrt(p - r) / math.sqrt(p * r)
    outside = -math.sqrt(r) / math.sqrt(p * (p - r))
    return np.where(mask, inside, outside).astype(float)


def _grover_sequence(mask, angles, trace=None):
    p = len(mask)
    state = uniform_state(p)
    phase_pi = np.where(mask, -1.0, 1.0)
    for _ in range(angles.tau):
        state = phase_pi * apply_diffusion(state, math.pi)
        if trace is not None:
            trace.append(state)
    state = apply_diffusion(state, angles.phi)
    if trace is not None:
        trace.append(state)
    state = np.where(mask, np.exp(1j * (math.pi + 2 * angles.psi)), 1.0) * state
    return np.exp(1j * (math.pi - angles.psi)) * state


def g_state_exact_grover(field, S, trace: list | None = None):
    """Apply e^{i(pi-psi)} Xi^{pi+2psi} D^phi (Xi^pi D^pi)^tau to the uniform state.

    ``trace`` (if given) collects the intermediate states for subspace checks.
    """
    p = field.p if hasattr(field, "p") else int(field)
    mask = _membership(S, p)
    angles = compute_angles(int(mask.sum()), p)
    if angles.mirrored:
        return -_grover_sequence(~mask, angles, trace)
    return _grover_sequence(mask, angles, trace)


def g_state_approx(field, S):
    """-Xi^pi |0^>, the one-call approximation for |S| = (p-1)/2."""
    p = field.p if hasattr(field, "p") else int(field)
    mask = _membership(S, p)
    if 2 * int(mask.sum()) != p - 1:
        raise NotBalanced(f"need |S| = (p-1)/2 = {(p - 1) // 2}, got {int(mask.sum())}")
    return -np.where(mask, -1.0, 1.0) / math.sqrt(p)


def approx_overlap(p: int) -> float:
    """<G|G~> in the balanced case, sqrt(1 - 1/p^2)."""
    return math.sqrt(1 - 1 / p**2)


def approx_pipeline_distance(p: int, q_weight: float) -> float:
    """Distance between the exact and approximate product states over p-1 constraints.

    Their overlap is (1 - q + q sqrt(1 - 1/p^2))^(p-1); the logarithms keep
    full precision when 1/p^2 is tiny.
    """
    if not 0 <= q_weight <= 1:
        raise ValueError("q_weight must lie in [0, 1]")
    x = 1 / p**2
    gap = x / (1 + math.sqrt(1 - x))  # 1 - sqrt(1 - x)
    log_overlap = (p - 1) * math.log1p(-q_weight * gap)
    return math.sqrt(max(0.0, -2 * math.expm1(log_overlap)))


def approx_pipeline_bound(p: int, q_weight: float) -> float:
    x = 1 / p**2
    return math.sqrt(2 * q_weight * p * x / (1 + math.sqrt(1 - x)))
