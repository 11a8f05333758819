"""Limited-memory quasi-Newton minimization over the interior sites.

The director field lives on a product of unit spheres, handled with the
projected (transport-free) scheme: gradients are tangent at their own
iterate, search directions are projected to the current tangent space, and
every accepted step is retracted by per-site renormalization. Curvature
pairs use the ambient displacement after retraction together with the
difference of projected gradients; pairs with non-positive overlap are
skipped. A monotone Armijo backtracking line search keeps the energy
non-increasing, and any direction that fails the descent test falls back
to steepest descent.

Convergence is declared when the sup norm of the gradient of the
h^3-weighted discrete energy drops below tolerance_factor * h^3, so the
threshold tracks resolution the same way the gradient entries do.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .energy import EnergyBreakdown, GradientPair, evaluate, evaluate_with_gradient
from .lattice import DirectorField, OneFormField, boundary_mask

__all__ = [
    "NumericalError",
    "OptimizerConfig",
    "MinimizeResult",
    "grad_supnorm",
    "minimize",
]


class NumericalError(RuntimeError):
    """Raised when the energy or gradient stops being finite."""


@dataclass(frozen=True)
class OptimizerConfig:
    memory_depth: int = 10
    grad_tolerance_factor: float = 0.01
    max_iterations: int = 50000
    armijo_c1: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 40
    first_step: float = 0.1  # sup-norm scale of the very first trial step
    # cap on the sup norm of a single update: site values never jump more
    # than this per iteration, so the iterate cannot hop the lattice
    # unwinding barrier that continuous descent would respect
    max_step: float = 0.2

    def __post_init__(self):
        if self.memory_depth < 1:
            raise ValueError("memory_depth must be >= 1")
        if not self.grad_tolerance_factor > 0:
            raise ValueError("grad_tolerance_factor must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")

    def tolerance(self, spacing: float) -> float:
        return self.grad_tolerance_factor * spacing**3


@dataclass
class MinimizeResult:
    phi: DirectorField
    c: OneFormField
    energy: EnergyBreakdown
    iterations: int
    converged: bool
    final_grad_supnorm: float
    status: str  # "converged" | "max_iterations" | "line_search_failed"
    fallback_steps: int = 0


def grad_supnorm(g: GradientPair) -> float:
    """Largest absolute entry over both gradient blocks."""
    return max(float(np.max(np.abs(g.grad_phi))), float(np.max(np.abs(g.grad_c))))


class _History:
    """L-BFGS curvature pairs with the standard two-loop recursion."""

    def __init__(self, depth: int):
        self.pairs: deque = deque(maxlen=depth)

    def push(self, s: np.ndarray, y: np.ndarray) -> bool:
        sy = float(s @ y)
        if sy <= 1e-14 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            return False
        self.pairs.append((s, y, 1.0 / sy))
        return True

    def direction(self, g: np.ndarray) -> np.ndarray:
        """-H g from the two-loop recursion; -g when no history exists."""
        if not self.pairs:
            return -g
        q = g.copy()
        alphas = []
        for s, y, rho in reversed(self.pairs):
            a = rho * float(s @ q)
            q -= a * y
            alphas.append(a)
        s, y, rho = self.pairs[-1]
        gamma = float(s @ y) / float(y @ y)
        q *= gamma
        for (s, y, rho), a in zip(self.pairs, reversed(alphas)):
            b = rho * float(y @ q)
            q += (a - b) * s
        return -q


def _first_nonfinite_site(arrays: dict[str, np.ndarray]) -> str:
    for name, arr in arrays.items():
        bad = ~np.isfinite(arr)
        if bad.any():
            idx = np.unravel_index(int(np.argmax(bad)), arr.shape)
            return f"{name} at site {idx}"
    return "unlocated"


def _check_finite(
    breakdown: EnergyBreakdown, grad: GradientPair, phi: DirectorField, c: OneFormField
) -> None:
    if np.isfinite(breakdown.total) and np.isfinite(grad.grad_phi).all() and np.isfinite(
        grad.grad_c
    ).all():
        return
    where = _first_nonfinite_site(
        {"grad_phi": grad.grad_phi, "grad_c": grad.grad_c, "phi": phi.values, "c": c.values}
    )
    if where == "unlocated":
        # finite entries that overflow only when squared (huge |C|, say):
        # point at the largest-magnitude culprit instead
        arr = c.values if np.max(np.abs(c.values)) >= np.max(np.abs(phi.values)) else phi.values
        name = "c" if arr is c.values else "phi"
        idx = np.unravel_index(int(np.argmax(np.abs(arr))), arr.shape)
        where = f"{name} at site {idx} (magnitude {arr[idx]:.3e})"
    raise NumericalError(
        f"non-finite energy or gradient (total={breakdown.total}, first offender: {where})"
    )


def minimize(
    phi: DirectorField,
    c: OneFormField,
    alpha: float,
    config: OptimizerConfig | None = None,
    callback=None,
) -> MinimizeResult:
    """Drive (phi, c) to a local minimum of the energy at fixed alpha.

    Inputs are copied, boundary data is bit-preserved, phi stays unit norm
    through retraction, and the accepted-iterate energy sequence is
    non-increasing. The optional callback receives
    (iteration, total_energy, grad_supnorm) once per accepted iterate.
    """
    config = config or OptimizerConfig()
    phi.validate()
    c.validate()
    if phi.lattice != c.lattice:
        raise ValueError("phi and c live on different lattices")

    spec = phi.lattice
    mask = boundary_mask(spec)
    vacuum = phi.vacuum.copy()
    tol = config.tolerance(spec.spacing)

    phi = phi.copy()
    c = c.copy()
    nsite = phi.values.size

    def flatten(gp: GradientPair) -> np.ndarray:
        return np.concatenate([gp.grad_phi.ravel(), gp.grad_c.ravel()])

    def retracted(phi_vals, c_vals, direction, t):
        new_phi = phi_vals + t * direction[:nsite].reshape(phi_vals.shape)
        new_phi /= np.linalg.norm(new_phi, axis=-1, keepdims=True)
        new_phi[mask] = vacuum
        new_c = c_vals + t * direction[nsite:].reshape(c_vals.shape)
        new_c[mask] = 0.0
        return new_phi, new_c

    breakdown, grad = evaluate_with_gradient(phi, c, alpha)
    _check_finite(breakdown, grad, phi, c)
    sup = grad_supnorm(grad)
    history = _History(config.memory_depth)
    fallbacks = 0
    iterations = 0
    status = "max_iterations"

    if callback is not None:
        callback(0, breakdown.total, sup)
    if sup < tol:
        return MinimizeResult(phi, c, breakdown, 0, True, sup, "converged", 0)

    g_flat = flatten(grad)
    while iterations < config.max_iterations:
        d = history.direction(g_flat)
        # project the phi block to the current tangent space and freeze the shell
        d_phi = d[:nsite].reshape(phi.values.shape)
        d_phi -= np.einsum("...i,...i->...", d_phi, phi.values)[..., None] * phi.values
        d_phi[mask] = 0.0
        d[:nsite] = d_phi.ravel()
        d[nsite:].reshape(c.values.shape)[mask] = 0.0

        slope = float(g_flat @ d)
        if slope >= 0.0:
            d = -g_flat
            slope = -float(g_flat @ g_flat)
            fallbacks += 1

        d_sup = max(float(np.max(np.abs(d))), 1e-300)
        if history.pairs:
            t = min(1.0, config.max_step / d_sup)
        else:
            t = config.first_step / d_sup

        accepted = False
        for _ in range(config.max_backtracks + 1):
            trial_phi, trial_c = retracted(phi.values, c.values, d, t)
            trial_field = DirectorField(spec, trial_phi, vacuum)
            trial_form = OneFormField(spec, trial_c)
            trial_breakdown = evaluate(trial_field, trial_form, alpha)
            if not np.isfinite(trial_breakdown.total):
                t *= config.backtrack_factor
                continue
            if trial_breakdown.total <= breakdown.total + config.armijo_c1 * t * slope:
                accepted = True
                break
            t *= config.backtrack_factor
        if not accepted:
            status = "line_search_failed"
            break

        s = np.concatenate(
            [
                (trial_phi - phi.values).ravel(),
                (trial_c - c.values).ravel(),
            ]
        )
        phi = DirectorField(spec, trial_phi, vacuum)
        c = OneFormField(spec, trial_c)
        new_breakdown, new_grad = evaluate_with_gradient(phi, c, alpha)
        _check_finite(new_breakdown, new_grad, phi, c)
        new_g_flat = flatten(new_grad)
        history.push(s, new_g_flat - g_flat)

        breakdown, grad, g_flat = new_breakdown, new_grad, new_g_flat
        sup = grad_supnorm(grad)
        iterations += 1
        if callback is not None:
            callback(iterations, breakdown.total, sup)
        if sup < tol:
            status = "converged"
            break

    converged = status == "converged"
    return MinimizeResult(
        phi, c, breakdown, iterations, converged, sup, status, fallbacks
    )
