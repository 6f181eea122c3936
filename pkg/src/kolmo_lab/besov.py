"""Derivative-weighted norms on the unit disk and their boundary tails.

The norm of order J with weight sigma combines point evaluations of the
derivatives below order J at a base point with weighted integrals of the
order-J derivatives:

    ( sum_{|beta|<J} |f^(beta)(z0)|^p
      + sum_{|alpha|=J} int |f^(alpha)|^p sigma dv )^(1/p)

where dv is the normalized area measure of the disk and sigma is a
positive integrable density against dv.  Radial-power presets recover the
classical scales: J = 0 with sigma == 1 is the unweighted p-norm, the
weight (1-|z|^2)^(2J-1) gives the boundary-circle norm up to equivalence,
and (1-|z|^2)^(pJ-(n+1)) the Dirichlet-type scale.

Tails integrate the same order-J derivative data over the boundary collar
{1 - delta <= |z| < 1}; their decay as delta shrinks, uniformly over a
family, is the compactness functional.  Derivatives of coefficient
representations are exact coefficient shifts; sampled representations must
supply derivative samplers explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import ParameterError
from .frames import TailProfile
from .numerics import build_annulus_grid, build_disk_grid
from .spaces import SpaceSpec

__all__ = [
    "BesovSpec",
    "taylor_coefficients",
    "multi_indices",
    "besov_norm",
    "besov_tail",
    "bp_admissibility",
    "family_besov_profile",
    "pointwise_domination_constant",
]


@dataclass(frozen=True)
class BesovSpec:
    """Exponent, derivative order, weight and base point of the norm."""

    p: float = 2.0
    order: int = 0                      # derivative order J
    weight_kind: str = "radial_power"   # or "custom"
    weight_exponent: float = 0.0        # t in (1-|z|^2)^t
    weight_fn: Optional[Callable] = None
    base_point: complex = 0.0           # where the low-order terms evaluate
    dim: int = 1

    def __post_init__(self):
        if self.p < 1.0:
            raise ParameterError("exponent p must be >= 1")
        if self.order < 0:
            raise ParameterError("derivative order must be nonnegative")
        if self.weight_kind not in ("radial_power", "custom"):
            raise ParameterError(f"unknown weight kind {self.weight_kind!r}")
        if self.weight_kind == "custom" and self.weight_fn is None:
            raise ParameterError("custom weights need a callable")
        if self.weight_kind == "radial_power" and self.weight_exponent <= -1.0:
            raise ParameterError("radial powers need t > -1 to be integrable")
        if abs(self.base_point) >= 1.0:
            raise ParameterError("the base point must lie inside the disk")

    def weight_values(self, nodes):
        if self.weight_kind == "radial_power":
            return (1.0 - np.abs(nodes) ** 2) ** self.weight_exponent
        return np.asarray(self.weight_fn(nodes), dtype=float)

    # presets for the classical scales (dimension 1)

    @staticmethod
    def bergman_radial(t=0.0, p=2.0):
        return BesovSpec(p=p, order=0, weight_exponent=t)

    @staticmethod
    def hardy(order=1):
        if order < 1:
            raise ParameterError("the boundary-equivalent norm needs J >= 1")
        return BesovSpec(p=2.0, order=order, weight_exponent=2 * order - 1)

    @staticmethod
    def dirichlet(p=2.0, order=1, dim=1):
        if order <= dim / p:
            raise ParameterError("the Dirichlet-type scale needs J > n/p")
        return BesovSpec(p=p, order=order, weight_exponent=p * order - (dim + 1))


def multi_indices(n, k):
    """All multi-indices of length n with |alpha| = k."""
    if n < 1 or k < 0:
        raise ParameterError("need n >= 1 and k >= 0")
    out = []
    for comb in combinations_with_replacement(range(n), k):
        alpha = [0] * n
        for i in comb:
            alpha[i] += 1
        out.append(tuple(alpha))
    return out


def taylor_coefficients(f, space=None):
    """Taylor coefficients of a coefficient representation.

    The reference bases of the disk spaces are scaled monomials, so the
    conversion is a diagonal rescaling; a plain Hardy basis is assumed
    when no space is given.
    """
    if f.coeffs is None:
        raise ParameterError("need a coefficient representation")
    if space is None:
        space = SpaceSpec.hardy()
    c = np.asarray(f.coeffs, dtype=complex)
    j = np.arange(c.shape[0])
    if space.kind == "bergman":
        return c * np.sqrt(j + 1.0)
    if space.kind == "hardy":
        return c.copy()
    if space.kind == "fock":
        al = space.fock_alpha
        log_scale = 0.5 * ((j + 1) * math.log(al) - math.log(math.pi) - gammaln(j + 1))
        return c * np.exp(log_scale)
    raise ParameterError(f"no monomial basis for space kind {space.kind!r}")


def _derivative_taylor(taylor, k):
    """Taylor coefficients of the k-th derivative."""
    if k == 0:
        return taylor
    n = taylor.shape[0]
    if k >= n:
        return np.zeros(1, dtype=complex)
    j = np.arange(n - k)
    log_fact = np.zeros(n - k)
    for i in range(k):
        log_fact += np.log(j + k - i)
    return taylor[k:] * np.exp(log_fact)


def _eval_taylor(taylor, z):
    z = np.asarray(z, dtype=complex)
    powers = z[..., None] ** np.arange(taylor.shape[0])
    return powers @ taylor


def _derivative_values(spec, f, space, derivatives, order, nodes):
    if derivatives is not None:
        if len(derivatives) <= order:
            raise ParameterError("missing derivative data for the sampled representation")
        return np.asarray(derivatives[order](nodes), dtype=complex)
    if f.coeffs is None:
        if order == 0:
            return np.asarray(f.sampler(nodes), dtype=complex)
        raise ParameterError("missing derivative data for the sampled representation")
    taylor = taylor_coefficients(f, space)
    return _eval_taylor(_derivative_taylor(taylor, order), nodes)


def _default_disk_grid(resolution=1):
    return build_disk_grid(256 * resolution, 512 * resolution, 1.0, measure="v")


def besov_norm(spec, f, space=None, grid=None, derivatives=None):
    """Weighted derivative norm of order J (see module docstring)."""
    if spec.dim != 1:
        raise ParameterError("norm evaluation is provided in dimension 1")
    if grid is None:
        grid = _default_disk_grid()
    J, p = spec.order, spec.p
    point_terms = 0.0
    for beta in range(J):
        val = _derivative_values(
            spec, f, space, derivatives, beta, np.array([spec.base_point])
        )[0]
        point_terms += abs(val) ** p
    deriv = _derivative_values(spec, f, space, derivatives, J, grid.nodes)
    sigma = spec.weight_values(grid.nodes)
    integral = float(np.real(np.sum(grid.weights * sigma * np.abs(deriv) ** p)))
    return (point_terms + integral) ** (1.0 / p)


def besov_tail(spec, f, delta, space=None, grid=None, derivatives=None):
    """Order-J derivative mass on the boundary collar of width delta."""
    if not 0.0 < delta < 1.0:
        raise ParameterError("delta must lie in (0, 1)")
    if spec.dim != 1:
        raise ParameterError("tail evaluation is provided in dimension 1")
    if grid is None:
        grid = build_annulus_grid(1.0 - delta, 1.0, 256, 512, measure="v")
    deriv = _derivative_values(spec, f, space, derivatives, spec.order, grid.nodes)
    sigma = spec.weight_values(grid.nodes)
    return float(np.real(np.sum(grid.weights * sigma * np.abs(deriv) ** spec.p)))


def bp_admissibility(p, spec_or_t, resolution=1):
    """Quadrature probe of the weight and its dual integrability.

    Evaluates int sigma dv and int sigma^(-1/(p-1)) dv on two nested grids;
    an integral whose relative change across refinement exceeds 5% is
    flagged as divergent rather than raising.  This is the necessary
    two-integral condition, not a full averaged-weight characterization.
    """
    if p <= 1.0:
        raise ParameterError("the dual exponent needs p > 1")
    if isinstance(spec_or_t, BesovSpec):
        spec = spec_or_t
    else:
        spec = BesovSpec(p=p, weight_exponent=float(spec_or_t))

    def both(grid):
        sigma = spec.weight_values(grid.nodes)
        dual = sigma ** (-1.0 / (p - 1.0))
        return (
            float(np.sum(grid.weights * sigma)),
            float(np.sum(grid.weights * dual)),
        )

    coarse = both(_default_disk_grid(resolution))
    fine = both(_default_disk_grid(2 * resolution))

    def stable(a, b):
        return math.isfinite(b) and abs(b - a) <= 0.05 * max(abs(b), 1e-300)

    sigma_ok = stable(coarse[0], fine[0])
    dual_ok = stable(coarse[1], fine[1])
    return {
        "sigma_integral": fine[0],
        "dual_integral": fine[1],
        "sigma_converged": sigma_ok,
        "dual_converged": dual_ok,
        "admissible_hint": bool(sigma_ok and dual_ok),
    }


def family_besov_profile(spec, family, deltas, space=None, derivatives_by_member=None):
    """Supremum of tails over a finite family along a delta schedule.

    The schedule lists shrinking collar widths, so the profile is
    nonincreasing level by level.
    """
    family = list(family)
    if not family:
        raise ParameterError("the family must be nonempty")
    deltas = [float(d) for d in deltas]
    if not deltas or any(not 0.0 < d < 1.0 for d in deltas):
        raise ParameterError("deltas must lie in (0, 1)")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ParameterError("the delta schedule must strictly decrease")
    grid_id = None
    values = []
    for d in deltas:
        grid = build_annulus_grid(1.0 - d, 1.0, 256, 512, measure="v")
        grid_id = grid.grid_id
        level = 0.0
        for k, f in enumerate(family):
            derivs = None if derivatives_by_member is None else derivatives_by_member[k]
            level = max(
                level, besov_tail(spec, f, d, space=space, grid=grid, derivatives=derivs)
            )
        values.append(level)
    return TailProfile(
        values=tuple(values),
        radii=tuple(deltas),
        family_size=len(family),
        grid_id=grid_id,
        p=spec.p,
    )


def pointwise_domination_constant(spec, family, compact_radius=0.5, space=None, grid=None):
    """Measured constant C with max_K |f|^p <= C * int |f|^p sigma dv.

    K is the closed disk of the given radius; the value is an empirical
    ratio over the family, intended for stability reporting rather than as
    a certified bound.
    """
    if grid is None:
        grid = _default_disk_grid()
    if not family:
        raise ParameterError("the family must be nonempty")
    theta = np.exp(2j * np.pi * np.arange(128) / 128)
    boundary = compact_radius * theta
    worst = 0.0
    for f in family:
        values = f.evaluate(space or SpaceSpec.hardy(), boundary)
        sup_k = float(np.max(np.abs(values)) ** spec.p)
        sigma = spec.weight_values(grid.nodes)
        fv = f.evaluate(space or SpaceSpec.hardy(), grid.nodes)
        mass = float(np.real(np.sum(grid.weights * sigma * np.abs(fv) ** spec.p)))
        if mass > 0:
            worst = max(worst, sup_k / mass)
    return worst
