"""Quadrature grids and dense numerical kernels used by every other module.

Grids are immutable value objects pairing nodes with strictly positive
weights that integrate a tagged reference measure:

* ``v``          normalized area measure on a disk/annulus (total mass R^2
                 on the disk of radius R inside the unit disk),
* ``lebesgue``   plain planar Lebesgue measure,
* ``hyperbolic`` the invariant measure (1-|z|^2)^(-2) dv on the unit disk,
* ``s``          normalized arclength on the unit circle.

The radial rule is Gauss-Legendre mapped to the radial interval with the
Jacobian of the tagged measure folded into the weights, so radial moments
are integrated exactly up to degree 2*n_radial - 1; the angular rule is
equispaced, exact for trigonometric polynomials of degree < n_angular.
All operations are pure; reductions use numpy's pairwise summation and are
bit-stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError, ParameterError

__all__ = [
    "QuadratureGrid",
    "build_disk_grid",
    "build_annulus_grid",
    "build_circle_grid",
    "build_interval_grid",
    "build_box_grid",
    "integrate",
    "singular_values",
    "dft",
    "idft",
]

_MEASURES = ("v", "lebesgue", "hyperbolic", "s")


@lru_cache(maxsize=128)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _leggauss_on(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _leggauss(n)
    return 0.5 * (b - a) * (x + 1.0) + a, 0.5 * (b - a) * w


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes, positive weights and the reference measure they integrate."""

    nodes: np.ndarray
    weights: np.ndarray
    domain_tag: str
    measure_tag: str
    reference_measure: float

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape[0] != weights.shape[0]:
            raise ParameterError("node count must equal weight count")
        if not np.all(weights > 0.0):
            raise ParameterError("quadrature weights must be strictly positive")
        total = float(np.sum(weights))
        if self.reference_measure > 0 and not np.isclose(
            total, self.reference_measure, rtol=1e-10, atol=0.0
        ):
            raise ParameterError(
                f"weights sum {total!r} does not match the measure of "
                f"{self.domain_tag} ({self.reference_measure!r})"
            )
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        nodes.setflags(write=False)
        weights.setflags(write=False)

    @property
    def grid_id(self) -> str:
        return f"{self.domain_tag}|{self.measure_tag}|{self.nodes.shape[0]}"

    def __len__(self) -> int:
        return int(self.nodes.shape[0])


def _radial_measure_factor(r: np.ndarray, measure: str) -> np.ndarray:
    # density of the tagged measure against r dr dtheta, times the angular
    # normalization (2*pi for lebesgue, 1/pi folded below for v/hyperbolic)
    if measure == "v":
        return 2.0 * r
    if measure == "lebesgue":
        return 2.0 * np.pi * r
    if measure == "hyperbolic":
        return 2.0 * r / (1.0 - r * r) ** 2
    raise ParameterError(f"unsupported planar measure {measure!r}")


def _annular_reference(r0: float, r1: float, measure: str) -> float:
    if measure == "v":
        return r1 * r1 - r0 * r0
    if measure == "lebesgue":
        return np.pi * (r1 * r1 - r0 * r0)
    if measure == "hyperbolic":
        return r1 * r1 / (1.0 - r1 * r1) - r0 * r0 / (1.0 - r0 * r0)
    raise ParameterError(f"unsupported planar measure {measure!r}")


def _graded_breaks(r0, r1):
    """Panel boundaries refining log-uniformly toward the unit circle."""
    g0, g1 = 1.0 - r0, 1.0 - r1
    decades = max(1, int(math.ceil(math.log10(g0 / g1))))
    return [1.0 - g0 * (g1 / g0) ** (j / decades) for j in range(decades + 1)]


def _radial_rule(r0, r1, n_radial, graded):
    if not graded:
        return _leggauss_on(r0, r1, n_radial)
    breaks = _graded_breaks(r0, r1)
    parts = [_leggauss_on(a, b, n_radial) for a, b in zip(breaks, breaks[1:])]
    return (
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
    )


def _polar_grid(r0, r1, n_radial, n_angular, measure, domain_tag, graded=False):
    r, wr = _radial_rule(r0, r1, n_radial, graded)
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    phases = np.exp(1j * theta)
    nodes = (r[:, None] * phases[None, :]).ravel()
    radial_w = wr * _radial_measure_factor(r, measure) / n_angular
    weights = np.repeat(radial_w, n_angular)
    return QuadratureGrid(
        nodes=nodes,
        weights=weights,
        domain_tag=domain_tag,
        measure_tag=measure,
        reference_measure=_annular_reference(r0, r1, measure),
    )


def build_disk_grid(n_radial, n_angular, radius=1.0, measure="v", graded=False):
    """Tensor Gauss-Legendre x equispaced-angle grid on a centered disk.

    ``graded`` switches the radial rule to a composite one whose panels
    refine geometrically toward the unit circle (n_radial nodes each),
    which keeps near-boundary invariant-measure weights accurate when
    ``radius`` is very close to 1.
    """
    if n_radial < 2 or n_angular < 4:
        raise ParameterError("need n_radial >= 2 and n_angular >= 4")
    if not 0.0 < radius <= 1.0 + 1e-12 and measure != "lebesgue":
        raise ParameterError("disk radius must lie in (0, 1] for ball measures")
    if radius <= 0.0:
        raise ParameterError("disk radius must be positive")
    if measure == "hyperbolic" and radius >= 1.0:
        raise DomainError(
            "the hyperbolic measure of the full disk is infinite; use radius < 1"
        )
    if graded and radius >= 1.0:
        raise ParameterError("graded rules are for radii strictly inside the disk")
    return _polar_grid(
        0.0, radius, n_radial, n_angular, measure, f"disk({radius:g})", graded
    )


def build_annulus_grid(r_inner, r_outer, n_radial, n_angular, measure="v"):
    """Polar grid on the annulus r_inner < |z| < r_outer."""
    if n_radial < 2 or n_angular < 4:
        raise ParameterError("need n_radial >= 2 and n_angular >= 4")
    if not 0.0 <= r_inner < r_outer:
        raise ParameterError("annulus requires 0 <= r_inner < r_outer")
    if measure == "hyperbolic" and r_outer >= 1.0:
        raise DomainError("hyperbolic annuli must stay strictly inside the disk")
    return _polar_grid(
        r_inner, r_outer, n_radial, n_angular, measure,
        f"annulus({r_inner:g},{r_outer:g})",
    )


def build_circle_grid(n):
    """n equispaced unit-circle nodes weighted by normalized arclength."""
    if n < 4:
        raise ParameterError("circle grids need at least 4 nodes")
    nodes = np.exp(2j * np.pi * np.arange(n) / n)
    weights = np.full(n, 1.0 / n)
    return QuadratureGrid(nodes, weights, "circle", "s", 1.0)


def build_interval_grid(a, b, n):
    """Gauss-Legendre rule on a real interval."""
    if n < 2:
        raise ParameterError("interval grids need at least 2 nodes")
    if not a < b:
        raise ParameterError("interval requires a < b")
    x, w = _leggauss_on(a, b, n)
    return QuadratureGrid(x, w, f"interval({a:g},{b:g})", "lebesgue", b - a)


def build_box_grid(half_width, n_side):
    """Uniform midpoint rule on the square [-R, R]^2 (complex nodes)."""
    if n_side < 2:
        raise ParameterError("box grids need at least 2 nodes per side")
    if half_width <= 0:
        raise ParameterError("box half_width must be positive")
    h = 2.0 * half_width / n_side
    ax = -half_width + h * (np.arange(n_side) + 0.5)
    nodes = (ax[:, None] + 1j * ax[None, :]).ravel()
    weights = np.full(n_side * n_side, h * h)
    return QuadratureGrid(
        nodes, weights, f"plane_box({half_width:g})", "lebesgue",
        (2.0 * half_width) ** 2,
    )


def _field_values(grid, field):
    if callable(field):
        values = np.asarray(field(grid.nodes), dtype=complex)
        if values.shape != grid.nodes.shape:
            values = np.array([field(z) for z in grid.nodes], dtype=complex)
    else:
        values = np.asarray(field, dtype=complex)
        if values.shape[0] != len(grid):
            raise ParameterError("field values must align with grid nodes")
    return values


def integrate(grid, field):
    """Weighted sum of a field sampled (or evaluated) at the grid nodes."""
    values = _field_values(grid, field)
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = grid.nodes[np.argmax(bad)]
        raise NumericError(f"non-finite field value at node {node}", node=node)
    return complex(np.sum(grid.weights * values))


def singular_values(m):
    """Full singular spectrum of a dense complex matrix, descending."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ParameterError("expected a 2-d matrix")
    if not np.all(np.isfinite(m)):
        raise NumericError("matrix has non-finite entries")
    return np.linalg.svd(m, compute_uv=False)


def _freq_axis(n, spacing):
    return np.fft.fftshift(np.fft.fftfreq(n, d=spacing))


def dft(samples, spacing, origin=None):
    """Centered discrete approximation of the e^{-2 pi i x xi} transform.

    ``samples[j]`` is the value at ``x_j = origin + j*spacing``; when
    ``origin`` is omitted the window is assumed centered at zero,
    ``origin = -(n//2)*spacing``.  Returns ``(frequencies, spectrum)`` with
    frequencies ascending about 0.  The grid Plancherel identity
    ``spacing*sum|samples|^2 == dxi*sum|spectrum|^2`` holds to rounding.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 1 or samples.shape[0] < 2:
        raise ParameterError("need a 1-d signal with at least 2 samples")
    if spacing <= 0:
        raise ParameterError("spacing must be positive")
    n = samples.shape[0]
    if origin is None:
        origin = -(n // 2) * spacing
    freqs = _freq_axis(n, spacing)
    spectrum = spacing * np.exp(-2j * np.pi * origin * freqs) * np.fft.fftshift(
        np.fft.fft(samples)
    )
    return freqs, spectrum


def idft(spectrum, spacing, origin=None):
    """Inverse of :func:`dft` with matching conventions."""
    spectrum = np.asarray(spectrum, dtype=complex)
    n = spectrum.shape[0]
    if n < 2:
        raise ParameterError("need at least 2 spectral samples")
    if spacing <= 0:
        raise ParameterError("spacing must be positive")
    if origin is None:
        origin = -(n // 2) * spacing
    freqs = _freq_axis(n, spacing)
    unshifted = np.fft.ifftshift(
        spectrum * np.exp(2j * np.pi * origin * freqs) / spacing
    )
    return np.fft.ifft(unshifted)
