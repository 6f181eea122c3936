"""Concrete function spaces and the invariant geometry of the unit ball.

Supported space kinds and their reference orthonormal bases (dimension 1):

* ``bergman``       weighted Bergman space on the unit disk, basis
                    ``e_j(z) = sqrt(j+1) z^j`` (unweighted case t = 0),
* ``hardy``         Hardy space with the boundary-circle inner product,
                    basis ``e_j(z) = z^j``,
* ``fock``          Gaussian-weighted entire functions with weight
                    ``exp(-alpha |z|^2)``, basis
                    ``e_j(z) = sqrt(alpha^(j+1)/(pi j!)) z^j``,
* ``paley_wiener``  band-limited square-integrable functions on the line,
                    shifted-sinc basis at critical spacing,
* ``besov_sobolev`` derivative-weighted norms handled by :mod:`kolmo_lab.besov`.

Formulas accept ambient dimension n >= 1 (points become length-n complex
vectors); n = 1 is the fully exercised path.  Everything here is pure and
all value types are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NumericError, ParameterError
from .numerics import build_circle_grid, build_disk_grid

__all__ = [
    "SpaceSpec",
    "FunctionRep",
    "kernel_eval",
    "normalized_kernel_eval",
    "kernel_norm",
    "mobius",
    "bergman_distance",
    "hyperbolic_ball_measure",
    "basis_eval",
    "basis_matrix",
    "space_norm",
    "gram_matrix",
    "default_grid",
]

_KINDS = ("bergman", "hardy", "fock", "paley_wiener", "besov_sobolev")

FOCK_TRUNCATION_RADIUS = 6.0  # Gaussian tail beyond |z|=6 is < 1e-45


@dataclass(frozen=True)
class SpaceSpec:
    """Immutable description of a function space."""

    kind: str
    dim: int = 1
    p: float = 2.0
    bergman_t: float = 0.0       # radial weight exponent, must exceed -1
    deriv_order: int = 0         # derivative order J for besov_sobolev
    band_halfwidth: float = 0.5  # spectral half-width a for paley_wiener
    fock_alpha: float = math.pi  # Gaussian weight exp(-alpha |z|^2)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown space kind {self.kind!r}")
        if self.dim < 1:
            raise ParameterError("ambient dimension must be >= 1")
        if self.p < 1.0:
            raise ParameterError("exponent p must be >= 1")
        if self.kind == "bergman" and self.bergman_t <= -1.0:
            raise ParameterError("Bergman weight exponent must satisfy t > -1")
        if self.deriv_order < 0 or self.deriv_order != int(self.deriv_order):
            raise ParameterError("derivative order must be a nonnegative integer")
        if self.band_halfwidth <= 0.0:
            raise ParameterError("band half-width must be positive")
        if self.fock_alpha <= 0.0:
            raise ParameterError("Gaussian weight parameter must be positive")

    @staticmethod
    def bergman(t=0.0, p=2.0, dim=1):
        return SpaceSpec("bergman", dim=dim, p=p, bergman_t=t)

    @staticmethod
    def hardy(dim=1):
        return SpaceSpec("hardy", dim=dim)

    @staticmethod
    def fock(alpha=math.pi, dim=1):
        return SpaceSpec("fock", dim=dim, fock_alpha=alpha)

    @staticmethod
    def paley_wiener(a=0.5):
        return SpaceSpec("paley_wiener", band_halfwidth=a)


@dataclass(frozen=True)
class FunctionRep:
    """A space element held as basis coefficients, a sampler, or both."""

    coeffs: Optional[np.ndarray] = None
    sampler: Optional[Callable] = None

    def __post_init__(self):
        if self.coeffs is None and self.sampler is None:
            raise ParameterError("need basis coefficients or a sampler")
        if self.coeffs is not None:
            c = np.asarray(self.coeffs, dtype=complex)
            if c.ndim != 1 or c.shape[0] == 0:
                raise ParameterError("coefficients must form a nonempty vector")
            object.__setattr__(self, "coeffs", c)
            c.setflags(write=False)

    @property
    def degree(self):
        return None if self.coeffs is None else self.coeffs.shape[0] - 1

    def evaluate(self, space, z):
        """Pointwise values, preferring the coefficient expansion."""
        if self.coeffs is not None:
            b = basis_matrix(space, self.coeffs.shape[0] - 1, z)
            return b @ self.coeffs
        values = self.sampler(z)
        return np.asarray(values, dtype=complex)

    def consistency_defect(self, space, grid):
        """Max disagreement of the two representations at grid nodes."""
        if self.coeffs is None or self.sampler is None:
            return 0.0
        via_coeffs = self.evaluate(space, grid.nodes)
        via_sampler = np.asarray(self.sampler(grid.nodes), dtype=complex)
        return float(np.max(np.abs(via_coeffs - via_sampler)))


def _point_abs2(pt):
    """Squared norm of a single point (1-d arrays are vectors in C^n)."""
    pt = np.asarray(pt)
    if pt.ndim == 1 and pt.shape[0] > 1:
        return float(np.sum(np.abs(pt) ** 2))
    return np.abs(pt) ** 2


def _check_in_ball(pt, what="point"):
    if np.any(_point_abs2(pt) >= 1.0):
        raise DomainError(f"{what} must lie strictly inside the unit ball")


def kernel_eval(space, z, w):
    """Reproducing kernel K_w(z) in closed form.

    Bergman: (1 - z.conj(w))^-(n+1); Hardy/Szego: (1 - z.conj(w))^-n;
    Fock: (alpha/pi)^n exp(alpha z.conj(w)); Paley-Wiener on [-a, a]:
    2a sinc(2a (x - y)).  Integer kernel powers are evaluated as integer
    powers of the base, so no branch cuts arise.
    """
    kind = space.kind
    pair = _space_pairing(space, z, w)
    if kind == "paley_wiener":
        a = space.band_halfwidth
        return 2.0 * a * np.sinc(2.0 * a * (np.asarray(z, dtype=float) - w))
    if kind == "fock":
        al = space.fock_alpha
        return (al / np.pi) ** space.dim * np.exp(al * pair)
    if kind in ("bergman", "hardy"):
        base = 1.0 - pair
        if np.any(np.abs(1.0 - base) >= 1.0):
            raise DomainError("kernel pairing |z.conj(w)| must stay below 1")
        power = space.dim + 1 if kind == "bergman" else space.dim
        return 1.0 / base ** power
    raise ParameterError(f"no closed-form kernel for space kind {kind!r}")


def _space_pairing(space, z, w):
    """Hermitian pairing z . conj(w); elementwise in dimension 1."""
    if space.dim == 1:
        return np.asarray(z) * np.conj(np.asarray(w))
    return complex(np.sum(np.asarray(z) * np.conj(np.asarray(w))))


def _space_abs2(space, w):
    if space.dim == 1:
        return np.abs(np.asarray(w)) ** 2
    return float(np.sum(np.abs(np.asarray(w)) ** 2))


def kernel_norm(space, w):
    """Norm of the reproducing kernel at w, i.e. sqrt(K(w, w))."""
    kind = space.kind
    if kind == "bergman":
        return (1.0 - _space_abs2(space, w)) ** (-(space.dim + 1) / 2.0)
    if kind == "hardy":
        return (1.0 - _space_abs2(space, w)) ** (-space.dim / 2.0)
    if kind == "fock":
        al = space.fock_alpha
        return (al / np.pi) ** (space.dim / 2.0) * np.exp(
            al * _space_abs2(space, w) / 2.0
        )
    if kind == "paley_wiener":
        return math.sqrt(2.0 * space.band_halfwidth)
    raise ParameterError(f"no closed-form kernel for space kind {kind!r}")


def normalized_kernel_eval(space, z, w, p=2.0):
    """p-normalized kernel; p = 2 gives the unit-norm kernel K_w/||K_w||.

    For the Bergman space this is
    (1-|w|^2)^((n+1)/p') / (1 - z.conj(w))^(n+1) with p' = p/(p-1);
    other kinds support the Hilbert-space case p = 2 only.
    """
    kind = space.kind
    if kind == "bergman":
        if not 1.0 < p < math.inf:
            raise ParameterError("the normalized kernel needs 1 < p < infinity")
        pprime = p / (p - 1.0)
        base = 1.0 - _space_pairing(space, z, w)
        if np.any(np.abs(1.0 - base) >= 1.0):
            raise DomainError("kernel pairing |z.conj(w)| must stay below 1")
        n1 = space.dim + 1
        return (1.0 - _space_abs2(space, w)) ** (n1 / pprime) / base ** n1
    if p != 2.0:
        raise ParameterError("p-normalization is only defined for Bergman kernels")
    return kernel_eval(space, z, w) / kernel_norm(space, w)


def mobius(a, w, dim=1):
    """Involutive automorphism of the ball interchanging a and 0.

    In dimension 1 the arguments broadcast elementwise over arrays of
    disk points; for dim >= 2 both arguments are single points in C^n
    (length-n vectors, smoke-tested path).
    """
    if dim == 1:
        a_arr, w_arr = np.asarray(a), np.asarray(w)
        if np.any(np.abs(a_arr) >= 1.0):
            raise DomainError("center must lie strictly inside the unit disk")
        if np.any(np.abs(w_arr) >= 1.0):
            raise DomainError("point must lie strictly inside the unit disk")
        return (a_arr - w_arr) / (1.0 - np.conj(a_arr) * w_arr)
    a_arr = np.asarray(a, dtype=complex)
    w_arr = np.asarray(w, dtype=complex)
    _check_in_ball(a_arr, "center")
    _check_in_ball(w_arr, "point")
    aa = float(np.sum(np.abs(a_arr) ** 2))
    if aa == 0.0:
        return -w_arr
    s = math.sqrt(1.0 - aa)
    proj = (np.sum(w_arr * np.conj(a_arr)) / aa) * a_arr
    orth = w_arr - proj
    return (a_arr - proj - s * orth) / (1.0 - np.sum(w_arr * np.conj(a_arr)))


def bergman_distance(z, w, dim=1):
    """Invariant distance 0.5 log((1+q)/(1-q)) with q = |phi_z(w)|."""
    moved = mobius(z, w, dim)
    if dim == 1:
        return np.arctanh(np.abs(moved))
    return float(np.arctanh(np.linalg.norm(moved)))


def _beta_from_center(z, w_nodes):
    # vectorized distance from a fixed center to an array of disk points
    q = np.abs((z - w_nodes) / (1.0 - np.conj(z) * w_nodes))
    return np.arctanh(np.minimum(q, 1.0 - 1e-16))


def hyperbolic_ball_measure(z, r, n_angles=512, n_scan=2048):
    """Invariant-measure content of the metric ball of radius r about z.

    Polar ray scan about the origin: along every direction the ball cuts
    out one radial interval, whose endpoints are located by scan plus
    bisection on the metric alone; the radial integral of the invariant
    density then has the exact primitive 1/(2(1-rho^2)).  Nothing about
    the Euclidean shape of metric balls is assumed, so the known
    center-independence of the result is a genuine check.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("center must lie strictly inside the unit disk")
    if r <= 0.0:
        return 0.0
    rho_max = 1.0 - 1e-9
    thetas = 2.0 * np.pi * np.arange(n_angles) / n_angles
    rays = np.exp(1j * thetas)
    rho = np.linspace(0.0, rho_max, n_scan)
    inside = _beta_from_center(z, rho[None, :] * rays[:, None]) < r

    def primitive(x):
        return 0.5 / (1.0 - x * x)

    hit = np.any(inside, axis=1)
    if not np.any(hit):
        return 0.0
    first = np.argmax(inside, axis=1)
    last = n_scan - 1 - np.argmax(inside[:, ::-1], axis=1)

    def refine(inner, outer, rays_sel):
        # the crossing of beta(z, rho e^{i theta}) = r lies between an
        # inside sample and an outside sample on each selected ray
        lo, hi = inner.copy(), outer.copy()
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            is_in = _beta_from_center(z, mid * rays_sel) < r
            lo = np.where(is_in, mid, lo)
            hi = np.where(is_in, hi, mid)
        return 0.5 * (lo + hi)

    idx = np.nonzero(hit)[0]
    f, l = first[idx], last[idx]
    lower = np.where(
        f > 0, refine(rho[f], rho[np.maximum(f - 1, 0)], rays[idx]), 0.0
    )
    upper = np.where(
        l < n_scan - 1,
        refine(rho[l], rho[np.minimum(l + 1, n_scan - 1)], rays[idx]),
        rho_max,
    )
    mass = np.sum(primitive(upper) - primitive(lower))
    return float(mass * 2.0 / n_angles)


@lru_cache(maxsize=None)
def _fock_basis_lognorm(alpha, j):
    # log of sqrt(alpha^(j+1) / (pi j!))
    return 0.5 * ((j + 1) * math.log(alpha) - math.log(math.pi) - gammaln(j + 1))


def _pw_basis_center(j):
    # one-sided index interleaved over the integers: 0, 1, -1, 2, -2, ...
    return (j + 1) // 2 * (1 if j % 2 else -1) if j else 0


def basis_eval(space, j, z):
    """Value of the j-th reference orthonormal basis element."""
    if j < 0:
        raise ParameterError("basis index must be nonnegative")
    if space.dim != 1 and space.kind != "paley_wiener":
        raise ParameterError("reference bases are provided in dimension 1")
    z = np.asarray(z)
    kind = space.kind
    if kind == "bergman":
        # scaled monomials; orthonormal for the unweighted (t = 0) measure
        return math.sqrt(j + 1.0) * z ** j
    if kind == "hardy":
        return z ** j
    if kind == "fock":
        return math.exp(_fock_basis_lognorm(space.fock_alpha, j)) * z ** j
    if kind == "paley_wiener":
        a = space.band_halfwidth
        m = _pw_basis_center(j)
        return math.sqrt(2.0 * a) * np.sinc(2.0 * a * np.asarray(z, dtype=float) - m)
    raise ParameterError(f"no reference basis for space kind {kind!r}")


def basis_matrix(space, jmax, z):
    """Matrix of basis values e_j(z) for j = 0..jmax, vectorized over z."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    js = np.arange(jmax + 1)
    kind = space.kind
    if kind == "bergman":
        scale = np.sqrt(js + 1.0)
    elif kind == "hardy":
        scale = np.ones(jmax + 1)
    elif kind == "fock":
        scale = np.exp([_fock_basis_lognorm(space.fock_alpha, int(j)) for j in js])
    elif kind == "paley_wiener":
        a = space.band_halfwidth
        centers = np.array([_pw_basis_center(int(j)) for j in js])
        return math.sqrt(2.0 * a) * np.sinc(
            2.0 * a * np.real(z)[:, None] - centers[None, :]
        )
    else:
        raise ParameterError(f"no reference basis for space kind {kind!r}")
    powers = z[:, None] ** js[None, :]
    return powers * scale[None, :]


def space_weight(space, nodes):
    """Density of the space's norm integrand against the grid measure."""
    kind = space.kind
    if kind == "bergman":
        return (1.0 - np.abs(nodes) ** 2) ** space.bergman_t
    if kind == "fock":
        return np.exp(-space.fock_alpha * np.abs(nodes) ** 2)
    return np.ones_like(nodes, dtype=float)


def default_grid(space, resolution=1):
    """Default quadrature grid for the space's norm integrals."""
    n_r, n_a = 256 * resolution, 512 * resolution
    kind = space.kind
    if kind in ("bergman", "besov_sobolev"):
        return build_disk_grid(n_r, n_a, radius=1.0, measure="v")
    if kind == "hardy":
        return build_circle_grid(4096 * resolution)
    if kind == "fock":
        return build_disk_grid(
            n_r, n_a, radius=FOCK_TRUNCATION_RADIUS, measure="lebesgue"
        )
    raise ParameterError(f"no default grid for space kind {kind!r}")


def space_norm(space, f, grid=None):
    """Norm of a function representation in its space.

    Coefficient representations of Paley-Wiener elements use the exact
    orthonormal-expansion identity; everything else is a quadrature of
    the defining integral on the (default) grid.
    """
    if space.kind == "paley_wiener":
        if f.coeffs is not None:
            return float(np.linalg.norm(f.coeffs))
        raise ParameterError("sampled Paley-Wiener norms belong to the signal module")
    if grid is None:
        grid = default_grid(space)
    values = f.evaluate(space, grid.nodes)
    if not np.all(np.isfinite(values)):
        raise NumericError("function values are not finite on the grid")
    p = space.p
    weight = space_weight(space, grid.nodes)
    mass = float(np.real(np.sum(grid.weights * weight * np.abs(values) ** p)))
    return mass ** (1.0 / p)


def gram_matrix(space, jmax, grid=None):
    """Gram matrix of the reference basis under the space inner product."""
    if grid is None:
        grid = default_grid(space)
    b = basis_matrix(space, jmax, grid.nodes)
    w = grid.weights * space_weight(space, grid.nodes)
    return (b.conj().T * w) @ b
