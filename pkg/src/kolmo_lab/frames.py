"""Continuous Parseval frames, tail-mass functionals and exhaustions.

A frame here is the family of (p-)normalized reproducing kernels of one of
the concrete spaces, indexed by a measure space:

* Bergman: the unit disk with the invariant measure, kernels k_z,
* Fock: the complex plane with the kernel-calibrated multiple of Lebesgue
  measure (plain Lebesgue in the classical normalization),
* Hardy: the boundary circle with normalized arclength and boundary
  evaluation as the coefficient map,
* Paley-Wiener: the line with the kernel-calibrated multiple of Lebesgue
  measure (2a dx for spectral half-width a).

The central quantity is the tail mass of the squared frame coefficients
outside a level of a nested exhaustion; its uniform decay over a family is
the desk-scale compactness functional.  The quadratic form of the
truncated frame operator reproduces the negative tail mass, and a covering
construction turns a square-integrable coefficient majorant into an
explicit finiteness certificate for separated dominated families.

Index integrals run over a truncated grid plus an explicitly accounted
outer remainder (an exact radial quadrature of the angular average on the
disk, a Gaussian tail term on the plane).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaincc

from .errors import (
    DomainError,
    InconclusiveError,
    NumericError,
    ParameterError,
)
from .numerics import (
    _leggauss_on,
    build_annulus_grid,
    build_circle_grid,
    build_disk_grid,
    build_interval_grid,
)
from .spaces import (
    FOCK_TRUNCATION_RADIUS,
    SpaceSpec,
    basis_matrix,
    space_norm,
)

__all__ = [
    "FrameSpec",
    "Exhaustion",
    "TailProfile",
    "LocalizationWeightSpec",
    "VerdictResult",
    "frame_coeff",
    "parseval_defect",
    "tail_mass",
    "family_tail_profile",
    "compactness_verdict",
    "mazur_form",
    "frame_localization_check",
    "umbrella_capacity",
]

_FRAME_KINDS = ("bergman", "fock", "hardy", "paley_wiener")


@dataclass(frozen=True)
class FrameSpec:
    """A continuous Parseval frame of normalized kernels over (X, mu)."""

    space: SpaceSpec
    boundary_radius: float = 0.999  # truncation of the disk index grid
    n_radial: int = 256
    n_angular: int = 512
    line_halfwidth: float = 60.0    # window of the line index grid

    def __post_init__(self):
        if self.space.kind not in _FRAME_KINDS:
            raise ParameterError(
                f"no kernel frame for space kind {self.space.kind!r}"
            )
        if not 0.0 < self.boundary_radius < 1.0:
            raise ParameterError("boundary_radius must lie in (0, 1)")

    @property
    def kind(self):
        return self.space.kind


@dataclass(frozen=True)
class Exhaustion:
    """Strictly nested level regions filling the index domain."""

    schedule_kind: str = "euclidean_radius"
    radii: tuple = ()

    def __post_init__(self):
        if self.schedule_kind not in ("euclidean_radius", "hyperbolic_radius", "box"):
            raise ParameterError(f"unknown schedule {self.schedule_kind!r}")
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise ParameterError("an exhaustion needs at least one level")
        if any(r <= 0 for r in radii):
            raise ParameterError("exhaustion radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ParameterError("exhaustion radii must be strictly increasing")
        object.__setattr__(self, "radii", radii)

    @property
    def depth(self):
        return len(self.radii)

    def euclidean_radius(self, level):
        """Euclidean description of level n (1-based) on the disk."""
        r = self.radii[level - 1]
        if self.schedule_kind == "hyperbolic_radius":
            return math.tanh(r)
        return r

    @staticmethod
    def ball_default(depth):
        """R_n = 1 - 2^-n, the default disk schedule."""
        if depth < 1:
            raise ParameterError("depth must be at least 1")
        return Exhaustion("euclidean_radius", tuple(1.0 - 2.0 ** -n for n in range(1, depth + 1)))

    @staticmethod
    def plane_default(depth):
        """R_n = n on the plane or the line."""
        if depth < 1:
            raise ParameterError("depth must be at least 1")
        return Exhaustion("euclidean_radius", tuple(float(n) for n in range(1, depth + 1)))


@dataclass(frozen=True)
class TailProfile:
    """Per-level suprema of tail masses over a family."""

    values: tuple
    radii: tuple
    family_size: int
    grid_id: str
    p: float = 2.0

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(v < -1e-12 for v in vals):
            raise NumericError("tail masses must be nonnegative")
        scale = max(max(vals, default=0.0), 1e-30)
        for a, b in zip(vals, vals[1:]):
            if b > a + 1e-9 * scale:
                raise NumericError("tail profile must be nonincreasing across levels")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))

    @property
    def depth(self):
        return len(self.values)


@dataclass(frozen=True)
class LocalizationWeightSpec:
    """Weight, sampled centers and radii for frame localization checks."""

    centers: tuple
    radii: tuple
    weight: Optional[Callable] = None  # strictly positive; default w == 1

    def __post_init__(self):
        if len(self.centers) == 0 or len(self.radii) == 0:
            raise ParameterError("need at least one center and one radius")
        object.__setattr__(self, "centers", tuple(complex(c) for c in self.centers))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))


@dataclass(frozen=True)
class VerdictResult:
    verdict: str                 # "precompact_evidence" or "not_decayed"
    level_reached: Optional[int]


# ---------------------------------------------------------------------------
# index grids and measures
# ---------------------------------------------------------------------------

def _invariant_disk_grid(n_radial, n_angular, radius):
    """Hyperbolic-measure disk grid, graded when plain Gauss-Legendre
    cannot resolve the density pole just outside the radius."""
    x = 2.0 / radius - 1.0
    rho = x + math.sqrt(max(x * x - 1.0, 0.0))
    plain_ok = 2.0 * n_radial * math.log(rho) >= 32.0
    return build_disk_grid(
        n_radial, n_angular, radius, measure="hyperbolic", graded=not plain_ok
    )


def index_grid(frame, resolution=1):
    """Quadrature grid for the frame's index domain (truncated)."""
    kind = frame.kind
    n_r = frame.n_radial * resolution
    n_a = frame.n_angular * resolution
    if kind == "bergman":
        return _invariant_disk_grid(n_r, n_a, frame.boundary_radius)
    if kind == "fock":
        return build_disk_grid(n_r, n_a, FOCK_TRUNCATION_RADIUS, measure="lebesgue")
    if kind == "hardy":
        return build_circle_grid(8 * n_a * resolution)
    if kind == "paley_wiener":
        w = frame.line_halfwidth
        return build_interval_grid(-w, w, 8 * n_r)
    raise ParameterError(f"no index grid for {kind!r}")


def _mu_density(frame, nodes):
    """Density of the frame index measure against the grid measure."""
    kind = frame.kind
    if kind == "fock":
        return np.full(np.shape(nodes), frame.space.fock_alpha / np.pi)
    if kind == "paley_wiener":
        return np.full(np.shape(nodes), 2.0 * frame.space.band_halfwidth)
    return np.ones(np.shape(nodes))


def _coeff_scale(frame, nodes, p=2.0):
    """Scalar field s with <f, analysis kernel at x> = s(x) f(x)."""
    kind = frame.kind
    if kind == "bergman":
        n1 = frame.space.dim + 1
        return (1.0 - np.abs(nodes) ** 2) ** (n1 / p)
    if p != 2.0:
        raise ParameterError("p-frames are provided on the Bergman index domain")
    if kind == "fock":
        al = frame.space.fock_alpha
        return math.sqrt(np.pi / al) * np.exp(-al * np.abs(nodes) ** 2 / 2.0)
    if kind == "hardy":
        return np.ones(np.shape(nodes))
    if kind == "paley_wiener":
        return np.full(np.shape(nodes), 1.0 / math.sqrt(2.0 * frame.space.band_halfwidth))
    raise ParameterError(f"no coefficient map for {kind!r}")


def _coeff_field(frame, f, nodes, p=2.0):
    """Frame coefficients of f at an array of index nodes."""
    scale = _coeff_scale(frame, nodes, p)
    if f.coeffs is not None:
        values = f.evaluate(frame.space, nodes)
    else:
        values = np.asarray(f.sampler(nodes), dtype=complex)
    return scale * values


def frame_coeff(frame, f, x, p=2.0):
    """Pairing of f with the analysis kernel at one index point."""
    kind = frame.kind
    x_arr = np.asarray(x)
    if kind == "bergman" and np.any(np.abs(x_arr) >= 1.0):
        raise DomainError("Bergman frame index points lie inside the unit disk")
    if kind == "hardy" and not np.allclose(np.abs(x_arr), 1.0, atol=1e-9):
        raise DomainError("Hardy frame index points lie on the unit circle")
    value = _coeff_field(frame, f, np.atleast_1d(np.asarray(x, dtype=complex)), p)
    return complex(value[0])


# ---------------------------------------------------------------------------
# tail masses
# ---------------------------------------------------------------------------

def _disk_outer_remainder(frame, f, r_outer, p):
    """|f|^p v-mass of the annulus [r_outer, 1): exact radial quadrature of
    the angular average (equals the coefficient tail for p = 2)."""
    deg = f.degree if f.degree is not None else 64
    n_ang = max(4 * (deg + 2), 64)
    theta = 2.0 * np.pi * np.arange(n_ang) / n_ang
    r, wr = _leggauss_on(r_outer, 1.0, 64)
    nodes = r[:, None] * np.exp(1j * theta)[None, :]
    values = f.evaluate(frame.space, nodes.ravel()).reshape(nodes.shape)
    angular_mean = np.mean(np.abs(values) ** p, axis=1)
    return float(np.sum(wr * 2.0 * r * angular_mean))


def _fock_outer_remainder(frame, f, radius=FOCK_TRUNCATION_RADIUS):
    """Gaussian tail of the squared coefficients beyond the given radius."""
    if f.coeffs is None:
        return 0.0  # sampler tails beyond the truncation radius are dropped
    al = frame.space.fock_alpha
    j = np.arange(f.coeffs.shape[0])
    return float(
        np.sum(np.abs(f.coeffs) ** 2 * gammaincc(j + 1, al * radius**2))
    )


def _bergman_tail(frame, f, radius, p):
    r_outer = 1.0 - (1.0 - radius) / 8.0
    grid = build_annulus_grid(
        radius, r_outer, frame.n_radial, frame.n_angular, measure="hyperbolic"
    )
    coeffs = _coeff_field(frame, f, grid.nodes, p)
    head = float(np.sum(grid.weights * np.abs(coeffs) ** p))
    return head + _disk_outer_remainder(frame, f, r_outer, p)


def _fock_tail(frame, f, radius):
    R = FOCK_TRUNCATION_RADIUS
    if radius >= R:
        return _fock_outer_remainder(frame, f, radius)
    grid = build_annulus_grid(
        radius, R, frame.n_radial, frame.n_angular, measure="lebesgue"
    )
    coeffs = _coeff_field(frame, f, grid.nodes)
    dens = _mu_density(frame, grid.nodes)
    head = float(np.sum(grid.weights * dens * np.abs(coeffs) ** 2))
    return head + _fock_outer_remainder(frame, f)


def _hardy_tail(frame, f, radius):
    # exhaustion by symmetric arcs {|arg z| <= pi * radius}, radius in (0, 1)
    grid = index_grid(frame)
    angles = np.angle(grid.nodes)
    outside = np.abs(angles) > np.pi * min(radius, 1.0)
    coeffs = _coeff_field(frame, f, grid.nodes[outside])
    return float(np.sum(grid.weights[outside] * np.abs(coeffs) ** 2))


def _pw_tail(frame, f, radius):
    grid = index_grid(frame)
    x = np.real(grid.nodes)
    outside = np.abs(x) > radius
    coeffs = _coeff_field(frame, f, grid.nodes[outside])
    dens = _mu_density(frame, grid.nodes[outside])
    return float(np.sum(grid.weights[outside] * dens * np.abs(coeffs) ** 2))


def tail_mass(frame, f, exhaustion, level, p=2.0):
    """Mass of |<f, k_x>|^p outside exhaustion level n (1-based)."""
    if not 1 <= level <= exhaustion.depth:
        raise ParameterError("level must lie within the exhaustion schedule")
    kind = frame.kind
    if kind == "bergman":
        radius = exhaustion.euclidean_radius(level)
        if radius >= 1.0:
            raise ParameterError("disk exhaustion radii must stay below 1")
        return _bergman_tail(frame, f, radius, p)
    radius = exhaustion.radii[level - 1]
    if kind == "fock":
        if exhaustion.schedule_kind == "box" and radius > FOCK_TRUNCATION_RADIUS / math.sqrt(2.0):
            raise ParameterError("box levels must stay inside the plane truncation")
        if exhaustion.schedule_kind == "box":
            grid = index_grid(frame)
            a, b = np.real(grid.nodes), np.imag(grid.nodes)
            outside = (np.abs(a) > radius) | (np.abs(b) > radius)
            coeffs = _coeff_field(frame, f, grid.nodes[outside])
            dens = _mu_density(frame, grid.nodes[outside])
            head = float(np.sum(grid.weights[outside] * dens * np.abs(coeffs) ** 2))
            return head + _fock_outer_remainder(frame, f)
        return _fock_tail(frame, f, radius)
    if kind == "hardy":
        return _hardy_tail(frame, f, radius)
    if kind == "paley_wiener":
        return _pw_tail(frame, f, radius)
    raise ParameterError(f"no tail functional for {kind!r}")


def parseval_defect(frame, f, p=2.0):
    """|integral of |<f,k_x>|^p d mu  -  ||f||^p| on the index domain.

    The index integral is the truncated grid quadrature plus the outer
    remainder; for p = 2 and coefficient representations the norm side is
    the exact Euclidean norm of the coefficients.
    """
    kind = frame.kind
    grid = index_grid(frame)
    coeffs = _coeff_field(frame, f, grid.nodes, p)
    dens = _mu_density(frame, grid.nodes)
    head = float(np.sum(grid.weights * dens * np.abs(coeffs) ** p))
    if kind == "bergman":
        head += _disk_outer_remainder(frame, f, frame.boundary_radius, p)
    elif kind == "fock":
        head += _fock_outer_remainder(frame, f)
    if f.coeffs is not None and p == 2.0:
        norm_p = float(np.sum(np.abs(f.coeffs) ** 2))
    else:
        norm_p = space_norm(frame.space, f) ** p
    return abs(head - norm_p)


def family_tail_profile(frame, family, exhaustion, depth=None, p=2.0):
    """Level-wise supremum of tail masses over a finite family."""
    family = list(family)
    if not family:
        raise ParameterError("the family must be nonempty")
    if depth is None:
        depth = exhaustion.depth
    if not 1 <= depth <= exhaustion.depth:
        raise ParameterError("depth must lie within the exhaustion schedule")
    values = [
        max(tail_mass(frame, f, exhaustion, n, p) for f in family)
        for n in range(1, depth + 1)
    ]
    return TailProfile(
        values=tuple(values),
        radii=exhaustion.radii[:depth],
        family_size=len(family),
        grid_id=index_grid(frame).grid_id,
        p=p,
    )


def compactness_verdict(profile, eps):
    """First level at which the profile dips to eps, if any."""
    if profile.depth == 0:
        raise ParameterError("the profile must be nonempty")
    if eps < 0:
        raise ParameterError("eps must be nonnegative")
    for n, q in enumerate(profile.values, start=1):
        if q <= eps:
            return VerdictResult("precompact_evidence", n)
    return VerdictResult("not_decayed", None)


def mazur_form(frame, f, exhaustion, level):
    """Quadratic form <T_F f - f, f> of the truncated frame operator.

    T_F f is assembled by quadrature over the level region as a coefficient
    vector in the reference basis and then paired against f; up to
    quadrature error this equals minus the level's tail mass.
    """
    if f.coeffs is None:
        raise ParameterError("the quadratic form needs a coefficient representation")
    if not 1 <= level <= exhaustion.depth:
        raise ParameterError("level must lie within the exhaustion schedule")
    kind = frame.kind
    if kind == "bergman":
        radius = exhaustion.euclidean_radius(level)
        grid = _invariant_disk_grid(frame.n_radial, frame.n_angular, radius)
    elif kind == "fock":
        radius = min(exhaustion.radii[level - 1], FOCK_TRUNCATION_RADIUS)
        grid = build_disk_grid(
            frame.n_radial, frame.n_angular, radius, measure="lebesgue"
        )
    elif kind == "paley_wiener":
        radius = min(exhaustion.radii[level - 1], frame.line_halfwidth)
        grid = build_interval_grid(-radius, radius, 8 * frame.n_radial)
    else:
        raise ParameterError(f"no truncated frame operator for {kind!r}")
    nodes, weights = grid.nodes, grid.weights
    dens = _mu_density(frame, nodes)
    s = _coeff_scale(frame, nodes)
    deg = f.coeffs.shape[0] - 1
    basis = basis_matrix(frame.space, deg, nodes)
    coeff_f = s * (basis @ f.coeffs)
    projected = basis.conj().T @ (weights * dens * s * coeff_f)
    norm2 = float(np.sum(np.abs(f.coeffs) ** 2))
    return complex(np.vdot(f.coeffs, projected) - norm2)


# ---------------------------------------------------------------------------
# localization hypotheses and the capacity certificate
# ---------------------------------------------------------------------------

def _frame_vector_inner(frame, x, y):
    """<k_x, k_y> in closed form (vectorized over x)."""
    kind = frame.kind
    x = np.asarray(x, dtype=complex)
    if kind == "bergman":
        n1 = frame.space.dim + 1
        num = ((1.0 - np.abs(x) ** 2) * (1.0 - np.abs(y) ** 2)) ** (n1 / 2.0)
        return num / (1.0 - y * np.conj(x)) ** n1
    if kind == "fock":
        al = frame.space.fock_alpha
        return np.exp(
            al * y * np.conj(x) - al * (np.abs(x) ** 2 + np.abs(y) ** 2) / 2.0
        )
    raise ParameterError("localization checks cover the Bergman and Fock frames")


def _index_distance(frame, x, y):
    if frame.kind == "fock":
        return np.abs(np.asarray(x) - y)
    q = np.abs((np.asarray(x) - y) / (1.0 - np.conj(y) * np.asarray(x)))
    return np.arctanh(np.minimum(q, 1.0 - 1e-16))


def frame_localization_check(frame, loc_spec, resolution=1):
    """Numerical values of the weighted-kernel localization hypotheses.

    Reports, over the sampled centers y: the weighted kernel integral
    sup_y w(y)^-1 int |<k_x,k_y>| w(x) dmu(x); the same restricted to the
    complement of the metric ball B(y, R) per radius; and the largest
    kernel pairing seen across sampled pairs at distance >= R.
    """
    grid = index_grid(frame, resolution)
    nodes, weights = grid.nodes, grid.weights
    dens = _mu_density(frame, nodes)
    w_fun = loc_spec.weight if loc_spec.weight is not None else (lambda z: np.ones(np.shape(z)))
    w_nodes = np.asarray(w_fun(nodes), dtype=float)
    if np.any(w_nodes <= 0):
        raise ParameterError("the localization weight must be strictly positive")
    sup_integral = 0.0
    restricted = {r: 0.0 for r in loc_spec.radii}
    pair_decay = {r: 0.0 for r in loc_spec.radii}
    for y in loc_spec.centers:
        wy = float(np.asarray(w_fun(np.array([y])), dtype=float)[0])
        pairing = np.abs(_frame_vector_inner(frame, nodes, y))
        integrand = weights * dens * pairing * w_nodes / wy
        sup_integral = max(sup_integral, float(np.sum(integrand)))
        dist = _index_distance(frame, nodes, y)
        for r in loc_spec.radii:
            far = dist >= r
            restricted[r] = max(restricted[r], float(np.sum(integrand[far])))
            if np.any(far):
                pair_decay[r] = max(pair_decay[r], float(np.max(pairing[far])))
    return {
        "sup_weighted_integral": sup_integral,
        "restricted_integrals": restricted,
        "pair_decay": pair_decay,
        "grid_id": grid.grid_id,
        "centers": list(loc_spec.centers),
    }


def umbrella_capacity(frame, umbrella, delta, exhaustion, eps_net):
    """Upper bound on the size of a delta-separated dominated family.

    Any family whose frame coefficients are pointwise dominated by the
    square-integrable majorant has its discretized coefficient vectors
    inside a product of disks of radii umbrella(x_i) * sqrt(weight_i); an
    axis-aligned eps_net-net of that body is counted once the majorant's
    tail mass falls below (delta/4)^2.  The count is a certificate, not a
    canonical capacity.
    """
    if delta <= 0:
        raise ParameterError("delta must be positive")
    if not 0.0 < eps_net < delta / 2.0:
        raise ParameterError("eps_net must lie in (0, delta/2)")
    if frame.kind == "bergman":
        # graded radial panels keep the invariant measure resolvable out to
        # 1 - 1e-5, deep enough for the default schedules' tail thresholds
        grid = build_disk_grid(64, 256, 1.0 - 1e-5, measure="hyperbolic", graded=True)
    elif frame.kind == "fock":
        grid = build_disk_grid(128, 256, FOCK_TRUNCATION_RADIUS, measure="lebesgue")
    else:
        raise ParameterError("capacity bounds cover the Bergman and Fock frames")
    nodes = grid.nodes
    u = np.asarray(umbrella(nodes), dtype=float)
    if np.any(~np.isfinite(u)) or np.any(u < 0):
        raise NumericError("the umbrella must be finite and nonnegative")
    mu_w = grid.weights * _mu_density(frame, nodes)
    total = float(np.sum(mu_w * u * u))
    if not math.isfinite(total):
        raise NumericError("the umbrella is not square-integrable on the index grid")
    threshold = (delta / 4.0) ** 2
    chosen = None
    for n in range(1, exhaustion.depth + 1):
        if frame.kind == "bergman":
            radius = exhaustion.euclidean_radius(n)
            inside = np.abs(nodes) <= radius
        else:
            inside = np.abs(nodes) <= exhaustion.radii[n - 1]
        tail = float(np.sum(mu_w[~inside] * u[~inside] ** 2))
        if tail < threshold:
            chosen = (n, inside)
            break
    if chosen is None:
        raise InconclusiveError(
            "the umbrella tail never fell below (delta/4)^2 within the schedule"
        )
    _, inside = chosen
    rho = u[inside] * np.sqrt(mu_w[inside])
    rho = rho[rho > 0.0]
    if rho.size == 0:
        return 1
    rho_norm = float(np.sqrt(np.sum(rho * rho)))
    m = math.ceil(math.sqrt(2.0) * rho_norm / eps_net)
    per_cell = (m + 1) ** 2
    return per_cell ** int(rho.size)
