import numpy as np
import pytest

from kolmo_lab import FunctionRep


def unit_vector(j):
    """FunctionRep of the j-th reference basis element."""
    c = np.zeros(j + 1, dtype=complex)
    c[j] = 1.0
    return FunctionRep(coeffs=c)


def random_poly(rng, deg):
    return FunctionRep(coeffs=rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))


def random_bounded_symbol(rng, max_power=2):
    """Random real-valued polynomial in (z, conj(z)) with unit-scale sup."""
    coeffs = {}
    for a in range(max_power + 1):
        for b in range(a, max_power + 1):
            v = rng.uniform(-1.0, 1.0)
            coeffs[(a, b)] = v
            coeffs[(b, a)] = v  # conjugate-symmetric -> real-valued symbol

    def u(w):
        out = np.zeros(np.shape(w), dtype=complex)
        for (a, b), v in coeffs.items():
            out = out + v * np.asarray(w) ** a * np.conj(np.asarray(w)) ** b
        return out

    ring = 0.999 * np.exp(2j * np.pi * np.arange(256) / 256)
    sup = float(np.max(np.abs(u(ring))))
    scale = 1.0 / max(sup, 1.0)
    l1 = scale * sum(abs(v) for v in coeffs.values())
    return (lambda w: scale * u(w)), l1


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
