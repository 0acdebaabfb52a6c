"""Finite power-series test functions on the unit disk.

Every function is a polynomial p(z) = sum c_j z^j held as a complex numpy
array; members of P[A, B] are built as q o w for sampled Schwarz functions w,
and starlike functions f come from zf'/f = p by coefficient matching.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from geometry import JanowskiPair, PoleError, region_margin

logger = logging.getLogger(__name__)

SUP_GRID = 4096
SCHWARZ_TARGET = 0.999
DEFAULT_GRID = 2048
DEFAULT_RADIUS = 0.999
TAIL_WARNING = 1e-8


def _as_coefficients(values):
    coefficients = np.atleast_1d(np.asarray(values, dtype=complex)).copy()
    if coefficients.ndim != 1 or coefficients.size == 0:
        raise ValueError("a power series needs a non-empty 1-d coefficient list")
    return coefficients


@dataclass(frozen=True, eq=False)
class AnalyticFn:
    coefficients: np.ndarray
    leading_order: int = 1

    def __post_init__(self):
        coefficients = _as_coefficients(self.coefficients)
        if self.leading_order < 1:
            raise ValueError(f"leading order must be >= 1, got {self.leading_order}")
        if np.any(coefficients[1:self.leading_order] != 0):
            raise ValueError(
                f"coefficients 1..{self.leading_order - 1} must vanish for leading order {self.leading_order}"
            )
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def degree(self):
        return self.coefficients.size - 1

    def __call__(self, z):
        return P.polyval(z, self.coefficients)

    def to_json(self):
        return [[float(c.real), float(c.imag)] for c in self.coefficients]

    @classmethod
    def from_json(cls, pairs, leading_order=None):
        coefficients = np.array([complex(re, im) for re, im in pairs], dtype=complex)
        if leading_order is None:
            nonzero = np.flatnonzero(coefficients[1:])
            leading_order = int(nonzero[0]) + 1 if nonzero.size else 1
        return cls(coefficients, leading_order)


@dataclass(frozen=True, eq=False)
class SchwarzFn:
    """Polynomial self-map of the disk with w(0) = 0 and a sampled sup bound."""

    coefficients: np.ndarray
    sup_bound: float
    leading_order: int = 1

    def __post_init__(self):
        coefficients = _as_coefficients(self.coefficients)
        if coefficients[0] != 0:
            raise ValueError("a Schwarz function must vanish at the origin")
        if self.sup_bound > 1.0:
            raise ValueError(f"Schwarz sup bound must be <= 1, got {self.sup_bound}")
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def from_coefficients(cls, coefficients, leading_order=1):
        coefficients = _as_coefficients(coefficients)
        sup = boundary_sup(coefficients)
        if sup > 1.0 + 1e-12:
            raise ValueError(f"sup of |w| on the circle is {sup}, not a Schwarz function")
        return cls(coefficients, min(sup, 1.0), leading_order)

    @property
    def degree(self):
        return self.coefficients.size - 1

    def __call__(self, z):
        return P.polyval(z, self.coefficients)


def disk_circle(grid=DEFAULT_GRID, radius=DEFAULT_RADIUS):
    return radius * np.exp(2j * math.pi * np.arange(grid) / grid)


def boundary_sup(coefficients, points=SUP_GRID):
    return float(np.max(np.abs(P.polyval(disk_circle(points, 1.0), coefficients))))


def eval_with_derivative(p: AnalyticFn, z):
    """Returns (p(z), z p'(z)), both by Horner evaluation."""
    c = p.coefficients
    return P.polyval(z, c), P.polyval(z, np.arange(c.size) * c)


def series_divide(numerator, denominator, order):
    """Coefficients 0..order of numerator/denominator as power series."""
    numerator = _as_coefficients(numerator)
    denominator = _as_coefficients(denominator)
    if denominator[0] == 0:
        raise PoleError("series division by a series vanishing at the origin")
    out = np.zeros(order + 1, dtype=complex)
    for n in range(order + 1):
        acc = numerator[n] if n < numerator.size else 0
        top = min(n, denominator.size - 1)
        if top:
            acc -= np.dot(denominator[1:top + 1], out[n - top:n][::-1])
        out[n] = acc / denominator[0]
    return out


def sample_schwarz(degree, leading_order=1, seed=0):
    if leading_order < 1 or degree < leading_order:
        raise ValueError(f"need 1 <= leading_order <= degree, got {leading_order}, {degree}")
    rng = np.random.default_rng(seed)
    count = degree - leading_order + 1
    radius = np.sqrt(rng.uniform(0.0, 1.0, count))
    angle = rng.uniform(0.0, 2 * math.pi, count)
    coefficients = np.zeros(degree + 1, dtype=complex)
    coefficients[leading_order:] = radius * np.exp(1j * angle)
    sup = boundary_sup(coefficients)
    if sup > 0:
        coefficients *= SCHWARZ_TARGET / sup
        sup = boundary_sup(coefficients)
    return SchwarzFn(coefficients, sup, leading_order)


def _tail_estimate(omega: SchwarzFn, pair: JanowskiPair, truncation):
    b, s = abs(pair.lower), omega.sup_bound
    if b == 0 or s == 0 or omega.degree == 0:
        return 0.0
    if b * s >= 1:
        return math.inf
    # powers w^j with j*deg <= truncation are kept whole
    first_cut = truncation // omega.degree + 1
    return (pair.upper - pair.lower) * b ** (first_cut - 1) * s**first_cut / (1 - b * s)


def compose_janowski(omega: SchwarzFn, pair: JanowskiPair, truncation, warn=True):
    """Coefficients of (1 + A w)/(1 + B w) up to index `truncation`."""
    if truncation < omega.degree:
        raise ValueError(f"truncation {truncation} is below the Schwarz degree {omega.degree}")
    w = np.zeros(truncation + 1, dtype=complex)
    w[:omega.coefficients.size] = omega.coefficients
    numerator = pair.upper * w
    numerator[0] = 1
    denominator = pair.lower * w
    denominator[0] = 1
    tail = _tail_estimate(omega, pair, truncation)
    if warn and tail > TAIL_WARNING:
        logger.warning(f"Truncation {truncation} leaves an estimated tail of {tail:.3g} for pair {pair.as_tuple()}")
    return AnalyticFn(series_divide(numerator, denominator, truncation), omega.leading_order)


def sample_member(pair: JanowskiPair, degree, truncation, seed=0, leading_order=1, warn=True):
    omega = sample_schwarz(degree, leading_order, seed)
    return compose_janowski(omega, pair, truncation, warn=warn)


def membership_witness(p: AnalyticFn, pair: JanowskiPair, grid=DEFAULT_GRID, radius=DEFAULT_RADIUS):
    if grid < 64:
        raise ValueError(f"membership grid needs at least 64 points, got {grid}")
    if not 0 < radius < 1:
        raise ValueError(f"membership radius must lie in (0, 1), got {radius}")
    z = disk_circle(grid, radius)
    margin, index = region_margin(p(z), pair)
    return margin, complex(z[index])


def membership_margin(p: AnalyticFn, pair: JanowskiPair, grid=DEFAULT_GRID, radius=DEFAULT_RADIUS):
    """1 - max chi(p(z)) over the circle |z| = radius; positive means member."""
    return membership_witness(p, pair, grid, radius)[0]


def winding_number(values):
    """Turns of the closed sampled curve `values` around the origin."""
    values = np.asarray(values, dtype=complex)
    steps = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(steps)) / (2 * math.pi)))


def integrate_to_starlike(p: AnalyticFn, truncation):
    """Series of f = z + a_2 z^2 + ... with z f'/f = p, up to z^truncation."""
    c = p.coefficients
    if abs(c[0] - 1) > 1e-12:
        raise ValueError(f"integrate_to_starlike requires p(0) = 1, got {c[0]}")
    a = np.zeros(truncation + 1, dtype=complex)
    a[1] = 1
    for n in range(2, truncation + 1):
        # (n - 1) a_n = sum_{j=1}^{n-1} c_j a_{n-j}
        top = min(n - 1, c.size - 1)
        a[n] = np.dot(c[1:top + 1], a[n - top:n][::-1]) / (n - 1)
    return AnalyticFn(a, 1)


def starlike_quotient_series(f: AnalyticFn, order):
    a = f.coefficients
    if a[0] != 0:
        raise ValueError("a normalised starlike series must vanish at the origin")
    if a.size < 2 or a[1] == 0:
        raise PoleError("z f'/f needs a non-zero first coefficient")
    j = np.arange(1, a.size)
    return AnalyticFn(series_divide(j * a[1:], a[1:], order), 1)
